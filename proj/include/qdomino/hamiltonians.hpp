#pragma once

#include "qdomino/couplings.hpp"
#include "qdomino/error.hpp"
#include "qdomino/operators.hpp"

#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qdomino {

inline constexpr double kGammaProton = 42.58;   // 1H, MHz/T
inline constexpr double kGammaFluorine = 40.08; // 19F, MHz/T

/// Geometry and nuclear species of the spin system.
struct SystemSpec {
  int n = 7;
  Geometry geometry = Geometry::chain;
  std::vector<std::string> species; // one label per site
  std::map<std::string, double> gammas;

  static SystemSpec uniform(int n, Geometry g) {
    return {n, g, std::vector<std::string>(n, "A"), {{"A", 1.0}}};
  }

  /// Species repeated cyclically from `pattern` (one character per label),
  /// e.g. "HF" gives H,F,H,F,... with the 1H and 19F gyromagnetic ratios.
  static SystemSpec patterned(int n, Geometry g, const std::string &pattern,
                              std::map<std::string, double> gammas = {
                                  {"A", 1.0},
                                  {"H", kGammaProton},
                                  {"F", kGammaFluorine}}) {
    if (pattern.empty()) throw InvalidArgument("species pattern is empty");
    SystemSpec s{n, g, {}, {}};
    for (int k = 0; k < n; ++k)
      s.species.emplace_back(1, pattern[static_cast<size_t>(k) % pattern.size()]);
    // Only the labels that occur are kept, so described configs stay minimal.
    for (const auto &label : s.species)
      if (auto it = gammas.find(label); it != gammas.end()) s.gammas.insert(*it);
    return s;
  }

  void validate() const {
    check_spin_count(n);
    if (geometry == Geometry::ring && n < 3)
      throw InvalidArgument("a ring needs at least 3 spins");
    if (species.size() != static_cast<size_t>(n))
      throw InvalidArgument("species list has " + std::to_string(species.size()) +
                            " labels for " + std::to_string(n) + " spins");
    for (const auto &label : species)
      if (!gammas.contains(label))
        throw InvalidArgument("missing gamma for species '" + label + "'");
  }

  double gamma(int site) const { return gammas.at(species.at(site - 1)); }

  bool single_species() const {
    return std::set<std::string>(species.begin(), species.end()).size() <= 1;
  }

  /// Adjacent pairs (including the closing pair of a ring) that carry the same
  /// label in a multi-species system, e.g. sites 7 and 1 of an HF ring of 7.
  std::vector<std::pair<int, int>> like_neighbor_defects() const {
    std::vector<std::pair<int, int>> out;
    if (single_species()) return out;
    const int last = geometry == Geometry::ring ? n : n - 1;
    for (int k = 1; k <= last; ++k) {
      const int next = wrap_site(n, k + 1);
      if (species[k - 1] == species[next - 1]) out.emplace_back(k, next);
    }
    return out;
  }
};

enum class ModelKind {
  lab_frame,
  rotating_zz,
  effective_nn,
  effective_chain,
  effective_ring,
  secular_dipolar,
  alternating_hetero,
};

/// as_printed reproduces the end and ring corrections exactly as typeset in
/// the source equations; normalized repairs their projector factors so they
/// vanish on aligned neighbors.
enum class Variant { normalized, as_printed };

inline const char *model_name(ModelKind m) {
  switch (m) {
  case ModelKind::lab_frame: return "lab_frame";
  case ModelKind::rotating_zz: return "rotating_zz";
  case ModelKind::effective_nn: return "effective_nn";
  case ModelKind::effective_chain: return "effective_chain";
  case ModelKind::effective_ring: return "effective_ring";
  case ModelKind::secular_dipolar: return "secular_dipolar";
  case ModelKind::alternating_hetero: return "alternating_hetero";
  }
  return "?";
}

inline const char *variant_name(Variant v) {
  return v == Variant::normalized ? "normalized" : "as_printed";
}

/// Hamiltonian model and its parameters. Energies are in units of d1.
struct ModelSpec {
  ModelKind model = ModelKind::rotating_zz;
  double omega1 = 0.15;
  double d1 = 1.0;
  int m_neighbors = 1;
  double omega0 = 0.0;     // lab_frame only
  double j_coupling = 1.0; // lab_frame only
  Variant variant = Variant::normalized;

  void validate(const SystemSpec &sys) const {
    sys.validate();
    if (!(omega1 >= 0.0)) throw InvalidArgument("omega1 must be >= 0");
    switch (model) {
    case ModelKind::lab_frame:
      if (sys.geometry != Geometry::chain)
        throw InvalidArgument("lab_frame requires chain geometry");
      if (!(omega0 > 0.0)) throw InvalidArgument("lab_frame requires omega0 > 0");
      if (m_neighbors != 1)
        throw InvalidArgument("lab_frame is nearest-neighbor only (m_neighbors = 1)");
      break;
    case ModelKind::rotating_zz:
    case ModelKind::effective_ring:
      if (model == ModelKind::effective_ring && sys.geometry != Geometry::ring)
        throw InvalidArgument("effective_ring requires ring geometry");
      if (m_neighbors < 1 || m_neighbors > max_neighbors(sys.geometry, sys.n))
        throw InvalidArgument("m_neighbors must be in 1.." +
                              std::to_string(max_neighbors(sys.geometry, sys.n)) +
                              " for a " + geometry_name(sys.geometry) + " of " +
                              std::to_string(sys.n) + " spins");
      break;
    case ModelKind::effective_nn:
      if (sys.geometry != Geometry::chain)
        throw InvalidArgument("effective_nn requires chain geometry (use effective_ring)");
      break;
    case ModelKind::effective_chain:
      if (sys.geometry != Geometry::chain)
        throw InvalidArgument("effective_chain requires chain geometry");
      if (m_neighbors != 1 && m_neighbors != 2)
        throw InvalidArgument("m_neighbors must be 1 or 2");
      if (sys.n < 2 * m_neighbors)
        throw InvalidArgument("effective_chain with m_neighbors = " +
                              std::to_string(m_neighbors) + " needs at least " +
                              std::to_string(2 * m_neighbors) + " spins");
      break;
    case ModelKind::secular_dipolar:
      if (!sys.single_species())
        throw InvalidArgument("secular_dipolar requires a single species");
      break;
    case ModelKind::alternating_hetero:
      if (sys.single_species())
        throw InvalidArgument("alternating_hetero requires at least two species");
      break;
    }
  }
};

namespace detail {

inline void expect_model(const ModelSpec &m, ModelKind k) {
  if (m.model != k)
    throw InvalidArgument(std::string("model is ") + model_name(m.model) +
                          ", builder expects " + model_name(k));
}

inline Operator transverse_field(int n, double omega1) {
  Operator h = Operator::zero(n);
  if (omega1 == 0.0) return h;
  for (int k = 1; k <= n; ++k) h += product_operator(n, {{k, SpinAxis::x}}, omega1);
  return h;
}

inline Diagonal zz_diagonal(const SystemSpec &sys, const CouplingTable &t) {
  Diagonal d = Diagonal::Zero(hilbert_dim(sys.n));
  for (const auto &p : t.pairs)
    d += p.d * z_values(sys.n, p.first) * z_values(sys.n, p.second);
  return d;
}

/// I_m^z I_n^z - (I_m^x I_n^x + I_m^y I_n^y)/2
inline Operator secular_pair(int n, int a, int b, double d) {
  return product_operator(n, {{a, SpinAxis::z}, {b, SpinAxis::z}}, d) +
         product_operator(n, {{a, SpinAxis::x}, {b, SpinAxis::x}}, -0.5 * d) +
         product_operator(n, {{a, SpinAxis::y}, {b, SpinAxis::y}}, -0.5 * d);
}

/// 1 - 4 I_a^z I_b^z: equals 0 when a and b are aligned and 2 otherwise.
inline Diagonal resonance_gate(int n, int a, int b) {
  return 1.0 - 4.0 * z_values(n, a) * z_values(n, b);
}

/// coeff * I_k^x * gate, with gate a function of I^z on sites other than k.
inline Operator gated_flip(int n, int k, double coeff, const Diagonal &gate) {
  return product_operator(n, {{k, SpinAxis::x}}, coeff).times_diagonal(gate);
}

} // namespace detail

/// omega1 sum I^x + sum_{q<=M} D_q sum I_m^z I_{m+q}^z (cyclic on a ring).
inline Operator build_rotating_zz(const SystemSpec &sys, const ModelSpec &model) {
  detail::expect_model(model, ModelKind::rotating_zz);
  model.validate(sys);
  const auto table = coupling_profile(sys.geometry, sys.n, model.d1, model.m_neighbors);
  return detail::transverse_field(sys.n, model.omega1) +
         Operator::diagonal(sys.n, detail::zz_diagonal(sys, table));
}

/// Zero-order average Hamiltonian of the driven nearest-neighbor Ising chain,
/// (omega1/2) sum_{i=2}^{N-1} I_i^x (1 - 4 I_{i-1}^z I_{i+1}^z).
inline Operator build_effective_nn(const SystemSpec &sys, const ModelSpec &model) {
  detail::expect_model(model, ModelKind::effective_nn);
  model.validate(sys);
  const int n = sys.n;
  Operator h = Operator::zero(n);
  for (int i = 2; i <= n - 1; ++i)
    h += detail::gated_flip(n, i, model.omega1 / 2, detail::resonance_gate(n, i - 1, i + 1));
  return h;
}

/// Average Hamiltonian of the M-neighbor ZZ chain (M = 1 or 2): gated interior
/// flips plus the end corrections.
inline Operator build_effective_chain(const SystemSpec &sys, const ModelSpec &model) {
  using detail::gated_flip;
  using detail::resonance_gate;
  detail::expect_model(model, ModelKind::effective_chain);
  model.validate(sys);
  const int n = sys.n;
  const int m = model.m_neighbors;
  const double w = model.omega1;
  const double d1 = model.d1;
  const bool printed = model.variant == Variant::as_printed;
  auto z = [n](int k) { return z_values(n, k); };
  const Diagonal one = Diagonal::Ones(hilbert_dim(n));

  Operator h = Operator::zero(n);
  for (int k = m + 1; k <= n - m; ++k) {
    Diagonal gate = one;
    for (int q = 1; q <= m; ++q) gate *= resonance_gate(n, k + q, k - q);
    h += gated_flip(n, k, w / 2, gate);
  }

  auto zeeman = [n](int k, double c) { return product_operator(n, {{k, SpinAxis::z}}, c); };
  if (m == 1) {
    h += zeeman(1, d1) + zeeman(n, d1);
    h += gated_flip(n, 1, w / 4, 1.0 - 2.0 * z(2));
    h += gated_flip(n, n, w / 4, printed ? Diagonal(one - z(n - 1)) : Diagonal(1.0 - 2.0 * z(n - 1)));
  } else {
    h += zeeman(1, 7 * d1 / 16) + zeeman(n, 7 * d1 / 16);
    h += zeeman(2, -d1 / 16) + zeeman(n - 1, -d1 / 16);
    h += gated_flip(n, 1, w / 4, 1.0 - 2.0 * z(2) * z(3) + z(2) - z(3));
    h += gated_flip(n, 2, w / 8, resonance_gate(n, 1, 3) * (1.0 + 2.0 * z(4)));
    const Diagonal last_gate =
        printed ? Diagonal(1.0 - 2.0 * z(n - 2) * z(n - 1) + z(n - 3) - z(n - 2))
                : Diagonal(1.0 - 2.0 * z(n - 2) * z(n - 1) + z(n - 1) - z(n - 2));
    h += gated_flip(n, n, w / 4, last_gate);
    h += gated_flip(n, n - 1, w / 8, resonance_gate(n, n - 2, n) * (1.0 + 2.0 * z(n - 3)));
  }
  return h;
}

/// Average Hamiltonian of the M-neighbor ZZ ring, cyclic indices.
inline Operator build_effective_ring(const SystemSpec &sys, const ModelSpec &model) {
  detail::expect_model(model, ModelKind::effective_ring);
  model.validate(sys);
  const int n = sys.n;
  const bool printed = model.variant == Variant::as_printed;
  Operator h = Operator::zero(n);
  for (int k = 1; k <= n; ++k) {
    Diagonal gate = Diagonal::Ones(hilbert_dim(n));
    for (int q = 1; q <= model.m_neighbors; ++q) {
      const Diagonal zz = z_values(n, wrap_site(n, k + q)) * z_values(n, wrap_site(n, k - q));
      gate *= printed ? Diagonal(1.0 - zz) : Diagonal(1.0 - 4.0 * zz);
    }
    h += detail::gated_flip(n, k, printed ? model.omega1 / 4 : model.omega1 / 2, gate);
  }
  return h;
}

/// Secular homonuclear dipolar Hamiltonian over all pairs, plus an optional
/// resonant transverse field.
inline Operator build_secular_dipolar(const SystemSpec &sys, const ModelSpec &model) {
  detail::expect_model(model, ModelKind::secular_dipolar);
  model.validate(sys);
  const auto table = coupling_profile(sys.geometry, sys.n, model.d1,
                                      max_neighbors(sys.geometry, sys.n));
  Operator h = detail::transverse_field(sys.n, model.omega1);
  for (const auto &p : table.pairs) h += detail::secular_pair(sys.n, p.first, p.second, p.d);
  return h;
}

/// Dipolar couplings for a multi-species system, all pairs, scaled so that
/// the first unlike nearest-neighbor pair couples with strength d1. The pair
/// vectors are taken perpendicular to the field.
inline CouplingTable heteronuclear_couplings(const SystemSpec &sys, double d1) {
  sys.validate();
  int ref = 0;
  for (int k = 1; k < sys.n && ref == 0; ++k)
    if (sys.species[k - 1] != sys.species[k]) ref = k;
  if (ref == 0) throw InvalidArgument("no unlike nearest-neighbor pair");
  const double perpendicular = std::numbers::pi / 2;
  const double reference =
      dipolar_coupling(sys.gamma(ref), sys.gamma(ref + 1), {1.0, perpendicular});

  CouplingTable t;
  for (int a = 1; a <= sys.n; ++a)
    for (int b = a + 1; b <= sys.n; ++b) {
      const int q = separation(sys.geometry, sys.n, a, b);
      const double r = pair_distance(sys.geometry, sys.n, q);
      const double d = dipolar_coupling(sys.gamma(a), sys.gamma(b), {r, perpendicular});
      t.pairs.push_back({a, b, q, d1 * d / reference});
    }
  return t;
}

/// Two-species chain or ring in the doubly rotating frame: unlike pairs are
/// truncated to ZZ, like pairs keep the flip-flop term.
inline Operator build_alternating_hetero(const SystemSpec &sys, const ModelSpec &model) {
  detail::expect_model(model, ModelKind::alternating_hetero);
  model.validate(sys);
  const auto table = heteronuclear_couplings(sys, model.d1);
  Operator h = detail::transverse_field(sys.n, model.omega1);
  Diagonal zz = Diagonal::Zero(hilbert_dim(sys.n));
  for (const auto &p : table.pairs) {
    if (sys.species[p.first - 1] == sys.species[p.second - 1])
      h += detail::secular_pair(sys.n, p.first, p.second, p.d);
    else
      zz += p.d * z_values(sys.n, p.first) * z_values(sys.n, p.second);
  }
  return h + Operator::diagonal(sys.n, zz);
}

/// Lab-frame driven Ising chain H(t) = (omega0/2) sum sigma^z
/// + omega1 cos(omega0 t) sum sigma^x + (J/4) sum sigma^z sigma^z,
/// split into its static part and the drive operator.
struct LabFrameHamiltonian {
  Operator static_part;
  Operator drive; // multiplied by cos(omega0 t)
  double omega0;

  Operator at(double t) const {
    return static_part + drive * complex{std::cos(omega0 * t), 0.0};
  }
};

inline LabFrameHamiltonian lab_frame_parts(const SystemSpec &sys, const ModelSpec &model) {
  detail::expect_model(model, ModelKind::lab_frame);
  model.validate(sys);
  const int n = sys.n;
  // sigma = 2 I
  Diagonal diag = model.omega0 * total_z_values(n);
  for (int i = 1; i < n; ++i)
    diag += model.j_coupling * z_values(n, i) * z_values(n, i + 1);
  return {Operator::diagonal(n, diag), detail::transverse_field(n, 2.0 * model.omega1),
          model.omega0};
}

inline Operator build_lab_frame(const SystemSpec &sys, const ModelSpec &model, double t) {
  return lab_frame_parts(sys, model).at(t);
}

/// Time-indexed Hamiltonian. carrier_frequency bounds the admissible step
/// (dt <= 2 pi / (20 carrier)); zero means no carrier.
struct TimeDependentHamiltonian {
  std::function<Operator(double)> at;
  int spins = 0;
  double carrier_frequency = 0.0;
};

inline TimeDependentHamiltonian lab_frame_source(const SystemSpec &sys, const ModelSpec &model) {
  auto parts = lab_frame_parts(sys, model);
  const double w0 = parts.omega0;
  return {[p = std::move(parts)](double t) { return p.at(t); }, sys.n, w0};
}

inline TimeDependentHamiltonian constant_source(Operator h) {
  const int n = h.spins();
  return {[h = std::move(h)](double) { return h; }, n, 0.0};
}

/// Static Hamiltonian for any time-independent model.
inline Operator build_hamiltonian(const SystemSpec &sys, const ModelSpec &model) {
  switch (model.model) {
  case ModelKind::rotating_zz: return build_rotating_zz(sys, model);
  case ModelKind::effective_nn: return build_effective_nn(sys, model);
  case ModelKind::effective_chain: return build_effective_chain(sys, model);
  case ModelKind::effective_ring: return build_effective_ring(sys, model);
  case ModelKind::secular_dipolar: return build_secular_dipolar(sys, model);
  case ModelKind::alternating_hetero: return build_alternating_hetero(sys, model);
  case ModelKind::lab_frame:
    throw InvalidArgument("lab_frame is time dependent; use lab_frame_source");
  }
  throw InvalidArgument("unknown model");
}

} // namespace qdomino
