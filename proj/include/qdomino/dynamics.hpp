#pragma once

#include "qdomino/error.hpp"
#include "qdomino/hamiltonians.hpp"
#include "qdomino/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qdomino {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Sampled polarization history. Row i of per_spin holds P_1..P_n at times[i].
struct Trajectory {
  int n = 0;
  std::vector<double> times;
  Eigen::MatrixXd per_spin;
  std::vector<double> total;
  std::vector<double> norms;    // ||psi(t)|| per sample
  std::vector<double> energies; // <psi(t)|H|psi(t)>, static evolution only
  Metadata metadata;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

struct WaveMetrics {
  std::vector<std::optional<double>> arrival; // index k-1 for site k
  double min_total = 0.0;
  double amplification = 0.0;
};

struct Polarizations {
  std::vector<double> per_site;
  double total = 0.0;
};

/// P_k = <psi|I_k^z|psi> for every site, and their sum.
inline Polarizations polarizations(const Vector &psi, int n) {
  check_spin_count(n);
  if (psi.size() != hilbert_dim(n))
    throw InvalidArgument("state dimension " + std::to_string(psi.size()) +
                          " does not match 2^" + std::to_string(n));
  Polarizations p{std::vector<double>(static_cast<size_t>(n), 0.0), 0.0};
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    const double w = std::norm(psi(b));
    if (w == 0.0) continue;
    for (int k = 1; k <= n; ++k)
      p.per_site[k - 1] += is_up(static_cast<std::uint64_t>(b), n, k) ? 0.5 * w : -0.5 * w;
  }
  for (double v : p.per_site) p.total += v;
  return p;
}

inline Polarizations polarizations(const StateVector &psi, int n) {
  return polarizations(psi.amplitudes(), n);
}

/// Product state with spin `flipped_site` down and every other spin up.
inline StateVector initial_state_first_flipped(int n, int flipped_site = 1) {
  check_spin_count(n);
  if (flipped_site < 1 || flipped_site > n)
    throw InvalidArgument("flipped_site " + std::to_string(flipped_site) +
                          " outside 1.." + std::to_string(n));
  return StateVector::basis(n, static_cast<Eigen::Index>(site_mask(n, flipped_site)));
}

inline StateVector all_up_state(int n) { return StateVector::basis(n, 0); }

inline void check_hermitian(const Operator &h, const char *what) {
  if (!h.matrix().allFinite())
    throw NumericError(std::string(what) + " has non-finite entries");
  const double scale = std::max(1.0, h.matrix().cwiseAbs().maxCoeff());
  if (h.hermiticity_error() > 1e-10 * scale)
    throw NumericError(std::string(what) + " is not Hermitian (deviation " +
                       std::to_string(h.hermiticity_error()) + ")");
}

/// exp(-i H t) from a single Hermitian eigendecomposition.
class StaticPropagator {
public:
  explicit StaticPropagator(const Operator &h) : n_(h.spins()) {
    check_hermitian(h, "Hamiltonian");
    // Symmetrize so the solver sees an exactly Hermitian input.
    const Matrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
      throw NumericError("Hermitian eigendecomposition failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  int spins() const { return n_; }

  /// Amplitudes of psi in the eigenbasis.
  Vector to_eigenbasis(const Vector &psi) const { return vectors_.adjoint() * psi; }

  Vector evolve_eigen(const Vector &coeffs, double t) const {
    const Vector phases =
        (energies_.cast<complex>() * complex{0.0, -t}).array().exp().matrix();
    return vectors_ * phases.cwiseProduct(coeffs);
  }

  Vector apply(const Vector &psi, double t) const {
    return evolve_eigen(to_eigenbasis(psi), t);
  }

private:
  int n_;
  Eigen::VectorXd energies_;
  Matrix vectors_;
};

namespace detail {

inline void check_state_matches(const Operator &h, const StateVector &psi0) {
  if (h.spins() != psi0.spins())
    throw InvalidArgument("Hamiltonian acts on " + std::to_string(h.spins()) +
                          " spins, state has " + std::to_string(psi0.spins()));
}

inline Trajectory empty_trajectory(int n, std::size_t samples) {
  Trajectory tr;
  tr.n = n;
  tr.times.reserve(samples);
  tr.per_spin.resize(static_cast<Eigen::Index>(samples), n);
  tr.total.reserve(samples);
  tr.norms.reserve(samples);
  return tr;
}

inline void record(Trajectory &tr, double t, const Vector &psi) {
  const auto row = static_cast<Eigen::Index>(tr.times.size());
  const auto p = polarizations(psi, tr.n);
  tr.times.push_back(t);
  for (int k = 0; k < tr.n; ++k) tr.per_spin(row, k) = p.per_site[k];
  tr.total.push_back(p.total);
  tr.norms.push_back(psi.norm());
}

} // namespace detail

/// Uniform grid of `count` samples on [0, t_max] (both ends included).
inline std::vector<double> uniform_times(double t_max, int count) {
  if (count < 1) throw InvalidArgument("n_samples must be >= 1");
  if (!(t_max >= 0.0)) throw InvalidArgument("t_max must be >= 0");
  std::vector<double> t(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    t[i] = count == 1 ? 0.0 : t_max * static_cast<double>(i) / (count - 1);
  return t;
}

/// psi(t) = exp(-i H t) psi0 at each sample time.
inline Trajectory evolve_static(const Operator &h, const StateVector &psi0,
                                const std::vector<double> &times) {
  detail::check_state_matches(h, psi0);
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end())
    throw InvalidArgument("sample times must be strictly increasing");

  const StaticPropagator prop(h);
  const Vector coeffs = prop.to_eigenbasis(psi0.amplitudes());
  auto tr = detail::empty_trajectory(h.spins(), times.size());
  tr.energies.reserve(times.size());
  for (double t : times) {
    const Vector psi = prop.evolve_eigen(coeffs, t);
    detail::record(tr, t, psi);
    tr.energies.push_back(psi.dot(h.matrix() * psi).real());
  }
  return tr;
}

/// Piecewise-constant midpoint stepping: each step applies the exact
/// exponential of H(t + dt/2). Samples are taken at the nearest step boundary
/// and reported at that boundary time.
inline Trajectory evolve_time_dependent(const TimeDependentHamiltonian &source,
                                        const StateVector &psi0, double t_max, double dt,
                                        const std::vector<double> &sample_times) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (source.carrier_frequency > 0.0) {
    const double limit = 2.0 * std::numbers::pi / (20.0 * source.carrier_frequency);
    if (dt > limit * (1.0 + 1e-12))
      throw InvalidArgument("dt = " + std::to_string(dt) + " exceeds 2 pi/(20 omega0) = " +
                            std::to_string(limit));
  }
  if (source.spins != psi0.spins())
    throw InvalidArgument("source acts on " + std::to_string(source.spins) +
                          " spins, state has " + std::to_string(psi0.spins()));
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw InvalidArgument("sample times must be increasing");
  for (double s : sample_times)
    if (s < 0.0 || s > t_max * (1.0 + 1e-12))
      throw InvalidArgument("sample time outside [0, t_max]");

  std::vector<long> steps_at;
  steps_at.reserve(sample_times.size());
  for (double s : sample_times) steps_at.push_back(std::lround(s / dt));

  auto tr = detail::empty_trajectory(psi0.spins(), sample_times.size());
  Vector psi = psi0.amplitudes();
  std::size_t next = 0;
  for (long step = 0; next < steps_at.size(); ++step) {
    while (next < steps_at.size() && steps_at[next] == step) {
      detail::record(tr, static_cast<double>(step) * dt, psi);
      ++next;
    }
    if (next == steps_at.size()) break;
    const Operator h = source.at((static_cast<double>(step) + 0.5) * dt);
    if (h.spins() != psi0.spins())
      throw InvalidArgument("source changed its spin count");
    psi = StaticPropagator(h).apply(psi, dt);
  }
  return tr;
}

/// Wavefront arrival (first crossing below zero, linearly interpolated),
/// minimum of the total polarization and the amplification P(0) - min P.
inline WaveMetrics trajectory_metrics(const Trajectory &tr) {
  if (tr.empty()) throw InvalidArgument("trajectory is empty");
  WaveMetrics m;
  m.arrival.resize(static_cast<size_t>(tr.n));
  for (int k = 0; k < tr.n; ++k) {
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double p = tr.per_spin(static_cast<Eigen::Index>(i), k);
      if (p >= 0.0) continue;
      if (i == 0) {
        m.arrival[k] = tr.times[0];
      } else {
        const double p0 = tr.per_spin(static_cast<Eigen::Index>(i - 1), k);
        const double f = p0 / (p0 - p);
        m.arrival[k] = tr.times[i - 1] + f * (tr.times[i] - tr.times[i - 1]);
      }
      break;
    }
  }
  m.min_total = *std::min_element(tr.total.begin(), tr.total.end());
  m.amplification = tr.total.front() - m.min_total;
  return m;
}

/// Largest |norm - 1| over the samples; infinite if any norm is not finite.
inline double max_norm_drift(const Trajectory &tr) {
  double d = 0.0;
  for (double v : tr.norms) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    d = std::max(d, std::abs(v - 1.0));
  }
  return d;
}

inline double max_energy_drift(const Trajectory &tr) {
  double d = 0.0;
  for (double e : tr.energies) d = std::max(d, std::abs(e - tr.energies.front()));
  return d;
}

} // namespace qdomino
