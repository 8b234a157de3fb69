#pragma once

#include "qdomino/dynamics.hpp"
#include "qdomino/error.hpp"
#include "qdomino/hamiltonians.hpp"

#include <array>
#include <cstdio>
#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qdomino {

enum class OutputKind { csv, svg, metrics };

inline const char *output_name(OutputKind o) {
  switch (o) {
  case OutputKind::csv: return "csv";
  case OutputKind::svg: return "svg";
  case OutputKind::metrics: return "metrics";
  }
  return "?";
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// One simulation run: system, model, initial state and sampling.
struct ExperimentConfig {
  SystemSpec system;
  ModelSpec model;
  std::optional<int> flipped_site = 1; // nullopt: all spins up
  double t_max = 60.0;
  int n_samples = 400;
  double dt = 0.0; // lab_frame step; 0 selects 2 pi / (40 omega0)
  std::vector<OutputKind> outputs{OutputKind::csv, OutputKind::svg, OutputKind::metrics};

  double step() const {
    return dt > 0.0 ? dt : 2.0 * std::numbers::pi / (40.0 * model.omega0);
  }

  void validate() const {
    model.validate(system);
    if (flipped_site && (*flipped_site < 1 || *flipped_site > system.n))
      throw InvalidArgument("flipped_site must be in 1.." + std::to_string(system.n));
    if (!(t_max >= 0.0)) throw InvalidArgument("t_max must be >= 0");
    if (n_samples < 1) throw InvalidArgument("n_samples must be >= 1");
    if (dt < 0.0) throw InvalidArgument("dt must be > 0");
  }

  /// key=value description of every parameter, in a fixed order.
  Metadata describe() const {
    Metadata md;
    std::string species;
    for (const auto &s : system.species) species += s;
    std::string gammas;
    for (const auto &[label, g] : system.gammas)
      gammas += (gammas.empty() ? "" : ";") + label + "=" + format_number(g);
    md.emplace_back("n_spins", std::to_string(system.n));
    md.emplace_back("geometry", geometry_name(system.geometry));
    md.emplace_back("model", model_name(model.model));
    md.emplace_back("m_neighbors", std::to_string(model.m_neighbors));
    md.emplace_back("omega1", format_number(model.omega1));
    md.emplace_back("d1", format_number(model.d1));
    md.emplace_back("omega0", format_number(model.omega0));
    md.emplace_back("j_coupling", format_number(model.j_coupling));
    md.emplace_back("variant", variant_name(model.variant));
    md.emplace_back("species", species);
    md.emplace_back("gammas", gammas);
    md.emplace_back("flipped_site", flipped_site ? std::to_string(*flipped_site) : "none");
    md.emplace_back("t_max", format_number(t_max));
    md.emplace_back("n_samples", std::to_string(n_samples));
    if (model.model == ModelKind::lab_frame) md.emplace_back("dt", format_number(step()));
    std::string defects;
    for (const auto &[a, b] : system.like_neighbor_defects())
      defects += (defects.empty() ? "" : ";") + std::to_string(a) + "-" + std::to_string(b);
    if (!defects.empty()) md.emplace_back("species_defect", defects);
    return md;
  }
};

struct RunResult {
  Trajectory trajectory;
  WaveMetrics metrics;
};

inline constexpr double kNormDriftTolerance = 1e-10;

/// Builds the Hamiltonian, evolves the configured initial state and derives
/// the wave metrics. `context` prefixes error messages.
inline RunResult run_experiment(const ExperimentConfig &config, std::string_view context = {}) {
  const std::string prefix = context.empty() ? "" : std::string(context) + ": ";
  try {
    config.validate();
    const int n = config.system.n;
    const StateVector psi0 = config.flipped_site
                                 ? initial_state_first_flipped(n, *config.flipped_site)
                                 : all_up_state(n);
    const auto times = uniform_times(config.t_max, config.n_samples);

    RunResult r;
    if (config.model.model == ModelKind::lab_frame) {
      r.trajectory = evolve_time_dependent(lab_frame_source(config.system, config.model), psi0,
                                           config.t_max, config.step(), times);
    } else {
      r.trajectory = evolve_static(build_hamiltonian(config.system, config.model), psi0, times);
    }
    if (!(max_norm_drift(r.trajectory) <= kNormDriftTolerance))
      throw NumericError("norm drift " + format_number(max_norm_drift(r.trajectory)) +
                         " exceeds tolerance");
    r.trajectory.metadata = config.describe();
    r.metrics = trajectory_metrics(r.trajectory);
    return r;
  } catch (const InvalidArgument &e) {
    throw InvalidArgument(prefix + e.what());
  } catch (const NumericError &e) {
    throw NumericError(prefix + e.what());
  }
}

enum class ScenarioId { fig1a, fig1b, fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b };

inline constexpr std::array kAllScenarios{
    ScenarioId::fig1a, ScenarioId::fig1b, ScenarioId::fig2a, ScenarioId::fig2b,
    ScenarioId::fig3a, ScenarioId::fig3b, ScenarioId::fig4a, ScenarioId::fig4b,
    ScenarioId::fig5a, ScenarioId::fig5b};

inline std::string scenario_name(ScenarioId id) {
  static constexpr std::array<const char *, 10> names{
      "fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b"};
  return names[static_cast<size_t>(id)];
}

inline std::optional<ScenarioId> parse_scenario_id(std::string_view name) {
  for (auto id : kAllScenarios)
    if (scenario_name(id) == name) return id;
  return std::nullopt;
}

/// A named run inside a scenario; single-run scenarios have one unnamed curve.
struct Curve {
  std::string name;
  ExperimentConfig config;
};

struct Scenario {
  ScenarioId id;
  std::string description;
  std::vector<Curve> curves;

  bool bundle() const { return curves.size() > 1; }
};

namespace detail {

inline ExperimentConfig make_config(SystemSpec sys, ModelKind kind, double omega1,
                                    int m_neighbors = 1) {
  ExperimentConfig c;
  c.system = std::move(sys);
  c.model.model = kind;
  c.model.omega1 = omega1;
  c.model.m_neighbors = m_neighbors;
  return c;
}

/// Five-curve total-polarization bundle for a 7-spin chain or ring.
inline std::vector<Curve> comparison_bundle(Geometry g) {
  constexpr int n = 7;
  constexpr double w = 0.15;
  const auto uni = SystemSpec::uniform(n, g);
  const ModelKind eff = g == Geometry::chain ? ModelKind::effective_nn : ModelKind::effective_ring;
  return {
      {"eff", make_config(uni, eff, w)},
      {"zz-m1", make_config(uni, ModelKind::rotating_zz, w, 1)},
      {"zz-m2", make_config(uni, ModelKind::rotating_zz, w, 2)},
      {"zz-all", make_config(uni, ModelKind::rotating_zz, w, max_neighbors(g, n))},
      {"alt-dipolar",
       make_config(SystemSpec::patterned(n, g, "HF"), ModelKind::alternating_hetero, w)},
  };
}

} // namespace detail

/// Every figure scenario, fully parameterized, spin 1 flipped. Times run over
/// [0, 60/d1] with 400 samples; omega1 = 0.15 d1 except the field-free
/// dipolar run.
inline std::vector<Scenario> scenario_catalog() {
  using detail::make_config;
  constexpr double w = 0.15;
  const auto chain7 = SystemSpec::uniform(7, Geometry::chain);
  const auto ring9 = SystemSpec::uniform(9, Geometry::ring);
  return {
      {ScenarioId::fig1a, "7-spin chain, ZZ nearest neighbors (M=1)",
       {{"", make_config(chain7, ModelKind::rotating_zz, w, 1)}}},
      {ScenarioId::fig1b, "7-spin chain, zero-order average Hamiltonian",
       {{"", make_config(chain7, ModelKind::effective_nn, w)}}},
      {ScenarioId::fig2a, "7-spin chain, ZZ with M=2",
       {{"", make_config(chain7, ModelKind::rotating_zz, w, 2)}}},
      {ScenarioId::fig2b, "7-spin chain, ZZ with all pairs (M=N-1)",
       {{"", make_config(chain7, ModelKind::rotating_zz, w, 6)}}},
      {ScenarioId::fig3a, "7-spin chain, secular dipolar, no field",
       {{"", make_config(chain7, ModelKind::secular_dipolar, 0.0)}}},
      {ScenarioId::fig3b, "7-spin alternating 1H/19F chain, full dipolar",
       {{"", make_config(SystemSpec::patterned(7, Geometry::chain, "HF"),
                         ModelKind::alternating_hetero, w)}}},
      {ScenarioId::fig4a, "9-spin ring, ZZ nearest neighbors (M=1)",
       {{"", make_config(ring9, ModelKind::rotating_zz, w, 1)}}},
      {ScenarioId::fig4b, "9-spin ring, average Hamiltonian M=1",
       {{"", make_config(ring9, ModelKind::effective_ring, w, 1)}}},
      {ScenarioId::fig5a, "7-spin chains, total polarization comparison",
       detail::comparison_bundle(Geometry::chain)},
      {ScenarioId::fig5b, "7-spin rings, total polarization comparison",
       detail::comparison_bundle(Geometry::ring)},
  };
}

inline Scenario find_scenario(ScenarioId id) {
  for (auto &s : scenario_catalog())
    if (s.id == id) return s;
  throw InvalidArgument("unknown scenario");
}

/// Runs every curve of a scenario; bundle members run concurrently. Results
/// are returned in curve order.
inline std::vector<RunResult> run_scenario(const Scenario &s) {
  std::vector<std::future<RunResult>> jobs;
  for (const auto &c : s.curves) {
    std::string ctx = scenario_name(s.id) + (c.name.empty() ? "" : "/" + c.name);
    jobs.push_back(std::async(s.bundle() ? std::launch::async : std::launch::deferred,
                              [&c, ctx] { return run_experiment(c.config, ctx); }));
  }
  std::vector<RunResult> out;
  out.reserve(jobs.size());
  for (auto &j : jobs) out.push_back(j.get());
  return out;
}

} // namespace qdomino
