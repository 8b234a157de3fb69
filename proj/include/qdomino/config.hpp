#pragma once

#include "qdomino/error.hpp"
#include "qdomino/experiments.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qdomino {

using json = nlohmann::json;

namespace detail {

inline const std::set<std::string> &config_keys() {
  static const std::set<std::string> keys{
      "n_spins", "geometry", "model", "m_neighbors", "omega1", "d1",
      "omega0", "j_coupling", "variant", "species", "gammas", "flipped_site",
      "t_max", "n_samples", "dt", "outputs"};
  return keys;
}

[[noreturn]] inline void key_error(const std::string &key, const std::string &what) {
  throw InvalidArgument("config key '" + key + "': " + what);
}

inline double get_number(const json &doc, const std::string &key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto &v = doc.at(key);
  if (!v.is_number()) key_error(key, "expected a number");
  return v.get<double>();
}

inline int get_int(const json &doc, const std::string &key, int fallback) {
  if (!doc.contains(key)) return fallback;
  const auto &v = doc.at(key);
  if (!v.is_number_integer()) key_error(key, "expected an integer");
  return v.get<int>();
}

inline std::string get_string(const json &doc, const std::string &key, std::string fallback) {
  if (!doc.contains(key)) return fallback;
  const auto &v = doc.at(key);
  if (!v.is_string()) key_error(key, "expected a string");
  return v.get<std::string>();
}

inline ModelKind parse_model(const std::string &s) {
  for (auto m : {ModelKind::lab_frame, ModelKind::rotating_zz, ModelKind::effective_nn,
                 ModelKind::effective_chain, ModelKind::effective_ring,
                 ModelKind::secular_dipolar, ModelKind::alternating_hetero})
    if (s == model_name(m)) return m;
  key_error("model", "unknown model '" + s + "'");
}

} // namespace detail

/// Builds a validated ExperimentConfig from a JSON object. Unknown keys and
/// constraint violations are errors naming the offending key.
inline ExperimentConfig parse_config(const json &doc) {
  using namespace detail;
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto &[key, _] : doc.items())
    if (!config_keys().contains(key)) key_error(key, "unknown key");
  if (!doc.contains("n_spins")) key_error("n_spins", "required");
  if (!doc.contains("model")) key_error("model", "required");

  ExperimentConfig c;
  ModelSpec &m = c.model;
  m.model = parse_model(get_string(doc, "model", ""));
  const bool lab = m.model == ModelKind::lab_frame;

  const int n = get_int(doc, "n_spins", 0);
  if (n < (lab ? 1 : 2) || n > kMaxSpins)
    key_error("n_spins", "must be in " + std::to_string(lab ? 1 : 2) + ".." +
                             std::to_string(kMaxSpins));

  const auto geometry = get_string(doc, "geometry", "chain");
  if (geometry != "chain" && geometry != "ring")
    key_error("geometry", "must be \"chain\" or \"ring\"");
  const Geometry g = geometry == "chain" ? Geometry::chain : Geometry::ring;

  m.m_neighbors = get_int(doc, "m_neighbors", 1);
  m.omega1 = get_number(doc, "omega1", 0.15);
  m.d1 = get_number(doc, "d1", 1.0);
  m.omega0 = get_number(doc, "omega0", 0.0);
  m.j_coupling = get_number(doc, "j_coupling", m.d1);
  const auto variant = get_string(doc, "variant", "normalized");
  if (variant == "normalized") m.variant = Variant::normalized;
  else if (variant == "as_printed") m.variant = Variant::as_printed;
  else key_error("variant", "must be \"normalized\" or \"as_printed\"");

  if (!(m.omega1 >= 0.0)) key_error("omega1", "must be >= 0");
  if (!(m.d1 > 0.0)) key_error("d1", "must be > 0");
  if (lab && !(m.omega0 > 0.0)) key_error("omega0", "lab_frame requires omega0 > 0");
  if (m.model == ModelKind::effective_chain && m.m_neighbors != 1 && m.m_neighbors != 2)
    key_error("m_neighbors", "m_neighbors must be 1 or 2");
  if (m.m_neighbors < 1) key_error("m_neighbors", "must be >= 1");

  std::map<std::string, double> gammas{{"A", 1.0}, {"H", kGammaProton}, {"F", kGammaFluorine}};
  if (doc.contains("gammas")) {
    const auto &gj = doc.at("gammas");
    if (!gj.is_object()) key_error("gammas", "expected an object label -> value");
    for (const auto &[label, v] : gj.items()) {
      if (!v.is_number()) key_error("gammas", "value for '" + label + "' is not a number");
      gammas[label] = v.get<double>();
    }
  }
  const auto pattern = get_string(doc, "species", m.model == ModelKind::alternating_hetero ? "HF" : "A");
  if (pattern.empty()) key_error("species", "pattern is empty");
  c.system = SystemSpec::patterned(n, g, pattern, gammas);

  if (doc.contains("flipped_site")) {
    const auto &f = doc.at("flipped_site");
    if (f.is_string() && f.get<std::string>() == "none") c.flipped_site.reset();
    else if (f.is_number_integer()) c.flipped_site = f.get<int>();
    else key_error("flipped_site", "expected an integer or \"none\"");
  }

  const double default_t_max = m.model == ModelKind::effective_nn && m.omega1 > 0.0
                                    ? 30.0 / m.omega1
                                    : 60.0 / m.d1;
  c.t_max = get_number(doc, "t_max", default_t_max);
  c.n_samples = get_int(doc, "n_samples", 400);
  if (doc.contains("dt")) {
    if (!lab) key_error("dt", "applies only to the time-dependent lab_frame model");
    c.dt = get_number(doc, "dt", 0.0);
    if (!(c.dt > 0.0)) key_error("dt", "must be > 0");
  }
  if (doc.contains("outputs")) {
    const auto &o = doc.at("outputs");
    if (!o.is_array()) key_error("outputs", "expected an array");
    c.outputs.clear();
    for (const auto &v : o) {
      const auto s = v.is_string() ? v.get<std::string>() : std::string{};
      if (s == "csv") c.outputs.push_back(OutputKind::csv);
      else if (s == "svg") c.outputs.push_back(OutputKind::svg);
      else if (s == "metrics") c.outputs.push_back(OutputKind::metrics);
      else key_error("outputs", "entries must be \"csv\", \"svg\" or \"metrics\"");
    }
  }

  if (!(c.t_max >= 0.0)) key_error("t_max", "must be >= 0");
  if (c.n_samples < 1) key_error("n_samples", "must be >= 1");
  if (c.flipped_site && (*c.flipped_site < 1 || *c.flipped_site > n))
    key_error("flipped_site", "must be in 1.." + std::to_string(n) + " or \"none\"");
  c.validate();
  return c;
}

inline ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  return parse_config(doc);
}

/// Inverse of parse_config: parse_config(to_json(c)) reproduces c.
inline json to_json(const ExperimentConfig &c) {
  json doc;
  const auto &m = c.model;
  doc["n_spins"] = c.system.n;
  doc["geometry"] = geometry_name(c.system.geometry);
  doc["model"] = model_name(m.model);
  doc["m_neighbors"] = m.m_neighbors;
  doc["omega1"] = m.omega1;
  doc["d1"] = m.d1;
  doc["omega0"] = m.omega0;
  doc["j_coupling"] = m.j_coupling;
  doc["variant"] = variant_name(m.variant);
  std::string species;
  for (const auto &s : c.system.species) species += s;
  doc["species"] = species;
  doc["gammas"] = c.system.gammas;
  if (c.flipped_site) doc["flipped_site"] = *c.flipped_site;
  else doc["flipped_site"] = "none";
  doc["t_max"] = c.t_max;
  doc["n_samples"] = c.n_samples;
  if (m.model == ModelKind::lab_frame && c.dt > 0.0) doc["dt"] = c.dt;
  doc["outputs"] = json::array();
  for (auto o : c.outputs) doc["outputs"].push_back(output_name(o));
  return doc;
}

/// Applies "key=value" overrides onto a config document. Values are read as
/// JSON when they parse as JSON and as plain strings otherwise.
inline void apply_overrides(json &doc, const std::vector<std::string> &overrides) {
  for (const auto &o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidArgument("override '" + o + "' is not key=value");
    const auto key = o.substr(0, eq);
    const auto value = o.substr(eq + 1);
    if (!detail::config_keys().contains(key)) detail::key_error(key, "unknown key");
    doc[key] = json::accept(value) ? json::parse(value) : json(value);
  }
}

} // namespace qdomino
