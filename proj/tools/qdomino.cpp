// Command-line front end: run a JSON config, run a named figure scenario, or
// list the scenario catalog.

#include "qdomino/qdomino.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace qdomino;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::ofstream open_output(const fs::path &p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot open " + p.string() + " for writing");
  return os;
}

void write_outputs(const ExperimentConfig &cfg, const RunResult &r, const fs::path &out_dir,
                   const std::string &stem) {
  for (auto kind : cfg.outputs) {
    fs::path p = out_dir / stem;
    switch (kind) {
    case OutputKind::csv: {
      p += ".csv";
      auto os = open_output(p);
      write_trajectory_csv(r.trajectory, os);
      break;
    }
    case OutputKind::svg: {
      p += ".svg";
      auto os = open_output(p);
      render_svg(r.trajectory, os);
      break;
    }
    case OutputKind::metrics: {
      p += ".metrics.json";
      auto os = open_output(p);
      write_metrics_json(r.metrics, r.trajectory.metadata, os);
      break;
    }
    }
    std::cout << "wrote " << p.string() << '\n';
  }
  std::cout << stem << ": amplification=" << format_number(r.metrics.amplification)
            << " min_total=" << format_number(r.metrics.min_total) << '\n';
}

void prepare_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

int cmd_run(const std::string &config_path, const fs::path &out_dir,
            const std::vector<std::string> &overrides) {
  std::ifstream in(config_path);
  if (!in) throw InvalidArgument("cannot read config " + config_path);
  std::stringstream text;
  text << in.rdbuf();
  json doc;
  try {
    doc = json::parse(text.str());
  } catch (const json::parse_error &e) {
    throw InvalidArgument(config_path + ": malformed config: " + e.what());
  }
  ExperimentConfig cfg;
  try {
    apply_overrides(doc, overrides);
    cfg = parse_config(doc);
  } catch (const InvalidArgument &e) {
    throw InvalidArgument(config_path + ": " + e.what());
  }
  const auto result = run_experiment(cfg, config_path);
  prepare_dir(out_dir);
  write_outputs(cfg, result, out_dir, fs::path(config_path).stem().string());
  return 0;
}

int cmd_scenario(ScenarioId id, const fs::path &out_dir, const std::vector<std::string> &overrides) {
  Scenario s = find_scenario(id);
  for (auto &c : s.curves) {
    json doc = to_json(c.config);
    apply_overrides(doc, overrides);
    c.config = parse_config(doc);
  }
  const auto results = run_scenario(s);
  prepare_dir(out_dir);
  const std::string base = scenario_name(id);
  std::vector<std::string> names;
  std::vector<const Trajectory *> runs;
  for (std::size_t i = 0; i < s.curves.size(); ++i) {
    const auto &c = s.curves[i];
    write_outputs(c.config, results[i], out_dir, c.name.empty() ? base : base + "-" + c.name);
    names.push_back(c.name);
    runs.push_back(&results[i].trajectory);
  }
  if (s.bundle()) {
    const auto p = out_dir / (base + ".csv");
    auto os = open_output(p);
    write_totals_csv(names, runs, os);
    std::cout << "wrote " << p.string() << '\n';
  }
  return 0;
}

int cmd_list() {
  for (const auto &s : scenario_catalog()) {
    std::cout << scenario_name(s.id) << "  " << s.description;
    if (s.bundle()) {
      std::cout << " [";
      for (std::size_t i = 0; i < s.curves.size(); ++i)
        std::cout << (i ? ", " : "") << s.curves[i].name;
      std::cout << ']';
    }
    std::cout << '\n';
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Stimulated polarization waves in spin-1/2 chains and rings"};
  app.require_subcommand(1);

  std::string out_dir = "./out";
  std::vector<std::string> overrides;
  std::string config_path;
  std::string scenario;

  auto *run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Config file")->required();
  auto *scen = app.add_subcommand("scenario", "Run a named figure scenario");
  scen->add_option("id", scenario, "Scenario id (see list-scenarios)")->required();
  app.add_subcommand("list-scenarios", "List the scenario catalog");
  for (auto *sub : {run, scen}) {
    sub->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("-s,--set", overrides, "Override a config key (key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, overrides);
    if (scen->parsed()) {
      const auto id = parse_scenario_id(scenario);
      if (!id) {
        std::cerr << "error: unknown scenario '" << scenario << "'\n";
        return kExitConfig;
      }
      return cmd_scenario(*id, out_dir, overrides);
    }
    return cmd_list();
  } catch (const InvalidArgument &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError &e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
