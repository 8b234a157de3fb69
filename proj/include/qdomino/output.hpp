#pragma once

#include "qdomino/dynamics.hpp"
#include "qdomino/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qdomino {

/// 12 significant digits; integral values keep a ".0" and -0 prints as 0.0.
inline std::string csv_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  if (s.find_first_of(".ein") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void check_sink(const std::ostream &os, const char *what) {
  if (!os) throw IoError(std::string("failed writing ") + what);
}

inline void require_samples(const Trajectory &tr) {
  if (tr.empty()) throw InvalidArgument("trajectory is empty");
}

} // namespace detail

/// "# key=value" metadata block, header "t,P1,...,PN,Ptotal", one row per
/// sample.
inline void write_trajectory_csv(const Trajectory &tr, std::ostream &os) {
  detail::require_samples(tr);
  for (const auto &[k, v] : tr.metadata) os << "# " << k << '=' << v << '\n';
  os << 't';
  for (int k = 1; k <= tr.n; ++k) os << ",P" << k;
  os << ",Ptotal\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    os << csv_number(tr.times[i]);
    for (int k = 0; k < tr.n; ++k)
      os << ',' << csv_number(tr.per_spin(static_cast<Eigen::Index>(i), k));
    os << ',' << csv_number(tr.total[i]) << '\n';
  }
  os.flush();
  detail::check_sink(os, "trajectory CSV");
}

/// Reads the format produced by write_trajectory_csv.
inline Trajectory read_trajectory_csv(std::istream &is) {
  Trajectory tr;
  std::string line;
  bool header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw InvalidArgument("bad metadata line: " + line);
      tr.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (!header) {
      if (cells.size() < 3 || cells.front() != "t" || cells.back() != "Ptotal")
        throw InvalidArgument("bad trajectory CSV header: " + line);
      tr.n = static_cast<int>(cells.size()) - 2;
      header = true;
      continue;
    }
    if (cells.size() != static_cast<size_t>(tr.n) + 2)
      throw InvalidArgument("bad trajectory CSV row: " + line);
    std::vector<double> row;
    for (const auto &c : cells) row.push_back(std::stod(c));
    rows.push_back(std::move(row));
  }
  if (!header) throw InvalidArgument("trajectory CSV has no header");
  tr.per_spin.resize(static_cast<Eigen::Index>(rows.size()), tr.n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    tr.times.push_back(rows[i].front());
    for (int k = 0; k < tr.n; ++k)
      tr.per_spin(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<size_t>(k) + 1];
    tr.total.push_back(rows[i].back());
  }
  return tr;
}

/// Total polarization of several runs on a shared time grid:
/// header "t,<name1>,<name2>,...".
inline void write_totals_csv(const std::vector<std::string> &names,
                             const std::vector<const Trajectory *> &runs, std::ostream &os) {
  if (runs.empty() || names.size() != runs.size())
    throw InvalidArgument("totals CSV needs one name per run");
  for (const auto *r : runs) {
    detail::require_samples(*r);
    if (r->times != runs.front()->times)
      throw InvalidArgument("totals CSV runs must share their sample times");
  }
  os << 't';
  for (const auto &n : names) os << ',' << n;
  os << '\n';
  const auto &times = runs.front()->times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << csv_number(times[i]);
    for (const auto *r : runs) os << ',' << csv_number(r->total[i]);
    os << '\n';
  }
  os.flush();
  detail::check_sink(os, "totals CSV");
}

inline nlohmann::json metrics_json(const WaveMetrics &m) {
  nlohmann::json j;
  j["arrival"] = nlohmann::json::array();
  for (const auto &a : m.arrival)
    j["arrival"].push_back(a ? nlohmann::json(*a) : nlohmann::json(nullptr));
  j["min_total"] = m.min_total;
  j["amplification"] = m.amplification;
  return j;
}

inline void write_metrics_json(const WaveMetrics &m, const Metadata &md, std::ostream &os) {
  auto j = metrics_json(m);
  for (const auto &[k, v] : md) j["config"][k] = v;
  os << j.dump(2) << '\n';
  os.flush();
  detail::check_sink(os, "metrics JSON");
}

/// Line plot of every P_k(t) and the total P(t) as a standalone SVG.
inline void render_svg(const Trajectory &tr, std::ostream &os) {
  detail::require_samples(tr);
  constexpr double width = 800, height = 480;
  constexpr double left = 70, right = 130, top = 30, bottom = 50;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  static constexpr std::array<const char *, 10> palette{
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  const double t0 = tr.times.front();
  const double t1 = tr.times.back() > t0 ? tr.times.back() : t0 + 1.0;
  double y0 = -0.5, y1 = 0.5;
  for (double v : tr.total) {
    y0 = std::min(y0, v);
    y1 = std::max(y1, v);
  }
  auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * plot_w; };
  auto py = [&](double p) { return top + (y1 - p) / (y1 - y0) * plot_h; };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(plot_w)
     << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double t = t0 + (t1 - t0) * i / ticks;
    const double p = y0 + (y1 - y0) * i / ticks;
    os << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << fmt(top + plot_h) << "\" x2=\""
       << fmt(px(t)) << "\" y2=\"" << fmt(top + plot_h + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(top + plot_h + 18)
       << "\" text-anchor=\"middle\">" << csv_number(std::round(t * 100) / 100) << "</text>\n";
    os << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(py(p)) << "\" x2=\"" << fmt(left)
       << "\" y2=\"" << fmt(py(p)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(py(p) + 4)
       << "\" text-anchor=\"end\">" << csv_number(std::round(p * 100) / 100) << "</text>\n";
  }
  os << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"" << fmt(height - 10)
     << "\" text-anchor=\"middle\">t</text>\n";

  auto series = [&](int col, const std::string &color, double stroke, const std::string &label,
                    int slot) {
    auto value = [&](std::size_t i) {
      return col < 0 ? tr.total[i] : tr.per_spin(static_cast<Eigen::Index>(i), col);
    };
    if (tr.size() == 1) {
      os << "<circle cx=\"" << fmt(px(tr.times[0])) << "\" cy=\"" << fmt(py(value(0)))
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke
         << "\" points=\"";
      for (std::size_t i = 0; i < tr.size(); ++i)
        os << (i ? " " : "") << fmt(px(tr.times[i])) << ',' << fmt(py(value(i)));
      os << "\"/>\n";
    }
    const double ly = top + 10 + 16 * slot;
    os << "<line x1=\"" << fmt(width - right + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\""
       << fmt(width - right + 32) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"" << stroke << "\"/>\n";
    os << "<text x=\"" << fmt(width - right + 38) << "\" y=\"" << fmt(ly + 4) << "\">" << label
       << "</text>\n";
  };
  for (int k = 0; k < tr.n; ++k)
    series(k, palette[static_cast<size_t>(k) % palette.size()], 1.5, "P" + std::to_string(k + 1), k);
  series(-1, "black", 2.5, "Ptotal", tr.n);

  os << "</g>\n</svg>\n";
  os.flush();
  detail::check_sink(os, "SVG");
}

} // namespace qdomino
