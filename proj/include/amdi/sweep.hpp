// Copyright 2026 The amdi-rate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "amdi/closed_form.hpp"
#include "amdi/oracle.hpp"
#include "amdi/rate.hpp"

namespace amdi {

enum class Mode { Rate, Sweep, Qmax, Verify, CheckPdc };
enum class Spacing { Linear, Log };

inline std::string to_string(Mode mode) {
  switch (mode) {
  case Mode::Rate: return "rate";
  case Mode::Sweep: return "sweep";
  case Mode::Qmax: return "qmax";
  case Mode::Verify: return "verify";
  case Mode::CheckPdc: return "check-pdc";
  }
  return "rate";
}

/// One source, described in exactly one style.
struct SourceSpec {
  enum class Style { Default, Ratio, Explicit, Pdc };
  Style style = Style::Default; ///< Default is a perfect pair source, p_1 = 1
  double zero = 0.0;            ///< p0 (or q0) in the ratio style
  double ratio = 0.0;           ///< P (or Q) in the ratio style
  std::vector<double> probs;
  double lambda = 0.0;

  PhotonStatistics build(int n_max) const {
    switch (style) {
    case Style::Ratio: return ratio_statistics(zero, ratio);
    case Style::Explicit: return make_statistics(probs);
    case Style::Pdc: return pdc_statistics(lambda, n_max);
    case Style::Default: break;
    }
    return make_statistics({0.0, 1.0});
  }

  friend bool operator==(const SourceSpec &, const SourceSpec &) = default;
};

struct LengthRange {
  double start = 1.0;
  double stop = 1000.0;
  int points = 200;
  Spacing spacing = Spacing::Log;

  std::vector<double> grid() const {
    if (points < 1) throw Error(ErrorKind::InvalidParameter, "L_points must be >= 1");
    if (!(start > 0.0)) throw Error(ErrorKind::InvalidParameter, "L_start must be > 0");
    return spacing == Spacing::Log ? log_grid(start, stop, points) : linear_grid(start, stop, points);
  }

  friend bool operator==(const LengthRange &, const LengthRange &) = default;
};

struct SweepConfig {
  Mode mode = Mode::Rate;
  SourceSpec source; ///< S_AC and S_BC
  SourceSpec qnd;    ///< both S_QND
  SystemParams params;
  int n_max = 2;
  LengthRange lengths;
  int threads = 1;
  std::string out;
  std::string json_out;
  double abs_tol = 1e-9;
  double rel_tol = 1e-6;
  std::vector<double> qmax_p0{0.1};
  std::vector<double> qmax_P{0.01, 0.25};
  std::vector<double> qmax_eta_det{0.9, 0.7, 0.5};
  double qmax_tol = 1e-10;
  int verify_points = 50;
  std::uint64_t seed = 20261015;
  double fault = 0.0; ///< relative perturbation injected into the closed form by verify

  SourceRoles roles() const { return {source.build(n_max), qnd.build(n_max)}; }

  friend bool operator==(const SweepConfig &, const SweepConfig &) = default;
};

namespace detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_list(std::span<const double> xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_double(xs[i]);
  return out;
}

class ConfigReader {
public:
  ConfigReader(int line, std::string key) : line_(line), key_(std::move(key)) {}

  [[noreturn]] void fail(const std::string &why) const {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_) + ", field '" + key_ + "': " + why);
  }

  double number(const std::string &text) const {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
      fail("expected a number, got '" + t + "'");
    }
    return value;
  }

  long long integer(const std::string &text) const {
    const std::string t = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      fail("expected an integer, got '" + t + "'");
    }
    return value;
  }

  std::vector<double> list(const std::string &text) const {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
    if (out.empty()) fail("expected a comma-separated list");
    return out;
  }

private:
  int line_;
  std::string key_;
};

} // namespace detail

/// Parses the flat `key = value` format; `#` starts a comment.
inline SweepConfig parse_config(const std::string &text) {
  SweepConfig cfg;
  std::map<std::string, int> seen;
  // Styles used per source, to reject mixed specifications.
  std::map<std::string, std::map<SourceSpec::Style, int>> styles;
  bool tau_ns_set = false, tau_s_set = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const detail::ConfigReader r(line_no, key);
    if (seen.count(key)) r.fail("duplicate key (first on line " + std::to_string(seen[key]) + ")");
    seen[key] = line_no;

    auto source_field = [&](SourceSpec &spec, const std::string &name, SourceSpec::Style style) {
      if (!styles[name].count(style)) styles[name][style] = line_no;
      spec.style = style;
    };

    if (key == "mode") {
      static const std::map<std::string, Mode> modes{{"rate", Mode::Rate},
                                                     {"sweep", Mode::Sweep},
                                                     {"qmax", Mode::Qmax},
                                                     {"verify", Mode::Verify},
                                                     {"check-pdc", Mode::CheckPdc}};
      const auto it = modes.find(value);
      if (it == modes.end()) r.fail("unknown mode '" + value + "'");
      cfg.mode = it->second;
    } else if (key == "L") {
      cfg.params.length_km = r.number(value);
    } else if (key == "L_att") {
      cfg.params.attenuation_length_km = r.number(value);
    } else if (key == "c_fiber") {
      cfg.params.c_fiber = r.number(value);
    } else if (key == "tau_ns") {
      cfg.params.tau_s = r.number(value) * 1e-9;
      tau_ns_set = true;
    } else if (key == "tau_s") {
      cfg.params.tau_s = r.number(value);
      tau_s_set = true;
    } else if (key == "eta_det") {
      cfg.params.eta_det = r.number(value);
    } else if (key == "n_max") {
      cfg.n_max = static_cast<int>(r.integer(value));
      if (cfg.n_max < 1) r.fail("must be >= 1");
    } else if (key == "L_start") {
      cfg.lengths.start = r.number(value);
    } else if (key == "L_stop") {
      cfg.lengths.stop = r.number(value);
    } else if (key == "L_points") {
      cfg.lengths.points = static_cast<int>(r.integer(value));
    } else if (key == "L_spacing") {
      if (value == "log") cfg.lengths.spacing = Spacing::Log;
      else if (value == "linear") cfg.lengths.spacing = Spacing::Linear;
      else r.fail("expected 'log' or 'linear'");
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(r.integer(value));
      if (cfg.threads < 1) r.fail("must be >= 1");
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "json_out") {
      cfg.json_out = value;
    } else if (key == "abs_tol") {
      cfg.abs_tol = r.number(value);
    } else if (key == "rel_tol") {
      cfg.rel_tol = r.number(value);
    } else if (key == "source.p0") {
      source_field(cfg.source, "source", SourceSpec::Style::Ratio);
      cfg.source.zero = r.number(value);
    } else if (key == "source.P") {
      source_field(cfg.source, "source", SourceSpec::Style::Ratio);
      cfg.source.ratio = r.number(value);
    } else if (key == "source.probs") {
      source_field(cfg.source, "source", SourceSpec::Style::Explicit);
      cfg.source.probs = r.list(value);
    } else if (key == "source.lambda") {
      source_field(cfg.source, "source", SourceSpec::Style::Pdc);
      cfg.source.lambda = r.number(value);
    } else if (key == "qnd.q0") {
      source_field(cfg.qnd, "qnd", SourceSpec::Style::Ratio);
      cfg.qnd.zero = r.number(value);
    } else if (key == "qnd.Q") {
      source_field(cfg.qnd, "qnd", SourceSpec::Style::Ratio);
      cfg.qnd.ratio = r.number(value);
    } else if (key == "qnd.probs") {
      source_field(cfg.qnd, "qnd", SourceSpec::Style::Explicit);
      cfg.qnd.probs = r.list(value);
    } else if (key == "qnd.mu") {
      source_field(cfg.qnd, "qnd", SourceSpec::Style::Pdc);
      cfg.qnd.lambda = r.number(value);
    } else if (key == "qmax.p0") {
      cfg.qmax_p0 = r.list(value);
    } else if (key == "qmax.P") {
      cfg.qmax_P = r.list(value);
    } else if (key == "qmax.eta_det") {
      cfg.qmax_eta_det = r.list(value);
    } else if (key == "qmax.tol") {
      cfg.qmax_tol = r.number(value);
    } else if (key == "verify.points") {
      cfg.verify_points = static_cast<int>(r.integer(value));
      if (cfg.verify_points < 1) r.fail("must be >= 1");
    } else if (key == "verify.seed") {
      cfg.seed = static_cast<std::uint64_t>(r.integer(value));
    } else if (key == "verify.fault") {
      cfg.fault = r.number(value);
    } else {
      r.fail("unknown key");
    }
  }

  for (const auto &[name, used] : styles) {
    if (used.size() > 1) {
      std::string lines;
      for (const auto &[style, line] : used) lines += (lines.empty() ? "" : ", ") + std::to_string(line);
      throw Error(ErrorKind::ConflictingSourceSpec,
                  name + " is specified in more than one style (lines " + lines + ")");
    }
  }
  if (tau_ns_set && tau_s_set) {
    throw Error(ErrorKind::ParseError, "field 'tau_ns': conflicts with tau_s");
  }
  try {
    cfg.params.validate();
  } catch (const Error &e) {
    throw Error(ErrorKind::ParseError, std::string("invalid system parameters: ") + e.what());
  }
  return cfg;
}

/// Inverse of parse_config; every field is written so the round trip is exact.
inline std::string emit_config(const SweepConfig &cfg) {
  using detail::format_double;
  std::ostringstream os;
  os << "mode = " << to_string(cfg.mode) << "\n";
  os << "L = " << format_double(cfg.params.length_km) << "\n";
  os << "L_att = " << format_double(cfg.params.attenuation_length_km) << "\n";
  os << "c_fiber = " << format_double(cfg.params.c_fiber) << "\n";
  os << "tau_s = " << format_double(cfg.params.tau_s) << "\n";
  os << "eta_det = " << format_double(cfg.params.eta_det) << "\n";
  os << "n_max = " << cfg.n_max << "\n";
  os << "L_start = " << format_double(cfg.lengths.start) << "\n";
  os << "L_stop = " << format_double(cfg.lengths.stop) << "\n";
  os << "L_points = " << cfg.lengths.points << "\n";
  os << "L_spacing = " << (cfg.lengths.spacing == Spacing::Log ? "log" : "linear") << "\n";
  os << "threads = " << cfg.threads << "\n";
  if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";
  if (!cfg.json_out.empty()) os << "json_out = " << cfg.json_out << "\n";
  os << "abs_tol = " << format_double(cfg.abs_tol) << "\n";
  os << "rel_tol = " << format_double(cfg.rel_tol) << "\n";
  auto source = [&](const SourceSpec &s, const std::string &prefix, const char *zero,
                    const char *ratio, const char *lambda) {
    switch (s.style) {
    case SourceSpec::Style::Default: break;
    case SourceSpec::Style::Ratio:
      os << prefix << zero << " = " << format_double(s.zero) << "\n";
      os << prefix << ratio << " = " << format_double(s.ratio) << "\n";
      break;
    case SourceSpec::Style::Explicit:
      os << prefix << "probs = " << detail::format_list(s.probs) << "\n";
      break;
    case SourceSpec::Style::Pdc:
      os << prefix << lambda << " = " << format_double(s.lambda) << "\n";
      break;
    }
  };
  source(cfg.source, "source.", "p0", "P", "lambda");
  source(cfg.qnd, "qnd.", "q0", "Q", "mu");
  os << "qmax.p0 = " << detail::format_list(cfg.qmax_p0) << "\n";
  os << "qmax.P = " << detail::format_list(cfg.qmax_P) << "\n";
  os << "qmax.eta_det = " << detail::format_list(cfg.qmax_eta_det) << "\n";
  os << "qmax.tol = " << format_double(cfg.qmax_tol) << "\n";
  os << "verify.points = " << cfg.verify_points << "\n";
  os << "verify.seed = " << cfg.seed << "\n";
  os << "verify.fault = " << format_double(cfg.fault) << "\n";
  return os.str();
}

/// Runs fn(i) for i in [0, count) on `threads` workers.
inline void parallel_for(size_t count, int threads, const std::function<void(size_t)> &fn) {
  const size_t workers = std::min<size_t>(static_cast<size_t>(std::max(1, threads)), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto &t : pool) t.join();
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct SweepRow {
  double L_km = 0, eta_ch = 0;
  RateBreakdown rate;
  double plob = 0;
  bool beats = false;
};

inline std::vector<SweepRow> run_sweep(const SweepConfig &cfg) {
  const std::vector<double> grid = cfg.lengths.grid();
  const SourceRoles roles = cfg.roles();
  cfg.params.validate();
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](size_t i) {
    SystemParams at = cfg.params;
    at.length_km = grid[i];
    const auto ctx = make_context(roles, at);
    SweepRow &row = rows[i];
    row.L_km = grid[i];
    row.eta_ch = ctx.eta_ch;
    row.rate = secret_key_rate(ctx);
    row.plob = plob_bound(ctx.eta_ch);
    row.beats = row.rate.rate > row.plob;
  });
  return rows;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline void write_csv_row(std::ostream &os, const std::vector<std::string> &fields) {
  for (size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
  os << "\r\n";
}

inline const std::vector<std::string> &sweep_columns() {
  static const std::vector<std::string> cols{"L_km",   "eta_ch", "p_qnd", "p_c_z",
                                             "p_nc_z", "p_c_x",  "p_nc_x", "e_z",
                                             "e_x",    "rate",   "plob_bound", "beats_bound"};
  return cols;
}

inline void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows) {
  using detail::format_double;
  write_csv_row(os, sweep_columns());
  for (const auto &r : rows) {
    write_csv_row(os, {format_double(r.L_km), format_double(r.eta_ch), format_double(r.rate.p_qnd),
                       format_double(r.rate.p_c_z), format_double(r.rate.p_nc_z),
                       format_double(r.rate.p_c_x), format_double(r.rate.p_nc_x),
                       format_double(r.rate.e_z), format_double(r.rate.e_x),
                       format_double(r.rate.rate), format_double(r.plob),
                       r.beats ? "true" : "false"});
  }
}

struct QmaxRow {
  double p0 = 0, P = 0, q0 = 0, eta_det = 0, tau_s = 0;
  QmaxResult result;
  QmaxResult reference; ///< same sources at eta_det = 1, tau = 0
  double ratio = 0;     ///< result.q_max / reference.q_max, 0 if the reference is 0
};

/// Q^max table over the (p0, P, eta_det) grid of the config, at the config's tau.
inline std::vector<QmaxRow> run_qmax(const SweepConfig &cfg) {
  if (cfg.qnd.style != SourceSpec::Style::Ratio && cfg.qnd.style != SourceSpec::Style::Default) {
    throw Error(ErrorKind::InvalidParameter, "qmax mode needs the QND source in ratio style (qnd.q0)");
  }
  const double q0 = cfg.qnd.style == SourceSpec::Style::Ratio ? cfg.qnd.zero : 0.2;
  QmaxOptions options;
  options.grid = cfg.lengths.grid();
  options.tol = cfg.qmax_tol;

  struct Cell {
    double p0, P;
  };
  std::vector<Cell> cells;
  for (double p0 : cfg.qmax_p0)
    for (double P : cfg.qmax_P) cells.push_back({p0, P});
  const size_t per_cell = cfg.qmax_eta_det.size() + 1;
  std::vector<QmaxResult> results(cells.size() * per_cell);
  parallel_for(results.size(), cfg.threads, [&](size_t i) {
    const Cell &cell = cells[i / per_cell];
    const size_t j = i % per_cell;
    SystemParams params = cfg.params;
    if (j == 0) {
      params.eta_det = 1.0;
      params.tau_s = 0.0;
    } else {
      params.eta_det = cfg.qmax_eta_det[j - 1];
    }
    results[i] = q_max_search(cell.p0, cell.P, q0, params, options);
  });

  std::vector<QmaxRow> rows;
  for (size_t c = 0; c < cells.size(); ++c) {
    const QmaxResult &ref = results[c * per_cell];
    for (size_t j = 1; j < per_cell; ++j) {
      QmaxRow row{cells[c].p0, cells[c].P, q0, cfg.qmax_eta_det[j - 1], cfg.params.tau_s,
                  results[c * per_cell + j], ref, 0.0};
      row.ratio = ref.q_max > 0.0 ? row.result.q_max / ref.q_max : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_qmax_csv(std::ostream &os, const std::vector<QmaxRow> &rows) {
  using detail::format_double;
  write_csv_row(os, {"p0", "P", "q0", "eta_det", "tau_s", "q_max", "q_max_ref", "ratio",
                     "beatable", "monotone"});
  for (const auto &r : rows) {
    write_csv_row(os, {format_double(r.p0), format_double(r.P), format_double(r.q0),
                       format_double(r.eta_det), format_double(r.tau_s),
                       format_double(r.result.q_max), format_double(r.reference.q_max),
                       format_double(r.ratio), r.result.beatable ? "true" : "false",
                       r.result.monotone && r.reference.monotone ? "true" : "false"});
  }
}

// ---- verification of the closed form against the Fock oracle ----

struct Deviation {
  double abs = 0, rel = 0;
};

/// Agreement test used by verify: both the absolute and the relative deviation
/// must be within tolerance. Pairs that are both below kNumericalZero count as equal.
inline constexpr double kNumericalZero = 1e-15;

inline Deviation deviation(double a, double b) {
  const double d = std::abs(a - b);
  const double scale = std::max(std::abs(a), std::abs(b));
  return {d, scale > 0.0 ? d / scale : 0.0};
}

inline bool agrees(double a, double b, double abs_tol, double rel_tol) {
  if (std::abs(a) < kNumericalZero && std::abs(b) < kNumericalZero) return true;
  const Deviation d = deviation(a, b);
  return d.abs <= abs_tol && d.rel <= rel_tol;
}

struct VerifyPoint {
  SourceRoles roles;
  SystemParams params;
  Probabilities<double> closed, oracle;
  bool unit_efficiency = false; ///< also compared with the eta_det = 1 closed forms
  Deviation worst;
  bool pass = false;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<VerifyPoint> points;
  bool all_pass() const {
    return std::all_of(points.begin(), points.end(), [](const VerifyPoint &p) { return p.pass; });
  }
};

inline std::array<double, 5> as_array(const Probabilities<double> &p) {
  return {p.p_qnd, p.p_c_z, p.p_nc_z, p.p_c_x, p.p_nc_x};
}

/// Randomized closed-form vs oracle comparison. Every fifth point runs at unit
/// efficiency and is also checked against the symbolic closed forms at 1e-12.
inline VerifyReport run_verify(const SweepConfig &cfg) {
  if (cfg.n_max > 2) {
    throw Error(ErrorKind::CapExceeded, "verify supports n_max <= 2 (oracle feasibility cap)");
  }
  VerifyReport report;
  report.seed = cfg.seed;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_stats = [&] {
    std::vector<double> p(static_cast<size_t>(cfg.n_max) + 1);
    double sum = 0.0;
    for (auto &x : p) sum += (x = unit(rng) + 1e-3);
    for (auto &x : p) x /= sum;
    double total = 0.0;
    for (size_t i = 0; i + 1 < p.size(); ++i) total += p[i];
    p.back() = std::max(0.0, 1.0 - total); // exact normalization in double
    return make_statistics(p);
  };
  for (int i = 0; i < cfg.verify_points; ++i) {
    VerifyPoint pt;
    pt.roles = {random_stats(), random_stats()};
    pt.params = cfg.params;
    pt.params.length_km = 1.0 + 299.0 * unit(rng);
    pt.params.eta_det = 0.3 + 0.7 * unit(rng);
    pt.params.tau_s = unit(rng) < 0.5 ? 0.0 : 67e-9;
    pt.unit_efficiency = i % 5 == 0;
    if (pt.unit_efficiency) {
      pt.params.eta_det = 1.0;
      pt.params.tau_s = 0.0;
    }
    report.points.push_back(pt);
  }
  parallel_for(report.points.size(), cfg.threads, [&](size_t i) {
    VerifyPoint &pt = report.points[i];
    pt.closed = probabilities(make_context(pt.roles, pt.params));
    pt.closed.p_c_z *= 1.0 + cfg.fault;
    pt.oracle = fock::oracle_pipeline(pt.roles, pt.params);
    const auto c = as_array(pt.closed), o = as_array(pt.oracle);
    pt.pass = true;
    for (size_t j = 0; j < c.size(); ++j) {
      const Deviation d = deviation(c[j], o[j]);
      pt.worst.abs = std::max(pt.worst.abs, d.abs);
      pt.worst.rel = std::max(pt.worst.rel, d.rel);
      pt.pass = pt.pass && agrees(c[j], o[j], cfg.abs_tol, cfg.rel_tol);
    }
    if (pt.unit_efficiency) {
      const double eta = channel_transmittance(pt.params);
      const double p1 = pt.roles.alice_bob[1], q1 = pt.roles.qnd[1], q2 = pt.roles.qnd[2];
      const std::array<double, 5> exact{UnitEfficiency<>::p_qnd(p1, q1, q2, eta),
                                        UnitEfficiency<>::p_c(p1, q1, eta), 0.0,
                                        UnitEfficiency<>::p_c(p1, q1, eta), 0.0};
      for (size_t j = 0; j < c.size(); ++j) pt.pass = pt.pass && std::abs(c[j] - exact[j]) <= 1e-12;
    }
  });
  return report;
}

inline void write_verify_report(std::ostream &os, const VerifyReport &report) {
  using detail::format_double;
  static const char *names[] = {"p_qnd", "p_c_z", "p_nc_z", "p_c_x", "p_nc_x"};
  os << "seed " << report.seed << "\n";
  for (size_t i = 0; i < report.points.size(); ++i) {
    const auto &pt = report.points[i];
    os << "point " << i << " L=" << format_double(pt.params.length_km)
       << " eta_det=" << format_double(pt.params.eta_det)
       << " tau_s=" << format_double(pt.params.tau_s)
       << " p=" << detail::format_list(pt.roles.alice_bob.probs())
       << " q=" << detail::format_list(pt.roles.qnd.probs())
       << (pt.unit_efficiency ? " unit-efficiency" : "") << "\n";
    const auto c = as_array(pt.closed), o = as_array(pt.oracle);
    for (size_t j = 0; j < c.size(); ++j) {
      const Deviation d = deviation(c[j], o[j]);
      os << "  " << names[j] << " closed=" << format_double(c[j]) << " oracle=" << format_double(o[j])
         << " abs=" << format_double(d.abs) << " rel=" << format_double(d.rel) << "\n";
    }
    os << "  " << (pt.pass ? "PASS" : "FAIL") << "\n";
  }
  size_t passed = 0;
  for (const auto &pt : report.points) passed += pt.pass ? 1 : 0;
  os << (report.all_pass() ? "PASS " : "FAIL ") << passed << "/" << report.points.size() << "\n";
}

} // namespace amdi
