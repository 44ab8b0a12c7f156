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

// amdi: command-line front end for the AMDI-QKD rate engine.
//
//   amdi rate --L 100 [--eta-det 0.9] [--tau 67] [--source p0,p1,p2] [--qnd-source q0,q1,q2]
//   amdi sweep --config sweep.cfg --out rates.csv
//   amdi qmax --config fig4.cfg --out qmax.csv
//   amdi verify [--points 50] [--seed 7]
//   amdi check-pdc --lambda 0.5 --mu 0.01
//
// Exit codes: 0 success, 1 usage or configuration error, 2 verification
// failure, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amdi/amdi.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw amdi::Error(amdi::ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a callback to a file, or to stdout when path is empty or "-".
void write_output(const std::string &path, const std::function<void(std::ostream &)> &emit) {
  if (path.empty() || path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw amdi::Error(amdi::ErrorKind::IoError, "cannot write " + path);
  emit(out);
  out.flush();
  if (!out) throw amdi::Error(amdi::ErrorKind::IoError, "write failed for " + path);
}

std::vector<double> parse_list(const std::string &text) {
  amdi::detail::ConfigReader reader(0, "list");
  return reader.list(text);
}

nlohmann::json sweep_json(const amdi::SweepConfig &cfg, const std::vector<amdi::SweepRow> &rows) {
  nlohmann::json doc;
  doc["config"] = amdi::emit_config(cfg);
  auto &out = doc["rows"] = nlohmann::json::array();
  for (const auto &r : rows) {
    out.push_back({{"L_km", r.L_km},
                   {"eta_ch", r.eta_ch},
                   {"p_qnd", r.rate.p_qnd},
                   {"p_c_z", r.rate.p_c_z},
                   {"p_nc_z", r.rate.p_nc_z},
                   {"p_c_x", r.rate.p_c_x},
                   {"p_nc_x", r.rate.p_nc_x},
                   {"e_z", r.rate.e_z},
                   {"e_x", r.rate.e_x},
                   {"rate", r.rate.rate},
                   {"plob_bound", r.plob},
                   {"beats_bound", r.beats}});
  }
  return doc;
}

void print_rate(const amdi::SourceRoles &roles, const amdi::SystemParams &params) {
  using amdi::detail::format_double;
  const auto ctx = amdi::make_context(roles, params);
  const auto r = amdi::secret_key_rate(ctx);
  std::cout << "L_km " << format_double(params.length_km) << "\n"
            << "eta_ch " << format_double(ctx.eta_ch) << "\n"
            << "eta_det_bsm " << format_double(ctx.eta_det_bsm) << "\n"
            << "p_qnd " << format_double(r.p_qnd) << "\n"
            << "p_c_z " << format_double(r.p_c_z) << "\n"
            << "p_nc_z " << format_double(r.p_nc_z) << "\n"
            << "p_c_x " << format_double(r.p_c_x) << "\n"
            << "p_nc_x " << format_double(r.p_nc_x) << "\n"
            << "p_s " << format_double(r.p_s) << "\n"
            << "p_bsm " << format_double(r.p_bsm) << "\n"
            << "e_z " << format_double(r.e_z) << "\n"
            << "e_x " << format_double(r.e_x) << "\n"
            << "rate " << format_double(r.rate) << "\n"
            << "plob_bound " << format_double(amdi::plob_bound(ctx.eta_ch)) << "\n"
            << "degenerate " << (r.degenerate ? "true" : "false") << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"AMDI-QKD asymptotic secret key rate engine"};
  app.require_subcommand(1);

  auto *rate = app.add_subcommand("rate", "key rate at one distance");
  double L = 100.0, eta_det = 1.0, tau_ns = 67.0;
  std::string source_text, qnd_text;
  rate->add_option("--L", L, "distance Alice-Bob in km")->required();
  rate->add_option("--eta-det", eta_det, "detector efficiency");
  rate->add_option("--tau", tau_ns, "feedforward time in ns");
  rate->add_option("--source", source_text, "p0,p1,p2 of S_AC and S_BC (default 0,1)");
  rate->add_option("--qnd-source", qnd_text, "q0,q1,q2 of the QND sources (default 0,1)");

  std::string config_path, out_path;
  int threads = 0;
  auto *sweep = app.add_subcommand("sweep", "rate versus distance table");
  sweep->add_option("--config", config_path, "configuration file")->required();
  sweep->add_option("--out", out_path, "CSV output (default: config 'out' or stdout)");
  sweep->add_option("--threads", threads, "worker threads (overrides config)");

  auto *qmax = app.add_subcommand("qmax", "Q^max table over (p0, P, eta_det)");
  qmax->add_option("--config", config_path, "configuration file")->required();
  qmax->add_option("--out", out_path, "CSV output");
  qmax->add_option("--threads", threads, "worker threads (overrides config)");

  auto *verify = app.add_subcommand("verify", "closed form against the Fock oracle");
  int points = 0;
  long long seed = -1;
  double fault = 0.0;
  verify->add_option("--config", config_path, "optional configuration file");
  verify->add_option("--points", points, "number of random points");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--out", out_path, "report output");
  verify->add_option("--threads", threads, "worker threads");
  verify->add_option("--fault", fault, "relative perturbation of p_c^Z (harness self-test)");

  auto *pdc = app.add_subcommand("check-pdc", "necessary condition for PDC sources");
  double lambda = 0.0, mu = 0.0;
  pdc->add_option("--lambda", lambda, "pump parameter of S_AC, S_BC")->required();
  pdc->add_option("--mu", mu, "pump parameter of S_QND")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rate->parsed()) {
      amdi::SystemParams params;
      params.length_km = L;
      params.eta_det = eta_det;
      params.tau_s = tau_ns * 1e-9;
      const amdi::SourceRoles roles{
          source_text.empty() ? amdi::make_statistics({0.0, 1.0}) : amdi::make_statistics(parse_list(source_text)),
          qnd_text.empty() ? amdi::make_statistics({0.0, 1.0}) : amdi::make_statistics(parse_list(qnd_text))};
      print_rate(roles, params);
      return kExitOk;
    }
    if (sweep->parsed() || qmax->parsed()) {
      amdi::SweepConfig cfg = amdi::parse_config(read_file(config_path));
      if (threads > 0) cfg.threads = threads;
      if (!out_path.empty()) cfg.out = out_path;
      if (sweep->parsed()) {
        const auto rows = amdi::run_sweep(cfg);
        write_output(cfg.out, [&](std::ostream &os) { amdi::write_sweep_csv(os, rows); });
        if (!cfg.json_out.empty()) {
          write_output(cfg.json_out, [&](std::ostream &os) { os << sweep_json(cfg, rows).dump(2) << "\n"; });
        }
      } else {
        const auto rows = amdi::run_qmax(cfg);
        write_output(cfg.out, [&](std::ostream &os) { amdi::write_qmax_csv(os, rows); });
      }
      return kExitOk;
    }
    if (verify->parsed()) {
      amdi::SweepConfig cfg;
      if (!config_path.empty()) cfg = amdi::parse_config(read_file(config_path));
      if (points > 0) cfg.verify_points = points;
      if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
      if (threads > 0) cfg.threads = threads;
      if (fault != 0.0) cfg.fault = fault;
      const auto report = amdi::run_verify(cfg);
      write_output(out_path, [&](std::ostream &os) { amdi::write_verify_report(os, report); });
      return report.all_pass() ? kExitOk : kExitVerify;
    }
    if (pdc->parsed()) {
      const auto c = amdi::pdc_condition_check(lambda, mu);
      std::cout << "lhs " << amdi::detail::format_double(c.lhs) << "\n"
                << "rhs " << amdi::detail::format_double(c.rhs) << "\n"
                << "satisfiable " << (c.satisfiable ? "true" : "false") << "\n";
      return kExitOk;
    }
  } catch (const amdi::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == amdi::ErrorKind::IoError ? kExitIo : kExitUsage;
  }
  return kExitUsage;
}
