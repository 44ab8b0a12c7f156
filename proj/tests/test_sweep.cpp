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

#include <gtest/gtest.h>

#include <sstream>

#include "amdi/sweep.hpp"

using namespace amdi;

namespace {

ErrorKind parse_error_kind(const std::string &text, std::string *message = nullptr) {
  try {
    parse_config(text);
  } catch (const Error &e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorKind::IoError;
}

std::string sweep_csv(SweepConfig cfg, int threads) {
  cfg.threads = threads;
  std::ostringstream os;
  write_sweep_csv(os, run_sweep(cfg));
  return os.str();
}

} // namespace

TEST(ParseConfig, Defaults) {
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg, SweepConfig{});
  EXPECT_EQ(cfg.params.attenuation_length_km, 22.0);
  EXPECT_EQ(cfg.lengths.points, 200);
  EXPECT_EQ(cfg.source.style, SourceSpec::Style::Default);
}

TEST(ParseConfig, FullExample) {
  const auto cfg = parse_config(R"(# sweep over a lossy link
mode = sweep
L = 50
L_att = 20      # km
eta_det = 0.8
tau_ns = 67
n_max = 2
L_start = 5
L_stop = 400
L_points = 30
L_spacing = linear
threads = 3
source.probs = 0.1, 0.8, 0.1
qnd.q0 = 0.2
qnd.Q = 0.05
out = rates.csv
)");
  EXPECT_EQ(cfg.mode, Mode::Sweep);
  EXPECT_EQ(cfg.params.length_km, 50.0);
  EXPECT_EQ(cfg.params.attenuation_length_km, 20.0);
  EXPECT_EQ(cfg.params.eta_det, 0.8);
  EXPECT_NEAR(cfg.params.tau_s, 67e-9, 1e-22);
  EXPECT_EQ(cfg.lengths.spacing, Spacing::Linear);
  EXPECT_EQ(cfg.lengths.points, 30);
  EXPECT_EQ(cfg.threads, 3);
  EXPECT_EQ(cfg.source.style, SourceSpec::Style::Explicit);
  EXPECT_EQ(cfg.source.probs, (std::vector<double>{0.1, 0.8, 0.1}));
  EXPECT_EQ(cfg.qnd.style, SourceSpec::Style::Ratio);
  EXPECT_EQ(cfg.out, "rates.csv");
  const auto roles = cfg.roles();
  EXPECT_NEAR(roles.qnd[1], 0.8 / 1.05, 1e-15);
  EXPECT_NEAR(roles.qnd[2], 0.05 * 0.8 / 1.05, 1e-15);
}

TEST(ParseConfig, ErrorsCarryLineAndField) {
  std::string msg;
  EXPECT_EQ(parse_error_kind("mode = sweep\n\nbogus = 1\n", &msg), ErrorKind::ParseError);
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("bogus"), std::string::npos) << msg;

  EXPECT_EQ(parse_error_kind("L = 10\nL = 20\n", &msg), ErrorKind::ParseError);
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;

  EXPECT_EQ(parse_error_kind("# c\neta_det = high\n", &msg), ErrorKind::ParseError);
  EXPECT_NE(msg.find("line 2, field 'eta_det'"), std::string::npos) << msg;

  EXPECT_EQ(parse_error_kind("L_points = 2.5\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("mode = fast\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("no equals sign\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("L_spacing = cubic\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("threads = 0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("tau_ns = 67\ntau_s = 6.7e-8\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("eta_det = 1.5\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("L = -3\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("source.probs = \n"), ErrorKind::ParseError);
}

TEST(ParseConfig, ConflictingSourceStyles) {
  std::string msg;
  EXPECT_EQ(parse_error_kind("source.P = 0.01\nsource.probs = 0.1,0.8,0.1\n", &msg),
            ErrorKind::ConflictingSourceSpec);
  EXPECT_NE(msg.find("lines 1, 2"), std::string::npos) << msg;
  EXPECT_EQ(parse_error_kind("qnd.mu = 0.1\nqnd.q0 = 0.2\n"), ErrorKind::ConflictingSourceSpec);
  // Different sources may use different styles.
  EXPECT_NO_THROW(parse_config("source.lambda = 0.1\nqnd.probs = 0,1\n"));
}

TEST(ParseConfig, RoundTrip) {
  SweepConfig cfg;
  cfg.mode = Mode::Qmax;
  cfg.params.length_km = 123.456789;
  cfg.params.attenuation_length_km = 21.7;
  cfg.params.eta_det = 0.7;
  cfg.params.tau_s = 67e-9;
  cfg.lengths = {2.5, 750.0, 17, Spacing::Linear};
  cfg.threads = 4;
  cfg.out = "q.csv";
  cfg.json_out = "q.json";
  cfg.source.style = SourceSpec::Style::Ratio;
  cfg.source.zero = 0.1;
  cfg.source.ratio = 0.25;
  cfg.qnd.style = SourceSpec::Style::Pdc;
  cfg.qnd.lambda = 0.3;
  cfg.qmax_P = {0.01, 0.1, 0.25};
  cfg.qmax_tol = 1e-9;
  cfg.verify_points = 7;
  cfg.seed = 99;
  cfg.fault = 1e-3;
  EXPECT_EQ(parse_config(emit_config(cfg)), cfg);

  SweepConfig explicit_cfg;
  explicit_cfg.source.style = SourceSpec::Style::Explicit;
  explicit_cfg.source.probs = {0.1, 0.7, 0.2};
  explicit_cfg.qnd.style = SourceSpec::Style::Explicit;
  explicit_cfg.qnd.probs = {1.0 / 3.0, 2.0 / 3.0};
  EXPECT_EQ(parse_config(emit_config(explicit_cfg)), explicit_cfg);
  EXPECT_EQ(parse_config(emit_config(SweepConfig{})), SweepConfig{});
}

TEST(RunSweep, PerfectSourcesRateIsQuarterTransmittance) {
  auto cfg = parse_config("eta_det = 1\ntau_ns = 0\nL_start = 10\nL_stop = 500\nL_points = 12\n");
  const auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), 12u);
  for (const auto &row : rows) {
    EXPECT_NEAR(row.rate.rate / (row.eta_ch / 4.0), 1.0, 1e-12);
    EXPECT_NEAR(row.plob, plob_bound(row.eta_ch), 0.0);
  }
  EXPECT_TRUE(rows.back().beats);
  EXPECT_NEAR(rows.front().L_km, 10.0, 1e-12);
  EXPECT_NEAR(rows.back().L_km, 500.0, 1e-12);
}

TEST(RunSweep, PdcSourcesNeverBeat) {
  const auto rows = run_sweep(parse_config("source.lambda = 0.2\nqnd.mu = 0.05\nL_points = 40\n"));
  for (const auto &row : rows) EXPECT_FALSE(row.beats) << row.L_km;
}

TEST(RunSweep, EmptyGridRejected) {
  auto cfg = parse_config("L_points = 0\n");
  EXPECT_THROW(run_sweep(cfg), Error);
}

TEST(RunSweep, InvalidSourceRejected) {
  EXPECT_THROW(run_sweep(parse_config("source.probs = 0.5,0.7\n")), Error);
}

TEST(RunSweep, DeterministicAcrossThreads) {
  const auto cfg = parse_config("source.probs = 0.1,0.8,0.1\nqnd.probs = 0.2,0.7,0.1\n"
                                "eta_det = 0.8\nL_points = 60\n");
  const std::string one = sweep_csv(cfg, 1);
  EXPECT_EQ(one, sweep_csv(cfg, 1));
  EXPECT_EQ(one, sweep_csv(cfg, 4));
  EXPECT_EQ(one.substr(0, 6), "L_km,e");
  EXPECT_NE(one.find("\r\n"), std::string::npos);
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
  std::ostringstream os;
  write_csv_row(os, {"x", "1,5", ""});
  EXPECT_EQ(os.str(), "x,\"1,5\",\r\n");
}

TEST(Csv, RoundTripPrecision) {
  std::ostringstream os;
  SweepRow row;
  row.L_km = 1.0 / 3.0;
  write_sweep_csv(os, {row});
  const std::string text = os.str();
  const auto line = text.substr(text.find("\r\n") + 2);
  EXPECT_EQ(std::stod(line.substr(0, line.find(','))), 1.0 / 3.0);
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](size_t i) {
                 if (i == 7) throw Error(ErrorKind::DomainError, "boom");
               }),
               Error);
}

TEST(Verify, SmallRunPasses) {
  SweepConfig cfg;
  cfg.verify_points = 6;
  cfg.seed = 3;
  cfg.threads = 2;
  const auto report = run_verify(cfg);
  ASSERT_EQ(report.points.size(), 6u);
  EXPECT_TRUE(report.all_pass());
  EXPECT_TRUE(report.points[0].unit_efficiency);
  EXPECT_EQ(report.points[0].params.eta_det, 1.0);
  std::ostringstream os;
  write_verify_report(os, report);
  EXPECT_NE(os.str().find("PASS 6/6"), std::string::npos);
}

TEST(Verify, SameSeedSamePoints) {
  SweepConfig cfg;
  cfg.verify_points = 3;
  const auto a = run_verify(cfg), b = run_verify(cfg);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.points[i].params, b.points[i].params);
    EXPECT_EQ(a.points[i].closed.p_c_z, b.points[i].closed.p_c_z);
  }
}

TEST(Verify, InjectedFaultIsDetected) {
  SweepConfig cfg;
  cfg.verify_points = 2;
  cfg.fault = 1e-3;
  const auto report = run_verify(cfg);
  EXPECT_FALSE(report.all_pass());
  std::ostringstream os;
  write_verify_report(os, report);
  EXPECT_NE(os.str().find("FAIL"), std::string::npos);
}

TEST(Verify, OracleCapEnforced) {
  SweepConfig cfg;
  cfg.n_max = 3;
  try {
    run_verify(cfg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
}

TEST(Verify, Agreement) {
  EXPECT_TRUE(agrees(1e-17, 0.0, 1e-9, 1e-6));
  EXPECT_TRUE(agrees(1.0, 1.0 + 5e-10, 1e-9, 1e-6));
  EXPECT_FALSE(agrees(1.0, 1.0 + 2e-9, 1e-9, 1e-6));
  EXPECT_FALSE(agrees(1e-8, 1.1e-8, 1e-9, 1e-6));
}

TEST(Qmax, SmallTable) {
  auto cfg = parse_config("mode = qmax\ntau_ns = 67\nqnd.q0 = 0.2\nqmax.p0 = 0.1\n"
                          "qmax.P = 0.01\nqmax.eta_det = 0.9,0.7\nqmax.tol = 1e-9\n");
  cfg.threads = 3;
  const auto rows = run_qmax(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].reference.q_max, rows[1].reference.q_max);
  EXPECT_GT(rows[0].ratio, rows[1].ratio);
  EXPECT_GT(rows[1].ratio, 0.0);
  EXPECT_LT(rows[0].ratio, 1.0);
  std::ostringstream os;
  write_qmax_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, 12), "p0,P,q0,eta_");

  cfg.threads = 1;
  std::ostringstream serial;
  write_qmax_csv(serial, run_qmax(cfg));
  EXPECT_EQ(serial.str(), os.str());
}

TEST(Qmax, RequiresRatioQndSource) {
  auto cfg = parse_config("mode = qmax\nqnd.probs = 0.2,0.7,0.1\n");
  EXPECT_THROW(run_qmax(cfg), Error);
}
