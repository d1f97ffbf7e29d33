/*
 * Copyright 2026 The sis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "sis/scenario.hpp"

using namespace sis;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string config_text(const std::string& name) {
  return read_file(fs::path(SIS_CONFIG_DIR) / name);
}

ScenarioConfig config(const std::string& name) { return parse_scenario_config(config_text(name)); }

Pattern pat(const std::string& text) { return Pattern::parse(text, 2, 4); }

std::string without_header(const std::string& text) {
  return text.rfind("# ", 0) == 0 ? text.substr(text.find('\n') + 1) : text;
}

fs::path scratch(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / ("sis_test_scenario_" + leaf);
  fs::remove_all(dir);
  return dir;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("shipped configs parse and round-trip") {
  for (const char* name : {"eq2.json", "eq3.json", "eq5.json"}) {
    const ScenarioConfig cfg = config(name);
    const ScenarioConfig again = parse_scenario_config(scenario_config_to_json(cfg));
    CHECK(scenario_config_to_json(again) == scenario_config_to_json(cfg));
  }
  const SweepSpec s = parse_sweep_spec(config_text("sweep.json"));
  CHECK(s.phase_grid.size() == 181);
  CHECK(s.phase_grid.front() == 0.0);
  CHECK(s.phase_grid.back() == std::numbers::pi);
  CHECK(parse_sweep_spec(sweep_spec_to_json(s)).phase_grid == s.phase_grid);
}

TEST_CASE("config errors name the offending key") {
  const std::string base = config_text("eq3.json");
  CHECK(error_of([&] { parse_scenario_config(apply_override(base, "gain=1.2")); })
            .find("gain") != std::string::npos);
  CHECK(error_of([&] { parse_scenario_config(apply_override(base, "truncation=9")); })
            .find("truncation") != std::string::npos);
  CHECK(error_of([&] { parse_scenario_config(apply_override(base, "pump.0.magnitude=-1")); })
            .find("magnitude") != std::string::npos);
  CHECK(error_of([&] { parse_scenario_config(apply_override(base, "bogus=1")); })
            .find("bogus") != std::string::npos);
  CHECK(error_of([&] { parse_scenario_config(apply_override(base, "pump.1.index=-1")); })
            .find("duplicate") != std::string::npos);
  CHECK(error_of([&] { parse_scenario_config(apply_override(base, "detection.efficiencies.s9=0.5")); })
            .find("s9") != std::string::npos);
  CHECK(error_of([&] { parse_scenario_config("{not json"); }).find("malformed") != std::string::npos);
  CHECK_THROWS_AS(apply_override(base, "pump.7.phase=1"), Error);
  CHECK_THROWS_AS(apply_override(base, "no-equals-sign"), Error);

  const std::string sweep = config_text("sweep.json");
  CHECK_THROWS_AS(parse_sweep_spec(apply_override(sweep, "swept_pump_index=5")), Error);
  CHECK_THROWS_AS(parse_sweep_spec(apply_override(sweep, "phase_grid=[0.0, 7.0]")), Error);
}

TEST_CASE("overrides") {
  const std::string base = config_text("eq3.json");
  ScenarioConfig cfg = parse_scenario_config(apply_override(base, "pump.1.phase=1.25"));
  CHECK(cfg.pump[1].phase == 1.25);
  cfg = parse_scenario_config(apply_override(base, "detection.efficiencies.s2=0.5"));
  CHECK(cfg.detection.efficiencies.at("s2") == 0.5);
  cfg = parse_scenario_config(apply_override(base, "name=renamed"));
  CHECK(cfg.name == "renamed");
  cfg = parse_scenario_config(apply_override(base, "seed=99"));
  CHECK(cfg.seed == 99);
}

TEST_CASE("config hash is stable and sensitive") {
  const ScenarioConfig cfg = config("eq5.json");
  const std::string a = config_hash(scenario_config_to_json(cfg));
  CHECK(a.size() == 16);
  CHECK(a == config_hash(scenario_config_to_json(config("eq5.json"))));
  ScenarioConfig other = cfg;
  other.gain = 0.2;
  CHECK(a != config_hash(scenario_config_to_json(other)));
}

TEST_CASE("single pump: fourfold support is 2&3 only") {
  const ScenarioResult r = run_scenario(config("eq2.json"), {.exact_only = true});
  for (const auto& [p, v] : r.quantum_fourfold.entries()) {
    if (p == pat("i1+i2|s2+s3")) {
      CHECK(v > 0.0);
    } else {
      CHECK(v == 0.0);
    }
  }
}

TEST_CASE("two pumps: central twofold peaks are four times the side peaks") {
  const ScenarioResult r = run_scenario(config("eq3.json"), {.exact_only = true});
  const double side = r.quantum_twofold.at(pat("i1|s1"));
  CHECK(r.quantum_twofold.at(pat("i1|s2")) / side == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.quantum_twofold.at(pat("i2|s3")) / side == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.quantum_twofold.at(pat("i2|s4")) / side == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.quantum_twofold.at(pat("i1|s4")) == 0.0);
  CHECK(r.exact_contrast.n_constructive == 1);
  CHECK(r.exact_contrast.n_destructive == 0);
  CHECK_FALSE(r.sampled);
}

TEST_CASE("balanced three pumps: constructive on 1&3 and 2&4") {
  const ScenarioResult r = run_scenario(config("eq5.json"), {.exact_only = true});
  const double qw[] = {4, 200, 16, 1, 200, 4};
  const double cw[] = {100, 104, 80, 145, 104, 100};
  int k = 0;
  for (const auto& [p, v] : r.quantum_weights.entries()) {
    CHECK(v == doctest::Approx(qw[k]).epsilon(1e-12));
    CHECK(r.classical_weights.at(p) == doctest::Approx(cw[k]).epsilon(1e-12));
    ++k;
  }
  CHECK(r.exact_contrast.n_constructive == 2);
  CHECK(r.exact_contrast.n_destructive == 4);
  for (const ContrastEntry& e : r.exact_contrast.entries) {
    const bool constructive = e.pattern == pat("i1+i2|s1+s3") || e.pattern == pat("i1+i2|s2+s4");
    CHECK((e.ratio > 1.0) == constructive);
  }
}

TEST_CASE("artifacts are deterministic in the seed") {
  ScenarioConfig cfg = config("eq3.json");
  cfg.shots = 20000;
  cfg.gain = 0.3;
  const ScenarioResult a = run_scenario(cfg);
  const ScenarioResult b = run_scenario(cfg);
  CHECK(a.artifacts == b.artifacts);
  REQUIRE(a.sampled);
  for (const char* name : {"config.json", "jsa.csv", "jsa.json", "twofold.csv", "fourfold.csv",
                           "comparison.csv", "report.json", "twofold.svg", "fourfold.svg",
                           "comparison.svg"}) {
    CHECK(a.artifacts.contains(name));
  }
  CHECK(a.artifacts.at("twofold.csv").rfind("# scenario=two-pump seed=2018 config_hash=", 0) == 0);

  cfg.seed = 2019;
  const ScenarioResult c = run_scenario(cfg);
  CHECK(without_header(c.artifacts.at("twofold.csv")) !=
        without_header(a.artifacts.at("twofold.csv")));
  CHECK(without_header(c.artifacts.at("comparison.csv")) ==
        without_header(a.artifacts.at("comparison.csv")));
  CHECK(without_header(c.artifacts.at("jsa.csv")) == without_header(a.artifacts.at("jsa.csv")));
}

TEST_CASE("format selection") {
  const ScenarioResult r = run_scenario(config("eq2.json"), {.exact_only = true, .formats = kFormatCsv});
  for (const auto& [name, text] : r.artifacts) {
    CHECK((name.ends_with(".csv") || name == "config.json"));
  }
}

TEST_CASE("pipeline errors carry the field at fault") {
  ScenarioConfig cfg = config("eq3.json");
  cfg.pump = {{7, 1.0, 0.0}};
  CHECK(error_of([&] { run_scenario(cfg, {.exact_only = true}); }).find("pump") != std::string::npos);
  cfg = config("eq3.json");
  cfg.gain = 1.0;
  CHECK(error_of([&] { run_scenario(cfg, {.exact_only = true}); }).find("gain") != std::string::npos);
}

TEST_CASE("phase sweep of the middle pump") {
  SweepSpec spec = parse_sweep_spec(config_text("sweep.json"));
  spec.phase_grid.clear();
  for (int k = 0; k < 64; ++k) spec.phase_grid.push_back(2.0 * std::numbers::pi * k / 64.0);
  const SweepResult r = phase_sweep(spec, {.exact_only = true});
  REQUIRE(r.points.size() == 64);

  const double unit = r.points[0].twofold_abs2.at(pat("i1|s4")) / 4.0;  // |a3^2|^2 = 4
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    const SweepPoint& pt = r.points[k];
    const double central = pt.twofold_abs2.at(pat("i1|s2")) / unit;
    CHECK(central == doctest::Approx(17.0 + 8.0 * std::cos(2.0 * pt.theta)).epsilon(1e-9));
    CHECK(pt.twofold_abs2.at(pat("i1|s1")) / unit == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(pt.twofold_abs2.at(pat("i1|s4")) / unit == doctest::Approx(4.0).epsilon(1e-12));
    // Period pi.
    const SweepPoint& half = r.points[(k + 32) % 64];
    CHECK(half.twofold_abs2.at(pat("i2|s3")) ==
          doctest::Approx(pt.twofold_abs2.at(pat("i2|s3"))).epsilon(1e-12));
  }

  // At pi/2 the |psi|^2 table matches the balanced three-pump one.
  const ScenarioResult eq5 = run_scenario(config("eq5.json"), {.exact_only = true});
  const SweepPoint& quarter = r.points[16];
  const double scale = eq5.quantum_twofold.at(pat("i1|s1")) / quarter.twofold_abs2.at(pat("i1|s1"));
  for (const auto& [p, v] : quarter.twofold_abs2.entries()) {
    CHECK(v * scale == doctest::Approx(eq5.quantum_twofold.at(p)).epsilon(1e-9));
  }
  CHECK(r.artifacts.contains("sweep.csv"));
  CHECK(r.artifacts.contains("sweep.json"));
  CHECK(r.artifacts.contains("sweep.svg"));
}

TEST_CASE("oracle verification") {
  for (const char* name : {"eq3.json", "eq5.json"}) {
    const OracleReport rep = verify_oracle(config(name), 1e-10);
    CHECK(rep.passed);
    CHECK(rep.max_relative_deviation < 1e-10);
    CHECK(rep.patterns_checked > 0);
  }
  std::mt19937_64 rng(61);
  ScenarioConfig cfg = config("eq5.json");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (PumpComponent& c : cfg.pump) {
    c.magnitude = u(rng) + 0.1;
    c.phase = 6.0 * u(rng);
  }
  CHECK(verify_oracle(cfg, 1e-10).passed);
  cfg.truncation = 1;
  CHECK_THROWS_AS(verify_oracle(cfg), Error);
}

TEST_CASE("artifact commit is all or nothing") {
  const fs::path out = scratch("commit");
  commit_artifacts(out, {{"a.txt", "one"}, {"b.txt", "two"}});
  CHECK(read_file(out / "a.txt") == "one");

  CHECK_THROWS_AS(commit_artifacts(out, {{"c.txt", "three"}, {"no/such/dir.txt", "x"}}), Error);
  CHECK(read_file(out / "a.txt") == "one");
  CHECK_FALSE(fs::exists(out / "c.txt"));
  for (const auto& entry : fs::directory_iterator(out.parent_path())) {
    CHECK(entry.path().filename().string().find(".sis_test_scenario_commit.tmp") == std::string::npos);
  }

  commit_artifacts(out, {{"d.txt", "four"}});
  CHECK_FALSE(fs::exists(out / "a.txt"));
  CHECK(read_file(out / "d.txt") == "four");
  fs::remove_all(out);
}

TEST_CASE("summary json") {
  const ScenarioConfig cfg = config("eq3.json");
  const ScenarioResult r = run_scenario(cfg, {.exact_only = true});
  const auto j = nlohmann::json::parse(summary_json(r, cfg));
  CHECK(j.is_object());
  const auto o = nlohmann::json::parse(summary_json(verify_oracle(cfg)));
  CHECK(o["passed"] == true);
}
