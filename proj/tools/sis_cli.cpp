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

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sis/sis.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Options {
  std::string config;
  std::string out = "./out";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> shots;
  bool exact = false;
  std::string format = "all";
  std::vector<std::string> overrides;
  double tolerance = 1e-9;
};

// Status -> process exit code; prints a single-line diagnostic.
int report_failure(sis_status status, const std::string& context) {
  std::string msg = sis_last_error();
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::fprintf(stderr, "sis: %s%s\n", context.empty() ? "" : (context + ": ").c_str(), msg.c_str());
  return status == SIS_ERR_VALIDATION || status == SIS_ERR_IO ? kExitValidation : kExitNumerical;
}

struct StringDeleter {
  void operator()(char* s) const { sis_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ConfigDeleter {
  void operator()(sis_config* c) const { sis_config_free(c); }
};
struct SweepDeleter {
  void operator()(sis_sweep* s) const { sis_sweep_free(s); }
};

unsigned parse_formats(const std::string& f) {
  if (f == "csv") return SIS_FORMAT_CSV;
  if (f == "json") return SIS_FORMAT_JSON;
  if (f == "svg") return SIS_FORMAT_SVG;
  return SIS_FORMAT_ALL;
}

void add_common(CLI::App* sub, Options& opts, bool sampling) {
  sub->add_option("--config", opts.config, "Scenario (or sweep) JSON document")->required();
  sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", opts.seed, "Override the sampler seed");
  if (sampling) {
    sub->add_option("--shots", opts.shots, "Override the number of sampled shots");
    sub->add_flag("--exact", opts.exact, "Skip sampling; exact tables only");
  }
  sub->add_option("--format", opts.format, "Artifact formats")
      ->check(CLI::IsMember({"csv", "json", "svg", "all"}))
      ->capture_default_str();
  sub->add_option("overrides", opts.overrides, "dotted.path=value overrides");
}

std::optional<spdlog::level::level_enum> log_level_from_env() {
  const char* raw = std::getenv("SIS_LOG_LEVEL");
  if (!raw || !*raw) return spdlog::level::info;
  const std::string v = raw;
  if (v == "error") return spdlog::level::err;
  if (v == "info") return spdlog::level::info;
  if (v == "debug") return spdlog::level::debug;
  return std::nullopt;
}

using ConfigPtr = std::unique_ptr<sis_config, ConfigDeleter>;
using SweepPtr = std::unique_ptr<sis_sweep, SweepDeleter>;

int load_config(const Options& opts, ConfigPtr& out) {
  sis_config* raw = nullptr;
  if (sis_status s = sis_config_load(opts.config.c_str(), &raw); s != SIS_OK) {
    return report_failure(s, "");
  }
  out.reset(raw);
  for (const auto& o : opts.overrides) {
    if (sis_status s = sis_config_override(out.get(), o.c_str()); s != SIS_OK) {
      return report_failure(s, "override '" + o + "'");
    }
  }
  if (opts.seed) {
    if (sis_status s = sis_config_set_seed(out.get(), *opts.seed); s != SIS_OK) {
      return report_failure(s, "--seed");
    }
  }
  if (opts.shots) {
    if (sis_status s = sis_config_set_shots(out.get(), *opts.shots); s != SIS_OK) {
      return report_failure(s, "--shots");
    }
  }
  return kExitOk;
}

void print_comparison(const std::string& summary) {
  const auto j = nlohmann::json::parse(summary);
  const auto& entries = j.at("exact").at("contrast").at("entries");
  const auto& qw = j.at("exact").at("quantum_weights");
  const auto& cw = j.at("exact").at("classical_weights");
  std::printf("%-12s %14s %14s %10s  %s\n", "pattern", "|perm psi|^2", "perm|psi|^2", "ratio",
              "interference");
  for (const auto& e : entries) {
    const std::string label = e.at("pattern").get<std::string>();
    const std::string ratio =
        e.at("ratio").is_null() ? "-" : std::to_string(e.at("ratio").get<double>());
    std::printf("%-12s %14.6g %14.6g %10s  %s\n", label.c_str(), qw.at(label).get<double>(),
                cw.at(label).get<double>(), ratio.c_str(),
                e.at("interference").get<std::string>().c_str());
  }
}

int run_jsa(const Options& opts) {
  ConfigPtr cfg;
  if (int rc = load_config(opts, cfg); rc != kExitOk) return rc;
  char* summary = nullptr;
  if (sis_status s = sis_write_jsa(cfg.get(), opts.out.c_str(), parse_formats(opts.format), &summary);
      s != SIS_OK) {
    return report_failure(s, opts.config);
  }
  OwnedString owned(summary);
  spdlog::info("wrote JSA to {}", opts.out);
  std::fputs(summary, stdout);
  return kExitOk;
}

int run_scenario(const Options& opts, bool exact_only, bool print_full) {
  ConfigPtr cfg;
  if (int rc = load_config(opts, cfg); rc != kExitOk) return rc;
  char* summary = nullptr;
  spdlog::debug("running {} (exact_only={})", opts.config, exact_only);
  if (sis_status s = sis_run_scenario(cfg.get(), opts.out.c_str(), exact_only ? 1 : 0,
                                      parse_formats(opts.format), &summary);
      s != SIS_OK) {
    return report_failure(s, opts.config);
  }
  OwnedString owned(summary);
  spdlog::info("wrote artifacts to {}", opts.out);
  if (print_full) {
    std::fputs(summary, stdout);
  } else {
    print_comparison(summary);
  }
  return kExitOk;
}

int run_sweep(const Options& opts) {
  sis_sweep* raw = nullptr;
  if (sis_status s = sis_sweep_load(opts.config.c_str(), &raw); s != SIS_OK) {
    return report_failure(s, "");
  }
  SweepPtr sweep(raw);
  for (const auto& o : opts.overrides) {
    if (sis_status s = sis_sweep_override(sweep.get(), o.c_str()); s != SIS_OK) {
      return report_failure(s, "override '" + o + "'");
    }
  }
  if (opts.seed) {
    if (sis_status s = sis_sweep_set_seed(sweep.get(), *opts.seed); s != SIS_OK) {
      return report_failure(s, "--seed");
    }
  }
  if (opts.shots) {
    if (sis_status s = sis_sweep_set_shots(sweep.get(), *opts.shots); s != SIS_OK) {
      return report_failure(s, "--shots");
    }
  }
  char* summary = nullptr;
  if (sis_status s = sis_run_sweep(sweep.get(), opts.out.c_str(), opts.exact ? 1 : 0,
                                   parse_formats(opts.format), &summary);
      s != SIS_OK) {
    return report_failure(s, opts.config);
  }
  OwnedString owned(summary);
  spdlog::info("wrote sweep to {}", opts.out);
  std::fputs(summary, stdout);
  return kExitOk;
}

int run_verify(const Options& opts) {
  ConfigPtr cfg;
  if (int rc = load_config(opts, cfg); rc != kExitOk) return rc;
  double deviation = 0.0;
  int passed = 0;
  char* summary = nullptr;
  if (sis_status s = sis_verify_oracle(cfg.get(), opts.tolerance, &deviation, &passed, &summary);
      s != SIS_OK) {
    return report_failure(s, opts.config);
  }
  OwnedString owned(summary);
  std::printf("max relative deviation: %.3e (%s, tolerance %.1e)\n", deviation,
              passed ? "pass" : "FAIL", opts.tolerance);
  spdlog::debug("{}", summary);
  return passed ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("sis");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const auto level = log_level_from_env();
  if (!level) {
    std::fprintf(stderr, "sis: SIS_LOG_LEVEL must be one of error, info, debug\n");
    return kExitValidation;
  }
  spdlog::set_level(*level);

  CLI::App app{"Spectral-domain multi-photon interference simulator"};
  app.require_subcommand(1);
  Options opts;

  auto* jsa = app.add_subcommand("jsa", "Build the joint spectral amplitude matrix");
  add_common(jsa, opts, false);
  auto* predict = app.add_subcommand("predict", "Exact quantum and classical coincidence tables");
  add_common(predict, opts, false);
  auto* sample = app.add_subcommand("sample", "Seeded Monte Carlo coincidence counts");
  add_common(sample, opts, true);
  auto* sweep = app.add_subcommand("sweep", "Two-photon rates versus one pump's phase");
  add_common(sweep, opts, true);
  auto* verify = app.add_subcommand("verify", "Check the permanent formula against the Fock expansion");
  add_common(verify, opts, false);
  verify->add_option("--tolerance", opts.tolerance, "Relative tolerance")->capture_default_str();
  auto* report = app.add_subcommand("report", "Full run; prints the JSON report");
  add_common(report, opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "sis: %s\n", e.what());
    return kExitValidation;
  }

  try {
    if (jsa->parsed()) return run_jsa(opts);
    if (predict->parsed()) return run_scenario(opts, true, false);
    if (sample->parsed()) return run_scenario(opts, opts.exact, false);
    if (sweep->parsed()) return run_sweep(opts);
    if (verify->parsed()) return run_verify(opts);
    if (report->parsed()) return run_scenario(opts, opts.exact, true);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sis: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitValidation;
}
