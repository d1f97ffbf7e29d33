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

#include "sis/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "sis/permanent.hpp"
#include "svg_chart.hpp"

namespace sis {

namespace {

using nlohmann::ordered_json;

template <typename F>
auto with_context(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), context + ": " + e.what());
  }
}

std::string canonical_config(const ScenarioConfig& cfg) {
  // Key-sorted, unindented form of the config document.
  return nlohmann::json::parse(scenario_config_to_json(cfg)).dump();
}

struct Provenance {
  std::string name;
  std::uint64_t seed;
  std::string hash;

  std::string comment() const {
    return "scenario=" + name + " seed=" + std::to_string(seed) + " config_hash=" + hash;
  }
  std::string csv_header() const { return "# " + comment() + "\n"; }
};

Provenance provenance_of(const ScenarioConfig& cfg) {
  return Provenance{cfg.name, cfg.seed, config_hash(canonical_config(cfg))};
}

std::string config_artifact(const ScenarioConfig& cfg, const Provenance& prov) {
  auto doc = nlohmann::json::parse(scenario_config_to_json(cfg));
  doc["config_hash"] = prov.hash;
  return doc.dump(2) + "\n";
}

ordered_json table_json(const OutcomeTable& t) {
  ordered_json j = ordered_json::object();
  for (const auto& [p, v] : t.entries()) j[p.label()] = v;
  return j;
}

const char* interference_label(const ContrastEntry& e) {
  switch (e.kind) {
    case RatioKind::Infinite: return "infinite";
    case RatioKind::Undefined: return "undefined";
    case RatioKind::Finite: break;
  }
  if (e.ratio > 1.0 + kNeutralRatioTolerance) return "constructive";
  if (e.ratio < 1.0 - kNeutralRatioTolerance) return "destructive";
  return "none";
}

ordered_json contrast_json(const ContrastReport& c) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : c.entries) {
    ordered_json ratio = e.kind == RatioKind::Finite ? ordered_json(e.ratio) : ordered_json(nullptr);
    entries.push_back({{"pattern", e.pattern.label()},
                       {"quantum", e.quantum},
                       {"classical", e.classical},
                       {"ratio", ratio},
                       {"interference", interference_label(e)}});
  }
  return {{"scale", c.scale},
          {"mean_constructive_ratio", c.mean_constructive_ratio},
          {"mean_destructive_ratio", c.mean_destructive_ratio},
          {"contrast", c.contrast},
          {"n_constructive", c.n_constructive},
          {"n_destructive", c.n_destructive},
          {"entries", entries}};
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string count_csv(const Provenance& prov, const OutcomeTable& raw, const OutcomeTable& normalized,
                      const OutcomeTable& quantum_pred, const OutcomeTable& classical_pred,
                      double classical_scale) {
  std::ostringstream os;
  os << prov.csv_header();
  os << "pattern,raw_count,normalized_count,quantum_pred,classical_pred,ratio\n";
  for (const auto& [p, r] : raw.entries()) {
    const double c = classical_pred.at(p) * classical_scale;
    const double n = normalized.at(p);
    const double ratio = c > 0.0 ? n / c : (n > 0.0 ? INFINITY : NAN);
    os << p.label() << ',' << fmt(r) << ',' << fmt(n) << ',' << fmt(quantum_pred.at(p)) << ','
       << fmt(c) << ',' << fmt(ratio) << '\n';
  }
  return os.str();
}

std::string comparison_csv(const Provenance& prov, const ScenarioResult& r) {
  std::ostringstream os;
  os << prov.csv_header();
  os << "pattern,quantum_weight,classical_weight,quantum_prob,classical_prob,ratio,interference\n";
  for (const auto& e : r.exact_contrast.entries) {
    os << e.pattern.label() << ',' << fmt(r.quantum_weights.at(e.pattern)) << ','
       << fmt(r.classical_weights.at(e.pattern)) << ',' << fmt(e.quantum) << ','
       << fmt(e.classical) << ',' << fmt(e.ratio) << ',' << interference_label(e) << '\n';
  }
  return os.str();
}

std::vector<std::string> labels_of(const OutcomeTable& t) {
  std::vector<std::string> out;
  for (const auto& [p, v] : t.entries()) out.push_back(p.label());
  return out;
}

std::vector<double> values_of(const OutcomeTable& t, const OutcomeTable& keys, double scale = 1.0) {
  std::vector<double> out;
  for (const auto& [p, v] : keys.entries()) out.push_back(t.at(p) * scale);
  return out;
}

ordered_json report_json(const ScenarioResult& r, const ScenarioConfig& cfg, const Provenance& prov,
                         double norm_deficit) {
  ordered_json jsa = ordered_json::array();
  for (std::size_t m = 0; m < r.jsa.rows(); ++m) {
    ordered_json row = ordered_json::array();
    for (std::size_t n = 0; n < r.jsa.cols(); ++n) {
      row.push_back({{"re", r.jsa(m, n).real()}, {"im", r.jsa(m, n).imag()}});
    }
    jsa.push_back(row);
  }
  ordered_json j;
  j["scenario"] = cfg.name;
  j["seed"] = prov.seed;
  j["config_hash"] = prov.hash;
  j["shots"] = cfg.shots;
  j["sampled"] = r.sampled.has_value();
  j["state"] = {{"gain", r.state.gain},
                {"norm_constant", r.state.norm_constant},
                {"schmidt_values", r.state.schmidt_values},
                {"truncation", cfg.truncation},
                {"norm_deficit", norm_deficit}};
  j["jsa"] = jsa;
  j["exact"] = {{"quantum_twofold", table_json(r.quantum_twofold)},
                {"quantum_fourfold", table_json(r.quantum_fourfold)},
                {"classical_fourfold", table_json(r.classical_fourfold)},
                {"quantum_weights", table_json(r.quantum_weights)},
                {"classical_weights", table_json(r.classical_weights)},
                {"contrast", contrast_json(r.exact_contrast)}};
  j["expected_counts"] = {{"twofold", table_json(*r.expected.twofold_normalized)},
                          {"fourfold", table_json(*r.expected.fourfold_normalized)}};
  if (r.sampled) {
    j["sampled_counts"] = {{"twofold_raw", table_json(r.sampled->twofold)},
                           {"twofold_normalized", table_json(*r.sampled->twofold_normalized)},
                           {"fourfold_raw", table_json(r.sampled->fourfold)},
                           {"fourfold_normalized", table_json(*r.sampled->fourfold_normalized)},
                           {"classical_fourfold", table_json(*r.sampled_classical_fourfold)},
                           {"contrast", contrast_json(*r.sampled_contrast)}};
  }
  return j;
}

void render_scenario(ScenarioResult& r, const ScenarioConfig& cfg, const RunOptions& opts,
                     double norm_deficit) {
  const Provenance prov = provenance_of(cfg);
  auto& files = r.artifacts;
  files["config.json"] = config_artifact(cfg, prov);

  const double shots = static_cast<double>(cfg.shots);
  const CountReport& counts = r.sampled ? *r.sampled : r.expected;
  const OutcomeTable classical_from_counts =
      r.sampled ? *r.sampled_classical_fourfold
                : classical_fourfold_prediction(*r.expected.twofold_normalized, cfg.shots);
  const double fourfold_scale =
      r.sampled ? r.sampled_contrast->scale
                : interference_contrast(*r.expected.fourfold_normalized, classical_from_counts,
                                        non_interfering_patterns(r.state, 2))
                      .scale;
  const OutcomeTable q2 = r.quantum_twofold.scaled(shots);
  const OutcomeTable q4 = r.quantum_fourfold.scaled(shots);

  if (opts.formats & kFormatCsv) {
    files["jsa.csv"] = prov.csv_header() + jsa_to_csv(r.jsa);
    files["twofold.csv"] = count_csv(prov, counts.twofold, *counts.twofold_normalized, q2, q2, 1.0);
    files["fourfold.csv"] = count_csv(prov, counts.fourfold, *counts.fourfold_normalized, q4,
                                      classical_from_counts, fourfold_scale);
    files["comparison.csv"] = comparison_csv(prov, r);
  }
  if (opts.formats & kFormatJson) {
    files["jsa.json"] = jsa_to_json(r.jsa);
    files["report.json"] = report_json(r, cfg, prov, norm_deficit).dump(2) + "\n";
  }
  if (opts.formats & kFormatSvg) {
    const std::string kind = r.sampled ? "sampled" : "expected";
    files["twofold.svg"] = detail::grouped_bar_chart(
        cfg.name + ": two-photon counts", prov.comment(), labels_of(counts.twofold),
        {{kind + " (normalized)", "#1f77b4", values_of(*counts.twofold_normalized, counts.twofold)},
         {"quantum prediction", "#ff7f0e", values_of(q2, counts.twofold)}});
    files["fourfold.svg"] = detail::grouped_bar_chart(
        cfg.name + ": four-photon counts", prov.comment(), labels_of(counts.fourfold),
        {{kind + " (normalized)", "#1f77b4",
          values_of(*counts.fourfold_normalized, counts.fourfold)},
         {"quantum prediction", "#ff7f0e", values_of(q4, counts.fourfold)},
         {"no interference", "#2ca02c",
          values_of(classical_from_counts, counts.fourfold, fourfold_scale)}});
    files["comparison.svg"] = detail::grouped_bar_chart(
        cfg.name + ": |perm psi|^2 vs perm |psi|^2", prov.comment(), labels_of(r.quantum_weights),
        {{"quantum", "#ff7f0e", values_of(r.quantum_weights, r.quantum_weights)},
         {"classical", "#2ca02c", values_of(r.classical_weights, r.quantum_weights)}});
  }
}

double relative_deviation(double a, double b, double floor) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale <= floor) return 0.0;
  return std::abs(a - b) / scale;
}

}  // namespace

std::map<std::string, std::string> render_jsa_artifacts(const ScenarioConfig& cfg, unsigned formats) {
  with_context("config", [&] { cfg.validate(); return 0; });
  const JsaMatrix jsa = with_context("pump", [&] { return build_jsa(cfg.pump_spectrum(), cfg.grid); });
  const Provenance prov = provenance_of(cfg);
  std::map<std::string, std::string> files;
  files["config.json"] = config_artifact(cfg, prov);
  if (formats & kFormatCsv) files["jsa.csv"] = prov.csv_header() + jsa_to_csv(jsa);
  if (formats & kFormatJson) files["jsa.json"] = jsa_to_json(jsa);
  return files;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  with_context("config", [&] { cfg.validate(); return 0; });

  ScenarioResult r;
  r.jsa = with_context("pump", [&] { return build_jsa(cfg.pump_spectrum(), cfg.grid); });
  r.state = with_context("gain", [&] { return from_jsa(r.jsa, cfg.gain); });
  const TruncatedState ts = with_context("truncation", [&] { return expand(r.state, cfg.truncation); });

  const std::size_t n_idler = r.jsa.rows();
  const std::size_t n_signal = r.jsa.cols();
  if (n_idler < 2 || n_signal < 2) {
    throw validation_error("grid: scenarios need at least two idler and two signal channels");
  }
  r.quantum_twofold = quantum_outcome_table(r.state, 1);
  r.quantum_fourfold = quantum_outcome_table(r.state, 2);
  r.classical_fourfold = classical_outcome_table(r.state, 2);

  r.quantum_weights = OutcomeTable(n_idler, n_signal);
  r.classical_weights = OutcomeTable(n_idler, n_signal);
  const ComplexMatrix abs2 = abs_squared_matrix(r.jsa.entries);
  for (const Pattern& p : collision_free_patterns(n_idler, n_signal, 2)) {
    r.quantum_weights.set(
        p, std::norm(permanent(submatrix(r.jsa.entries, p.idler_channels(), p.signal_channels()))));
    r.classical_weights.set(
        p, permanent(submatrix(abs2, p.idler_channels(), p.signal_channels())).real());
  }
  const std::vector<Pattern> reference = non_interfering_patterns(r.state, 2);
  r.exact_contrast = interference_contrast(r.quantum_fourfold, r.classical_fourfold, reference);

  r.exact_clicks = with_context("detection", [&] {
    return apply_detection(to_distribution(ts, true), cfg.detection);
  });
  r.expected = normalize_to_least_efficient(
      make_count_report(r.exact_clicks.scaled(static_cast<double>(cfg.shots)), cfg.shots, cfg.seed,
                        "expected"),
      cfg.detection);

  if (!opts.exact_only) {
    const OutcomeTable clicks = sample_events(ts, cfg.detection, cfg.shots, cfg.seed);
    r.sampled = normalize_to_least_efficient(
        make_count_report(clicks, cfg.shots, cfg.seed, "sampled"), cfg.detection);
    r.sampled_classical_fourfold = classical_fourfold_prediction(*r.sampled->twofold_normalized, cfg.shots);
    r.sampled_contrast =
        interference_contrast(*r.sampled->fourfold_normalized, *r.sampled_classical_fourfold, reference);
  }

  render_scenario(r, cfg, opts, ts.norm_deficit);
  return r;
}

SweepResult phase_sweep(const SweepSpec& spec, const RunOptions& opts) {
  with_context("sweep", [&] { spec.validate(); return 0; });
  const ScenarioConfig& base = spec.base;
  SweepResult result;

  for (std::size_t k = 0; k < spec.phase_grid.size(); ++k) {
    ScenarioConfig cfg = base;
    for (auto& c : cfg.pump) {
      if (c.index == spec.swept_pump_index) c.phase = spec.phase_grid[k];
    }
    SweepPoint point;
    point.theta = spec.phase_grid[k];
    const JsaMatrix jsa = with_context("pump", [&] { return build_jsa(cfg.pump_spectrum(), cfg.grid); });
    point.twofold_abs2 = OutcomeTable(jsa.rows(), jsa.cols());
    for (const Pattern& p : collision_free_patterns(jsa.rows(), jsa.cols(), 1)) {
      point.twofold_abs2.set(p, std::norm(jsa(p.idler_channels()[0], p.signal_channels()[0])));
    }
    if (!opts.exact_only) {
      const GaussianPairState state = with_context("gain", [&] { return from_jsa(jsa, cfg.gain); });
      const TruncatedState ts = expand(state, cfg.truncation);
      const OutcomeTable clicks = sample_events(ts, cfg.detection, cfg.shots, derive_seed(cfg.seed, k));
      point.sampled_twofold = make_count_report(clicks, cfg.shots, cfg.seed).twofold;
    }
    result.points.push_back(std::move(point));
  }

  const Provenance prov = provenance_of(base);
  std::ostringstream os;
  os << prov.csv_header();
  os << "theta";
  const OutcomeTable& keys = result.points.front().twofold_abs2;
  for (const auto& [p, v] : keys.entries()) os << ",abs2_" << p.label();
  if (!opts.exact_only) {
    for (const auto& [p, v] : keys.entries()) os << ",counts_" << p.label();
  }
  os << '\n';
  for (const auto& pt : result.points) {
    os << fmt(pt.theta);
    for (const auto& [p, v] : pt.twofold_abs2.entries()) os << ',' << fmt(v);
    if (pt.sampled_twofold) {
      for (const auto& [p, v] : keys.entries()) os << ',' << fmt(pt.sampled_twofold->at(p));
    }
    os << '\n';
  }
  result.artifacts["sweep.csv"] = os.str();
  nlohmann::json spec_doc = nlohmann::json::parse(sweep_spec_to_json(spec));
  spec_doc["config_hash"] = prov.hash;
  result.artifacts["sweep.json"] = spec_doc.dump(2) + "\n";
  if (opts.formats & kFormatSvg) {
    std::vector<std::string> thetas;
    std::vector<detail::BarSeries> series;
    const char* colors[] = {"#1f77b4", "#d62728", "#bcbd22"};
    for (std::size_t n = 0; n < 3 && n < keys.n_signal(); ++n) {
      detail::BarSeries s{"|psi(i1," + signal_label(n) + ")|^2", colors[n], {}};
      Pattern p = Pattern::empty(keys.n_idler(), keys.n_signal());
      p.idler[0] = 1;
      p.signal[n] = 1;
      for (const auto& pt : result.points) s.values.push_back(pt.twofold_abs2.at(p));
      series.push_back(std::move(s));
    }
    for (const auto& pt : result.points) thetas.push_back(fmt(std::round(pt.theta * 100) / 100));
    result.artifacts["sweep.svg"] =
        detail::grouped_bar_chart(base.name + ": two-photon rates vs phase", prov.comment(), thetas, series);
  }
  return result;
}

OracleReport verify_oracle(const GaussianPairState& state, int truncation, double tolerance) {
  if (truncation < 2) throw validation_error("truncation: oracle check needs truncation >= 2");
  const TruncatedState ts = expand(state, truncation);
  const std::size_t n_idler = state.lambda.rows();
  const std::size_t n_signal = state.lambda.cols();

  double max_abs = 0.0;
  for (const Complex& z : state.lambda.entries.data()) max_abs = std::max(max_abs, std::abs(z));

  OracleReport report;
  report.tolerance = tolerance;
  report.max_pairs = static_cast<int>(
      std::min<std::size_t>({static_cast<std::size_t>(std::min(truncation, 3)), n_idler, n_signal}));
  double factorial = 1.0;
  for (int n = 1; n <= report.max_pairs; ++n) {
    factorial *= n;
    // Amplitudes below this are indistinguishable from rounding noise.
    const double amp_floor = 1e-13 * state.norm_constant * factorial * std::pow(max_abs, n);
    for (const Pattern& p : collision_free_patterns(n_idler, n_signal, static_cast<std::size_t>(n))) {
      const double by_permanent = n_pair_probability(state, p);
      const double by_expansion = pattern_probability(ts, p);
      report.max_relative_deviation =
          std::max(report.max_relative_deviation,
                   relative_deviation(by_permanent, by_expansion, amp_floor * amp_floor));
      ++report.patterns_checked;
    }
  }
  report.passed = report.max_relative_deviation < tolerance;
  return report;
}

OracleReport verify_oracle(const ScenarioConfig& cfg, double tolerance) {
  with_context("config", [&] { cfg.validate(); return 0; });
  const JsaMatrix jsa = with_context("pump", [&] { return build_jsa(cfg.pump_spectrum(), cfg.grid); });
  const GaussianPairState state = with_context("gain", [&] { return from_jsa(jsa, cfg.gain); });
  return with_context("truncation", [&] { return verify_oracle(state, cfg.truncation, tolerance); });
}

std::string summary_json(const ScenarioResult& result, const ScenarioConfig& cfg) {
  auto it = result.artifacts.find("report.json");
  if (it != result.artifacts.end()) return it->second;
  const TruncatedState ts = expand(result.state, cfg.truncation);
  return report_json(result, cfg, provenance_of(cfg), ts.norm_deficit).dump(2) + "\n";
}

std::string summary_json(const OracleReport& report) {
  ordered_json j = {{"max_relative_deviation", report.max_relative_deviation},
                    {"patterns_checked", report.patterns_checked},
                    {"max_pairs", report.max_pairs},
                    {"tolerance", report.tolerance},
                    {"passed", report.passed}};
  return j.dump(2) + "\n";
}

void commit_artifacts(const std::filesystem::path& out_dir,
                      const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> counter{0};
  const fs::path target = fs::absolute(out_dir).lexically_normal();
  const fs::path parent = target.has_filename() ? target.parent_path() : target.parent_path().parent_path();
  const std::string leaf = target.has_filename() ? target.filename().string()
                                                 : target.parent_path().filename().string();
  const fs::path staging =
      parent / ("." + leaf + ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  const fs::path final_dir = parent / leaf;

  std::error_code ec;
  try {
    fs::create_directories(parent);
    fs::create_directories(staging);
    for (const auto& [name, contents] : files) {
      std::ofstream out(staging / name, std::ios::binary);
      out << contents;
      out.close();
      if (!out) throw Error(ErrorKind::Io, "failed to write " + (staging / name).string());
    }
    if (fs::exists(final_dir)) fs::remove_all(final_dir);
    fs::rename(staging, final_dir);
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(staging, ec);
    throw Error(ErrorKind::Io, e.what());
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
}

}  // namespace sis
