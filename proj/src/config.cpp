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
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sis/scenario.hpp"

namespace sis {

namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  void require_object() const {
    if (!node_.is_object()) fail("expected an object");
  }

  void reject_unknown(std::initializer_list<const char*> known) const {
    for (const auto& [key, value] : node_.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) throw validation_error(path_ + "." + key + ": unknown key");
    }
  }

  bool has(const char* key) const { return node_.contains(key); }

  Reader child(const char* key) const {
    if (!node_.contains(key)) throw validation_error(path_ + "." + key + ": missing");
    return Reader(node_.at(key), path_ + "." + key);
  }

  double number(const char* key) const {
    Reader c = child(key);
    if (!c.node_.is_number()) c.fail("expected a number");
    return c.node_.get<double>();
  }

  double number_or(const char* key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const char* key) const {
    Reader c = child(key);
    if (!c.node_.is_number_integer()) c.fail("expected an integer");
    return c.node_.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const char* key) const {
    Reader c = child(key);
    if (!c.node_.is_number_unsigned() && !(c.node_.is_number_integer() && c.node_.get<std::int64_t>() >= 0)) {
      c.fail("expected a non-negative integer");
    }
    return c.node_.get<std::uint64_t>();
  }

  std::vector<int> int_list(const char* key) const {
    Reader c = child(key);
    if (!c.node_.is_array()) c.fail("expected an array of integers");
    std::vector<int> out;
    for (const auto& v : c.node_) {
      if (!v.is_number_integer()) c.fail("expected an array of integers");
      out.push_back(v.get<int>());
    }
    return out;
  }

  std::map<std::string, double> number_map(const char* key) const {
    Reader c = child(key);
    c.require_object();
    std::map<std::string, double> out;
    for (const auto& [k, v] : c.node_.items()) {
      if (!v.is_number()) throw validation_error(c.path_ + "." + k + ": expected a number");
      out[k] = v.get<double>();
    }
    return out;
  }

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& msg) const { throw validation_error(path_ + ": " + msg); }

 private:
  const json& node_;
  std::string path_;
};

template <typename F>
auto with_context(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), context + ": " + e.what());
  }
}

json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

ScenarioConfig read_config(const Reader& r) {
  r.require_object();
  r.reject_unknown({"name", "pump", "grid", "gain", "truncation", "detection", "shots", "seed",
                    "config_hash"});
  ScenarioConfig cfg;
  if (r.has("name")) {
    Reader n = r.child("name");
    if (!n.node().is_string()) n.fail("expected a string");
    cfg.name = n.node().get<std::string>();
  }

  Reader pump = r.child("pump");
  if (!pump.node().is_array()) pump.fail("expected an array of pump components");
  for (std::size_t k = 0; k < pump.node().size(); ++k) {
    Reader c(pump.node()[k], pump.path() + "[" + std::to_string(k) + "]");
    c.require_object();
    c.reject_unknown({"index", "magnitude", "phase"});
    PumpComponent comp;
    comp.index = static_cast<int>(c.integer("index"));
    comp.magnitude = c.number("magnitude");
    comp.phase = c.number_or("phase", 0.0);
    cfg.pump.push_back(comp);
  }

  if (r.has("grid")) {
    Reader g = r.child("grid");
    g.require_object();
    g.reject_unknown({"spacing_hz", "pump_indices", "signal_indices", "idler_indices"});
    FrequencyGrid grid = default_grid();
    grid.spacing_hz = g.number_or("spacing_hz", grid.spacing_hz);
    if (g.has("pump_indices")) grid.pump_indices = g.int_list("pump_indices");
    if (g.has("signal_indices")) grid.signal_indices = g.int_list("signal_indices");
    if (g.has("idler_indices")) grid.idler_indices = g.int_list("idler_indices");
    cfg.grid = grid;
  }

  cfg.gain = r.number_or("gain", cfg.gain);
  if (r.has("truncation")) cfg.truncation = static_cast<int>(r.integer("truncation"));
  if (r.has("shots")) cfg.shots = r.unsigned_integer("shots");
  if (r.has("seed")) cfg.seed = r.unsigned_integer("seed");

  if (r.has("detection")) {
    Reader d = r.child("detection");
    d.require_object();
    d.reject_unknown({"efficiencies", "record_collisions", "dark_click_probability"});
    if (d.has("efficiencies")) cfg.detection.efficiencies = d.number_map("efficiencies");
    if (d.has("dark_click_probability")) {
      cfg.detection.dark_click_probability = d.number_map("dark_click_probability");
    }
    if (d.has("record_collisions")) {
      Reader rc = d.child("record_collisions");
      if (!rc.node().is_boolean()) rc.fail("expected a boolean");
      cfg.detection.record_collisions = rc.node().get<bool>();
    }
  }
  with_context(r.path(), [&] { cfg.validate(); return 0; });
  return cfg;
}

json config_json(const ScenarioConfig& cfg) {
  json pump = json::array();
  for (const auto& c : cfg.pump) {
    pump.push_back({{"index", c.index}, {"magnitude", c.magnitude}, {"phase", c.phase}});
  }
  return {
      {"name", cfg.name},
      {"pump", pump},
      {"grid",
       {{"spacing_hz", cfg.grid.spacing_hz},
        {"pump_indices", cfg.grid.pump_indices},
        {"signal_indices", cfg.grid.signal_indices},
        {"idler_indices", cfg.grid.idler_indices}}},
      {"gain", cfg.gain},
      {"truncation", cfg.truncation},
      {"detection",
       {{"efficiencies", cfg.detection.efficiencies},
        {"record_collisions", cfg.detection.record_collisions},
        {"dark_click_probability", cfg.detection.dark_click_probability}}},
      {"shots", cfg.shots},
      {"seed", cfg.seed},
  };
}

std::vector<double> read_phase_grid(const Reader& r) {
  Reader g = r.child("phase_grid");
  std::vector<double> out;
  if (g.node().is_array()) {
    for (const auto& v : g.node()) {
      if (!v.is_number()) g.fail("expected numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  g.require_object();
  g.reject_unknown({"start", "stop", "count"});
  const double start = g.number("start");
  const double stop = g.number("stop");
  const std::int64_t count = g.integer("count");
  if (count < 1) g.fail("count must be at least 1");
  for (std::int64_t k = 0; k < count; ++k) {
    out.push_back(count == 1 ? start
                  : k == count - 1
                      ? stop
                      : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  return out;
}

}  // namespace

PumpSpectrum ScenarioConfig::pump_spectrum() const {
  PumpSpectrum spectrum;
  for (const auto& c : pump) spectrum.amplitudes[c.index] = std::polar(c.magnitude, c.phase);
  return spectrum;
}

void ScenarioConfig::validate() const {
  if (pump.empty()) throw validation_error("pump: empty spectrum");
  std::set<int> seen;
  for (std::size_t k = 0; k < pump.size(); ++k) {
    const auto& c = pump[k];
    const std::string where = "pump[" + std::to_string(k) + "]";
    if (!seen.insert(c.index).second) throw validation_error(where + ".index: duplicate pump index");
    if (!(c.magnitude >= 0.0) || !std::isfinite(c.magnitude)) {
      throw validation_error(where + ".magnitude: must be finite and non-negative");
    }
    if (!std::isfinite(c.phase)) throw validation_error(where + ".phase: must be finite");
  }
  with_context("grid", [&] { grid.validate(); return 0; });
  if (!(gain > 0.0 && gain < 1.0)) throw validation_error("gain: unphysical gain");
  if (truncation < 1 || truncation > kMaxTruncation) {
    throw validation_error("truncation: must be between 1 and " + std::to_string(kMaxTruncation));
  }
  if (shots < 1) throw validation_error("shots: must be at least 1");
  with_context("detection", [&] {
    detection.validate(grid.n_idler(), grid.n_signal());
    return 0;
  });
}

void SweepSpec::validate() const {
  base.validate();
  if (phase_grid.empty()) throw validation_error("phase_grid: empty");
  for (double t : phase_grid) {
    if (!(t >= 0.0 && t < 2.0 * std::numbers::pi)) {
      throw validation_error("phase_grid: values must lie in [0, 2pi)");
    }
  }
  bool found = false;
  for (const auto& c : base.pump) found = found || c.index == swept_pump_index;
  if (!found) throw validation_error("swept_pump_index: no pump component at that index");
}

ScenarioConfig parse_scenario_config(std::string_view json_text) {
  const json doc = parse_document(json_text, "config");
  return read_config(Reader(doc, "config"));
}

std::string scenario_config_to_json(const ScenarioConfig& cfg) {
  return config_json(cfg).dump(2) + "\n";
}

SweepSpec parse_sweep_spec(std::string_view json_text) {
  const json doc = parse_document(json_text, "sweep");
  Reader r(doc, "sweep");
  r.require_object();
  r.reject_unknown({"swept_pump_index", "phase_grid", "base"});
  SweepSpec spec;
  spec.swept_pump_index = static_cast<int>(r.integer("swept_pump_index"));
  spec.phase_grid = read_phase_grid(r);
  spec.base = read_config(r.child("base"));
  with_context("sweep", [&] { spec.validate(); return 0; });
  return spec;
}

std::string sweep_spec_to_json(const SweepSpec& spec) {
  json j = {
      {"swept_pump_index", spec.swept_pump_index},
      {"phase_grid", spec.phase_grid},
      {"base", config_json(spec.base)},
  };
  return j.dump(2) + "\n";
}

std::string apply_override(std::string_view json_text, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw validation_error("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  json doc = parse_document(json_text, "config");
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw validation_error("override '" + path + "': empty path segment");
    json* next = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw validation_error("override '" + path + "': '" + key + "' is not an array index");
      }
      if (idx >= node->size()) throw validation_error("override '" + path + "': index out of range");
      next = &(*node)[idx];
    } else if (node->is_object() || node->is_null()) {
      next = &(*node)[key];
    } else {
      throw validation_error("override '" + path + "': cannot descend into '" + key + "'");
    }
    if (dot == std::string::npos) {
      *next = value;
      break;
    }
    node = next;
    start = dot + 1;
  }
  return doc.dump(2);
}

std::string config_hash(std::string_view canonical_json) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace sis
