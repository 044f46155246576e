// Copyright 2026 The pcid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pcid/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "pcid/engine.hpp"
#include "pcid/errors.hpp"
#include "pcid/statistics.hpp"

namespace pcid {
namespace {

using json = nlohmann::json;

constexpr std::size_t kSeriesChunk = 256;

struct VerifierEntry {
  const char* description;
  std::set<std::string> params;
};

const std::map<std::string, VerifierEntry>& Verifiers() {
  static const std::map<std::string, VerifierEntry> table = {
      {"check_clt_forecast_errors",
       {"mixture-normal limit of sum U / sqrt(n) [n]", {"alpha", "n_paths", "n"}}},
      {"check_clt_sample_mean",
       {"limit of sqrt(n)(Xbar - E[X_{n+1}|G_n]) against its closed form [n]",
        {"alpha", "n_paths", "n"}}},
      {"check_gaussian_limit",
       {"gamma and terminal-mean moments of the last-tick model [horizon]",
        {"alpha", "n_paths", "horizon"}}},
      {"check_marginal_identity",
       {"two-sample KS of X_n against X_1 [steps]", {"alpha", "n_paths", "steps"}}},
      {"check_pcid",
       {"energy-distance permutation test of the p-c.i.d. identity [n, coordinate, permutations]",
        {"alpha", "n_paths", "n", "coordinate", "permutations"}}},
      {"check_predictive_agreement",
       {"empirical vs predictive distances [n, tolerance]", {"alpha", "n_paths", "n", "tolerance"}}},
      {"check_slln",
       {"running average of a functional against its predictive limit [n, functional, tolerance]",
        {"alpha", "n_paths", "n", "functional", "tolerance"}}},
      {"check_stopping_time",
       {"two-sample KS of X_{tau+1} against X_1 [rule]", {"alpha", "n_paths", "rule"}}},
  };
  return table;
}

const std::map<std::string, const char*>& SpecDescriptions() {
  static const std::map<std::string, const char*> table = {
      {"ar1_drift", "AR(1) with drift; not c.i.d., negative control"},
      {"gaussian_last_tick", "Gaussian predictive with last-tick interpolation over arrival times"},
      {"iid", "independent coordinates with fixed laws"},
      {"polya", "Polya sequence / Dirichlet process predictive, common unit weights"},
      {"reinforced", "randomly reinforced predictive with a coupling rule"},
      {"state_space_cid", "Gaussian state-space model with a c.i.d. observation equation"},
      {"uniform_coupled", "two uniform coordinates reinforced by fractions beta_n X_{n,j}"},
  };
  return table;
}

const std::vector<std::string>& SeriesList() {
  static const std::vector<std::string> names = {"Stilde", "S",      "U",        "V",
                                                 "Xbar",   "arrival", "dE",      "lambda",
                                                 "latent", "pred_mean", "pred_var", "weight",
                                                 "x"};
  return names;
}

bool IsDerived(const std::string& s) {
  return s == "U" || s == "dE" || s == "V" || s == "Xbar" || s == "S" || s == "Stilde";
}

std::size_t PositiveCount(const json& j, const std::string& field) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw ConfigError(field + ": expected a positive integer");
  }
  if (j.is_number_integer() && j.get<std::int64_t>() < 1) {
    throw ConfigError(field + ": expected a positive integer");
  }
  return j.get<std::size_t>();
}

double Probability(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number");
  const double a = j.get<double>();
  if (!(a > 0.0 && a < 1.0)) throw ConfigError(field + ": must lie in (0, 1)");
  return a;
}

double PositiveNumber(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0)) throw ConfigError(field + ": must be > 0");
  return v;
}

std::optional<SllnFunctional> FunctionalFromString(const std::string& s) {
  for (auto f : {SllnFunctional::kIdentity, SllnFunctional::kLogSumOfCoords,
                 SllnFunctional::kProductOfCoords}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

StoppingRule RuleFromJson(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(field + ": expected an object with a 'kind'");
  }
  StoppingRule rule;
  const std::string kind = j["kind"];
  if (kind == "constant") {
    for (const auto& [k, v] : j.items()) {
      if (k != "kind" && k != "n") throw ConfigError(field + "." + k + ": unknown key");
    }
    rule.kind = StoppingRule::Kind::kConstant;
    rule.n = PositiveCount(j.at("n"), field + ".n");
  } else if (kind == "first_exceed") {
    for (const auto& [k, v] : j.items()) {
      if (k != "kind" && k != "coordinate" && k != "threshold" && k != "cap") {
        throw ConfigError(field + "." + k + ": unknown key");
      }
    }
    rule.kind = StoppingRule::Kind::kFirstExceed;
    rule.coordinate = j.value("coordinate", std::size_t{0});
    if (!j.contains("threshold") || !j["threshold"].is_number()) {
      throw ConfigError(field + ".threshold: expected a number");
    }
    rule.threshold = j["threshold"];
    rule.cap = PositiveCount(j.at("cap"), field + ".cap");
  } else {
    throw ConfigError(field + ".kind: unknown stopping rule '" + kind + "'");
  }
  return rule;
}

// Parses a request's params up front so a bad value fails before any work.
void CheckParams(const TestRequest& t, const std::string& field) {
  const auto& allowed = Verifiers().at(t.name).params;
  for (const auto& [k, v] : t.params.items()) {
    const std::string f = field + "." + k;
    if (!allowed.count(k)) throw ConfigError(f + ": unknown parameter for " + t.name);
    if (k == "alpha") {
      Probability(v, f);
    } else if (k == "n_paths" || k == "n" || k == "horizon" || k == "permutations") {
      PositiveCount(v, f);
    } else if (k == "coordinate") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(f + ": expected a non-negative integer");
      }
    } else if (k == "tolerance") {
      PositiveNumber(v, f);
    } else if (k == "functional") {
      if (!v.is_string() || !FunctionalFromString(v.get<std::string>())) {
        throw ConfigError(f + ": expected identity, log_sum_of_coords or product_of_coords");
      }
    } else if (k == "steps") {
      if (!v.is_array() || v.empty()) throw ConfigError(f + ": expected a non-empty list");
      for (const auto& s : v) PositiveCount(s, f);
    } else if (k == "rule") {
      RuleFromJson(v, f);
    }
  }
}

TestVerdict RunOne(const ExperimentConfig& config, const TestRequest& t, unsigned threads) {
  const json& p = t.params;
  VerifierOptions options;
  options.n_paths = p.value("n_paths", config.n_paths);
  options.seed = config.seed.value_or(0);
  options.alpha = p.value("alpha", config.alpha);
  options.threads = threads;
  const std::size_t n = p.value("n", config.horizon);
  const double tolerance = p.value("tolerance", 0.05);

  if (t.name == "check_pcid") {
    return check_pcid(config.spec, p.value("n", std::size_t{1}), p.value("coordinate", std::size_t{0}),
                      options, p.value("permutations", std::size_t{199}));
  }
  if (t.name == "check_marginal_identity") {
    std::vector<std::size_t> steps = {2, config.horizon};
    if (p.contains("steps")) steps = p["steps"].get<std::vector<std::size_t>>();
    return check_marginal_identity(config.spec, steps, options);
  }
  if (t.name == "check_stopping_time") {
    StoppingRule rule;
    rule.n = config.horizon > 1 ? config.horizon - 1 : 1;
    if (p.contains("rule")) rule = RuleFromJson(p["rule"], "rule");
    return check_stopping_time(config.spec, rule, options);
  }
  if (t.name == "check_clt_forecast_errors") return check_clt_forecast_errors(config.spec, n, options);
  if (t.name == "check_clt_sample_mean") return check_clt_sample_mean(config.spec, n, options);
  if (t.name == "check_gaussian_limit") {
    return check_gaussian_limit(config.spec, p.value("horizon", config.horizon), options);
  }
  if (t.name == "check_slln") {
    const auto f = FunctionalFromString(p.value("functional", std::string("product_of_coords")));
    return check_slln(config.spec, *f, n, tolerance, options);
  }
  if (t.name == "check_predictive_agreement") {
    return check_predictive_agreement(config.spec, n, tolerance, options);
  }
  throw ConfigError("unknown verifier '" + t.name + "'");
}

std::string FormatNumber(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string Summary(const std::vector<TestVerdict>& verdicts) {
  std::ostringstream out;
  out << std::left << std::setw(28) << "test" << std::setw(8) << "result" << std::setw(14)
      << "statistic" << std::setw(14) << "reference" << "tolerance\n";
  std::size_t passed = 0;
  for (const TestVerdict& v : verdicts) {
    passed += v.pass ? 1 : 0;
    out << std::left << std::setw(28) << v.name << std::setw(8) << (v.pass ? "PASS" : "FAIL")
        << std::setprecision(6) << std::setw(14) << v.statistic << std::setw(14) << v.reference
        << v.tolerance << "\n";
    for (const SubCheck& c : v.checks) {
      if (c.pass || c.skipped) continue;
      out << "    failed " << c.name << ": " << c.statistic << " vs " << c.reference << " +/- "
          << c.tolerance << "\n";
    }
  }
  out << passed << " of " << verdicts.size() << " verdicts pass\n";
  return out.str();
}

class SeriesWriter {
 public:
  SeriesWriter(const std::filesystem::path& file, SeriesFormat format)
      : out_(file), format_(format) {
    if (!out_) throw IoError("cannot open " + file.string());
    if (format_ == SeriesFormat::kCsv) {
      out_ << "path,step,coordinate,series,value\n";
    } else {
      out_ << "[";
    }
  }

  void Row(std::size_t path, std::size_t step, std::size_t coordinate, const std::string& name,
           double value) {
    if (format_ == SeriesFormat::kCsv) {
      out_ << path << ',' << step << ',' << coordinate << ',' << name << ',' << FormatNumber(value)
           << '\n';
    } else {
      out_ << (first_ ? "\n" : ",\n") << "{\"path\":" << path << ",\"step\":" << step
           << ",\"coordinate\":" << coordinate << ",\"series\":\"" << name
           << "\",\"value\":" << (std::isfinite(value) ? FormatNumber(value) : "null") << "}";
      first_ = false;
    }
  }

  void Close() {
    if (format_ == SeriesFormat::kJson) out_ << "\n]\n";
    out_.close();
    if (!out_) throw IoError("write failed");
  }

 private:
  std::ofstream out_;
  SeriesFormat format_;
  bool first_ = true;
};

void WriteMatrix(SeriesWriter& w, std::size_t path, const std::string& name,
                 const std::vector<double>& values, std::size_t columns) {
  if (columns == 0) return;
  for (std::size_t r = 0; r < values.size() / columns; ++r) {
    for (std::size_t c = 0; c < columns; ++c) w.Row(path, r + 1, c, name, values[r * columns + c]);
  }
}

void WriteSeries(const ExperimentConfig& config, const std::filesystem::path& dir,
                 unsigned threads) {
  if (config.record.empty()) return;
  RecordOptions record{true, false, false, false, false};
  bool derived = false;
  for (const std::string& s : config.record) {
    if (s == "pred_mean" || s == "pred_var" || IsDerived(s)) record.predictive = true;
    if (s == "weight") record.weights = true;
    if (s == "arrival" || s == "lambda") record.arrivals = true;
    if (s == "latent") record.latent = true;
    derived = derived || IsDerived(s);
  }
  const char* ext = config.format == SeriesFormat::kCsv ? ".csv" : ".json";
  std::vector<std::unique_ptr<SeriesWriter>> writers;
  for (const std::string& s : config.record) {
    writers.push_back(std::make_unique<SeriesWriter>(dir / ("series_" + s + ext), config.format));
  }
  const std::uint64_t seed = config.seed.value_or(0);
  const std::size_t k = config.spec.coordinates();
  for (std::size_t first = 0; first < config.n_paths; first += kSeriesChunk) {
    const std::size_t count = std::min(kSeriesChunk, config.n_paths - first);
    const auto paths = map_paths(count, threads, [&](std::size_t i) {
      return simulate_path(config.spec, seed, first + i, config.horizon, record);
    });
    for (std::size_t i = 0; i < count; ++i) {
      const PathRecord& path = paths[i];
      const std::size_t index = first + i;
      DerivedSeries d;
      if (derived) d = scaled_sums(path);
      for (std::size_t s = 0; s < config.record.size(); ++s) {
        const std::string& name = config.record[s];
        SeriesWriter& w = *writers[s];
        if (name == "x") WriteMatrix(w, index, name, path.x, k);
        else if (name == "pred_mean") WriteMatrix(w, index, name, path.pred_mean, k);
        else if (name == "pred_var") WriteMatrix(w, index, name, path.pred_var, k);
        else if (name == "weight") WriteMatrix(w, index, name, path.weight, k);
        else if (name == "latent") WriteMatrix(w, index, name, path.latent, k);
        else if (name == "arrival") WriteMatrix(w, index, name, path.arrival, 1);
        else if (name == "lambda") WriteMatrix(w, index, name, path.lambda, 1);
        else if (name == "U") WriteMatrix(w, index, name, d.U, k);
        else if (name == "dE") WriteMatrix(w, index, name, d.dE, k);
        else if (name == "V") WriteMatrix(w, index, name, d.V, k);
        else if (name == "Xbar") WriteMatrix(w, index, name, d.Xbar, k);
        else if (name == "S") WriteMatrix(w, index, name, d.S, k);
        else if (name == "Stilde") WriteMatrix(w, index, name, d.Stilde, k);
      }
    }
  }
  for (auto& w : writers) w->Close();
}

void WriteText(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open " + file.string());
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + file.string());
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> keys = {"spec",  "n_paths", "horizon", "seed",  "alpha",
                                             "tests", "output",  "format",  "record"};
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw ConfigError("config." + k + ": unknown key");
  }
  if (!j.contains("spec")) throw ConfigError("config.spec: missing");
  ExperimentConfig c;
  c.spec = spec_from_json(j["spec"]);
  try {
    if (j.contains("n_paths")) c.n_paths = PositiveCount(j["n_paths"], "config.n_paths");
    if (j.contains("horizon")) c.horizon = PositiveCount(j["horizon"], "config.horizon");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw ConfigError("config.seed: expected an unsigned integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("alpha")) c.alpha = Probability(j["alpha"], "config.alpha");
    if (j.contains("output")) {
      if (!j["output"].is_string()) throw ConfigError("config.output: expected a string");
      c.output = j["output"];
    }
    if (j.contains("format")) {
      const std::string f = j["format"].is_string() ? j["format"].get<std::string>() : "";
      if (f == "csv") c.format = SeriesFormat::kCsv;
      else if (f == "json") c.format = SeriesFormat::kJson;
      else throw ConfigError("config.format: expected 'csv' or 'json'");
    }
    if (j.contains("record")) {
      if (!j["record"].is_array()) throw ConfigError("config.record: expected a list");
      const auto& known = SeriesList();
      for (const auto& s : j["record"]) {
        if (!s.is_string() || std::find(known.begin(), known.end(), s.get<std::string>()) == known.end()) {
          throw ConfigError("config.record: unknown series " + s.dump());
        }
        if (std::find(c.record.begin(), c.record.end(), s.get<std::string>()) == c.record.end()) {
          c.record.push_back(s);
        }
      }
    }
    if (j.contains("tests")) {
      if (!j["tests"].is_array()) throw ConfigError("config.tests: expected a list");
      for (std::size_t i = 0; i < j["tests"].size(); ++i) {
        const json& t = j["tests"][i];
        const std::string field = "config.tests[" + std::to_string(i) + "]";
        TestRequest request;
        if (t.is_string()) {
          request.name = t;
        } else if (t.is_object() && t.contains("name") && t["name"].is_string()) {
          request.name = t["name"];
          for (const auto& [k, v] : t.items()) {
            if (k != "name") request.params[k] = v;
          }
        } else {
          throw ConfigError(field + ": expected a verifier name or an object with 'name'");
        }
        if (!Verifiers().count(request.name)) {
          throw ConfigError(field + ": unknown verifier '" + request.name + "'");
        }
        CheckParams(request, field);
        c.tests.push_back(std::move(request));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json tests = json::array();
  for (const TestRequest& t : c.tests) {
    json entry = {{"name", t.name}};
    entry.update(t.params);
    tests.push_back(std::move(entry));
  }
  json j = {{"spec", spec_to_json(c.spec)},
            {"n_paths", c.n_paths},
            {"horizon", c.horizon},
            {"alpha", c.alpha},
            {"tests", std::move(tests)},
            {"output", c.output},
            {"format", c.format == SeriesFormat::kCsv ? "csv" : "json"},
            {"record", c.record}};
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read config " + file.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void apply_overrides(ExperimentConfig& config, const RunOverrides& o) {
  if (o.n_paths) config.n_paths = *o.n_paths;
  if (o.horizon) config.horizon = *o.horizon;
  if (o.output) config.output = *o.output;
  if (o.seed) {
    config.seed = o.seed;
  } else if (!config.seed) {
    config.seed = 0;
    if (const char* env = std::getenv("PCID_SEED"); env != nullptr && *env != '\0') {
      std::uint64_t value = 0;
      const char* end = env + std::char_traits<char>::length(env);
      const auto r = std::from_chars(env, end, value);
      if (r.ec != std::errc() || r.ptr != end) {
        throw ConfigError(std::string("PCID_SEED: not an unsigned integer: ") + env);
      }
      config.seed = value;
    }
  }
  if (config.n_paths < 1 || config.horizon < 1) {
    throw ConfigError("n_paths and horizon must be positive");
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
  validate(config.spec);
  ExperimentResult result;
  result.all_pass = true;
  for (const TestRequest& t : config.tests) {
    result.verdicts.push_back(RunOne(config, t, threads));
    result.all_pass = result.all_pass && result.verdicts.back().pass;
  }
  json verdicts = json::array();
  for (const TestVerdict& v : result.verdicts) verdicts.push_back(verdict_to_json(v));
  // The output directory is left out so reruns elsewhere compare equal.
  json echoed = config_to_json(config);
  echoed.erase("output");
  result.report = {{"schema_version", kReportSchemaVersion},
                   {"library", {{"name", "pcid"}, {"version", PCID_VERSION_STRING}}},
                   {"config", std::move(echoed)},
                   {"all_pass", result.all_pass},
                   {"verdicts", std::move(verdicts)}};
  result.summary = Summary(result.verdicts);
  return result;
}

void ensure_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto probe = dir / ".pcid_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory is not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   unsigned threads) {
  const std::filesystem::path dir(config.output);
  ensure_writable(dir);
  WriteText(dir / "report.json", result.report.dump(2) + "\n");
  WriteText(dir / "summary.txt", result.summary);
  WriteSeries(config, dir, threads);
}

std::vector<std::string> series_names() {
  std::vector<std::string> names = SeriesList();
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<std::string> list_specs() {
  std::vector<std::string> out;
  for (const std::string& name : process_kind_names()) {
    const auto it = SpecDescriptions().find(name);
    out.push_back(name + ": " + (it == SpecDescriptions().end() ? "" : it->second));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> list_tests() {
  std::vector<std::string> out;
  for (const auto& [name, entry] : Verifiers()) out.push_back(name + ": " + entry.description);
  return out;
}

}  // namespace pcid
