#include "loopchern/report.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "loopchern/errors.hpp"

namespace loopchern {

using nlohmann::json;

const char* library_version() { return "0.1.0"; }

namespace {

class ConfigError : public ContractError {
 public:
  explicit ConfigError(const std::string& what) : ContractError("config: " + what) {}
};

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + where + "." + k + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + where + "." + key + "' has the wrong type");
  }
}

void read_positive(const json& obj, const char* key, double& out, const std::string& where) {
  read(obj, key, out, where);
  if (!(out > 0.0)) throw ConfigError("'" + where + "." + key + "' must be positive");
}

RealMatrix read_matrix(const json& j, int n, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw ConfigError(what + " must be an n x n array");
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) throw ConfigError(what + " must be an n x n array");
    for (int k = 0; k < n; ++k) {
      if (!j[i][k].is_number()) throw ConfigError(what + " entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  require_spd(m, what.c_str());
  return m;
}

json matrix_json(const RealMatrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(row);
  }
  return out;
}

}  // namespace

RealMatrix RunConfig::family_end() const {
  if (geometry.g1) return *geometry.g1;
  RealMatrix d = RealMatrix::Identity(geometry.n, geometry.n);
  d(0, 0) = 4.0;
  return d;
}

std::uint64_t RunConfig::require_seed(const char* suite) const {
  if (!seed) throw ContractError(std::string("config: a seed is mandatory for the randomized ") + suite);
  return *seed;
}

RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  allow_keys(j, "config",
             {"schema_version", "geometry", "chains", "tolerances", "budgets", "seed", "backend", "algebra",
              "cocycles", "sweep", "h2", "lemma", "oracle", "diffeo", "report"});
  int version = kConfigSchemaVersion;
  read(j, "schema_version", version, "config");
  if (version != kConfigSchemaVersion) throw ConfigError("unsupported schema_version " + std::to_string(version));

  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    allow_keys(g, "geometry", {"n", "g", "g1", "interpolation", "spin_offsets"});
    read(g, "n", c.geometry.n, "geometry");
    const int n = c.geometry.n;
    if (n < 2 || n > kMaxDimension || n % 2) throw ConfigError("geometry.n must be even and in 2..8");
    c.geometry.g = g.contains("g") ? read_matrix(g["g"], n, "geometry.g") : RealMatrix(RealMatrix::Identity(n, n));
    if (g.contains("g1")) c.geometry.g1 = read_matrix(g["g1"], n, "geometry.g1");
    read(g, "interpolation", c.geometry.interpolation, "geometry");
    if (c.geometry.interpolation != "linear" && c.geometry.interpolation != "log-geodesic")
      throw ConfigError("geometry.interpolation must be 'linear' or 'log-geodesic'");
    c.geometry.spin_offsets.assign(n, 0.5);
    read(g, "spin_offsets", c.geometry.spin_offsets, "geometry");
    if (static_cast<int>(c.geometry.spin_offsets.size()) != n) throw ConfigError("geometry.spin_offsets must have n entries");
    for (double e : c.geometry.spin_offsets)
      if (e != 0.0 && e != 0.5) throw ConfigError("geometry.spin_offsets entries must be 0 or 0.5");
  }

  if (j.contains("chains")) {
    if (!j["chains"].is_array()) throw ConfigError("chains must be an array");
    int idx = 0;
    for (const auto& entry : j["chains"]) {
      NamedChain nc;
      nc.name = "chain" + std::to_string(idx++);
      if (entry.is_array()) {
        nc.dsl = entry;
      } else {
        allow_keys(entry, "chains[]", {"name", "chain", "file"});
        read(entry, "name", nc.name, "chains[]");
        if (entry.contains("chain") == entry.contains("file"))
          throw ConfigError("each chain entry needs exactly one of 'chain' or 'file'");
        if (entry.contains("chain")) {
          nc.dsl = entry["chain"];
        } else {
          const auto path = base_dir / entry["file"].get<std::string>();
          std::ifstream in(path);
          if (!in) throw ConfigError("cannot open chain file " + path.string());
          try {
            nc.dsl = json::parse(in);
          } catch (const json::exception& e) {
            throw ConfigError("chain file " + path.string() + ": " + e.what());
          }
        }
      }
      if (!nc.dsl.is_array()) throw ConfigError("chain '" + nc.name + "' must be a list of words");
      c.chains.push_back(std::move(nc));
    }
  }

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    allow_keys(t, "tolerances",
               {"eval_tol", "cocycle_tol", "sweep_tol", "localization_tol", "diffeo_tol", "oracle_tol", "lemma_slack"});
    auto& T = c.tolerances;
    read_positive(t, "eval_tol", T.eval_tol, "tolerances");
    read_positive(t, "cocycle_tol", T.cocycle_tol, "tolerances");
    read_positive(t, "sweep_tol", T.sweep_tol, "tolerances");
    read_positive(t, "localization_tol", T.localization_tol, "tolerances");
    read_positive(t, "diffeo_tol", T.diffeo_tol, "tolerances");
    read_positive(t, "oracle_tol", T.oracle_tol, "tolerances");
    read(t, "lemma_slack", T.lemma_slack, "tolerances");
    if (T.lemma_slack < 0.0) throw ConfigError("tolerances.lemma_slack must be >= 0");
  }
  if (j.contains("budgets")) {
    const json& b = j["budgets"];
    allow_keys(b, "budgets", {"words", "evaluation", "oracle", "cocycle_entries"});
    read(b, "words", c.budgets.words, "budgets");
    read_positive(b, "evaluation", c.budgets.evaluation, "budgets");
    read_positive(b, "oracle", c.budgets.oracle, "budgets");
    read(b, "cocycle_entries", c.budgets.cocycle_entries, "budgets");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
      throw ConfigError("seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  read(j, "backend", c.backend, "config");
  if (c.backend != "exact" && c.backend != "float") throw ConfigError("backend must be 'exact' or 'float'");

  if (j.contains("algebra")) {
    const json& a = j["algebra"];
    allow_keys(a, "algebra", {"exhaustive", "max_length", "mode_box", "flip_connes_cyclic"});
    read(a, "exhaustive", c.algebra.exhaustive, "algebra");
    read(a, "max_length", c.algebra.max_length, "algebra");
    read(a, "mode_box", c.algebra.mode_box, "algebra");
    read(a, "flip_connes_cyclic", c.algebra.flip_connes_cyclic, "algebra");
    if (c.algebra.max_length < 0 || c.algebra.max_length > 6 || c.algebra.mode_box < 0 || c.algebra.mode_box > 3)
      throw ConfigError("algebra truncation out of range (max_length 0..6, mode_box 0..3)");
  }
  if (j.contains("cocycles")) {
    const json& a = j["cocycles"];
    allow_keys(a, "cocycles", {"max_length", "mode_box", "parity"});
    read(a, "max_length", c.cocycles.max_length, "cocycles");
    read(a, "mode_box", c.cocycles.mode_box, "cocycles");
    read(a, "parity", c.cocycles.parity, "cocycles");
    if (c.cocycles.parity != "even" && c.cocycles.parity != "odd" && c.cocycles.parity != "both")
      throw ConfigError("cocycles.parity must be even, odd or both");
  }
  if (j.contains("sweep")) {
    allow_keys(j["sweep"], "sweep", {"samples"});
    read(j["sweep"], "samples", c.sweep_samples, "sweep");
    if (c.sweep_samples < 2) throw ConfigError("sweep.samples must be at least 2");
  }
  if (j.contains("h2")) {
    allow_keys(j["h2"], "h2", {"cutoff"});
    read(j["h2"], "cutoff", c.h2_cutoff, "h2");
    if (c.h2_cutoff < 4.0) throw ConfigError("h2.cutoff must be at least 4");
  }
  if (j.contains("lemma")) {
    allow_keys(j["lemma"], "lemma", {"trials", "max_dim"});
    read(j["lemma"], "trials", c.lemma.trials, "lemma");
    read(j["lemma"], "max_dim", c.lemma.max_dim, "lemma");
    if (c.lemma.trials < 0 || c.lemma.max_dim < 1 || c.lemma.max_dim > 64)
      throw ConfigError("lemma.trials must be >= 0 and lemma.max_dim in 1..64");
  }
  if (j.contains("oracle")) {
    const json& o = j["oracle"];
    allow_keys(o, "oracle", {"enabled", "random_chains", "mode_cutoff", "quad_points"});
    read(o, "enabled", c.oracle.enabled, "oracle");
    read(o, "random_chains", c.oracle.random_chains, "oracle");
    read(o, "mode_cutoff", c.oracle.mode_cutoff, "oracle");
    read(o, "quad_points", c.oracle.quad_points, "oracle");
    if (c.oracle.random_chains < 0 || c.oracle.mode_cutoff < 0 || c.oracle.mode_cutoff > 3 || c.oracle.quad_points < 1)
      throw ConfigError("oracle settings out of range");
  }
  if (j.contains("diffeo")) {
    allow_keys(j["diffeo"], "diffeo", {"random_chains"});
    read(j["diffeo"], "random_chains", c.diffeo_random_chains, "diffeo");
    if (c.diffeo_random_chains < 0) throw ConfigError("diffeo.random_chains must be >= 0");
  }
  if (j.contains("report")) {
    allow_keys(j["report"], "report", {"timings"});
    read(j["report"], "timings", c.timings, "report");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ContractError("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

json config_to_json(const RunConfig& c) {
  json chains = json::array();
  for (const auto& nc : c.chains) chains.push_back({{"name", nc.name}, {"chain", nc.dsl}});
  json geometry = {{"n", c.geometry.n},
                   {"g", matrix_json(c.geometry.g)},
                   {"g1", matrix_json(c.family_end())},
                   {"interpolation", c.geometry.interpolation},
                   {"spin_offsets", c.geometry.spin_offsets}};
  const auto& T = c.tolerances;
  json out = {
      {"schema_version", kConfigSchemaVersion},
      {"geometry", geometry},
      {"chains", chains},
      {"tolerances",
       {{"eval_tol", T.eval_tol},
        {"cocycle_tol", T.cocycle_tol},
        {"sweep_tol", T.sweep_tol},
        {"localization_tol", T.localization_tol},
        {"diffeo_tol", T.diffeo_tol},
        {"oracle_tol", T.oracle_tol},
        {"lemma_slack", T.lemma_slack}}},
      {"budgets",
       {{"words", c.budgets.words},
        {"evaluation", c.budgets.evaluation},
        {"oracle", c.budgets.oracle},
        {"cocycle_entries", c.budgets.cocycle_entries}}},
      {"backend", c.backend},
      {"algebra",
       {{"exhaustive", c.algebra.exhaustive},
        {"max_length", c.algebra.max_length},
        {"mode_box", c.algebra.mode_box},
        {"flip_connes_cyclic", c.algebra.flip_connes_cyclic}}},
      {"cocycles",
       {{"max_length", c.cocycles.max_length}, {"mode_box", c.cocycles.mode_box}, {"parity", c.cocycles.parity}}},
      {"sweep", {{"samples", c.sweep_samples}}},
      {"h2", {{"cutoff", c.h2_cutoff}}},
      {"lemma", {{"trials", c.lemma.trials}, {"max_dim", c.lemma.max_dim}}},
      {"oracle",
       {{"enabled", c.oracle.enabled},
        {"random_chains", c.oracle.random_chains},
        {"mode_cutoff", c.oracle.mode_cutoff},
        {"quad_points", c.oracle.quad_points}}},
      {"diffeo", {{"random_chains", c.diffeo_random_chains}}},
      {"report", {{"timings", c.timings}}},
  };
  if (c.seed) out["seed"] = *c.seed;
  return out;
}

std::string digest(const json& j) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Report::Report(std::string command, const RunConfig& cfg) : command_(std::move(command)), timings_(cfg.timings) {
  const json c = config_to_json(cfg);
  environment_ = {{"version", library_version()},
                  {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
                  {"budgets", c["budgets"]},
                  {"backend", cfg.backend},
                  {"config_digest", digest(c)}};
}

CheckRecord& Report::add(CheckRecord rec) {
  checks_.push_back(std::move(rec));
  return checks_.back();
}

void Report::merge(const Report& other) {
  for (const auto& c : other.checks_) checks_.push_back(c);
  for (const auto& w : other.warnings_) warnings_.push_back(w);
  if (!other.calibration_.is_null()) calibration_ = other.calibration_;
}

bool Report::pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

json Report::to_json() const {
  json checks = json::array();
  auto object = [](const json& j) { return j.is_null() ? json::object() : j; };
  for (const auto& c : checks_) {
    json r = {{"name", c.name},
              {"inputs_digest", digest(c.inputs)},
              {"inputs", object(c.inputs)},
              {"values", object(c.values)},
              {"bounds", object(c.bounds)},
              {"pass", c.pass}};
    if (!c.message.empty()) r["message"] = c.message;
    if (timings_) r["runtime_s"] = c.runtime;
    checks.push_back(std::move(r));
  }
  return {{"schema_version", kReportSchemaVersion},
          {"command", command_},
          {"environment", environment_},
          {"calibration", calibration_},
          {"checks", checks},
          {"warnings", warnings_},
          {"pass", pass()}};
}

std::string Report::summary() const {
  std::ostringstream os;
  for (const auto& c : checks_) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.message.empty()) os << ": " << c.message;
    os << '\n';
  }
  for (const auto& w : warnings_) os << "WARN " << w << '\n';
  os << (pass() ? "verdict: pass" : "verdict: FAIL") << " (" << command_ << ")\n";
  return os.str();
}

}  // namespace loopchern
