#pragma once

// Run configuration and machine-readable verification reports.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopchern/clifford.hpp"

namespace loopchern {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;
const char* library_version();

struct NamedChain {
  std::string name;
  nlohmann::json dsl;  // chain DSL, see chain_json.hpp
};

struct RunConfig {
  struct Geometry {
    int n = 2;
    RealMatrix g = RealMatrix::Identity(2, 2);
    std::optional<RealMatrix> g1;  // family endpoint; defaults to diag(4, 1, ..., 1)
    std::string interpolation = "log-geodesic";
    std::vector<double> spin_offsets{0.5, 0.5};
  } geometry;
  std::vector<NamedChain> chains;
  struct Tolerances {
    double eval_tol = 1e-14;
    double cocycle_tol = 1e-8;
    double sweep_tol = 1e-7;
    double localization_tol = 1e-6;
    double diffeo_tol = 1e-10;
    double oracle_tol = 1e-6;
    double lemma_slack = 1e-12;
  } tolerances;
  struct Budgets {
    std::uint64_t words = 100'000'000;
    double evaluation = 1e8;
    double oracle = 2e9;
    std::uint64_t cocycle_entries = 5'000'000;
  } budgets;
  std::optional<std::uint64_t> seed;
  std::string backend = "exact";
  struct Algebra {
    bool exhaustive = true;
    int max_length = 3;
    int mode_box = 1;
    bool flip_connes_cyclic = false;  // negative-control hook
  } algebra;
  struct Cocycles {
    int max_length = 2;
    int mode_box = 0;
    std::string parity = "both";
  } cocycles;
  int sweep_samples = 11;
  double h2_cutoff = 4.0;
  struct Lemma {
    int trials = 500;
    int max_dim = 32;
  } lemma;
  struct Oracle {
    bool enabled = false;
    int random_chains = 50;
    int mode_cutoff = 3;
    int quad_points = 32;
  } oracle;
  int diffeo_random_chains = 10;
  bool timings = false;

  RealMatrix family_end() const;
  std::uint64_t require_seed(const char* suite) const;
};

/// Validates against the schema: unknown keys, wrong types and out-of-range values are rejected.
/// Chain entries given as {"file": path} are resolved relative to base_dir.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& cfg);

struct CheckRecord {
  std::string name;
  nlohmann::json inputs;
  nlohmann::json values;
  nlohmann::json bounds;
  bool pass = false;
  std::string message;  // names the violating value and threshold on failure
  double runtime = 0.0;
};

class Report {
 public:
  Report(std::string command, const RunConfig& cfg);

  CheckRecord& add(CheckRecord rec);
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  void set_calibration(nlohmann::json cal) { calibration_ = std::move(cal); }
  void merge(const Report& other);

  bool pass() const;
  const std::vector<CheckRecord>& checks() const { return checks_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  nlohmann::json to_json() const;
  /// One line per check plus the verdict.
  std::string summary() const;

 private:
  std::string command_;
  nlohmann::json environment_;
  nlohmann::json calibration_;
  bool timings_ = false;
  std::vector<CheckRecord> checks_;
  std::vector<std::string> warnings_;
};

/// FNV-1a of the compact JSON dump, as 16 hex digits.
std::string digest(const nlohmann::json& j);

}  // namespace loopchern
