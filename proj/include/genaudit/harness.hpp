#pragma once

// Scenario configs, the dispatcher that runs audits on them, the built-in
// corpus, and the report bundle written by the command-line tool.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "genaudit/audit.hpp"
#include "genaudit/model.hpp"

namespace genaudit {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Exit statuses of run/corpus.
enum ExitStatus : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitConfig = 2,
  kExitBudget = 3,
};

// $GENAUDIT_BUDGET when set and valid, else kDefaultBudget.
std::uint64_t default_budget();

struct ScenarioConfig {
  std::string name;
  std::string kind = "scenario";  // or "chain_fuzz"
  Json domain;                    // {"size": n[, "prefix": p]} | {"symbols": [...]}
  Json data_dist = "uniform";     // "uniform" | {"weights": [...]} | {"family": ...}
  Json learner;                   // {"name": ..., "params": {...}}
  Json loss;                      // null or {"name": ..., "params": {...}}
  int m = 1;
  std::vector<double> t_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::string> audits;
  Json audit_params = Json::object();  // theorem id -> parameters
  std::string mode = "auto";           // auto | exact | mc
  std::uint64_t n_runs = 10000;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::string numeric = "exact";       // exact | float
  double tolerance = 1e-12;
  Json fuzz = Json::object();          // chain_fuzz: trials, max_dim, seed

  // Unknown keys and out-of-range values are ConfigErrors.
  static ScenarioConfig from_json(const Json& j);
  // Complete echo including defaults; from_json(to_json()) is the identity.
  Json to_json() const;
};

struct Overrides {
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n_runs;
  std::optional<std::uint64_t> budget;
  std::optional<std::string> numeric;
  std::optional<double> tolerance;

  void apply(ScenarioConfig& c) const;
};

// A file holds one scenario object or {"scenarios": [...]}.
std::vector<ScenarioConfig> load_configs(const std::filesystem::path& path);
std::vector<ScenarioConfig> parse_configs(const Json& j);

struct ScenarioResult {
  std::string name;
  std::string method;  // exact-enumeration | monte-carlo | fuzz
  std::vector<AuditReport> reports;
  Json quantities = Json::object();
  std::vector<std::string> notes;
  double wall_seconds = 0.0;
};

// The learner, data and loss a config describes. Throws ConfigError.
template <Scalar T>
Scenario<T> build_scenario(const ScenarioConfig& c);

// Throws ConfigError, DomainError or BudgetExceeded.
ScenarioResult run_scenario(const ScenarioConfig& c, const BoundConstants& k = {});

// report.json contents; wall-times only when requested.
Json report_bundle(const std::vector<ScenarioConfig>& configs,
                   const std::vector<ScenarioResult>& results,
                   bool include_wall_times = true);

std::string summary_csv(const std::vector<ScenarioResult>& results);

// Writes report.json, summary.csv and series/*.csv, each via a temporary
// file and a rename.
void write_outputs(const std::filesystem::path& dir,
                   const std::vector<ScenarioConfig>& configs,
                   const std::vector<ScenarioResult>& results);

// Runs every config, writes outputs when `out_dir` is nonempty, reports
// problems on `err` and returns an ExitStatus.
int run_batch(const std::vector<ScenarioConfig>& configs,
              const std::filesystem::path& out_dir, const BoundConstants& k,
              std::ostream& err, std::vector<ScenarioResult>* results = nullptr);

const std::vector<ScenarioConfig>& builtin_corpus();
const ScenarioConfig& corpus_scenario(const std::string& name);

// Learners, losses, audits and corpus scenarios with parameter schemas.
Json builtin_listing();

}  // namespace genaudit
