// genaudit: run scenario files or the built-in corpus and write reports.
//
//   genaudit run scenarios.json --out out/
//   genaudit corpus --out corpus-out/
//   genaudit list --json

#include <cstdio>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/harness.hpp"

using namespace genaudit;

namespace {

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--mode", o.mode, "auto | exact | mc")
      ->check(CLI::IsMember({"auto", "exact", "mc"}));
  app->add_option("--seed", o.seed, "Master seed for Monte Carlo runs");
  app->add_option("--n-runs", o.n_runs, "Monte Carlo runs per scenario");
  app->add_option("--budget", o.budget,
                  "Kernel-evaluation budget for exact enumeration (default $GENAUDIT_BUDGET or 1e7)");
  app->add_option("--numeric", o.numeric, "exact | float")
      ->check(CLI::IsMember({"exact", "float"}));
  app->add_option("--tolerance", o.tolerance, "Float comparison tolerance");
}

void print_summary(const std::vector<ScenarioResult>& results) {
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& r : results) {
    for (const auto& a : r.reports) {
      ++counts[static_cast<int>(a.verdict)];
      std::printf("%-24s %-11s %-13s slack %+.6g\n", r.name.c_str(), a.theorem.c_str(),
                  to_string(a.verdict).c_str(), a.slack);
    }
  }
  std::printf("%zu pass, %zu fail, %zu inconclusive\n", counts[0], counts[1], counts[2]);
}

int execute(std::vector<ScenarioConfig> configs, const Overrides& o, const std::string& out,
            const BoundConstants& k) {
  for (auto& c : configs) {
    o.apply(c);
  }
  std::vector<ScenarioResult> results;
  const int status = run_batch(configs, out, k, std::cerr, &results);
  if (status == kExitPass || status == kExitFail) {
    print_summary(results);
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo audits of information-theoretic generalization bounds"};
  app.set_version_flag("--version", kToolkitVersion);
  app.require_subcommand(1);

  Overrides run_o, corpus_o;
  std::string config_path, run_out = "genaudit-out", corpus_out = "genaudit-corpus";
  std::vector<std::string> only, mutations;
  bool list_json = false;

  auto* run = app.add_subcommand("run", "Run the scenarios in a config file");
  run->add_option("config", config_path, "Scenario file (one object or {\"scenarios\": [...]})")
      ->required();
  run->add_option("--out", run_out, "Output directory");
  add_overrides(run, run_o);

  auto* corpus = app.add_subcommand("corpus", "Run the built-in scenario corpus");
  corpus->add_option("--out", corpus_out, "Output directory");
  corpus->add_option("--scenario", only, "Run only these corpus scenarios");
  corpus->add_option("--mutate", mutations,
                     "Scale a bound constant, e.g. t4_lead=0.9 (mutation testing)");
  add_overrides(corpus, corpus_o);

  auto* list = app.add_subcommand("list", "List learners, losses, audits and corpus scenarios");
  list->add_flag("--json", list_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      return execute(load_configs(config_path), run_o, run_out, {});
    }
    if (*corpus) {
      BoundConstants k;
      for (const auto& m : mutations) {
        const auto eq = m.find('=');
        if (eq == std::string::npos) {
          throw ConfigError("--mutate expects name=factor, got '" + m + "'");
        }
        try {
          k.at(m.substr(0, eq)) *= std::stod(m.substr(eq + 1));
        } catch (const std::logic_error&) {
          throw ConfigError("bad --mutate '" + m + "'");
        }
      }
      std::vector<ScenarioConfig> configs;
      if (only.empty()) {
        configs = builtin_corpus();
      } else {
        for (const auto& name : only) {
          configs.push_back(corpus_scenario(name));
        }
      }
      return execute(std::move(configs), corpus_o, corpus_out, k);
    }
    const Json listing = builtin_listing();
    if (list_json) {
      std::cout << listing.dump(2) << "\n";
      return 0;
    }
    for (const char* section : {"learners", "losses"}) {
      std::cout << section << ":\n";
      for (const auto& e : listing.at(section)) {
        std::cout << "  " << e.at("name").get<std::string>();
        for (const auto& [k, v] : e.at("params").items()) {
          std::cout << "  " << k << ": " << v.get<std::string>();
        }
        std::cout << "\n";
      }
    }
    std::cout << "audits:\n";
    for (const auto& e : listing.at("audits")) {
      std::cout << "  " << e.at("id").get<std::string>();
      for (const auto& p : e.at("params")) {
        std::cout << " " << p.get<std::string>();
      }
      std::cout << "\n";
    }
    std::cout << "corpus:\n";
    for (const auto& e : listing.at("corpus")) {
      std::cout << "  " << e.at("name").get<std::string>() << " [" << e.at("mode").get<std::string>()
                << "]";
      for (const auto& a : e.at("audits")) {
        std::cout << " " << a.get<std::string>();
      }
      std::cout << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
