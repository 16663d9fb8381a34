#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "linrel/io.hpp"
#include "linrel/report.hpp"

namespace linrel {

/// algebra, duality, gap, chains, perturbation, stability.
[[nodiscard]] const std::vector<std::string>& suite_names();

struct TrialResult {
  CheckReport report;
  Json instance;
  int resampled = 0;
};

struct TrialFailure {
  std::string suite;
  std::string lemma;
  std::uint64_t seed = 0;
  int trial = 0;
  std::string detail;
  Json instance;
};

struct SuiteResult {
  std::string name;
  int trials = 0;
  std::map<std::string, LemmaTally> lemmas;
  std::vector<TrialFailure> failures;
  std::string instance_digest;
  int resampled = 0;

  [[nodiscard]] int fail_count() const;
};

/// One trial; deterministic in (suite, seed, trial).
[[nodiscard]] TrialResult run_trial(const std::string& suite, std::uint64_t seed, int trial);

/// Trials run in parallel and are merged in trial order.
[[nodiscard]] SuiteResult run_suite(const std::string& suite, int trials, std::uint64_t seed);

/// "all" expands to every suite.
[[nodiscard]] std::vector<SuiteResult> run_verify(const std::string& suite, int trials, std::uint64_t seed);

[[nodiscard]] Json to_json(const TrialFailure& f);
[[nodiscard]] Json summary_json(const std::string& suite, int trials, std::uint64_t seed,
                                const std::vector<SuiteResult>& results);

}  // namespace linrel
