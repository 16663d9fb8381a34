#pragma once

#include <map>
#include <string>
#include <vector>

namespace linrel {

/// Outcome of one lemma check. not_applicable: a hypothesis failed.
/// indeterminate: a rank or containment decision fell near its cut.
enum class Verdict { pass, fail, not_applicable, indeterminate };

[[nodiscard]] std::string to_string(Verdict v);

struct LemmaTally {
  int pass = 0;
  int fail = 0;
  int not_applicable = 0;
  int indeterminate = 0;

  void add(Verdict v);
  void merge(const LemmaTally& other);
  [[nodiscard]] int total() const noexcept { return pass + fail + not_applicable + indeterminate; }
};

/// Per-lemma tallies plus human-readable notes for each failure.
struct CheckReport {
  Verdict verdict = Verdict::not_applicable;
  std::string reason;
  std::map<std::string, LemmaTally> tallies;
  std::vector<std::string> failures;

  void record(const std::string& lemma, Verdict v, const std::string& detail = {});
  /// fail if any failure, else pass if anything passed, else indeterminate
  /// if anything was indeterminate, else not_applicable.
  void finalize();
};

}  // namespace linrel
