#include "linrel/report.hpp"

#include <algorithm>

namespace linrel {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::not_applicable:
      return "not_applicable";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

void LemmaTally::add(Verdict v) {
  switch (v) {
    case Verdict::pass:
      ++pass;
      break;
    case Verdict::fail:
      ++fail;
      break;
    case Verdict::not_applicable:
      ++not_applicable;
      break;
    case Verdict::indeterminate:
      ++indeterminate;
      break;
  }
}

void LemmaTally::merge(const LemmaTally& other) {
  pass += other.pass;
  fail += other.fail;
  not_applicable += other.not_applicable;
  indeterminate += other.indeterminate;
}

void CheckReport::record(const std::string& lemma, Verdict v, const std::string& detail) {
  tallies[lemma].add(v);
  if (v == Verdict::fail) {
    failures.push_back(detail.empty() ? lemma : lemma + ": " + detail);
  }
}

void CheckReport::finalize() {
  int pass = 0;
  int indeterminate = 0;
  int fail = 0;
  for (const auto& [name, t] : tallies) {
    pass += t.pass;
    indeterminate += t.indeterminate;
    fail += t.fail;
  }
  if (fail > 0) {
    verdict = Verdict::fail;
  } else if (pass > 0) {
    verdict = Verdict::pass;
  } else if (indeterminate > 0) {
    verdict = Verdict::indeterminate;
  } else {
    verdict = Verdict::not_applicable;
  }
}

}  // namespace linrel
