#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "linrel/chains.hpp"
#include "linrel/metrics.hpp"
#include "linrel/random.hpp"
#include "linrel/stability.hpp"
#include "linrel/suites.hpp"
#include "oracles.hpp"

using namespace linrel;

namespace {

constexpr std::uint64_t kSeed = 1;

struct SuiteSummary {
  int fail = 0;
  int pass = 0;
  int not_applicable = 0;
  int indeterminate = 0;
};

SuiteSummary summarize(const SuiteResult& r) {
  SuiteSummary s;
  for (const auto& [name, t] : r.lemmas) {
    s.fail += t.fail;
    s.pass += t.pass;
    s.not_applicable += t.not_applicable;
    s.indeterminate += t.indeterminate;
  }
  return s;
}

std::string describe(const std::string& name, int trials, const SuiteSummary& s) {
  std::ostringstream os;
  os << name << " x" << trials << ": pass=" << s.pass << " fail=" << s.fail << " n/a=" << s.not_applicable
     << " indeterminate=" << s.indeterminate;
  return os.str();
}

int failures = 0;

void line(int n, bool ok, const std::string& detail) {
  std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << " (" << detail << ")\n";
  if (!ok) {
    ++failures;
  }
}

bool suite_clean(const std::string& name, int trials, std::string& detail, int min_pass = 1) {
  const SuiteResult r = run_suite(name, trials, kSeed);
  const SuiteSummary s = summarize(r);
  detail = describe(name, trials, s);
  for (const auto& f : r.failures) {
    std::cout << "  failure " << f.suite << "/" << f.lemma << " trial " << f.trial << ": " << f.detail << "\n";
  }
  return s.fail == 0 && s.indeterminate == 0 && s.pass >= min_pass;
}

Matrix diag(std::initializer_list<Scalar> d) {
  Matrix m = Matrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (auto s : d) {
    m(i, i) = s;
    ++i;
  }
  return m;
}

void criterion_3() {
  std::string detail;
  bool ok = suite_clean("gap", 500, detail);
  double worst = 0.0;
  std::mt19937_64 gen(2024);
  for (int p = 0; p < 50; ++p) {
    Rng rng(derive_seed(kSeed, 300 + static_cast<std::uint64_t>(p)));
    const Index amb = rng.uniform_int(1, 4);
    const Subspace m = random_subspace(amb, rng.uniform_int(0, static_cast<int>(amb)), rng);
    const Subspace n = random_subspace(amb, rng.uniform_int(0, static_cast<int>(amb)), rng);
    const double o = oracle::gap_by_sampling(m.basis(), n.basis(), 400, static_cast<unsigned>(gen()));
    worst = std::max(worst, std::abs(gap(m, n) - o));
  }
  ok = ok && worst <= 1e-6;
  std::ostringstream os;
  os << detail << "; gap vs sampling oracle on 50 pairs, worst diff " << std::scientific << std::setprecision(2)
     << worst << " <= 1e-6";
  line(3, ok, os.str());
}

void criterion_4() {
  std::string detail;
  bool ok = suite_clean("chains", 200, detail);
  const auto a = LinearRelation::from_matrix(diag({0.0, 1.0}));
  const auto id = LinearRelation::from_matrix(Matrix::Identity(2, 2));
  const bool nu1 = nu(a, id) == ChainIndex::finite(1);
  bool nu_inf = nu(a, a).is_infinite();
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Index x = rng.uniform_int(1, 5);
    const auto t = LinearRelation::from_graph(random_subspace(2 * x, rng.uniform_int(0, static_cast<int>(2 * x)), rng),
                                              x, x);
    nu_inf = nu_inf && nu(t, t).is_infinite();
  }
  ok = ok && nu1 && nu_inf;
  line(4, ok,
       detail + "; nu(diag(0,1):I)=" + to_string(nu(a, id)) + " nu(A:A)=" + (nu_inf ? "inf" : "finite somewhere"));
}

void criterion_6() {
  std::string detail;
  bool ok = suite_clean("stability", 200, detail);
  const auto a = LinearRelation::from_matrix(diag({0.0, 1.0}));
  std::vector<Scalar> grid{Scalar(0.0)};
  for (int k = 1; k <= 64; ++k) {
    const double r = 0.999 * k / 64.0;
    for (int p = 0; p < 8; ++p) {
      grid.push_back(std::polar(r, 2.0 * std::numbers::pi * p / 8.0));
    }
  }
  const SweepReport rep = sweep(a, a, RelativeBound{0.0, 1.0, Provenance::exact, std::nullopt, std::nullopt}, grid);
  bool worked = true;
  for (const auto& r : rep.records) {
    worked = worked && r.alpha == 1 && r.beta == 1;
  }
  ok = ok && worked;
  line(6, ok, detail + "; A=B=diag(0,1): alpha=beta=1 at " + std::to_string(grid.size()) + " points |lambda|<=0.999");
}

void criterion_7() {
  int matched = 0;
  int total = 0;
  std::ostringstream mismatches;
  Rng rng(derive_seed(kSeed, 7));
  while (total < 50) {
    const Index x = rng.uniform_int(1, 3);
    const Index y = rng.uniform_int(1, 3);
    const Subspace g = random_subspace(x + y, rng.uniform_int(1, static_cast<int>(x + y)), rng);
    Matrix scale = Matrix::Identity(x + y, x + y);
    for (Index i = 0; i < y; ++i) {
      scale(x + i, x + i) = rng.uniform(0.2, 3.0);
    }
    const auto t = LinearRelation::from_graph(Subspace::span(scale * g.basis()), x, y);
    const Matrix top = t.graph().basis().topRows(x);
    const Matrix dom = oracle::orthonormalize(top);
    if (dom.cols() == 0) {
      continue;
    }
    const OperatorPart op(t);
    const double eps = rng.uniform(0.05, 3.0);
    bool separated = true;
    for (double s : oracle::singular_values(op.matrix_quot())) {
      separated = separated && std::abs(s - eps) >= 0.2 * std::max(s, eps);
    }
    if (!separated) {
      continue;
    }
    ++total;
    const oracle::RelationNorm tn{top, t.graph().basis().bottomRows(y)};
    const int expect = oracle::alpha_prime_by_search(tn, dom, eps, static_cast<unsigned>(total));
    const int got = alpha_prime_eps(op, eps);
    if (expect == got) {
      ++matched;
    } else {
      mismatches << " [x=" << x << " y=" << y << " eps=" << eps << " oracle=" << expect << " got=" << got << "]";
    }
  }
  line(7, matched == total,
       "alpha_prime_eps vs min-max search: " + std::to_string(matched) + "/" + std::to_string(total) + " exact" +
           mismatches.str());
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& out_file) {
  const std::string cmd = std::string("\"") + LINREL_CLI_PATH +
                          "\" verify --suite all --trials 200 --seed 1 --out \"" + out_file + "\" > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_8() {
  const std::string f1 = "acceptance_verify_1.json";
  const std::string f2 = "acceptance_verify_2.json";
  std::remove(f1.c_str());
  std::remove(f2.c_str());
  const int c1 = run_cli(f1);
  const int c2 = run_cli(f2);
  const std::string s1 = slurp(f1);
  const std::string s2 = slurp(f2);
  const bool ok = c1 == 0 && c2 == 0 && !s1.empty() && s1 == s2;
  line(8, ok,
       "verify --suite all --trials 200 --seed 1: exit " + std::to_string(c1) + "/" + std::to_string(c2) + ", " +
           (s1 == s2 ? "identical" : "different") + " summaries, " + std::to_string(s1.size()) + " bytes");
}

}  // namespace

int main() {
  std::string detail;
  bool ok = suite_clean("duality", 200, detail);
  line(1, ok, detail);
  ok = suite_clean("algebra", 200, detail);
  line(2, ok, detail);
  criterion_3();
  criterion_4();
  ok = suite_clean("perturbation", 200, detail);
  line(5, ok, detail);
  criterion_6();
  criterion_7();
  criterion_8();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
