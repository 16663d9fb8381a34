#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "linrel/chains.hpp"
#include "linrel/errors.hpp"
#include "linrel/io.hpp"
#include "linrel/metrics.hpp"
#include "linrel/stability.hpp"
#include "linrel/suites.hpp"

namespace linrel::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFalsified = 1;
constexpr int kInputError = 2;

struct Loaded {
  LinearRelation a;
  std::optional<LinearRelation> b;
  std::string hash;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError(path + ": cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Loaded load_instance(const std::string& path) {
  const std::string text = read_file(path);
  const Json j = parse_json(text, path);
  if (!j.is_object() || !j.contains("A")) {
    throw FormatError(path + ": expected an object with relation \"A\" (and optionally \"B\")");
  }
  try {
    Loaded l{relation_from_json(j["A"]), std::nullopt, hex64(fnv1a(text))};
    if (j.contains("B")) {
      l.b = relation_from_json(j["B"]);
      if (l.b->x_dim() != l.a.x_dim() || l.b->y_dim() != l.a.y_dim()) {
        throw FormatError("A and B have different shapes");
      }
    }
    return l;
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  } catch (const DimensionError& e) {
    throw FormatError(path + ": " + e.what());
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

Json header(const std::string& command) {
  return Json{{"tool", "linrel"},
              {"version", kVersion},
              {"schema", kSchemaVersion},
              {"command", command},
              {"tolerances", tolerances_json()}};
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = dump(j);
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

Json relation_summary(const LinearRelation& t, const std::vector<double>& eps_list) {
  const OperatorPart op(t);
  const LinearRelation td = adjoint(t);
  Json eps = Json::array();
  for (double e : eps_list) {
    eps.push_back(Json{{"eps", e}, {"alpha_prime", alpha_prime_eps(op, e)}});
  }
  Json duality{{"null_space_a", same(td.kernel(), annihilator(t.range()))},
               {"null_space_b", same(td.multivalued_part(), annihilator(t.domain()))},
               {"null_space_c", same(t.kernel(), pre_annihilator(td.range()))},
               {"null_space_d", same(t.multivalued_part(), pre_annihilator(td.domain()))},
               {"alpha_adjoint_equals_beta", alpha(td) == beta(t)}};
  return Json{{"x_dim", t.x_dim()},
              {"y_dim", t.y_dim()},
              {"dim_domain", t.domain().dim()},
              {"dim_multivalued_part", t.multivalued_part().dim()},
              {"alpha", alpha(t)},
              {"beta", beta(t)},
              {"alpha_prime", alpha_prime(t)},
              {"alpha_prime_eps", std::move(eps)},
              {"beta_prime", beta_prime(t)},
              {"gamma", real_to_json(gamma(op))},
              {"norm", real_to_json(norm(op))},
              {"duality", std::move(duality)}};
}

Json radii_json(double g, const RelativeBound& b) {
  return Json{{"bound", to_json(b)},
              {"pencil", real_to_json(stability_radius(g, b, RadiusKind::pencil))},
              {"alpha", real_to_json(stability_radius(g, b, RadiusKind::alpha))},
              {"full", real_to_json(stability_radius(g, b, RadiusKind::full))}};
}

struct BoundFlags {
  std::optional<double> sigma;
  std::optional<double> tau;
};

/// Supplied pair when either flag is given, otherwise the exact tau = 0 fit.
RelativeBound choose_bound(const LinearRelation& a, const LinearRelation& b, const BoundFlags& f) {
  if (f.sigma || f.tau) {
    RelativeBound rb;
    rb.sigma = f.sigma.value_or(0.0);
    rb.tau = f.tau.value_or(0.0);
    rb.provenance = Provenance::supplied;
    if (rb.sigma < 0.0 || rb.tau < 0.0) {
      throw FormatError("--sigma and --tau must be non-negative");
    }
    return rb;
  }
  return fit_relative_bound(a, b, 0.0);
}

int cmd_gen(const InstanceSpec& spec, const std::string& out_path, std::ostream& out) {
  const Instance inst = generate(spec);
  emit(to_json(inst), out_path, out);
  return kOk;
}

int cmd_analyze(const std::string& path, const std::vector<double>& eps, const BoundFlags& flags,
                const std::string& out_path, std::ostream& out) {
  const Loaded l = load_instance(path);
  Json j = header("analyze");
  j["input_hash"] = l.hash;
  j["A"] = relation_summary(l.a, eps);
  if (l.b) {
    const LinearRelation& b = *l.b;
    j["B"] = relation_summary(b, eps);
    Json pair;
    pair["nu"] = to_json(nu(l.a, b));
    const LinearRelation ad = adjoint(l.a);
    const LinearRelation bd = adjoint(b);
    pair["nu_adjoint"] = to_json(nu(ad, bd));
    try {
      check_standing_hypotheses(l.a, b);
      pair["standing_hypotheses"] = true;
      const double g = gamma(l.a);
      Json radii = Json::object();
      radii["exact"] = radii_json(g, fit_relative_bound(l.a, b, 0.0));
      if (flags.sigma || flags.tau) {
        const RelativeBound rb = choose_bound(l.a, b, flags);
        const BoundCheck c = check_relative_bound(l.a, b, rb, 64, 0);
        Json s = radii_json(g, rb);
        s["validated"] = c.holds;
        s["worst_residual"] = real_to_json(c.worst_residual);
        radii["supplied"] = std::move(s);
      }
      pair["radii"] = std::move(radii);
      pair["perturbation"] = to_json(verify_perturbation(l.a, b));
    } catch (const HypothesisError& e) {
      pair["standing_hypotheses"] = false;
      pair["hypothesis_failure"] = Json{{"which", e.which()}, {"gap", real_to_json(e.gap())}, {"message", e.what()}};
    }
    j["pair"] = std::move(pair);
  }
  emit(j, out_path, out);
  return kOk;
}

int cmd_sweep(const std::string& path, const BoundFlags& flags, int points, int phases, const std::string& csv_path,
              const std::string& out_path, std::ostream& out) {
  const Loaded l = load_instance(path);
  if (!l.b) {
    throw FormatError(path + ": sweep needs both \"A\" and \"B\"");
  }
  const LinearRelation& a = l.a;
  const LinearRelation& b = *l.b;
  check_standing_hypotheses(a, b);
  const RelativeBound bound = choose_bound(a, b, flags);
  const double radius = stability_radius(gamma(a), bound, RadiusKind::full);
  const auto grid = default_grid(radius, GridOptions{points, phases, 10.0});
  const SweepReport rep = sweep(a, b, bound, grid);
  const ChainIndex n = nu(a, b);
  Json j = header("sweep");
  j["input_hash"] = l.hash;
  j["grid"] = Json{{"points", points}, {"phases", phases}, {"size", grid.size()}};
  j["nu"] = to_json(n);
  j["report"] = to_json(rep);
  j["verdicts"] = Json{{"stability", to_json(verify_stability(rep, stability_gate(a, b)))},
                       {"gap_bound", to_json(verify_gap_bound(rep, n))}};
  if (!csv_path.empty()) {
    write_text_file(csv_path, sweep_csv(rep));
  }
  emit(j, out_path, out);
  return kOk;
}

int cmd_chains(const std::string& path, const std::string& out_path, std::ostream& out) {
  const Loaded l = load_instance(path);
  if (!l.b) {
    throw FormatError(path + ": chains needs both \"A\" and \"B\"");
  }
  const LinearRelation& a = l.a;
  const LinearRelation& b = *l.b;
  Json j = header("chains");
  j["input_hash"] = l.hash;
  j["report"] = to_json(chain_report(a, b));
  Json eq = Json::array();
  for (int n = 1; n <= a.x_dim(); ++n) {
    const EquivalentConditions c = check_equivalent_conditions(a, b, n);
    eq.push_back(Json{{"n", n}, {"conditions", c.conditions}, {"kappa", c.kappa}, {"agree", c.agree},
                      {"kappa_implied", c.kappa_implied}});
  }
  j["equivalent_conditions"] = std::move(eq);
  const NuDuality d = verify_nu_duality(a, b);
  Json dj{{"applicable", d.applicable}};
  if (d.applicable) {
    dj["equality_m"] = d.equality_m;
    dj["equality_v"] = d.equality_v;
    dj["adjoint_sequences"] = d.adjoint_sequences;
    dj["nu"] = to_json(d.nu);
    dj["nu_adjoint"] = to_json(d.nu_dual);
    dj["notes"] = d.notes;
  } else {
    dj["reason"] = d.reason;
  }
  j["nu_duality"] = std::move(dj);
  emit(j, out_path, out);
  return kOk;
}

void print_table(const std::vector<SuiteResult>& results, std::ostream& out) {
  for (const auto& s : results) {
    out << s.name << ": trials=" << s.trials << " digest=" << s.instance_digest << "\n";
    for (const auto& [name, t] : s.lemmas) {
      out << "  " << name << " pass=" << t.pass << " not_applicable=" << t.not_applicable
          << " indeterminate=" << t.indeterminate << " fail=" << t.fail << "\n";
    }
  }
}

int cmd_verify(const std::string& suite, int trials, std::uint64_t seed, const std::string& out_path,
               std::ostream& out) {
  if (suite != "all") {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
      throw FormatError("unknown suite '" + suite + "'");
    }
  }
  if (trials < 0) {
    throw FormatError("--trials must be non-negative");
  }
  const auto results = run_verify(suite, trials, seed);
  const Json summary = summary_json(suite, trials, seed, results);
  if (out_path.empty() || out_path == "-") {
    out << dump(summary);
  } else {
    write_text_file(out_path, dump(summary));
    print_table(results, out);
  }
  return summary["ok"].get<bool>() ? kOk : kFalsified;
}

int cmd_replay(const std::string& path, const std::string& out_path, std::ostream& out) {
  const Json j = read_json_file(path);
  std::vector<Json> records;
  if (j.is_object() && j.contains("suites")) {
    for (const auto& s : j["suites"]) {
      for (const auto& f : s.value("failures", Json::array())) {
        records.push_back(f);
      }
    }
  } else if (j.is_object()) {
    records.push_back(j);
  } else if (j.is_array()) {
    records.assign(j.begin(), j.end());
  }
  Json results = Json::array();
  bool refailed = false;
  for (const auto& r : records) {
    if (!r.contains("suite") || !r.contains("seed") || !r.contains("trial")) {
      throw FormatError(path + ": replay records need \"suite\", \"seed\" and \"trial\"");
    }
    const auto suite = r["suite"].get<std::string>();
    const auto seed = r["seed"].get<std::uint64_t>();
    const int trial = r["trial"].get<int>();
    const TrialResult t = run_trial(suite, seed, trial);
    const bool failed = t.report.verdict == Verdict::fail;
    refailed = refailed || failed;
    Json rep = to_json(t.report);
    results.push_back(Json{{"suite", suite}, {"seed", seed}, {"trial", trial}, {"verdict", to_string(t.report.verdict)},
                           {"report", std::move(rep)}});
  }
  Json outj = header("replay");
  outj["records"] = std::move(results);
  outj["ok"] = !refailed;
  emit(outj, out_path, out);
  return refailed ? kFalsified : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear relation calculus: instance generation, analysis, pencil sweeps and verification"};
  app.require_subcommand(1);

  InstanceSpec spec;
  std::optional<int> gen_beta;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a random pair (A, B) with prescribed indices");
  gen->add_option("--xdim", spec.x_dim, "dim X")->required();
  gen->add_option("--ydim", spec.y_dim, "dim Y")->required();
  gen->add_option("--alpha", spec.alpha, "nullity of A");
  gen->add_option("--beta", gen_beta, "deficiency of A (derived when omitted)");
  gen->add_option("--mv", spec.mv_dim, "dim A(0)");
  gen->add_option("--codim", spec.dom_codim, "codimension of D(A)");
  gen->add_flag("--nu-inf", spec.force_nu_infinite, "make N(A) a subspace of N(B)");
  gen->add_option("--seed", spec.seed, "seed");
  gen->add_option("--out,-o", gen_out, "output file (stdout if omitted)");

  std::string in_path;
  std::string out_path;
  BoundFlags flags;
  std::vector<double> eps{1e-6, 1e-3, 1e-1, 1.0};
  auto* analyze = app.add_subcommand("analyze", "Indices, norms and duality checks for an instance file");
  analyze->add_option("input", in_path, "instance JSON")->required();
  analyze->add_option("--eps", eps, "eps values for alpha'_eps");
  analyze->add_option("--sigma", flags.sigma, "supplied sigma");
  analyze->add_option("--tau", flags.tau, "supplied tau");
  analyze->add_option("--out,-o", out_path, "output file (stdout if omitted)");

  int points = 64;
  int phases = 8;
  std::string csv_path;
  auto* sw = app.add_subcommand("sweep", "Sweep the pencil A - lambda B over a disk of lambdas");
  sw->add_option("input", in_path, "instance JSON")->required();
  sw->add_option("--sigma", flags.sigma, "supplied sigma (exact tau = 0 fit when neither is given)");
  sw->add_option("--tau", flags.tau, "supplied tau");
  sw->add_option("--grid-points", points, "number of moduli")->check(CLI::NonNegativeNumber);
  sw->add_option("--phases", phases, "arguments per modulus")->check(CLI::PositiveNumber);
  sw->add_option("--csv", csv_path, "CSV output file");
  sw->add_option("--out,-o", out_path, "JSON output file (stdout if omitted)");

  auto* ch = app.add_subcommand("chains", "Chains M_n, N_n, nu and the related lemmas");
  ch->add_option("input", in_path, "instance JSON")->required();
  ch->add_option("--out,-o", out_path, "output file (stdout if omitted)");

  std::string suite = "all";
  int trials = 200;
  std::uint64_t seed = 1;
  std::string replay_path;
  auto* ver = app.add_subcommand("verify", "Run property suites");
  ver->add_option("--suite", suite, "algebra|duality|gap|chains|perturbation|stability|all");
  ver->add_option("--trials", trials, "instances per suite");
  ver->add_option("--seed", seed, "seed");
  ver->add_option("--out,-o", out_path, "summary JSON file (stdout if omitted)");
  ver->add_option("--replay", replay_path, "re-run the failures recorded in a summary or failure file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (gen->parsed()) {
      spec.beta = gen_beta;
      return cmd_gen(spec, gen_out, out);
    }
    if (analyze->parsed()) {
      return cmd_analyze(in_path, eps, flags, out_path, out);
    }
    if (sw->parsed()) {
      return cmd_sweep(in_path, flags, points, phases, csv_path, out_path, out);
    }
    if (ch->parsed()) {
      return cmd_chains(in_path, out_path, out);
    }
    if (ver->parsed()) {
      if (!replay_path.empty()) {
        return cmd_replay(replay_path, out_path, out);
      }
      return cmd_verify(suite, trials, seed, out_path, out);
    }
  } catch (const InfeasibleSpec& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const HypothesisError& e) {
    err << "error: hypothesis " << e.which() << " violated: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace linrel::cli
