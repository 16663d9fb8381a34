#include "linrel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "linrel/errors.hpp"

namespace linrel {

namespace {

const Json& field(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) {
    throw FormatError(ctx + ": expected an object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(ctx + ": missing field \"" + key + "\"");
  }
  return *it;
}

Index index_field(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = field(j, key, ctx);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FormatError(ctx + ": field \"" + key + "\" must be a non-negative integer");
  }
  return static_cast<Index>(v.get<long long>());
}

std::string format_g17(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json real_to_json(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  if (std::isnan(v)) {
    return "nan";
  }
  return v;
}

double real_from_json(const Json& j) {
  if (j.is_number()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
      return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan") {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }
  throw FormatError("expected a number, \"inf\", \"-inf\" or \"nan\", got " + j.dump());
}

Json scalar_to_json(Scalar z) { return Json::array({real_to_json(z.real()), real_to_json(z.imag())}); }

Scalar scalar_from_json(const Json& j) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw FormatError("expected a number or a [re, im] pair, got " + j.dump());
}

Json to_json(const Subspace& s) {
  Json cols = Json::array();
  for (Index c = 0; c < s.dim(); ++c) {
    Json col = Json::array();
    for (Index r = 0; r < s.ambient(); ++r) {
      col.push_back(scalar_to_json(s.basis()(r, c)));
    }
    cols.push_back(std::move(col));
  }
  return Json{{"ambient", s.ambient()}, {"dim", s.dim()}, {"basis", std::move(cols)}};
}

Subspace subspace_from_json(const Json& j) {
  const std::string ctx = "subspace";
  const Index n = index_field(j, "ambient", ctx);
  if (n == 0) {
    throw FormatError(ctx + ": ambient must be positive");
  }
  const Json& basis = field(j, "basis", ctx);
  if (!basis.is_array()) {
    throw FormatError(ctx + ": \"basis\" must be an array of columns");
  }
  Matrix m(n, static_cast<Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const Json& col = basis[c];
    if (!col.is_array() || col.size() != static_cast<std::size_t>(n)) {
      throw FormatError(ctx + ": basis column " + std::to_string(c) + " must have " + std::to_string(n) +
                        " entries");
    }
    for (Index r = 0; r < n; ++r) {
      m(r, static_cast<Index>(c)) = scalar_from_json(col[static_cast<std::size_t>(r)]);
    }
  }
  if (m.cols() == 0) {
    return Subspace::zero(n);
  }
  return Subspace::span(m);
}

Json to_json(const LinearRelation& t) {
  return Json{{"x_dim", t.x_dim()}, {"y_dim", t.y_dim()}, {"graph", to_json(t.graph())}};
}

LinearRelation relation_from_json(const Json& j) {
  const std::string ctx = "relation";
  if (j.is_object() && j.contains("matrix")) {
    const Json& rows = j["matrix"];
    if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
      throw FormatError(ctx + ": \"matrix\" must be a non-empty array of non-empty rows");
    }
    const auto y = static_cast<Index>(rows.size());
    const auto x = static_cast<Index>(rows[0].size());
    Matrix a(y, x);
    for (Index r = 0; r < y; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != x) {
        throw FormatError(ctx + ": matrix row " + std::to_string(r) + " must have " + std::to_string(x) +
                          " entries");
      }
      for (Index c = 0; c < x; ++c) {
        a(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)]);
      }
    }
    return LinearRelation::from_matrix(a);
  }
  const Index x = index_field(j, "x_dim", ctx);
  const Index y = index_field(j, "y_dim", ctx);
  Subspace g = subspace_from_json(field(j, "graph", ctx));
  return LinearRelation(std::move(g), x, y);
}

Json to_json(const RelativeBound& b) {
  Json j{{"sigma", real_to_json(b.sigma)}, {"tau", real_to_json(b.tau)}, {"provenance", to_string(b.provenance)}};
  if (b.certified_sigma) {
    j["certified_sigma"] = real_to_json(*b.certified_sigma);
  }
  return j;
}

RelativeBound bound_from_json(const Json& j) {
  const std::string ctx = "relative bound";
  RelativeBound b;
  b.sigma = real_from_json(field(j, "sigma", ctx));
  b.tau = real_from_json(field(j, "tau", ctx));
  b.provenance = Provenance::supplied;
  if (j.contains("provenance")) {
    try {
      b.provenance = provenance_from_string(j["provenance"].get<std::string>());
    } catch (const std::exception& e) {
      throw FormatError(ctx + ": " + e.what());
    }
  }
  if (!(b.sigma >= 0.0) || !(b.tau >= 0.0) || !std::isfinite(b.sigma) || !std::isfinite(b.tau)) {
    throw FormatError(ctx + ": sigma and tau must be finite and non-negative");
  }
  return b;
}

Json to_json(const ChainIndex& n) {
  if (n.is_infinite()) {
    return "inf";
  }
  return *n.value;
}

Json to_json(const ChainReport& r) {
  Json m = Json::array();
  for (std::size_t i = 0; i < r.m_chain.size(); ++i) {
    m.push_back(Json{{"n", i}, {"dim", r.m_chain[i].dim()}, {"subspace", to_json(r.m_chain[i])}});
  }
  Json n = Json::array();
  for (std::size_t i = 0; i < r.n_chain.size(); ++i) {
    n.push_back(Json{{"n", i + 1}, {"dim", r.n_chain[i].dim()}, {"subspace", to_json(r.n_chain[i])}});
  }
  Json table = Json::array();
  for (const auto& row : r.containment_table) {
    Json jr = Json::array();
    for (bool b : row) {
      jr.push_back(b);
    }
    table.push_back(std::move(jr));
  }
  return Json{{"m_chain", std::move(m)},
              {"n_chain", std::move(n)},
              {"stabilized_at", r.stabilized_at},
              {"nu", to_json(r.nu)},
              {"containment_table", std::move(table)},
              {"containment_table_layout", "row k-1, column m: N_k subset of M_m"}};
}

Json to_json(const InstanceSpec& s) {
  Json j{{"x_dim", s.x_dim}, {"y_dim", s.y_dim}, {"alpha", s.alpha}};
  if (s.beta) {
    j["beta"] = *s.beta;
  }
  j["mv_dim"] = s.mv_dim;
  j["dom_codim"] = s.dom_codim;
  j["force_nu_infinite"] = s.force_nu_infinite;
  j["seed"] = s.seed;
  return j;
}

InstanceSpec spec_from_json(const Json& j) {
  const std::string ctx = "instance spec";
  InstanceSpec s;
  s.x_dim = static_cast<int>(index_field(j, "x_dim", ctx));
  s.y_dim = static_cast<int>(index_field(j, "y_dim", ctx));
  s.alpha = static_cast<int>(index_field(j, "alpha", ctx));
  if (j.contains("beta")) {
    s.beta = static_cast<int>(index_field(j, "beta", ctx));
  }
  if (j.contains("mv_dim")) {
    s.mv_dim = static_cast<int>(index_field(j, "mv_dim", ctx));
  }
  if (j.contains("dom_codim")) {
    s.dom_codim = static_cast<int>(index_field(j, "dom_codim", ctx));
  }
  if (j.contains("force_nu_infinite")) {
    s.force_nu_infinite = j["force_nu_infinite"].get<bool>();
  }
  if (j.contains("seed")) {
    s.seed = j["seed"].get<std::uint64_t>();
  }
  return s;
}

Json to_json(const Measured& m) {
  return Json{{"alpha", m.alpha},          {"beta", m.beta},
              {"mv_dim", m.mv_dim},        {"dom_codim", m.dom_codim},
              {"gamma", real_to_json(m.gamma)}, {"nu", to_json(m.nu)}};
}

Json to_json(const Instance& inst) {
  return Json{{"schema", kSchemaVersion},
              {"version", kVersion},
              {"spec", to_json(inst.spec)},
              {"measured", to_json(inst.measured)},
              {"A", to_json(inst.a)},
              {"B", to_json(inst.b)}};
}

Json to_json(const SweepReport& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    Json flags{{"inside_pencil", rec.inside_pencil},
               {"inside_alpha", rec.inside_alpha},
               {"inside_full", rec.inside_full},
               {"indeterminate", rec.indeterminate}};
    records.push_back(Json{{"lambda", scalar_to_json(rec.lambda)},
                           {"alpha", rec.alpha},
                           {"beta", rec.beta},
                           {"gamma", real_to_json(rec.gamma)},
                           {"gap_forward", real_to_json(rec.gap_forward)},
                           {"gap_backward", real_to_json(rec.gap_backward)},
                           {"bound_finishing", rec.bound_finishing ? real_to_json(*rec.bound_finishing) : Json()},
                           {"flags", std::move(flags)}});
  }
  return Json{{"bound", to_json(r.bound)},
              {"radii",
               Json{{"pencil", real_to_json(r.radii.pencil)},
                    {"alpha", real_to_json(r.radii.alpha)},
                    {"full", real_to_json(r.radii.full)}}},
              {"gamma_a", real_to_json(r.gamma_a)},
              {"alpha_a", r.alpha_a},
              {"beta_a", r.beta_a},
              {"indeterminate_points", r.indeterminate_count()},
              {"records", std::move(records)}};
}

Json to_json(const LemmaTally& t) {
  return Json{{"pass", t.pass}, {"not_applicable", t.not_applicable}, {"indeterminate", t.indeterminate},
              {"fail", t.fail}};
}

Json to_json(const CheckReport& r) {
  Json lemmas = Json::object();
  for (const auto& [name, t] : r.tallies) {
    lemmas[name] = to_json(t);
  }
  Json j{{"verdict", to_string(r.verdict)}, {"lemmas", std::move(lemmas)}};
  if (!r.reason.empty()) {
    j["reason"] = r.reason;
  }
  if (!r.failures.empty()) {
    j["failures"] = r.failures;
  }
  return j;
}

std::string sweep_csv(const SweepReport& r) {
  std::ostringstream os;
  os << "re,im,alpha,beta,gamma,gap_fwd,gap_bwd,bound,flags\n";
  for (const auto& rec : r.records) {
    std::string flags;
    auto add_flag = [&flags](bool on, const char* name) {
      if (on) {
        if (!flags.empty()) {
          flags += ';';
        }
        flags += name;
      }
    };
    add_flag(rec.inside_pencil, "inside_pencil");
    add_flag(rec.inside_alpha, "inside_alpha");
    add_flag(rec.inside_full, "inside_full");
    add_flag(rec.indeterminate, "indeterminate");
    os << format_g17(rec.lambda.real()) << ',' << format_g17(rec.lambda.imag()) << ',' << rec.alpha << ','
       << rec.beta << ',' << format_g17(rec.gamma) << ',' << format_g17(rec.gap_forward) << ','
       << format_g17(rec.gap_backward) << ',' << (rec.bound_finishing ? format_g17(*rec.bound_finishing) : "")
       << ',' << flags << '\n';
  }
  return os.str();
}

Json tolerances_json() {
  return Json{{"rank_relative", tol::kRankRelative}, {"rank_absolute", tol::kRankAbsolute},
              {"equality", tol::kEquality},          {"inequality_slack", tol::kSlack},
              {"ambiguous_low", tol::kAmbiguousLow}, {"ambiguous_high", tol::kAmbiguousHigh}};
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw FormatError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                      e.what() + ")");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError(path + ": cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(path + ": cannot open for writing");
  }
  out << text;
  if (!out) {
    throw Error(path + ": write failed");
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace linrel
