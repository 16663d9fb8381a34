#include <gtest/gtest.h>

#include <cmath>

#include "linrel/errors.hpp"
#include "linrel/io.hpp"
#include "linrel/random.hpp"
#include "linrel/stability.hpp"

using namespace linrel;

TEST(Reals, InfinityAndRoundTrip) {
  EXPECT_EQ(real_to_json(kInfinity), Json("inf"));
  EXPECT_EQ(real_to_json(-kInfinity), Json("-inf"));
  EXPECT_EQ(real_from_json(Json("inf")), kInfinity);
  EXPECT_TRUE(std::isnan(real_from_json(real_to_json(std::nan("")))));
  const double v = 0.1 + 0.2;
  EXPECT_EQ(real_from_json(parse_json(real_to_json(v).dump(), "t")), v);
  EXPECT_THROW((void)real_from_json(Json("abc")), FormatError);
}

TEST(Scalars, RealAndComplexForms) {
  EXPECT_EQ(scalar_from_json(Json(2.5)), Scalar(2.5, 0.0));
  EXPECT_EQ(scalar_from_json(Json::array({1.0, -2.0})), Scalar(1.0, -2.0));
  const Scalar z(0.3, 1.0 / 3.0);
  EXPECT_EQ(scalar_from_json(scalar_to_json(z)), z);
  EXPECT_THROW((void)scalar_from_json(Json::array({1.0})), FormatError);
}

TEST(Relations, RoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const LinearRelation t = LinearRelation::from_graph(random_subspace(5, rng.uniform_int(0, 5), rng), 2, 3);
    const Json j = to_json(t);
    const LinearRelation back = relation_from_json(parse_json(j.dump(), "t"));
    EXPECT_EQ(back.x_dim(), 2);
    EXPECT_EQ(back.y_dim(), 3);
    EXPECT_TRUE(equals(back, t));
  }
}

TEST(Relations, MatrixShorthand) {
  const Json j = parse_json(R"({"matrix": [[0, 1], [[0, 1], 2]]})", "t");
  const LinearRelation t = relation_from_json(j);
  Matrix m(2, 2);
  m << 0.0, 1.0, Scalar(0.0, 1.0), 2.0;
  EXPECT_TRUE(equals(t, LinearRelation::from_matrix(m)));
  EXPECT_THROW((void)relation_from_json(parse_json(R"({"matrix": [[1, 2], [3]]})", "t")), FormatError);
  EXPECT_THROW((void)relation_from_json(parse_json(R"({"x_dim": 2})", "t")), FormatError);
}

TEST(Specs, RoundTrip) {
  InstanceSpec s;
  s.x_dim = 4;
  s.y_dim = 3;
  s.alpha = 2;
  s.beta = 1;
  s.mv_dim = 1;
  s.dom_codim = 1;
  s.force_nu_infinite = true;
  s.seed = 99;
  const InstanceSpec back = spec_from_json(to_json(s));
  EXPECT_EQ(back.x_dim, 4);
  EXPECT_EQ(back.y_dim, 3);
  EXPECT_EQ(back.alpha, 2);
  EXPECT_EQ(back.beta, std::optional<int>(1));
  EXPECT_EQ(back.mv_dim, 1);
  EXPECT_EQ(back.dom_codim, 1);
  EXPECT_TRUE(back.force_nu_infinite);
  EXPECT_EQ(back.seed, 99u);
}

TEST(Bounds, RoundTrip) {
  RelativeBound b{0.25, 1.5, Provenance::heuristic, std::nullopt, 0.75};
  const RelativeBound back = bound_from_json(to_json(b));
  EXPECT_EQ(back.sigma, 0.25);
  EXPECT_EQ(back.tau, 1.5);
  EXPECT_EQ(back.provenance, Provenance::heuristic);
}

TEST(Parse, MalformedReportsLineAndColumn) {
  try {
    (void)parse_json("{\n  \"A\": [1,\n  2,,\n}", "bad.json");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bad.json:3:"), std::string::npos) << msg;
  }
}

TEST(Csv, HeaderAndRows) {
  SweepReport r;
  EXPECT_EQ(sweep_csv(r), "re,im,alpha,beta,gamma,gap_fwd,gap_bwd,bound,flags\n");
  SweepRecord rec;
  rec.lambda = Scalar(0.5, -0.25);
  rec.alpha = 1;
  rec.beta = 2;
  rec.gamma = kInfinity;
  rec.inside_full = true;
  r.records.push_back(rec);
  const std::string csv = sweep_csv(r);
  const std::string row = csv.substr(csv.find('\n') + 1);
  EXPECT_EQ(row.rfind("0.5,-0.25,1,2,inf,", 0), 0u) << row;
}

TEST(Dump, TrailingNewlineAndStableHash) {
  const Json j{{"b", 1}, {"a", 2}};
  const std::string s = dump(j);
  EXPECT_EQ(s.back(), '\n');
  EXPECT_LT(s.find("\"b\""), s.find("\"a\""));
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hex64(fnv1a("a")), "af63dc4c8601ec8c");
}

TEST(Instances, SerializationIsDeterministic) {
  InstanceSpec s;
  s.x_dim = 3;
  s.y_dim = 2;
  s.alpha = 1;
  s.seed = 4;
  EXPECT_EQ(dump(to_json(generate(s))), dump(to_json(generate(s))));
}
