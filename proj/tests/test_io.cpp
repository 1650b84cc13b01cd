#include <gtest/gtest.h>

#include <random>

#include "scalekit/io.hpp"
#include "test_util.hpp"

using namespace scalekit;
using scalekit::testing::random_signal;

TEST(CanonicalDump, FixedFormatting) {
  Json j;
  j["b"] = 0.1;
  j["a"] = 2.0;
  j["v"] = Json::array({1, 2.5});
  j["o"] = Json{{"k", true}};
  EXPECT_EQ(canonical_dump(j),
            "{\n  \"b\": 0.10000000000000001,\n  \"a\": 2.0,\n  \"v\": [1, 2.5],\n"
            "  \"o\": {\n    \"k\": true\n  }\n}\n");
}

TEST(ParseJson, ReportsLine) {
  try {
    parse_json("{\n  \"a\": 1,\n  \"b\": }\n", "in.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("in.json:3"), std::string::npos) << e.what();
  }
}

TEST(SignalJson, RoundTrip) {
  std::mt19937_64 rng(50);
  for (int i = 0; i < 20; ++i) {
    const ScaleTimeSignal s = random_signal(rng, 1 + i % 3, 4, -3, 3, 5);
    const ScaleTimeSignal back = signal_from_json(parse_json(canonical_dump(to_json(s)), "t"));
    EXPECT_EQ(back.arity(), s.arity());
    EXPECT_EQ(max_abs_difference(back, s), 0.0);
  }
}

TEST(SignalJson, RejectsBadShape) {
  const Json j = parse_json(R"({"arity":1,"shape":[1,2],"offset":[0],"data":[[1,0]]})", "t");
  EXPECT_THROW(signal_from_json(j), ParseError);
}

TEST(SignalCsv, RoundTripAndHeader) {
  std::mt19937_64 rng(51);
  const ScaleTimeSignal s = random_signal(rng, 2, 3, -2, 2, 4);
  const std::string csv = to_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,k1,k2,re,im");
  EXPECT_EQ(max_abs_difference(signal_from_csv(csv, "t.csv"), s), 0.0);
}

TEST(SignalCsv, Diagnostics) {
  try {
    signal_from_csv("n,k1,re,im\n0,0,1.0,abc\n", "bad.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.csv:2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("'im'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(signal_from_csv("0,0,1\n0,0,1,2,3\n", "bad.csv"), ParseError);
}

TEST(SuMatrixJson, ValidatesDeterminant) {
  const SuMatrix m = make_scale_shift(0.3, 0.2);
  EXPECT_LT(distance(su_matrix_from_json(to_json(m)), m), 1e-15);
  EXPECT_THROW(su_matrix_from_json(parse_json(R"({"a":[1,0],"b":[0.5,0]})", "t")),
               ParseError);
  const SuMatrix s = su_matrix_from_json(parse_json(R"({"alpha":0.25,"theta":0})", "t"));
  EXPECT_LT(distance(s, make_scale_shift(0.25, 0.0)), 1e-15);
}

TEST(GroupJson, RoundTrip) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.1), make_scale_shift(0.3, 0.1)};
  const ScaleGroup g = make_group(gens);
  const ScaleGroup back = group_from_json(to_json(g));
  ASSERT_EQ(back.arity(), 2u);
  EXPECT_LT(distance(back.generators()[1], g.generators()[1]), 1e-15);
}

TEST(MomentsJson, RoundTrip) {
  const MomentSequence ms{{1.0, Complex(0.2, -0.1)}};
  const MomentSequence back = moments_from_json(to_json(ms));
  EXPECT_EQ(back.t, ms.t);
  EXPECT_THROW(moments_from_json(parse_json(R"({"t":[[1]]})", "t")), ParseError);
}

TEST(ReportJson, BiboWitnessSurvives) {
  ScaleTimeSignal h(1);
  h.set(0, {0}, 1.0);
  h.set(0, {1}, 1.0);
  h.set(1, {0}, 1.0);
  h.set(1, {1}, -1.0);
  const StabilityReport r = bibo_analysis(h, false);
  const StabilityReport back = report_from_json(parse_json(canonical_dump(to_json(r)), "t"));
  EXPECT_EQ(back.property, r.property);
  EXPECT_EQ(back.verdict, r.verdict);
  EXPECT_EQ(*back.sufficient_upper, *r.sufficient_upper);
  EXPECT_EQ(*back.necessary_lower, *r.necessary_lower);
  ASSERT_TRUE(back.bibo_witness.has_value());
  EXPECT_EQ(back.bibo_witness->n, r.bibo_witness->n);
  EXPECT_EQ(max_abs_difference(back.bibo_witness->v, r.bibo_witness->v), 0.0);
  EXPECT_TRUE(empirical_verify(h, back, 5, 1).ok);
}

TEST(ReportJson, ResonantWitnessSurvives) {
  ScaleTimeSignal h(1);
  h.set(0, {0}, 1.0);
  h.set(1, {0}, 1.0);
  const StabilityReport r = dissipativity_check(h, 4, 1);
  const StabilityReport back = report_from_json(to_json(r));
  ASSERT_TRUE(back.resonant.has_value());
  EXPECT_EQ(back.resonant->time_len, r.resonant->time_len);
  EXPECT_EQ(back.resonant->point, r.resonant->point);
  EXPECT_TRUE(empirical_verify(h, back, 5, 1).ok);
}
