#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "scalekit/scale_group.hpp"

using namespace scalekit;

TEST(MakeGroup, SameThetaCommutes) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.2), make_scale_shift(0.3, 0.2)};
  const ScaleGroup g = make_group(gens);
  EXPECT_EQ(g.arity(), 2u);
  EXPECT_NEAR(g.log_multipliers()[0], std::log(0.5), 1e-12);
  EXPECT_NEAR(g.log_multipliers()[1], std::log(0.3), 1e-12);
}

TEST(MakeGroup, RejectsNonCommuting) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.1), make_scale_shift(0.5, 0.9)};
  EXPECT_THROW(make_group(gens), DomainError);
}

TEST(MakeGroup, RejectsEmptyAndNonHyperbolic) {
  EXPECT_THROW(make_group(std::vector<SuMatrix>{}), DomainError);
  const std::vector<SuMatrix> ell{SuMatrix(std::polar(1.0, 0.4), 0.0)};
  EXPECT_THROW(make_group(ell), DomainError);
}

TEST(MakeGroup, RejectsDuplicateMultiplier) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.0), make_scale_shift(0.5, 0.0)};
  EXPECT_THROW(make_group(gens), DomainError);
}

TEST(MakeGroup, ReorientsExpandingGenerator) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.0), make_scale_shift(4.0, 0.0)};
  const ScaleGroup g = make_group(gens);
  EXPECT_FALSE(g.reoriented()[0]);
  EXPECT_TRUE(g.reoriented()[1]);
  EXPECT_NEAR(g.log_multipliers()[1], std::log(0.25), 1e-12);
  const HyperbolicData d0 = fixed_points(g.generators()[0]);
  const HyperbolicData d1 = fixed_points(g.generators()[1]);
  EXPECT_LT(std::abs(d0.xi1 - d1.xi1), 1e-10);
}

TEST(ElementAt, PowersAndInverses) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.3)};
  const ScaleGroup g = make_group(gens);
  EXPECT_LT(distance(element_at(g, {0}), SuMatrix::identity()), 1e-15);
  EXPECT_LT(distance(element_at(g, {1}), g.generators()[0]), 1e-15);
  EXPECT_LT(distance(element_at(g, {3}), make_scale_shift(0.125, 0.3)), 1e-12);
  EXPECT_LT(distance(element_at(g, {-2}), make_scale_shift(4.0, 0.3)), 1e-12);
}

TEST(ElementAt, ExponentGuard) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.9, 0.0)};
  const ScaleGroup g = make_group(gens);
  EXPECT_NO_THROW(element_at(g, {64}));
  EXPECT_THROW(element_at(g, {65}), DomainError);
  EXPECT_THROW(element_at(g, {1, 1}), DomainError);
}

TEST(OrderKey, Example) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.0)};
  const ScaleGroup g = make_group(gens);
  EXPECT_NEAR(order_key(g, {3}), 3 * std::log(0.5), 1e-12);
  EXPECT_NEAR(order_key(g, {3}), -2.0794415416798357, 1e-12);
}

TEST(OrderKey, MultiplierLawOnGrid) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.6, -0.4), make_scale_shift(0.75, -0.4)};
  const ScaleGroup g = make_group(gens);
  for (int i = -8; i <= 8; ++i) {
    for (int j = -8; j <= 8; ++j) {
      if (i == 0 && j == 0) continue;
      const SuMatrix m = element_at(g, {i, j});
      const double key = order_key(g, {i, j});
      if (std::abs(key) < 1e-9) continue;
      EXPECT_NEAR(multiplier(m), std::exp(-std::abs(key)), 1e-10) << i << "," << j;
    }
  }
}

TEST(Precedes, OrdersByScale) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.0)};
  const ScaleGroup g = make_group(gens);
  EXPECT_TRUE(precedes(g, {0}, {1}));
  EXPECT_FALSE(precedes(g, {1}, {0}));
  EXPECT_TRUE(precedes(g, {2}, {2}));
}

TEST(Cones, HalfSpaceVersusOrthant) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.0), make_scale_shift(0.25, 0.0)};
  const ScaleGroup g = make_group(gens);
  EXPECT_TRUE(in_half_space_cone(g, {0, 0}));
  EXPECT_TRUE(in_half_space_cone(g, {1, 0}));
  EXPECT_TRUE(in_half_space_cone(g, {3, -1}));  // 0.125 / 0.25 < 1
  EXPECT_FALSE(in_causal_cone(GroupIndex{3, -1}));
  EXPECT_FALSE(in_half_space_cone(g, {-1, 0}));
  EXPECT_TRUE(in_causal_cone(GroupIndex{0, 2}));
}

TEST(GroupIndex, Arithmetic) {
  const GroupIndex a{1, -2};
  const GroupIndex b{3, 4};
  EXPECT_EQ(a + b, (GroupIndex{4, 2}));
  EXPECT_EQ(a - b, (GroupIndex{-2, -6}));
  EXPECT_EQ(-a, (GroupIndex{-1, 2}));
  EXPECT_EQ(a.l1(), 3);
  EXPECT_TRUE(GroupIndex::zero(3).is_zero());
  EXPECT_LT(a, b);
}
