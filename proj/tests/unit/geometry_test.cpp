#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cpwlkit/cpwl.hpp"
#include "cpwlkit/geometry.hpp"
#include "support/generators.hpp"

namespace {

using namespace cpwlkit::geometry;
using cpwlkit::compile::Layer;
using cpwlkit::compile::ReluNetwork;
using cpwlkit::compile::eval_network;
using cpwlkit::cpwl::parse_expr;
using cpwlkit::cpwl::RationalSampler;
using cpwlkit::linalg::RatMatrix;

PointSet plain(std::vector<RatVector> pts) {
  const std::size_t n = pts.front().size();
  return PointSet(n, false, std::move(pts));
}

const RatVector O2{0, 0}, E1{1, 0}, E2{0, 1};

TEST(NewtonOf, StandardSimplex) {
  const auto m = parse_expr("max(0, x1, x2, x3)").summands()[0].term;
  EXPECT_EQ(newton_of(m, false),
            plain({RatVector{0, 0, 0}, RatVector{1, 0, 0}, RatVector{0, 1, 0}, RatVector{0, 0, 1}}));
}

TEST(NewtonOf, SingleAffineTermExtended) {
  const auto m = parse_expr("max(2*x1 + -1*x2 + 3)").summands()[0].term;
  EXPECT_EQ(newton_of(m, true), PointSet(3, true, {RatVector{2, -1, 3}}));
}

TEST(NewtonOf, DuplicateTermsCollapse) {
  const auto m = parse_expr("max(x1, x1)").summands()[0].term;
  EXPECT_EQ(newton_of(m, false).size(), 1u);
}

TEST(NewtonOf, PlainRequiresHomogeneous) {
  const auto m = parse_expr("max(x1 + 1)").summands()[0].term;
  EXPECT_THROW(newton_of(m, false), cpwlkit::ContractError);
}

TEST(SupportEval, Examples) {
  EXPECT_EQ(support_eval(plain({O2, E1}), RatVector{3, 4}), Rational(3));
  EXPECT_EQ(support_eval(PointSet(2, true, {O2, E1}), RatVector{1, -1}), std::nullopt);
  EXPECT_EQ(support_eval(plain({O2, E1, E2}), RatVector{1, 1}), Rational(1));
  EXPECT_THROW(support_eval(plain({O2}), RatVector{1}), cpwlkit::ContractError);
}

TEST(MinkowskiSum, Examples) {
  EXPECT_EQ(minkowski_sum(plain({O2, E1}), plain({O2, E2})), plain({O2, E1, E2, RatVector{1, 1}}));
  const PointSet P = plain({O2, E1, E2});
  EXPECT_EQ(minkowski_sum(P, plain({RatVector{5, -1}})), plain({RatVector{5, -1}, RatVector{6, -1}, RatVector{5, 0}}));
  EXPECT_EQ(minkowski_sum(P, P), plain({O2, RatVector{2, 0}, RatVector{0, 2}}));
  EXPECT_THROW(minkowski_sum(P, plain({RatVector{1}})), cpwlkit::ContractError);
  EXPECT_THROW(minkowski_sum(P, PointSet(2, true, {O2})), cpwlkit::ContractError);
}

TEST(ConvUnion, Examples) {
  EXPECT_EQ(conv_union(plain({O2}), plain({E1})), plain({O2, E1}));
  EXPECT_EQ(conv_union(plain({O2, E1, E2}), plain({RatVector{Rational(1, 2), Rational(1, 2)}})), plain({O2, E1, E2}));
  const PointSet P = plain({O2, E1, RatVector{Rational(1, 3), 0}});
  EXPECT_EQ(conv_union(P, P), prune_vertices(P));
}

TEST(PruneVertices, Examples) {
  EXPECT_EQ(prune_vertices(plain({O2, E1, RatVector{Rational(1, 2), 0}})), plain({O2, E1}));
  EXPECT_EQ(prune_vertices(PointSet(2, true, {O2, RatVector{0, -1}})), PointSet(2, true, {O2}));
  const RatVector c{Rational(1, 2), Rational(1, 2)};
  EXPECT_EQ(prune_vertices(plain({O2, E1, E2, RatVector{1, 1}, c})), plain({O2, E1, E2, RatVector{1, 1}}));
}

// Independent 2-D oracle: Andrew's monotone chain keeping only strict turns.
std::vector<RatVector> hull_2d(std::vector<RatVector> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  auto cross = [](const RatVector& o, const RatVector& a, const RatVector& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<RatVector> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  std::sort(h.begin(), h.end());
  return h;
}

TEST(PruneVertices, MatchesMonotoneChainIn2D) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> coord(-4, 4), count(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RatVector> pts;
    const int m = count(rng);
    for (int i = 0; i < m; ++i) pts.push_back(RatVector{Rational(coord(rng), 2), coord(rng)});
    const PointSet pruned = prune_vertices(plain(pts));
    ASSERT_EQ(pruned.points(), hull_2d(pts)) << "trial " << trial;
  }
}

TEST(PruneVertices, IdempotentOrderIndependentSupportPreserving) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> coord(-3, 3), count(1, 10);
  RationalSampler sampler(2);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const bool extended = trial % 2 == 1;
    std::vector<RatVector> pts;
    const int m = count(rng);
    for (int i = 0; i < m; ++i) {
      RatVector p(n);
      for (auto& x : p) x = coord(rng);
      pts.push_back(p);
    }
    const PointSet P(n, extended, pts);
    const PointSet once = prune_vertices(P);
    ASSERT_EQ(prune_vertices(once), once);
    std::shuffle(pts.begin(), pts.end(), rng);
    ASSERT_EQ(prune_vertices(PointSet(n, extended, pts)), once);
    for (int s = 0; s < 20; ++s) {
      const RatVector c = sampler.point(n);
      ASSERT_EQ(support_eval(P, c), support_eval(once, c));
    }
  }
}

TEST(Isomorphism, SupportFunctionsOfSumAndMax) {
  std::mt19937_64 rng(57);
  RationalSampler sampler(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto f1 = cpwlkit::testing::random_max_term(rng, n, 1 + trial % 5);
    const auto f2 = cpwlkit::testing::random_max_term(rng, n, 1 + (trial + 2) % 5);
    const PointSet N1 = newton_of(f1, true), N2 = newton_of(f2, true);
    const PointSet sum = minkowski_sum(N1, N2), hull = conv_union(N1, N2);
    for (int s = 0; s < 100; ++s) {
      const RatVector x = sampler.point(n);
      std::vector<Rational> lifted(x.begin(), x.end());
      lifted.push_back(1);
      const RatVector c(lifted);
      ASSERT_EQ(support_eval(sum, c), f1(x) + f2(x));
      ASSERT_EQ(support_eval(hull, c), max(f1(x), f2(x)));
    }
  }
}

TEST(CentralSymmetry, Examples) {
  EXPECT_TRUE(check_central_symmetry(plain({O2, E1, E2, RatVector{1, 1}})));
  EXPECT_FALSE(check_central_symmetry(plain({O2, E1, E2})));
  EXPECT_TRUE(check_central_symmetry(plain({E1})));
}

ReluNetwork relu_x1(const Rational& out_weight) {
  return ReluNetwork(1, {Layer{RatMatrix{{1}}, RatVector{0}}}, RatMatrix{{out_weight}});
}

ReluNetwork gadget() {
  return ReluNetwork(2, {Layer{RatMatrix{{1, -1}, {0, 1}, {0, -1}}, RatVector{0, 0, 0}}}, RatMatrix{{1, 1, -1}});
}

TEST(NewtonPair, SingleRelu) {
  const auto [P, Q] = newton_pair_of_network(relu_x1(1));
  EXPECT_EQ(P, plain({RatVector{0}, RatVector{1}}));
  EXPECT_EQ(Q, plain({RatVector{0}}));
  const auto [P2, Q2] = newton_pair_of_network(relu_x1(-1));
  EXPECT_EQ(P2, plain({RatVector{0}}));
  EXPECT_EQ(Q2, plain({RatVector{0}, RatVector{1}}));
}

TEST(NewtonPair, GadgetReproducesMaxOfTwo) {
  const auto [P, Q] = newton_pair_of_network(gadget());
  RationalSampler sampler(4);
  for (int s = 0; s < 50; ++s) {
    const RatVector x = sampler.point(2);
    ASSERT_EQ(*support_eval(P, x) - *support_eval(Q, x), max(x[0], x[1]));
    ASSERT_EQ(*support_eval(P, x) - *support_eval(Q, x), eval_network(gadget(), x));
  }
  EXPECT_TRUE(check_central_symmetry(P));
  EXPECT_TRUE(check_central_symmetry(Q));
}

TEST(NewtonPair, RejectsBiases) {
  const ReluNetwork net(1, {Layer{RatMatrix{{1}}, RatVector{1}}}, RatMatrix{{1}});
  EXPECT_THROW(newton_pair_of_network(net), cpwlkit::ContractError);
}

TEST(NewtonPair, RandomNetworksProperty) {
  std::mt19937_64 rng(59);
  RationalSampler sampler(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3, k = 1 + trial % 2;
    const ReluNetwork net = cpwlkit::testing::random_network(rng, n, k);
    const auto [P, Q] = newton_pair_of_network(net);
    for (int s = 0; s < 50; ++s) {
      const RatVector x = sampler.point(n);
      ASSERT_EQ(*support_eval(P, x) - *support_eval(Q, x), eval_network(net, x)) << "trial " << trial;
    }
    if (k == 1) {
      EXPECT_TRUE(check_central_symmetry(P));
      EXPECT_TRUE(check_central_symmetry(Q));
    }
  }
}

TEST(PointSetJson, RoundTrip) {
  const PointSet P(3, true, {RatVector{1, Rational(1, 2), -3}, RatVector{0, 0, 0}});
  EXPECT_EQ(pointset_from_json(nlohmann::json(P)), P);
  EXPECT_EQ(nlohmann::json(P).dump(), R"({"dim":3,"extended":true,"points":[["0","0","0"],["1","1/2","-3"]]})");
}

}  // namespace
