#include <gtest/gtest.h>

#include "spp/errors.hpp"
#include "spp/fj_core.hpp"
#include "support.hpp"

using namespace spp;
using namespace spp::test;

TEST(Appraisal, ExampleOneMatrix) {
  const Matrix W = appraisal_matrix(example1_C(), example1_gamma());
  const Matrix expected = mat({{0.2, 0.8, 0}, {0.5, 0.5, 0}, {1, 0, 0}});
  EXPECT_LE((W - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Appraisal, RowStochasticForAnyRealGamma) {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    RandomNetworkSpec spec;
    spec.n = 5;
    const auto net = random_network(spec, rng);
    const Vector g = random_in_box(Vector::Constant(5, -2.0), Vector::Constant(5, 3.0), rng);
    const Matrix W = appraisal_matrix(net.interaction(), g);
    EXPECT_LE(((W.rowwise().sum()).array() - 1.0).abs().maxCoeff(), 1e-14);
    EXPECT_LE((W - appraisal_oracle(net.interaction(), g)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(SocialPower, ExampleOneAgainstOracle) {
  const Vector x = compute_social_power(example1(), example1_gamma());
  const Vector oracle = social_power_oracle(example1_C(), example1_a(), example1_gamma());
  EXPECT_LE(inf(x - oracle), 1e-12);
  // Rational values of the same solve: 23/34, 74/255, 1/30.
  EXPECT_LE(inf(x - vec({23.0 / 34, 74.0 / 255, 1.0 / 30})), 1e-12);
}

TEST(SocialPower, TwoNodeSymmetric) {
  const auto net = InfluenceNetwork::create(mat({{0, 1}, {1, 0}}), vec({0.5, 0.5}));
  const Vector x = compute_social_power(net, vec({0, 0}));
  EXPECT_NEAR(x(0), 0.5, 1e-15);
  EXPECT_NEAR(x(1), 0.5, 1e-15);
}

TEST(SocialPower, NonnegativeAndSumsToOne) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    RandomNetworkSpec spec;
    spec.n = 2 + static_cast<std::size_t>(k % 7);
    const auto net = random_network(spec, rng);
    const Vector g = random_in_box(Vector::Zero(spec.n), Vector::Ones(spec.n), rng);
    const Vector x = compute_social_power(net, g);
    EXPECT_GE(x.minCoeff(), -1e-15);
    EXPECT_NEAR(x.sum(), 1.0, 1e-10);
    EXPECT_LE(inf(x - social_power_oracle(net.interaction(), net.susceptibility(), g)), 1e-10);
  }
}

TEST(SocialPower, SingularSystemIsReported) {
  const auto net = InfluenceNetwork::unchecked(mat({{0, 1}, {1, 0}}), vec({1.0, 1.0}));
  EXPECT_THROW(compute_social_power(net, vec({0, 0})), SingularSystem);
}

TEST(FJOpinions, IterationReachesDirectSolve) {
  const auto net = example2();
  const Vector g = vec({0.3, 0.2, 0.1});
  const Vector y0 = vec({1.0, -2.0, 0.5});
  OpinionState state{y0, y0, 0, 0};
  for (int k = 0; k < 2000; ++k) state = step_fj_opinions(net, g, state);
  EXPECT_LE(inf(state.y - fj_final_opinions(net, g, y0)), 1e-12);
  EXPECT_EQ(state.step, 2000u);
}

TEST(FJOpinions, TotalInfluenceIsRowStochasticAndGivesPower) {
  const auto net = example1();
  const Matrix V = total_influence(net, example1_gamma());
  EXPECT_LE((V.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_GE(V.minCoeff(), -1e-15);
  const Vector x = V.transpose() * Vector::Constant(3, 1.0 / 3);
  EXPECT_LE(inf(x - compute_social_power(net, example1_gamma())), 1e-12);
}

TEST(Phi, StructuralPropertiesOnRandomNetworks) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    RandomNetworkSpec spec;
    spec.n = 2 + static_cast<std::size_t>(k % 6);
    const auto net = random_network(spec, rng);
    const std::size_t n = net.size();
    const Vector x = random_simplex_point(n, rng);
    const Matrix P = compute_phi(net, x);
    const Vector stub = Vector::Ones(x.size()) - net.susceptibility();
    EXPECT_GE(P.minCoeff(), -1e-14);
    EXPECT_LE(((P * stub).array() - 1.0).abs().maxCoeff(), 1e-10);
    for (std::size_t i = 0; i < n; ++i) {
      const auto I = static_cast<Eigen::Index>(i);
      EXPECT_GT(P(I, I), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const auto J = static_cast<Eigen::Index>(j);
        if (j != i) EXPECT_GT(P(I, I), P(J, I));
        // Off-diagonal positivity from a partially stubborn row follows
        // stubborn-path reachability.
        if (j != i && net.partially_stubborn(i)) {
          EXPECT_EQ(P(I, J) > 1e-14, has_psp(net, i, j)) << "i=" << i << " j=" << j;
        }
      }
      double back = 0.0;
      for (std::size_t j = 0; j < n; ++j) back += net.weight(i, j) * P(static_cast<Eigen::Index>(j), I);
      EXPECT_EQ(back > 1e-14, has_psp(net, i, i));
    }
  }
}

namespace {

// The partially stubborn nodes other than `anchor` induce an acyclic graph.
bool interior_acyclic(const InfluenceNetwork& net, std::size_t anchor) {
  const std::size_t n = net.size();
  std::vector<int> indeg(n, 0);
  std::vector<bool> inside(n, false);
  for (std::size_t i : net.partially_stubborn_nodes()) inside[i] = i != anchor;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (inside[i] && inside[j] && net.weight(i, j) > 0.0) ++indeg[j];
    }
  }
  std::vector<std::size_t> queue;
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (inside[i]) {
      ++total;
      if (indeg[i] == 0) queue.push_back(i);
    }
  }
  std::size_t seen = 0;
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    ++seen;
    for (std::size_t j = 0; j < n; ++j) {
      if (inside[j] && net.weight(i, j) > 0.0 && --indeg[j] == 0) queue.push_back(j);
    }
  }
  return seen == total;
}

}  // namespace

TEST(Phi, CycleFormulaExactOnRings) {
  const auto net = InfluenceNetwork::create(
      mat({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}}), vec({0.3, 0.6, 0.0, 0.8}));
  const Vector x = vec({0.1, 0.4, 0.2, 0.3});
  const Matrix P = compute_phi(net, x);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto I = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(phi_diag_via_pscs(net, i, x), P(I, I), 1e-12 * P(I, I));
  }
}

TEST(Phi, CycleFormulaExactWhenInteriorIsAcyclic) {
  Rng rng(4);
  std::size_t checked = 0;
  for (int k = 0; k < 200; ++k) {
    RandomNetworkSpec spec;
    spec.n = 2 + static_cast<std::size_t>(k % 6);
    spec.edge_probability = 0.4;
    spec.fully_stubborn_probability = 0.35;
    const auto net = random_network(spec, rng);
    const Vector x = random_simplex_point(net.size(), rng);
    const Matrix P = compute_phi(net, x);
    for (std::size_t i = 0; i < net.size(); ++i) {
      if (!interior_acyclic(net, i)) continue;
      const auto I = static_cast<Eigen::Index>(i);
      EXPECT_NEAR(phi_diag_via_pscs(net, i, x), P(I, I), 1e-10 * P(I, I));
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(Phi, CycleFormulaUnderestimatesWhenWalksRevisitInteriorNodes) {
  // Complete graph on three partially stubborn nodes: the walk
  // 0 -> 1 -> 2 -> 1 -> 0 returns to 0 but is not a simple cycle.
  const auto net = InfluenceNetwork::create(mat({{0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}}),
                                            vec({0.8, 0.8, 0.8}));
  const Vector x = vec({0.2, 0.3, 0.5});
  const Matrix P = compute_phi(net, x);
  const double viacycles = phi_diag_via_pscs(net, 0, x);
  EXPECT_LT(viacycles, P(0, 0));
  EXPECT_GT((P(0, 0) - viacycles) / P(0, 0), 1e-3);
}

TEST(Phi, FullyStubbornAnchorHasUnitDiagonal) {
  const auto net = example2();
  const Vector x = vec({0.3, 0.3, 0.4});
  EXPECT_DOUBLE_EQ(phi_diag_via_pscs(net, 0, x), 1.0);
  EXPECT_NEAR(compute_phi(net, x)(0, 0), 1.0, 1e-15);
}

TEST(PowerEvolution, PreservesSimplex) {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    RandomNetworkSpec spec;
    spec.n = 2 + static_cast<std::size_t>(k % 7);
    const auto net = random_network(spec, rng);
    const Vector x = random_simplex_point(spec.n, rng);
    const Vector y = step_power_evolution_issue(net, x);
    EXPECT_GE(y.minCoeff(), 0.0);
    EXPECT_NEAR(y.sum(), 1.0, 1e-10);
  }
}

TEST(PowerEvolution, SingleTimescaleFirstStep) {
  const auto net = example2();
  const Vector x = vec({0.3, 0.5, 0.2});
  const auto next = step_power_evolution_single(net, single_timescale_start(x));
  const Matrix A = net.susceptibility().asDiagonal();
  const Matrix expected = A * appraisal_oracle(net.interaction(), x) + Matrix::Identity(3, 3) - A;
  EXPECT_LE((next.V - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(inf(next.x - expected.transpose() * Vector::Constant(3, 1.0 / 3)), 1e-15);
}

TEST(PowerEvolution, BothTimescalesShareTheEquilibrium) {
  const auto net = example2();
  Vector x = vec({0.3, 0.5, 0.2});
  for (int k = 0; k < 200; ++k) x = step_power_evolution_issue(net, x);
  auto state = single_timescale_start(vec({0.1, 0.2, 0.7}));
  for (int k = 0; k < 400; ++k) {
    state = step_power_evolution_single(net, state);
    EXPECT_NEAR(state.x.sum(), 1.0, 1e-12);
  }
  EXPECT_LE(inf(state.x - x), 1e-10);
  EXPECT_LE(inf(step_power_evolution_issue(net, x) - x), 1e-12);
}
