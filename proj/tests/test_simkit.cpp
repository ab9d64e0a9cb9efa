#include <gtest/gtest.h>

#include "spp/errors.hpp"
#include "spp/fj_core.hpp"
#include "spp/simkit.hpp"
#include "support.hpp"

using namespace spp;
using namespace spp::test;

TEST(Agent, RejectsMessagesOutsideItsView) {
  const auto net = example2();
  Agent agent(make_local_view(net, 0), 0.3);
  // Node 1 only hears node 3.
  EXPECT_THROW(agent.receive(1, 0.2), ViewViolation);
  EXPECT_THROW(agent.received(2), ViewViolation);
  EXPECT_FALSE(agent.inbox_complete());
  agent.receive(2, 0.4);
  EXPECT_TRUE(agent.inbox_complete());
  EXPECT_DOUBLE_EQ(agent.received(2), 0.4);
}

TEST(Agent, ComputeNeedsAFullInbox) {
  Agent agent(make_local_view(example2(), 2), 0.3);
  agent.receive(0, 0.1);
  EXPECT_THROW(agent.compute(true), ViewViolation);
}

TEST(Agent, ComputeMatchesTheLocalUpdate) {
  const auto net = example2();
  const Vector p = vec({0.2, 0.5, 0.3});
  Agent agent(make_local_view(net, 2), p(2));
  agent.receive(0, p(0));
  agent.receive(1, p(1));
  EXPECT_NEAR(agent.compute(true), step_perception_ra(net, p)(2), 1e-16);
  agent.commit(0.9);
  EXPECT_DOUBLE_EQ(agent.current_p(), 0.9);
}

TEST(Distributed, ExampleOneMatchesCentralized) {
  const auto net = example1();
  const auto run = run_distributed(net, DistributedMode::NoRA, example1_gamma(), vec({0.2, 0.3, 0.5}),
                                   quiet_options());
  EXPECT_EQ(run.trajectory.status, RunStatus::Converged);
  EXPECT_LE(run.max_step_gap, 1e-14);
  EXPECT_LE(inf(run.trajectory.final_state() -
                social_power_oracle(example1_C(), example1_a(), example1_gamma())),
            1e-10);
  // Each round carries one message per edge.
  EXPECT_EQ(run.messages_total, 3u * run.trajectory.iterations);
}

TEST(Distributed, ExampleTwoMatchesCentralized) {
  const auto net = example2();
  const auto run = run_distributed(net, DistributedMode::RA, std::nullopt, vec({-0.5, -0.3, 0.5}),
                                   quiet_options());
  EXPECT_EQ(run.trajectory.status, RunStatus::Converged);
  EXPECT_LE(run.max_step_gap, 1e-14);
  const auto central = run_dynamics(net, Dynamics::PerceptionRA, std::nullopt, vec({-0.5, -0.3, 0.5}),
                                    quiet_options());
  EXPECT_EQ(central.iterations, run.trajectory.iterations);
  EXPECT_LE(inf(central.final_state() - run.trajectory.final_state()), 1e-14);
}

TEST(Distributed, FixedPointIsKeptInOneRound) {
  const auto net = example1();
  const Vector x = compute_social_power(net, example1_gamma());
  const auto run = run_distributed(net, DistributedMode::NoRA, example1_gamma(), x, quiet_options(1e-12, 1));
  EXPECT_EQ(run.trajectory.iterations, 1u);
  EXPECT_LE(inf(run.trajectory.final_state() - x), 1e-15);
}

TEST(Distributed, ArgumentChecks) {
  EXPECT_THROW(run_distributed(example1(), DistributedMode::NoRA, std::nullopt, vec({0.2, 0.3, 0.5})),
               std::invalid_argument);
  EXPECT_THROW(run_distributed(example2(), DistributedMode::Homogeneous, std::nullopt,
                               vec({0.2, 0.3, 0.5})),
               InvalidStructure);
  EXPECT_THROW(run_distributed(example2(), DistributedMode::RA, std::nullopt, vec({0.5, 0.5})),
               std::invalid_argument);
}

namespace {

BatchScenario example3(const std::string& name, const Matrix& C, const Vector& a, const Vector& p0) {
  BatchScenario s;
  s.name = name;
  s.C = C;
  s.a = a;
  s.p0 = p0;
  s.options = quiet_options(1e-12, 10'000);
  s.conditions = {ConditionId::Eq17};
  return s;
}

std::vector<BatchScenario> example3_batch() {
  return {example3("a", example3_C1(), example3_a1(), example3_x1()),
          example3("b", example3_C1(), example3_a2(), example3_x2()),
          example3("c", example3_C1(), example3_a2(), example3_x1()),
          example3("d", example3_C2(), example3_a2(), example3_x2())};
}

}  // namespace

TEST(Batch, ExampleThreeOutcomes) {
  const auto out = run_batch(example3_batch());
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].status, RunStatus::Converged);
  EXPECT_EQ(out[1].status, RunStatus::Converged);
  EXPECT_EQ(out[2].status, RunStatus::Diverged);
  for (const auto& s : out) {
    EXPECT_TRUE(s.ok()) << s.error;
    ASSERT_EQ(s.condition_margins.count("Eq17"), 1u);
  }
  EXPECT_FALSE(out[0].condition_holds.at("Eq17"));
  EXPECT_NEAR(out[0].condition_margins.at("Eq17"), 1.0 / (0.2 * 0.8) - 1.0 - (0.7 / 0.3 + 4.0), 1e-12);
}

TEST(Batch, StarWithCenterWeightOnPartialLeafConvergesUnderTheModel) {
  // Characterization: with C_14 = 1 the iteration from (0.7, 0.6, 0.9, 0.9)
  // still settles.
  const auto out = run_batch(example3_batch());
  EXPECT_EQ(out[3].status, RunStatus::Converged);
  EXPECT_NEAR(out[3].final_state.sum(), 1.0, 1e-10);
  EXPECT_NEAR(out[3].final_state(1), 0.25, 1e-12);
}

TEST(Batch, EmptyInputGivesEmptyOutput) { EXPECT_TRUE(run_batch({}, 4).empty()); }

TEST(Batch, ErrorsAreCaptured) {
  auto bad = example3("bad", example3_C1(), vec({0.2, 0, 0.7, 1.0}), example3_x1());
  auto wrong_len = example3("len", example3_C1(), example3_a1(), vec({0.5, 0.5}));
  auto no_gamma = example3("ng", example3_C1(), example3_a1(), example3_x1());
  no_gamma.dynamics = Dynamics::PerceptionNoRA;
  const auto out = run_batch({bad, wrong_len, no_gamma});
  for (const auto& s : out) {
    EXPECT_FALSE(s.ok());
    EXPECT_FALSE(s.status.has_value());
  }
}

TEST(Batch, ParallelMatchesSerialAndIsDeterministic) {
  std::vector<BatchScenario> many;
  Rng rng(31);
  for (int k = 0; k < 24; ++k) {
    RandomNetworkSpec spec;
    spec.n = 3 + static_cast<std::size_t>(k % 4);
    const auto net = random_network(spec, rng);
    BatchScenario s;
    s.name = "r" + std::to_string(k);
    s.C = net.interaction();
    s.a = net.susceptibility();
    s.p0 = random_simplex_point(spec.n, rng);
    s.dynamics = k % 2 ? Dynamics::PowerEvolution : Dynamics::PerceptionRA;
    s.options = quiet_options();
    many.push_back(s);
  }
  const auto serial = run_batch(many, 1);
  const auto parallel = run_batch(many, 4);
  const auto again = run_batch(many, 4);
  ASSERT_EQ(serial.size(), many.size());
  for (std::size_t k = 0; k < many.size(); ++k) {
    EXPECT_EQ(serial[k].name, many[k].name);
    EXPECT_EQ(serial[k].status, parallel[k].status);
    EXPECT_EQ(serial[k].iterations, parallel[k].iterations);
    EXPECT_TRUE(serial[k].final_state == parallel[k].final_state);
    EXPECT_TRUE(again[k].final_state == parallel[k].final_state);
  }
}

TEST(Dynamics, SingleTimescaleVariantsReachTheSameEquilibrium) {
  const auto net = example2();
  const Vector p0 = vec({0.2, 0.3, 0.5});
  const auto issue = run_dynamics(net, Dynamics::PowerEvolution, std::nullopt, p0, quiet_options());
  const auto single = run_dynamics(net, Dynamics::PowerEvolutionSingle, std::nullopt, p0, quiet_options());
  const auto ra_single = run_dynamics(net, Dynamics::PerceptionRASingle, std::nullopt, p0, quiet_options());
  EXPECT_EQ(single.timescale, Timescale::Step);
  EXPECT_EQ(ra_single.timescale, Timescale::Step);
  EXPECT_LE(inf(issue.final_state() - single.final_state()), 1e-10);
  EXPECT_LE(inf(issue.final_state() - ra_single.final_state()), 1e-10);
}
