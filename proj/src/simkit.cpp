#include "spp/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "spp/errors.hpp"
#include "spp/fj_core.hpp"

namespace spp {

Agent::Agent(LocalView view, double p0) : view_(std::move(view)), current_p_(p0) {}

void Agent::receive(std::size_t from, double value) {
  const bool known = std::any_of(view_.in.begin(), view_.in.end(),
                                 [from](const LocalView::InNeighbor& nb) { return nb.id == from; });
  if (!known) {
    throw ViewViolation("agent " + std::to_string(view_.self + 1) + " got a message from node " +
                        std::to_string(from + 1) + ", which is not an in-neighbor");
  }
  inbox_[from] = value;
}

double Agent::received(std::size_t from) const {
  const auto it = inbox_.find(from);
  if (it == inbox_.end()) {
    throw ViewViolation("agent " + std::to_string(view_.self + 1) + " has no value from node " +
                        std::to_string(from + 1));
  }
  return it->second;
}

double Agent::compute(bool reflected) const {
  std::vector<double> values;
  values.reserve(view_.in.size());
  for (const auto& nb : view_.in) values.push_back(received(nb.id));
  return reflected ? local_update_ra(view_, current_p_, values)
                   : local_update_no_ra(view_, current_p_, values);
}

std::string to_string(DistributedMode mode) {
  switch (mode) {
    case DistributedMode::NoRA:
      return "no_ra";
    case DistributedMode::RA:
      return "ra";
    case DistributedMode::Homogeneous:
      return "homogeneous";
  }
  return "?";
}

namespace {

Round run_round(std::vector<Agent>& agents, const InfluenceNetwork& net, bool reflected,
                std::size_t index) {
  Round round;
  round.index = index;
  // Broadcast: each agent sends its value along its out-edges.
  for (const auto& sender : agents) {
    for (std::size_t j : net.out_neighbors(sender.id())) {
      agents[j].receive(sender.id(), sender.current_p());
      ++round.messages_delivered;
    }
  }
  std::vector<double> next(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (!agents[i].inbox_complete()) {
      throw ViewViolation("agent " + std::to_string(i + 1) + " is missing in-neighbor messages");
    }
    next[i] = agents[i].compute(reflected);
  }
  round.post_state.resize(static_cast<Eigen::Index>(agents.size()));
  for (std::size_t i = 0; i < agents.size(); ++i) {
    agents[i].commit(next[i]);
    round.post_state(static_cast<Eigen::Index>(i)) = next[i];
  }
  return round;
}

}  // namespace

DistributedRun run_distributed(const InfluenceNetwork& net, DistributedMode mode,
                               const std::optional<Vector>& gamma, const Vector& p0,
                               const RunOptions& options) {
  const std::size_t n = net.size();
  if (static_cast<std::size_t>(p0.size()) != n) {
    throw std::invalid_argument("initial perception has the wrong length");
  }
  if (mode == DistributedMode::NoRA && !gamma) {
    throw std::invalid_argument("no_ra mode needs gamma");
  }
  if (mode == DistributedMode::Homogeneous && !net.homogeneous()) {
    throw InvalidStructure("homogeneous mode needs equal susceptibilities");
  }
  const bool reflected = mode != DistributedMode::NoRA;

  std::vector<Agent> agents;
  agents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector* g = mode == DistributedMode::NoRA ? &*gamma : nullptr;
    agents.emplace_back(make_local_view(net, i, g), p0(static_cast<Eigen::Index>(i)));
  }

  Stepper centralized;
  switch (mode) {
    case DistributedMode::NoRA:
      centralized = [&net, &gamma](const Vector& p) {
        return step_perception_no_ra_matrix(net, *gamma, p);
      };
      break;
    case DistributedMode::RA:
      centralized = [&net](const Vector& p) { return step_perception_ra_matrix(net, p); };
      break;
    case DistributedMode::Homogeneous:
      centralized = [&net](const Vector& p) { return step_pagerank_ra(net, p); };
      break;
  }

  DistributedRun run;
  std::size_t round_index = 0;
  const Stepper step = [&](const Vector& p) {
    const Round round = run_round(agents, net, reflected, ++round_index);
    run.messages_total += round.messages_delivered;
    const Vector reference = centralized(p);
    if (round.post_state.allFinite() && reference.allFinite()) {
      const double scale = std::max(1.0, reference.lpNorm<Eigen::Infinity>());
      run.max_step_gap = std::max(
          run.max_step_gap, (round.post_state - reference).lpNorm<Eigen::Infinity>() / scale);
    }
    return round.post_state;
  };
  run.trajectory = run_to_convergence(step, p0, options);
  return run;
}

// ---------------------------------------------------------------------------

std::string to_string(Dynamics d) {
  switch (d) {
    case Dynamics::PerceptionNoRA:
      return "perception_no_ra";
    case Dynamics::PerceptionRA:
      return "perception_ra";
    case Dynamics::PerceptionRASingle:
      return "perception_ra_single";
    case Dynamics::PageRankRA:
      return "pagerank_ra";
    case Dynamics::PowerEvolution:
      return "power_evolution";
    case Dynamics::PowerEvolutionSingle:
      return "power_evolution_single";
    case Dynamics::DistributedNoRA:
      return "distributed_no_ra";
    case Dynamics::DistributedRA:
      return "distributed_ra";
  }
  return "?";
}

Trajectory run_dynamics(const InfluenceNetwork& net, Dynamics dynamics,
                        const std::optional<Vector>& gamma, const Vector& p0,
                        const RunOptions& options) {
  auto need_gamma = [&gamma]() -> const Vector& {
    if (!gamma) throw std::invalid_argument("this dynamics needs gamma");
    return *gamma;
  };
  switch (dynamics) {
    case Dynamics::PerceptionNoRA: {
      const Vector g = need_gamma();
      return run_to_convergence(
          [&net, g](const Vector& p) { return step_perception_no_ra(net, g, p); }, p0, options);
    }
    case Dynamics::PerceptionRA:
      return run_to_convergence([&net](const Vector& p) { return step_perception_ra(net, p); }, p0,
                                options);
    case Dynamics::PerceptionRASingle:
      return run_to_convergence([&net](const Vector& p) { return step_perception_ra(net, p); }, p0,
                                options, Timescale::Step);
    case Dynamics::PageRankRA:
      return run_to_convergence([&net](const Vector& p) { return step_pagerank_ra(net, p); }, p0,
                                options);
    case Dynamics::PowerEvolution:
      return run_to_convergence(
          [&net](const Vector& x) { return step_power_evolution_issue(net, x); }, p0, options);
    case Dynamics::PowerEvolutionSingle: {
      auto state = single_timescale_start(p0);
      return run_to_convergence(
          [&net, &state](const Vector& x) {
            state.x = x;
            state = step_power_evolution_single(net, state);
            return state.x;
          },
          p0, options, Timescale::Step);
    }
    case Dynamics::DistributedNoRA:
      return run_distributed(net, DistributedMode::NoRA, need_gamma(), p0, options).trajectory;
    case Dynamics::DistributedRA:
      return run_distributed(net, DistributedMode::RA, std::nullopt, p0, options).trajectory;
  }
  throw std::invalid_argument("unknown dynamics");
}

namespace {

TrajectorySummary run_one(const BatchScenario& scn) {
  TrajectorySummary out;
  out.name = scn.name;
  try {
    const auto net = InfluenceNetwork::create(scn.C, scn.a);
    RunOptions opts = scn.options;
    opts.dense_steps = 0;
    opts.sparse_stride = opts.max_iter + 1;
    const auto traj = run_dynamics(net, scn.dynamics, scn.gamma, scn.p0, opts);
    out.status = traj.status;
    out.iterations = traj.iterations;
    out.final_state = traj.final_state();
    for (const auto id : scn.conditions) {
      const auto rep = check_condition(net, id);
      out.condition_margins[to_string(id)] = rep.margin;
      out.condition_holds[to_string(id)] = rep.holds;
    }
  } catch (const std::exception& e) {
    out.status.reset();
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<TrajectorySummary> run_batch(const std::vector<BatchScenario>& scenarios,
                                         std::size_t parallelism) {
  std::vector<TrajectorySummary> results(scenarios.size());
  if (scenarios.empty()) return results;
  const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, scenarios.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t k = next++; k < scenarios.size(); k = next++) results[k] = run_one(scenarios[k]);
  };
  if (workers == 1) {
    work();
    return results;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace spp
