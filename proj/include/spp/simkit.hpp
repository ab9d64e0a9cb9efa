#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spp/analysis.hpp"
#include "spp/network.hpp"
#include "spp/perception.hpp"

namespace spp {

/// A node in the round-based simulator. It owns its LocalView, its current
/// perceived power and an inbox keyed by in-neighbor id.
class Agent {
 public:
  explicit Agent(LocalView view, double p0);

  std::size_t id() const { return view_.self; }
  const LocalView& view() const { return view_; }
  double current_p() const { return current_p_; }
  const std::map<std::size_t, double>& inbox() const { return inbox_; }

  /// Stores a message from `from`; throws ViewViolation if `from` is not an
  /// in-neighbor.
  void receive(std::size_t from, double value);
  /// Latest value from in-neighbor `from`; ViewViolation otherwise.
  double received(std::size_t from) const;
  bool inbox_complete() const { return inbox_.size() == view_.in.size(); }

  /// Computes the next value from own state and inbox only.
  double compute(bool reflected) const;
  void commit(double next) { current_p_ = next; }

 private:
  LocalView view_;
  double current_p_;
  std::map<std::size_t, double> inbox_;
};

struct Round {
  std::size_t index = 0;
  std::size_t messages_delivered = 0;
  Vector post_state;
};

enum class DistributedMode { NoRA, RA, Homogeneous };

std::string to_string(DistributedMode mode);

struct DistributedRun {
  Trajectory trajectory;
  /// Largest inf-norm gap between a round's result and the centralized
  /// matrix-form stepper applied to the same pre-round state, divided by
  /// max(1, |reference|_inf) so that diverging runs are judged on their
  /// significant digits.
  double max_step_gap = 0.0;
  std::size_t messages_total = 0;
};

/// Synchronous rounds: every agent broadcasts p_i to its out-neighbors, then
/// every agent updates from its inbox and own state. `gamma` is required in
/// NoRA mode; Homogeneous needs equal susceptibilities.
DistributedRun run_distributed(const InfluenceNetwork& net, DistributedMode mode,
                               const std::optional<Vector>& gamma, const Vector& p0,
                               const RunOptions& options = {});

// ---------------------------------------------------------------------------
// Batches

enum class Dynamics {
  PerceptionNoRA,
  PerceptionRA,
  PerceptionRASingle,
  PageRankRA,
  PowerEvolution,
  PowerEvolutionSingle,
  DistributedNoRA,
  DistributedRA,
};

std::string to_string(Dynamics d);

struct BatchScenario {
  std::string name;
  Matrix C;
  Vector a;
  std::optional<Vector> gamma;
  Dynamics dynamics = Dynamics::PerceptionRA;
  Vector p0;
  RunOptions options;
  std::vector<ConditionId> conditions;  // margins reported in the summary
};

struct TrajectorySummary {
  std::string name;
  std::optional<RunStatus> status;  // empty when the scenario errored
  std::size_t iterations = 0;
  Vector final_state;
  std::string error;
  std::map<std::string, double> condition_margins;
  std::map<std::string, bool> condition_holds;

  bool ok() const { return error.empty(); }
};

/// Iterates one dynamics from p0 and returns the full trajectory.
Trajectory run_dynamics(const InfluenceNetwork& net, Dynamics dynamics,
                        const std::optional<Vector>& gamma, const Vector& p0,
                        const RunOptions& options);

/// Runs every scenario on up to `parallelism` threads. Results keep the input
/// order; failures are recorded in the summary instead of thrown.
std::vector<TrajectorySummary> run_batch(const std::vector<BatchScenario>& scenarios,
                                         std::size_t parallelism = 1);

}  // namespace spp
