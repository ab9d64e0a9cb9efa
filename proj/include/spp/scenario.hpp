#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spp/analysis.hpp"
#include "spp/network.hpp"
#include "spp/perception.hpp"
#include "spp/simkit.hpp"

namespace spp {

enum class ScenarioMode {
  SocialPower,
  PerceptionNoRA,
  PerceptionRA,
  PerceptionRASingle,
  PowerEvolution,
  PowerEvolutionSingle,
  PageRankRA,
  FJOpinions,
  DistributedNoRA,
  DistributedRA,
};

std::string to_string(ScenarioMode mode);
std::optional<ScenarioMode> parse_mode(const std::string& name);

struct InvariantRequest {
  std::string box = "M";  // H, M, star, star_partial or explicit
  Vector lower;           // only for box: explicit
  Vector upper;
  double upper_scale = 1.0;  // >1 gives the inflated-box control
  std::size_t samples = 10'000;
};

struct ArtifactRequests {
  bool trajectory_csv = false;
  bool equilibrium_report = false;
  std::vector<ConditionId> conditions;
  std::optional<InvariantRequest> invariant_test;
  bool monotonicity_report = false;
};

struct Scenario {
  explicit Scenario(InfluenceNetwork network) : net(std::move(network)) {}

  InfluenceNetwork net;
  std::string name;
  ScenarioMode mode = ScenarioMode::PerceptionRA;
  std::optional<Vector> gamma;
  std::vector<Vector> initial;  // one trajectory per entry
  RunOptions run;
  std::uint64_t seed = 0;
  ArtifactRequests outputs;
  std::filesystem::path source;
};

/// Reads a scenario file (YAML). Throws ParseError for malformed input and
/// ValidationError naming the failed invariant and index.
/// `seed_override` replaces the top-level seed before random initial
/// vectors are drawn.
Scenario load_scenario(const std::filesystem::path& path,
                       std::optional<std::uint64_t> seed_override = std::nullopt);
Scenario parse_scenario(const std::string& text, const std::filesystem::path& source = {},
                        std::optional<std::uint64_t> seed_override = std::nullopt);

struct TrajectoryOutcome {
  RunStatus status = RunStatus::MaxIter;
  std::size_t iterations = 0;
  Vector final_state;
};

struct ScenarioResult {
  int exit_code = 1;  // 0 converged / report ok, 2 diverged, 1 otherwise
  std::vector<TrajectoryOutcome> trajectories;
  std::vector<std::filesystem::path> artifacts;
  std::string report;  // text printed by the CLI
};

/// Runs every trajectory, writes the requested artifacts into `out_dir` and
/// returns the exit status class.
ScenarioResult run_scenario(const Scenario& scn, const std::filesystem::path& out_dir);

/// Text report: network classification, conditions, equilibrium evidence.
std::string scenario_report(const Scenario& scn);

/// Social power x = (I-A)(I-W(gamma)^T A)^{-1} 1/n by a direct solve.
/// Needs gamma; throws ValidationError otherwise.
std::string oracle_report(const Scenario& scn);

/// One batch entry per initial vector (`<name>#k`, k from 1; a single
/// initial vector keeps the plain name). social_power and
/// fj_opinions have no perception dynamics and yield no entries.
std::vector<BatchScenario> to_batch(const Scenario& scn);

/// `step,p_1,...,p_n` with %.17e values.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& prefix = "p");

}  // namespace spp
