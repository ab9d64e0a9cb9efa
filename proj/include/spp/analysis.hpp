#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spp/network.hpp"
#include "spp/perception.hpp"

namespace spp {

/// Axis-aligned box {x : lower <= x <= upper}; bounds may be infinite.
struct Box {
  Vector lower;
  Vector upper;

  Box() = default;
  Box(Vector lo, Vector hi);

  std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
  /// Containment with an absolute slack on every face.
  bool contains(const Vector& x, double slack = 0.0) const;
  /// Copy with every upper bound multiplied by `factor`.
  Box scaled_upper(double factor) const;
};

// ---------------------------------------------------------------------------
// Equilibria

struct EquilibriumOptions {
  std::size_t multistarts = 20;  // random simplex starts, on top of the barycenter
  std::uint64_t seed = 0;
  double tol = 1e-12;
  std::size_t max_iter = 100'000;
  double agreement_tol = 1e-8;
};

/// Multistart evidence for a unique equilibrium of the reflected-appraisal
/// power dynamics. Agreement of all starts corroborates uniqueness; it is
/// evidence, not a proof.
struct EquilibriumReport {
  Vector p_star;
  double residual = 0.0;             // inf-norm of x - F(x) for the power map
  double perception_residual = 0.0;  // same for the perception map
  std::size_t iterations = 0;        // iterations of the run that produced p_star
  std::size_t starts_total = 0;
  std::size_t starts_converged = 0;
  std::size_t starts_agreeing = 0;  // converged starts within agreement_tol of p_star
  double max_pairwise_gap = 0.0;    // over converged starts
  bool in_simplex = false;
  bool interior = false;

  bool unique_evidence() const {
    return starts_converged == starts_total && starts_agreeing == starts_total;
  }
};

/// Iterates the issue-indexed power map from the barycenter and
/// `multistarts` random simplex points. Throws NoConvergence if none converge.
EquilibriumReport solve_equilibrium(const InfluenceNetwork& net,
                                    const EquilibriumOptions& options = {});

/// inf-norm of step_perception_ra(p) - p.
double perception_defect(const InfluenceNetwork& net, const Vector& p);

/// Closed-form equilibrium on star topologies.
///   fully stubborn center: leaves in V_p solve a_i p^2 - p + (1-a_i)/n = 0
///   (smaller root), fully stubborn leaves sit at 1/n, the center collects
///   1/n + (1/n) sum_{V_p} a_j (1 - p_j) / (1 - a_j p_j);
///   partially stubborn center: additionally needs C_1j = 0 for partially
///   stubborn leaves j and uses the three-case formula.
/// Throws NotStar or InvalidStructure.
Vector star_equilibrium_closed_form(const InfluenceNetwork& net);

/// Partially stubborn leaf equilibrium (1 - sqrt(1 - 4 a (1-a)/n)) / (2a).
double star_leaf_equilibrium(double a, std::size_t n);

// ---------------------------------------------------------------------------
// Invariant sets

/// b_i = sum_{j in V_p} C_ji a_j/(1-a_j),  d_i = sum_{j in V_p} C_ji (1+3a_j)/(4a_j).
struct FlowBounds {
  Vector b;
  Vector d;
};
FlowBounds flow_bounds(const InfluenceNetwork& net);

/// H = [0, nu] with nu_i = 1/n + b_i/4 on V_f and 1/2 on V_p.
Box build_invariant_set_H(const InfluenceNetwork& net);
/// M = [mu, nu] with mu_i = 1/n - d_i/4, nu_i = 1/n + b_i/4 on V_f and
/// [-(1-a_i)/(4a_i), (1+a_i)/(4a_i)] on V_p.
Box build_invariant_set_M(const InfluenceNetwork& net);

/// Star with fully stubborn center c: [0, 1 + alpha e_c] with
/// alpha = (1/4) sum_{V_p} a_j/(1-a_j) - (n-1)/n.
Box star_invariant_box(const InfluenceNetwork& net);

/// Boxes for a star with partially stubborn center c.
struct PartialCenterStarBoxes {
  /// Box with the lower bound 1/n - |2a_c-1|/(4a_c(1-a_c)) on V_f.
  Box invariant;
  /// Lower bound with the opposite sign:
  /// |2a_c-1|/(4a_c(1-a_c)) - 1/n on V_f. Kept for reporting only.
  Vector statement_lower;
  /// [0, nu'] with nu'_c = 1/(2a_c), 1 elsewhere.
  Box start_region;
};
PartialCenterStarBoxes partial_center_star_boxes(const InfluenceNetwork& net);

// ---------------------------------------------------------------------------
// Sufficient conditions

enum class ConditionId { Eq15, Eq16, Eq17, Eq19, Democracy, Eq15Legacy, Dominance };

std::string to_string(ConditionId id);
std::optional<ConditionId> parse_condition_id(const std::string& name);

struct NodeMargin {
  std::size_t node = 0;  // 0-based
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // signed slack, rhs - lhs oriented so that >= 0 is good
};

/// holds is true iff every node margin is >= 0 (> 0 for strict inequalities:
/// Eq16, Eq15Legacy, Dominance). `margin` is the smallest node margin.
struct ConditionReport {
  ConditionId id = ConditionId::Eq15;
  bool holds = false;
  bool strict = false;
  double margin = 0.0;
  std::vector<NodeMargin> per_node;
  std::vector<std::string> notes;
};

/// Democracy is checked with ||C^T v - v||_inf <= kDemocracyTol.
inline constexpr double kDemocracyTol = 1e-10;

/// Evaluates one condition. Eq17 needs a star with partially stubborn
/// center, Eq19 needs homogeneous susceptibility; otherwise WrongTopology.
/// Dominance needs p_star and is served by check_dominance_necessary.
ConditionReport check_condition(const InfluenceNetwork& net, ConditionId which);

struct DominanceReport {
  ConditionReport condition;  // the inequality sum_j C_ji a_j/(1-a_j) > ...
  bool dominant = false;      // p*_i > sigma
  bool consistent = true;     // dominant implies condition
};

/// Necessary condition for p*_i > sigma, sigma in [1/2, 1).
DominanceReport check_dominance_necessary(const InfluenceNetwork& net, const Vector& p_star,
                                          std::size_t i, double sigma);

// ---------------------------------------------------------------------------
// Monte Carlo and local diagnostics

struct BoxExit {
  Vector point;
  std::size_t coordinate = 0;
  double magnitude = 0.0;  // distance outside the face
};

struct InvarianceReport {
  std::size_t samples = 0;
  std::size_t exits = 0;              // samples whose image left the box
  std::vector<BoxExit> first_exits;   // at most kMaxRecordedExits
  static constexpr std::size_t kMaxRecordedExits = 32;
};

/// Draws uniform points of `box`, applies one reflected-appraisal perception
/// step and counts images outside the box by more than `slack`.
InvarianceReport one_step_invariance_test(const InfluenceNetwork& net, const Box& box,
                                          std::size_t samples, std::uint64_t seed,
                                          double slack = 1e-12);

/// Jacobian dF/dx of the reflected-appraisal map:
/// (I-A)(diag(2p) + C^T (I - diag(2p))) A (I-A)^{-1}.
Matrix perception_jacobian(const InfluenceNetwork& net, const Vector& p);
/// Similarity transform (I-A)^{-1} dF/dx (I-A) with entries 2 a_i p_i on the
/// diagonal and C_ji a_j (1 - 2 p_j) off it.
Matrix transformed_jacobian(const InfluenceNetwork& net, const Vector& p);

struct ContractionReport {
  double norm1 = 0.0;              // induced 1-norm of the transformed Jacobian
  double norm1_closed_form = 0.0;  // max_{i in V_p} a_i (2|p_i| + |1 - 2p_i|)
  double fd_relative_error = 0.0;  // central differences vs analytic dF/dx
  Matrix jacobian;
  Matrix transformed;
};

ContractionReport contraction_diagnostic(const InfluenceNetwork& net, const Vector& p,
                                         double fd_step = 1e-6);

enum class Direction { Increasing, Decreasing, Constant, Undetermined };
std::string to_string(Direction d);

struct MonotonicityReport {
  Vector p_star;
  RunStatus status = RunStatus::MaxIter;
  bool leaves_monotone = true;
  std::optional<std::size_t> first_violation_step;
  std::optional<std::size_t> violating_node;
  /// Direction the center must eventually move in; Undetermined when the
  /// leaves start on both sides of their equilibria.
  Direction center_direction = Direction::Undetermined;
  /// First step from which the center moves strictly in center_direction,
  /// stays on the expected side of p*_c and contracts towards it.
  std::optional<std::size_t> center_monotone_from;
};

/// Runs the reflected-appraisal perception dynamics on a star with fully
/// stubborn center and checks strict monotonicity of the partially stubborn
/// leaves and eventual monotonicity of the center. Differences below `floor`
/// are treated as converged and not judged. Throws WrongTopology.
MonotonicityReport monotonicity_test_star(const InfluenceNetwork& net, const Vector& p0,
                                          const RunOptions& options = {}, double floor = 1e-13);

}  // namespace spp
