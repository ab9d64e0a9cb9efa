#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spp/network.hpp"

namespace spp {

/// Everything node i may use to update its perceived power: the group size,
/// its own constants, and for each in-neighbor j (C_ji > 0) the triple
/// (a_j, gamma_j, C_ji). gamma is only meaningful without reflected
/// appraisals; in that mode it stays at zero otherwise.
struct LocalView {
  struct InNeighbor {
    std::size_t id;
    double susceptibility;
    double self_appraisal;
    double weight;  // C_ji
  };

  std::size_t self = 0;
  std::size_t group_size = 0;
  double susceptibility = 0.0;
  double self_appraisal = 0.0;
  std::vector<InNeighbor> in;  // ascending id
};

/// Builds node i's view. Pass gamma for the no-reflected-appraisal mode.
LocalView make_local_view(const InfluenceNetwork& net, std::size_t i,
                          const Vector* gamma = nullptr);

/// Per-node updates. `neighbor_p[k]` is the perceived power of view.in[k].
///   no RA: (1-a_i)/n + a_i g_i p_i + (1-a_i) sum_j a_j/(1-a_j) C_ji (1-g_j) p_j
///   RA:    (1-a_i)/n + a_i p_i^2  + (1-a_i) sum_j a_j/(1-a_j) C_ji p_j (1-p_j)
/// Summation order is ascending neighbor id.
double local_update_no_ra(const LocalView& view, double own_p, std::span<const double> neighbor_p);
double local_update_ra(const LocalView& view, double own_p, std::span<const double> neighbor_p);

/// Perception without reflected appraisals, assembled node by node from
/// local views.
Vector step_perception_no_ra(const InfluenceNetwork& net, const Vector& gamma, const Vector& p);
/// Same map in compact matrix form (I-A) W(g)^T A (I-A)^{-1} p + (I-A) 1/n.
Vector step_perception_no_ra_matrix(const InfluenceNetwork& net, const Vector& gamma,
                                    const Vector& p);

/// Perception with reflected appraisals (gamma replaced by p itself).
/// Serves both the issue-indexed and the step-indexed variant.
Vector step_perception_ra(const InfluenceNetwork& net, const Vector& p);
Vector step_perception_ra_matrix(const InfluenceNetwork& net, const Vector& p);

/// Homogeneous-susceptibility form a W(p)^T p + (1-a)/n 1.
/// Throws InvalidStructure unless all a_i are equal.
Vector step_pagerank_ra(const InfluenceNetwork& net, const Vector& p);

/// DeGroot perception p' = W^T p (diagnostic comparison only).
Vector step_degroot_perception(const Matrix& W, const Vector& p);

enum class RunStatus { Converged, Diverged, MaxIter };
enum class Timescale { Issue, Step };

std::string to_string(RunStatus status);
std::string to_string(Timescale scale);

struct RunOptions {
  double tol = 1e-12;
  std::size_t max_iter = 100'000;
  double divergence_bound = 1e9;
  /// Every state is kept for the first `dense_steps` iterations, then every
  /// `sparse_stride`-th. The final state is always kept.
  std::size_t dense_steps = 10'000;
  std::size_t sparse_stride = 10;
};

struct Trajectory {
  std::vector<std::size_t> steps;
  std::vector<Vector> states;
  RunStatus status = RunStatus::MaxIter;
  std::size_t iterations = 0;   // number of stepper applications
  double last_increment = 0.0;  // inf-norm of the final update
  Timescale timescale = Timescale::Issue;

  const Vector& final_state() const { return states.back(); }
};

using Stepper = std::function<Vector(const Vector&)>;

/// Iterates `step` from p0 until the inf-norm increment drops below tol
/// (Converged), some |p_i| exceeds the divergence bound or turns non-finite
/// (Diverged), or max_iter steps elapse (MaxIter).
Trajectory run_to_convergence(const Stepper& step, Vector p0, const RunOptions& options = {},
                              Timescale timescale = Timescale::Issue);

}  // namespace spp
