#pragma once

#include <cstddef>

#include "spp/network.hpp"

namespace spp {

/// W(g) = diag(g) + (I - diag(g)) C. Row stochastic whenever g is in [0,1]^n.
Matrix appraisal_matrix(const Matrix& C, const Vector& g);

struct OpinionState {
  Vector y;   // current opinions
  Vector y0;  // initial opinions the stubborn part anchors to
  std::size_t issue = 0;
  std::size_t step = 0;
};

/// One Friedkin-Johnsen update y' = A W(gamma) y + (I - A) y0.
/// This overload takes raw (C, a) and performs no validation.
OpinionState step_fj_opinions(const Matrix& C, const Vector& a, const Vector& gamma,
                              const OpinionState& state);
OpinionState step_fj_opinions(const InfluenceNetwork& net, const Vector& gamma,
                              const OpinionState& state);

/// Limit opinions (I - A W(gamma))^{-1} (I - A) y0 by a dense solve.
Vector fj_final_opinions(const InfluenceNetwork& net, const Vector& gamma, const Vector& y0);

/// Total-influence matrix V = (I - A W(gamma))^{-1} (I - A); row stochastic.
Matrix total_influence(const InfluenceNetwork& net, const Vector& gamma);

/// Social power x = (I - A)(I - W(gamma)^T A)^{-1} 1/n.
/// Throws SingularSystem if the solve fails.
Vector compute_social_power(const InfluenceNetwork& net, const Vector& gamma);

/// Phi(x) = (I - A W(x))^{-1}. This is a diagnostic path and forms the
/// inverse explicitly (via an LU solve against I).
Matrix compute_phi(const InfluenceNetwork& net, const Vector& x);

/// Phi_ii(x) from the stubborn-cycle expansion
///   1 / (1 - a_i x_i - a_i (1 - x_i) phi_i(x)),
///   phi_i(x) = sum over stubborn cycles q of i of C_q prod_{l in q, l != i} eta_l,
///   eta_l = a_l (1 - x_l) / (1 - a_l x_l).
/// The sum runs over simple cycles only, so it reproduces the dense
/// diagonal exactly when no walk from i back to i can revisit an interior
/// node (the partially stubborn subgraph without i is acyclic along those
/// walks); otherwise it underestimates Phi_ii.
double phi_diag_via_pscs(const InfluenceNetwork& net, std::size_t anchor, const Vector& x,
                         std::size_t budget = kDefaultCycleBudget);

/// The cycle sum phi_i(x) on its own.
double stubborn_cycle_sum(const InfluenceNetwork& net, std::size_t anchor, const Vector& x,
                          std::size_t budget = kDefaultCycleBudget);

/// Issue-indexed reflected-appraisal power update x' = (I-A)(I-W(x)^T A)^{-1} 1/n.
Vector step_power_evolution_issue(const InfluenceNetwork& net, const Vector& x);

/// State of the single-timescale power dynamics.
struct SingleTimescaleState {
  Matrix V;  // starts at the identity
  Vector x;
};

/// V' = A W(x) V + I - A,  x' = V'^T 1/n.
SingleTimescaleState step_power_evolution_single(const InfluenceNetwork& net,
                                                 const SingleTimescaleState& state);

/// Initial single-timescale state (V = I) with an arbitrary x(0).
SingleTimescaleState single_timescale_start(const Vector& x0);

}  // namespace spp
