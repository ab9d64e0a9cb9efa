#include "spp/fj_core.hpp"

#include <cmath>
#include <limits>

#include "spp/errors.hpp"

namespace spp {

namespace {

// Below this reciprocal condition estimate the system is treated as singular.
constexpr double kMinRcond = 1e-14;

Eigen::PartialPivLU<Matrix> factor(const Matrix& M, const char* what) {
  Eigen::PartialPivLU<Matrix> lu(M);
  const double rc = lu.rcond();
  if (!(rc > kMinRcond)) {
    throw SingularSystem(std::string(what) + ": matrix is numerically singular (rcond " +
                         std::to_string(rc) + ")");
  }
  return lu;
}

Matrix identity(std::size_t n) {
  return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

void check_length(const InfluenceNetwork& net, const Vector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != net.size()) {
    throw std::invalid_argument(std::string(what) + " has length " + std::to_string(v.size()) +
                                ", expected " + std::to_string(net.size()));
  }
}

}  // namespace

Matrix appraisal_matrix(const Matrix& C, const Vector& g) {
  const Vector keep = Vector::Ones(g.size()) - g;
  Matrix W = keep.asDiagonal() * C;
  W.diagonal() += g;
  return W;
}

OpinionState step_fj_opinions(const Matrix& C, const Vector& a, const Vector& gamma,
                              const OpinionState& state) {
  const Matrix W = appraisal_matrix(C, gamma);
  OpinionState next = state;
  next.y = a.asDiagonal() * (W * state.y) +
           (Vector::Ones(a.size()) - a).asDiagonal() * state.y0;
  next.step = state.step + 1;
  return next;
}

OpinionState step_fj_opinions(const InfluenceNetwork& net, const Vector& gamma,
                              const OpinionState& state) {
  check_length(net, gamma, "gamma");
  return step_fj_opinions(net.interaction(), net.susceptibility(), gamma, state);
}

Vector fj_final_opinions(const InfluenceNetwork& net, const Vector& gamma, const Vector& y0) {
  check_length(net, gamma, "gamma");
  const Vector& a = net.susceptibility();
  const Matrix M = identity(net.size()) - a.asDiagonal() * appraisal_matrix(net.interaction(), gamma);
  const Vector rhs = (Vector::Ones(a.size()) - a).asDiagonal() * y0;
  return factor(M, "fj_final_opinions").solve(rhs);
}

Matrix total_influence(const InfluenceNetwork& net, const Vector& gamma) {
  check_length(net, gamma, "gamma");
  const Vector& a = net.susceptibility();
  const Matrix M = identity(net.size()) - a.asDiagonal() * appraisal_matrix(net.interaction(), gamma);
  const Matrix rhs = Matrix((Vector::Ones(a.size()) - a).asDiagonal());
  return factor(M, "total_influence").solve(rhs);
}

Vector compute_social_power(const InfluenceNetwork& net, const Vector& gamma) {
  check_length(net, gamma, "gamma");
  const std::size_t n = net.size();
  const Vector& a = net.susceptibility();
  const Matrix W = appraisal_matrix(net.interaction(), gamma);
  const Matrix M = identity(n) - W.transpose() * a.asDiagonal();
  const Vector rhs = Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  const Vector z = factor(M, "compute_social_power").solve(rhs);
  return (Vector::Ones(a.size()) - a).cwiseProduct(z);
}

Matrix compute_phi(const InfluenceNetwork& net, const Vector& x) {
  check_length(net, x, "x");
  const std::size_t n = net.size();
  const Matrix M =
      identity(n) - net.susceptibility().asDiagonal() * appraisal_matrix(net.interaction(), x);
  return factor(M, "compute_phi").solve(identity(n));
}

double stubborn_cycle_sum(const InfluenceNetwork& net, std::size_t anchor, const Vector& x,
                          std::size_t budget) {
  check_length(net, x, "x");
  const Vector& a = net.susceptibility();
  double sum = 0.0;
  for (const auto& cycle : enumerate_pscs(net, anchor, budget)) {
    double term = cycle.value;
    // Interior nodes: everything except the anchor at both ends.
    for (std::size_t k = 1; k + 1 < cycle.nodes.size(); ++k) {
      const std::size_t l = cycle.nodes[k];
      term *= a(l) * (1.0 - x(l)) / (1.0 - a(l) * x(l));
    }
    sum += term;
  }
  return sum;
}

double phi_diag_via_pscs(const InfluenceNetwork& net, std::size_t anchor, const Vector& x,
                         std::size_t budget) {
  const double ai = net.susceptibility(anchor);
  if (ai == 0.0) return 1.0;
  const double phi = stubborn_cycle_sum(net, anchor, x, budget);
  const double xi = x(static_cast<Eigen::Index>(anchor));
  return 1.0 / (1.0 - ai * xi - ai * (1.0 - xi) * phi);
}

Vector step_power_evolution_issue(const InfluenceNetwork& net, const Vector& x) {
  return compute_social_power(net, x);
}

SingleTimescaleState single_timescale_start(const Vector& x0) {
  return {Matrix::Identity(x0.size(), x0.size()), x0};
}

SingleTimescaleState step_power_evolution_single(const InfluenceNetwork& net,
                                                 const SingleTimescaleState& state) {
  check_length(net, state.x, "x");
  const std::size_t n = net.size();
  const Vector& a = net.susceptibility();
  SingleTimescaleState next;
  next.V = a.asDiagonal() * (appraisal_matrix(net.interaction(), state.x) * state.V);
  next.V.diagonal() += Vector::Ones(a.size()) - a;
  next.x = next.V.transpose() *
           Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  return next;
}

}  // namespace spp
