#include "spp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spp/errors.hpp"
#include "spp/fj_core.hpp"
#include "spp/random_network.hpp"

namespace spp {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double inf_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Box::Box(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw std::invalid_argument("box bounds differ in length");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (lower(i) > upper(i)) throw std::invalid_argument("box lower bound exceeds upper bound");
  }
}

bool Box::contains(const Vector& x, double slack) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < lower(i) - slack || x(i) > upper(i) + slack) return false;
  }
  return true;
}

Box Box::scaled_upper(double factor) const {
  Vector hi = upper * factor;
  return Box(lower, hi.cwiseMax(lower));
}

// ---------------------------------------------------------------------------

double perception_defect(const InfluenceNetwork& net, const Vector& p) {
  return inf_norm(step_perception_ra(net, p) - p);
}

EquilibriumReport solve_equilibrium(const InfluenceNetwork& net, const EquilibriumOptions& options) {
  const std::size_t n = net.size();
  Rng rng(options.seed);

  std::vector<Vector> starts;
  starts.push_back(Vector::Constant(idx(n), 1.0 / static_cast<double>(n)));
  for (std::size_t k = 0; k < options.multistarts; ++k) starts.push_back(random_simplex_point(n, rng));

  RunOptions run;
  run.tol = options.tol;
  run.max_iter = options.max_iter;
  run.dense_steps = 0;
  run.sparse_stride = options.max_iter + 1;  // keep only the endpoints

  const Stepper step = [&net](const Vector& x) { return step_power_evolution_issue(net, x); };

  EquilibriumReport report;
  report.starts_total = starts.size();
  std::vector<Vector> limits;
  std::vector<std::size_t> iterations;
  for (const auto& x0 : starts) {
    const auto traj = run_to_convergence(step, x0, run);
    if (traj.status == RunStatus::Converged) {
      limits.push_back(traj.final_state());
      iterations.push_back(traj.iterations);
    }
  }
  if (limits.empty()) {
    throw NoConvergence("no multistart of the power dynamics converged within " +
                        std::to_string(options.max_iter) + " iterations");
  }

  report.starts_converged = limits.size();
  report.p_star = limits.front();
  report.iterations = iterations.front();
  for (std::size_t i = 0; i < limits.size(); ++i) {
    if (inf_norm(limits[i] - report.p_star) <= options.agreement_tol) ++report.starts_agreeing;
    for (std::size_t j = i + 1; j < limits.size(); ++j) {
      report.max_pairwise_gap = std::max(report.max_pairwise_gap, inf_norm(limits[i] - limits[j]));
    }
  }

  const Vector& p = report.p_star;
  report.residual = inf_norm(step_power_evolution_issue(net, p) - p);
  report.perception_residual = perception_defect(net, p);
  report.in_simplex = p.minCoeff() >= -1e-12 && std::abs(p.sum() - 1.0) <= 1e-9;
  report.interior = report.in_simplex && p.minCoeff() > 0.0;
  return report;
}

double star_leaf_equilibrium(double a, std::size_t n) {
  const double nn = static_cast<double>(n);
  // Smaller root of a p^2 - p + c in the cancellation-free form 2c / (1 + sqrt(1 - 4ac)).
  const double c = (1.0 - a) / nn;
  return 2.0 * c / (1.0 + std::sqrt(1.0 - 4.0 * a * c));
}

Vector star_equilibrium_closed_form(const InfluenceNetwork& net) {
  const auto topo = classify_topology(net);
  if (!topo.is_star()) throw NotStar("star_equilibrium_closed_form: network is not a star");
  const std::size_t n = net.size();
  const double nn = static_cast<double>(n);
  const std::size_t c = *topo.center;
  const Vector& a = net.susceptibility();

  Vector p(idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (i == c) continue;
    p(idx(i)) = net.fully_stubborn(i) ? 1.0 / nn : star_leaf_equilibrium(a(idx(i)), n);
  }

  if (topo.kind == TopologyKind::StarFullyStubbornCenter) {
    double sum = 0.0;
    for (std::size_t j : net.partially_stubborn_nodes()) {
      const double aj = a(idx(j));
      const double pj = p(idx(j));
      sum += aj * (1.0 - pj) / (1.0 - aj * pj);
    }
    p(idx(c)) = 1.0 / nn + sum / nn;
    return p;
  }

  for (std::size_t j : net.partially_stubborn_nodes()) {
    if (j != c && net.weight(c, j) != 0.0) {
      throw InvalidStructure("partially stubborn center " + std::to_string(c + 1) +
                             " places weight on partially stubborn leaf " + std::to_string(j + 1));
    }
  }
  const double ac = a(idx(c));
  const double vp = static_cast<double>(net.partially_stubborn_nodes().size());
  double leaf_sum = 0.0;
  for (std::size_t j : net.partially_stubborn_nodes()) {
    if (j != c) leaf_sum += p(idx(j));
  }
  const double arg = 1.0 - 4.0 * ac * (1.0 - ac) / nn * (vp - nn * leaf_sum);
  p(idx(c)) = (1.0 - std::sqrt(arg)) / (2.0 * ac);

  const double vp_total = leaf_sum + p(idx(c));
  for (std::size_t i : net.fully_stubborn_nodes()) {
    p(idx(i)) = 1.0 / nn + net.weight(c, i) * (vp / nn - vp_total);
  }
  return p;
}

// ---------------------------------------------------------------------------

FlowBounds flow_bounds(const InfluenceNetwork& net) {
  const std::size_t n = net.size();
  const Vector& a = net.susceptibility();
  FlowBounds fb{Vector::Zero(idx(n)), Vector::Zero(idx(n))};
  for (std::size_t j : net.partially_stubborn_nodes()) {
    const double aj = a(idx(j));
    const double r = aj / (1.0 - aj);
    const double q = (1.0 + 3.0 * aj) / (4.0 * aj);
    for (std::size_t i : net.out_neighbors(j)) {
      fb.b(idx(i)) += net.weight(j, i) * r;
      fb.d(idx(i)) += net.weight(j, i) * q;
    }
  }
  return fb;
}

Box build_invariant_set_H(const InfluenceNetwork& net) {
  const std::size_t n = net.size();
  const double nn = static_cast<double>(n);
  const auto fb = flow_bounds(net);
  Vector lo = Vector::Zero(idx(n));
  Vector hi(idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    hi(idx(i)) = net.fully_stubborn(i) ? 1.0 / nn + fb.b(idx(i)) / 4.0 : 0.5;
  }
  return Box(lo, hi);
}

Box build_invariant_set_M(const InfluenceNetwork& net) {
  const std::size_t n = net.size();
  const double nn = static_cast<double>(n);
  const auto fb = flow_bounds(net);
  const Vector& a = net.susceptibility();
  Vector lo(idx(n));
  Vector hi(idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a(idx(i));
    if (net.fully_stubborn(i)) {
      lo(idx(i)) = 1.0 / nn - fb.d(idx(i)) / 4.0;
      hi(idx(i)) = 1.0 / nn + fb.b(idx(i)) / 4.0;
    } else {
      lo(idx(i)) = -(1.0 - ai) / (4.0 * ai);
      hi(idx(i)) = (1.0 + ai) / (4.0 * ai);
    }
  }
  return Box(lo, hi);
}

Box star_invariant_box(const InfluenceNetwork& net) {
  const auto topo = classify_topology(net);
  if (topo.kind != TopologyKind::StarFullyStubbornCenter) {
    throw WrongTopology("star_invariant_box needs a star with fully stubborn center");
  }
  const std::size_t n = net.size();
  double sum = 0.0;
  for (std::size_t j : net.partially_stubborn_nodes()) {
    const double aj = net.susceptibility(j);
    sum += aj / (1.0 - aj);
  }
  const double alpha = sum / 4.0 - static_cast<double>(n - 1) / static_cast<double>(n);
  Vector hi = Vector::Ones(idx(n));
  hi(idx(*topo.center)) += alpha;
  return Box(Vector::Zero(idx(n)), hi.cwiseMax(0.0));
}

PartialCenterStarBoxes partial_center_star_boxes(const InfluenceNetwork& net) {
  const auto topo = classify_topology(net);
  if (topo.kind != TopologyKind::StarPartiallyStubbornCenter) {
    throw WrongTopology("needs a star with partially stubborn center");
  }
  const std::size_t n = net.size();
  const double nn = static_cast<double>(n);
  const std::size_t c = *topo.center;
  const double ac = net.susceptibility(c);
  const double spread = std::abs(2.0 * ac - 1.0) / (4.0 * ac * (1.0 - ac));

  Vector lo = Vector::Zero(idx(n));
  Vector stated = Vector::Zero(idx(n));
  Vector hi(idx(n));
  Vector start_hi = Vector::Ones(idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (i == c) {
      hi(idx(i)) = 1.0 / (2.0 * ac);
      start_hi(idx(i)) = 1.0 / (2.0 * ac);
    } else if (net.partially_stubborn(i)) {
      hi(idx(i)) = 1.0;
    } else {
      lo(idx(i)) = 1.0 / nn - spread;
      stated(idx(i)) = spread - 1.0 / nn;
      hi(idx(i)) = 1.0 / nn + ac / (4.0 * (1.0 - ac));
    }
  }
  return {Box(lo, hi), stated, Box(Vector::Zero(idx(n)), start_hi)};
}

// ---------------------------------------------------------------------------

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::Eq15:
      return "Eq15";
    case ConditionId::Eq16:
      return "Eq16";
    case ConditionId::Eq17:
      return "Eq17";
    case ConditionId::Eq19:
      return "Eq19";
    case ConditionId::Democracy:
      return "Democracy";
    case ConditionId::Eq15Legacy:
      return "Eq15-legacy";
    case ConditionId::Dominance:
      return "Dominance";
  }
  return "?";
}

std::optional<ConditionId> parse_condition_id(const std::string& name) {
  for (auto id : {ConditionId::Eq15, ConditionId::Eq16, ConditionId::Eq17, ConditionId::Eq19,
                  ConditionId::Democracy, ConditionId::Eq15Legacy, ConditionId::Dominance}) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

namespace {

void finish(ConditionReport& report) {
  report.margin = std::numeric_limits<double>::infinity();
  for (const auto& m : report.per_node) report.margin = std::min(report.margin, m.margin);
  report.holds = report.strict ? report.margin > 0.0 : report.margin >= 0.0;
}

}  // namespace

ConditionReport check_condition(const InfluenceNetwork& net, ConditionId which) {
  const std::size_t n = net.size();
  const double nn = static_cast<double>(n);
  const Vector& a = net.susceptibility();
  ConditionReport report;
  report.id = which;

  switch (which) {
    case ConditionId::Eq15: {
      const auto fb = flow_bounds(net);
      for (std::size_t i : net.partially_stubborn_nodes()) {
        const double ai = a(idx(i));
        const double rhs = ai / (1.0 - ai) + 2.0 * (nn - 2.0) / nn;
        report.per_node.push_back({i, fb.b(idx(i)), rhs, rhs - fb.b(idx(i))});
      }
      break;
    }
    case ConditionId::Eq16: {
      report.strict = true;
      const auto fb = flow_bounds(net);
      for (std::size_t i : net.partially_stubborn_nodes()) {
        const double rhs = 1.0 / a(idx(i)) + 4.0 / nn;
        report.per_node.push_back({i, fb.d(idx(i)), rhs, rhs - fb.d(idx(i))});
      }
      break;
    }
    case ConditionId::Eq17: {
      const auto topo = classify_topology(net);
      if (topo.kind != TopologyKind::StarPartiallyStubbornCenter) {
        throw WrongTopology("Eq17 needs a star with partially stubborn center");
      }
      const std::size_t c = *topo.center;
      const double ac = a(idx(c));
      double lhs = 0.0;
      bool structure_ok = true;
      for (std::size_t j : net.partially_stubborn_nodes()) {
        if (j == c) continue;
        lhs += a(idx(j)) / (1.0 - a(idx(j)));
        if (net.weight(c, j) != 0.0) structure_ok = false;
      }
      const double rhs = 1.0 / (ac * (1.0 - ac)) - 4.0 / nn;
      report.per_node.push_back({c, lhs, rhs, rhs - lhs});
      report.notes.push_back(std::string("center ") + std::to_string(c + 1) +
                             (structure_ok ? " places no weight on partially stubborn leaves"
                                           : " places weight on a partially stubborn leaf "
                                             "(C_1j = 0 precondition fails)"));
      const auto boxes = partial_center_star_boxes(net);
      const double spread = std::abs(2.0 * ac - 1.0) / (4.0 * ac * (1.0 - ac));
      report.notes.push_back("fully stubborn lower bound used for invariance: 1/n - |2a_c-1|/(4a_c(1-a_c)) = " +
                             fmt(1.0 / nn - spread));
      report.notes.push_back("fully stubborn lower bound as stated: |2a_c-1|/(4a_c(1-a_c)) - 1/n = " +
                             fmt(spread - 1.0 / nn));
      (void)boxes;
      break;
    }
    case ConditionId::Eq19: {
      if (!net.homogeneous()) throw WrongTopology("Eq19 needs homogeneous susceptibility");
      const double rhs = (5.0 * nn - 7.0) / (8.0 * (nn - 1.0));
      report.per_node.push_back({0, a(0), rhs, rhs - a(0)});
      break;
    }
    case ConditionId::Democracy: {
      // v = A (I - A)^{-1} 1, normalized to sum one.
      Vector v = a.cwiseQuotient(Vector::Ones(a.size()) - a);
      v /= v.sum();
      const Vector cv = net.interaction().transpose() * v;
      double gap = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = std::abs(cv(idx(i)) - v(idx(i)));
        gap = std::max(gap, diff);
        report.per_node.push_back({i, cv(idx(i)), v(idx(i)), kDemocracyTol - diff});
      }
      report.notes.push_back("||C^T v - v||_inf = " + fmt(gap));
      break;
    }
    case ConditionId::Eq15Legacy: {
      report.strict = true;
      const double zeta = (a.sum() + 1.0 - a.minCoeff()) / nn;
      const double rhs = 1.0 / (1.0 + 2.0 * zeta);
      Eigen::Index imax = 0;
      a.maxCoeff(&imax);
      report.per_node.push_back({static_cast<std::size_t>(imax), a(imax), rhs, rhs - a(imax)});
      report.notes.push_back("zeta = " + fmt(zeta));
      break;
    }
    case ConditionId::Dominance:
      throw std::invalid_argument("Dominance is evaluated by check_dominance_necessary");
  }
  finish(report);
  return report;
}

DominanceReport check_dominance_necessary(const InfluenceNetwork& net, const Vector& p_star,
                                          std::size_t i, double sigma) {
  if (!(sigma >= 0.5 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in [1/2, 1)");
  const double nn = static_cast<double>(net.size());
  const Vector& a = net.susceptibility();
  double lhs = 0.0;
  for (std::size_t j : net.in_neighbors(i)) {
    const double aj = a(idx(j));
    lhs += net.weight(j, i) * aj / (1.0 - aj);
  }
  const double ai = a(idx(i));
  const double rhs = ai / (1.0 - ai) + (nn * sigma - 1.0) / (nn * sigma * (1.0 - sigma));

  DominanceReport out;
  out.condition.id = ConditionId::Dominance;
  out.condition.strict = true;
  out.condition.per_node.push_back({i, lhs, rhs, lhs - rhs});
  finish(out.condition);
  out.dominant = p_star(idx(i)) > sigma;
  out.consistent = !out.dominant || out.condition.holds;
  out.condition.notes.push_back(
      out.condition.holds ? "necessary condition satisfied; dominance at this level is possible"
                          : "necessary condition fails; node cannot hold more than sigma");
  return out;
}

// ---------------------------------------------------------------------------

InvarianceReport one_step_invariance_test(const InfluenceNetwork& net, const Box& box,
                                          std::size_t samples, std::uint64_t seed, double slack) {
  if (box.dim() != net.size()) throw std::invalid_argument("box dimension mismatch");
  Rng rng(seed);
  InvarianceReport report;
  report.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector p = random_in_box(box.lower, box.upper, rng);
    const Vector q = step_perception_ra(net, p);
    double worst = 0.0;
    std::size_t coord = 0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double out = std::max(box.lower(i) - q(i), q(i) - box.upper(i));
      if (out > worst) {
        worst = out;
        coord = static_cast<std::size_t>(i);
      }
    }
    if (worst > slack) {
      ++report.exits;
      if (report.first_exits.size() < InvarianceReport::kMaxRecordedExits) {
        report.first_exits.push_back({p, coord, worst});
      }
    }
  }
  return report;
}

Matrix perception_jacobian(const InfluenceNetwork& net, const Vector& p) {
  const Vector& a = net.susceptibility();
  const Vector stub = Vector::Ones(a.size()) - a;
  const Vector two_p = 2.0 * p;
  Matrix inner = net.interaction().transpose() * (Vector::Ones(p.size()) - two_p).asDiagonal();
  inner.diagonal() += two_p;
  return stub.asDiagonal() * inner * a.cwiseQuotient(stub).asDiagonal();
}

Matrix transformed_jacobian(const InfluenceNetwork& net, const Vector& p) {
  const Vector& a = net.susceptibility();
  const Vector two_p = 2.0 * p;
  Matrix inner = net.interaction().transpose() * (Vector::Ones(p.size()) - two_p).asDiagonal();
  inner.diagonal() += two_p;
  return inner * a.asDiagonal();
}

ContractionReport contraction_diagnostic(const InfluenceNetwork& net, const Vector& p,
                                         double fd_step) {
  ContractionReport report;
  report.jacobian = perception_jacobian(net, p);
  report.transformed = transformed_jacobian(net, p);
  report.norm1 = report.transformed.cwiseAbs().colwise().sum().maxCoeff();

  const Vector& a = net.susceptibility();
  for (std::size_t i : net.partially_stubborn_nodes()) {
    const double pi = p(idx(i));
    report.norm1_closed_form =
        std::max(report.norm1_closed_form, a(idx(i)) * (2.0 * std::abs(pi) + std::abs(1.0 - 2.0 * pi)));
  }

  const auto n = p.size();
  Matrix fd(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector plus = p;
    Vector minus = p;
    plus(j) += fd_step;
    minus(j) -= fd_step;
    fd.col(j) = (step_perception_ra(net, plus) - step_perception_ra(net, minus)) / (2.0 * fd_step);
  }
  const double scale = std::max(report.jacobian.cwiseAbs().maxCoeff(),
                                std::numeric_limits<double>::min());
  report.fd_relative_error = (fd - report.jacobian).cwiseAbs().maxCoeff() / scale;
  return report;
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::Increasing:
      return "increasing";
    case Direction::Decreasing:
      return "decreasing";
    case Direction::Constant:
      return "constant";
    case Direction::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

MonotonicityReport monotonicity_test_star(const InfluenceNetwork& net, const Vector& p0,
                                          const RunOptions& options, double floor) {
  const auto topo = classify_topology(net);
  if (topo.kind != TopologyKind::StarFullyStubbornCenter) {
    throw WrongTopology("monotonicity_test_star needs a star with fully stubborn center");
  }
  const std::size_t c = *topo.center;

  MonotonicityReport report;
  report.p_star = star_equilibrium_closed_form(net);
  RunOptions dense = options;
  dense.dense_steps = options.max_iter;
  const auto traj =
      run_to_convergence([&net](const Vector& p) { return step_perception_ra(net, p); }, p0, dense);
  report.status = traj.status;
  const auto& xs = traj.states;

  // Leaves: strictly towards p*_j from the side they start on.
  bool all_below = true;
  bool all_above = true;
  for (std::size_t j : net.partially_stubborn_nodes()) {
    const auto J = idx(j);
    const double target = report.p_star(J);
    const double start = p0(J);
    all_below = all_below && start <= target;
    all_above = all_above && start >= target;
    const double sign = start < target ? 1.0 : (start > target ? -1.0 : 0.0);
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
      if (std::abs(xs[s](J) - target) <= floor) break;
      const double delta = xs[s + 1](J) - xs[s](J);
      const bool ok = sign == 0.0 ? std::abs(delta) <= floor : sign * delta > 0.0;
      if (!ok) {
        if (!report.first_violation_step || s + 1 < *report.first_violation_step) {
          report.first_violation_step = s + 1;
          report.violating_node = j;
        }
        report.leaves_monotone = false;
        break;
      }
    }
  }

  if (all_below && all_above) {
    report.center_direction = Direction::Constant;
  } else if (all_below) {
    report.center_direction = Direction::Increasing;
  } else if (all_above) {
    report.center_direction = Direction::Decreasing;
  }

  if (report.center_direction == Direction::Increasing ||
      report.center_direction == Direction::Decreasing) {
    const double sign = report.center_direction == Direction::Increasing ? 1.0 : -1.0;
    const auto C = idx(c);
    const double target = report.p_star(C);
    // Latest step that breaks the pattern while the center is still visibly
    // away from its equilibrium.
    std::optional<std::size_t> last_bad;
    std::size_t judged_until = 0;
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
      const double gap = target - xs[s](C);
      if (std::abs(gap) <= floor) break;
      judged_until = s + 1;
      const double next_gap = target - xs[s + 1](C);
      const bool moves = sign * (xs[s + 1](C) - xs[s](C)) > 0.0;
      const bool side = sign * gap > 0.0;
      const bool contracts = std::abs(next_gap) < std::abs(gap);
      if (!(moves && side && contracts)) last_bad = s;
    }
    const std::size_t from = last_bad ? *last_bad + 1 : 0;
    if (from < judged_until || (judged_until == 0 && !last_bad)) report.center_monotone_from = from;
  } else if (report.center_direction == Direction::Constant) {
    report.center_monotone_from = 0;
  }
  return report;
}

}  // namespace spp
