#include "spp/perception.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spp/errors.hpp"
#include "spp/fj_core.hpp"

namespace spp {

LocalView make_local_view(const InfluenceNetwork& net, std::size_t i, const Vector* gamma) {
  LocalView view;
  view.self = i;
  view.group_size = net.size();
  view.susceptibility = net.susceptibility(i);
  view.self_appraisal = gamma ? (*gamma)(static_cast<Eigen::Index>(i)) : 0.0;
  for (std::size_t j : net.in_neighbors(i)) {
    view.in.push_back({j, net.susceptibility(j),
                       gamma ? (*gamma)(static_cast<Eigen::Index>(j)) : 0.0, net.weight(j, i)});
  }
  return view;
}

namespace {

void check_neighbors(const LocalView& view, std::span<const double> neighbor_p) {
  if (neighbor_p.size() != view.in.size()) {
    throw std::invalid_argument("neighbor values do not match the local view");
  }
}

}  // namespace

double local_update_no_ra(const LocalView& view, double own_p, std::span<const double> neighbor_p) {
  check_neighbors(view, neighbor_p);
  const double ai = view.susceptibility;
  const double n = static_cast<double>(view.group_size);
  double flow = 0.0;
  for (std::size_t k = 0; k < view.in.size(); ++k) {
    const auto& nb = view.in[k];
    flow += nb.susceptibility / (1.0 - nb.susceptibility) * nb.weight * (1.0 - nb.self_appraisal) *
            neighbor_p[k];
  }
  return (1.0 - ai) / n + ai * view.self_appraisal * own_p + (1.0 - ai) * flow;
}

double local_update_ra(const LocalView& view, double own_p, std::span<const double> neighbor_p) {
  check_neighbors(view, neighbor_p);
  const double ai = view.susceptibility;
  const double n = static_cast<double>(view.group_size);
  double flow = 0.0;
  for (std::size_t k = 0; k < view.in.size(); ++k) {
    const auto& nb = view.in[k];
    const double pj = neighbor_p[k];
    flow += nb.susceptibility / (1.0 - nb.susceptibility) * nb.weight * pj * (1.0 - pj);
  }
  return (1.0 - ai) / n + ai * own_p * own_p + (1.0 - ai) * flow;
}

namespace {

template <typename Update>
Vector step_locally(const InfluenceNetwork& net, const Vector* gamma, const Vector& p,
                    Update update) {
  if (static_cast<std::size_t>(p.size()) != net.size()) {
    throw std::invalid_argument("perception vector has the wrong length");
  }
  Vector next(p.size());
  std::vector<double> inbox;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const LocalView view = make_local_view(net, i, gamma);
    inbox.clear();
    for (const auto& nb : view.in) inbox.push_back(p(static_cast<Eigen::Index>(nb.id)));
    next(static_cast<Eigen::Index>(i)) = update(view, p(static_cast<Eigen::Index>(i)), inbox);
  }
  return next;
}

Vector compact_form(const InfluenceNetwork& net, const Vector& g, const Vector& p) {
  const Vector& a = net.susceptibility();
  const Vector stub = Vector::Ones(a.size()) - a;
  const Matrix W = appraisal_matrix(net.interaction(), g);
  const Vector scaled = a.cwiseProduct(p).cwiseQuotient(stub);  // A (I-A)^{-1} p
  return stub.cwiseProduct(W.transpose() * scaled) + stub / static_cast<double>(net.size());
}

}  // namespace

Vector step_perception_no_ra(const InfluenceNetwork& net, const Vector& gamma, const Vector& p) {
  if (static_cast<std::size_t>(gamma.size()) != net.size()) {
    throw std::invalid_argument("gamma has the wrong length");
  }
  return step_locally(net, &gamma, p, local_update_no_ra);
}

Vector step_perception_no_ra_matrix(const InfluenceNetwork& net, const Vector& gamma,
                                    const Vector& p) {
  return compact_form(net, gamma, p);
}

Vector step_perception_ra(const InfluenceNetwork& net, const Vector& p) {
  return step_locally(net, nullptr, p, local_update_ra);
}

Vector step_perception_ra_matrix(const InfluenceNetwork& net, const Vector& p) {
  return compact_form(net, p, p);
}

Vector step_pagerank_ra(const InfluenceNetwork& net, const Vector& p) {
  if (!net.homogeneous()) {
    throw InvalidStructure("reflected-appraisal PageRank needs homogeneous susceptibility");
  }
  const double a = net.susceptibility(0);
  const double n = static_cast<double>(net.size());
  const Matrix W = appraisal_matrix(net.interaction(), p);
  return a * (W.transpose() * p) + Vector::Constant(p.size(), (1.0 - a) / n);
}

Vector step_degroot_perception(const Matrix& W, const Vector& p) { return W.transpose() * p; }

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged:
      return "Converged";
    case RunStatus::Diverged:
      return "Diverged";
    case RunStatus::MaxIter:
      return "MaxIter";
  }
  return "MaxIter";
}

std::string to_string(Timescale scale) { return scale == Timescale::Issue ? "issue" : "step"; }

Trajectory run_to_convergence(const Stepper& step, Vector p0, const RunOptions& options,
                              Timescale timescale) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  const std::size_t stride = options.sparse_stride == 0 ? 1 : options.sparse_stride;

  Trajectory traj;
  traj.timescale = timescale;
  traj.steps.push_back(0);
  traj.states.push_back(p0);

  Vector current = std::move(p0);
  for (std::size_t k = 1; k <= options.max_iter; ++k) {
    Vector next = step(current);
    traj.iterations = k;

    const bool finite = next.allFinite();
    traj.last_increment = finite ? (next - current).lpNorm<Eigen::Infinity>()
                                 : std::numeric_limits<double>::infinity();
    bool stop = false;
    if (!finite || next.lpNorm<Eigen::Infinity>() > options.divergence_bound) {
      traj.status = RunStatus::Diverged;
      stop = true;
    } else if (traj.last_increment < options.tol) {
      traj.status = RunStatus::Converged;
      stop = true;
    }

    if (stop || k <= options.dense_steps || (k - options.dense_steps) % stride == 0 ||
        k == options.max_iter) {
      traj.steps.push_back(k);
      traj.states.push_back(next);
    }
    current = std::move(next);
    if (stop) return traj;
  }
  traj.status = RunStatus::MaxIter;
  return traj;
}

}  // namespace spp
