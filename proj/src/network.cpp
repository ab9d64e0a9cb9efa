#include "spp/network.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "spp/errors.hpp"

namespace spp {

bool ValidationReport::violates(const std::string& invariant) const {
  for (const auto& issue : issues) {
    if (issue.invariant == invariant) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < issues.size(); ++k) {
    if (k) os << "; ";
    os << issues[k].invariant << ": " << issues[k].message;
  }
  return os.str();
}

ValidationReport validate_network(const Matrix& C, const Vector& a, double stochastic_tol) {
  ValidationReport report;
  auto add = [&](std::string invariant, std::optional<std::size_t> index, std::string message) {
    report.issues.push_back({std::move(invariant), index, std::move(message)});
  };

  if (C.rows() != C.cols()) {
    add("square", std::nullopt,
        "C is " + std::to_string(C.rows()) + "x" + std::to_string(C.cols()));
    return report;
  }
  const auto n = static_cast<std::size_t>(C.rows());
  if (static_cast<std::size_t>(a.size()) != n) {
    add("dimension", std::nullopt,
        "a has length " + std::to_string(a.size()) + " but C is " + std::to_string(n) + "x" +
            std::to_string(n));
    return report;
  }
  if (n < 2) add("size", std::nullopt, "need at least 2 individuals");

  for (std::size_t i = 0; i < n; ++i) {
    const std::string node = std::to_string(i + 1);
    double row_sum = 0.0;
    bool finite_row = true;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = C(i, j);
      if (!std::isfinite(c)) {
        finite_row = false;
        continue;
      }
      if (c < 0.0) {
        add("nonnegative", i,
            "C(" + node + "," + std::to_string(j + 1) + ") = " + std::to_string(c) + " < 0");
      }
      row_sum += c;
    }
    if (!finite_row) add("finite", i, "row " + node + " of C has non-finite entries");
    if (C(i, i) != 0.0) add("zero_diagonal", i, "C(" + node + "," + node + ") is nonzero");
    if (finite_row && std::abs(row_sum - 1.0) > stochastic_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << node << " of C sums to " << row_sum;
      add("row_stochastic", i, os.str());
    }
  }

  bool any_positive = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a(i);
    if (!(ai >= 0.0 && ai < 1.0)) {
      add("susceptibility_range", i,
          "a_" + std::to_string(i + 1) + " = " + std::to_string(ai) + " outside [0,1)");
    }
    if (ai > 0.0) any_positive = true;
  }
  if (!any_positive) add("assumption1_nonzero", std::nullopt, "a must not be the zero vector");
  return report;
}

InfluenceNetwork::InfluenceNetwork(Matrix C, Vector a) : C_(std::move(C)), a_(std::move(a)) {
  const std::size_t n = size();
  in_.resize(n);
  out_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    (a_(i) == 0.0 ? fully_ : partially_).push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (C_(i, j) > 0.0) {
        out_[i].push_back(j);
        in_[j].push_back(i);
      }
    }
  }
}

InfluenceNetwork InfluenceNetwork::create(Matrix C, Vector a, const NetworkOptions& options) {
  if (options.renormalize_rows && C.rows() == C.cols()) {
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
      const double s = C.row(i).sum();
      if (s > 0.0) C.row(i) /= s;
    }
  }
  auto report = validate_network(C, a, options.stochastic_tol);
  if (!report.valid()) throw ValidationError("invalid influence network: " + report.summary());
  return InfluenceNetwork(std::move(C), std::move(a));
}

InfluenceNetwork InfluenceNetwork::unchecked(Matrix C, Vector a) {
  if (C.rows() != C.cols() || C.rows() != a.size()) {
    throw ValidationError("unchecked network: dimension mismatch");
  }
  return InfluenceNetwork(std::move(C), std::move(a));
}

bool InfluenceNetwork::homogeneous() const {
  for (Eigen::Index i = 1; i < a_.size(); ++i) {
    if (a_(i) != a_(0)) return false;
  }
  return true;
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::StarFullyStubbornCenter:
      return "StarFullyStubbornCenter";
    case TopologyKind::StarPartiallyStubbornCenter:
      return "StarPartiallyStubbornCenter";
    case TopologyKind::General:
      return "General";
  }
  return "General";
}

TopologyClass classify_topology(const InfluenceNetwork& net) {
  const std::size_t n = net.size();
  std::vector<std::size_t> candidates;
  for (std::size_t c = 0; c < n; ++c) {
    bool star = true;
    for (std::size_t i = 0; i < n && star; ++i) {
      for (std::size_t j : net.out_neighbors(i)) {
        if (i != c && j != c) {
          star = false;
          break;
        }
      }
    }
    if (star) candidates.push_back(c);
  }
  if (candidates.empty()) return {};

  std::size_t center = candidates.front();
  for (std::size_t c : candidates) {
    if (net.fully_stubborn(c)) {
      center = c;
      break;
    }
  }
  return {net.fully_stubborn(center) ? TopologyKind::StarFullyStubbornCenter
                                     : TopologyKind::StarPartiallyStubbornCenter,
          center};
}

double path_value(const InfluenceNetwork& net, const std::vector<std::size_t>& nodes) {
  double value = 1.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) value *= net.weight(nodes[k], nodes[k + 1]);
  return value;
}

namespace {

// Depth-first search over simple cycles through the anchor. Neighbors are
// visited in ascending order with the anchor taking its natural position,
// which yields cycles in lexicographic order of their node sequences.
class CycleSearch {
 public:
  CycleSearch(const InfluenceNetwork& net, std::size_t anchor, std::size_t budget)
      : net_(net), anchor_(anchor), budget_(budget), on_path_(net.size(), false) {}

  std::vector<StubbornPath> run() {
    path_.push_back(anchor_);
    on_path_[anchor_] = true;
    extend(anchor_, 1.0);
    return std::move(cycles_);
  }

 private:
  void extend(std::size_t u, double value) {
    for (std::size_t v : net_.out_neighbors(u)) {
      const double w = value * net_.weight(u, v);
      if (v == anchor_) {
        if (cycles_.size() >= budget_) {
          throw CycleBudgetExceeded("more than " + std::to_string(budget_) +
                                    " stubborn cycles through node " + std::to_string(anchor_ + 1));
        }
        auto nodes = path_;
        nodes.push_back(anchor_);
        cycles_.push_back({std::move(nodes), w, true});
      } else if (!on_path_[v] && net_.partially_stubborn(v)) {
        on_path_[v] = true;
        path_.push_back(v);
        extend(v, w);
        path_.pop_back();
        on_path_[v] = false;
      }
    }
  }

  const InfluenceNetwork& net_;
  std::size_t anchor_;
  std::size_t budget_;
  std::vector<bool> on_path_;
  std::vector<std::size_t> path_;
  std::vector<StubbornPath> cycles_;
};

}  // namespace

std::vector<StubbornPath> enumerate_pscs(const InfluenceNetwork& net, std::size_t anchor,
                                         std::size_t budget) {
  if (anchor >= net.size()) throw std::out_of_range("anchor out of range");
  return CycleSearch(net, anchor, budget).run();
}

bool has_psp(const InfluenceNetwork& net, std::size_t from, std::size_t to) {
  const std::size_t n = net.size();
  if (from >= n || to >= n) throw std::out_of_range("node out of range");

  // Breadth-first search where only partially stubborn nodes (other than
  // the endpoints) may be expanded. A shortest such walk is a simple path.
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t v : net.out_neighbors(from)) {
    if (v == to) return true;
    if (v != from && net.partially_stubborn(v) && !seen[v]) {
      seen[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : net.out_neighbors(u)) {
      if (v == to) return true;
      if (v != from && net.partially_stubborn(v) && !seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return false;
}

}  // namespace spp
