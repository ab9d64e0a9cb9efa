#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Row-sum tolerance for the relative interaction matrix.
inline constexpr double kStochasticTol = 1e-12;
/// Default cap on the number of enumerated stubborn cycles.
inline constexpr std::size_t kDefaultCycleBudget = 1'000'000;

struct NetworkOptions {
  double stochastic_tol = kStochasticTol;
  /// Rescale each row of C to sum to one before validating. Off by default:
  /// silently fixing rows hides data errors.
  bool renormalize_rows = false;
};

struct ValidationIssue {
  std::string invariant;  // short name, e.g. "row_stochastic"
  std::optional<std::size_t> index;  // 0-based offending row/node
  std::string message;  // human readable, 1-based indices
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool valid() const { return issues.empty(); }
  bool violates(const std::string& invariant) const;
  std::string summary() const;
};

/// Checks every structural invariant of (C, a) and reports all failures.
/// Never throws.
ValidationReport validate_network(const Matrix& C, const Vector& a,
                                  double stochastic_tol = kStochasticTol);

/// Relative interaction matrix C together with susceptibilities a.
///
/// Instances produced by create() satisfy: C square, n >= 2, nonnegative,
/// zero diagonal, rows summing to one, 0 <= a_i < 1 and a != 0. The
/// unchecked() factory exists for diagnostics that deliberately step
/// outside those assumptions (e.g. the a = 0 anchoring limit).
class InfluenceNetwork {
 public:
  static InfluenceNetwork create(Matrix C, Vector a, const NetworkOptions& options = {});
  static InfluenceNetwork unchecked(Matrix C, Vector a);

  std::size_t size() const { return static_cast<std::size_t>(a_.size()); }
  const Matrix& interaction() const { return C_; }
  const Vector& susceptibility() const { return a_; }
  double weight(std::size_t i, std::size_t j) const { return C_(i, j); }
  double susceptibility(std::size_t i) const { return a_(i); }

  bool fully_stubborn(std::size_t i) const { return a_(i) == 0.0; }
  bool partially_stubborn(std::size_t i) const { return a_(i) > 0.0; }
  const std::vector<std::size_t>& fully_stubborn_nodes() const { return fully_; }
  const std::vector<std::size_t>& partially_stubborn_nodes() const { return partially_; }

  /// Nodes j with C_ji > 0, ascending.
  const std::vector<std::size_t>& in_neighbors(std::size_t i) const { return in_[i]; }
  /// Nodes j with C_ij > 0, ascending.
  const std::vector<std::size_t>& out_neighbors(std::size_t i) const { return out_[i]; }

  /// True when every a_i equals a_0.
  bool homogeneous() const;

 private:
  InfluenceNetwork(Matrix C, Vector a);

  Matrix C_;
  Vector a_;
  std::vector<std::size_t> fully_;
  std::vector<std::size_t> partially_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> out_;
};

enum class TopologyKind { StarFullyStubbornCenter, StarPartiallyStubbornCenter, General };

struct TopologyClass {
  TopologyKind kind = TopologyKind::General;
  std::optional<std::size_t> center;  // 0-based

  bool is_star() const { return kind != TopologyKind::General; }
};

/// Star means every edge of G(C) starts or ends at the center. When two
/// centers are possible (n = 2) a fully stubborn candidate is preferred,
/// then the lowest index.
TopologyClass classify_topology(const InfluenceNetwork& net);

std::string to_string(TopologyKind kind);

/// A directed path (or cycle, when is_cycle) whose interior nodes are all
/// partially stubborn. For cycles nodes.front() == nodes.back() == anchor.
struct StubbornPath {
  std::vector<std::size_t> nodes;
  double value = 0.0;  // product of C along consecutive nodes
  bool is_cycle = false;
};

/// Every simple cycle through `anchor` whose other nodes are partially
/// stubborn, in lexicographic order of the node sequence.
/// Throws CycleBudgetExceeded when more than `budget` cycles exist.
std::vector<StubbornPath> enumerate_pscs(const InfluenceNetwork& net, std::size_t anchor,
                                         std::size_t budget = kDefaultCycleBudget);

/// Whether a directed path from -> to exists with all interior nodes
/// partially stubborn. from == to asks for a stubborn cycle through from.
bool has_psp(const InfluenceNetwork& net, std::size_t from, std::size_t to);

/// Product of C along consecutive entries of `nodes`.
double path_value(const InfluenceNetwork& net, const std::vector<std::size_t>& nodes);

}  // namespace spp
