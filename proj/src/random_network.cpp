#include "spp/random_network.hpp"

#include <stdexcept>

namespace spp {

namespace {

double positive_uniform(Rng& rng) {
  // (0, 1]
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return 1.0 - u(rng);
}

}  // namespace

InfluenceNetwork random_network(const RandomNetworkSpec& spec, Rng& rng) {
  const std::size_t n = spec.n;
  if (n < 2) throw std::invalid_argument("random_network needs n >= 2");
  const auto N = static_cast<Eigen::Index>(n);
  std::bernoulli_distribution edge(spec.edge_probability);
  std::bernoulli_distribution fully(spec.fully_stubborn_probability);
  std::uniform_real_distribution<double> susceptibility(0.0, spec.max_susceptibility);
  std::uniform_int_distribution<std::size_t> pick(0, n - 2);

  Matrix C = Matrix::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i != j && edge(rng)) C(i, j) = positive_uniform(rng);
    }
    if (C.row(i).sum() == 0.0) {
      auto j = static_cast<Eigen::Index>(pick(rng));
      if (j >= i) ++j;
      C(i, j) = positive_uniform(rng);
    }
    C.row(i) /= C.row(i).sum();
  }

  Vector a(N);
  bool any = false;
  for (Eigen::Index i = 0; i < N; ++i) {
    a(i) = fully(rng) ? 0.0 : susceptibility(rng);
    any = any || a(i) > 0.0;
  }
  if (!any) {
    std::uniform_int_distribution<Eigen::Index> node(0, N - 1);
    a(node(rng)) = spec.max_susceptibility * positive_uniform(rng);
  }
  return InfluenceNetwork::create(std::move(C), std::move(a));
}

InfluenceNetwork random_star_network(std::size_t n, bool center_fully_stubborn, Rng& rng,
                                     double max_susceptibility, double fully_stubborn_probability,
                                     std::size_t center) {
  if (n < 2 || center >= n) throw std::invalid_argument("bad star size or center");
  const auto N = static_cast<Eigen::Index>(n);
  const auto c = static_cast<Eigen::Index>(center);
  std::bernoulli_distribution fully(fully_stubborn_probability);

  Matrix C = Matrix::Zero(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    if (j == c) continue;
    C(j, c) = 1.0;
    C(c, j) = positive_uniform(rng);
  }
  C.row(c) /= C.row(c).sum();

  Vector a(N);
  bool any = false;
  for (Eigen::Index j = 0; j < N; ++j) {
    if (j == c) {
      a(j) = center_fully_stubborn ? 0.0 : max_susceptibility * positive_uniform(rng);
    } else {
      a(j) = fully(rng) ? 0.0 : max_susceptibility * positive_uniform(rng);
    }
    any = any || a(j) > 0.0;
  }
  if (!any) {
    // every leaf came out fully stubborn; make the first leaf partially stubborn
    const Eigen::Index leaf = (c == 0) ? 1 : 0;
    a(leaf) = max_susceptibility * positive_uniform(rng);
  }
  return InfluenceNetwork::create(std::move(C), std::move(a));
}

Matrix random_doubly_stochastic(std::size_t n, Rng& rng, std::size_t terms) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  const auto N = static_cast<Eigen::Index>(n);
  std::uniform_int_distribution<std::size_t> shift(1, n - 1);
  Matrix C = Matrix::Zero(N, N);
  double total = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    const auto s = static_cast<Eigen::Index>(shift(rng));
    const double w = positive_uniform(rng);
    total += w;
    for (Eigen::Index i = 0; i < N; ++i) C(i, (i + s) % N) += w;
  }
  return C / total;
}

Vector random_simplex_point(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  Vector x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = e(rng);
  return x / x.sum();
}

Vector random_in_box(const Vector& lower, const Vector& upper, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x(lower.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = lower(i) + (upper(i) - lower(i)) * u(rng);
  return x;
}

}  // namespace spp
