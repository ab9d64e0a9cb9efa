#pragma once

#include <cmath>
#include <initializer_list>

#include "spp/network.hpp"
#include "spp/perception.hpp"
#include "spp/random_network.hpp"

namespace spp::test {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline double inf(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

// Reference networks.
inline Matrix example1_C() { return mat({{0, 1, 0}, {1, 0, 0}, {1, 0, 0}}); }
inline Vector example1_a() { return vec({0.7, 0.9, 0.9}); }
inline Vector example1_gamma() { return vec({0.2, 0.5, 0.0}); }
inline InfluenceNetwork example1() { return InfluenceNetwork::create(example1_C(), example1_a()); }

inline InfluenceNetwork example2() {
  return InfluenceNetwork::create(mat({{0, 0.6, 0.4}, {0, 0, 1}, {0.5, 0.5, 0}}), vec({0, 0.4, 0.6}));
}

inline InfluenceNetwork star_example() {
  return InfluenceNetwork::create(mat({{0, 0.4, 0.6}, {1, 0, 0}, {1, 0, 0}}), vec({0, 0.4, 0.8}));
}

inline Matrix example3_C1() {
  return mat({{0, 1, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}});
}
inline Matrix example3_C2() {
  return mat({{0, 0, 0, 1}, {1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}});
}
inline Vector example3_a1() { return vec({0.2, 0, 0.7, 0.8}); }
inline Vector example3_a2() { return vec({0.6, 0, 0.7, 0.8}); }
inline Vector example3_x1() { return vec({0.9, 0.6, 0.9, 0.9}); }
inline Vector example3_x2() { return vec({0.7, 0.6, 0.9, 0.9}); }

/// W(g) entry by entry.
inline Matrix appraisal_oracle(const Matrix& C, const Vector& g) {
  Matrix W(C.rows(), C.cols());
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
      W(i, j) = (i == j ? g(i) : 0.0) + (1.0 - g(i)) * C(i, j);
    }
  }
  return W;
}

/// Social power through V = (I - A W)^{-1} (I - A) with an explicit inverse,
/// x = V^T 1/n.
inline Vector social_power_oracle(const Matrix& C, const Vector& a, const Vector& g) {
  const auto n = a.size();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A = a.asDiagonal();
  const Matrix V = (I - A * appraisal_oracle(C, g)).inverse() * (I - A);
  return V.transpose() * Vector::Constant(n, 1.0 / static_cast<double>(n));
}

/// Reflected-appraisal perception map written as a double loop over (i, j).
inline Vector perception_ra_oracle(const Matrix& C, const Vector& a, const Vector& p) {
  const auto n = a.size();
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = (1.0 - a(i)) / static_cast<double>(n) + a(i) * p(i) * p(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      s += (1.0 - a(i)) * a(j) / (1.0 - a(j)) * C(j, i) * p(j) * (1.0 - p(j));
    }
    out(i) = s;
  }
  return out;
}

inline RunOptions quiet_options(double tol = 1e-12, std::size_t max_iter = 100'000) {
  RunOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  o.dense_steps = 0;
  o.sparse_stride = max_iter + 1;
  return o;
}

}  // namespace spp::test
