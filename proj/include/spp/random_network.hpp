#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "spp/network.hpp"

namespace spp {

using Rng = std::mt19937_64;

/// Random valid networks: each off-diagonal edge is present with
/// `edge_probability` and gets a uniform (0,1] weight, rows are normalized
/// (a row left empty gets one random edge). Each a_i is zero with
/// probability `fully_stubborn_probability`, otherwise uniform in
/// [0, max_susceptibility]; at least one a_i is positive.
struct RandomNetworkSpec {
  std::size_t n = 4;
  double edge_probability = 0.6;
  double max_susceptibility = 0.95;
  double fully_stubborn_probability = 0.2;
};

InfluenceNetwork random_network(const RandomNetworkSpec& spec, Rng& rng);

/// Star with center `center`: C_j,center = 1 for every leaf j, the center's
/// row spread over the leaves with random weights. When center_fully_stubborn
/// the center gets a = 0, otherwise a uniform in (0, max_susceptibility].
/// Leaves are partially stubborn unless a coin with `fully_stubborn_probability`
/// says otherwise (at least one partially stubborn node is guaranteed).
InfluenceNetwork random_star_network(std::size_t n, bool center_fully_stubborn, Rng& rng,
                                     double max_susceptibility = 0.95,
                                     double fully_stubborn_probability = 0.2,
                                     std::size_t center = 0);

/// Doubly stochastic zero-diagonal C as a random convex combination of
/// cyclic shifts.
Matrix random_doubly_stochastic(std::size_t n, Rng& rng, std::size_t terms = 3);

/// Uniform point of the simplex (normalized exponentials).
Vector random_simplex_point(std::size_t n, Rng& rng);

/// Uniform point of the box [lower, upper].
Vector random_in_box(const Vector& lower, const Vector& upper, Rng& rng);

}  // namespace spp
