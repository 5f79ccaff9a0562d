#pragma once

#include <random>

#include "gpt/channel.hpp"

namespace gpt {

/// Seeded generator for every randomized path. Draws use plain modulo
/// reduction so results do not depend on the standard library's distributions.
using Rng = std::mt19937_64;

std::size_t draw_index(Rng& rng, std::size_t n);

/// k positive-or-zero rational weights summing to 1, small denominators.
Vec random_weights(Rng& rng, std::size_t k);

/// A vertex, a point on a chord between two vertices, or a mixture of all vertices.
Vec random_state(const StateSpace& s, Rng& rng);

/// Uniformly weighted mixture drawn from the given points.
Vec random_mixture(const std::vector<Vec>& points, Rng& rng);

std::vector<Vec> random_states(const StateSpace& s, std::size_t count, Rng& rng);

/// Linear maps that permute the vertices, identity included.
std::vector<Matrix> symmetries(const StateSpace& s);

/// Convex mixture of symmetries, measure-and-prepare maps and constant maps
/// (and stochastic maps on classical spaces). Always a valid channel.
AffineChannel random_endochannel(SpacePtr s, Rng& rng);

}  // namespace gpt
