#pragma once

#include "hdsine/linalg.hpp"

#include <cstdint>
#include <random>

namespace hdsine {

using Rng = std::mt19937_64;

/// Independent generator for trial `index` of an experiment seeded with `seed`.
/// Streams depend only on (seed, index), never on scheduling.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Same as substream(seed, index) for a named sub-experiment.
Rng substream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt);

double uniform(Rng& rng, double lo, double hi);

/// exp of a uniform draw in [log lo, log hi].
double log_uniform(Rng& rng, double lo, double hi);

Vector gaussian_vector(Rng& rng, int n);

VectorList gaussian_vectors(Rng& rng, int count, int n);

/// Uniform direction on the unit sphere of R^n.
Vector unit_vector(Rng& rng, int n);

/// I - 2 h h^T for a random unit h.
Matrix random_householder(Rng& rng, int n);

/// Product of n random Householder reflections.
Matrix random_orthogonal(Rng& rng, int n);

}  // namespace hdsine
