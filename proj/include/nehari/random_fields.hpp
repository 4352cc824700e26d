#pragma once

#include <cstdint>
#include <random>

#include "nehari/mesh.hpp"

namespace nehari {

/// Deterministic seed mixing (splitmix64 over the concatenated words).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// First Dirichlet eigenfunction shape: sin(pi x^) in 1D,
/// sin(pi x^) sin(pi y^) on rectangles (hatted coordinates normalized to [0,1]).
std::vector<double> base_profile(const Mesh& mesh);

/// Smooth zero-boundary field from a few low sine modes with coefficients
/// drawn from rng, normalized to sup <= 1. Sign-changing in general.
std::vector<double> random_smooth_values(const Mesh& mesh, std::mt19937_64& rng,
                                         int modes = 4);

PairField random_smooth_pair(std::shared_ptr<const Mesh> mesh, std::mt19937_64& rng);

} // namespace nehari
