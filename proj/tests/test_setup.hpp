// Shared fixtures: the canonical 1D problem at arbitrary resolution.
#pragma once

#include <memory>
#include <random>

#include "nehari/functional.hpp"
#include "nehari/random_fields.hpp"
#include "nehari/weights.hpp"

namespace setup {

inline std::shared_ptr<const nehari::Mesh> interval(int n, double a = 0.0,
                                                    double b = 1.0) {
  return std::make_shared<const nehari::Mesh>(nehari::build_interval_mesh(n, a, b));
}

inline nehari::WeightSet canonical_weights(const nehari::Mesh& mesh) {
  const int n = mesh.node_count();
  std::vector<double> f(n), g(n), h(n);
  for (int i = 0; i < n; ++i) {
    f[i] = std::sin(2.0 * M_PI * mesh.xs[i]);
    g[i] = f[i];
    h[i] = mesh.xs[i] - 0.3;
  }
  return nehari::make_weight_set(mesh, f, g, h);
}

inline nehari::Params canonical_params(int dim = 1, double lambda = 0.05,
                                       double mu = 0.05) {
  return nehari::make_params(2.0, 1.5, 3.0, 3.0, lambda, mu, 1e-8, dim);
}

inline nehari::PairField random_pair(const std::shared_ptr<const nehari::Mesh>& mesh,
                                     std::mt19937_64& rng) {
  return nehari::random_smooth_pair(mesh, rng);
}

} // namespace setup
