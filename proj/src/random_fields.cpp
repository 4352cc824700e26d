#include "nehari/random_fields.hpp"

#include <cmath>

namespace nehari {

namespace {

double splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<double>(z ^ (z >> 31));
}

struct Extents {
  double x0, x1, y0, y1;
};

Extents extents(const Mesh& mesh) {
  Extents e{mesh.xs[0], mesh.xs[0], 0.0, 1.0};
  for (double x : mesh.xs) {
    e.x0 = std::min(e.x0, x);
    e.x1 = std::max(e.x1, x);
  }
  if (mesh.dim == 2) {
    e.y0 = e.y1 = mesh.ys[0];
    for (double y : mesh.ys) {
      e.y0 = std::min(e.y0, y);
      e.y1 = std::max(e.y1, y);
    }
  }
  return e;
}

} // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t state = a * 0x9e3779b97f4a7c15ULL + b * 0xd1b54a32d192ed03ULL +
                        c * 0x8cb92ba72f3d8dd7ULL + 0x1234567890abcdefULL;
  splitmix64(state);
  splitmix64(state);
  return state;
}

std::vector<double> base_profile(const Mesh& mesh) {
  const Extents e = extents(mesh);
  std::vector<double> vals(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    const double xh = (mesh.xs[i] - e.x0) / (e.x1 - e.x0);
    double v = std::sin(M_PI * xh);
    if (mesh.dim == 2) {
      const double yh = (mesh.ys[i] - e.y0) / (e.y1 - e.y0);
      v *= std::sin(M_PI * yh);
    }
    vals[i] = v;
  }
  return vals;
}

std::vector<double> random_smooth_values(const Mesh& mesh, std::mt19937_64& rng,
                                         int modes) {
  const Extents e = extents(mesh);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> vals(mesh.node_count(), 0.0);
  double total = 0.0;
  if (mesh.dim == 1) {
    for (int k = 1; k <= modes; ++k) {
      const double c = coef(rng);
      total += std::abs(c);
      for (int i = 0; i < mesh.node_count(); ++i) {
        const double xh = (mesh.xs[i] - e.x0) / (e.x1 - e.x0);
        vals[i] += c * std::sin(k * M_PI * xh);
      }
    }
  } else {
    for (int k = 1; k <= modes; ++k) {
      for (int l = 1; l <= 2; ++l) {
        const double c = coef(rng);
        total += std::abs(c);
        for (int i = 0; i < mesh.node_count(); ++i) {
          const double xh = (mesh.xs[i] - e.x0) / (e.x1 - e.x0);
          const double yh = (mesh.ys[i] - e.y0) / (e.y1 - e.y0);
          vals[i] += c * std::sin(k * M_PI * xh) * std::sin(l * M_PI * yh);
        }
      }
    }
  }
  if (total > 0.0)
    for (double& v : vals) v /= total;
  for (int i = 0; i < mesh.node_count(); ++i)
    if (mesh.boundary[i]) vals[i] = 0.0;
  return vals;
}

PairField random_smooth_pair(std::shared_ptr<const Mesh> mesh, std::mt19937_64& rng) {
  auto u = random_smooth_values(*mesh, rng);
  auto v = random_smooth_values(*mesh, rng);
  return make_pair(std::move(mesh), std::move(u), std::move(v));
}

} // namespace nehari
