#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace nehari {

/** Conforming P1 mesh of an interval or an axis-aligned rectangle.
 *
 * Elements are segments (1D) or triangles (2D, CCW). Hat-function gradients
 * are precomputed per element so that piecewise-linear fields have exact,
 * elementwise-constant gradients. Immutable after construction. */
struct Mesh {
  int dim = 1;
  std::vector<double> xs;
  std::vector<double> ys; // empty in 1D
  std::vector<std::array<int, 3>> elems; // third index -1 for segments
  std::vector<char> boundary;            // 1 = node on the domain boundary
  std::vector<double> measure;           // element length / area
  // hat_grad[e][k] = gradient of the hat function of local vertex k on element e
  std::vector<std::array<std::array<double, 2>, 3>> hat_grad;
  double domain_measure = 0.0;

  int node_count() const { return static_cast<int>(xs.size()); }
  int elem_count() const { return static_cast<int>(elems.size()); }
  int verts_per_elem() const { return dim + 1; }
  int interior_count() const;
};

/// Uniform mesh of n segments on [a, b]; endpoints flagged as boundary.
Mesh build_interval_mesh(int n, double a, double b);

/// Structured triangulation of [x0,x1] x [y0,y1], each cell split into two
/// triangles; all four edges flagged as boundary. rect = {x0, y0, x1, y1}.
Mesh build_rect_mesh(int nx, int ny, std::array<double, 4> rect);

/// Re-checks the construction invariants (positive measures, boundary flags,
/// total measure). Throws InvalidMeshError on violation.
void validate_mesh(const Mesh& mesh);

/** Nodal grid function. Values at boundary nodes are expected to be zero for
 * fields used as trial/test functions; enforce_dirichlet() zeroes them. */
struct Field {
  std::shared_ptr<const Mesh> mesh;
  std::vector<double> values;
};

struct PairField {
  Field u;
  Field v;
};

Field make_field(std::shared_ptr<const Mesh> mesh, std::vector<double> values);
Field zero_field(std::shared_ptr<const Mesh> mesh);

/// Zeroes the field at boundary nodes.
void enforce_dirichlet(Field& f);

/// Builds a pair on one mesh with Dirichlet values zeroed.
PairField make_pair(std::shared_ptr<const Mesh> mesh, std::vector<double> u,
                    std::vector<double> v);

/// Quadrature of a nodal sample vector: per-element mean times measure.
/// Exact for piecewise-linear integrands.
double integrate_node_function(const Mesh& mesh, std::span<const double> samples);

/// Elementwise-constant gradient of a P1 field given by nodal samples.
std::vector<std::array<double, 2>> element_gradients(const Mesh& mesh,
                                                     std::span<const double> samples);

inline std::vector<std::array<double, 2>> element_gradients(const Field& f) {
  return element_gradients(*f.mesh, f.values);
}

} // namespace nehari
