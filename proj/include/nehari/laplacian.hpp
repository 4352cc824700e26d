#pragma once

#include <vector>

#include "nehari/mesh.hpp"

namespace nehari {

/** Dirichlet P1 Laplacian of a mesh with a solve method, used as the Riesz
 * map turning nodal energy gradients into descent directions. The stiffness
 * can carry a per-element weight (the degenerate-diffusion coefficient
 * |grad u|^{p-2} of the current iterate), re-assembled numerically on the
 * fixed symbolic pattern. 1D solves run the Thomas algorithm; 2D solves run
 * Jacobi-preconditioned CG. */
class LaplacianSolver {
 public:
  explicit LaplacianSolver(const Mesh& mesh);

  /// Re-assembles the matrix values with the given per-element coefficients.
  /// Weights are floored at 1e-12 times their maximum to keep the matrix
  /// positive definite when elements are flat.
  void set_element_weights(const std::vector<double>& weights);

  /// Solves K d = rhs with d = 0 at boundary nodes (rhs entries there are
  /// ignored). Deterministic for a fixed mesh, weights and rhs.
  std::vector<double> solve(const std::vector<double>& rhs) const;

  /// y = K x (boundary rows act as identity).
  std::vector<double> apply(const std::vector<double>& x) const;

 private:
  void refill(const std::vector<double>& weights);

  const Mesh* mesh_;
  // CSR over all nodes; boundary rows are identity
  std::vector<int> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
  std::vector<double> diag_;
  struct Entry {
    int csr;
    int elem;
    double base; // unweighted stiffness contribution
  };
  std::vector<Entry> entries_;
  bool tridiagonal_ = false;
  std::vector<double> tri_lower_, tri_diag_, tri_upper_;
};

} // namespace nehari
