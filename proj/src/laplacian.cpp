#include "nehari/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nehari/errors.hpp"

namespace nehari {

LaplacianSolver::LaplacianSolver(const Mesh& mesh) : mesh_(&mesh) {
  const int n = mesh.node_count();
  const int nv = mesh.verts_per_elem();

  // symbolic pattern
  std::vector<std::map<int, double>> rows(n);
  for (int e = 0; e < mesh.elem_count(); ++e) {
    for (int a = 0; a < nv; ++a) {
      const int i = mesh.elems[e][a];
      if (mesh.boundary[i]) continue;
      for (int b = 0; b < nv; ++b) {
        const int j = mesh.elems[e][b];
        if (mesh.boundary[j]) continue;
        rows[i][j] = 0.0;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (mesh.boundary[i]) rows[i][i] = 0.0;

  row_ptr_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    row_ptr_[i + 1] = row_ptr_[i] + static_cast<int>(rows[i].size());
  col_.resize(row_ptr_[n]);
  val_.assign(row_ptr_[n], 0.0);
  diag_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    int k = row_ptr_[i];
    for (const auto& [j, unused] : rows[i]) col_[k++] = j;
  }

  // per-element contributions against the fixed pattern
  auto csr_index = [&](int i, int j) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_[k] == j) return k;
    return -1;
  };
  for (int e = 0; e < mesh.elem_count(); ++e) {
    for (int a = 0; a < nv; ++a) {
      const int i = mesh.elems[e][a];
      if (mesh.boundary[i]) continue;
      for (int b = 0; b < nv; ++b) {
        const int j = mesh.elems[e][b];
        if (mesh.boundary[j]) continue;
        const double base = mesh.measure[e] *
                            (mesh.hat_grad[e][a][0] * mesh.hat_grad[e][b][0] +
                             mesh.hat_grad[e][a][1] * mesh.hat_grad[e][b][1]);
        entries_.push_back({csr_index(i, j), e, base});
      }
    }
  }

  tridiagonal_ = (mesh.dim == 1);
  if (tridiagonal_) {
    tri_lower_.assign(n, 0.0);
    tri_diag_.assign(n, 1.0);
    tri_upper_.assign(n, 0.0);
  }

  refill(std::vector<double>(mesh.elem_count(), 1.0));
}

void LaplacianSolver::set_element_weights(const std::vector<double>& weights) {
  if (static_cast<int>(weights.size()) != mesh_->elem_count())
    throw ShapeError("element weight length does not match element count");
  double wmax = 0.0;
  for (double w : weights) wmax = std::max(wmax, w);
  if (!(wmax > 0.0)) wmax = 1.0;
  std::vector<double> floored(weights);
  for (double& w : floored) w = std::max(w, 1e-12 * wmax);
  refill(floored);
}

void LaplacianSolver::refill(const std::vector<double>& weights) {
  const int n = mesh_->node_count();
  std::fill(val_.begin(), val_.end(), 0.0);
  for (const Entry& en : entries_) val_[en.csr] += en.base * weights[en.elem];
  for (int i = 0; i < n; ++i) {
    if (mesh_->boundary[i]) {
      // identity row
      for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        val_[k] = (col_[k] == i) ? 1.0 : 0.0;
    }
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_[k] == i) diag_[i] = val_[k];
  }
  if (tridiagonal_) {
    for (int i = 0; i < n; ++i) {
      tri_lower_[i] = tri_upper_[i] = 0.0;
      tri_diag_[i] = 1.0;
      for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        if (col_[k] == i - 1) tri_lower_[i] = val_[k];
        else if (col_[k] == i) tri_diag_[i] = val_[k];
        else if (col_[k] == i + 1) tri_upper_[i] = val_[k];
      }
    }
  }
}

std::vector<double> LaplacianSolver::apply(const std::vector<double>& x) const {
  const int n = mesh_->node_count();
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * x[col_[k]];
    y[i] = acc;
  }
  return y;
}

std::vector<double> LaplacianSolver::solve(const std::vector<double>& rhs) const {
  const int n = mesh_->node_count();
  if (static_cast<int>(rhs.size()) != n)
    throw ShapeError("laplacian rhs length does not match node count");

  std::vector<double> b = rhs;
  for (int i = 0; i < n; ++i)
    if (mesh_->boundary[i]) b[i] = 0.0;

  if (tridiagonal_) {
    std::vector<double> c(n, 0.0), d(n, 0.0), x(n, 0.0);
    double beta = tri_diag_[0];
    d[0] = b[0] / beta;
    for (int i = 1; i < n; ++i) {
      c[i - 1] = tri_upper_[i - 1] / beta;
      beta = tri_diag_[i] - tri_lower_[i] * c[i - 1];
      d[i] = (b[i] - tri_lower_[i] * d[i - 1]) / beta;
    }
    x[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  }

  // Jacobi-preconditioned CG
  std::vector<double> x(n, 0.0), r = b, z(n), p(n), ap(n);
  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) return x;
  const double tol = 1e-13 * bnorm;

  for (int i = 0; i < n; ++i) z[i] = r[i] / diag_[i];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];

  const int max_iters = 20 * n + 100;
  for (int it = 0; it < max_iters; ++it) {
    ap = apply(p);
    double pap = 0.0;
    for (int i = 0; i < n; ++i) pap += p[i] * ap[i];
    const double alpha = rz / pap;
    double rnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rnorm += r[i] * r[i];
    }
    if (std::sqrt(rnorm) <= tol) break;
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag_[i];
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) rz_new += r[i] * z[i];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return x;
}

} // namespace nehari
