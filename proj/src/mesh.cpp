#include "nehari/mesh.hpp"

#include <cmath>
#include <cstdlib>

#include "nehari/errors.hpp"

namespace nehari {

int Mesh::interior_count() const {
  int n = 0;
  for (char b : boundary)
    if (!b) ++n;
  return n;
}

Mesh build_interval_mesh(int n, double a, double b) {
  if (n < 2) throw InvalidMeshError("interval mesh needs n >= 2 elements");
  if (!(b > a)) throw InvalidMeshError("interval mesh needs b > a");

  Mesh m;
  m.dim = 1;
  const double h = (b - a) / n;
  m.xs.resize(n + 1);
  for (int i = 0; i <= n; ++i) m.xs[i] = a + i * h;
  m.xs[n] = b; // exact endpoint
  m.boundary.assign(n + 1, 0);
  m.boundary.front() = 1;
  m.boundary.back() = 1;
  m.elems.resize(n);
  m.measure.resize(n);
  m.hat_grad.resize(n);
  for (int e = 0; e < n; ++e) {
    m.elems[e] = {e, e + 1, -1};
    const double he = m.xs[e + 1] - m.xs[e];
    m.measure[e] = he;
    m.hat_grad[e][0] = {-1.0 / he, 0.0};
    m.hat_grad[e][1] = {+1.0 / he, 0.0};
    m.hat_grad[e][2] = {0.0, 0.0};
  }
  m.domain_measure = b - a;
  validate_mesh(m);
  return m;
}

Mesh build_rect_mesh(int nx, int ny, std::array<double, 4> rect) {
  const double x0 = rect[0], y0 = rect[1], x1 = rect[2], y1 = rect[3];
  if (nx < 2 || ny < 2) throw InvalidMeshError("rect mesh needs nx, ny >= 2");
  if (!(x1 > x0) || !(y1 > y0)) throw InvalidMeshError("degenerate rectangle");

  Mesh m;
  m.dim = 2;
  const int nnx = nx + 1, nny = ny + 1;
  const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
  m.xs.resize(nnx * nny);
  m.ys.resize(nnx * nny);
  m.boundary.assign(nnx * nny, 0);
  for (int j = 0; j < nny; ++j) {
    for (int i = 0; i < nnx; ++i) {
      const int id = j * nnx + i;
      m.xs[id] = (i == nx) ? x1 : x0 + i * hx;
      m.ys[id] = (j == ny) ? y1 : y0 + j * hy;
      if (i == 0 || i == nx || j == 0 || j == ny) m.boundary[id] = 1;
    }
  }

  m.elems.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = j * nnx + i;
      const int n10 = j * nnx + i + 1;
      const int n01 = (j + 1) * nnx + i;
      const int n11 = (j + 1) * nnx + i + 1;
      m.elems.push_back({n00, n10, n11});
      m.elems.push_back({n00, n11, n01});
    }
  }

  const int ne = static_cast<int>(m.elems.size());
  m.measure.resize(ne);
  m.hat_grad.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& el = m.elems[e];
    const double ax = m.xs[el[0]], ay = m.ys[el[0]];
    const double bx = m.xs[el[1]], by = m.ys[el[1]];
    const double cx = m.xs[el[2]], cy = m.ys[el[2]];
    const double twice_area = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay);
    if (!(twice_area > 0.0)) throw InvalidMeshError("non-positive triangle area");
    m.measure[e] = 0.5 * twice_area;
    // grad of hat_i = rot90(edge opposite i) / (2 area)
    m.hat_grad[e][0] = {(by - cy) / twice_area, (cx - bx) / twice_area};
    m.hat_grad[e][1] = {(cy - ay) / twice_area, (ax - cx) / twice_area};
    m.hat_grad[e][2] = {(ay - by) / twice_area, (bx - ax) / twice_area};
  }
  m.domain_measure = (x1 - x0) * (y1 - y0);
  validate_mesh(m);
  return m;
}

void validate_mesh(const Mesh& mesh) {
  if (mesh.dim != 1 && mesh.dim != 2) throw InvalidMeshError("dimension must be 1 or 2");
  if (mesh.boundary.size() != mesh.xs.size())
    throw InvalidMeshError("boundary mask size mismatch");
  double total = 0.0;
  for (int e = 0; e < mesh.elem_count(); ++e) {
    if (!(mesh.measure[e] > 0.0)) throw InvalidMeshError("non-positive element measure");
    total += mesh.measure[e];
  }
  if (std::abs(total - mesh.domain_measure) > 1e-12 * mesh.domain_measure)
    throw InvalidMeshError("element measures do not sum to the domain measure");
  // geometric boundary nodes must be flagged
  double lox = mesh.xs[0], hix = mesh.xs[0];
  double loy = 0.0, hiy = 0.0;
  for (double x : mesh.xs) {
    lox = std::min(lox, x);
    hix = std::max(hix, x);
  }
  if (mesh.dim == 2) {
    loy = hiy = mesh.ys[0];
    for (double y : mesh.ys) {
      loy = std::min(loy, y);
      hiy = std::max(hiy, y);
    }
  }
  for (int i = 0; i < mesh.node_count(); ++i) {
    bool geo = (mesh.xs[i] == lox || mesh.xs[i] == hix);
    if (mesh.dim == 2) geo = geo || (mesh.ys[i] == loy || mesh.ys[i] == hiy);
    if (geo && !mesh.boundary[i])
      throw InvalidMeshError("geometric boundary node not flagged");
  }
}

Field make_field(std::shared_ptr<const Mesh> mesh, std::vector<double> values) {
  if (static_cast<int>(values.size()) != mesh->node_count())
    throw ShapeError("field values length does not match node count");
  return Field{std::move(mesh), std::move(values)};
}

Field zero_field(std::shared_ptr<const Mesh> mesh) {
  const int n = mesh->node_count();
  return Field{std::move(mesh), std::vector<double>(n, 0.0)};
}

void enforce_dirichlet(Field& f) {
  const Mesh& m = *f.mesh;
  for (int i = 0; i < m.node_count(); ++i)
    if (m.boundary[i]) f.values[i] = 0.0;
}

PairField make_pair(std::shared_ptr<const Mesh> mesh, std::vector<double> u,
                    std::vector<double> v) {
  PairField p{make_field(mesh, std::move(u)), make_field(mesh, std::move(v))};
  enforce_dirichlet(p.u);
  enforce_dirichlet(p.v);
  return p;
}

double integrate_node_function(const Mesh& mesh, std::span<const double> samples) {
  if (static_cast<int>(samples.size()) != mesh.node_count())
    throw ShapeError("sample length does not match node count");
  const int nv = mesh.verts_per_elem();
  double acc = 0.0;
  for (int e = 0; e < mesh.elem_count(); ++e) {
    double mean = 0.0;
    for (int k = 0; k < nv; ++k) mean += samples[mesh.elems[e][k]];
    acc += mesh.measure[e] * mean / nv;
  }
  return acc;
}

std::vector<std::array<double, 2>> element_gradients(const Mesh& mesh,
                                                     std::span<const double> samples) {
  if (static_cast<int>(samples.size()) != mesh.node_count())
    throw ShapeError("sample length does not match node count");
  const int nv = mesh.verts_per_elem();
  std::vector<std::array<double, 2>> g(mesh.elem_count(), {0.0, 0.0});
  for (int e = 0; e < mesh.elem_count(); ++e) {
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < nv; ++k) {
      const double s = samples[mesh.elems[e][k]];
      gx += s * mesh.hat_grad[e][k][0];
      gy += s * mesh.hat_grad[e][k][1];
    }
    g[e] = {gx, gy};
  }
  return g;
}

} // namespace nehari
