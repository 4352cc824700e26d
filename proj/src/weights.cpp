#include "nehari/weights.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

constexpr double kSignEps = 1e-14;

std::vector<double> read_nodal_file(const std::string& path, int expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open nodal weight file: " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    vals.push_back(std::stod(line));
  }
  if (static_cast<int>(vals.size()) != expected) {
    std::ostringstream os;
    os << "nodal weight file " << path << " has " << vals.size()
       << " values, mesh has " << expected << " nodes";
    throw ShapeError(os.str());
  }
  return vals;
}

SignReport sign_report(const Mesh& mesh, const std::vector<double>& w) {
  // lumped nodal measures: each element contributes measure/verts to its nodes
  std::vector<double> lump(mesh.node_count(), 0.0);
  const int nv = mesh.verts_per_elem();
  for (int e = 0; e < mesh.elem_count(); ++e)
    for (int k = 0; k < nv; ++k) lump[mesh.elems[e][k]] += mesh.measure[e] / nv;
  SignReport rep;
  for (int i = 0; i < mesh.node_count(); ++i) {
    if (w[i] > kSignEps) rep.positive_measure += lump[i];
    if (w[i] < -kSignEps) rep.negative_measure += lump[i];
  }
  return rep;
}

} // namespace

std::vector<double> sample_weight(const Mesh& mesh, const WeightSpec& spec) {
  const int n = mesh.node_count();
  std::vector<double> w(n);
  switch (spec.family) {
    case WeightSpec::Family::Sin:
      for (int i = 0; i < n; ++i) w[i] = std::sin(spec.k * M_PI * mesh.xs[i]);
      break;
    case WeightSpec::Family::Const:
      for (int i = 0; i < n; ++i) w[i] = spec.c;
      break;
    case WeightSpec::Family::Poly:
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (auto it = spec.coeffs.rbegin(); it != spec.coeffs.rend(); ++it)
          acc = acc * mesh.xs[i] + *it;
        w[i] = acc;
      }
      break;
    case WeightSpec::Family::File:
      w = read_nodal_file(spec.path, n);
      break;
  }
  return w;
}

WeightSet make_weight_set(const Mesh& mesh, std::vector<double> f,
                          std::vector<double> g, std::vector<double> h) {
  const auto check = [&](const std::vector<double>& w) {
    if (static_cast<int>(w.size()) != mesh.node_count())
      throw ShapeError("weight sample length does not match node count");
  };
  check(f);
  check(g);
  check(h);
  const auto sup = [](const std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s = std::max(s, std::abs(x));
    return s;
  };
  WeightSet ws;
  ws.f = std::move(f);
  ws.g = std::move(g);
  ws.h = std::move(h);
  ws.f_sup = sup(ws.f);
  ws.g_sup = sup(ws.g);
  ws.h_sup = sup(ws.h);
  ws.sign = {sign_report(mesh, ws.f), sign_report(mesh, ws.g), sign_report(mesh, ws.h)};
  return ws;
}

std::array<SignReport, 3> validate_sign_hypothesis(const WeightSet& ws) {
  const char* names[3] = {"f", "g", "h"};
  for (int i = 0; i < 3; ++i) {
    if (!(ws.sign[i].positive_measure > 0.0)) throw HypothesisError(names[i], '+');
    if (!(ws.sign[i].negative_measure > 0.0)) throw HypothesisError(names[i], '-');
  }
  return ws.sign;
}

} // namespace nehari
