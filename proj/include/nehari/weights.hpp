#pragma once

#include <array>
#include <string>
#include <vector>

#include "nehari/mesh.hpp"

namespace nehari {

/** Parametric weight families, or raw nodal values from a CSV file
 * (one value per line). All families are evaluated at the raw x
 * coordinate of each node:
 *   sin:   sin(k * pi * x)
 *   const: c
 *   poly:  c0 + c1 x + c2 x^2 + ...           */
struct WeightSpec {
  enum class Family { Sin, Const, Poly, File };
  Family family = Family::Const;
  double k = 1.0;                  // sin
  double c = 1.0;                  // const
  std::vector<double> coeffs;      // poly
  std::string path;                // file
};

std::vector<double> sample_weight(const Mesh& mesh, const WeightSpec& spec);

struct SignReport {
  double positive_measure = 0.0;
  double negative_measure = 0.0;
};

/** Sampled weights f, g, h with their discrete sup norms and the measures of
 * the positive/negative nodal regions. Immutable once built. */
struct WeightSet {
  std::vector<double> f, g, h;
  double f_sup = 0.0, g_sup = 0.0, h_sup = 0.0;
  std::array<SignReport, 3> sign; // f, g, h
};

WeightSet make_weight_set(const Mesh& mesh, std::vector<double> f,
                          std::vector<double> g, std::vector<double> h);

/// Succeeds iff all six sign parts (f+, f-, g+, g-, h+, h-) are nonzero,
/// i.e. each weight takes a value above +1e-14 and below -1e-14 at some node.
/// Throws HypothesisError naming the vanishing part otherwise.
std::array<SignReport, 3> validate_sign_hypothesis(const WeightSet& ws);

} // namespace nehari
