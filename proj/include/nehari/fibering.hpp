#pragma once

#include <vector>

#include "nehari/functional.hpp"

namespace nehari {

/** Coefficients of the fiber map along a fixed direction (u, v):
 *   phi(t)  = (t^p/p) a1 - (t^q/q) a2 - (t^{r+s}/(r+s)) a3
 *   phi'(t) = t^{p-1} a1 - t^{q-1} a2 - t^{r+s-1} a3
 * Roots of phi' are exactly the scalings t with (tu, tv) on the manifold. */
struct FiberCoefficients {
  double a1 = 0.0; // ||(u,v)||^p, > 0 for a nonzero direction
  double a2 = 0.0; // lambda*int f|u|^q + mu*int g|v|^q
  double a3 = 0.0; // int h|u|^r|v|^s
};

enum class Branch { Plus, Minus };

const char* branch_name(Branch b);

struct FiberRoot {
  double t = 0.0;
  double second_derivative = 0.0; // phi''(t)
  Branch branch = Branch::Plus;   // Plus iff phi''(t) > 0
};

struct FiberRootOptions {
  double t_min = 1e-6;
  double t_max = 1e6;
  int grid_points = 512;       // logarithmic bracketing grid
  double rel_width = 1e-12;    // bisection stop: interval width relative to t
  double degenerate_band = 1e-12; // |phi''| < band * a1 reports an M0 encounter
};

/// The three integrals of the direction; equal to the corresponding
/// EnergyBreakdown fields bit-for-bit. Throws DegenerateDirectionError
/// for the zero pair.
FiberCoefficients fiber_coefficients(const PairField& pair, const WeightSet& ws,
                                     const Params& params);

double fiber_value(double t, const FiberCoefficients& c, const Params& params);
double fiber_derivative(double t, const FiberCoefficients& c, const Params& params);
double fiber_second_derivative(double t, const FiberCoefficients& c,
                               const Params& params);

/** All positive roots of phi' inside [t_min, t_max], sorted ascending, each
 * labeled by the sign of phi''. Structure for 1 < q < p < r+s:
 *   a2 <= 0, a3 <= 0 -> no roots
 *   a2 >  0, a3 <= 0 -> one root, Plus
 *   a2 <= 0, a3 >  0 -> one root, Minus
 *   a2 >  0, a3 >  0 -> zero or two roots (Plus then Minus)
 * A root with |phi''| below degenerate_band * a1 throws M0EncounterError. */
std::vector<FiberRoot> fiber_roots(const FiberCoefficients& c, const Params& params,
                                   const FiberRootOptions& opts = {});

/// Scales the pair onto the requested branch: returns (t u, t v) with t the
/// branch root. Throws ProjectionUnavailableError if the direction admits no
/// root of that branch.
PairField project_to_branch(const PairField& pair, Branch branch,
                            const WeightSet& ws, const Params& params,
                            const FiberRootOptions& opts = {});

PairField scale_pair(const PairField& pair, double t);

} // namespace nehari
