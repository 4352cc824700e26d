#include "nehari/fibering.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

// phi'(t) with the positive factor t^{q-1} divided out:
//   g(t) = a1 t^{p-q} - a2 - a3 t^{r+s-q}
// Same roots and sign as phi' on t > 0, better conditioned across the window.
inline double reduced_derivative(double t, const FiberCoefficients& c,
                                 const Params& params) {
  const double rs = params.r + params.s;
  return c.a1 * std::pow(t, params.p - params.q) - c.a2 -
         c.a3 * std::pow(t, rs - params.q);
}

double bisect_root(double lo, double hi, double glo, const FiberCoefficients& c,
                   const Params& params, double rel_width) {
  // invariant: sign change inside [lo, hi]
  while (hi - lo > rel_width * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break; // floating-point floor reached
    const double gm = reduced_derivative(mid, c, params);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

const char* branch_name(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

FiberCoefficients fiber_coefficients(const PairField& pair, const WeightSet& ws,
                                     const Params& params) {
  const EnergyBreakdown eb = energy_breakdown(pair, ws, params);
  if (!(eb.norm_term > 0.0))
    throw DegenerateDirectionError("fiber coefficients need a nonzero direction");
  return FiberCoefficients{eb.norm_term, eb.weight_term, eb.coupling_term};
}

double fiber_value(double t, const FiberCoefficients& c, const Params& params) {
  if (!(t > 0.0)) throw DomainError("fiber map is defined for t > 0");
  const double rs = params.r + params.s;
  return std::pow(t, params.p) / params.p * c.a1 -
         std::pow(t, params.q) / params.q * c.a2 - std::pow(t, rs) / rs * c.a3;
}

double fiber_derivative(double t, const FiberCoefficients& c, const Params& params) {
  if (!(t > 0.0)) throw DomainError("fiber map is defined for t > 0");
  const double rs = params.r + params.s;
  return std::pow(t, params.p - 1.0) * c.a1 - std::pow(t, params.q - 1.0) * c.a2 -
         std::pow(t, rs - 1.0) * c.a3;
}

double fiber_second_derivative(double t, const FiberCoefficients& c,
                               const Params& params) {
  if (!(t > 0.0)) throw DomainError("fiber map is defined for t > 0");
  const double rs = params.r + params.s;
  return (params.p - 1.0) * std::pow(t, params.p - 2.0) * c.a1 -
         (params.q - 1.0) * std::pow(t, params.q - 2.0) * c.a2 -
         (rs - 1.0) * std::pow(t, rs - 2.0) * c.a3;
}

std::vector<FiberRoot> fiber_roots(const FiberCoefficients& c, const Params& params,
                                   const FiberRootOptions& opts) {
  if (!(c.a1 > 0.0)) throw DegenerateDirectionError("fiber roots need a1 > 0");

  // scan grid: log-spaced points, plus the single stationary point of the
  // reduced derivative when a3 > 0 so narrow two-root humps cannot slip
  // between grid points (g is monotone on each side of it).
  std::vector<double> ts;
  ts.reserve(opts.grid_points + 1);
  const double lmin = std::log(opts.t_min), lmax = std::log(opts.t_max);
  for (int i = 0; i < opts.grid_points; ++i)
    ts.push_back(std::exp(lmin + (lmax - lmin) * i / (opts.grid_points - 1)));
  if (c.a3 > 0.0) {
    const double rs = params.r + params.s;
    const double tstar = std::pow((params.p - params.q) * c.a1 /
                                      ((rs - params.q) * c.a3),
                                  1.0 / (rs - params.p));
    if (tstar > opts.t_min && tstar < opts.t_max) {
      ts.push_back(tstar);
      std::sort(ts.begin(), ts.end());
    }
  }

  std::vector<double> roots;
  double prev_t = ts[0];
  double prev_g = reduced_derivative(prev_t, c, params);
  if (prev_g == 0.0) roots.push_back(prev_t);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double t = ts[i];
    const double g = reduced_derivative(t, c, params);
    if (g == 0.0) {
      roots.push_back(t);
    } else if (prev_g != 0.0 && (g > 0.0) != (prev_g > 0.0)) {
      roots.push_back(bisect_root(prev_t, t, prev_g, c, params, opts.rel_width));
    }
    prev_t = t;
    prev_g = g;
  }

  if (roots.size() > 2) {
    // three-power structure admits at most two positive roots; extra sign
    // changes are numerical noise around a near-degenerate hump
    std::cerr << "fiber_roots: " << roots.size()
              << " sign changes detected, keeping smallest and largest\n";
    roots = {roots.front(), roots.back()};
  }

  std::vector<FiberRoot> out;
  for (double t : roots) {
    const double dd = fiber_second_derivative(t, c, params);
    if (std::abs(dd) < opts.degenerate_band * c.a1)
      throw M0EncounterError(t, dd, c.a1);
    out.push_back(FiberRoot{t, dd, dd > 0.0 ? Branch::Plus : Branch::Minus});
  }
  return out;
}

PairField scale_pair(const PairField& pair, double t) {
  PairField scaled = pair;
  for (double& x : scaled.u.values) x *= t;
  for (double& x : scaled.v.values) x *= t;
  return scaled;
}

PairField project_to_branch(const PairField& pair, Branch branch,
                            const WeightSet& ws, const Params& params,
                            const FiberRootOptions& opts) {
  const FiberCoefficients c = fiber_coefficients(pair, ws, params);
  const auto roots = fiber_roots(c, params, opts);
  for (const FiberRoot& root : roots)
    if (root.branch == branch) return scale_pair(pair, root.t);
  throw ProjectionUnavailableError(
      std::string("direction admits no root on the ") + branch_name(branch) +
      " branch");
}

} // namespace nehari
