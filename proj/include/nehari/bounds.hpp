#pragma once

#include <cstdint>

#include "nehari/fibering.hpp"
#include "nehari/functional.hpp"

namespace nehari {

struct SobolevOptions {
  int max_iters = 5000;
  double tol = 1e-13; // relative decrease stop
  int refine_checks = 2;
};

struct SobolevEstimate {
  double l = 0.0;
  double p = 0.0;
  double value = 0.0;
  int mesh_resolution = 0; // node count
  int iterations_used = 0;
  bool converged = false;
};

/** Discrete best constant of the gradient-to-L^l embedding,
 *   S_l = inf (int |grad u|^p + int |grad v|^p)
 *             / (int |u|^l + int |v|^l)^{p/l},
 * estimated by preconditioned descent on the single-field Rayleigh quotient;
 * the single-field and the equal-pair quotient are both evaluated and the
 * smaller is kept (for l < p the pair form is lower by the factor
 * 2^{1 - p/l}). */
SobolevEstimate sobolev_constant(const Mesh& mesh, double p, double l,
                                 const SobolevOptions& opts = {});

/// Rayleigh quotient of a single field (v = 0 in the pair form).
double sobolev_quotient(const Mesh& mesh, std::span<const double> values, double p,
                        double l);

struct Thresholds {
  double lambda0 = 0.0; // box threshold: M0 certified empty for |lambda| < lambda0, |mu| < mu0
  double mu0 = 0.0;
  double lambda_intercept = 0.0; // axis intercepts of the region boundary
  double mu_intercept = 0.0;
  double lower_bound_printed = 0.0; // norm lower bound, constants as printed
  double lower_bound_variant = 0.0; // standard Sobolev substitution variant
  double upper_bound_at_threshold = 0.0;
  double s_p_value = 0.0;
  double s_rs_value = 0.0;
};

/// Norm upper bound on a degenerate-manifold pair as a function of
/// (|lambda|, |mu|); increasing in both arguments.
double m0_upper_bound(double abs_lambda, double abs_mu, const WeightSet& ws,
                      double s_p, const Params& params);

double m0_lower_bound_printed(const WeightSet& ws, double s_rs, const Params& params);
double m0_lower_bound_variant(const WeightSet& ws, double s_rs, const Params& params);

/** Region where the norm upper bound falls strictly below the lower bound, so
 * no degenerate pair can exist. Returned thresholds are the corner of the
 * largest such box: lambda0 = half the lambda-axis intercept, mu0 = half the
 * mu-axis intercept (the corner lies on the region boundary). Uses the
 * printed-form lower bound; the variant value is reported alongside. */
Thresholds m0_empty_thresholds(const WeightSet& ws, const SobolevEstimate& s_rs,
                               const SobolevEstimate& s_p, const Params& params);

struct ProbeReport {
  int samples = 0;
  int roots_examined = 0;
  int degenerate_count = 0;
  double min_gap = 0.0; // min |phi''(t)| / a1 over all roots; inf when no roots
};

/// Samples random smooth directions, collects every fiber root and its
/// distance from degeneracy. Degenerate encounters are counted, not thrown.
ProbeReport m0_absence_probe(const std::shared_ptr<const Mesh>& mesh,
                             const WeightSet& ws, const Params& params,
                             int samples, std::uint64_t seed,
                             double band = 1e-12);

} // namespace nehari
