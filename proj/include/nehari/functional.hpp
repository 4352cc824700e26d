#pragma once

#include "nehari/mesh.hpp"
#include "nehari/weights.hpp"

namespace nehari {

/** Exponents and parameters of the system. p_star is derived from (p, N);
 * construction does not validate so that limit cases (lambda = mu = 0,
 * epsilon_reg = 0) remain evaluable — validate_params() enforces the
 * standing hypotheses where they are required. */
struct Params {
  double p = 2.0;
  double q = 1.5;
  double r = 3.0;
  double s = 3.0;
  double lambda = 0.0;
  double mu = 0.0;
  double p_star = 0.0;
  double epsilon_reg = 1e-8;
};

double critical_exponent(double p, int dim);

Params make_params(double p, double q, double r, double s, double lambda,
                   double mu, double epsilon_reg, int dim);

/// Enforces r > p, s > p, 1 < q < p < r+s < p_star, (lambda, mu) != (0, 0)
/// and epsilon_reg >= 0. Throws ConfigError on violation.
void validate_params(const Params& params);

/** The three integrals of the energy and the derived scalars:
 *   norm_term     = ||(u,v)||^p
 *   weight_term   = lambda*int f|u|^q + mu*int g|v|^q
 *   coupling_term = int h|u|^r|v|^s
 *   J       = norm/p - weight/q - coupling/(r+s)
 *   psi     = norm - weight - coupling
 *   pairing = p*norm - q*weight - (r+s)*coupling                       */
struct EnergyBreakdown {
  double norm_term = 0.0;
  double weight_term = 0.0;
  double coupling_term = 0.0;
  double J = 0.0;
  double psi = 0.0;
  double pairing = 0.0;
};

enum class NehariLabel { Plus, Zero, Minus, Off };

struct NehariClass {
  NehariLabel label = NehariLabel::Off;
  double constraint_residual = 0.0; // |psi| / norm_term
  double pairing_value = 0.0;
  bool zero_pair = false; // (0,0) is excluded from the manifold
};

struct ClassifyTolerances {
  double tol_on = 1e-8;   // on-manifold band, relative to norm_term
  double tol_zero = 1e-8; // Plus/Zero/Minus band, relative to norm_term
};

/// ||(u,v)||^p = int |grad u|^p + int |grad v|^p, exact per element.
double pair_norm_p(const PairField& pair, const Params& params);

EnergyBreakdown energy_breakdown(const PairField& pair, const WeightSet& ws,
                                 const Params& params);

/** Nodal gradient of the discrete energy: the residual of the two weak-form
 * identities against all hat test functions, zeroed at boundary nodes.
 * For p < 2 the gradient magnitude |grad u|^{p-2} is regularized as
 * (|grad u|^2 + epsilon_reg^2)^{(p-2)/2}; the energy itself is not. */
PairField weak_gradient(const PairField& pair, const WeightSet& ws,
                        const Params& params);

/// Euclidean norm of the stacked residual pair.
double residual_norm(const PairField& residual);

NehariClass classify(const PairField& pair, const WeightSet& ws,
                     const Params& params, const ClassifyTolerances& tol = {});

/** Lower bound on J over the manifold:
 *   ((r+s-p)/(p(r+s))) ||(u,v)||^p
 *     - ((r+s-q)/(q(r+s))) S_q^{-q/p} (|lambda| |f|_inf |u|^q
 *                                      + |mu| |g|_inf |v|^q)
 * with |u| = (int |grad u|^p)^{1/p}. Requires the pair to be on the
 * manifold (classify != Off); throws PreconditionError otherwise. */
double coercivity_bound(const PairField& pair, const WeightSet& ws,
                        const Params& params, double S_q,
                        const ClassifyTolerances& tol = {});

} // namespace nehari
