#include "nehari/bounds.hpp"

#include <cmath>
#include <limits>

#include "nehari/errors.hpp"
#include "nehari/laplacian.hpp"
#include "nehari/random_fields.hpp"

namespace nehari {

namespace {

struct Quotient {
  double A = 0.0; // int |grad u|^p
  double B = 0.0; // int |u|^l
};

Quotient quotient_terms(const Mesh& mesh, std::span<const double> u, double p,
                        double l) {
  const int nv = mesh.verts_per_elem();
  Quotient q;
  for (int e = 0; e < mesh.elem_count(); ++e) {
    double gx = 0.0, gy = 0.0, ubar = 0.0;
    for (int k = 0; k < nv; ++k) {
      const int i = mesh.elems[e][k];
      gx += u[i] * mesh.hat_grad[e][k][0];
      gy += u[i] * mesh.hat_grad[e][k][1];
      ubar += u[i];
    }
    ubar /= nv;
    q.A += mesh.measure[e] * std::pow(std::sqrt(gx * gx + gy * gy), p);
    q.B += mesh.measure[e] * std::pow(std::abs(ubar), l);
  }
  return q;
}

// gradient of A - (p/l) * A * B'-part, evaluated at B = 1
std::vector<double> quotient_gradient(const Mesh& mesh, const std::vector<double>& u,
                                      double p, double l, double A) {
  const int nv = mesh.verts_per_elem();
  std::vector<double> grad(mesh.node_count(), 0.0);
  const double reg = 1e-12; // guards p < 2 at flat elements
  for (int e = 0; e < mesh.elem_count(); ++e) {
    double gx = 0.0, gy = 0.0, ubar = 0.0;
    for (int k = 0; k < nv; ++k) {
      const int i = mesh.elems[e][k];
      gx += u[i] * mesh.hat_grad[e][k][0];
      gy += u[i] * mesh.hat_grad[e][k][1];
      ubar += u[i];
    }
    ubar /= nv;
    const double w2 = gx * gx + gy * gy;
    const double aw = (p == 2.0) ? 1.0 : std::pow(w2 + reg * reg, 0.5 * (p - 2.0));
    const double bw = (ubar == 0.0) ? 0.0
                                    : (ubar > 0.0 ? 1.0 : -1.0) *
                                          std::pow(std::abs(ubar), l - 1.0);
    for (int k = 0; k < nv; ++k) {
      const int i = mesh.elems[e][k];
      grad[i] += mesh.measure[e] *
                 (p * aw * (gx * mesh.hat_grad[e][k][0] + gy * mesh.hat_grad[e][k][1]) -
                  (p / l) * A * l * bw / nv);
    }
  }
  for (int i = 0; i < mesh.node_count(); ++i)
    if (mesh.boundary[i]) grad[i] = 0.0;
  return grad;
}

} // namespace

double sobolev_quotient(const Mesh& mesh, std::span<const double> values, double p,
                        double l) {
  const Quotient q = quotient_terms(mesh, values, p, l);
  if (!(q.B > 0.0)) throw DomainError("sobolev quotient of a null field");
  return q.A / std::pow(q.B, p / l);
}

SobolevEstimate sobolev_constant(const Mesh& mesh, double p, double l,
                                 const SobolevOptions& opts) {
  const double p_star = critical_exponent(p, mesh.dim);
  if (!(l > 1.0) || !(l <= p_star))
    throw PreconditionError("sobolev constant needs 1 < l <= p*");

  const LaplacianSolver riesz(mesh);
  std::vector<double> u = base_profile(mesh);

  auto renormalize = [&](std::vector<double>& w) {
    const Quotient q = quotient_terms(mesh, w, p, l);
    const double scale = std::pow(q.B, -1.0 / l);
    for (double& x : w) x *= scale;
  };
  renormalize(u);

  double value = quotient_terms(mesh, u, p, l).A; // B = 1
  int small_steps = 0;
  int it = 0;
  bool converged = false;
  for (; it < opts.max_iters; ++it) {
    const std::vector<double> grad = quotient_gradient(mesh, u, p, l, value);
    std::vector<double> dir = riesz.solve(grad);
    double slope = 0.0;
    for (int i = 0; i < mesh.node_count(); ++i) slope += grad[i] * dir[i];
    // slope = <grad, K^{-1} grad> >= 0; descent direction is -dir
    if (!(slope > 0.0)) {
      converged = true;
      break;
    }

    double step = 1.0;
    bool accepted = false;
    double new_value = value;
    std::vector<double> cand(mesh.node_count());
    while (step > 1e-16) {
      for (int i = 0; i < mesh.node_count(); ++i) cand[i] = u[i] - step * dir[i];
      const Quotient qc = quotient_terms(mesh, cand, p, l);
      if (qc.B > 0.0) {
        const double rc = qc.A / std::pow(qc.B, p / l);
        if (rc <= value - 1e-4 * step * slope) {
          const double scale = std::pow(qc.B, -1.0 / l);
          for (int i = 0; i < mesh.node_count(); ++i) u[i] = cand[i] * scale;
          new_value = rc;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = true;
      break;
    }
    const double drop = value - new_value;
    value = new_value;
    if (drop <= opts.tol * std::abs(value)) {
      if (++small_steps >= 2) {
        converged = true;
        ++it;
        break;
      }
    } else {
      small_steps = 0;
    }
  }

  const double single = value;
  const double equal_pair = std::pow(2.0, 1.0 - p / l) * single;

  SobolevEstimate est;
  est.l = l;
  est.p = p;
  est.value = std::min(single, equal_pair);
  est.mesh_resolution = mesh.node_count();
  est.iterations_used = it;
  est.converged = converged;
  return est;
}

double m0_upper_bound(double abs_lambda, double abs_mu, const WeightSet& ws,
                      double s_p, const Params& params) {
  const double rs = params.r + params.s;
  const double load = (rs - params.q) / (rs - params.p) *
                      (abs_lambda * ws.f_sup + abs_mu * ws.g_sup);
  return std::pow(load, 1.0 / (params.p - params.q)) *
         std::pow(s_p, params.q / (params.p * (params.p - params.q)));
}

double m0_lower_bound_printed(const WeightSet& ws, double s_rs, const Params& params) {
  const double rs = params.r + params.s;
  const double base = 2.0 * (params.p - params.q) / (rs - params.q) * ws.h_sup *
                      std::pow(s_rs, rs / params.p);
  return std::pow(base, 1.0 / (params.p - rs));
}

double m0_lower_bound_variant(const WeightSet& ws, double s_rs, const Params& params) {
  const double rs = params.r + params.s;
  const double base = (rs - params.q) / (params.p - params.q) * ws.h_sup *
                      std::pow(s_rs, -rs / params.p);
  return std::pow(base, 1.0 / (params.p - rs));
}

Thresholds m0_empty_thresholds(const WeightSet& ws, const SobolevEstimate& s_rs,
                               const SobolevEstimate& s_p, const Params& params) {
  if (!(s_rs.value > 0.0) || !(s_p.value > 0.0))
    throw FormulaDegeneracyError("thresholds need positive Sobolev estimates");
  if (!(ws.f_sup > 0.0) || !(ws.g_sup > 0.0) || !(ws.h_sup > 0.0))
    throw FormulaDegeneracyError("thresholds need nonzero weights");

  const double L = m0_lower_bound_printed(ws, s_rs.value, params);
  if (!std::isfinite(L) || !(L > 0.0))
    throw FormulaDegeneracyError("degenerate lower bound in threshold formula");

  const double rs = params.r + params.s;
  const double c = (rs - params.q) / (rs - params.p);
  const double e = params.q / (params.p * (params.p - params.q));
  const double budget = std::pow(L * std::pow(s_p.value, -e), params.p - params.q) / c;

  Thresholds th;
  th.lambda_intercept = budget / ws.f_sup;
  th.mu_intercept = budget / ws.g_sup;
  th.lambda0 = 0.5 * th.lambda_intercept;
  th.mu0 = 0.5 * th.mu_intercept;
  th.lower_bound_printed = L;
  th.lower_bound_variant = m0_lower_bound_variant(ws, s_rs.value, params);
  th.upper_bound_at_threshold = m0_upper_bound(th.lambda0, th.mu0, ws, s_p.value, params);
  th.s_p_value = s_p.value;
  th.s_rs_value = s_rs.value;
  return th;
}

ProbeReport m0_absence_probe(const std::shared_ptr<const Mesh>& mesh,
                             const WeightSet& ws, const Params& params,
                             int samples, std::uint64_t seed, double band) {
  ProbeReport rep;
  rep.samples = samples;
  rep.min_gap = std::numeric_limits<double>::infinity();
  FiberRootOptions opts;
  opts.degenerate_band = band;
  for (int n = 0; n < samples; ++n) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(n)));
    const PairField dir = random_smooth_pair(mesh, rng);
    FiberCoefficients c;
    try {
      c = fiber_coefficients(dir, ws, params);
    } catch (const DegenerateDirectionError&) {
      continue;
    }
    // normalize the direction to a1 = 1 so gaps are comparable across samples
    const double kappa = std::pow(c.a1, -1.0 / params.p);
    const FiberCoefficients cn{1.0, c.a2 * std::pow(kappa, params.q),
                               c.a3 * std::pow(kappa, params.r + params.s)};
    try {
      for (const FiberRoot& root : fiber_roots(cn, params, opts)) {
        ++rep.roots_examined;
        rep.min_gap = std::min(rep.min_gap, std::abs(root.second_derivative));
      }
    } catch (const M0EncounterError&) {
      ++rep.degenerate_count;
    }
  }
  return rep;
}

} // namespace nehari
