#include "nehari/functional.hpp"

#include <cmath>
#include <limits>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

void require_same_mesh(const PairField& pair, const WeightSet& ws) {
  const Mesh& m = *pair.u.mesh;
  if (pair.v.mesh.get() != pair.u.mesh.get())
    throw ShapeError("pair components live on different meshes");
  if (static_cast<int>(pair.u.values.size()) != m.node_count() ||
      static_cast<int>(pair.v.values.size()) != m.node_count())
    throw ShapeError("pair value length does not match node count");
  if (static_cast<int>(ws.f.size()) != m.node_count())
    throw ShapeError("weights sampled on a different mesh");
}

inline double grad_norm(const std::array<double, 2>& g) {
  return std::sqrt(g[0] * g[0] + g[1] * g[1]);
}

// |w|^{p-2} with the p < 2 regularization
inline double degenerate_weight(double w, double p, double eps) {
  if (p == 2.0) return 1.0;
  if (p > 2.0) return std::pow(w, p - 2.0);
  return std::pow(w * w + eps * eps, 0.5 * (p - 2.0));
}

// sign(x) |x|^{e}, continuous at 0 for e > 0
inline double signed_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  return (x > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(x), e);
}

struct Terms {
  double norm = 0.0;
  double weight = 0.0;
  double coupling = 0.0;
};

// One pass over the elements; shared by energy_breakdown and
// fiber_coefficients so the two agree bit-for-bit.
Terms accumulate_terms(const PairField& pair, const WeightSet& ws,
                       const Params& params) {
  const Mesh& m = *pair.u.mesh;
  const int nv = m.verts_per_elem();
  Terms t;
  for (int e = 0; e < m.elem_count(); ++e) {
    double gux = 0.0, guy = 0.0, gvx = 0.0, gvy = 0.0;
    double ubar = 0.0, vbar = 0.0, fbar = 0.0, gbar = 0.0, hbar = 0.0;
    for (int k = 0; k < nv; ++k) {
      const int i = m.elems[e][k];
      gux += pair.u.values[i] * m.hat_grad[e][k][0];
      guy += pair.u.values[i] * m.hat_grad[e][k][1];
      gvx += pair.v.values[i] * m.hat_grad[e][k][0];
      gvy += pair.v.values[i] * m.hat_grad[e][k][1];
      ubar += pair.u.values[i];
      vbar += pair.v.values[i];
      fbar += ws.f[i];
      gbar += ws.g[i];
      hbar += ws.h[i];
    }
    ubar /= nv;
    vbar /= nv;
    fbar /= nv;
    gbar /= nv;
    hbar /= nv;
    const double me = m.measure[e];
    t.norm += me * (std::pow(grad_norm({gux, guy}), params.p) +
                    std::pow(grad_norm({gvx, gvy}), params.p));
    t.weight += me * (params.lambda * fbar * std::pow(std::abs(ubar), params.q) +
                      params.mu * gbar * std::pow(std::abs(vbar), params.q));
    t.coupling += me * hbar * std::pow(std::abs(ubar), params.r) *
                  std::pow(std::abs(vbar), params.s);
  }
  return t;
}

} // namespace

double critical_exponent(double p, int dim) {
  if (dim > p) return p * dim / (dim - p);
  return std::numeric_limits<double>::infinity();
}

Params make_params(double p, double q, double r, double s, double lambda,
                   double mu, double epsilon_reg, int dim) {
  Params pr;
  pr.p = p;
  pr.q = q;
  pr.r = r;
  pr.s = s;
  pr.lambda = lambda;
  pr.mu = mu;
  pr.epsilon_reg = epsilon_reg;
  pr.p_star = critical_exponent(p, dim);
  return pr;
}

void validate_params(const Params& params) {
  const double rs = params.r + params.s;
  if (!(params.r > params.p)) throw ConfigError("exponents must satisfy r > p");
  if (!(params.s > params.p)) throw ConfigError("exponents must satisfy s > p");
  if (!(params.q > 1.0 && params.q < params.p))
    throw ConfigError("exponents must satisfy 1 < q < p");
  if (!(rs < params.p_star))
    throw ConfigError("exponents must satisfy r + s < p*");
  if (params.lambda == 0.0 && params.mu == 0.0)
    throw ConfigError("(lambda, mu) must not be (0, 0)");
  if (!(params.epsilon_reg >= 0.0))
    throw ConfigError("epsilon_reg must be nonnegative");
}

double pair_norm_p(const PairField& pair, const Params& params) {
  const Mesh& m = *pair.u.mesh;
  const int nv = m.verts_per_elem();
  double acc = 0.0;
  for (int e = 0; e < m.elem_count(); ++e) {
    double gux = 0.0, guy = 0.0, gvx = 0.0, gvy = 0.0;
    for (int k = 0; k < nv; ++k) {
      const int i = m.elems[e][k];
      gux += pair.u.values[i] * m.hat_grad[e][k][0];
      guy += pair.u.values[i] * m.hat_grad[e][k][1];
      gvx += pair.v.values[i] * m.hat_grad[e][k][0];
      gvy += pair.v.values[i] * m.hat_grad[e][k][1];
    }
    acc += m.measure[e] * (std::pow(grad_norm({gux, guy}), params.p) +
                           std::pow(grad_norm({gvx, gvy}), params.p));
  }
  return acc;
}

EnergyBreakdown energy_breakdown(const PairField& pair, const WeightSet& ws,
                                 const Params& params) {
  require_same_mesh(pair, ws);
  const Terms t = accumulate_terms(pair, ws, params);
  const double rs = params.r + params.s;
  EnergyBreakdown eb;
  eb.norm_term = t.norm;
  eb.weight_term = t.weight;
  eb.coupling_term = t.coupling;
  eb.J = t.norm / params.p - t.weight / params.q - t.coupling / rs;
  eb.psi = t.norm - t.weight - t.coupling;
  eb.pairing = params.p * t.norm - params.q * t.weight - rs * t.coupling;
  return eb;
}

PairField weak_gradient(const PairField& pair, const WeightSet& ws,
                        const Params& params) {
  require_same_mesh(pair, ws);
  const Mesh& m = *pair.u.mesh;
  const int nv = m.verts_per_elem();
  const double rs = params.r + params.s;

  std::vector<double> ru(m.node_count(), 0.0), rv(m.node_count(), 0.0);
  for (int e = 0; e < m.elem_count(); ++e) {
    double gux = 0.0, guy = 0.0, gvx = 0.0, gvy = 0.0;
    double ubar = 0.0, vbar = 0.0, fbar = 0.0, gbar = 0.0, hbar = 0.0;
    for (int k = 0; k < nv; ++k) {
      const int i = m.elems[e][k];
      gux += pair.u.values[i] * m.hat_grad[e][k][0];
      guy += pair.u.values[i] * m.hat_grad[e][k][1];
      gvx += pair.v.values[i] * m.hat_grad[e][k][0];
      gvy += pair.v.values[i] * m.hat_grad[e][k][1];
      ubar += pair.u.values[i];
      vbar += pair.v.values[i];
      fbar += ws.f[i];
      gbar += ws.g[i];
      hbar += ws.h[i];
    }
    ubar /= nv;
    vbar /= nv;
    fbar /= nv;
    gbar /= nv;
    hbar /= nv;

    const double me = m.measure[e];
    const double au = degenerate_weight(grad_norm({gux, guy}), params.p,
                                        params.epsilon_reg);
    const double av = degenerate_weight(grad_norm({gvx, gvy}), params.p,
                                        params.epsilon_reg);

    // mass-term densities at the element centroid
    const double fu = params.lambda * fbar * signed_pow(ubar, params.q - 1.0);
    const double fv = params.mu * gbar * signed_pow(vbar, params.q - 1.0);
    const double cu = (params.r / rs) * hbar * signed_pow(ubar, params.r - 1.0) *
                      std::pow(std::abs(vbar), params.s);
    const double cv = (params.s / rs) * hbar * std::pow(std::abs(ubar), params.r) *
                      signed_pow(vbar, params.s - 1.0);

    for (int k = 0; k < nv; ++k) {
      const int i = m.elems[e][k];
      ru[i] += me * (au * (gux * m.hat_grad[e][k][0] + guy * m.hat_grad[e][k][1]) -
                     (fu + cu) / nv);
      rv[i] += me * (av * (gvx * m.hat_grad[e][k][0] + gvy * m.hat_grad[e][k][1]) -
                     (fv + cv) / nv);
    }
  }
  PairField res{Field{pair.u.mesh, std::move(ru)}, Field{pair.u.mesh, std::move(rv)}};
  enforce_dirichlet(res.u);
  enforce_dirichlet(res.v);
  return res;
}

double residual_norm(const PairField& residual) {
  double acc = 0.0;
  for (double x : residual.u.values) acc += x * x;
  for (double x : residual.v.values) acc += x * x;
  return std::sqrt(acc);
}

NehariClass classify(const PairField& pair, const WeightSet& ws,
                     const Params& params, const ClassifyTolerances& tol) {
  NehariClass nc;
  bool all_zero = true;
  for (double x : pair.u.values)
    if (x != 0.0) { all_zero = false; break; }
  if (all_zero)
    for (double x : pair.v.values)
      if (x != 0.0) { all_zero = false; break; }
  if (all_zero) {
    nc.label = NehariLabel::Off;
    nc.zero_pair = true;
    return nc;
  }

  const EnergyBreakdown eb = energy_breakdown(pair, ws, params);
  nc.pairing_value = eb.pairing;
  if (!(eb.norm_term > 0.0)) {
    nc.label = NehariLabel::Off;
    nc.constraint_residual = std::numeric_limits<double>::infinity();
    return nc;
  }
  nc.constraint_residual = std::abs(eb.psi) / eb.norm_term;
  if (nc.constraint_residual > tol.tol_on) {
    nc.label = NehariLabel::Off;
    return nc;
  }
  const double band = tol.tol_zero * eb.norm_term;
  if (eb.pairing > band)
    nc.label = NehariLabel::Plus;
  else if (eb.pairing < -band)
    nc.label = NehariLabel::Minus;
  else
    nc.label = NehariLabel::Zero;
  return nc;
}

double coercivity_bound(const PairField& pair, const WeightSet& ws,
                        const Params& params, double S_q,
                        const ClassifyTolerances& tol) {
  if (!(S_q > 0.0)) throw PreconditionError("coercivity bound needs S_q > 0");
  const NehariClass nc = classify(pair, ws, params, tol);
  if (nc.label == NehariLabel::Off)
    throw PreconditionError("coercivity bound requires an on-manifold pair");

  const Mesh& m = *pair.u.mesh;
  const double rs = params.r + params.s;
  // split norms: int |grad u|^p and int |grad v|^p separately
  const int nv = m.verts_per_elem();
  double nu = 0.0, nvv = 0.0;
  for (int e = 0; e < m.elem_count(); ++e) {
    double gux = 0.0, guy = 0.0, gvx = 0.0, gvy = 0.0;
    for (int k = 0; k < nv; ++k) {
      const int i = m.elems[e][k];
      gux += pair.u.values[i] * m.hat_grad[e][k][0];
      guy += pair.u.values[i] * m.hat_grad[e][k][1];
      gvx += pair.v.values[i] * m.hat_grad[e][k][0];
      gvy += pair.v.values[i] * m.hat_grad[e][k][1];
    }
    nu += m.measure[e] * std::pow(grad_norm({gux, guy}), params.p);
    nvv += m.measure[e] * std::pow(grad_norm({gvx, gvy}), params.p);
  }
  const double norm_p = nu + nvv;
  const double c1 = (rs - params.p) / (params.p * rs);
  const double c2 = (rs - params.q) / (params.q * rs);
  const double sob = std::pow(S_q, -params.q / params.p);
  const double qterm = std::abs(params.lambda) * ws.f_sup * std::pow(nu, params.q / params.p) +
                       std::abs(params.mu) * ws.g_sup * std::pow(nvv, params.q / params.p);
  return c1 * norm_p - c2 * sob * qterm;
}

} // namespace nehari
