#include "nehari/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nehari/errors.hpp"
#include "nehari/laplacian.hpp"
#include "nehari/random_fields.hpp"

namespace nehari {

namespace {

constexpr double kStepFloor = 1e-14;

// degenerate diffusion coefficient of the norm term, matching weak_gradient
inline double diffusion_weight(double w, double p, double eps) {
  if (p > 2.0) return std::pow(w, p - 2.0);
  return std::pow(w * w + eps * eps, 0.5 * (p - 2.0));
}

std::vector<double> diffusion_weights(const Field& f, const Params& params) {
  const auto grads = element_gradients(f);
  std::vector<double> w(grads.size());
  for (std::size_t e = 0; e < grads.size(); ++e)
    w[e] = diffusion_weight(std::hypot(grads[e][0], grads[e][1]), params.p,
                            params.epsilon_reg);
  return w;
}

std::array<double, 2> interior_minima(const PairField& pair) {
  const Mesh& m = *pair.u.mesh;
  double mu = std::numeric_limits<double>::infinity();
  double mv = mu;
  for (int i = 0; i < m.node_count(); ++i) {
    if (m.boundary[i]) continue;
    mu = std::min(mu, pair.u.values[i]);
    mv = std::min(mv, pair.v.values[i]);
  }
  return {mu, mv};
}

int interior_argmin(const Field& f) {
  const Mesh& m = *f.mesh;
  int arg = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.node_count(); ++i) {
    if (m.boundary[i]) continue;
    if (f.values[i] < best) {
      best = f.values[i];
      arg = i;
    }
  }
  return arg;
}

} // namespace

void validate_solve_options(const SolveOptions& opts) {
  if (opts.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(opts.armijo_c > 0.0 && opts.armijo_c < 1.0))
    throw ConfigError("armijo_c must lie in (0, 1)");
  if (!(opts.grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
  if (!(opts.step_init > 0.0)) throw ConfigError("step_init must be positive");
  if (opts.multistart_count < 1) throw ConfigError("multistart_count must be >= 1");
}

PairField initial_guess(Branch branch, std::shared_ptr<const Mesh> mesh,
                        const WeightSet& ws, const Params& params,
                        std::uint64_t seed, int attempts) {
  const std::vector<double> base = base_profile(*mesh);
  const double rs = params.r + params.s;
  std::string last_failure = "no attempt admitted the branch";

  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt), 0x1717));
    const auto bump_u = random_smooth_values(*mesh, rng);
    const auto bump_v = random_smooth_values(*mesh, rng);

    std::vector<double> u(base.size()), v(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      u[i] = base[i] * (1.0 + 0.75 * bump_u[i]);
      v[i] = base[i] * (1.0 + 0.75 * bump_v[i]);
    }
    PairField dir = make_pair(mesh, std::move(u), std::move(v));

    FiberCoefficients c;
    try {
      c = fiber_coefficients(dir, ws, params);
    } catch (const DegenerateDirectionError&) {
      continue;
    }

    // rescale so the dominant-balance root of the requested branch sits near
    // t = 1, keeping the root inside the search window
    double scale = 0.0;
    if (branch == Branch::Plus) {
      if (!(c.a2 > 0.0)) continue;
      scale = std::pow(c.a2 / c.a1, 1.0 / (params.p - params.q));
    } else {
      if (!(c.a3 > 0.0)) continue;
      scale = std::pow(c.a1 / c.a3, 1.0 / (rs - params.p));
    }
    if (!std::isfinite(scale) || !(scale > 0.0)) continue;
    dir = scale_pair(dir, scale);

    try {
      PairField projected = project_to_branch(dir, branch, ws, params);
      const NehariClass nc = classify(projected, ws, params);
      if ((branch == Branch::Plus && nc.label == NehariLabel::Plus) ||
          (branch == Branch::Minus && nc.label == NehariLabel::Minus))
        return projected;
      last_failure = "projected point failed branch classification";
    } catch (const ProjectionUnavailableError& e) {
      last_failure = e.what();
    } catch (const M0EncounterError& e) {
      last_failure = e.what();
    }
  }
  std::ostringstream os;
  os << "no initial point on the " << branch_name(branch) << " branch after "
     << attempts << " attempts: " << last_failure;
  throw NoInitialPointError(os.str());
}

SolveReport minimize_on_branch(Branch branch, const PairField& init,
                               const WeightSet& ws, const Params& params,
                               const SolveOptions& opts) {
  validate_solve_options(opts);
  {
    const NehariClass nc = classify(init, ws, params);
    const bool ok = (branch == Branch::Plus && nc.label == NehariLabel::Plus) ||
                    (branch == Branch::Minus && nc.label == NehariLabel::Minus);
    if (!ok)
      throw PreconditionError("minimize_on_branch needs an iterate on the branch");
  }

  const Mesh& mesh = *init.u.mesh;
  LaplacianSolver riesz(mesh);
  // away from p = 2 the plain Laplacian misjudges the operator scale at small
  // amplitudes; weighting it with the iterate's diffusion coefficient keeps
  // the descent rate amplitude-independent
  const bool weighted = params.p != 2.0;

  SolveReport rep;
  rep.branch = branch;
  rep.pair = init;
  rep.status = SolveStatus::MaxIterations;

  PairField pair = init;
  EnergyBreakdown eb = energy_breakdown(pair, ws, params);
  double J = eb.J;

  for (int it = 0; it <= opts.max_iters; ++it) {
    const PairField grad = weak_gradient(pair, ws, params);
    const double res = residual_norm(grad);
    rep.ps_diagnostic.push_back({J, res});
    // stop relative to the iterate's own scale so small-amplitude branch
    // minimizers are fully resolved; the reported certificate then satisfies
    // residual <= grad_tol * (1 + ||pair||^{p-1}) with room to spare
    const double norm_scale = std::pow(eb.norm_term, (params.p - 1.0) / params.p);
    if (res <= opts.grad_tol * norm_scale) {
      rep.converged = true;
      rep.status = SolveStatus::Converged;
      rep.iterations = it;
      break;
    }
    if (it == opts.max_iters) {
      rep.iterations = it;
      rep.message = "iteration budget exhausted";
      break;
    }

    if (weighted) riesz.set_element_weights(diffusion_weights(pair.u, params));
    const std::vector<double> du = riesz.solve(grad.u.values);
    if (weighted) riesz.set_element_weights(diffusion_weights(pair.v, params));
    const std::vector<double> dv = riesz.solve(grad.v.values);
    double slope = 0.0; // <grad, K^{-1} grad>, decrease rate along -direction
    for (int i = 0; i < mesh.node_count(); ++i)
      slope += grad.u.values[i] * du[i] + grad.v.values[i] * dv[i];

    double step = opts.step_init;
    bool accepted = false;
    while (step >= kStepFloor) {
      std::vector<double> cu(mesh.node_count()), cv(mesh.node_count());
      for (int i = 0; i < mesh.node_count(); ++i) {
        cu[i] = pair.u.values[i] - step * du[i];
        cv[i] = pair.v.values[i] - step * dv[i];
      }
      PairField candidate = make_pair(pair.u.mesh, std::move(cu), std::move(cv));
      try {
        candidate = project_to_branch(candidate, branch, ws, params);
      } catch (const ProjectionUnavailableError&) {
        step *= 0.5;
        continue;
      } catch (const DegenerateDirectionError&) {
        step *= 0.5;
        continue;
      } catch (const M0EncounterError& e) {
        rep.iterations = it;
        rep.status = SolveStatus::M0Encounter;
        rep.message = e.what();
        rep.pair = pair;
        rep.alpha = J;
        rep.residual = res;
        rep.positivity = interior_minima(pair);
        return rep;
      }
      const EnergyBreakdown ebc = energy_breakdown(candidate, ws, params);
      if (ebc.J <= J - opts.armijo_c * step * slope) {
        pair = std::move(candidate);
        eb = ebc;
        J = ebc.J;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      rep.iterations = it;
      if (res <= opts.grad_tol * (1.0 + norm_scale)) {
        // no further Armijo progress possible, but the residual already
        // meets the contract bound
        rep.converged = true;
        rep.status = SolveStatus::Converged;
        rep.message = "step-limited";
      } else {
        rep.status = SolveStatus::Stalled;
        rep.message = "step size underflow";
      }
      break;
    }
  }

  rep.pair = pair;
  rep.alpha = J;
  rep.residual = residual_norm(weak_gradient(pair, ws, params));
  rep.positivity = interior_minima(pair);
  return rep;
}

PositivityCertificate certify_positivity(const SolveReport& report,
                                         const WeightSet& ws, const Params& params,
                                         const SolveOptions& opts, double tol) {
  if (!report.converged)
    throw PreconditionError("positivity certificate needs a converged report");

  PositivityCertificate cert;
  cert.report = report;
  auto fill = [&](const SolveReport& rep) {
    const auto mins = interior_minima(rep.pair);
    cert.min_u = mins[0];
    cert.min_v = mins[1];
    cert.positive = (mins[0] > tol) && (mins[1] > tol);
    cert.witness_node_u = cert.positive ? -1 : interior_argmin(rep.pair.u);
    cert.witness_node_v = cert.positive ? -1 : interior_argmin(rep.pair.v);
  };
  fill(report);
  if (cert.positive) return cert;
  // the restart is justified only when negative parts exist to fold over
  if (!(cert.min_u < 0.0) && !(cert.min_v < 0.0)) return cert;

  // restart once from the nodal absolute values, re-projected onto the branch
  PairField abs_pair = report.pair;
  for (double& x : abs_pair.u.values) x = std::abs(x);
  for (double& x : abs_pair.v.values) x = std::abs(x);
  try {
    abs_pair = project_to_branch(abs_pair, report.branch, ws, params);
    SolveReport restarted = minimize_on_branch(report.branch, abs_pair, ws, params, opts);
    cert.restarted = true;
    if (restarted.converged) {
      cert.report = restarted;
      fill(restarted);
    }
  } catch (const Error&) {
    // restart unavailable; the original witness stands
  }
  return cert;
}

double sup_distance(const PairField& a, const PairField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.u.values.size(); ++i) {
    d = std::max(d, std::abs(a.u.values[i] - b.u.values[i]));
    d = std::max(d, std::abs(a.v.values[i] - b.v.values[i]));
  }
  return d;
}

TwoSolutionResult two_solution_search(const std::shared_ptr<const Mesh>& mesh,
                                      const WeightSet& ws, const Params& params,
                                      const SolveOptions& opts, double positivity_tol,
                                      const Thresholds* thresholds) {
  validate_params(params);
  TwoSolutionResult result;

  if (thresholds) {
    const bool inside = std::abs(params.lambda) < thresholds->lambda0 &&
                        std::abs(params.mu) < thresholds->mu0;
    result.inside_thresholds = inside;
    if (!inside) {
      std::ostringstream os;
      os << "(|lambda|, |mu|) = (" << std::abs(params.lambda) << ", "
         << std::abs(params.mu) << ") lies outside the certified box ("
         << thresholds->lambda0 << ", " << thresholds->mu0
         << "); the degenerate set is not excluded";
      result.warning = os.str();
    }
  }

  for (Branch branch : {Branch::Plus, Branch::Minus}) {
    BranchOutcome& out = branch == Branch::Plus ? result.plus : result.minus;
    std::string last_failure;
    for (int start = 0; start < opts.multistart_count; ++start) {
      const std::uint64_t seed =
          mix_seed(opts.rng_seed, branch == Branch::Plus ? 1 : 2,
                   static_cast<std::uint64_t>(start));
      SolveReport rep;
      try {
        const PairField init =
            initial_guess(branch, mesh, ws, params, seed, opts.multistart_count);
        rep = minimize_on_branch(branch, init, ws, params, opts);
      } catch (const Error& e) {
        last_failure = e.what();
        continue;
      }
      rep.seed = seed;
      if (!rep.converged) {
        last_failure = rep.message.empty() ? "did not converge" : rep.message;
        continue;
      }
      if (!out.available || rep.alpha < out.report.alpha - 1e-12 ||
          (std::abs(rep.alpha - out.report.alpha) < 1e-12 &&
           rep.residual < out.report.residual)) {
        out.report = std::move(rep);
        out.available = true;
      }
    }
    if (out.available) {
      out.positivity = certify_positivity(out.report, ws, params, opts, positivity_tol);
      out.report = out.positivity.report;
    } else {
      out.failure = last_failure.empty() ? "all multistarts failed" : last_failure;
    }
  }

  if (result.plus.available && result.minus.available)
    result.distinctness = sup_distance(result.plus.report.pair, result.minus.report.pair);
  return result;
}

} // namespace nehari
