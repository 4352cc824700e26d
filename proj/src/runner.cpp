#include "nehari/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

#include "nehari/errors.hpp"
#include "nehari/io.hpp"
#include "nehari/random_fields.hpp"

namespace nehari {

using nlohmann::json;

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void ensure_output_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

json run_two_solution(const Problem& prob, const SolveOptions& opts,
                      TwoSolutionResult& result, Thresholds* thresholds_out) {
  SobolevOptions sopts;
  const SobolevEstimate s_p =
      sobolev_constant(*prob.mesh, prob.params.p, prob.params.p, sopts);
  const SobolevEstimate s_rs = sobolev_constant(*prob.mesh, prob.params.p,
                                                prob.params.r + prob.params.s, sopts);
  json thresholds_json;
  Thresholds th;
  bool have_thresholds = false;
  try {
    th = m0_empty_thresholds(prob.weights, s_rs, s_p, prob.params);
    thresholds_json = thresholds_to_json(th);
    have_thresholds = true;
  } catch (const FormulaDegeneracyError& e) {
    thresholds_json = json{{"error", e.what()}};
  }
  if (thresholds_out && have_thresholds) *thresholds_out = th;
  result = two_solution_search(prob.mesh, prob.weights, prob.params, opts, 1e-10,
                               have_thresholds ? &th : nullptr);
  return thresholds_json;
}

json branch_to_json(const BranchOutcome& out) {
  json doc;
  doc["available"] = out.available;
  if (out.available) {
    doc["alpha"] = out.report.alpha;
    doc["residual"] = out.report.residual;
    doc["iterations"] = out.report.iterations;
    doc["positive"] = out.positivity.positive;
    doc["min_u"] = out.positivity.min_u;
    doc["min_v"] = out.positivity.min_v;
    doc["positivity_restarted"] = out.positivity.restarted;
  } else {
    doc["failure"] = out.failure;
  }
  return doc;
}

// ---- gradient checks used by run_check ----------------------------------

// Central finite differences of the discrete energy in each interior nodal
// direction; step 1e-6.
PairField fd_energy_gradient(const PairField& pair, const WeightSet& ws,
                             const Params& params) {
  const double delta = 1e-6;
  const Mesh& m = *pair.u.mesh;
  PairField g{zero_field(pair.u.mesh), zero_field(pair.u.mesh)};
  PairField work = pair;
  for (int comp = 0; comp < 2; ++comp) {
    Field& wf = comp == 0 ? work.u : work.v;
    Field& gf = comp == 0 ? g.u : g.v;
    for (int i = 0; i < m.node_count(); ++i) {
      if (m.boundary[i]) continue;
      const double saved = wf.values[i];
      wf.values[i] = saved + delta;
      const double jp = energy_breakdown(work, ws, params).J;
      wf.values[i] = saved - delta;
      const double jm = energy_breakdown(work, ws, params).J;
      wf.values[i] = saved;
      gf.values[i] = (jp - jm) / (2.0 * delta);
    }
  }
  return g;
}

double relative_gradient_error(const PairField& pair, const WeightSet& ws,
                               const Params& params) {
  const PairField analytic = weak_gradient(pair, ws, params);
  const PairField fd = fd_energy_gradient(pair, ws, params);
  double diff2 = 0.0, ref2 = 0.0;
  const Mesh& m = *pair.u.mesh;
  for (int i = 0; i < m.node_count(); ++i) {
    if (m.boundary[i]) continue;
    const double du = analytic.u.values[i] - fd.u.values[i];
    const double dv = analytic.v.values[i] - fd.v.values[i];
    diff2 += du * du + dv * dv;
    ref2 += analytic.u.values[i] * analytic.u.values[i] +
            analytic.v.values[i] * analytic.v.values[i];
  }
  if (!(ref2 > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(diff2 / ref2);
}

// tent with a flat mid section; exercises zero-gradient elements
std::vector<double> plateau_values(const Mesh& m) {
  double x0 = m.xs[0], x1 = m.xs[0];
  for (double x : m.xs) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
  }
  std::vector<double> vals(m.node_count());
  for (int i = 0; i < m.node_count(); ++i) {
    const double xh = (m.xs[i] - x0) / (x1 - x0);
    double v = std::min({2.0 * xh, 0.5, 2.0 * (1.0 - xh)});
    if (m.dim == 2) {
      double y0 = m.ys[0], y1 = m.ys[0];
      for (double y : m.ys) {
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
      const double yh = (m.ys[i] - y0) / (y1 - y0);
      v *= std::min({2.0 * yh, 0.5, 2.0 * (1.0 - yh)}) * 2.0;
    }
    vals[i] = v;
  }
  return vals;
}

struct CheckRow {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

} // namespace

std::vector<double> parse_grid(const std::string& spec) {
  double a = 0.0, b = 0.0;
  int n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 ||
      !(is >> std::ws).eof())
    throw ConfigError("grid spec must be a:b:n with n >= 1, got: " + spec);
  std::vector<double> vals;
  if (n == 1) {
    vals.push_back(a);
  } else {
    for (int i = 0; i < n; ++i) vals.push_back(a + (b - a) * i / (n - 1));
  }
  return vals;
}

int thread_cap() {
  if (const char* env = std::getenv("NEHARI_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

int run_solve(const RunConfig& cfg, std::ostream& log) {
  const Problem prob = build_problem(cfg);
  ensure_output_dir(cfg);

  TwoSolutionResult result;
  const json thresholds_json = run_two_solution(prob, cfg.solve, result, nullptr);

  json summary;
  summary["thresholds"] = thresholds_json;
  summary["inside_thresholds"] = result.inside_thresholds;
  if (!result.warning.empty()) {
    summary["warning"] = result.warning;
    log << "warning: " << result.warning << "\n";
  }
  summary["plus"] = branch_to_json(result.plus);
  summary["minus"] = branch_to_json(result.minus);

  for (const Branch branch : {Branch::Plus, Branch::Minus}) {
    const BranchOutcome& out = branch == Branch::Plus ? result.plus : result.minus;
    const std::string stem = branch == Branch::Plus ? "plus" : "minus";
    if (!out.available) continue;
    json rep = solve_report_to_json(out.report);
    rep["positivity_certificate"] = positivity_to_json(out.positivity);
    rep["energy"] = energy_to_json(
        energy_breakdown(out.report.pair, prob.weights, prob.params));
    write_file(out_path(cfg, "solve_" + stem + ".json"), rep.dump(2) + "\n");
    write_file(out_path(cfg, "solution_" + stem + ".csv"),
               solution_to_csv(out.report.pair));
  }

  if (result.plus.available && result.minus.available) {
    summary["alpha_plus"] = result.plus.report.alpha;
    summary["alpha_minus"] = result.minus.report.alpha;
    summary["distinctness"] = result.distinctness;
  }
  const bool ok = result.plus.available && result.minus.available &&
                  result.plus.positivity.positive && result.minus.positivity.positive &&
                  result.distinctness > 0.0;
  summary["success"] = ok;
  summary["timestamp"] = utc_timestamp();
  write_file(out_path(cfg, "summary.json"), summary.dump(2) + "\n");

  log << "plus branch:  "
      << (result.plus.available ? "alpha = " + format_double(result.plus.report.alpha)
                                : "FAILED: " + result.plus.failure)
      << "\n";
  log << "minus branch: "
      << (result.minus.available
              ? "alpha = " + format_double(result.minus.report.alpha)
              : "FAILED: " + result.minus.failure)
      << "\n";
  if (result.plus.available && result.minus.available)
    log << "distinctness (sup norm): " << format_double(result.distinctness) << "\n";
  return ok ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, const std::string& lambda_grid,
              const std::string& mu_grid, std::ostream& log) {
  const std::vector<double> lambdas = parse_grid(lambda_grid);
  const std::vector<double> mus = parse_grid(mu_grid);

  // validate the base problem once; per-cell (lambda, mu) may still be bad
  RunConfig base = cfg;
  if (base.params.lambda == 0.0 && base.params.mu == 0.0) base.params.lambda = 1.0;
  const Problem prob = build_problem(base);
  ensure_output_dir(cfg);

  SobolevOptions sopts;
  const SobolevEstimate s_p =
      sobolev_constant(*prob.mesh, prob.params.p, prob.params.p, sopts);
  const SobolevEstimate s_rs = sobolev_constant(*prob.mesh, prob.params.p,
                                                prob.params.r + prob.params.s, sopts);
  Thresholds th;
  bool have_th = false;
  try {
    th = m0_empty_thresholds(prob.weights, s_rs, s_p, prob.params);
    have_th = true;
  } catch (const FormulaDegeneracyError&) {
  }

  struct Cell {
    double lambda, mu;
    std::string row;
  };
  std::vector<Cell> cells;
  for (double lam : lambdas)
    for (double mu : mus) cells.push_back({lam, mu, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      Cell& cell = cells[k];
      Params params = prob.params;
      params.lambda = cell.lambda;
      params.mu = cell.mu;
      std::ostringstream row;
      row << format_double(cell.lambda) << ',' << format_double(cell.mu) << ',';
      try {
        validate_params(params);
        TwoSolutionResult r =
            two_solution_search(prob.mesh, prob.weights, params, cfg.solve, 1e-10,
                                have_th ? &th : nullptr);
        const char* status = (r.plus.available && r.minus.available) ? "ok"
                             : r.plus.available                      ? "minus-failed"
                             : r.minus.available                     ? "plus-failed"
                                                                     : "both-failed";
        row << status << ',' << (r.plus.available ? 1 : 0) << ','
            << (r.plus.available ? format_double(r.plus.report.alpha) : "") << ','
            << (r.plus.available && r.plus.positivity.positive ? 1 : 0) << ','
            << (r.minus.available ? 1 : 0) << ','
            << (r.minus.available ? format_double(r.minus.report.alpha) : "") << ','
            << (r.minus.available && r.minus.positivity.positive ? 1 : 0) << ','
            << ((r.plus.available && r.minus.available)
                    ? format_double(r.distinctness)
                    : "");
      } catch (const ConfigError&) {
        row << "invalid-hypothesis,0,,0,0,,0,";
      } catch (const std::exception&) {
        row << "cell-error,0,,0,0,,0,";
      }
      cell.row = row.str();
    }
  };

  const int threads = std::min<int>(thread_cap(), static_cast<int>(cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ostringstream csv;
  csv << "lambda,mu,status,converged_plus,alpha_plus,positive_plus,"
         "converged_minus,alpha_minus,positive_minus,distinctness\n";
  for (const Cell& cell : cells) csv << cell.row << '\n';
  write_file(out_path(cfg, "sweep.csv"), csv.str());
  log << "sweep: " << cells.size() << " cells -> " << out_path(cfg, "sweep.csv")
      << "\n";
  return 0;
}

int run_fiber(const RunConfig& cfg, const std::string& direction, std::ostream& log) {
  const Problem prob = build_problem(cfg);
  ensure_output_dir(cfg);

  PairField dir{zero_field(prob.mesh), zero_field(prob.mesh)};
  if (direction == "plus" || direction == "minus") {
    const Branch branch = direction == "plus" ? Branch::Plus : Branch::Minus;
    dir = initial_guess(branch, prob.mesh, prob.weights, prob.params,
                        cfg.solve.rng_seed, cfg.solve.multistart_count);
  } else {
    dir = solution_from_csv(prob.mesh, direction);
  }

  const FiberCoefficients c = fiber_coefficients(dir, prob.weights, prob.params);

  FiberRootOptions opts;
  std::ostringstream csv;
  csv << "t,phi,dphi\n";
  const double lmin = std::log(opts.t_min), lmax = std::log(opts.t_max);
  for (int i = 0; i < opts.grid_points; ++i) {
    const double t = std::exp(lmin + (lmax - lmin) * i / (opts.grid_points - 1));
    csv << format_double(t) << ',' << format_double(fiber_value(t, c, prob.params))
        << ',' << format_double(fiber_derivative(t, c, prob.params)) << '\n';
  }
  write_file(out_path(cfg, "fiber.csv"), csv.str());

  json roots_doc;
  roots_doc["coefficients"] = {{"a1", c.a1}, {"a2", c.a2}, {"a3", c.a3}};
  int code = 0;
  try {
    json roots = json::array();
    for (const FiberRoot& root : fiber_roots(c, prob.params, opts))
      roots.push_back({{"t", root.t},
                       {"second_derivative", root.second_derivative},
                       {"branch", branch_name(root.branch)}});
    roots_doc["roots"] = std::move(roots);
  } catch (const M0EncounterError& e) {
    roots_doc["degenerate"] = e.what();
    code = 1;
  }
  write_file(out_path(cfg, "roots.json"), roots_doc.dump(2) + "\n");
  log << "fiber table -> " << out_path(cfg, "fiber.csv") << "\n";
  return code;
}

int run_sobolev(const RunConfig& cfg, double l, std::ostream& log) {
  const Problem prob = build_problem(cfg);
  ensure_output_dir(cfg);
  const SobolevEstimate est = sobolev_constant(*prob.mesh, prob.params.p, l, {});
  write_file(out_path(cfg, "sobolev.json"), sobolev_to_json(est).dump(2) + "\n");
  log << "S_" << l << " = " << format_double(est.value)
      << (est.converged ? "" : "  (unconverged)") << "\n";
  return 0;
}

int run_thresholds(const RunConfig& cfg, std::ostream& log) {
  const Problem prob = build_problem(cfg);
  ensure_output_dir(cfg);
  SobolevOptions sopts;
  const SobolevEstimate s_p =
      sobolev_constant(*prob.mesh, prob.params.p, prob.params.p, sopts);
  const SobolevEstimate s_rs = sobolev_constant(*prob.mesh, prob.params.p,
                                                prob.params.r + prob.params.s, sopts);
  const Thresholds th = m0_empty_thresholds(prob.weights, s_rs, s_p, prob.params);
  write_file(out_path(cfg, "thresholds.json"), thresholds_to_json(th).dump(2) + "\n");
  log << "lambda0 = " << format_double(th.lambda0)
      << ", mu0 = " << format_double(th.mu0) << "\n";
  return 0;
}

int run_check(const RunConfig& cfg, std::ostream& log) {
  const Problem prob = build_problem(cfg);
  ensure_output_dir(cfg);
  std::vector<CheckRow> rows;
  std::mt19937_64 rng(mix_seed(cfg.solve.rng_seed, 0xc0ffee));

  auto push = [&](const std::string& name, double measured, double threshold) {
    rows.push_back({name, std::isfinite(measured) && measured <= threshold, measured,
                    threshold});
  };

  { // mesh measure
    double total = 0.0;
    for (double me : prob.mesh->measure) total += me;
    push("mesh-measure", std::abs(total - prob.mesh->domain_measure) /
                             prob.mesh->domain_measure,
         1e-12);
  }

  { // quadrature linearity
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const auto s1 = random_smooth_values(*prob.mesh, rng);
      const auto s2 = random_smooth_values(*prob.mesh, rng);
      std::uniform_real_distribution<double> co(-2.0, 2.0);
      const double a = co(rng), b = co(rng);
      std::vector<double> combo(s1.size());
      for (std::size_t i = 0; i < s1.size(); ++i) combo[i] = a * s1[i] + b * s2[i];
      const double lhs = integrate_node_function(*prob.mesh, combo);
      const double rhs = a * integrate_node_function(*prob.mesh, s1) +
                         b * integrate_node_function(*prob.mesh, s2);
      worst = std::max(worst,
                       std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-30));
    }
    push("quadrature-linearity", worst, 1e-12);
  }

  { // gradient versus finite differences, including a flat-gradient pair
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
      const PairField pair = random_smooth_pair(prob.mesh, rng);
      worst = std::max(worst, relative_gradient_error(pair, prob.weights, prob.params));
    }
    PairField plateau = make_pair(prob.mesh, plateau_values(*prob.mesh),
                                  plateau_values(*prob.mesh));
    const double pe = relative_gradient_error(plateau, prob.weights, prob.params);
    worst = std::isfinite(pe) ? std::max(worst, pe)
                              : std::numeric_limits<double>::infinity();
    push("gradient-fd", worst, 1e-4);
  }

  { // psi identity: <J'(u,v), (u,v)> equals the constraint value
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const PairField pair = random_smooth_pair(prob.mesh, rng);
      const EnergyBreakdown eb = energy_breakdown(pair, prob.weights, prob.params);
      const PairField grad = weak_gradient(pair, prob.weights, prob.params);
      double dot = 0.0;
      for (int i = 0; i < prob.mesh->node_count(); ++i)
        dot += grad.u.values[i] * pair.u.values[i] +
               grad.v.values[i] * pair.v.values[i];
      worst = std::max(worst, std::abs(dot - eb.psi) / (1.0 + std::abs(eb.psi)));
    }
    push("psi-identity", worst, 1e-10);
  }

  { // both algebraic forms of the pairing on projected pairs
    double worst = 0.0;
    int projected = 0;
    const double rs = prob.params.r + prob.params.s;
    for (int k = 0; k < 20 && projected < 5; ++k) {
      const PairField pair = random_smooth_pair(prob.mesh, rng);
      for (Branch branch : {Branch::Plus, Branch::Minus}) {
        try {
          const PairField on = project_to_branch(pair, branch, prob.weights, prob.params);
          const EnergyBreakdown eb = energy_breakdown(on, prob.weights, prob.params);
          const double form2 = (prob.params.p - prob.params.q) * eb.weight_term +
                               (prob.params.p - rs) * eb.coupling_term;
          worst = std::max(worst, std::abs(eb.pairing - form2) /
                                      (1.0 + std::abs(eb.pairing)));
          ++projected;
        } catch (const Error&) {
        }
      }
    }
    push("pairing-identity", worst, 1e-10);
  }

  { // fiber scaling identity
    double worst = 0.0;
    std::uniform_real_distribution<double> ts(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      const PairField pair = random_smooth_pair(prob.mesh, rng);
      FiberCoefficients c;
      try {
        c = fiber_coefficients(pair, prob.weights, prob.params);
      } catch (const DegenerateDirectionError&) {
        continue;
      }
      const double t = std::pow(10.0, ts(rng));
      const double phi = fiber_value(t, c, prob.params);
      const double direct =
          energy_breakdown(scale_pair(pair, t), prob.weights, prob.params).J;
      worst = std::max(worst, std::abs(phi - direct) / (1.0 + std::abs(phi)));
    }
    push("scaling-identity", worst, 1e-12);
  }

  { // p-homogeneity of the norm
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const PairField pair = random_smooth_pair(prob.mesh, rng);
      const double n1 = pair_norm_p(pair, prob.params);
      const double n2 = pair_norm_p(scale_pair(pair, 2.0), prob.params);
      const double expect = std::pow(2.0, prob.params.p) * n1;
      if (expect > 0.0) worst = std::max(worst, std::abs(n2 - expect) / expect);
    }
    push("norm-homogeneity", worst, 1e-14);
  }

  { // discrete Sobolev embedding with the estimated constants
    for (double l : {prob.params.q, prob.params.r + prob.params.s}) {
      const SobolevEstimate est = sobolev_constant(*prob.mesh, prob.params.p, l, {});
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        const PairField pair = random_smooth_pair(prob.mesh, rng);
        // element-mean of |u|^l: the same rule sobolev_quotient integrates
        double lhs = 0.0;
        {
          const int nv = prob.mesh->verts_per_elem();
          for (int e = 0; e < prob.mesh->elem_count(); ++e) {
            double ub = 0.0, vb = 0.0;
            for (int kk = 0; kk < nv; ++kk) {
              ub += pair.u.values[prob.mesh->elems[e][kk]];
              vb += pair.v.values[prob.mesh->elems[e][kk]];
            }
            ub /= nv;
            vb /= nv;
            lhs += prob.mesh->measure[e] * (std::pow(std::abs(ub), l) +
                                            std::pow(std::abs(vb), l));
          }
        }
        const double norm_p = pair_norm_p(pair, prob.params);
        const double rhs = std::pow(est.value, -l / prob.params.p) *
                           std::pow(norm_p, l / prob.params.p);
        worst = std::max(worst, (lhs - rhs) / (std::abs(rhs) + 1e-30));
      }
      std::ostringstream name;
      name << "sobolev-embedding-l" << l;
      push(name.str(), worst, 1e-10);
    }
  }

  { // branch sign conditions
    bool ok = true;
    int seen = 0;
    for (int k = 0; k < 30 && seen < 10; ++k) {
      const PairField pair = random_smooth_pair(prob.mesh, rng);
      for (Branch branch : {Branch::Plus, Branch::Minus}) {
        try {
          const PairField on = project_to_branch(pair, branch, prob.weights, prob.params);
          const EnergyBreakdown eb = energy_breakdown(on, prob.weights, prob.params);
          const NehariClass nc = classify(on, prob.weights, prob.params);
          if (nc.label == NehariLabel::Plus && !(eb.weight_term > 0.0)) ok = false;
          if (nc.label == NehariLabel::Minus && !(eb.coupling_term > 0.0)) ok = false;
          ++seen;
        } catch (const Error&) {
        }
      }
    }
    rows.push_back({"branch-signs", ok && seen > 0, ok ? 0.0 : 1.0, 0.5});
  }

  bool all = true;
  json doc;
  json checks = json::array();
  for (const CheckRow& row : rows) {
    all = all && row.pass;
    checks.push_back({{"name", row.name},
                      {"pass", row.pass},
                      {"measured", row.measured},
                      {"threshold", row.threshold}});
    log << (row.pass ? "PASS" : "FAIL") << "  " << row.name
        << "  measured=" << format_double(row.measured)
        << " threshold=" << format_double(row.threshold) << "\n";
  }
  doc["checks"] = std::move(checks);
  doc["all_pass"] = all;
  write_file(out_path(cfg, "check.json"), doc.dump(2) + "\n");
  return all ? 0 : 1;
}

} // namespace nehari
