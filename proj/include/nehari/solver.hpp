#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nehari/bounds.hpp"
#include "nehari/fibering.hpp"

namespace nehari {

struct SolveOptions {
  int max_iters = 5000;
  double grad_tol = 1e-8; // residual <= grad_tol * (1 + ||pair||^{p-1})
  double step_init = 1.0;
  double armijo_c = 1e-4;
  int multistart_count = 8;
  std::uint64_t rng_seed = 42;
};

void validate_solve_options(const SolveOptions& opts);

enum class SolveStatus { Converged, MaxIterations, Stalled, M0Encounter };

struct SolveReport {
  Branch branch = Branch::Plus;
  PairField pair;
  double alpha = 0.0;    // achieved J value
  double residual = 0.0; // norm of weak_gradient at the final pair
  int iterations = 0;
  std::vector<std::array<double, 2>> ps_diagnostic; // (J, residual) per iterate
  std::array<double, 2> positivity = {0.0, 0.0};    // min interior u, min interior v
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  std::uint64_t seed = 0;
  std::string message;
};

/** Strictly positive interior pair admitting the requested branch: the first
 * Dirichlet eigenfunction shape modulated by seeded positive perturbations,
 * rescaled so the branch root sits near t = 1, then projected onto the
 * branch. Tries `attempts` seeded perturbations before giving up with
 * NoInitialPointError. */
PairField initial_guess(Branch branch, std::shared_ptr<const Mesh> mesh,
                        const WeightSet& ws, const Params& params,
                        std::uint64_t seed, int attempts = 8);

/** Projected descent on the branch: steps along the Riesz-preconditioned
 * negative energy gradient with Armijo backtracking, Dirichlet re-zeroing and
 * fiber re-projection after every step. J is non-increasing over accepted
 * steps and every accepted iterate classifies to the branch. */
SolveReport minimize_on_branch(Branch branch, const PairField& init,
                               const WeightSet& ws, const Params& params,
                               const SolveOptions& opts);

struct PositivityCertificate {
  bool positive = false;
  double min_u = 0.0;
  double min_v = 0.0;
  int witness_node_u = -1; // argmin interior node, meaningful when !positive
  int witness_node_v = -1;
  bool restarted = false; // went through the |u|,|v| re-minimization
  SolveReport report;     // possibly updated by the restart
};

/** Checks min interior nodal values of u and v against tol. If the check
 * fails and the pair has negative parts, restarts once from (|u|, |v|)
 * re-projected onto the branch, re-minimizes, and re-checks. */
PositivityCertificate certify_positivity(const SolveReport& report,
                                         const WeightSet& ws, const Params& params,
                                         const SolveOptions& opts, double tol);

struct BranchOutcome {
  bool available = false; // at least one multistart converged
  SolveReport report;     // best converged report (lowest J, ties by residual)
  PositivityCertificate positivity;
  std::string failure; // nonempty when available == false
};

struct TwoSolutionResult {
  BranchOutcome plus;
  BranchOutcome minus;
  double distinctness = 0.0; // sup-norm distance between the two pairs
  bool inside_thresholds = true;
  std::string warning;
};

/** Runs both branches with multistart and keeps the lowest-J converged report
 * per branch; certifies positivity of each winner. When thresholds are given
 * and (|lambda|, |mu|) falls outside the certified box, a warning is recorded
 * (not an error). Deterministic for fixed options. */
TwoSolutionResult two_solution_search(const std::shared_ptr<const Mesh>& mesh,
                                      const WeightSet& ws, const Params& params,
                                      const SolveOptions& opts,
                                      double positivity_tol = 1e-10,
                                      const Thresholds* thresholds = nullptr);

/// max over nodes of max(|du|, |dv|)
double sup_distance(const PairField& a, const PairField& b);

} // namespace nehari
