#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nehari/bounds.hpp"
#include "nehari/errors.hpp"
#include "oracles.hpp"
#include "test_setup.hpp"

using namespace nehari;

TEST_CASE("Rayleigh baseline: S_2 on the unit interval approaches pi^2") {
  const Mesh mesh = build_interval_mesh(256, 0.0, 1.0);
  const SobolevEstimate est = sobolev_constant(mesh, 2.0, 2.0);
  REQUIRE(est.converged);
  const double pi2 = M_PI * M_PI;
  CHECK(std::abs(est.value - pi2) / pi2 < 0.005);
  // the second-difference eigenvalue oracle sits on the same pi^2 target
  const double fd = oracle::fd_dirichlet_smallest_eigenvalue(256, 0.0, 1.0);
  CHECK(std::abs(fd - pi2) / pi2 < 0.005);
  CHECK(std::abs(est.value - fd) / fd < 0.005);
}

TEST_CASE("quotient is scaling invariant for l = p") {
  const Mesh mesh = build_interval_mesh(64, 0.0, 1.0);
  std::mt19937_64 rng(3);
  auto vals = random_smooth_values(mesh, rng);
  std::vector<double> doubled = vals;
  for (double& x : doubled) x *= 2.0;
  CHECK(sobolev_quotient(mesh, vals, 2.0, 2.0) ==
        sobolev_quotient(mesh, doubled, 2.0, 2.0));
}

TEST_CASE("refinement study: the discrete constant approaches pi^2 from above") {
  const double pi2 = M_PI * M_PI;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int n : {32, 64, 128, 256}) {
    const Mesh mesh = build_interval_mesh(n, 0.0, 1.0);
    const SobolevEstimate est = sobolev_constant(mesh, 2.0, 2.0);
    const double gap = std::abs(est.value - pi2);
    CHECK(gap / pi2 < 0.01);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("pair form is kept when it is lower (l < p)") {
  const Mesh mesh = build_interval_mesh(128, 0.0, 1.0);
  const SobolevEstimate est = sobolev_constant(mesh, 2.0, 1.5);
  // equal-pair quotient improves on the single field by 2^{1 - p/l}
  std::vector<double> probe = base_profile(mesh);
  const double single = sobolev_quotient(mesh, probe, 2.0, 1.5);
  CHECK(est.value < single);
  CHECK(est.value > 0.0);
}

TEST_CASE("2D baseline: S_2 on the unit square approaches 2 pi^2") {
  const Mesh mesh = build_rect_mesh(32, 32, {0.0, 0.0, 1.0, 1.0});
  const SobolevEstimate est = sobolev_constant(mesh, 2.0, 2.0);
  REQUIRE(est.converged);
  const double target = 2.0 * M_PI * M_PI;
  CHECK(std::abs(est.value - target) / target < 0.02);
}

TEST_CASE("precondition on the embedding exponent") {
  const Mesh mesh = build_interval_mesh(32, 0.0, 1.0);
  CHECK_THROWS_AS(sobolev_constant(mesh, 2.0, 0.5), PreconditionError);
  // 2D, p = 1.5: p* = 6, so l = 7 is out of range
  const Mesh rect = build_rect_mesh(4, 4, {0.0, 0.0, 1.0, 1.0});
  CHECK_THROWS_AS(sobolev_constant(rect, 1.5, 7.0), PreconditionError);
}

TEST_CASE("discrete embedding inequality holds for random pairs") {
  auto mesh = setup::interval(128);
  const Params prm = setup::canonical_params();
  std::mt19937_64 rng(17);
  for (double l : {prm.q, prm.r + prm.s}) {
    const SobolevEstimate est = sobolev_constant(*mesh, prm.p, l);
    for (int trial = 0; trial < 200; ++trial) {
      const PairField pair = setup::random_pair(mesh, rng);
      const int nv = mesh->verts_per_elem();
      double lhs = 0.0;
      for (int e = 0; e < mesh->elem_count(); ++e) {
        double ub = 0.0, vb = 0.0;
        for (int k = 0; k < nv; ++k) {
          ub += pair.u.values[mesh->elems[e][k]];
          vb += pair.v.values[mesh->elems[e][k]];
        }
        ub /= nv;
        vb /= nv;
        lhs += mesh->measure[e] *
               (std::pow(std::abs(ub), l) + std::pow(std::abs(vb), l));
      }
      const double norm_p = pair_norm_p(pair, prm);
      const double rhs =
          std::pow(est.value, -l / prm.p) * std::pow(norm_p, l / prm.p);
      CHECK(lhs <= rhs + 1e-10 * (1.0 + rhs));
    }
  }
}

TEST_CASE("thresholds: closed form, scaling law, bisection agreement") {
  auto mesh = setup::interval(256);
  const WeightSet ws = setup::canonical_weights(*mesh);
  const Params prm = setup::canonical_params();
  const SobolevEstimate s_p = sobolev_constant(*mesh, prm.p, prm.p);
  const SobolevEstimate s_rs = sobolev_constant(*mesh, prm.p, prm.r + prm.s);

  const Thresholds th = m0_empty_thresholds(ws, s_rs, s_p, prm);
  CHECK(th.lambda0 > 0.0);
  CHECK(th.mu0 > 0.0);
  CHECK(std::isfinite(th.lambda0));
  CHECK(th.lower_bound_printed > 0.0);
  CHECK(th.lower_bound_variant > 0.0);
  CHECK(th.upper_bound_at_threshold ==
        doctest::Approx(th.lower_bound_printed).epsilon(1e-12));

  // doubling |f|_inf halves lambda0 and leaves mu0 alone
  WeightSet doubled = ws;
  for (double& x : doubled.f) x *= 2.0;
  doubled.f_sup *= 2.0;
  const Thresholds th2 = m0_empty_thresholds(doubled, s_rs, s_p, prm);
  CHECK(th2.lambda0 == doctest::Approx(th.lambda0 / 2.0).epsilon(1e-12));
  CHECK(th2.mu0 == doctest::Approx(th.mu0).epsilon(1e-12));
  CHECK(th2.lambda0 < th.lambda0);

  // scalar bisection on "upper == lower" reproduces the lambda intercept
  double lo = 0.0, hi = 1.0;
  while (m0_upper_bound(hi, 0.0, ws, s_p.value, prm) < th.lower_bound_printed) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (m0_upper_bound(mid, 0.0, ws, s_p.value, prm) < th.lower_bound_printed)
      lo = mid;
    else
      hi = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(th.lambda_intercept).epsilon(1e-10));

  // interior of the region: the contradiction holds
  CHECK(m0_upper_bound(th.lambda0 / 2.0, 0.0, ws, s_p.value, prm) <
        th.lower_bound_printed);
  // just inside the box corner as well
  CHECK(m0_upper_bound(th.lambda0 * (1.0 - 1e-9), th.mu0 * (1.0 - 1e-9), ws,
                       s_p.value, prm) < th.lower_bound_printed);

  // degenerate inputs are rejected
  SobolevEstimate zero = s_rs;
  zero.value = 0.0;
  CHECK_THROWS_AS(m0_empty_thresholds(ws, zero, s_p, prm), FormulaDegeneracyError);
}

TEST_CASE("absence probe counts degeneracies instead of throwing") {
  auto mesh = setup::interval(96);
  const WeightSet ws = setup::canonical_weights(*mesh);
  const Params prm = setup::canonical_params();

  const ProbeReport empty = m0_absence_probe(mesh, ws, prm, 0, 1);
  CHECK(empty.samples == 0);
  CHECK(empty.roots_examined == 0);
  CHECK(empty.degenerate_count == 0);

  const ProbeReport rep = m0_absence_probe(mesh, ws, prm, 500, 7);
  CHECK(rep.roots_examined > 0);
  CHECK(rep.degenerate_count == 0);
  CHECK(rep.min_gap > 1e-12);

  // far outside the certified region the probe still completes and reports
  Params wild = prm;
  wild.lambda = 50.0;
  wild.mu = 50.0;
  const ProbeReport outside = m0_absence_probe(mesh, ws, wild, 100, 7);
  CHECK(outside.samples == 100);
  CHECK(outside.degenerate_count >= 0);
}
