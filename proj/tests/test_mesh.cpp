#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nehari/errors.hpp"
#include "nehari/io.hpp"
#include "nehari/mesh.hpp"
#include "oracles.hpp"

using namespace nehari;

TEST_CASE("interval mesh layout") {
  const Mesh m = build_interval_mesh(4, 0.0, 1.0);
  REQUIRE(m.node_count() == 5);
  const double expect[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i < 5; ++i) CHECK(m.xs[i] == doctest::Approx(expect[i]).epsilon(1e-15));
  CHECK(m.boundary[0] == 1);
  CHECK(m.boundary[4] == 1);
  for (int i = 1; i < 4; ++i) CHECK(m.boundary[i] == 0);
}

TEST_CASE("interval mesh measures") {
  const Mesh m = build_interval_mesh(2, -1.0, 1.0);
  CHECK(m.measure[0] == doctest::Approx(1.0));
  CHECK(m.measure[1] == doctest::Approx(1.0));
  CHECK(m.domain_measure == doctest::Approx(2.0));

  const Mesh fine = build_interval_mesh(100, 0.0, 1.0);
  double total = 0.0;
  for (double me : fine.measure) total += me;
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("invalid interval meshes") {
  CHECK_THROWS_AS(build_interval_mesh(1, 0.0, 1.0), InvalidMeshError);
  CHECK_THROWS_AS(build_interval_mesh(8, 1.0, 1.0), InvalidMeshError);
  CHECK_THROWS_AS(build_interval_mesh(8, 2.0, 1.0), InvalidMeshError);
}

TEST_CASE("rect mesh counts and measure") {
  const Mesh m = build_rect_mesh(2, 2, {0.0, 0.0, 1.0, 1.0});
  CHECK(m.node_count() == 9);
  CHECK(m.elem_count() == 8);
  int boundary = 0;
  for (char b : m.boundary) boundary += b;
  CHECK(boundary == 8);
  double total = 0.0;
  for (double me : m.measure) total += me;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

  const Mesh wide = build_rect_mesh(10, 10, {0.0, 0.0, 2.0, 1.0});
  total = 0.0;
  for (double me : wide.measure) total += me;
  CHECK(std::abs(total - 2.0) <= 1e-12);

  CHECK_THROWS_AS(build_rect_mesh(2, 2, {0.0, 0.0, 0.0, 1.0}), InvalidMeshError);
}

TEST_CASE("validate_mesh catches tampering") {
  Mesh m = build_interval_mesh(8, 0.0, 1.0);
  m.measure[3] = -m.measure[3];
  CHECK_THROWS_AS(validate_mesh(m), InvalidMeshError);
}

TEST_CASE("quadrature basics") {
  const Mesh m = build_interval_mesh(16, 0.0, 1.0);
  std::vector<double> ones(m.node_count(), 1.0);
  CHECK(integrate_node_function(m, ones) == doctest::Approx(1.0).epsilon(1e-14));

  const Mesh fine = build_interval_mesh(100, 0.0, 1.0);
  std::vector<double> xs = fine.xs;
  CHECK(std::abs(integrate_node_function(fine, xs) - 0.5) <= 1e-12);

  std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(integrate_node_function(m, wrong), ShapeError);
}

TEST_CASE("quadrature of x^2 against Richardson-extrapolated trapezoid") {
  const Mesh m = build_interval_mesh(256, 0.0, 1.0);
  std::vector<double> sq(m.node_count());
  for (int i = 0; i < m.node_count(); ++i) sq[i] = m.xs[i] * m.xs[i];
  const double reference =
      oracle::richardson_trapezoid([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(reference == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(std::abs(integrate_node_function(m, sq) - reference) <= 1e-4);
}

TEST_CASE("quadrature linearity") {
  const Mesh m = build_interval_mesh(64, 0.0, 2.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> s1(m.node_count()), s2(m.node_count()), combo(m.node_count());
    const double a = dist(rng) * 3.0, b = dist(rng) * 3.0;
    for (int i = 0; i < m.node_count(); ++i) {
      s1[i] = dist(rng);
      s2[i] = dist(rng);
      combo[i] = a * s1[i] + b * s2[i];
    }
    const double lhs = integrate_node_function(m, combo);
    const double rhs =
        a * integrate_node_function(m, s1) + b * integrate_node_function(m, s2);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
  }
}

TEST_CASE("element gradients of simple fields") {
  const Mesh m = build_interval_mesh(32, 0.0, 1.0);
  // pre-boundary-zeroing test field u = x
  auto g = element_gradients(m, m.xs);
  for (const auto& ge : g) CHECK(ge[0] == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> zero(m.node_count(), 0.0);
  for (const auto& ge : element_gradients(m, zero)) CHECK(ge[0] == 0.0);
}

TEST_CASE("element gradients of the parabola interpolant") {
  const Mesh m = build_interval_mesh(256, 0.0, 1.0);
  std::vector<double> u(m.node_count());
  for (int i = 0; i < m.node_count(); ++i) u[i] = m.xs[i] * (1.0 - m.xs[i]);
  const auto g = element_gradients(m, u);
  for (int e = 0; e < m.elem_count(); ++e) {
    const double mid = 0.5 * (m.xs[m.elems[e][0]] + m.xs[m.elems[e][1]]);
    CHECK(std::abs(g[e][0] - (1.0 - 2.0 * mid)) <= 1e-10);
  }
}

TEST_CASE("gradient linearity under scaling") {
  const Mesh m = build_interval_mesh(40, -1.0, 3.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> u(m.node_count());
  for (double& x : u) x = dist(rng);

  std::vector<double> doubled(u);
  for (double& x : doubled) x *= 2.0;
  const auto g1 = element_gradients(m, u);
  const auto g2 = element_gradients(m, doubled);
  for (int e = 0; e < m.elem_count(); ++e) CHECK(g2[e][0] == 2.0 * g1[e][0]);

  std::vector<double> scaled(u);
  for (double& x : scaled) x *= 1.7;
  const auto g3 = element_gradients(m, scaled);
  for (int e = 0; e < m.elem_count(); ++e)
    CHECK(g3[e][0] == doctest::Approx(1.7 * g1[e][0]).epsilon(1e-14));
}

TEST_CASE("2D gradients are exact for linear fields") {
  const Mesh m = build_rect_mesh(5, 4, {0.0, 0.0, 2.0, 1.0});
  std::vector<double> u(m.node_count());
  for (int i = 0; i < m.node_count(); ++i) u[i] = 3.0 * m.xs[i] - 2.0 * m.ys[i] + 0.5;
  for (const auto& ge : element_gradients(m, u)) {
    CHECK(ge[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(ge[1] == doctest::Approx(-2.0).epsilon(1e-13));
  }
}

TEST_CASE("refinement: quadrature error decays at least quadratically") {
  // smooth integrand sin(pi x), exact integral 2/pi
  const double exact = 2.0 / M_PI;
  double prev_err = 0.0;
  for (int n : {16, 32, 64, 128}) {
    const Mesh m = build_interval_mesh(n, 0.0, 1.0);
    std::vector<double> s(m.node_count());
    for (int i = 0; i < m.node_count(); ++i) s[i] = std::sin(M_PI * m.xs[i]);
    const double err = std::abs(integrate_node_function(m, s) - exact);
    if (n > 16) CHECK(err <= prev_err / 3.5);
    prev_err = err;
  }
}

TEST_CASE("fields enforce Dirichlet zeros") {
  auto mesh = std::make_shared<const Mesh>(build_interval_mesh(10, 0.0, 1.0));
  std::vector<double> vals(mesh->node_count(), 1.0);
  const PairField pair = make_pair(mesh, vals, vals);
  CHECK(pair.u.values.front() == 0.0);
  CHECK(pair.u.values.back() == 0.0);
  CHECK(pair.u.values[3] == 1.0);
  CHECK_THROWS_AS(make_field(mesh, std::vector<double>(3, 0.0)), ShapeError);
}

TEST_CASE("mesh JSON dump") {
  const Mesh m = build_interval_mesh(4, 0.0, 1.0);
  const auto doc = mesh_to_json(m);
  CHECK(doc.at("dimension") == 1);
  CHECK(doc.at("nodes").size() == 5);
  CHECK(doc.at("elements").size() == 4);
  CHECK(doc.at("boundary").size() == 5);
}
