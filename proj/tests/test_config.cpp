#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "nehari/config.hpp"
#include "nehari/errors.hpp"
#include "nehari/io.hpp"
#include "nehari/runner.hpp"

using namespace nehari;
using nlohmann::json;

namespace {

json canonical_doc() {
  return json::parse(R"({
    "mesh": {"dimension": 1, "n": 256, "a": 0.0, "b": 1.0},
    "params": {"p": 2.0, "q": 1.5, "r": 3.0, "s": 3.0,
               "lambda": 0.05, "mu": 0.05, "epsilon_reg": 1e-8},
    "weights": {
      "f": {"family": "sin", "k": 2},
      "g": {"family": "sin", "k": 2},
      "h": {"family": "poly", "coeffs": [-0.3, 1.0]}
    },
    "solve": {"max_iters": 5000, "grad_tol": 1e-8, "step_init": 1.0,
              "armijo_c": 1e-4, "multistart_count": 8, "rng_seed": 42},
    "output_dir": "out"
  })");
}

} // namespace

TEST_CASE("config parses and round-trips") {
  const RunConfig cfg = parse_config(canonical_doc());
  CHECK(cfg.mesh.dimension == 1);
  CHECK(cfg.mesh.n == 256);
  CHECK(cfg.params.q == 1.5);
  CHECK(cfg.solve.rng_seed == 42);
  CHECK(cfg.f.family == WeightSpec::Family::Sin);
  CHECK(cfg.h.family == WeightSpec::Family::Poly);

  // parse -> serialize -> parse is the identity on the serialized form
  const json once = config_to_json(cfg);
  const RunConfig cfg2 = parse_config(once);
  const json twice = config_to_json(cfg2);
  CHECK(once.dump() == twice.dump());
}

TEST_CASE("malformed configs are rejected") {
  json doc = canonical_doc();
  doc.erase("params");
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = canonical_doc();
  doc["weights"]["f"] = {{"family", "mystery"}, {"k", 1}};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = canonical_doc();
  doc["mesh"]["dimension"] = 3;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = canonical_doc();
  doc["mesh"] = {{"dimension", 2}, {"nx", 4}, {"ny", 4}, {"rect", {0.0, 0.0, 1.0}}};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  CHECK_THROWS_AS(load_config_file("no_such_config.json"), ConfigError);
}

TEST_CASE("problem building validates the full hypothesis set") {
  CHECK_NOTHROW(build_problem(parse_config(canonical_doc())));

  json doc = canonical_doc();
  doc["params"]["lambda"] = 0.0;
  doc["params"]["mu"] = 0.0;
  CHECK_THROWS_AS(build_problem(parse_config(doc)), ConfigError);

  doc = canonical_doc();
  doc["weights"]["f"] = {{"family", "const"}, {"c", 1.0}};
  CHECK_THROWS_AS(build_problem(parse_config(doc)), HypothesisError);

  doc = canonical_doc();
  doc["mesh"]["b"] = -1.0;
  CHECK_THROWS_AS(build_problem(parse_config(doc)), InvalidMeshError);

  // 2D with p = 1.2: p* = 3 rejects r + s = 4
  doc = canonical_doc();
  doc["mesh"] = {{"dimension", 2}, {"nx", 4}, {"ny", 4}, {"rect", {0.0, 0.0, 1.0, 1.0}}};
  doc["params"]["p"] = 1.2;
  doc["params"]["q"] = 1.1;
  doc["params"]["r"] = 2.0;
  doc["params"]["s"] = 2.0;
  CHECK_THROWS_AS(build_problem(parse_config(doc)), ConfigError);
}

TEST_CASE("grid specs") {
  const auto g = parse_grid("0:1:5");
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.5));

  const auto single = parse_grid("0.3:0.9:1");
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 0.3);

  CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_grid("nonsense"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:1:5 extra"), ConfigError);
}

TEST_CASE("energy breakdown serialization keys") {
  EnergyBreakdown eb;
  eb.norm_term = 1.0;
  eb.weight_term = 0.25;
  eb.coupling_term = 0.125;
  eb.J = 0.3;
  eb.psi = 0.625;
  eb.pairing = 0.75;
  const auto doc = energy_to_json(eb);
  for (const char* key :
       {"norm_term", "weight_term", "coupling_term", "J", "psi", "pairing"})
    CHECK(doc.contains(key));
  CHECK(doc.at("pairing").get<double>() == 0.75);
}

TEST_CASE("solution CSV round-trip") {
  auto mesh = std::make_shared<const Mesh>(build_interval_mesh(32, 0.0, 1.0));
  std::vector<double> u(mesh->node_count()), v(mesh->node_count());
  for (int i = 0; i < mesh->node_count(); ++i) {
    u[i] = std::sin(M_PI * mesh->xs[i]) / 3.0;
    v[i] = mesh->xs[i] * (1.0 - mesh->xs[i]) * 0.77;
  }
  const PairField pair = make_pair(mesh, u, v);
  const std::string path = "solution_tmp.csv";
  write_file(path, solution_to_csv(pair));
  const PairField back = solution_from_csv(mesh, path);
  for (int i = 0; i < mesh->node_count(); ++i) {
    CHECK(back.u.values[i] == pair.u.values[i]); // %.17g round-trips exactly
    CHECK(back.v.values[i] == pair.v.values[i]);
  }
  std::remove(path.c_str());
}
