#pragma once

#include <string>

#include <json.hpp>

#include "nehari/functional.hpp"
#include "nehari/solver.hpp"
#include "nehari/weights.hpp"

namespace nehari {

struct MeshSpec {
  int dimension = 1;
  // 1D
  int n = 256;
  double a = 0.0;
  double b = 1.0;
  // 2D
  int nx = 8;
  int ny = 8;
  std::array<double, 4> rect = {0.0, 0.0, 1.0, 1.0};
};

struct RunConfig {
  MeshSpec mesh;
  Params params; // p_star derived when the problem is built
  WeightSpec f, g, h;
  SolveOptions solve;
  std::string output_dir = "out";
};

RunConfig parse_config(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config_file(const std::string& path);

Mesh build_mesh(const MeshSpec& spec);

/// Fully validated problem instance: mesh built, params checked against the
/// exponent chain, weights sampled and sign-hypothesis checked.
struct Problem {
  std::shared_ptr<const Mesh> mesh;
  WeightSet weights;
  Params params;
};

Problem build_problem(const RunConfig& cfg);

} // namespace nehari
