#include "nehari/config.hpp"

#include <fstream>

#include "nehari/errors.hpp"

namespace nehari {

using nlohmann::json;

namespace {

WeightSpec parse_weight_spec(const json& doc, const std::string& name) {
  WeightSpec spec;
  if (!doc.is_object())
    throw ConfigError("weight spec for " + name + " must be an object");
  if (doc.contains("file")) {
    spec.family = WeightSpec::Family::File;
    spec.path = doc.at("file").get<std::string>();
    return spec;
  }
  const std::string family = doc.at("family").get<std::string>();
  if (family == "sin") {
    spec.family = WeightSpec::Family::Sin;
    spec.k = doc.at("k").get<double>();
  } else if (family == "const") {
    spec.family = WeightSpec::Family::Const;
    spec.c = doc.at("c").get<double>();
  } else if (family == "poly") {
    spec.family = WeightSpec::Family::Poly;
    spec.coeffs = doc.at("coeffs").get<std::vector<double>>();
  } else {
    throw ConfigError("unknown weight family for " + name + ": " + family);
  }
  return spec;
}

json weight_spec_to_json(const WeightSpec& spec) {
  json doc;
  switch (spec.family) {
    case WeightSpec::Family::Sin:
      doc["family"] = "sin";
      doc["k"] = spec.k;
      break;
    case WeightSpec::Family::Const:
      doc["family"] = "const";
      doc["c"] = spec.c;
      break;
    case WeightSpec::Family::Poly:
      doc["family"] = "poly";
      doc["coeffs"] = spec.coeffs;
      break;
    case WeightSpec::Family::File:
      doc["file"] = spec.path;
      break;
  }
  return doc;
}

} // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  try {
    const json& m = doc.at("mesh");
    cfg.mesh.dimension = m.at("dimension").get<int>();
    if (cfg.mesh.dimension == 1) {
      cfg.mesh.n = m.at("n").get<int>();
      cfg.mesh.a = m.at("a").get<double>();
      cfg.mesh.b = m.at("b").get<double>();
    } else if (cfg.mesh.dimension == 2) {
      cfg.mesh.nx = m.at("nx").get<int>();
      cfg.mesh.ny = m.at("ny").get<int>();
      const auto rect = m.at("rect").get<std::vector<double>>();
      if (rect.size() != 4) throw ConfigError("mesh.rect must have 4 entries");
      cfg.mesh.rect = {rect[0], rect[1], rect[2], rect[3]};
    } else {
      throw ConfigError("mesh.dimension must be 1 or 2");
    }

    const json& p = doc.at("params");
    cfg.params.p = p.at("p").get<double>();
    cfg.params.q = p.at("q").get<double>();
    cfg.params.r = p.at("r").get<double>();
    cfg.params.s = p.at("s").get<double>();
    cfg.params.lambda = p.at("lambda").get<double>();
    cfg.params.mu = p.at("mu").get<double>();
    cfg.params.epsilon_reg = p.value("epsilon_reg", 1e-8);

    const json& w = doc.at("weights");
    cfg.f = parse_weight_spec(w.at("f"), "f");
    cfg.g = parse_weight_spec(w.at("g"), "g");
    cfg.h = parse_weight_spec(w.at("h"), "h");

    if (doc.contains("solve")) {
      const json& s = doc.at("solve");
      cfg.solve.max_iters = s.value("max_iters", cfg.solve.max_iters);
      cfg.solve.grad_tol = s.value("grad_tol", cfg.solve.grad_tol);
      cfg.solve.step_init = s.value("step_init", cfg.solve.step_init);
      cfg.solve.armijo_c = s.value("armijo_c", cfg.solve.armijo_c);
      cfg.solve.multistart_count = s.value("multistart_count", cfg.solve.multistart_count);
      cfg.solve.rng_seed = s.value("rng_seed", cfg.solve.rng_seed);
    }
    cfg.output_dir = doc.value("output_dir", cfg.output_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json doc;
  if (cfg.mesh.dimension == 1) {
    doc["mesh"] = {{"dimension", 1}, {"n", cfg.mesh.n}, {"a", cfg.mesh.a}, {"b", cfg.mesh.b}};
  } else {
    doc["mesh"] = {{"dimension", 2},
                   {"nx", cfg.mesh.nx},
                   {"ny", cfg.mesh.ny},
                   {"rect", cfg.mesh.rect}};
  }
  doc["params"] = {{"p", cfg.params.p},       {"q", cfg.params.q},
                   {"r", cfg.params.r},       {"s", cfg.params.s},
                   {"lambda", cfg.params.lambda}, {"mu", cfg.params.mu},
                   {"epsilon_reg", cfg.params.epsilon_reg}};
  doc["weights"] = {{"f", weight_spec_to_json(cfg.f)},
                    {"g", weight_spec_to_json(cfg.g)},
                    {"h", weight_spec_to_json(cfg.h)}};
  doc["solve"] = {{"max_iters", cfg.solve.max_iters},
                  {"grad_tol", cfg.solve.grad_tol},
                  {"step_init", cfg.solve.step_init},
                  {"armijo_c", cfg.solve.armijo_c},
                  {"multistart_count", cfg.solve.multistart_count},
                  {"rng_seed", cfg.solve.rng_seed}};
  doc["output_dir"] = cfg.output_dir;
  return doc;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

Mesh build_mesh(const MeshSpec& spec) {
  if (spec.dimension == 1) return build_interval_mesh(spec.n, spec.a, spec.b);
  return build_rect_mesh(spec.nx, spec.ny, spec.rect);
}

Problem build_problem(const RunConfig& cfg) {
  auto mesh = std::make_shared<const Mesh>(build_mesh(cfg.mesh));
  Params params = make_params(cfg.params.p, cfg.params.q, cfg.params.r, cfg.params.s,
                              cfg.params.lambda, cfg.params.mu,
                              cfg.params.epsilon_reg, mesh->dim);
  validate_params(params);
  validate_solve_options(cfg.solve);
  WeightSet ws = make_weight_set(*mesh, sample_weight(*mesh, cfg.f),
                                 sample_weight(*mesh, cfg.g),
                                 sample_weight(*mesh, cfg.h));
  validate_sign_hypothesis(ws);
  return Problem{std::move(mesh), std::move(ws), params};
}

} // namespace nehari
