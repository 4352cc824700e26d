#include "nehari/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

using nlohmann::json;

json mesh_to_json(const Mesh& mesh) {
  json doc;
  doc["dimension"] = mesh.dim;
  if (mesh.dim == 1) {
    doc["nodes"] = mesh.xs;
  } else {
    json nodes = json::array();
    for (int i = 0; i < mesh.node_count(); ++i)
      nodes.push_back({mesh.xs[i], mesh.ys[i]});
    doc["nodes"] = std::move(nodes);
  }
  json elems = json::array();
  for (const auto& el : mesh.elems) {
    if (mesh.dim == 1)
      elems.push_back({el[0], el[1]});
    else
      elems.push_back({el[0], el[1], el[2]});
  }
  doc["elements"] = std::move(elems);
  json boundary = json::array();
  for (char b : mesh.boundary) boundary.push_back(b != 0);
  doc["boundary"] = std::move(boundary);
  return doc;
}

json energy_to_json(const EnergyBreakdown& eb) {
  return json{{"norm_term", eb.norm_term},     {"weight_term", eb.weight_term},
              {"coupling_term", eb.coupling_term}, {"J", eb.J},
              {"psi", eb.psi},                 {"pairing", eb.pairing}};
}

namespace {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::M0Encounter: return "m0-encounter";
  }
  return "unknown";
}

} // namespace

json solve_report_to_json(const SolveReport& rep) {
  json doc;
  doc["branch"] = branch_name(rep.branch);
  doc["alpha"] = rep.alpha;
  doc["residual"] = rep.residual;
  doc["iterations"] = rep.iterations;
  doc["converged"] = rep.converged;
  doc["status"] = status_name(rep.status);
  doc["positivity"] = {{"min_interior_u", rep.positivity[0]},
                       {"min_interior_v", rep.positivity[1]}};
  doc["seed"] = rep.seed;
  if (!rep.message.empty()) doc["message"] = rep.message;
  json diag = json::array();
  for (const auto& [jv, res] : rep.ps_diagnostic) diag.push_back({jv, res});
  doc["ps_diagnostic"] = std::move(diag);
  return doc;
}

json positivity_to_json(const PositivityCertificate& cert) {
  json doc;
  doc["positive"] = cert.positive;
  doc["min_u"] = cert.min_u;
  doc["min_v"] = cert.min_v;
  doc["restarted"] = cert.restarted;
  if (!cert.positive) {
    doc["witness_node_u"] = cert.witness_node_u;
    doc["witness_node_v"] = cert.witness_node_v;
  }
  return doc;
}

json thresholds_to_json(const Thresholds& th) {
  return json{{"lambda0", th.lambda0},
              {"mu0", th.mu0},
              {"lambda_intercept", th.lambda_intercept},
              {"mu_intercept", th.mu_intercept},
              {"lower_bound_printed", th.lower_bound_printed},
              {"lower_bound_variant", th.lower_bound_variant},
              {"upper_bound_at_threshold", th.upper_bound_at_threshold},
              {"s_p", th.s_p_value},
              {"s_rs", th.s_rs_value}};
}

json sobolev_to_json(const SobolevEstimate& est) {
  return json{{"l", est.l},
              {"p", est.p},
              {"value", est.value},
              {"mesh_resolution", est.mesh_resolution},
              {"iterations_used", est.iterations_used},
              {"converged", est.converged}};
}

json probe_to_json(const ProbeReport& rep) {
  json doc{{"samples", rep.samples},
           {"roots_examined", rep.roots_examined},
           {"degenerate_count", rep.degenerate_count}};
  if (std::isfinite(rep.min_gap))
    doc["min_gap"] = rep.min_gap;
  else
    doc["min_gap"] = nullptr;
  return doc;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string solution_to_csv(const PairField& pair) {
  const Mesh& m = *pair.u.mesh;
  std::ostringstream os;
  os << (m.dim == 1 ? "x,u,v\n" : "x,y,u,v\n");
  for (int i = 0; i < m.node_count(); ++i) {
    os << format_double(m.xs[i]) << ',';
    if (m.dim == 2) os << format_double(m.ys[i]) << ',';
    os << format_double(pair.u.values[i]) << ',' << format_double(pair.v.values[i])
       << '\n';
  }
  return os.str();
}

PairField solution_from_csv(std::shared_ptr<const Mesh> mesh, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open solution file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty solution file: " + path);
  std::vector<double> u, v;
  const int cols = mesh->dim == 1 ? 3 : 4;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != cols)
      throw ShapeError("solution file row has wrong column count");
    u.push_back(row[cols - 2]);
    v.push_back(row[cols - 1]);
  }
  if (static_cast<int>(u.size()) != mesh->node_count())
    throw ShapeError("solution file row count does not match the mesh");
  return make_pair(std::move(mesh), std::move(u), std::move(v));
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << contents;
}

} // namespace nehari
