#pragma once

#include <string>

#include <json.hpp>

#include "nehari/bounds.hpp"
#include "nehari/solver.hpp"

namespace nehari {

nlohmann::json mesh_to_json(const Mesh& mesh);
nlohmann::json energy_to_json(const EnergyBreakdown& eb);
nlohmann::json solve_report_to_json(const SolveReport& rep);
nlohmann::json positivity_to_json(const PositivityCertificate& cert);
nlohmann::json thresholds_to_json(const Thresholds& th);
nlohmann::json sobolev_to_json(const SobolevEstimate& est);
nlohmann::json probe_to_json(const ProbeReport& rep);

/// "%.17g" rendering used for every floating-point CSV column.
std::string format_double(double x);

/// Rows "x,u,v" (1D) or "x,y,u,v" (2D) with a header line.
std::string solution_to_csv(const PairField& pair);

/// Reads a solution CSV back into a pair on the given mesh.
PairField solution_from_csv(std::shared_ptr<const Mesh> mesh, const std::string& path);

void write_file(const std::string& path, const std::string& contents);

} // namespace nehari
