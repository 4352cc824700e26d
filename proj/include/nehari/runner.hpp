#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nehari/config.hpp"

namespace nehari {

/// "a:b:n" -> n values from a to b inclusive (n = 1 gives just a).
std::vector<double> parse_grid(const std::string& spec);

/// Parallelism cap for sweep cells; reads NEHARI_THREADS, defaults to the
/// hardware concurrency, never below 1.
int thread_cap();

int run_solve(const RunConfig& cfg, std::ostream& log);
int run_sweep(const RunConfig& cfg, const std::string& lambda_grid,
              const std::string& mu_grid, std::ostream& log);
int run_fiber(const RunConfig& cfg, const std::string& direction, std::ostream& log);
int run_sobolev(const RunConfig& cfg, double l, std::ostream& log);
int run_thresholds(const RunConfig& cfg, std::ostream& log);
int run_check(const RunConfig& cfg, std::ostream& log);

} // namespace nehari
