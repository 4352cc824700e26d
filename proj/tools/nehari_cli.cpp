#include <iostream>

#include <CLI11.hpp>

#include "nehari/errors.hpp"
#include "nehari/runner.hpp"

namespace {

// 2 = config/input validation failure, 1 = runtime failure, 0 = success
int dispatch(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const nehari::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nehari::InvalidMeshError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return 2;
  } catch (const nehari::HypothesisError& e) {
    std::cerr << "hypothesis error: " << e.what() << "\n";
    return 2;
  } catch (const nehari::ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return 2;
  } catch (const nehari::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const nehari::DegenerateDirectionError& e) {
    std::cerr << "direction error: " << e.what() << "\n";
    return 2;
  } catch (const nehari::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const nehari::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-branch constrained minimizer for p-Laplacian systems with "
               "sign-changing weights"};
  app.require_subcommand(1);

  std::string config_path;
  std::string lambda_grid, mu_grid, direction;
  double l_exponent = 2.0;

  CLI::App* solve = app.add_subcommand("solve", "run both branch solves");
  solve->add_option("config", config_path, "config file")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "solve over a (lambda, mu) grid");
  sweep->add_option("config", config_path, "config file")->required();
  sweep->add_option("--lambda", lambda_grid, "lambda grid a:b:n")->required();
  sweep->add_option("--mu", mu_grid, "mu grid a:b:n")->required();

  CLI::App* fiber = app.add_subcommand("fiber", "emit a fiber-map table and roots");
  fiber->add_option("config", config_path, "config file")->required();
  fiber->add_option("--direction", direction,
                    "plus | minus | path to a solution CSV")
      ->required();

  CLI::App* sobolev = app.add_subcommand("sobolev", "estimate a Sobolev constant");
  sobolev->add_option("config", config_path, "config file")->required();
  sobolev->add_option("--l", l_exponent, "embedding exponent l")->required();

  CLI::App* thresholds =
      app.add_subcommand("thresholds", "degeneracy-exclusion thresholds");
  thresholds->add_option("config", config_path, "config file")->required();

  CLI::App* check = app.add_subcommand("check", "run the invariant suite");
  check->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  return dispatch([&]() -> int {
    const nehari::RunConfig cfg = nehari::load_config_file(config_path);
    if (solve->parsed()) return nehari::run_solve(cfg, std::cout);
    if (sweep->parsed()) return nehari::run_sweep(cfg, lambda_grid, mu_grid, std::cout);
    if (fiber->parsed()) return nehari::run_fiber(cfg, direction, std::cout);
    if (sobolev->parsed()) return nehari::run_sobolev(cfg, l_exponent, std::cout);
    if (thresholds->parsed()) return nehari::run_thresholds(cfg, std::cout);
    if (check->parsed()) return nehari::run_check(cfg, std::cout);
    return 2;
  });
}
