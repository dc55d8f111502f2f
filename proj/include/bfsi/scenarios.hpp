#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bfsi/config.hpp"

namespace bfsi {

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

/// Named configurations used by the verification suite and the CLI.
namespace scenarios {

/// sin(pi y) profile, g0 = 0.5, h0 = 0.2.
SimConfig wave(double K, double h1, int n_cells, double dt, double t_final);

/// Rest state at the target: exact fixed point of the dynamics.
SimConfig equilibrium(double K, double h, int n_cells, double dt, double t_final);

/// Forced run with the oscillating-interface manufactured target.
SimConfig manufactured(Scheme scheme, int n_cells, double dt, double t_final);

}  // namespace scenarios

/// Runs every acceptance criterion at its pinned tolerance; `report` is
/// invoked with each result as it completes (may be empty).
std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& report = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace bfsi
