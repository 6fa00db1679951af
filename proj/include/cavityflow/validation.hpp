#pragma once

// Oracle checks shared by the `validate` subcommand and the acceptance binary.

#include "cavityflow/scenario.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cavityflow::validation {

struct CheckResult {
    int id = 0;
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct RandomCase {
    SystemModel model;
    Configuration q;
};

/// Admissible configurations of 1 to 3 bodies (circles, ellipses, stars) in a circular or
/// elliptic cavity, with every separation at least 0.25. Deterministic for a given seed.
std::vector<RandomCase> random_cases(int count, std::uint64_t seed);

/// Off-center disk in a disk cavity with |q'| = 1; `gamma` is the disk circulation.
Scenario geodesic_disk_scenario(double gamma);

/// A disk cavity with no bodies and one unit vortex at distance d from the center.
Scenario image_vortex_scenario(double d, double cavity_radius);

/// Two bodies and three vortex particles; short run used for determinism checks.
Scenario mixed_scenario();

CheckResult annulus_added_mass();
CheckResult annulus_circulation_constant();
CheckResult symmetry_suite(const std::vector<RandomCase>& cases);
CheckResult added_inertia_derivative(const std::vector<RandomCase>& cases);
CheckResult circulation_derivative(const std::vector<RandomCase>& cases);
CheckResult circulation_force(const std::vector<RandomCase>& cases);
CheckResult geodesic_conservation(const RunResult& run);
CheckResult circulation_energy_conservation(const RunResult& run);
CheckResult image_vortex_orbit();
/// `runs` holds end states for dt = 2e-3, 1e-3, 5e-4 and a reference dt = 2.5e-4.
CheckResult rk4_order(const std::vector<SimState>& runs);
CheckResult degenerate_forces();
CheckResult time_reversal();
CheckResult determinism();

/// The static oracle checks (no long time integrations).
std::vector<CheckResult> quick_suite();
/// Every acceptance criterion, in order 1 to 13. `report` sees each result as it completes.
std::vector<CheckResult> full_suite(
    const std::function<void(const CheckResult&)>& report = {});

}  // namespace cavityflow::validation
