// Command-line front end: run, validate, derivatives, sweep.

#include "cavityflow/errors.hpp"
#include "cavityflow/flows.hpp"
#include "cavityflow/oracles.hpp"
#include "cavityflow/outputs.hpp"
#include "cavityflow/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

using namespace cavityflow;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitCollision = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitValidation = 4;
constexpr int kExitParticleEscape = 5;

int exit_code(RunStatus status) {
    switch (status) {
        case RunStatus::completed:
            return 0;
        case RunStatus::collision:
            return kExitCollision;
        case RunStatus::accuracy_failure:
            return kExitAccuracy;
        case RunStatus::particle_escape:
            return kExitParticleEscape;
    }
    return kExitUsage;
}

int cmd_run(const std::string& path, const std::string& output) {
    Scenario s = parse_scenario(path);
    if (!output.empty()) s.output.directory = output;
    const SystemModel model = build_model(s);
    const SimState start = initial_state(s);
    spdlog::info("running {} bodies, {} particles, dt = {}, T = {} ({} kernels)",
                 model.body_count(), start.particles.size(), s.integrator.dt, s.integrator.T,
                 kernels::active_kernels().name);
    const RunResult result = run_simulation(model, start, integrator_settings(s));
    for (const std::string& file : write_outputs(s, model, start, result))
        spdlog::info("wrote {}", file);
    fmt::print("status {}  t {:.6g}  steps {}  energy drift {:.3e}  min separation {:.4g}  "
               "wall {:.2f} s\n",
               to_string(result.status), result.final_state.t, result.steps,
               result.energy_drift, result.min_separation, result.wall_seconds);
    return exit_code(result.status);
}

void print_check(const validation::CheckResult& r) {
    fmt::print("{:>2}  {:<4}  {:<52}  {:>11.3e}  <= {:<9.1e}  {}\n", r.id,
               r.passed ? "PASS" : "FAIL", r.name, r.measured, r.tolerance, r.detail);
    std::fflush(stdout);
}

int cmd_validate(bool full) {
    fmt::print("id  result  check{:<47}  measured     tolerance  detail\n", "");
    std::vector<validation::CheckResult> results;
    if (full) {
        results = validation::full_suite(print_check);
    } else {
        results = validation::quick_suite();
        for (const auto& r : results) print_check(r);
    }
    int failed = 0;
    for (const auto& r : results) failed += !r.passed;
    fmt::print("{} of {} checks passed\n", results.size() - failed, results.size());
    return failed ? kExitValidation : 0;
}

int cmd_derivatives(const std::string& path, double step) {
    const Scenario s = parse_scenario(path);
    const SystemModel model = build_model(s);
    const Configuration q(initial_state(s).q);
    if (model.body_count() == 0) {
        fmt::print("no bodies: nothing to differentiate\n");
        return 0;
    }
    const auto disc = model.discretize(q);
    const FlowBasis basis(disc, VortexParticleSet{}, true);
    const Tensor3 dm = grad_added_inertia(basis);
    const Tensor3 dc = grad_C(basis);
    const oracles::FdOptions opts{step, true};
    const Tensor3 dm_fd = oracles::fd_gradient(
        [&](const Configuration& x) {
            return added_inertia(FlowBasis(model.discretize(x), VortexParticleSet{}, false))
                .matrix;
        },
        q, opts);
    const Tensor3 dc_fd = oracles::fd_gradient(
        [&](const Configuration& x) { return circulation_basis(model.discretize(x)).constants; },
        q, opts);

    fmt::print("{:>3}  {:>5}  {:>14}  {:>12}  {:>14}  {:>12}\n", "k", "label", "max|dM^a/dq_k|",
               "|bdry - FD|", "max|dC/dq_k|", "|bdry - FD|");
    double worst_m = 0.0, worst_c = 0.0;
    const char* coord[3] = {"x", "y", "th"};
    for (int k = 0; k < q.size(); ++k) {
        double mag_m = 0.0, err_m = 0.0, mag_c = 0.0, err_c = 0.0;
        for (int i = 0; i < dm.dim0(); ++i)
            for (int j = 0; j < dm.dim1(); ++j) {
                mag_m = std::max(mag_m, std::abs(dm(i, j, k)));
                err_m = std::max(err_m, std::abs(dm(i, j, k) - dm_fd(i, j, k)));
            }
        for (int i = 0; i < dc.dim0(); ++i)
            for (int j = 0; j < dc.dim1(); ++j) {
                mag_c = std::max(mag_c, std::abs(dc(i, j, k)));
                err_c = std::max(err_c, std::abs(dc(i, j, k) - dc_fd(i, j, k)));
            }
        worst_m = std::max(worst_m, err_m);
        worst_c = std::max(worst_c, err_c);
        fmt::print("{:>3}  {:>5}  {:>14.6e}  {:>12.3e}  {:>14.6e}  {:>12.3e}\n", k + 1,
                   fmt::format("{}{}", coord[k % 3], k / 3 + 1), mag_m, err_m, mag_c, err_c);
    }
    const bool ok = worst_m <= 1e-6 && worst_c <= 1e-7;
    fmt::print("max error dM^a/dq {:.3e} (tol 1e-6), dC/dq {:.3e} (tol 1e-7): {}\n", worst_m,
               worst_c, ok ? "PASS" : "FAIL");
    return ok ? 0 : kExitValidation;
}

struct SweepRow {
    double value = 0.0;
    std::string status, message;
    long steps = 0;
    double energy_drift = NAN, kinetic_drift = NAN, min_separation = NAN, wall = NAN;
};

int cmd_sweep(const std::string& path, const std::string& pointer, double from, double to,
              int count, int jobs, const std::string& output) {
    if (count < 1) throw ValidationError("--count: must be at least 1");
    const Scenario base = parse_scenario(path);
    const nlohmann::json doc = nlohmann::json::parse(scenario_to_json(base));
    const nlohmann::json::json_pointer ptr(pointer);
    if (!doc.contains(ptr) || !doc.at(ptr).is_number())
        throw ValidationError("--param: " + pointer + " does not name a numeric scenario field");
    const bool integer = doc.at(ptr).is_number_integer();
    const std::filesystem::path root = output.empty() ? base.output.directory : output;

    // Build and validate every variant up front so that bad values fail before any run.
    std::vector<Scenario> variants;
    std::vector<SweepRow> rows(count);
    for (int i = 0; i < count; ++i) {
        const double value = count == 1 ? from : from + (to - from) * i / (count - 1);
        nlohmann::json variant = doc;
        if (integer)
            variant[ptr] = std::lround(value);
        else
            variant[ptr] = value;
        variant["output"]["directory"] = (root / fmt::format("run_{:03}", i)).string();
        variants.push_back(parse_scenario_text(variant.dump()));
        rows[i].value = integer ? static_cast<double>(std::lround(value)) : value;
    }

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::string first_error;
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                const Scenario& s = variants[i];
                const SystemModel model = build_model(s);
                const SimState start = initial_state(s);
                const RunResult r = run_simulation(model, start, integrator_settings(s));
                write_outputs(s, model, start, r);
                rows[i] = {rows[i].value, to_string(r.status), r.message, r.steps,
                           r.energy_drift, r.kinetic_drift, r.min_separation, r.wall_seconds};
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                rows[i].status = "error";
                rows[i].message = e.what();
                if (first_error.empty()) first_error = e.what();
            }
        }
    };
    const int threads = std::max(1, std::min(jobs, count));
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::filesystem::create_directories(root);
    const std::filesystem::path table = root / "sweep.csv";
    std::ofstream out(table);
    if (!out) throw IoError("cannot open " + table.string() + " for writing");
    out << "index,value,status,steps,energy_drift,kinetic_drift,min_separation,wall_seconds\n";
    for (int i = 0; i < count; ++i) {
        const SweepRow& r = rows[i];
        out << fmt::format("{},{:.17g},{},{},{:.17g},{:.17g},{:.17g},{:.6f}\n", i, r.value,
                           r.status, r.steps, r.energy_drift, r.kinetic_drift, r.min_separation,
                           r.wall);
        fmt::print("{:>3}  {:>12.6g}  {:<16}  drift {:.3e}  min separation {:.4g}\n", i,
                   r.value, r.status, r.energy_drift, r.min_separation);
    }
    if (!out) throw IoError("failed writing " + table.string());
    spdlog::info("wrote {}", table.string());
    if (!first_error.empty()) {
        spdlog::error("at least one run failed: {}", first_error);
        return kExitUsage;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_st("cavityflow"));

    CLI::App app{"Rigid bodies and point vortices in a perfect fluid inside a cavity"};
    app.require_subcommand(1);
    bool quiet = false, verbose = false;
    app.add_flag("-q,--quiet", quiet, "Only print warnings and errors");
    app.add_flag("-v,--verbose", verbose, "Print debug messages");

    std::string scenario_path, output;
    auto* run = app.add_subcommand("run", "Integrate a scenario and write its output files");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("-o,--output", output, "Override output.directory");

    bool full = false;
    auto* validate = app.add_subcommand("validate", "Run the oracle checks and print a table");
    validate->add_flag("--full", full, "Include the long time-integration checks");

    double fd_step = 1e-4;
    auto* derivatives = app.add_subcommand(
        "derivatives", "Compare boundary-formula shape derivatives with finite differences");
    derivatives->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    derivatives->add_option("--step", fd_step, "Finite-difference step")->capture_default_str();

    std::string pointer;
    double from = 0.0, to = 0.0;
    int count = 5;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* sweep = app.add_subcommand("sweep", "Run a scenario over a range of one scalar");
    sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    sweep->add_option("--param", pointer, "JSON pointer to the varied field, e.g. /bodies/0/gamma")
        ->required();
    sweep->add_option("--from", from, "First value")->required();
    sweep->add_option("--to", to, "Last value")->required();
    sweep->add_option("--count", count, "Number of values")->capture_default_str();
    sweep->add_option("-j,--jobs", jobs, "Concurrent runs")->capture_default_str();
    sweep->add_option("-o,--output", output, "Root directory for run_NNN/ and sweep.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }
    if (quiet) spdlog::set_level(spdlog::level::warn);
    if (verbose) spdlog::set_level(spdlog::level::debug);

    try {
        if (*run) return cmd_run(scenario_path, output);
        if (*validate) return cmd_validate(full);
        if (*derivatives) return cmd_derivatives(scenario_path, fd_step);
        if (*sweep) return cmd_sweep(scenario_path, pointer, from, to, count, jobs, output);
    } catch (const ValidationError& e) {
        spdlog::error("invalid input: {}", e.what());
        return kExitValidation;
    } catch (const CollisionError& e) {
        spdlog::error("{}", e.what());
        return kExitCollision;
    } catch (const AccuracyError& e) {
        spdlog::error("{}", e.what());
        return kExitAccuracy;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
