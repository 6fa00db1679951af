// Runs the thirteen acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria (0 when all pass).

#include "cavityflow/validation.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>

int main() {
    spdlog::set_level(spdlog::level::err);
    int failed = 0;
    auto last = std::chrono::steady_clock::now();
    cavityflow::validation::full_suite([&](const cavityflow::validation::CheckResult& r) {
        const auto now = std::chrono::steady_clock::now();
        const double seconds = std::chrono::duration<double>(now - last).count();
        last = now;
        failed += !r.passed;
        fmt::print("[{}] criterion {:>2}: {} | measured {:.3e}, tolerance {:.1e} | {} | {:.1f} s\n",
                   r.passed ? "PASS" : "FAIL", r.id, r.name, r.measured, r.tolerance, r.detail,
                   seconds);
        std::fflush(stdout);
    });
    fmt::print("{} of 13 criteria passed\n", 13 - failed);
    return failed;
}
