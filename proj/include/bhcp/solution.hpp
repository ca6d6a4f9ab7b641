#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace bhcp {

struct StepTimings {
    double step_a = 0.0;  // seconds
    double step_b = 0.0;
    double step_c = 0.0;
    double total = 0.0;
};

enum class SolveStatus { ok, infeasible };

/// Stacked trajectory y_h = (y^0, ..., y^N) and solve diagnostics.
struct Solution {
    SolveStatus status = SolveStatus::ok;
    std::vector<double> trajectory;
    std::size_t nx = 0;
    double residual = NAN;       // relative full-system residual
    double imag_residue = 0.0;   // ||Im|| / ||Re|| before projection (PinT only)
    StepTimings timings;

    std::size_t levels() const noexcept { return nx ? trajectory.size() / nx : 0; }
    std::span<const double> level(std::size_t n) const { return std::span(trajectory).subspan(n * nx, nx); }
    std::span<const double> initial() const { return level(0); }
    std::span<const double> final() const { return level(levels() - 1); }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    void restart() { start_ = std::chrono::steady_clock::now(); }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace bhcp
