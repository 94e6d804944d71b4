#pragma once

#include <cstddef>
#include <string>

namespace symcalc {

// Certified bracket for a supremum: lower is attained at an evaluated point,
// upper adds a rigorous derivative-based slack to the grid maximum.
struct NormEstimate {
    double lower = 0.0;
    double upper = 0.0;

    struct Params {
        std::string domain;
        int grid = 0;
        int refine = 0;
        int depth_reached = 0;
        std::size_t evaluations = 0;
    } params;

    bool contains(double value, double tol = 0.0) const noexcept
    {
        return lower - tol <= value && value <= upper + tol;
    }
};

} // namespace symcalc
