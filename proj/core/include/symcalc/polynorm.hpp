#pragma once

// Certified sup norms of polynomials on the torus, scaled closed polydisks and
// the l1 ball Delta_n = { z : sum |z_j| <= 1 }.

#include <cstddef>
#include <string>

#include "symcalc/multipoly.hpp"
#include "symcalc/norm_estimate.hpp"

namespace symcalc {

struct Domain {
    enum class Kind { Torus, Polydisk, SimplexBall };

    Kind kind = Kind::Torus;
    std::size_t n = 1;
    double radius = 1.0;

    static Domain torus(std::size_t n) { return {Kind::Torus, n, 1.0}; }
    static Domain polydisk(std::size_t n, double radius);
    static Domain simplex_ball(std::size_t n) { return {Kind::SimplexBall, n, 1.0}; }

    // "torus:n", "polydisk:n:R" or "delta:n".
    static Domain parse(const std::string &descriptor);
    std::string to_string() const;
};

struct SupNormOptions {
    // Points per angle (and barycentric mesh 1/grid on Delta_n).
    int grid = 0;
    // Polydisk/torus: levels of cell bisection. Delta_n: grid doublings.
    int refine = 3;
    // Refinement stops early once a level would exceed this many cells.
    std::size_t max_cells = std::size_t{1} << 22;
    unsigned threads = 1;

    // 256 per angle for n <= 2, 64 for n = 3, fewer beyond.
    static int default_grid(const Domain &dom);
};

NormEstimate sup_norm(const Poly &p, const Domain &dom, const SupNormOptions &opts = {});
NormEstimate sup_norm(const Poly &p, const Domain &dom, int grid, int refine);

// sum |c_alpha| R^|alpha|, an upper bound for the sup over the polydisk of
// radius R.
double coeff_upper_bound(const Poly &p, double radius);

} // namespace symcalc
