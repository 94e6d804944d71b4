#include <doctest.h>

#include <array>
#include <random>

#include "symcalc/polynorm.hpp"
#include "symcalc/search.hpp"

using namespace symcalc;

TEST_CASE("domain descriptors")
{
    CHECK(Domain::parse("torus:2").kind == Domain::Kind::Torus);
    const Domain d = Domain::parse("polydisk:3:0.5");
    CHECK(d.n == 3);
    CHECK(d.radius == 0.5);
    CHECK(Domain::parse("delta:2").kind == Domain::Kind::SimplexBall);
    CHECK(Domain::parse(d.to_string()).radius == 0.5);
    CHECK_THROWS_AS(Domain::parse("ball:2"), std::invalid_argument);
    CHECK_THROWS_AS(Domain::parse("polydisk:2"), std::invalid_argument);
    CHECK_THROWS_AS(Domain::parse("polydisk:2:-1"), std::invalid_argument);
}

TEST_CASE("sup norm examples")
{
    const auto mono = sup_norm(Poly::monomial({1, 1}), Domain::torus(2));
    CHECK(mono.lower == doctest::Approx(1.0));
    CHECK(mono.contains(1.0, 1e-12));

    const auto p7 = sup_norm(example7_poly(), Domain::polydisk(2, 1.0), 256, 3);
    CHECK(p7.lower >= 5.0 - 1e-12);
    CHECK(p7.upper <= 5.0 + 5e-3);

    Poly lin(2);
    lin.add_term({1, 0}, 1.0);
    lin.add_term({0, 1}, 1.0);
    const auto simplex = sup_norm(lin, Domain::simplex_ball(2));
    CHECK(simplex.contains(1.0, 1e-9));
    CHECK(simplex.upper - simplex.lower < 0.1);
}

TEST_CASE("bracket invariants and monotone refinement")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const Poly p = random_poly(2, 4, CoeffDistribution::Gaussian, rng);
        for (const Domain &dom : {Domain::torus(2), Domain::polydisk(2, 0.7), Domain::simplex_ball(2)}) {
            const int base = dom.kind == Domain::Kind::SimplexBall ? 8 : 32;
            double last_lower = 0.0;
            double last_upper = 1e300;
            for (int refine = 0; refine <= 2; ++refine) {
                const auto e = sup_norm(p, dom, base, refine);
                CHECK(0.0 <= e.lower);
                CHECK(e.lower <= e.upper);
                CHECK(e.lower >= last_lower - 1e-12);
                CHECK(e.upper <= last_upper + 1e-12);
                last_lower = e.lower;
                last_upper = e.upper;
            }
        }
    }
}

TEST_CASE("coefficient bound")
{
    Poly lin(2);
    lin.add_term({1, 0}, 1.0);
    lin.add_term({0, 1}, 1.0);
    CHECK(coeff_upper_bound(lin, 1.0) == 2.0);
    CHECK(coeff_upper_bound(example7_poly(), 1.0) == 9.0);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Poly p = random_poly(2, 5, CoeffDistribution::UniformDisk, rng);
        const auto e = sup_norm(p, Domain::polydisk(2, 0.8), 64, 1);
        CHECK(coeff_upper_bound(p, 0.8) >= e.lower - 1e-12);
    }
}

TEST_CASE("threads do not change results")
{
    std::mt19937_64 rng(2);
    const Poly p = random_poly(3, 4, CoeffDistribution::Gaussian, rng);
    SupNormOptions one;
    one.grid = 16;
    one.refine = 2;
    SupNormOptions four = one;
    four.threads = 4;
    const auto a = sup_norm(p, Domain::polydisk(3, 1.0), one);
    const auto b = sup_norm(p, Domain::polydisk(3, 1.0), four);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
}
