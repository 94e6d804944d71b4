#include <doctest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "symcalc/ncalc.hpp"

using namespace symcalc;

// The alpha-th Fourier coefficient of (zeta . T)^|alpha| sums the distinct
// orderings, so alpha!/|alpha|! times it is symm.
TEST_CASE("symm matches the Fourier extraction")
{
    std::mt19937_64 rng(31);
    const Matrix a = oracle::random_matrix(2, rng);
    const Matrix b = oracle::random_matrix(2, rng);
    const MatrixTuple t({a, b});
    for (const std::vector<unsigned> alpha : {std::vector<unsigned>{1, 1}, {2, 1}, {2, 2}, {3, 1}}) {
        MultiIndex idx(2);
        idx[0] = alpha[0];
        idx[1] = alpha[1];
        const Matrix f = oracle::fourier_extract(alpha, {a, b}, 16) * oracle::gamma_coefficient(alpha);
        CHECK(oracle::rel_diff(symm_monomial(idx, t), f) < 1e-12);
        CHECK(oracle::rel_diff(oracle::brute_symm(alpha, {a, b}), f) < 1e-12);
    }
}
