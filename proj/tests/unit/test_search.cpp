#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "symcalc/json_io.hpp"
#include "symcalc/search.hpp"

using namespace symcalc;

namespace {

ExperimentConfig base(Experiment e, std::size_t n, TupleConstraint c, std::size_t trials = 20)
{
    ExperimentConfig cfg;
    cfg.experiment = e;
    cfg.n = n;
    cfg.constraint = c;
    cfg.trials = trials;
    cfg.seed = 1234;
    cfg.dim = 4;
    cfg.degree = 3;
    return cfg;
}

std::size_t violations(const std::vector<RatioRecord> &recs)
{
    std::size_t v = 0;
    for (const auto &r : recs) {
        v += (r.violated && !r.control) ? 1 : 0;
    }
    return v;
}

Poly linear2(Complex a, Complex b)
{
    Poly p(2);
    p.add_term({1, 0}, a);
    p.add_term({0, 1}, b);
    return p;
}

} // namespace

TEST_CASE("p7 counterexample report")
{
    const auto rep = example7();
    CHECK(rep.norm == doctest::Approx(6.0));
    CHECK(rep.spectral_radius == doctest::Approx(6.0));
    CHECK((rep.difference_squared - 3.0 * Matrix::Identity(2, 2)).norm() < 1e-14);
    CHECK(rep.witness_value == Complex(5.0));
    CHECK(rep.poly_norm.contains(5.0, 1e-12));
    CHECK(rep.norm > rep.poly_norm.upper);
}

TEST_CASE("random generators are reproducible and satisfy constraints")
{
    for (auto c : {TupleConstraint::SumNormLeqOne, TupleConstraint::DiamondLeqOne, TupleConstraint::EachContraction,
                   TupleConstraint::CommutingContractions}) {
        auto r1 = trial_rng(77, 3);
        auto r2 = trial_rng(77, 3);
        const auto a = random_tuple(2, 3, c, r1);
        const auto b = random_tuple(2, 3, c, r2);
        CHECK((a[0] - b[0]).norm() == 0.0);
        CHECK(check_constraint(a, c, 1e-9));
    }
    auto rng = trial_rng(1, 0);
    const Matrix u = random_unitary(4, rng);
    CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).norm() < 1e-12);
    CHECK(op_norm(random_contraction(3, rng)) <= 1.0 + 1e-12);
    auto r3 = trial_rng(1, 0);
    auto r4 = trial_rng(1, 1);
    CHECK(random_poly(2, 3, CoeffDistribution::Gaussian, r3) != random_poly(2, 3, CoeffDistribution::Gaussian, r4));
}

TEST_CASE("gamma bound trials")
{
    auto cfg = base(Experiment::GammaBound, 2, TupleConstraint::SumNormLeqOne, 30);
    CHECK(violations(gamma_bound_trial(cfg)) == 0);
    cfg.constraint = TupleConstraint::DiamondLeqOne;
    CHECK(violations(gamma_bound_trial(cfg)) == 0);
    cfg.n = 3;
    cfg.trials = 10;
    CHECK(violations(gamma_bound_trial(cfg)) == 0);

    // Linear polynomials: lhs never exceeds sum |c_i|.
    cfg = base(Experiment::GammaBound, 2, TupleConstraint::SumNormLeqOne, 20);
    cfg.fixed = linear2(Complex(1.0, 2.0), -0.5);
    for (const auto &r : gamma_bound_trial(cfg)) {
        CHECK(r.lhs <= std::abs(Complex(1.0, 2.0)) + 0.5 + 1e-12);
        CHECK_FALSE(r.violated);
    }
}

TEST_CASE("theorem bound trials")
{
    auto cfg = base(Experiment::TheoremBound, 2, TupleConstraint::DiamondLeqOne, 10);
    CHECK(violations(theorem_bound_trial(cfg)) == 0);
    cfg.fixed = Poly::monomial({1, 1});
    for (const auto &r : theorem_bound_trial(cfg)) {
        CHECK_FALSE(r.violated);
    }
    const Matrix half = 0.5 * Matrix::Identity(2, 2);
    CHECK(op_norm(symm_apply(Poly::monomial({1, 1}), MatrixTuple({half, half}))) == doctest::Approx(0.25));
}

TEST_CASE("split-form trials")
{
    auto cfg = base(Experiment::Drury, 2, TupleConstraint::EachContraction, 30);
    const auto recs = drury_trial(cfg);
    CHECK(violations(recs) == 0);
    for (const auto &r : recs) {
        CHECK(r.ratio <= std::numbers::sqrt2 + 1e-8);
    }
    cfg.fixed = linear2(1.0, 1.0);
    for (const auto &r : drury_trial(cfg)) {
        CHECK(r.ratio <= 1.0 + 1e-8);
    }
    cfg.fixed = Poly::constant(2, Complex(0.0, 2.0));
    for (const auto &r : drury_trial(cfg)) {
        CHECK(r.lhs == doctest::Approx(2.0));
        CHECK(r.ratio == doctest::Approx(1.0));
        CHECK(r.ratio * r.rhs <= r.factor * r.rhs / std::numbers::sqrt2 + 1e-12);
    }
    cfg.constraint = TupleConstraint::SumNormLeqOne;
    CHECK_THROWS_AS(drury_trial(cfg), std::invalid_argument);
}

TEST_CASE("spectral radius trials")
{
    auto cfg = base(Experiment::SpectralRadius, 2, TupleConstraint::CommutingContractions, 20);
    const auto recs = spectral_radius_trial(cfg);
    CHECK(violations(recs) == 0);
    REQUIRE(recs.back().control);
    CHECK(recs.back().lhs == doctest::Approx(6.0));
    CHECK(recs.back().violated);

    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    CHECK(spectral_radius(symm_apply(Poly::monomial({1, 1}), MatrixTuple({nil, nil}))) == doctest::Approx(0.0));
}

TEST_CASE("product measure trials")
{
    auto cfg = base(Experiment::Lemma51, 2, TupleConstraint::EachContraction, 20);
    const std::array<double, 2> radii{0.5, 0.5};
    CHECK(violations(lemma51_trial(cfg, radii)) == 0);
    cfg.fixed = Poly::constant(2, -3.0);
    for (const auto &r : lemma51_trial(cfg, radii)) {
        CHECK(r.lhs == doctest::Approx(3.0));
        CHECK(r.rhs == doctest::Approx(3.0).epsilon(1e-6));
    }
    const std::array<double, 2> degenerate{1.0, 0.0};
    CHECK_THROWS_AS(lemma51_trial(cfg, degenerate), std::invalid_argument);
    const std::array<double, 2> big{0.7, 0.7};
    CHECK_THROWS_AS(lemma51_trial(cfg, big), std::invalid_argument);
}

TEST_CASE("ratio search")
{
    auto cfg = base(Experiment::RatioSearch, 2, TupleConstraint::EachContraction, 6);
    cfg.dim = 2;
    cfg.iterations = 20;
    cfg.fixed = example7_poly();
    const auto res = contraction_ratio_search(cfg);
    CHECK(res.best.ratio >= 1.2 - 1e-9);
    CHECK(res.max_lhs <= 1.0 + 4.0 * std::numbers::sqrt2);
    CHECK_FALSE(res.exceeds_p7_bound);
    for (std::size_t i = 1; i < res.history.size(); ++i) {
        CHECK(res.history[i] >= res.history[i - 1]);
    }

    auto commuting = base(Experiment::RatioSearch, 2, TupleConstraint::CommutingContractions, 6);
    commuting.iterations = 10;
    CHECK(contraction_ratio_search(commuting).best.ratio <= 1.0 + 1e-8);
}

TEST_CASE("results do not depend on threads")
{
    auto cfg = base(Experiment::GammaBound, 2, TupleConstraint::DiamondLeqOne, 12);
    auto par = cfg;
    par.threads = 4;
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(par);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());
    }
}

TEST_CASE("config validation")
{
    ExperimentConfig cfg;
    cfg.n = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.dim = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK(parse_experiment("ratio_search") == Experiment::RatioSearch);
    CHECK_THROWS_AS(parse_experiment("nope"), std::invalid_argument);
}
