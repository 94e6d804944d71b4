#include "acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "oracles/oracles.hpp"
#include "symcalc/kernels.hpp"
#include "symcalc/multipoly.hpp"
#include "symcalc/ncalc.hpp"
#include "symcalc/polynorm.hpp"
#include "symcalc/search.hpp"

namespace symcalc::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

class Checker {
public:
    Checker(int id, std::string title, double time_limit)
        : m_start(Clock::now()), m_limit(time_limit)
    {
        m_result.id = id;
        m_result.title = std::move(title);
    }

    void check(bool ok, const std::string &what)
    {
        if (!ok) {
            m_failed = true;
            note("FAILED " + what);
        }
    }

    void note(const std::string &text)
    {
        if (!m_detail.str().empty()) {
            m_detail << "; ";
        }
        m_detail << text;
    }

    CriterionResult finish()
    {
        m_result.seconds = std::chrono::duration<double>(Clock::now() - m_start).count();
        if (m_result.seconds >= m_limit) {
            m_failed = true;
            note("FAILED runtime limit " + fmt(m_limit) + " s");
        }
        m_result.passed = !m_failed;
        m_result.detail = m_detail.str();
        return m_result;
    }

    template <typename Fn>
    CriterionResult run(Fn &&body)
    {
        try {
            body(*this);
        } catch (const std::exception &e) {
            check(false, std::string("exception: ") + e.what());
        }
        return finish();
    }

private:
    CriterionResult m_result;
    Clock::time_point m_start;
    double m_limit;
    bool m_failed = false;
    std::ostringstream m_detail;
};

std::vector<oracle::Mat> random_tuple_mats(std::size_t n, Eigen::Index d, std::mt19937_64 &rng)
{
    std::vector<oracle::Mat> mats;
    for (std::size_t i = 0; i < n; ++i) {
        mats.push_back(oracle::random_matrix(d, rng));
    }
    return mats;
}

} // namespace

CriterionResult example7_exact()
{
    return Checker(1, "p7 counterexample exact", 5.0).run([](Checker &c) {
        const auto rep = example7(256, 3);
        Matrix expected = Matrix::Zero(2, 2);
        expected(0, 0) = 6.0;
        expected(1, 1) = 2.0;
        const double entry_err = (rep.symm - expected).cwiseAbs().maxCoeff();
        c.check(entry_err <= 1e-10, "symm p7(T) = diag(6,2)");
        c.check(std::abs(rep.norm - 6.0) <= 1e-9, "operator norm 6");
        c.check(std::abs(rep.spectral_radius - 6.0) <= 1e-9, "spectral radius 6");
        c.check(rep.poly_norm.lower >= 5.0 - 1e-6, "norm lower bound >= 5 - 1e-6");
        c.check(rep.poly_norm.upper <= 5.0 + 5e-3, "norm upper bound <= 5 + 5e-3");
        c.note("symm = diag(" + fmt(rep.symm(0, 0).real(), 12) + ", " + fmt(rep.symm(1, 1).real(), 12)
               + "), norm = " + fmt(rep.norm, 12) + ", rho = " + fmt(rep.spectral_radius, 12)
               + ", ||p7|| in [" + fmt(rep.poly_norm.lower, 10) + ", " + fmt(rep.poly_norm.upper, 10) + "]");
    });
}

CriterionResult constants_pipeline()
{
    return Checker(2, "constants pipeline", 10.0).run([](Checker &c) {
        const auto m2 = m_bound(2);
        const auto m3 = m_bound(3);
        const auto b2 = j1_l2_bound(2);
        const auto b3 = j1_l2_bound(3);
        c.check(m2.value <= 4.07, "M2 <= 4.07");
        c.check(m3.value <= 16.6, "M3 <= 16.6");
        c.check(b2.lower <= b2.upper && b2.upper <= 1.142761, "||J1||^2 bracket n=2");
        c.check(b3.lower <= b3.upper && b3.upper <= 0.145161, "||J1||^2 bracket n=3");
        c.check(m2.recompute() == m2.value && m3.recompute() == m3.value, "values reproduce from breakdown");
        c.note("M2 = " + fmt(m2.value, 8) + ", M3 = " + fmt(m3.value, 8) + (m3.value < 16.59 ? " (< 16.59)" : "")
               + ", ||J1||^2 n=2 in [" + fmt(b2.lower, 8) + ", " + fmt(b2.upper, 8) + "], n=3 in ["
               + fmt(b3.lower, 8) + ", " + fmt(b3.upper, 8) + "]");
    });
}

CriterionResult positivity_certificates(unsigned threads)
{
    return Checker(3, "positivity certificates", 300.0).run([threads](Checker &c) {
        CertifyOptions opts;
        opts.threads = threads;
        const auto c2 = certify_positivity({KernelKind::LPrime, 2, kDefaultTruncation}, 0.5406, opts);
        const auto c3 = certify_positivity({KernelKind::LPrime, 3, kDefaultTruncation}, 0.39, opts);
        c.check(c2.certified() && c2.margin > 0.0, "L' n=2 at r = 0.5406 certified");
        c.check(c3.certified() && c3.margin > 0.0, "L' n=3 at r = 0.39 certified");
        const auto r2 = r_bound(2, RBoundMode::Certified, opts);
        const auto r3 = r_bound(3, RBoundMode::Certified, opts);
        c.check(r2.value <= 1.85, "R2 <= 1.85");
        c.check(r3.value <= 2.6, "R3 <= 2.6");
        c.note("margins " + fmt(c2.margin) + " (n=2), " + fmt(c3.margin) + " (n=3); R2 = " + fmt(r2.value, 8)
               + ", R3 = " + fmt(r3.value, 8));
    });
}

CriterionResult hand_bound()
{
    return Checker(4, "hand bound", 1.0).run([](Checker &c) {
        const double at = hand_bound_n3(0.152);
        const auto [lo, hi] = hand_bound_root();
        const auto rep = r_bound(3, RBoundMode::Hand);
        c.check(at > 0.0, "hand bound positive at 0.152");
        c.check(lo > 0.152 && hi < 0.16, "root in (0.152, 0.16)");
        c.check(1.0 / lo < 6.6 && rep.value < 6.6, "1/root < 6.6");
        c.note("bound(0.152) = " + fmt(at) + ", root in [" + fmt(lo, 10) + ", " + fmt(hi, 10) + "], 1/root = "
               + fmt(rep.value, 8));
    });
}

CriterionResult property_suite(unsigned threads)
{
    return Checker(5, "property suite", 600.0).run([threads](Checker &c) {
        std::size_t records = 0;
        std::size_t violations = 0;
        auto count = [&](const std::vector<RatioRecord> &recs) {
            for (const auto &r : recs) {
                if (r.control) {
                    continue;
                }
                ++records;
                violations += r.violated ? 1 : 0;
            }
        };
        ExperimentConfig base;
        base.dim = 6;
        base.degree = 4;
        base.threads = threads;

        for (std::size_t n : {2, 3}) {
            for (auto constraint : {TupleConstraint::SumNormLeqOne, TupleConstraint::DiamondLeqOne}) {
                auto cfg = base;
                cfg.experiment = Experiment::GammaBound;
                cfg.n = n;
                cfg.trials = 250;
                cfg.constraint = constraint;
                cfg.seed = 1000 + n * 10 + static_cast<std::uint64_t>(constraint);
                count(gamma_bound_trial(cfg));
            }
            auto cfg = base;
            cfg.experiment = Experiment::TheoremBound;
            cfg.n = n;
            cfg.trials = 200;
            cfg.constraint = TupleConstraint::DiamondLeqOne;
            cfg.seed = 2000 + n;
            count(theorem_bound_trial(cfg));
        }

        auto drury = base;
        drury.experiment = Experiment::Drury;
        drury.trials = 500;
        drury.constraint = TupleConstraint::EachContraction;
        drury.seed = 3000;
        const auto drury_recs = drury_trial(drury);
        count(drury_recs);
        double max_ratio = 0.0;
        for (const auto &r : drury_recs) {
            max_ratio = std::max(max_ratio, r.ratio);
        }
        c.check(max_ratio <= std::numbers::sqrt2 + 1e-8, "split-form ratio <= sqrt 2");

        auto spectral = base;
        spectral.experiment = Experiment::SpectralRadius;
        spectral.trials = 300;
        spectral.constraint = TupleConstraint::CommutingContractions;
        spectral.seed = 4000;
        const auto spectral_recs = spectral_radius_trial(spectral);
        count(spectral_recs);
        c.check(spectral_recs.back().control && spectral_recs.back().violated,
                "non-commuting control exceeds the polydisk norm");

        auto lemma = base;
        lemma.experiment = Experiment::Lemma51;
        lemma.trials = 200;
        lemma.constraint = TupleConstraint::EachContraction;
        lemma.seed = 5000;
        const std::vector<double> radii{0.5, 0.5};
        count(lemma51_trial(lemma, radii));

        c.check(violations == 0, "zero violations");
        c.note(std::to_string(records) + " records, " + std::to_string(violations)
               + " violations, max split-form ratio " + fmt(max_ratio, 8) + ", control rho/norm "
               + fmt(spectral_recs.back().ratio, 8));
    });
}

CriterionResult oracle_equivalence()
{
    return Checker(6, "oracle equivalence", 120.0).run([](Checker &c) {
        std::mt19937_64 rng(6006);
        double worst_dp = 0.0;
        std::size_t compared = 0;
        for (std::size_t n = 1; n <= 3; ++n) {
            for (int k = 0; k < 20; ++k) {
                const auto mats = random_tuple_mats(n, 4, rng);
                const MatrixTuple t(mats);
                oracle::for_each_alpha(n, 6, [&](const std::vector<unsigned> &a) {
                    const Matrix dp = symm_monomial(MultiIndex(a), t);
                    worst_dp = std::max(worst_dp, oracle::rel_diff(dp, oracle::brute_symm(a, mats)));
                    ++compared;
                });
            }
        }
        c.check(worst_dp <= 1e-12, "DP equals multiset-permutation enumeration");

        double worst_fourier = 0.0;
        for (std::size_t n = 1; n <= 3; ++n) {
            for (int k = 0; k < 3; ++k) {
                auto mats = random_tuple_mats(n, 3, rng);
                double total = 0.0;
                for (const auto &m : mats) {
                    total += Eigen::JacobiSVD<oracle::Mat>(m).singularValues()(0);
                }
                for (auto &m : mats) {
                    m /= total;
                }
                const MatrixTuple t(mats);
                oracle::for_each_alpha(n, 4, [&](const std::vector<unsigned> &a) {
                    unsigned degree = 0;
                    for (auto x : a) {
                        degree += x;
                    }
                    const auto quad = oracle::fourier_extract(a, mats, 4 * static_cast<int>(degree + 1));
                    const Matrix expected = symm_monomial(MultiIndex(a), t) / oracle::gamma_coefficient(a);
                    worst_fourier = std::max(worst_fourier, (quad - expected).cwiseAbs().maxCoeff());
                });
            }
        }
        c.check(worst_fourier <= 1e-10, "Fourier extraction identity");
        c.note(std::to_string(compared) + " monomials, worst DP relative error " + fmt(worst_dp, 3)
               + ", worst Fourier error " + fmt(worst_fourier, 3));
    });
}

CriterionResult transform_exactness()
{
    return Checker(7, "transform exactness", 60.0).run([](Checker &c) {
        std::mt19937_64 rng(7007);
        double worst = 0.0;
        bool mu_exact = true;
        for (int k = 0; k < 100; ++k) {
            const std::size_t n = 1 + static_cast<std::size_t>(k % 3);
            const auto p = random_poly(n, 8, CoeffDistribution::Gaussian, rng);
            const Poly back = lambda(gamma(p));
            for (const auto &[alpha, coef] : p.terms()) {
                worst = std::max(worst, std::abs(back.coeff(alpha) - coef));
            }
            for (const auto &[alpha, coef] : back.terms()) {
                worst = std::max(worst, std::abs(p.coeff(alpha) - coef));
            }
            const std::vector<double> ones(n, 1.0);
            mu_exact = mu_exact && lambda_mu(p, ones) == lambda(p);
        }
        c.check(worst <= 1e-12, "lambda(gamma(p)) = p");
        c.check(mu_exact, "lambda_mu with unit radii equals lambda");

        // Gamma p(z) as the torus average of p(zeta) K(z conj(zeta)) for K = L and L'.
        const int m = 64;
        const std::array<Complex, 2> z{std::polar(0.35, 0.7), std::polar(0.45, -1.3)};
        std::vector<Complex> points;
        std::vector<double> kl;
        std::vector<double> klp;
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                const Complex z1 = std::polar(1.0, 2.0 * std::numbers::pi * a / m);
                const Complex z2 = std::polar(1.0, 2.0 * std::numbers::pi * b / m);
                const std::array<Complex, 2> eta{z[0] * std::conj(z1), z[1] * std::conj(z2)};
                kl.push_back(kernel_eval({KernelKind::L, 2, kDefaultTruncation}, eta).value.real());
                klp.push_back(kernel_eval({KernelKind::LPrime, 2, kDefaultTruncation}, eta).value.real());
                points.push_back(z1);
                points.push_back(z2);
            }
        }
        double worst_quad = 0.0;
        oracle::for_each_alpha(2, 4, [&](const std::vector<unsigned> &a) {
            const Poly p = Poly::monomial(MultiIndex(a));
            Complex il = 0.0;
            Complex ilp = 0.0;
            for (std::size_t k = 0; k < kl.size(); ++k) {
                const Complex v = std::pow(points[2 * k], static_cast<int>(a[0]))
                                  * std::pow(points[2 * k + 1], static_cast<int>(a[1]));
                il += v * kl[k];
                ilp += v * klp[k];
            }
            il /= static_cast<double>(kl.size());
            ilp /= static_cast<double>(kl.size());
            const Complex expected = eval(gamma(p), z);
            worst_quad = std::max({worst_quad, std::abs(il - expected), std::abs(ilp - expected)});
        });
        c.check(worst_quad <= 1e-8, "L and L' reproduce gamma p by quadrature");
        c.note("worst round-trip error " + fmt(worst, 3) + ", worst quadrature error " + fmt(worst_quad, 3));
    });
}

CriterionResult non_homomorphism()
{
    return Checker(8, "non-homomorphism witnesses", 10.0).run([](Checker &c) {
        const auto t = example7_tuple();
        Poly p(2);
        p.add_term({2, 0}, 1.0);
        p.add_term({0, 2}, 1.0);
        const Matrix sp = symm_apply(p, t);
        const double gap = op_norm(symm_apply(p * p, t) - sp * sp);
        c.check(gap > 0.1, "symm(p^2) differs from symm(p)^2");

        std::mt19937_64 rng(8008);
        std::normal_distribution<double> g;
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const auto mats = random_tuple_mats(2, 3, rng);
            const MatrixTuple tt(mats);
            Poly lin(2);
            const Complex a{g(rng), g(rng)};
            const Complex b{g(rng), g(rng)};
            const Complex cc{g(rng), g(rng)};
            lin.add_term({0, 0}, a);
            lin.add_term({1, 0}, b);
            lin.add_term({0, 1}, cc);
            const Matrix base = a * Matrix::Identity(3, 3) + b * mats[0] + cc * mats[1];
            Matrix power = Matrix::Identity(3, 3);
            for (unsigned e = 1; e <= 4; ++e) {
                power = power * base;
                const Matrix lhs = symm_apply(symcalc::power(lin, e), tt);
                worst = std::max(worst, (lhs - power).norm() / std::max(1.0, power.norm()));
            }
        }
        c.check(worst <= 1e-10, "linear power identity");
        c.note("||symm(p^2) - symm(p)^2|| = " + fmt(gap, 8) + ", worst linear power error " + fmt(worst, 3));
    });
}

std::string format(const CriterionResult &r)
{
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << ' ' << r.id << ' ' << r.title << ": " << r.detail << " ("
       << fmt(r.seconds, 3) << " s)";
    return os.str();
}

std::vector<CriterionResult> run_all(std::ostream &out, unsigned threads)
{
    const std::vector<std::function<CriterionResult()>> all{
        example7_exact,
        constants_pipeline,
        [threads] { return positivity_certificates(threads); },
        hand_bound,
        [threads] { return property_suite(threads); },
        oracle_equivalence,
        transform_exactness,
        non_homomorphism,
    };
    std::vector<CriterionResult> results;
    for (const auto &fn : all) {
        results.push_back(fn());
        out << format(results.back()) << std::endl;
    }
    return results;
}

} // namespace symcalc::acceptance
