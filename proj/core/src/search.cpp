#include "symcalc/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/QR>

#include "symcalc/kernels.hpp"
#include "symcalc/parallel.hpp"
#include "symcalc/polynorm.hpp"

namespace symcalc {

std::string to_string(Experiment e)
{
    switch (e) {
    case Experiment::GammaBound:
        return "gamma_bound";
    case Experiment::TheoremBound:
        return "theorem_bound";
    case Experiment::Drury:
        return "drury";
    case Experiment::SpectralRadius:
        return "spectral_radius";
    case Experiment::RatioSearch:
        return "ratio_search";
    case Experiment::Lemma51:
        return "lemma51";
    }
    throw std::logic_error("bad experiment");
}

Experiment parse_experiment(const std::string &name)
{
    for (auto e : {Experiment::GammaBound, Experiment::TheoremBound, Experiment::Drury, Experiment::SpectralRadius,
                   Experiment::RatioSearch, Experiment::Lemma51}) {
        if (to_string(e) == name) {
            return e;
        }
    }
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string to_string(CoeffDistribution d)
{
    return d == CoeffDistribution::Gaussian ? "gaussian" : "uniform_disk";
}

CoeffDistribution parse_distribution(const std::string &name)
{
    if (name == "gaussian") {
        return CoeffDistribution::Gaussian;
    }
    if (name == "uniform_disk") {
        return CoeffDistribution::UniformDisk;
    }
    throw std::invalid_argument("unknown coefficient distribution '" + name + "'");
}

void ExperimentConfig::validate() const
{
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (n < 1) {
        throw std::invalid_argument("n must be at least 1");
    }
    if (dim < 1) {
        throw std::invalid_argument("dim must be at least 1");
    }
    if (degree > kMaxTransformDegree) {
        throw std::invalid_argument("degree cap above the transform limit");
    }
    if (fixed && fixed->nvars() != n) {
        throw std::invalid_argument("fixed polynomial has the wrong number of variables");
    }
    if (norm_grid < 0 || norm_refine < 0) {
        throw std::invalid_argument("norm grid and refine must be nonnegative");
    }
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(std::uint64_t{trial} >> 32)};
    return std::mt19937_64(seq);
}

namespace {

Complex complex_gaussian(std::mt19937_64 &rng)
{
    std::normal_distribution<double> g(0.0, std::numbers::sqrt2 / 2.0);
    const double re = g(rng);
    const double im = g(rng);
    return {re, im};
}

Complex draw_coefficient(CoeffDistribution dist, std::mt19937_64 &rng)
{
    if (dist == CoeffDistribution::Gaussian) {
        return complex_gaussian(rng);
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double rad = std::sqrt(u(rng));
    const double arg = 2.0 * std::numbers::pi * u(rng);
    return std::polar(rad, arg);
}

void for_each_alpha(std::size_t n, unsigned max_degree, const std::function<void(const MultiIndex &)> &fn)
{
    MultiIndex alpha(n);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t j, unsigned budget) {
        if (j == n) {
            fn(alpha);
            return;
        }
        for (unsigned a = 0; a <= budget; ++a) {
            alpha[j] = a;
            rec(j + 1, budget - a);
        }
        alpha[j] = 0;
    };
    rec(0, max_degree);
}

Eigen::Index draw_dim(int max_dim, std::mt19937_64 &rng)
{
    if (max_dim <= 2) {
        return max_dim;
    }
    std::uniform_int_distribution<int> d(2, max_dim);
    return d(rng);
}

unsigned draw_degree(unsigned cap, std::mt19937_64 &rng)
{
    if (cap <= 1) {
        return cap;
    }
    std::uniform_int_distribution<unsigned> d(1, cap);
    return d(rng);
}

SupNormOptions trial_norm_options(const ExperimentConfig &cfg, const Domain &dom)
{
    SupNormOptions o;
    if (cfg.norm_grid > 0) {
        o.grid = cfg.norm_grid;
    } else if (cfg.n <= 2) {
        o.grid = 128;
    } else if (cfg.n == 3) {
        o.grid = 32;
    } else {
        o.grid = SupNormOptions::default_grid(dom);
    }
    o.refine = cfg.norm_refine;
    return o;
}

double norm_upper(const Poly &p, const Domain &dom, const ExperimentConfig &cfg)
{
    return sup_norm(p, dom, trial_norm_options(cfg, dom)).upper;
}

RatioRecord make_record(const ExperimentConfig &cfg, std::size_t trial, const Poly &p, const MatrixTuple &t,
                        double lhs, double rhs, std::string rhs_kind, double factor)
{
    RatioRecord rec;
    rec.experiment = to_string(cfg.experiment);
    rec.trial = trial;
    rec.poly = p;
    rec.tuple = t.matrices();
    rec.lhs = lhs;
    rec.rhs = rhs;
    rec.rhs_kind = std::move(rhs_kind);
    rec.factor = factor;
    rec.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    rec.violated = lhs > factor * rhs + kTrialTolerance;
    return rec;
}

Poly trial_poly(const ExperimentConfig &cfg, std::mt19937_64 &rng)
{
    if (cfg.fixed) {
        return *cfg.fixed;
    }
    return random_poly(cfg.n, draw_degree(cfg.degree, rng), cfg.distribution, rng);
}

template <typename Trial>
std::vector<RatioRecord> run_trials(const ExperimentConfig &cfg, Trial &&trial)
{
    std::vector<std::vector<RatioRecord>> per(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t k) {
        auto rng = trial_rng(cfg.seed, k);
        per[k] = trial(k, rng);
    });
    std::vector<RatioRecord> out;
    for (auto &v : per) {
        for (auto &r : v) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

void require_norm_constraint(const ExperimentConfig &cfg)
{
    if (cfg.constraint != TupleConstraint::SumNormLeqOne && cfg.constraint != TupleConstraint::DiamondLeqOne) {
        throw std::invalid_argument("this experiment needs the sum or diamond constraint");
    }
}

std::string radii_label(std::span<const double> radii)
{
    std::ostringstream os;
    os.precision(17);
    os << "sup|q| on circles of radii (";
    for (std::size_t i = 0; i < radii.size(); ++i) {
        os << (i ? ", " : "") << radii[i];
    }
    os << ") (upper)";
    return os.str();
}

Matrix reflection(double phi)
{
    Matrix m(2, 2);
    m << std::cos(phi), std::sin(phi), std::sin(phi), -std::cos(phi);
    return m;
}

} // namespace

Matrix random_gaussian_matrix(Eigen::Index dim, std::mt19937_64 &rng)
{
    Matrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            m(i, j) = complex_gaussian(rng);
        }
    }
    return m;
}

Matrix random_unitary(Eigen::Index dim, std::mt19937_64 &rng)
{
    const Matrix g = random_gaussian_matrix(dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Phase fix makes the distribution Haar.
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double mod = std::abs(r(j, j));
        if (mod > 0.0) {
            q.col(j) *= r(j, j) / mod;
        }
    }
    return q;
}

Matrix random_contraction(Eigen::Index dim, std::mt19937_64 &rng)
{
    Matrix g = random_gaussian_matrix(dim, rng);
    const double norm = op_norm(g);
    if (norm > 0.0) {
        g /= norm;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < 0.5) {
        g *= u(rng);
    }
    return g;
}

MatrixTuple random_commuting_tuple(std::size_t n, Eigen::Index dim, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Matrix> mats;
    if (u(rng) < 0.5) {
        const Matrix v = random_unitary(dim, rng);
        for (std::size_t i = 0; i < n; ++i) {
            Matrix d = Matrix::Zero(dim, dim);
            for (Eigen::Index k = 0; k < dim; ++k) {
                d(k, k) = std::polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
            }
            mats.push_back(v * d * v.adjoint());
        }
    } else {
        const Matrix s = random_contraction(dim, rng);
        std::uniform_int_distribution<int> deg(1, 3);
        for (std::size_t i = 0; i < n; ++i) {
            const int d = deg(rng);
            Matrix acc = Matrix::Zero(dim, dim);
            Matrix power = Matrix::Identity(dim, dim);
            for (int k = 0; k <= d; ++k) {
                acc += complex_gaussian(rng) * power;
                power = power * s;
            }
            const double norm = op_norm(acc);
            if (norm > 1.0) {
                acc /= norm;
            }
            mats.push_back(acc);
        }
    }
    return MatrixTuple(std::move(mats));
}

MatrixTuple random_tuple(std::size_t n, Eigen::Index dim, TupleConstraint c, std::mt19937_64 &rng)
{
    switch (c) {
    case TupleConstraint::SumNormLeqOne:
    case TupleConstraint::DiamondLeqOne: {
        std::vector<Matrix> mats;
        for (std::size_t i = 0; i < n; ++i) {
            mats.push_back(random_gaussian_matrix(dim, rng));
        }
        const auto mode =
            c == TupleConstraint::DiamondLeqOne ? NormalizeMode::GridCertified : NormalizeMode::Conservative;
        return normalize_to(MatrixTuple(std::move(mats)), c, mode);
    }
    case TupleConstraint::EachContraction: {
        std::vector<Matrix> mats;
        for (std::size_t i = 0; i < n; ++i) {
            mats.push_back(random_contraction(dim, rng));
        }
        return MatrixTuple(std::move(mats));
    }
    case TupleConstraint::CommutingContractions:
        return random_commuting_tuple(n, dim, rng);
    }
    throw std::logic_error("bad constraint");
}

Poly random_poly(std::size_t n, unsigned degree, CoeffDistribution dist, std::mt19937_64 &rng)
{
    std::bernoulli_distribution keep(0.7);
    Poly p(n);
    for_each_alpha(n, degree, [&](const MultiIndex &alpha) {
        const bool take = keep(rng);
        const Complex c = draw_coefficient(dist, rng);
        if (take) {
            p.add_term(alpha, c);
        }
    });
    if (p.is_zero()) {
        p.add_term(MultiIndex(n), 1.0);
    }
    return p;
}

Poly example7_poly()
{
    Poly p(2);
    p.add_term({2, 0}, 1.0);
    p.add_term({0, 2}, 1.0);
    p.add_term({1, 1}, -2.0);
    p.add_term({1, 0}, 2.0);
    p.add_term({0, 1}, 2.0);
    p.add_term({0, 0}, 1.0);
    return p;
}

MatrixTuple example7_tuple()
{
    const double s = std::sqrt(3.0) / 2.0;
    Matrix t1(2, 2);
    Matrix t2(2, 2);
    t1 << 0.5, s, s, -0.5;
    t2 << 0.5, -s, -s, -0.5;
    return MatrixTuple({t1, t2});
}

Example7Report example7(int grid, int refine)
{
    Example7Report rep;
    rep.p = example7_poly();
    rep.tuple = example7_tuple();
    const Matrix diff = rep.tuple[0] - rep.tuple[1];
    rep.difference_squared = diff * diff;
    rep.symm = symm_apply(rep.p, rep.tuple);
    rep.norm = op_norm(rep.symm);
    rep.spectral_radius = spectral_radius(rep.symm);
    const std::array<Complex, 2> witness{1.0, -1.0};
    rep.witness_value = eval(rep.p, witness);
    SupNormOptions opts;
    opts.grid = grid;
    opts.refine = refine;
    rep.poly_norm = sup_norm(rep.p, Domain::polydisk(2, 1.0), opts);
    if (std::abs(rep.norm - 6.0) > 1e-9 || std::abs(rep.spectral_radius - 6.0) > 1e-9) {
        throw std::runtime_error("p7 example: symmetrized value does not have norm 6");
    }
    return rep;
}

std::vector<RatioRecord> gamma_bound_trial(const ExperimentConfig &cfg)
{
    cfg.validate();
    require_norm_constraint(cfg);
    const Domain dom = Domain::polydisk(cfg.n, 1.0);
    return run_trials(cfg, [&](std::size_t k, std::mt19937_64 &rng) {
        const auto dim = draw_dim(cfg.dim, rng);
        const auto t = random_tuple(cfg.n, dim, cfg.constraint, rng);
        const Poly p = trial_poly(cfg, rng);
        const double lhs = op_norm(symm_apply(p, t));
        const double rhs = norm_upper(gamma(p), dom, cfg);
        return std::vector<RatioRecord>{
            make_record(cfg, k, p, t, lhs, rhs, "sup|gamma p| on closed polydisk (upper)", 1.0)};
    });
}

std::vector<RatioRecord> theorem_bound_trial(const ExperimentConfig &cfg)
{
    cfg.validate();
    require_norm_constraint(cfg);
    if (cfg.n != 2 && cfg.n != 3) {
        throw std::invalid_argument("theorem constants are stated for n = 2, 3");
    }
    const auto constants = theorem_constants(cfg.n);
    const Domain unit = Domain::polydisk(cfg.n, 1.0);
    const Domain wide = Domain::polydisk(cfg.n, constants.r_n);
    return run_trials(cfg, [&](std::size_t k, std::mt19937_64 &rng) {
        const auto dim = draw_dim(cfg.dim, rng);
        const auto t = random_tuple(cfg.n, dim, cfg.constraint, rng);
        const Poly p = trial_poly(cfg, rng);
        const double lhs = op_norm(symm_apply(p, t));
        return std::vector<RatioRecord>{
            make_record(cfg, k, p, t, lhs, norm_upper(p, wide, cfg), "sup|p| on R_n * closed polydisk (upper)", 1.0),
            make_record(cfg, k, p, t, lhs, norm_upper(p, unit, cfg), "sup|p| on closed polydisk (upper), times M_n",
                        constants.m_n),
        };
    });
}

std::vector<RatioRecord> drury_trial(const ExperimentConfig &cfg)
{
    cfg.validate();
    if (cfg.n != 2) {
        throw std::invalid_argument("the split-form bound is for two variables");
    }
    if (cfg.constraint != TupleConstraint::EachContraction) {
        throw std::invalid_argument("the split-form bound needs the contraction constraint");
    }
    if (cfg.fixed) {
        for (const auto &[alpha, c] : cfg.fixed->terms()) {
            if (alpha[0] > 0 && alpha[1] > 0) {
                throw std::invalid_argument("fixed polynomial is not of the form p1(z1) + p2(z2)");
            }
        }
    }
    const Domain dom = Domain::polydisk(2, 1.0);
    return run_trials(cfg, [&](std::size_t k, std::mt19937_64 &rng) {
        const auto dim = draw_dim(cfg.dim, rng);
        const auto t = random_tuple(2, dim, cfg.constraint, rng);
        Poly p(2);
        if (cfg.fixed) {
            p = *cfg.fixed;
        } else {
            const unsigned d1 = draw_degree(cfg.degree, rng);
            const unsigned d2 = draw_degree(cfg.degree, rng);
            for (unsigned a = 0; a <= d1; ++a) {
                p.add_term({a, 0}, draw_coefficient(cfg.distribution, rng));
            }
            for (unsigned b = 1; b <= d2; ++b) {
                p.add_term({0, b}, draw_coefficient(cfg.distribution, rng));
            }
        }
        const double lhs = op_norm(symm_apply(p, t));
        return std::vector<RatioRecord>{make_record(cfg, k, p, t, lhs, norm_upper(p, dom, cfg),
                                                    "sup|p| on closed bidisk (upper), times sqrt(2)",
                                                    std::numbers::sqrt2)};
    });
}

std::vector<RatioRecord> spectral_radius_trial(const ExperimentConfig &cfg)
{
    cfg.validate();
    if (cfg.constraint != TupleConstraint::CommutingContractions) {
        throw std::invalid_argument("the spectral radius bound needs commuting contractions");
    }
    const Domain dom = Domain::polydisk(cfg.n, 1.0);
    auto out = run_trials(cfg, [&](std::size_t k, std::mt19937_64 &rng) {
        const auto dim = draw_dim(cfg.dim, rng);
        const auto t = random_commuting_tuple(cfg.n, dim, rng);
        const Poly p = trial_poly(cfg, rng);
        const double lhs = spectral_radius(ordered_apply(p, t));
        return std::vector<RatioRecord>{
            make_record(cfg, k, p, t, lhs, norm_upper(p, dom, cfg), "sup|p| on closed polydisk (upper)", 1.0)};
    });

    // Non-commuting control: the bound fails for the p7 reflection pair.
    const Poly p7 = example7_poly();
    const auto t7 = example7_tuple();
    ExperimentConfig control_cfg = cfg;
    control_cfg.n = 2;
    auto control = make_record(control_cfg, cfg.trials, p7, t7, spectral_radius(symm_apply(p7, t7)),
                               norm_upper(p7, Domain::polydisk(2, 1.0), control_cfg),
                               "sup|p| on closed bidisk (upper); non-commuting control", 1.0);
    control.control = true;
    out.push_back(std::move(control));
    return out;
}

std::vector<RatioRecord> lemma51_trial(const ExperimentConfig &cfg, std::span<const double> radii)
{
    cfg.validate();
    if (cfg.constraint != TupleConstraint::EachContraction) {
        throw std::invalid_argument("the measure bound needs the contraction constraint");
    }
    if (radii.size() != cfg.n) {
        throw std::invalid_argument("need one radius per variable");
    }
    double total = 0.0;
    for (double r : radii) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("radii must be positive");
        }
        total += r;
    }
    if (total > 1.0 + 1e-12) {
        throw std::invalid_argument("radii must sum to at most one");
    }
    const std::string label = radii_label(radii);
    const Domain torus = Domain::torus(cfg.n);
    return run_trials(cfg, [&](std::size_t k, std::mt19937_64 &rng) {
        const auto dim = draw_dim(cfg.dim, rng);
        const auto t = random_tuple(cfg.n, dim, cfg.constraint, rng);
        const Poly q = trial_poly(cfg, rng);
        const Poly p = lambda_mu(q, radii);
        const double lhs = op_norm(symm_apply(p, t));
        const double rhs = norm_upper(scale_vars(q, radii), torus, cfg);
        return std::vector<RatioRecord>{make_record(cfg, k, p, t, lhs, rhs, label, 1.0)};
    });
}

RatioSearchResult contraction_ratio_search(const ExperimentConfig &cfg)
{
    cfg.validate();
    const bool commuting = cfg.constraint == TupleConstraint::CommutingContractions;
    if (!commuting && cfg.constraint != TupleConstraint::EachContraction) {
        throw std::invalid_argument("the ratio search runs over contractions");
    }
    const Domain dom = Domain::polydisk(cfg.n, 1.0);

    struct Restart {
        RatioRecord best;
        double max_lhs = 0.0;
    };
    std::vector<Restart> restarts(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t k) {
        auto rng = trial_rng(cfg.seed, k);
        const auto dim = draw_dim(cfg.dim, rng);
        const Poly p = trial_poly(cfg, rng);
        const double denom = sup_norm(p, dom, trial_norm_options(cfg, dom)).lower;

        // Real reflections, the family containing the p7 pair, are searched
        // through their angles so the family is never left.
        const bool reflections = !commuting && dim == 2 && k % 2 == 0;
        std::vector<double> angles;
        double angle_step = 0.5;
        auto from_angles = [&](const std::vector<double> &a) {
            std::vector<Matrix> mats;
            for (double theta : a) {
                mats.push_back(reflection(theta));
            }
            return MatrixTuple(std::move(mats));
        };
        auto start = [&]() {
            if (commuting) {
                return random_commuting_tuple(cfg.n, dim, rng);
            }
            if (reflections) {
                std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
                for (std::size_t i = 0; i < cfg.n; ++i) {
                    angles.push_back(angle(rng));
                }
                return from_angles(angles);
            }
            return random_tuple(cfg.n, dim, TupleConstraint::EachContraction, rng);
        };
        auto value = [&](const MatrixTuple &t) { return op_norm(symm_apply(p, t)); };

        MatrixTuple t = start();
        double lhs = value(t);
        Restart &res = restarts[k];
        res.max_lhs = lhs;
        for (std::size_t it = 0; it < cfg.iterations; ++it) {
            MatrixTuple cand = t;
            std::vector<double> cand_angles = angles;
            const double sigma = 0.01 + 0.2 * (1.0 - static_cast<double>(it) / static_cast<double>(cfg.iterations));
            if (commuting) {
                cand = random_commuting_tuple(cfg.n, dim, rng);
            } else if (reflections) {
                // Compass search: try +-step on each angle, halve on failure.
                double best_v = lhs;
                for (std::size_t i = 0; i < angles.size(); ++i) {
                    for (double sign : {1.0, -1.0}) {
                        std::vector<double> trial = angles;
                        trial[i] += sign * angle_step;
                        const double v = value(from_angles(trial));
                        res.max_lhs = std::max(res.max_lhs, v);
                        if (v > best_v) {
                            best_v = v;
                            cand_angles = std::move(trial);
                        }
                    }
                }
                if (best_v <= lhs) {
                    angle_step /= 2.0;
                    continue;
                }
                cand = from_angles(cand_angles);
            } else {
                std::vector<Matrix> mats;
                for (std::size_t i = 0; i < cfg.n; ++i) {
                    Matrix m = t[i] + sigma * random_gaussian_matrix(dim, rng);
                    const double norm = op_norm(m);
                    if (norm > 1.0) {
                        m /= norm;
                    }
                    mats.push_back(std::move(m));
                }
                cand = MatrixTuple(std::move(mats));
            }
            const double v = value(cand);
            res.max_lhs = std::max(res.max_lhs, v);
            if (v > lhs) {
                lhs = v;
                t = std::move(cand);
                angles = std::move(cand_angles);
            }
        }
        res.best = make_record(cfg, k, p, t, lhs, denom, "sup|p| on closed polydisk (lower)", 1.0);
        // Open question territory: reported, never asserted.
        res.best.violated = false;
    });

    RatioSearchResult out;
    double best = -1.0;
    for (const auto &r : restarts) {
        if (r.best.ratio > best) {
            best = r.best.ratio;
            out.best = r.best;
        }
        out.history.push_back(best);
        out.max_lhs = std::max(out.max_lhs, r.max_lhs);
    }
    if (cfg.fixed && *cfg.fixed == example7_poly()) {
        out.exceeds_p7_bound = out.max_lhs > 1.0 + 4.0 * std::numbers::sqrt2;
    }
    return out;
}

std::vector<RatioRecord> run_experiment(const ExperimentConfig &cfg)
{
    switch (cfg.experiment) {
    case Experiment::GammaBound:
        return gamma_bound_trial(cfg);
    case Experiment::TheoremBound:
        return theorem_bound_trial(cfg);
    case Experiment::Drury:
        return drury_trial(cfg);
    case Experiment::SpectralRadius:
        return spectral_radius_trial(cfg);
    case Experiment::RatioSearch:
        return {contraction_ratio_search(cfg).best};
    case Experiment::Lemma51: {
        std::vector<double> radii = cfg.radii;
        if (radii.empty()) {
            radii.assign(cfg.n, 1.0 / static_cast<double>(cfg.n));
        }
        return lemma51_trial(cfg, radii);
    }
    }
    throw std::logic_error("bad experiment");
}

} // namespace symcalc
