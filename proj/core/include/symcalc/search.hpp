#pragma once

// Seeded randomized experiments around the symmetrized calculus: norm
// inequalities checked on random tuples, the p7 reflection counterexample and a
// hill-climbing search for large ||symm p(T)|| / ||p||.
//
// Every trial draws from its own mt19937_64 seeded with (seed, trial index),
// so results do not depend on thread count or trial scheduling.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "symcalc/multipoly.hpp"
#include "symcalc/ncalc.hpp"
#include "symcalc/norm_estimate.hpp"

namespace symcalc {

enum class Experiment { GammaBound, TheoremBound, Drury, SpectralRadius, RatioSearch, Lemma51 };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string &name);

enum class CoeffDistribution { Gaussian, UniformDisk };

std::string to_string(CoeffDistribution d);
CoeffDistribution parse_distribution(const std::string &name);

struct ExperimentConfig {
    Experiment experiment = Experiment::GammaBound;
    std::size_t n = 2;
    // Largest matrix dimension; each trial draws its dimension in [2, dim].
    int dim = 4;
    unsigned degree = 4;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    TupleConstraint constraint = TupleConstraint::SumNormLeqOne;
    // Fixed polynomial, or random with the given coefficient law when empty.
    std::optional<Poly> fixed;
    CoeffDistribution distribution = CoeffDistribution::Gaussian;
    // Sup-norm resolution for the right-hand sides; 0 picks 128 (n <= 2) or
    // 32 (n = 3) per angle with one refinement level.
    int norm_grid = 0;
    int norm_refine = 1;
    // Hill-climbing steps per restart in the ratio search.
    std::size_t iterations = 40;
    // Radii of the product-of-circles measure for the lemma51 trial.
    std::vector<double> radii;
    unsigned threads = 1;

    // Throws std::invalid_argument on an unusable configuration.
    void validate() const;
};

struct RatioRecord {
    std::string experiment;
    std::size_t trial = 0;
    Poly poly{1};
    std::vector<Matrix> tuple;
    double lhs = 0.0;
    // Denominator of ratio; the inequality tested is lhs <= factor * rhs.
    double rhs = 0.0;
    std::string rhs_kind;
    double factor = 1.0;
    double ratio = 0.0;
    bool violated = false;
    // Records that are expected to violate (non-commuting control cases).
    bool control = false;
};

// Absolute slack on every inequality check.
inline constexpr double kTrialTolerance = 1e-8;

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial);

Matrix random_gaussian_matrix(Eigen::Index dim, std::mt19937_64 &rng);
Matrix random_unitary(Eigen::Index dim, std::mt19937_64 &rng);
// Gaussian matrix divided by its norm, then (half the time) by a uniform
// factor in [0, 1].
Matrix random_contraction(Eigen::Index dim, std::mt19937_64 &rng);
MatrixTuple random_tuple(std::size_t n, Eigen::Index dim, TupleConstraint c, std::mt19937_64 &rng);
// Commuting contractions: V D_i V* with diagonal D_i in the closed disk, or
// q_i(S) / max(1, ||q_i(S)||) for one random contraction S.
MatrixTuple random_commuting_tuple(std::size_t n, Eigen::Index dim, std::mt19937_64 &rng);
Poly random_poly(std::size_t n, unsigned degree, CoeffDistribution dist, std::mt19937_64 &rng);

struct Example7Report {
    Poly p{2};
    MatrixTuple tuple{std::vector<Matrix>{Matrix::Identity(2, 2), Matrix::Identity(2, 2)}};
    Matrix difference_squared;
    Matrix symm;
    double norm = 0.0;
    double spectral_radius = 0.0;
    // p(1, -1) = 5, the value attaining the polydisk norm.
    Complex witness_value;
    NormEstimate poly_norm;
};

// p7 = z^2 + w^2 - 2zw + 2z + 2w + 1 with the two reflections through lines at
// +-60 degrees. Throws std::runtime_error if norm or spectral radius is not 6.
Example7Report example7(int grid = 256, int refine = 3);

Poly example7_poly();
MatrixTuple example7_tuple();

std::vector<RatioRecord> gamma_bound_trial(const ExperimentConfig &cfg);
std::vector<RatioRecord> theorem_bound_trial(const ExperimentConfig &cfg);
std::vector<RatioRecord> drury_trial(const ExperimentConfig &cfg);
// The last record is the p7 reflection control, marked control = true.
std::vector<RatioRecord> spectral_radius_trial(const ExperimentConfig &cfg);
std::vector<RatioRecord> lemma51_trial(const ExperimentConfig &cfg, std::span<const double> radii);

struct RatioSearchResult {
    RatioRecord best;
    // Best ratio after each restart; never decreases.
    std::vector<double> history;
    double max_lhs = 0.0;
    // Only meaningful for p7: whether some sampled tuple pushed
    // ||symm p7(T)|| above 1 + 4 sqrt(2).
    bool exceeds_p7_bound = false;
};

// Ratio is ||symm p(T)|| over the sup-norm lower bound of p.
RatioSearchResult contraction_ratio_search(const ExperimentConfig &cfg);

// Dispatches on cfg.experiment; the ratio search contributes its best record.
std::vector<RatioRecord> run_experiment(const ExperimentConfig &cfg);

} // namespace symcalc
