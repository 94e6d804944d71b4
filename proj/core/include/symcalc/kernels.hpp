#pragma once

// Series kernels behind the polydisk estimates for the symmetrized calculus.
//
//   J(eta)  = sum_alpha alpha!/|alpha|! eta^alpha
//   J0      = terms of J with min_i alpha_i = 0
//   J1      = terms of J with every alpha_i >= 1
//   L       = 2 Re J - 1
//   L'      = prod_i Re[(1 + eta_i)/(1 - eta_i)] - correction, where for n = 2
//             correction = sum_{a,b >= 1} (1 - g) (eta_1^a - conj^a)(eta_2^b - conj^b)
//             and for n = 3 the third factor is (eta_3^c + conj(eta_3)^c), c >= 0.
//
// Every truncated evaluation reports a closed-form bound on the discarded
// terms. Positivity of L or L' on r * closed polydisk is certified by a grid
// search with explicit derivative, truncation and rounding budgets.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symcalc/multipoly.hpp"

namespace symcalc {

enum class KernelKind { J, J0, J1, L, LPrime };

std::string to_string(KernelKind kind);
KernelKind parse_kernel(const std::string &name);

inline constexpr unsigned kDefaultTruncation = 60;

struct KernelSpec {
    KernelKind kind = KernelKind::L;
    std::size_t n = 2;
    // Largest total degree kept in the series.
    unsigned truncation = kDefaultTruncation;

    // Throws std::invalid_argument on an unsupported combination.
    void validate() const;

    friend bool operator==(const KernelSpec &, const KernelSpec &) = default;
};

struct KernelValue {
    Complex value;
    // Bound on the modulus of all discarded terms.
    double tail = 0.0;
};

// Requires max |eta_i| < 1; throws std::domain_error otherwise.
KernelValue kernel_eval(const KernelSpec &spec, std::span<const Complex> eta);

// alpha!/|alpha|! in floating point for any total degree.
double gamma_factor_approx(std::span<const unsigned> alpha);

// sum_{k >= first} C(k + shift, choose) r^k, bounded above by summing terms
// until the (decreasing) term ratio drops below one and closing with the
// geometric majorant.
double binomial_power_tail(int choose, int shift, unsigned first, double r);

// Truncation bound for kernel_eval at modulus bound r.
double kernel_tail(const KernelSpec &spec, double r);

// Bracket for ||J1||^2 in L^2 of the torus.
struct L2Bracket {
    double lower = 0.0;
    double upper = 0.0;
    unsigned truncation = 0;
};

// truncation 0 picks a per-n default.
L2Bracket j1_l2_bound(std::size_t n, unsigned truncation = 0);

// 1 - [2r + r^2 + 2r^3 + r^3/(1-r) - 4 log(1-r)], a lower bound for L on
// r * closed polydisk in three variables: the J0 and J1 majorants
// 2r^3 - 6 log(1-r) and r^3/(1-r) + 2 log(1-r) + 2r + r^2 added up.
double hand_bound_n3(double r);

// Sign change of hand_bound_n3 by bisection; returns {last positive, first
// nonpositive} endpoints.
std::pair<double, double> hand_bound_root(int iterations = 200);

// Bohr radius r_n of Delta_n, only known through the bracket
// 1/(3 e^{1/3}) < r_n <= 1/3.
struct BohrRadiusBracket {
    double lower;
    double upper;
};
BohrRadiusBracket bohr_radius_bracket();

// Constants stated for the main polydisk inequality.
struct TheoremConstants {
    double r_n;
    double m_n;
};
TheoremConstants theorem_constants(std::size_t n);

struct CertifyOptions {
    // Points per angle on the torus r T^n; 0 picks 256 (n = 2) or 64 (n = 3).
    int grid = 0;
    int refine_depth = 10;
    // Refinement gives up (NotCertified) once a level would exceed this.
    std::size_t max_cells = std::size_t{1} << 21;
    unsigned threads = 1;

    static int default_grid(std::size_t n) { return n <= 2 ? 256 : 64; }
};

enum class Verdict { Certified, NotCertified };

std::string to_string(Verdict v);

struct Certificate {
    KernelSpec kernel;
    double radius = 0.0;
    int grid = 0;
    int refine_depth = 0;
    int depth_reached = 0;
    std::size_t max_cells = 0;
    std::size_t evaluations = 0;

    double tail_bound = 0.0;
    // Global first-order bound sum_i sup |d f / d theta_i|.
    double lipschitz_bound = 0.0;
    // Global bound on sum_{i,j} |d^2 f / d theta_i d theta_j|.
    double curvature_bound = 0.0;
    // Global bound on sum_{i,j,k} |d^3 f / d theta_i d theta_j d theta_k|.
    double third_order_bound = 0.0;
    double rounding_bound = 0.0;
    double min_on_grid = 0.0;
    // min_on_grid minus the smallest certified cell lower bound.
    double slack = 0.0;
    double margin = 0.0;
    std::vector<double> argmin_angles;
    Verdict verdict = Verdict::NotCertified;
    std::string note;

    bool certified() const noexcept { return verdict == Verdict::Certified; }
};

// Certifies kernel > 0 on r * closed polydisk for kind L or LPrime, n in {2, 3}.
Certificate certify_positivity(const KernelSpec &spec, double r, const CertifyOptions &opts = {});

// Recomputes a stored certificate from its parameters; true when the verdict
// agrees and the margin matches to rounding.
bool recheck_certificate(const Certificate &cert, unsigned threads = 1);

struct ConstantReport {
    enum class Kind { MBound, RBoundCertified, RBoundHand };

    std::size_t n = 0;
    Kind kind = Kind::MBound;
    double value = 0.0;
    // MBound: value is the in-order sum of these terms.
    std::vector<std::pair<std::string, double>> terms;
    // Supporting quantities; for R bounds value = 1 / details["radius"].
    std::vector<std::pair<std::string, double>> details;
    std::vector<Certificate> certificates;

    double detail(const std::string &name) const;
    // Value recomputed from the breakdown.
    double recompute() const;
};

std::string to_string(ConstantReport::Kind kind);

ConstantReport m_bound(std::size_t n);

enum class RBoundMode { Certified, Hand };

ConstantReport r_bound(std::size_t n, RBoundMode mode, const CertifyOptions &opts = {});

// Number of bisection steps used by r_bound in certified mode.
inline constexpr int kRBoundIterations = 40;

} // namespace symcalc
