#include "symcalc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace symcalc {

namespace {

double binomial(int top, int choose)
{
    if (choose < 0 || top < choose) {
        return 0.0;
    }
    double c = 1.0;
    for (int i = 1; i <= choose; ++i) {
        c = c * static_cast<double>(top - choose + i) / static_cast<double>(i);
    }
    return c;
}

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

// Visits every alpha with |alpha| <= max_degree together with alpha!/|alpha|!.
void for_each_index(std::size_t n, unsigned max_degree,
                    const std::function<void(const std::vector<unsigned> &, double)> &visit)
{
    std::vector<unsigned> alpha(n, 0);
    std::function<void(std::size_t, unsigned, double)> rec = [&](std::size_t j, unsigned used, double g) {
        if (j == n) {
            visit(alpha, g);
            return;
        }
        // Choosing alpha_j = a divides g by C(used + a, a).
        double c = 1.0;
        for (unsigned a = 0; used + a <= max_degree; ++a) {
            if (a > 0) {
                c = c * static_cast<double>(used + a) / static_cast<double>(a);
            }
            alpha[j] = a;
            rec(j + 1, used + a, g / c);
        }
        alpha[j] = 0;
    };
    rec(0, 0, 1.0);
}

std::vector<std::vector<Complex>> power_table(std::span<const Complex> eta, unsigned max_degree)
{
    std::vector<std::vector<Complex>> pw(eta.size(), std::vector<Complex>(max_degree + 1));
    for (std::size_t j = 0; j < eta.size(); ++j) {
        pw[j][0] = 1.0;
        for (unsigned a = 1; a <= max_degree; ++a) {
            pw[j][a] = pw[j][a - 1] * eta[j];
        }
    }
    return pw;
}

double poisson(Complex eta)
{
    return (1.0 - std::norm(eta)) / std::norm(1.0 - eta);
}

// J-type coefficient sums: terms with support size m contribute at most
// r^k / (m-1)! per total degree k, times C(n, m) choices of support.
double j_tail_constant(KernelKind kind, std::size_t n)
{
    const std::size_t lo = kind == KernelKind::J1 ? n : 1;
    const std::size_t hi = kind == KernelKind::J0 ? n - 1 : n;
    double c = 0.0;
    for (std::size_t m = lo; m <= hi; ++m) {
        c += binomial(static_cast<int>(n), static_cast<int>(m)) / factorial(static_cast<int>(m) - 1);
    }
    return c;
}

} // namespace

std::string to_string(KernelKind kind)
{
    switch (kind) {
    case KernelKind::J:
        return "j";
    case KernelKind::J0:
        return "j0";
    case KernelKind::J1:
        return "j1";
    case KernelKind::L:
        return "l";
    case KernelKind::LPrime:
        return "lprime";
    }
    return "unknown";
}

KernelKind parse_kernel(const std::string &name)
{
    if (name == "j") {
        return KernelKind::J;
    }
    if (name == "j0") {
        return KernelKind::J0;
    }
    if (name == "j1") {
        return KernelKind::J1;
    }
    if (name == "l") {
        return KernelKind::L;
    }
    if (name == "lprime") {
        return KernelKind::LPrime;
    }
    throw std::invalid_argument("unknown kernel '" + name + "' (expected j, j0, j1, l or lprime)");
}

void KernelSpec::validate() const
{
    if (n < 2) {
        throw std::invalid_argument("kernels need n >= 2");
    }
    if (kind == KernelKind::LPrime && n != 2 && n != 3) {
        throw std::invalid_argument("L' is only defined for n = 2 and n = 3");
    }
    if (kind == KernelKind::J1 && truncation < n) {
        throw std::invalid_argument("J1 needs truncation >= n");
    }
}

double gamma_factor_approx(std::span<const unsigned> alpha)
{
    double g = 1.0;
    int used = 0;
    for (unsigned a : alpha) {
        used += static_cast<int>(a);
        g /= binomial(used, static_cast<int>(a));
    }
    return g;
}

double binomial_power_tail(int choose, int shift, unsigned first, double r)
{
    if (!(r >= 0.0) || !(r < 1.0)) {
        throw std::domain_error("tail bound needs 0 <= r < 1");
    }
    if (r == 0.0) {
        return first == 0 && shift >= choose ? binomial(shift, choose) : 0.0;
    }
    double acc = 0.0;
    for (long k = first;; ++k) {
        const long x = k + shift;
        if (x < choose) {
            continue;
        }
        const double term = binomial(static_cast<int>(x), choose) * std::pow(r, static_cast<double>(k));
        const double ratio = r * static_cast<double>(x + 1) / static_cast<double>(x + 1 - choose);
        if (ratio < 1.0) {
            return acc + term / (1.0 - ratio);
        }
        acc += term;
    }
}

double kernel_tail(const KernelSpec &spec, double r)
{
    spec.validate();
    if (!(r >= 0.0) || !(r < 1.0)) {
        throw std::domain_error("kernel series need max |eta_i| < 1");
    }
    const unsigned first = spec.truncation + 1;
    switch (spec.kind) {
    case KernelKind::J:
    case KernelKind::J0:
    case KernelKind::J1:
        return j_tail_constant(spec.kind, spec.n) * std::pow(r, static_cast<double>(first)) / (1.0 - r);
    case KernelKind::L:
        return 2.0 * j_tail_constant(KernelKind::J, spec.n) * std::pow(r, static_cast<double>(first)) / (1.0 - r);
    case KernelKind::LPrime:
        // Correction terms are at most 2 r^alpha_i per factor; the index count
        // at total degree k is k - 1 (n = 2) or C(k, 2) (n = 3).
        if (spec.n == 2) {
            return 4.0 * binomial_power_tail(1, -1, first, r);
        }
        return 8.0 * binomial_power_tail(2, 0, first, r);
    }
    return 0.0;
}

KernelValue kernel_eval(const KernelSpec &spec, std::span<const Complex> eta)
{
    spec.validate();
    if (eta.size() != spec.n) {
        throw std::invalid_argument("kernel point has the wrong number of coordinates");
    }
    double rmax = 0.0;
    for (auto e : eta) {
        rmax = std::max(rmax, std::abs(e));
    }
    if (!(rmax < 1.0)) {
        throw std::domain_error("kernel series need max |eta_i| < 1");
    }

    const unsigned N = spec.truncation;
    const auto pw = power_table(eta, N);
    KernelValue out;
    out.tail = kernel_tail(spec, rmax);

    if (spec.kind == KernelKind::LPrime) {
        double head = 1.0;
        for (auto e : eta) {
            head *= poisson(e);
        }
        Complex corr{};
        for_each_index(spec.n, N, [&](const std::vector<unsigned> &alpha, double g) {
            if (alpha[0] == 0 || alpha[1] == 0) {
                return;
            }
            Complex term = (1.0 - g) * (pw[0][alpha[0]] - std::conj(pw[0][alpha[0]]))
                           * (pw[1][alpha[1]] - std::conj(pw[1][alpha[1]]));
            if (spec.n == 3) {
                term *= pw[2][alpha[2]] + std::conj(pw[2][alpha[2]]);
            }
            corr += term;
        });
        out.value = head - corr;
        return out;
    }

    Complex acc{};
    for_each_index(spec.n, N, [&](const std::vector<unsigned> &alpha, double g) {
        const bool all_positive = std::all_of(alpha.begin(), alpha.end(), [](unsigned a) { return a > 0; });
        if ((spec.kind == KernelKind::J1 && !all_positive) || (spec.kind == KernelKind::J0 && all_positive)) {
            return;
        }
        Complex m = g;
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            m *= pw[j][alpha[j]];
        }
        acc += m;
    });
    if (spec.kind == KernelKind::L) {
        out.value = 2.0 * acc.real() - 1.0;
    } else {
        out.value = acc;
    }
    return out;
}

L2Bracket j1_l2_bound(std::size_t n, unsigned truncation)
{
    if (n < 2) {
        throw std::invalid_argument("j1_l2_bound needs n >= 2");
    }
    if (truncation == 0) {
        static constexpr unsigned defaults[] = {0, 0, 4000, 400, 120, 60, 40};
        truncation = n < std::size(defaults) ? defaults[n] : 30;
    }
    if (truncation < n) {
        throw std::invalid_argument("j1_l2_bound needs truncation >= n");
    }
    const unsigned N = truncation;

    // Sum of (alpha!/|alpha|!)^2 over alpha_i >= 1, |alpha| <= N.
    double lower = 0.0;
    std::function<void(std::size_t, unsigned, double)> rec = [&](std::size_t j, unsigned used, double g) {
        const unsigned remaining_parts = static_cast<unsigned>(n - j);
        if (j == n) {
            lower += g * g;
            return;
        }
        double c = 1.0;
        for (unsigned a = 1; used + a + (remaining_parts - 1) <= N; ++a) {
            c = c * static_cast<double>(used + a) / static_cast<double>(a);
            rec(j + 1, used + a, g / c);
        }
    };
    rec(0, 0, 1.0);

    double tail = 0.0;
    const double Nd = N;
    if (n == 2) {
        // k = |alpha| > N: the two terms with a coordinate equal to one give
        // 2/k^2; the k - 3 others are at most (2/(k(k-1)))^2 each.
        tail = 2.0 / Nd + 2.0 / ((Nd - 1.0) * (Nd - 1.0));
    } else {
        // C(k-1, n-1) terms, each at most 1/(k(k-1)...(k-n+2)), summed by the
        // integral comparison for 1/(k - n + 2)^(n-1).
        const double nd = static_cast<double>(n);
        tail = 1.0 / (factorial(static_cast<int>(n) - 1) * (nd - 2.0) * std::pow(Nd - nd + 2.0, nd - 2.0));
    }

    L2Bracket out;
    out.lower = lower;
    // Relative allowance for the floating point sum.
    out.upper = lower * (1.0 + 1e-12) + tail;
    out.truncation = N;
    return out;
}

double hand_bound_n3(double r)
{
    if (!(r >= 0.0) || !(r < 1.0)) {
        throw std::domain_error("hand_bound_n3 needs 0 <= r < 1");
    }
    // Sum of the two majorants:
    //   2 Re(J0 - 1) <= 2r^3 - 6 log(1-r)
    //   2 Re J1      <= r^3/(1-r) + 2 log(1-r) + 2r + r^2
    const double r3 = r * r * r;
    return 1.0 - (2.0 * r + r * r + 2.0 * r3 + r3 / (1.0 - r) - 4.0 * std::log1p(-r));
}

std::pair<double, double> hand_bound_root(int iterations)
{
    // Strictly decreasing on [0, 1), positive at 0 and negative at 1/2.
    double lo = 0.0;
    double hi = 0.5;
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hand_bound_n3(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 0.0) {
            break;
        }
    }
    return {lo, hi};
}

BohrRadiusBracket bohr_radius_bracket()
{
    return {1.0 / (3.0 * std::exp(1.0 / 3.0)), 1.0 / 3.0};
}

TheoremConstants theorem_constants(std::size_t n)
{
    if (n == 2) {
        return {1.85, 4.1};
    }
    if (n == 3) {
        return {2.6, 16.6};
    }
    throw std::invalid_argument("explicit constants are only stated for n = 2 and n = 3");
}

std::string to_string(Verdict v)
{
    return v == Verdict::Certified ? "Certified" : "NotCertified";
}

std::string to_string(ConstantReport::Kind kind)
{
    switch (kind) {
    case ConstantReport::Kind::MBound:
        return "MBound";
    case ConstantReport::Kind::RBoundCertified:
        return "RBoundCertified";
    case ConstantReport::Kind::RBoundHand:
        return "RBoundHand";
    }
    return "unknown";
}

double ConstantReport::detail(const std::string &name) const
{
    for (const auto &[key, v] : details) {
        if (key == name) {
            return v;
        }
    }
    throw std::out_of_range("constant report has no detail '" + name + "'");
}

double ConstantReport::recompute() const
{
    if (kind == Kind::MBound) {
        double s = 0.0;
        for (const auto &[name, v] : terms) {
            s += v;
        }
        return s;
    }
    return 1.0 / detail("radius");
}

ConstantReport m_bound(std::size_t n)
{
    if (n < 2 || n > 6) {
        throw std::invalid_argument("m_bound supports 2 <= n <= 6");
    }
    // M_0 = M_1 = 1: gamma is the identity in at most one variable.
    std::vector<double> m(n + 1, 1.0);
    ConstantReport report;
    for (std::size_t k = 2; k <= n; ++k) {
        std::vector<std::pair<std::string, double>> terms;
        // Slices with j >= 1 coordinates set to zero, by inclusion-exclusion.
        for (std::size_t j = 1; j <= k; ++j) {
            const double c = binomial(static_cast<int>(k), static_cast<int>(j));
            terms.emplace_back("C(" + std::to_string(k) + "," + std::to_string(j) + ")*M_" + std::to_string(k - j),
                               c * m[k - j]);
        }
        const auto l2 = j1_l2_bound(k);
        terms.emplace_back("sqrt(||J1||^2 upper, n=" + std::to_string(k) + ")", std::sqrt(l2.upper));
        double s = 0.0;
        for (const auto &[name, v] : terms) {
            s += v;
        }
        m[k] = s;
        if (k == n) {
            report.terms = std::move(terms);
            report.details.emplace_back("j1_l2_lower", l2.lower);
            report.details.emplace_back("j1_l2_upper", l2.upper);
            report.details.emplace_back("j1_l2_truncation", l2.truncation);
        }
        report.details.emplace_back("M_" + std::to_string(k), m[k]);
    }
    report.n = n;
    report.kind = ConstantReport::Kind::MBound;
    report.value = m[n];
    return report;
}

ConstantReport r_bound(std::size_t n, RBoundMode mode, const CertifyOptions &opts)
{
    ConstantReport report;
    report.n = n;
    if (mode == RBoundMode::Hand) {
        if (n != 3) {
            throw std::invalid_argument("the hand estimate is for n = 3");
        }
        const auto [lo, hi] = hand_bound_root();
        report.kind = ConstantReport::Kind::RBoundHand;
        report.details.emplace_back("radius", lo);
        report.details.emplace_back("first_nonpositive", hi);
        report.details.emplace_back("hand_bound_at_radius", hand_bound_n3(lo));
        report.value = 1.0 / lo;
        return report;
    }

    if (n != 2 && n != 3) {
        throw std::invalid_argument("certified R bounds use L' and need n = 2 or 3");
    }
    const KernelSpec spec{KernelKind::LPrime, n, kDefaultTruncation};
    double lo = 0.0;
    double hi = 0.99;
    std::optional<Certificate> best;
    for (int i = 0; i < kRBoundIterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        auto cert = certify_positivity(spec, mid, opts);
        if (cert.certified()) {
            lo = mid;
            best = std::move(cert);
        } else {
            hi = mid;
        }
    }
    if (!best) {
        throw std::runtime_error("no radius could be certified");
    }
    report.kind = ConstantReport::Kind::RBoundCertified;
    report.details.emplace_back("radius", best->radius);
    report.details.emplace_back("first_uncertified", hi);
    report.details.emplace_back("margin", best->margin);
    report.value = 1.0 / best->radius;
    report.certificates.push_back(std::move(*best));
    return report;
}

} // namespace symcalc
