#include "symcalc/multipoly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace symcalc {

namespace {

// Stored coefficients below this modulus are true zeros (underflow), never
// tolerance-pruned values.
constexpr double kZeroModulus = 1e-300;

constexpr std::array<std::uint64_t, kMaxTransformDegree + 1> make_factorials()
{
    std::array<std::uint64_t, kMaxTransformDegree + 1> f{};
    f[0] = 1;
    for (std::size_t i = 1; i < f.size(); ++i) {
        f[i] = f[i - 1] * i;
    }
    return f;
}

constexpr auto kFactorials = make_factorials();

bool is_true_zero(Complex c) { return std::abs(c) < kZeroModulus; }

void check_radii(const Poly &p, std::span<const double> radii)
{
    if (radii.size() != p.nvars()) {
        throw std::invalid_argument("radii length " + std::to_string(radii.size())
                                    + " does not match nvars " + std::to_string(p.nvars()));
    }
    for (double r : radii) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("radii must be positive and finite");
        }
    }
}

double moment(const MultiIndex &alpha, std::span<const double> radii)
{
    double m = 1.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        m *= std::pow(radii[j], 2.0 * alpha[j]);
    }
    return m;
}

} // namespace

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i)
{
    if (i >= n) {
        throw std::invalid_argument("unit index out of range");
    }
    MultiIndex e(n);
    e[i] = 1;
    return e;
}

unsigned MultiIndex::degree() const noexcept
{
    return std::accumulate(m_exps.begin(), m_exps.end(), 0u);
}

std::uint64_t multinomial(const MultiIndex &alpha)
{
    const unsigned k = alpha.degree();
    if (k > kMaxTransformDegree) {
        throw std::domain_error("total degree " + std::to_string(k) + " exceeds the transform cap of "
                                + std::to_string(kMaxTransformDegree));
    }
    std::uint64_t denom = 1;
    for (auto a : alpha) {
        denom *= kFactorials[a];
    }
    // alpha! divides |alpha|! exactly.
    return kFactorials[k] / denom;
}

double gamma_factor(const MultiIndex &alpha)
{
    return 1.0 / static_cast<double>(multinomial(alpha));
}

Poly::Poly(std::size_t nvars) : m_nvars(nvars)
{
    if (nvars == 0) {
        throw std::invalid_argument("a polynomial needs at least one variable");
    }
}

Poly::Poly(std::size_t nvars, TermMap terms) : Poly(nvars)
{
    for (const auto &[alpha, c] : terms) {
        add_term(alpha, c);
    }
}

Poly Poly::constant(std::size_t nvars, Complex c)
{
    Poly p(nvars);
    p.add_term(MultiIndex(nvars), c);
    return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t i)
{
    Poly p(nvars);
    p.add_term(MultiIndex::unit(nvars, i), 1.0);
    return p;
}

Poly Poly::monomial(MultiIndex alpha, Complex c)
{
    Poly p(alpha.size());
    p.add_term(alpha, c);
    return p;
}

unsigned Poly::degree() const noexcept
{
    unsigned d = 0;
    for (const auto &[alpha, c] : m_terms) {
        d = std::max(d, alpha.degree());
    }
    return d;
}

Complex Poly::coeff(const MultiIndex &alpha) const
{
    auto it = m_terms.find(alpha);
    return it == m_terms.end() ? Complex{} : it->second;
}

void Poly::check_index(const MultiIndex &alpha) const
{
    if (alpha.size() != m_nvars) {
        throw std::invalid_argument("multi-index of length " + std::to_string(alpha.size())
                                    + " used with a polynomial in " + std::to_string(m_nvars) + " variables");
    }
}

void Poly::add_term(const MultiIndex &alpha, Complex c)
{
    check_index(alpha);
    auto [it, inserted] = m_terms.try_emplace(alpha, c);
    if (!inserted) {
        it->second += c;
    }
    if (is_true_zero(it->second)) {
        m_terms.erase(it);
    }
}

Poly &Poly::operator+=(const Poly &other)
{
    if (other.m_nvars != m_nvars) {
        throw std::invalid_argument("adding polynomials with different variable counts");
    }
    for (const auto &[alpha, c] : other.m_terms) {
        add_term(alpha, c);
    }
    return *this;
}

Poly &Poly::operator-=(const Poly &other)
{
    if (other.m_nvars != m_nvars) {
        throw std::invalid_argument("subtracting polynomials with different variable counts");
    }
    for (const auto &[alpha, c] : other.m_terms) {
        add_term(alpha, -c);
    }
    return *this;
}

Poly &Poly::operator*=(Complex s)
{
    TermMap scaled;
    for (const auto &[alpha, c] : m_terms) {
        const Complex v = c * s;
        if (!is_true_zero(v)) {
            scaled.emplace_hint(scaled.end(), alpha, v);
        }
    }
    m_terms = std::move(scaled);
    return *this;
}

Poly operator*(const Poly &a, const Poly &b)
{
    if (a.m_nvars != b.m_nvars) {
        throw std::invalid_argument("multiplying polynomials with different variable counts");
    }
    Poly out(a.m_nvars);
    MultiIndex sum(a.m_nvars);
    for (const auto &[ia, ca] : a.m_terms) {
        for (const auto &[ib, cb] : b.m_terms) {
            for (std::size_t j = 0; j < sum.size(); ++j) {
                sum[j] = ia[j] + ib[j];
            }
            out.add_term(sum, ca * cb);
        }
    }
    return out;
}

Complex eval(const Poly &p, std::span<const Complex> z)
{
    if (z.size() != p.nvars()) {
        throw std::invalid_argument("evaluation point has length " + std::to_string(z.size()) + ", expected "
                                    + std::to_string(p.nvars()));
    }
    Complex acc{};
    for (const auto &[alpha, c] : p.terms()) {
        Complex m = c;
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            for (unsigned e = 0; e < alpha[j]; ++e) {
                m *= z[j];
            }
        }
        acc += m;
    }
    return acc;
}

Poly gamma(const Poly &p)
{
    Poly out(p.nvars());
    for (const auto &[alpha, c] : p.terms()) {
        out.add_term(alpha, c / static_cast<double>(multinomial(alpha)));
    }
    return out;
}

Poly lambda(const Poly &p)
{
    Poly out(p.nvars());
    for (const auto &[alpha, c] : p.terms()) {
        out.add_term(alpha, c * static_cast<double>(multinomial(alpha)));
    }
    return out;
}

Poly lambda_mu(const Poly &p, std::span<const double> radii)
{
    check_radii(p, radii);
    Poly out(p.nvars());
    for (const auto &[alpha, c] : p.terms()) {
        out.add_term(alpha, c * (static_cast<double>(multinomial(alpha)) * moment(alpha, radii)));
    }
    return out;
}

Poly lambda_mu_inverse(const Poly &p, std::span<const double> radii)
{
    check_radii(p, radii);
    Poly out(p.nvars());
    for (const auto &[alpha, c] : p.terms()) {
        out.add_term(alpha, c / (static_cast<double>(multinomial(alpha)) * moment(alpha, radii)));
    }
    return out;
}

Poly abs_majorant(const Poly &p)
{
    Poly out(p.nvars());
    for (const auto &[alpha, c] : p.terms()) {
        out.add_term(alpha, std::abs(c));
    }
    return out;
}

Poly slice(const Poly &p, std::span<const std::size_t> zeroed)
{
    for (auto j : zeroed) {
        if (j >= p.nvars()) {
            throw std::invalid_argument("slice index " + std::to_string(j) + " out of range");
        }
    }
    Poly out(p.nvars());
    for (const auto &[alpha, c] : p.terms()) {
        const bool keep = std::none_of(zeroed.begin(), zeroed.end(), [&](std::size_t j) { return alpha[j] > 0; });
        if (keep) {
            out.add_term(alpha, c);
        }
    }
    return out;
}

Poly scale_vars(const Poly &p, double r)
{
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("scale factor must be positive and finite");
    }
    Poly out(p.nvars());
    for (const auto &[alpha, c] : p.terms()) {
        out.add_term(alpha, c * std::pow(r, static_cast<double>(alpha.degree())));
    }
    return out;
}

Poly scale_vars(const Poly &p, std::span<const double> radii)
{
    if (radii.size() != p.nvars()) {
        throw std::invalid_argument("radii length does not match nvars");
    }
    for (double r : radii) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("per-variable scale factors must be nonnegative and finite");
        }
    }
    Poly out(p.nvars());
    for (const auto &[alpha, c] : p.terms()) {
        Complex v = c;
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            v *= std::pow(radii[j], static_cast<double>(alpha[j]));
        }
        out.add_term(alpha, v);
    }
    return out;
}

Poly power(const Poly &p, unsigned k)
{
    Poly result = Poly::constant(p.nvars(), 1.0);
    Poly base = p;
    while (k > 0) {
        if (k & 1u) {
            result = result * base;
        }
        k >>= 1u;
        if (k > 0) {
            base = base * base;
        }
    }
    return result;
}

double max_coeff_diff(const Poly &a, const Poly &b)
{
    if (a.nvars() != b.nvars()) {
        throw std::invalid_argument("comparing polynomials with different variable counts");
    }
    double worst = 0.0;
    auto visit = [&](const MultiIndex &alpha) {
        const Complex ca = a.coeff(alpha);
        const Complex cb = b.coeff(alpha);
        const double scale = std::max({std::abs(ca), std::abs(cb), kZeroModulus});
        worst = std::max(worst, std::abs(ca - cb) / scale);
    };
    for (const auto &[alpha, c] : a.terms()) {
        visit(alpha);
    }
    for (const auto &[alpha, c] : b.terms()) {
        visit(alpha);
    }
    return worst;
}

} // namespace symcalc
