#pragma once

// Sparse multi-index polynomials over the complex numbers and the
// coefficient transforms used throughout the library:
//
//   gamma:      c_alpha -> c_alpha * alpha! / |alpha|!
//   lambda:     inverse of gamma
//   lambda_mu:  c_alpha -> c_alpha * |alpha|!/alpha! * prod radii_j^(2 alpha_j)
//
// Polys are kept in canonical form: every stored coefficient is nonzero and
// the term map is ordered lexicographically by exponent vector.

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

namespace symcalc {

using Complex = std::complex<double>;

// Largest total degree accepted by the exact factorial transforms.
inline constexpr unsigned kMaxTransformDegree = 20;

class MultiIndex {
public:
    using value_type = std::uint32_t;

    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : m_exps(n, 0) {}
    MultiIndex(std::initializer_list<value_type> exps) : m_exps(exps) {}
    explicit MultiIndex(std::vector<value_type> exps) : m_exps(std::move(exps)) {}

    static MultiIndex unit(std::size_t n, std::size_t i);

    std::size_t size() const noexcept { return m_exps.size(); }
    value_type operator[](std::size_t i) const { return m_exps[i]; }
    value_type &operator[](std::size_t i) { return m_exps[i]; }

    auto begin() const noexcept { return m_exps.begin(); }
    auto end() const noexcept { return m_exps.end(); }
    const std::vector<value_type> &exponents() const noexcept { return m_exps; }

    // |alpha|
    unsigned degree() const noexcept;
    bool is_zero() const noexcept { return degree() == 0; }

    friend auto operator<=>(const MultiIndex &, const MultiIndex &) = default;
    friend bool operator==(const MultiIndex &, const MultiIndex &) = default;

private:
    std::vector<value_type> m_exps;
};

// Exact |alpha|! / alpha! for |alpha| <= kMaxTransformDegree.
// Throws std::domain_error above the cap.
std::uint64_t multinomial(const MultiIndex &alpha);

// alpha! / |alpha|! as a double (one rounding).
double gamma_factor(const MultiIndex &alpha);

class Poly {
public:
    using TermMap = std::map<MultiIndex, Complex>;

    explicit Poly(std::size_t nvars);
    Poly(std::size_t nvars, TermMap terms);

    static Poly constant(std::size_t nvars, Complex c);
    static Poly variable(std::size_t nvars, std::size_t i);
    static Poly monomial(MultiIndex alpha, Complex c = 1.0);

    std::size_t nvars() const noexcept { return m_nvars; }
    const TermMap &terms() const noexcept { return m_terms; }
    std::size_t size() const noexcept { return m_terms.size(); }
    bool is_zero() const noexcept { return m_terms.empty(); }

    // Highest |alpha| present, 0 for the zero polynomial.
    unsigned degree() const noexcept;

    Complex coeff(const MultiIndex &alpha) const;

    // Accumulates c into the coefficient of z^alpha, keeping canonical form.
    void add_term(const MultiIndex &alpha, Complex c);

    Poly &operator+=(const Poly &other);
    Poly &operator-=(const Poly &other);
    Poly &operator*=(Complex s);

    friend Poly operator+(Poly a, const Poly &b) { return a += b; }
    friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
    friend Poly operator*(Poly a, Complex s) { return a *= s; }
    friend Poly operator*(Complex s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly &a, const Poly &b);
    friend Poly operator-(Poly a) { return a *= -1.0; }

    friend bool operator==(const Poly &, const Poly &) = default;

private:
    void check_index(const MultiIndex &alpha) const;

    std::size_t m_nvars;
    TermMap m_terms;
};

Complex eval(const Poly &p, std::span<const Complex> z);

Poly gamma(const Poly &p);
Poly lambda(const Poly &p);

// Transform for the product of uniform measures on circles |z_j| = radii[j].
Poly lambda_mu(const Poly &p, std::span<const double> radii);
Poly lambda_mu_inverse(const Poly &p, std::span<const double> radii);

Poly abs_majorant(const Poly &p);

// Sets the listed variables (0-based) to zero.
Poly slice(const Poly &p, std::span<const std::size_t> zeroed);

// p(r z) and p(r_1 z_1, ..., r_n z_n).
Poly scale_vars(const Poly &p, double r);
Poly scale_vars(const Poly &p, std::span<const double> radii);

Poly power(const Poly &p, unsigned k);

// Maximum relative coefficientwise difference, for tolerance comparisons.
double max_coeff_diff(const Poly &a, const Poly &b);

} // namespace symcalc
