// Positivity certification for the real kernels L and L' on r * closed polydisk.
//
// Both kernels are harmonic in each variable separately (products and sums of
// Re/Im of powers of single coordinates), so their minimum over the closed
// polydisk is attained on the distinguished boundary r T^n. On that torus the
// truncated kernel is a trigonometric series
//
//   f(theta) = head(theta) + scale * Re sum_alpha w_alpha prod_j phi_j(alpha_j, theta_j)
//
// with phi in { r^a e^{i a t}, r^a sin(a t), r^a cos(a t) }. For a cell of
// half-width h around c, Taylor's theorem gives
//
//   f >= f(c) - h |grad f(c)|_1 - h^2/2 sum_ij |H_ij(c)| - h^3/6 T3
//
// with T3 a global third-derivative majorant; the global first- and
// second-order forms are used too and the best bound wins. Cells that do not
// clear the truncation tail are bisected in every angle.
//
// Cell centres sit on a dyadic lattice (integer multiples of the current
// half-width), so a refinement level is a sorted list of integer points and the
// series is contracted one axis at a time, sharing work between points with a
// common prefix.

#include "symcalc/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "symcalc/parallel.hpp"

namespace symcalc {

namespace {

constexpr std::size_t kMaxCertDims = 3;

enum class Basis { Exp, Sin, Cos };

struct SeriesModel {
    std::size_t n = 0;
    unsigned N = 0;
    double r = 0.0;
    std::array<Basis, kMaxCertDims> basis{};
    double scale = 1.0;
    bool poisson_head = false;
    // Dense (N+1)^n coefficients, axis 0 slowest; zero above total degree N.
    std::vector<double> coeffs;
    std::array<std::size_t, kMaxCertDims> stride{};
    std::size_t nonzero = 0;

    double value_majorant = 0.0;
    double lipschitz = 0.0;
    double curvature = 0.0;
    double third = 0.0;
};

using IndexArray = std::array<unsigned, kMaxCertDims>;

void fill_coefficients(SeriesModel &m, const std::function<double(const IndexArray &)> &coef)
{
    const std::size_t side = m.N + 1;
    std::size_t total = 1;
    for (std::size_t j = m.n; j-- > 0;) {
        m.stride[j] = total;
        total *= side;
    }
    m.coeffs.assign(total, 0.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        IndexArray alpha{};
        unsigned degree = 0;
        for (std::size_t j = 0; j < m.n; ++j) {
            alpha[j] = static_cast<unsigned>((idx / m.stride[j]) % side);
            degree += alpha[j];
        }
        if (degree > m.N) {
            continue;
        }
        const double c = coef(alpha);
        if (c != 0.0) {
            m.coeffs[idx] = c;
            ++m.nonzero;
        }
    }
}

// Majorant of sum over ordered k-tuples of axes of sup |d^k prod_j P(theta_j)|,
// given p[m] >= sup |P^{(m)}|.
double head_majorant(std::size_t n, int k, const std::array<double, 4> &p)
{
    std::size_t tuples = 1;
    for (int i = 0; i < k; ++i) {
        tuples *= n;
    }
    double total = 0.0;
    for (std::size_t t = 0; t < tuples; ++t) {
        std::array<int, kMaxCertDims> mult{};
        std::size_t rest = t;
        for (int i = 0; i < k; ++i) {
            ++mult[rest % n];
            rest /= n;
        }
        double prod = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            prod *= p[static_cast<std::size_t>(mult[j])];
        }
        total += prod;
    }
    return total;
}

SeriesModel build_model(const KernelSpec &spec, double r)
{
    SeriesModel m;
    m.n = spec.n;
    m.N = spec.truncation;
    m.r = r;
    auto g_of = [&](const IndexArray &alpha) {
        return gamma_factor_approx(std::span<const unsigned>(alpha.data(), spec.n));
    };
    if (spec.kind == KernelKind::L) {
        // L = 1 + 2 Re sum_{|alpha| >= 1} g_alpha eta^alpha
        m.basis.fill(Basis::Exp);
        m.scale = 2.0;
        fill_coefficients(m, [&](const IndexArray &alpha) {
            unsigned d = 0;
            for (std::size_t j = 0; j < spec.n; ++j) {
                d += alpha[j];
            }
            return d == 0 ? 0.0 : g_of(alpha);
        });
    } else {
        // eta^a - conj(eta)^a = 2i r^a sin(a t) and eta^c + conj(eta)^c = 2 r^c cos(c t),
        // so the subtracted correction becomes +4 sum w s s (n = 2), +8 sum w s s c (n = 3).
        m.poisson_head = true;
        m.basis = {Basis::Sin, Basis::Sin, Basis::Cos};
        m.scale = spec.n == 2 ? 4.0 : 8.0;
        fill_coefficients(m, [&](const IndexArray &alpha) {
            if (alpha[0] == 0 || alpha[1] == 0) {
                return 0.0;
            }
            return 1.0 - g_of(alpha);
        });
    }

    std::array<double, 4> s{};
    const std::size_t side = m.N + 1;
    for (std::size_t idx = 0; idx < m.coeffs.size(); ++idx) {
        if (m.coeffs[idx] == 0.0) {
            continue;
        }
        double degree = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) {
            degree += static_cast<double>((idx / m.stride[j]) % side);
        }
        // sum over ordered k-tuples of axes of alpha_i alpha_j ... = |alpha|^k
        double t = std::abs(m.coeffs[idx]) * std::pow(r, degree);
        for (auto &sk : s) {
            sk += t;
            t *= degree;
        }
    }
    std::array<double, 4> head{1.0, 0.0, 0.0, 0.0};
    if (m.poisson_head) {
        // P = 1 + 2 sum r^k cos(k t), so |P^{(m)}| <= 2 sum k^m r^k for m >= 1.
        const double q = 1.0 - r;
        const std::array<double, 4> p{
            (1.0 + r) / q,
            2.0 * r / (q * q),
            2.0 * r * (1.0 + r) / (q * q * q),
            2.0 * r * (1.0 + 4.0 * r + r * r) / (q * q * q * q),
        };
        for (int k = 0; k < 4; ++k) {
            head[static_cast<std::size_t>(k)] = head_majorant(m.n, k, p);
        }
    }
    m.value_majorant = head[0] + m.scale * s[0];
    m.lipschitz = head[1] + m.scale * s[1];
    m.curvature = head[2] + m.scale * s[2];
    m.third = head[3] + m.scale * s[3];
    return m;
}

// phi, phi', phi'' for a = 0..N at angle t, by the complex power recurrence.
template <typename S>
void fill_basis([[maybe_unused]] Basis kind, double r, double t, unsigned N, std::array<S *, 3> out)
{
    const Complex step = std::polar(r, t);
    Complex z{1.0, 0.0};
    for (unsigned a = 0; a <= N; ++a) {
        const double ad = static_cast<double>(a);
        if constexpr (std::is_same_v<S, Complex>) {
            out[0][a] = z;
            out[1][a] = Complex{0.0, ad} * z;
            out[2][a] = -ad * ad * z;
        } else {
            if (kind == Basis::Sin) {
                out[0][a] = z.imag();
                out[1][a] = ad * z.real();
                out[2][a] = -ad * ad * z.imag();
            } else {
                out[0][a] = z.real();
                out[1][a] = -ad * z.imag();
                out[2][a] = -ad * ad * z.real();
            }
        }
        z *= step;
    }
}

template <typename S>
double real_part(S v)
{
    if constexpr (std::is_same_v<S, Complex>) {
        return v.real();
    } else {
        return v;
    }
}

struct Jet {
    double value = 0.0;
    std::array<double, kMaxCertDims> grad{};
    std::array<std::array<double, kMaxCertDims>, kMaxCertDims> hess{};
};

// Poisson kernel and its first two angular derivatives.
std::array<double, 3> poisson_jet(double r, double t)
{
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double num = 1.0 - r * r;
    const double d = 1.0 - 2.0 * r * c + r * r;
    const double d1 = 2.0 * r * s;
    const double d2 = 2.0 * r * c;
    return {num / d, -num * d1 / (d * d), -num * (d2 / (d * d) - 2.0 * d1 * d1 / (d * d * d))};
}

Jet head_jet(const SeriesModel &m, const std::array<double, kMaxCertDims> &theta)
{
    Jet j;
    j.value = 1.0;
    if (!m.poisson_head) {
        return j;
    }
    std::array<std::array<double, 3>, kMaxCertDims> p{};
    for (std::size_t i = 0; i < m.n; ++i) {
        p[i] = poisson_jet(m.r, theta[i]);
    }
    auto product = [&](std::size_t a, int da, std::size_t b, int db) {
        double v = 1.0;
        for (std::size_t i = 0; i < m.n; ++i) {
            int order = 0;
            if (i == a) {
                order += da;
            }
            if (i == b) {
                order += db;
            }
            v *= p[i][static_cast<std::size_t>(order)];
        }
        return v;
    };
    j.value = product(0, 0, 0, 0);
    for (std::size_t a = 0; a < m.n; ++a) {
        j.grad[a] = product(a, 1, a, 0);
        for (std::size_t b = 0; b < m.n; ++b) {
            j.hess[a][b] = product(a, 1, b, 1);
        }
    }
    return j;
}

struct Point {
    std::array<std::int64_t, kMaxCertDims> c{};
    double parent_lower = -std::numeric_limits<double>::infinity();
};

// Derivative orders per axis, total order <= 2.
using Orders = std::array<std::uint8_t, kMaxCertDims>;

// Evaluates value, gradient and Hessian of the series part at lattice points
// theta = c * h, sharing axis contractions between points with equal prefixes.
template <typename S>
class LatticeEvaluator {
public:
    explicit LatticeEvaluator(const SeriesModel &m) : m_model(m)
    {
        // states[j] lists the derivative orders carried once j axes are fixed.
        m_states.resize(m.n + 1);
        m_states[0].push_back(Orders{});
        for (std::size_t j = 0; j < m.n; ++j) {
            for (const auto &o : m_states[j]) {
                const int used = o[0] + o[1] + o[2];
                for (int k = 0; k + used <= 2; ++k) {
                    Orders next = o;
                    next[j] = static_cast<std::uint8_t>(k);
                    m_states[j + 1].push_back(next);
                }
            }
        }
        m_start.assign(m.coeffs.begin(), m.coeffs.end());
    }

    // points[begin, end) must share no prefix with points outside the range
    // when run concurrently; they are sorted lexicographically by c.
    void run(const std::vector<Point> &points, std::size_t begin, std::size_t end, double h,
             std::vector<Jet> &out) const
    {
        const std::size_t n = m_model.n;
        const std::size_t side = m_model.N + 1;
        // level[j][s]: contraction over the first j axes for state s.
        std::vector<std::vector<std::vector<S>>> level(n + 1);
        for (std::size_t j = 0; j <= n; ++j) {
            level[j].resize(m_states[j].size());
        }
        std::array<std::vector<S>, 3> basis;
        for (auto &b : basis) {
            b.resize(side);
        }

        const std::array<std::int64_t, kMaxCertDims> *prev = nullptr;
        for (std::size_t idx = begin; idx < end; ++idx) {
            const auto &c = points[idx].c;
            std::size_t first = 0;
            if (prev != nullptr) {
                while (first < n && (*prev)[first] == c[first]) {
                    ++first;
                }
            }
            for (std::size_t j = first; j < n; ++j) {
                const double theta = static_cast<double>(c[j]) * h;
                fill_basis<S>(m_model.basis[j], m_model.r, theta, m_model.N,
                              {basis[0].data(), basis[1].data(), basis[2].data()});
                contract(j, level, basis);
            }
            prev = &c;

            Jet jet;
            const auto &finals = m_states[n];
            for (std::size_t s = 0; s < finals.size(); ++s) {
                const double v = real_part(level[n][s][0]);
                std::array<std::size_t, 2> axes{};
                std::size_t count = 0;
                for (std::size_t a = 0; a < n; ++a) {
                    for (int k = 0; k < finals[s][a]; ++k) {
                        axes[count++] = a;
                    }
                }
                if (count == 0) {
                    jet.value = v;
                } else if (count == 1) {
                    jet.grad[axes[0]] = v;
                } else {
                    jet.hess[axes[0]][axes[1]] = v;
                    jet.hess[axes[1]][axes[0]] = v;
                }
            }
            out[idx] = jet;
        }
    }

private:
    void contract(std::size_t j, std::vector<std::vector<std::vector<S>>> &level,
                  const std::array<std::vector<S>, 3> &basis) const
    {
        const std::size_t side = m_model.N + 1;
        const auto &from_states = m_states[j];
        const auto &to_states = m_states[j + 1];
        for (std::size_t t = 0; t < to_states.size(); ++t) {
            Orders parent = to_states[t];
            const int k = parent[j];
            parent[j] = 0;
            const auto it = std::find(from_states.begin(), from_states.end(), parent);
            const std::size_t s = static_cast<std::size_t>(it - from_states.begin());
            const std::vector<S> &src = j == 0 ? m_start : level[j][s];
            const std::size_t rest = src.size() / side;
            std::vector<S> &dst = level[j + 1][t];
            dst.assign(rest, S{});
            const S *b = basis[static_cast<std::size_t>(k)].data();
            for (std::size_t a = 0; a < side; ++a) {
                const S ba = b[a];
                if (ba == S{}) {
                    continue;
                }
                const S *row = &src[a * rest];
                for (std::size_t q = 0; q < rest; ++q) {
                    dst[q] += ba * row[q];
                }
            }
        }
    }

    const SeriesModel &m_model;
    std::vector<std::vector<Orders>> m_states;
    std::vector<S> m_start;
};

double wrap_angle(double t)
{
    const double two_pi = 2.0 * std::numbers::pi;
    t = std::fmod(t, two_pi);
    return t < 0.0 ? t + two_pi : t;
}

template <typename S>
Certificate run_certification(const KernelSpec &spec, double r, const CertifyOptions &opts)
{
    const SeriesModel model = build_model(spec, r);
    const std::size_t n = spec.n;
    const int grid = opts.grid > 0 ? opts.grid : CertifyOptions::default_grid(n);
    if (grid < 8) {
        throw std::invalid_argument("certification grid must be at least 8");
    }
    const double step = 2.0 * std::numbers::pi / grid;

    Certificate cert;
    cert.kernel = spec;
    cert.radius = r;
    cert.grid = grid;
    cert.refine_depth = opts.refine_depth;
    cert.max_cells = opts.max_cells;
    cert.tail_bound = kernel_tail(spec, r);
    cert.lipschitz_bound = model.lipschitz;
    cert.curvature_bound = model.curvature;
    cert.third_order_bound = model.third;
    // Generous forward-error allowance for sums of nonzero + O(n) terms, each
    // bounded by the value majorant (and the derivative terms scaled by a cell).
    cert.rounding_bound = 16.0 * std::numeric_limits<double>::epsilon()
                          * static_cast<double>(model.nonzero + 16 * n)
                          * (model.value_majorant + step * model.lipschitz + step * step * model.curvature);

    const LatticeEvaluator<S> evaluator(model);

    // Level 0: centres k * step, i.e. lattice index 2k at half-width step / 2.
    std::vector<Point> points;
    {
        std::size_t total = 1;
        for (std::size_t j = 0; j < n; ++j) {
            total *= static_cast<std::size_t>(grid);
        }
        points.resize(total);
        for (std::size_t k = 0; k < total; ++k) {
            std::size_t rest = k;
            for (std::size_t j = n; j-- > 0;) {
                points[k].c[j] = 2 * static_cast<std::int64_t>(rest % static_cast<std::size_t>(grid));
                rest /= static_cast<std::size_t>(grid);
            }
        }
    }

    double h = step / 2.0;
    double min_value = std::numeric_limits<double>::infinity();
    std::array<double, kMaxCertDims> argmin{};
    double settled = std::numeric_limits<double>::infinity();
    double unresolved = std::numeric_limits<double>::infinity();
    bool stopped = false;
    int depth = 0;
    const std::size_t fan = std::size_t{1} << n;
    std::vector<Jet> jets;

    for (;;) {
        jets.assign(points.size(), Jet{});
        // Chunks split where the leading coordinate changes.
        std::vector<std::size_t> cuts{0};
        const std::size_t chunk = std::max<std::size_t>(1, points.size() / (8 * std::max(1u, opts.threads)));
        for (std::size_t i = chunk; i < points.size(); ++i) {
            if (i - cuts.back() >= chunk && points[i].c[0] != points[i - 1].c[0]) {
                cuts.push_back(i);
            }
        }
        cuts.push_back(points.size());
        parallel_for(cuts.size() - 1, opts.threads,
                     [&](std::size_t q) { evaluator.run(points, cuts[q], cuts[q + 1], h, jets); });
        cert.evaluations += points.size();

        std::vector<Point> active;
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::array<double, kMaxCertDims> theta{};
            for (std::size_t j = 0; j < n; ++j) {
                theta[j] = static_cast<double>(points[i].c[j]) * h;
            }
            const Jet head = head_jet(model, theta);
            const double value = head.value + model.scale * jets[i].value;
            double grad_l1 = 0.0;
            double hess_l1 = 0.0;
            for (std::size_t a = 0; a < n; ++a) {
                grad_l1 += std::abs(head.grad[a] + model.scale * jets[i].grad[a]);
                for (std::size_t b = 0; b < n; ++b) {
                    hess_l1 += std::abs(head.hess[a][b] + model.scale * jets[i].hess[a][b]);
                }
            }
            const double first = value - h * model.lipschitz;
            const double second = value - h * grad_l1 - 0.5 * h * h * model.curvature;
            const double third = value - h * grad_l1 - 0.5 * h * h * hess_l1 - h * h * h * model.third / 6.0;
            const double lower =
                std::max(points[i].parent_lower, std::max({first, second, third}) - cert.rounding_bound);

            if (value < min_value) {
                min_value = value;
                argmin = theta;
            }
            if (lower > cert.tail_bound) {
                settled = std::min(settled, lower);
            } else {
                Point p = points[i];
                p.parent_lower = lower;
                active.push_back(p);
            }
        }

        if (min_value <= cert.tail_bound) {
            cert.note = "kernel value at a sample point does not exceed the truncation bound";
            stopped = true;
        } else if (!active.empty() && depth >= opts.refine_depth) {
            cert.note = "refinement depth exhausted";
            stopped = true;
        } else if (active.size() * fan > opts.max_cells) {
            cert.note = "refinement cell budget exhausted";
            stopped = true;
        }
        if (stopped || active.empty()) {
            for (const auto &p : active) {
                unresolved = std::min(unresolved, p.parent_lower);
            }
            break;
        }

        points.clear();
        points.reserve(active.size() * fan);
        for (const auto &p : active) {
            for (std::size_t corner = 0; corner < fan; ++corner) {
                Point child;
                child.parent_lower = p.parent_lower;
                for (std::size_t j = 0; j < n; ++j) {
                    child.c[j] = 2 * p.c[j] + (((corner >> j) & 1u) ? 1 : -1);
                }
                points.push_back(child);
            }
        }
        std::sort(points.begin(), points.end(), [](const Point &a, const Point &b) { return a.c < b.c; });
        h /= 2.0;
        ++depth;
    }

    const double final_lower = std::min(settled, unresolved);
    cert.depth_reached = depth;
    cert.min_on_grid = min_value;
    cert.argmin_angles.clear();
    for (std::size_t j = 0; j < n; ++j) {
        cert.argmin_angles.push_back(wrap_angle(argmin[j]));
    }
    cert.slack = std::max(0.0, min_value - final_lower);
    cert.margin = cert.min_on_grid - cert.tail_bound - cert.slack;
    cert.verdict = !stopped && cert.margin > 0.0 ? Verdict::Certified : Verdict::NotCertified;
    if (cert.verdict == Verdict::Certified) {
        cert.note = "minimum over r*T^n bounds the closed polydisk (separately harmonic kernel)";
    } else if (cert.note.empty()) {
        cert.note = "margin is not positive";
    }
    return cert;
}

} // namespace

Certificate certify_positivity(const KernelSpec &spec, double r, const CertifyOptions &opts)
{
    spec.validate();
    if (spec.kind != KernelKind::L && spec.kind != KernelKind::LPrime) {
        throw std::invalid_argument("positivity certification is for the real kernels l and lprime");
    }
    if (spec.n > kMaxCertDims) {
        throw std::invalid_argument("positivity certification supports n <= 3");
    }
    if (!(r > 0.0) || !(r < 1.0)) {
        throw std::invalid_argument("certification radius must lie in (0, 1)");
    }
    if (opts.refine_depth < 0) {
        throw std::invalid_argument("refine depth must be nonnegative");
    }
    if (spec.kind == KernelKind::L) {
        return run_certification<Complex>(spec, r, opts);
    }
    return run_certification<double>(spec, r, opts);
}

bool recheck_certificate(const Certificate &cert, unsigned threads)
{
    CertifyOptions opts;
    opts.grid = cert.grid;
    opts.refine_depth = cert.refine_depth;
    opts.max_cells = cert.max_cells;
    opts.threads = threads;
    const auto again = certify_positivity(cert.kernel, cert.radius, opts);
    const double tol = 1e-12 * (1.0 + std::abs(cert.margin));
    return again.verdict == cert.verdict && std::abs(again.margin - cert.margin) <= tol;
}

} // namespace symcalc
