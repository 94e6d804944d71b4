#include "symcalc/polynorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "symcalc/parallel.hpp"

namespace symcalc {

namespace {

// Flattened term list of a polynomial restricted to the torus, with the
// coefficient majorants that control its angular derivatives.
class TorusEvaluator {
public:
    explicit TorusEvaluator(const Poly &p) : m_n(p.nvars()), m_maxdeg(p.nvars(), 0)
    {
        m_coeffs.reserve(p.size());
        m_exps.reserve(p.size() * m_n);
        m_first.assign(m_n, 0.0);
        m_second.assign(m_n * m_n, 0.0);
        for (const auto &[alpha, c] : p.terms()) {
            const double a = std::abs(c);
            m_coeffs.push_back(c);
            m_c0 += a;
            for (std::size_t j = 0; j < m_n; ++j) {
                m_exps.push_back(alpha[j]);
                m_maxdeg[j] = std::max(m_maxdeg[j], alpha[j]);
                m_first[j] += a * alpha[j];
                for (std::size_t k = 0; k < m_n; ++k) {
                    m_second[j * m_n + k] += a * alpha[j] * alpha[k];
                }
            }
        }
        for (double f : m_first) {
            m_g1 += f;
        }
        // |d_j d_k |q|^2| <= 2 (|d_j q| |d_k q| + |q| |d_j d_k q|)
        for (std::size_t j = 0; j < m_n; ++j) {
            for (std::size_t k = 0; k < m_n; ++k) {
                m_curvature += 2.0 * (m_first[j] * m_first[k] + m_c0 * m_second[j * m_n + k]);
            }
        }
    }

    struct Sample {
        double modulus = 0.0;
        double squared = 0.0;
        double grad_l1 = 0.0;
    };

    Sample eval(std::span<const double> angles) const
    {
        std::vector<std::vector<Complex>> pw(m_n);
        for (std::size_t j = 0; j < m_n; ++j) {
            pw[j].resize(m_maxdeg[j] + 1);
            pw[j][0] = 1.0;
            const Complex z = std::polar(1.0, angles[j]);
            for (std::size_t a = 1; a < pw[j].size(); ++a) {
                pw[j][a] = pw[j][a - 1] * z;
            }
        }
        Complex q{};
        std::vector<Complex> dq(m_n, Complex{});
        for (std::size_t t = 0; t < m_coeffs.size(); ++t) {
            Complex m = m_coeffs[t];
            const auto *e = &m_exps[t * m_n];
            for (std::size_t j = 0; j < m_n; ++j) {
                m *= pw[j][e[j]];
            }
            q += m;
            for (std::size_t j = 0; j < m_n; ++j) {
                dq[j] += static_cast<double>(e[j]) * m;
            }
        }
        Sample s;
        s.modulus = std::abs(q);
        s.squared = std::norm(q);
        // d/dtheta_j z^alpha = i alpha_j z^alpha, so d_j |q|^2 = 2 Re(conj(q) i dq_j).
        for (std::size_t j = 0; j < m_n; ++j) {
            s.grad_l1 += std::abs(2.0 * std::real(std::conj(q) * Complex{0.0, 1.0} * dq[j]));
        }
        return s;
    }

    // Upper bound for |q| on the cube of half-width h around the sample.
    double cell_bound(const Sample &s, double h) const
    {
        const double first = s.modulus + h * m_g1;
        const double second2 = s.squared + h * s.grad_l1 + 0.5 * h * h * m_curvature;
        const double second = std::sqrt(std::max(0.0, second2));
        return std::min(first, second) + rounding();
    }

    double rounding() const
    {
        return 64.0 * std::numeric_limits<double>::epsilon() * m_c0 * static_cast<double>(m_coeffs.size() + 1);
    }

    std::size_t n() const { return m_n; }
    double c0() const { return m_c0; }
    double g1() const { return m_g1; }
    std::span<const double> first() const { return m_first; }

private:
    std::size_t m_n;
    std::vector<unsigned> m_maxdeg;
    std::vector<Complex> m_coeffs;
    std::vector<unsigned> m_exps;
    std::vector<double> m_first;
    std::vector<double> m_second;
    double m_c0 = 0.0;
    double m_g1 = 0.0;
    double m_curvature = 0.0;
};

struct Cell {
    std::vector<double> center;
    double bound = 0.0;
};

std::size_t ipow(std::size_t base, std::size_t exp)
{
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

NormEstimate torus_sup(const Poly &scaled, const Domain &dom, const SupNormOptions &opts)
{
    const TorusEvaluator ev(scaled);
    const std::size_t n = ev.n();
    const int grid = opts.grid;
    const double step = 2.0 * std::numbers::pi / grid;

    NormEstimate out;
    out.params.domain = dom.to_string();
    out.params.grid = grid;
    out.params.refine = opts.refine;

    if (scaled.is_zero()) {
        return out;
    }

    const std::size_t points = ipow(static_cast<std::size_t>(grid), n);
    std::vector<Cell> cells(points);
    std::vector<double> sampled(points);
    double h = step / 2.0;
    parallel_for(points, opts.threads, [&](std::size_t k) {
        std::vector<double> angles(n);
        std::size_t rest = k;
        for (std::size_t j = 0; j < n; ++j) {
            angles[j] = step * static_cast<double>(rest % static_cast<std::size_t>(grid));
            rest /= static_cast<std::size_t>(grid);
        }
        const auto s = ev.eval(angles);
        cells[k].center = std::move(angles);
        cells[k].bound = ev.cell_bound(s, h);
        sampled[k] = s.modulus;
    });
    out.params.evaluations = points;
    double incumbent = *std::max_element(sampled.begin(), sampled.end());

    double settled = 0.0;
    const std::size_t fan = ipow(2, n);
    int depth = 0;
    for (int level = 1; level <= opts.refine; ++level) {
        std::vector<Cell> active;
        for (auto &c : cells) {
            if (c.bound > incumbent) {
                active.push_back(std::move(c));
            } else {
                settled = std::max(settled, c.bound);
            }
        }
        cells.clear();
        if (active.empty()) {
            depth = level - 1;
            break;
        }
        if (active.size() * fan > opts.max_cells) {
            cells = std::move(active);
            break;
        }
        const double child_h = h / 2.0;
        std::vector<Cell> children(active.size() * fan);
        std::vector<double> moduli(children.size());
        parallel_for(children.size(), opts.threads, [&](std::size_t idx) {
            const auto &parent = active[idx / fan];
            const std::size_t corner = idx % fan;
            std::vector<double> angles(parent.center);
            for (std::size_t j = 0; j < n; ++j) {
                angles[j] += ((corner >> j) & 1u) ? child_h : -child_h;
            }
            const auto s = ev.eval(angles);
            children[idx].center = std::move(angles);
            children[idx].bound = std::min(parent.bound, ev.cell_bound(s, child_h));
            moduli[idx] = s.modulus;
        });
        out.params.evaluations += children.size();
        for (double m : moduli) {
            incumbent = std::max(incumbent, m);
        }
        cells = std::move(children);
        h = child_h;
        depth = level;
    }

    double upper = std::max(incumbent, settled);
    for (const auto &c : cells) {
        upper = std::max(upper, c.bound);
    }
    out.lower = incumbent;
    out.upper = std::min(upper, ev.c0() + ev.rounding());
    out.upper = std::max(out.upper, out.lower);
    out.params.depth_reached = depth;
    return out;
}

// Compositions of `total` into n nonnegative parts, in lexicographic order.
void compositions(std::size_t n, int total, std::vector<int> &current, std::vector<std::vector<int>> &out)
{
    if (current.size() + 1 == n) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int k = 0; k <= total; ++k) {
        current.push_back(k);
        compositions(n, total - k, current, out);
        current.pop_back();
    }
}

NormEstimate simplex_scan(const TorusEvaluator &majorants, const Poly &p, int grid, unsigned threads)
{
    const std::size_t n = p.nvars();
    std::vector<std::vector<int>> lattice;
    std::vector<int> scratch;
    compositions(n, grid, scratch, lattice);

    const std::size_t angle_points = ipow(static_cast<std::size_t>(grid), n);
    const double step = 2.0 * std::numbers::pi / grid;
    std::vector<double> best(lattice.size(), 0.0);
    parallel_for(lattice.size(), threads, [&](std::size_t li) {
        std::vector<Complex> z(n);
        double local = 0.0;
        for (std::size_t k = 0; k < angle_points; ++k) {
            std::size_t rest = k;
            for (std::size_t j = 0; j < n; ++j) {
                const double t = static_cast<double>(lattice[li][j]) / grid;
                z[j] = std::polar(t, step * static_cast<double>(rest % static_cast<std::size_t>(grid)));
                rest /= static_cast<std::size_t>(grid);
            }
            local = std::max(local, std::abs(eval(p, z)));
        }
        best[li] = local;
    });

    NormEstimate out;
    out.lower = *std::max_element(best.begin(), best.end());
    // Moduli: rounding the first n-1 barycentric coordinates down moves t by
    // at most 2(n-1)/grid in l1, and |d p / d t_j| <= sum |c| alpha_j.
    double dmax = 0.0;
    for (double f : majorants.first()) {
        dmax = std::max(dmax, f);
    }
    const double modulus_slack = dmax * 2.0 * static_cast<double>(n - 1) / grid;
    const double angle_slack = majorants.g1() * (step / 2.0);
    out.upper = out.lower + modulus_slack + angle_slack + majorants.rounding();
    out.params.grid = grid;
    out.params.evaluations = lattice.size() * angle_points;
    return out;
}

NormEstimate simplex_sup(const Poly &p, const Domain &dom, const SupNormOptions &opts)
{
    const TorusEvaluator majorants(p);
    NormEstimate out;
    out.params.domain = dom.to_string();
    out.params.grid = opts.grid;
    out.params.refine = opts.refine;
    if (p.is_zero()) {
        return out;
    }
    out.upper = std::numeric_limits<double>::infinity();
    int grid = opts.grid;
    for (int level = 0; level <= opts.refine; ++level) {
        if (level > 0) {
            // Lattice size times angle grid size at the doubled resolution.
            const double cost = std::pow(2.0 * grid, static_cast<double>(2 * dom.n - 1));
            if (cost > static_cast<double>(opts.max_cells)) {
                break;
            }
            grid *= 2;
        }
        const auto est = simplex_scan(majorants, p, grid, opts.threads);
        out.lower = std::max(out.lower, est.lower);
        out.upper = std::min(out.upper, est.upper);
        out.params.evaluations += est.params.evaluations;
        out.params.depth_reached = level;
    }
    // The l1 ball sits inside the unit polydisk.
    out.upper = std::min(out.upper, majorants.c0() + majorants.rounding());
    out.upper = std::max(out.upper, out.lower);
    return out;
}

} // namespace

Domain Domain::polydisk(std::size_t n, double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("polydisk radius must be positive");
    }
    return {Kind::Polydisk, n, radius};
}

Domain Domain::parse(const std::string &descriptor)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = descriptor.find(':', start);
        parts.push_back(descriptor.substr(start, pos - start));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    auto parse_n = [&](const std::string &s) {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size() || v < 1) {
            throw std::invalid_argument("bad variable count in domain '" + descriptor + "'");
        }
        return static_cast<std::size_t>(v);
    };
    try {
        if (parts.size() == 2 && parts[0] == "torus") {
            return torus(parse_n(parts[1]));
        }
        if (parts.size() == 2 && parts[0] == "delta") {
            return simplex_ball(parse_n(parts[1]));
        }
        if (parts.size() == 3 && parts[0] == "polydisk") {
            std::size_t used = 0;
            const double r = std::stod(parts[2], &used);
            if (used != parts[2].size()) {
                throw std::invalid_argument("bad radius");
            }
            return polydisk(parse_n(parts[1]), r);
        }
    } catch (const std::logic_error &) {
        throw std::invalid_argument("malformed domain descriptor '" + descriptor + "'");
    }
    throw std::invalid_argument("unknown domain descriptor '" + descriptor
                                + "' (expected torus:n, polydisk:n:R or delta:n)");
}

std::string Domain::to_string() const
{
    switch (kind) {
    case Kind::Torus:
        return "torus:" + std::to_string(n);
    case Kind::Polydisk: {
        std::string r = std::to_string(radius);
        r.erase(r.find_last_not_of('0') + 1);
        if (!r.empty() && r.back() == '.') {
            r.pop_back();
        }
        return "polydisk:" + std::to_string(n) + ":" + r;
    }
    case Kind::SimplexBall:
        return "delta:" + std::to_string(n);
    }
    return "unknown";
}

int SupNormOptions::default_grid(const Domain &dom)
{
    if (dom.kind == Domain::Kind::SimplexBall) {
        return dom.n <= 2 ? 16 : (dom.n == 3 ? 8 : 4);
    }
    if (dom.n <= 2) {
        return 256;
    }
    if (dom.n == 3) {
        return 64;
    }
    return dom.n == 4 ? 24 : 12;
}

NormEstimate sup_norm(const Poly &p, const Domain &dom, const SupNormOptions &opts_in)
{
    if (p.nvars() != dom.n) {
        throw std::invalid_argument("polynomial has " + std::to_string(p.nvars()) + " variables but the domain is "
                                    + dom.to_string());
    }
    SupNormOptions opts = opts_in;
    if (opts.grid == 0) {
        opts.grid = SupNormOptions::default_grid(dom);
    }
    if (opts.grid < 8 && dom.kind != Domain::Kind::SimplexBall) {
        throw std::invalid_argument("sup_norm grid must be at least 8");
    }
    if (opts.grid < 1 || opts.refine < 0) {
        throw std::invalid_argument("sup_norm grid must be positive and refine nonnegative");
    }
    switch (dom.kind) {
    case Domain::Kind::Torus:
        return torus_sup(p, dom, opts);
    case Domain::Kind::Polydisk:
        // Maximum principle: the sup over R D^n is the sup of p(R .) on T^n.
        return torus_sup(scale_vars(p, dom.radius), dom, opts);
    case Domain::Kind::SimplexBall:
        return simplex_sup(p, dom, opts);
    }
    throw std::logic_error("unhandled domain kind");
}

NormEstimate sup_norm(const Poly &p, const Domain &dom, int grid, int refine)
{
    SupNormOptions opts;
    opts.grid = grid;
    opts.refine = refine;
    return sup_norm(p, dom, opts);
}

double coeff_upper_bound(const Poly &p, double radius)
{
    if (!(radius > 0.0)) {
        throw std::invalid_argument("radius must be positive");
    }
    double s = 0.0;
    for (const auto &[alpha, c] : p.terms()) {
        s += std::abs(c) * std::pow(radius, static_cast<double>(alpha.degree()));
    }
    return s;
}

} // namespace symcalc
