#include "symcalc/ncalc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace symcalc {

namespace {

// Memoized sums of all words W(alpha), shared across the monomials of one
// polynomial.
class WordSums {
public:
    explicit WordSums(const MatrixTuple &t) : m_t(t) {}

    const Matrix &get(const MultiIndex &alpha)
    {
        if (auto it = m_memo.find(alpha); it != m_memo.end()) {
            return it->second;
        }
        const auto d = m_t.dim();
        Matrix w;
        if (alpha.is_zero()) {
            w = Matrix::Identity(d, d);
        } else {
            w = Matrix::Zero(d, d);
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                if (alpha[i] == 0) {
                    continue;
                }
                MultiIndex lower = alpha;
                --lower[i];
                w.noalias() += m_t[i] * get(lower);
            }
        }
        return m_memo.emplace(alpha, std::move(w)).first->second;
    }

private:
    const MatrixTuple &m_t;
    std::map<MultiIndex, Matrix> m_memo;
};

void check_alpha(const MultiIndex &alpha, const MatrixTuple &t)
{
    if (alpha.size() != t.size()) {
        throw std::invalid_argument("multi-index length " + std::to_string(alpha.size())
                                    + " does not match tuple size " + std::to_string(t.size()));
    }
    if (alpha.degree() > kMaxTransformDegree) {
        throw std::domain_error("monomial degree exceeds the cap of " + std::to_string(kMaxTransformDegree));
    }
}

double sum_of_norms(const MatrixTuple &t)
{
    double s = 0.0;
    for (const auto &m : t.matrices()) {
        s += op_norm(m);
    }
    return s;
}

double max_norm(const MatrixTuple &t)
{
    double s = 0.0;
    for (const auto &m : t.matrices()) {
        s = std::max(s, op_norm(m));
    }
    return s;
}

} // namespace

MatrixTuple::MatrixTuple(std::vector<Matrix> mats) : m_mats(std::move(mats))
{
    if (m_mats.empty()) {
        throw std::invalid_argument("a matrix tuple needs at least one matrix");
    }
    const auto d = m_mats.front().rows();
    if (d < 1) {
        throw std::invalid_argument("matrix dimension must be at least 1");
    }
    for (const auto &m : m_mats) {
        if (m.rows() != d || m.cols() != d) {
            throw std::invalid_argument("all matrices in a tuple must be square with the same dimension");
        }
    }
}

MatrixTuple MatrixTuple::scaled(double factor) const
{
    std::vector<Matrix> out;
    out.reserve(m_mats.size());
    for (const auto &m : m_mats) {
        out.push_back(m * factor);
    }
    return MatrixTuple(std::move(out));
}

std::string to_string(TupleConstraint c)
{
    switch (c) {
    case TupleConstraint::SumNormLeqOne:
        return "sum";
    case TupleConstraint::DiamondLeqOne:
        return "diamond";
    case TupleConstraint::EachContraction:
        return "contraction";
    case TupleConstraint::CommutingContractions:
        return "commuting";
    }
    return "unknown";
}

TupleConstraint parse_constraint(const std::string &name)
{
    if (name == "sum") {
        return TupleConstraint::SumNormLeqOne;
    }
    if (name == "diamond") {
        return TupleConstraint::DiamondLeqOne;
    }
    if (name == "contraction") {
        return TupleConstraint::EachContraction;
    }
    if (name == "commuting") {
        return TupleConstraint::CommutingContractions;
    }
    throw std::invalid_argument("unknown constraint '" + name + "'");
}

Matrix symm_monomial(const MultiIndex &alpha, const MatrixTuple &t)
{
    check_alpha(alpha, t);
    WordSums words(t);
    return words.get(alpha) / static_cast<double>(multinomial(alpha));
}

Matrix symm_apply(const Poly &p, const MatrixTuple &t)
{
    if (p.nvars() != t.size()) {
        throw std::invalid_argument("polynomial has " + std::to_string(p.nvars()) + " variables but the tuple has "
                                    + std::to_string(t.size()) + " matrices");
    }
    const auto d = t.dim();
    Matrix out = Matrix::Zero(d, d);
    WordSums words(t);
    for (const auto &[alpha, c] : p.terms()) {
        check_alpha(alpha, t);
        out.noalias() += (c / static_cast<double>(multinomial(alpha))) * words.get(alpha);
    }
    return out;
}

Matrix ordered_apply(const Poly &p, const MatrixTuple &t)
{
    if (p.nvars() != t.size()) {
        throw std::invalid_argument("polynomial and tuple sizes differ");
    }
    const auto d = t.dim();
    Matrix out = Matrix::Zero(d, d);
    for (const auto &[alpha, c] : p.terms()) {
        Matrix m = Matrix::Identity(d, d);
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            for (unsigned e = 0; e < alpha[j]; ++e) {
                m = m * t[j];
            }
        }
        out += c * m;
    }
    return out;
}

double op_norm(const Matrix &m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double spectral_radius(const Matrix &m)
{
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("spectral radius needs a square matrix");
    }
    Eigen::ComplexEigenSolver<Matrix> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue computation did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix cayley_real_part(const Matrix &s)
{
    if (s.rows() != s.cols()) {
        throw std::invalid_argument("Cayley transform needs a square matrix");
    }
    if (!(op_norm(s) < 1.0)) {
        throw std::domain_error("Cayley transform requires ||S|| < 1");
    }
    const auto d = s.rows();
    const Matrix id = Matrix::Identity(d, d);
    // I + S and (I - S)^{-1} commute.
    const Matrix a = (id - s).partialPivLu().solve(id + s);
    return (a + a.adjoint()) / 2.0;
}

Matrix zeta_dot(std::span<const Complex> zeta, const MatrixTuple &t)
{
    if (zeta.size() != t.size()) {
        throw std::invalid_argument("zeta length does not match tuple size");
    }
    const auto d = t.dim();
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        out += zeta[i] * t[i];
    }
    return out;
}

DiamondNorm diamond_norm(const MatrixTuple &t, int grid_per_angle)
{
    if (grid_per_angle < 8) {
        throw std::invalid_argument("diamond_norm grid must be at least 8 points per angle");
    }
    const std::size_t n = t.size();
    const double step = 2.0 * std::numbers::pi / grid_per_angle;

    // ||zeta . T|| is invariant under a common phase, so theta_1 = 0 is fixed
    // and only the remaining n - 1 angles are gridded.
    std::size_t points = 1;
    for (std::size_t i = 1; i < n; ++i) {
        points *= static_cast<std::size_t>(grid_per_angle);
    }

    std::vector<Complex> zeta(n, Complex{1.0, 0.0});
    double best = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        std::size_t rest = k;
        for (std::size_t i = 1; i < n; ++i) {
            const auto idx = rest % static_cast<std::size_t>(grid_per_angle);
            rest /= static_cast<std::size_t>(grid_per_angle);
            zeta[i] = std::polar(1.0, step * static_cast<double>(idx));
        }
        best = std::max(best, op_norm(zeta_dot(zeta, t)));
    }

    DiamondNorm out;
    out.safe_bound = sum_of_norms(t);
    // |e^{i a} - e^{i b}| <= |a - b| and every angle lies within half a step
    // of the grid.
    const double slack = out.safe_bound * (step / 2.0);
    out.estimate.lower = best;
    out.estimate.upper = std::min(best + slack, out.safe_bound);
    out.estimate.upper = std::max(out.estimate.upper, out.estimate.lower);
    out.estimate.params.domain = "torus:" + std::to_string(n);
    out.estimate.params.grid = grid_per_angle;
    out.estimate.params.evaluations = points;
    return out;
}

bool check_constraint(const MatrixTuple &t, TupleConstraint c, double tol)
{
    if (!(tol > 0.0)) {
        throw std::invalid_argument("constraint tolerance must be positive");
    }
    switch (c) {
    case TupleConstraint::SumNormLeqOne:
        return sum_of_norms(t) <= 1.0 + tol;
    case TupleConstraint::DiamondLeqOne:
        return diamond_norm(t).estimate.upper <= 1.0 + tol;
    case TupleConstraint::EachContraction:
        return max_norm(t) <= 1.0 + tol;
    case TupleConstraint::CommutingContractions:
        if (max_norm(t) > 1.0 + tol) {
            return false;
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                if (op_norm(t[i] * t[j] - t[j] * t[i]) > tol) {
                    return false;
                }
            }
        }
        return true;
    }
    return false;
}

MatrixTuple normalize_to(const MatrixTuple &t, TupleConstraint c, NormalizeMode mode)
{
    double bound = 0.0;
    switch (c) {
    case TupleConstraint::SumNormLeqOne:
        bound = sum_of_norms(t);
        break;
    case TupleConstraint::DiamondLeqOne:
        bound = mode == NormalizeMode::GridCertified ? diamond_norm(t).estimate.upper : sum_of_norms(t);
        break;
    case TupleConstraint::EachContraction:
    case TupleConstraint::CommutingContractions:
        bound = max_norm(t);
        break;
    }
    if (!(bound > 0.0)) {
        throw std::invalid_argument("cannot normalize the zero tuple");
    }
    return t.scaled(1.0 / bound);
}

} // namespace symcalc
