#pragma once

// Symmetrized functional calculus for tuples of non-commuting matrices.
//
// For a multi-index alpha, symm(z^alpha)(T) is the average of all distinct
// orderings of the word containing alpha_j copies of T_j. It is computed from
// the sum of all words,
//
//   W(0) = I,    W(alpha) = sum_{i : alpha_i > 0} T_i W(alpha - e_i),
//
// which counts each distinct ordering once, so symm = W(alpha) alpha!/|alpha|!.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symcalc/multipoly.hpp"
#include "symcalc/norm_estimate.hpp"

namespace symcalc {

using Matrix = Eigen::MatrixXcd;

class MatrixTuple {
public:
    explicit MatrixTuple(std::vector<Matrix> mats);

    std::size_t size() const noexcept { return m_mats.size(); }
    Eigen::Index dim() const noexcept { return m_mats.front().rows(); }

    const Matrix &operator[](std::size_t i) const { return m_mats[i]; }
    const std::vector<Matrix> &matrices() const noexcept { return m_mats; }

    MatrixTuple scaled(double factor) const;

private:
    std::vector<Matrix> m_mats;
};

enum class TupleConstraint {
    SumNormLeqOne,         // sum ||T_i|| <= 1
    DiamondLeqOne,         // ||sum zeta_i T_i|| <= 1 for all zeta in the closed polydisk
    EachContraction,       // max ||T_i|| <= 1
    CommutingContractions, // EachContraction plus pairwise commutation
};

std::string to_string(TupleConstraint c);
TupleConstraint parse_constraint(const std::string &name);

Matrix symm_monomial(const MultiIndex &alpha, const MatrixTuple &t);
Matrix symm_apply(const Poly &p, const MatrixTuple &t);

// Ordinary calculus p(T) = sum c_alpha T_1^alpha_1 ... T_n^alpha_n in a fixed
// order; agrees with symm_apply when the matrices commute.
Matrix ordered_apply(const Poly &p, const MatrixTuple &t);

double op_norm(const Matrix &m);

// Throws std::runtime_error if the eigensolver does not converge.
double spectral_radius(const Matrix &m);

// Hermitian real part of the Cayley transform (I + S)(I - S)^{-1}.
// Requires op_norm(S) < 1.
Matrix cayley_real_part(const Matrix &s);

Matrix zeta_dot(std::span<const Complex> zeta, const MatrixTuple &t);

struct DiamondNorm {
    NormEstimate estimate;
    // sum ||T_i||, which always dominates the diamond norm.
    double safe_bound = 0.0;
};

DiamondNorm diamond_norm(const MatrixTuple &t, int grid_per_angle = 64);

bool check_constraint(const MatrixTuple &t, TupleConstraint c, double tol = 1e-9);

enum class NormalizeMode {
    // Scale by the closed-form bound (sum or max of norms).
    Conservative,
    // DiamondLeqOne only: scale by the grid-certified diamond upper bound.
    GridCertified,
};

// Rescales every matrix by one common factor so the bound used for the
// constraint equals one. Throws std::invalid_argument for the zero tuple.
MatrixTuple normalize_to(const MatrixTuple &t, TupleConstraint c,
                         NormalizeMode mode = NormalizeMode::Conservative);

} // namespace symcalc
