#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qbl/sym_matrix.hpp"

namespace qbl {

/// Sign counts of a symmetric matrix's eigenvalues; |lambda| <= zero_tol
/// counts as null.
struct Inertia {
    std::size_t pos = 0;
    std::size_t null = 0;
    std::size_t neg = 0;
    double zero_tol = 0.0;

    std::size_t order() const noexcept { return pos + null + neg; }
    /// max(i+, i-)
    std::size_t mu() const noexcept { return pos > neg ? pos : neg; }
    /// min(i+, i-)
    std::size_t nu() const noexcept { return pos < neg ? pos : neg; }

    friend bool operator==(const Inertia& a, const Inertia& b) noexcept {
        return a.pos == b.pos && a.null == b.null && a.neg == b.neg;
    }
};

struct Spectrum {
    std::vector<double> eigenvalues;  // ascending
    double zero_tol = 0.0;

    std::size_t order() const noexcept { return eigenvalues.size(); }
    Inertia inertia() const noexcept;
};

struct Tridiagonal {
    std::vector<double> diag;     // length n
    std::vector<double> offdiag;  // length n - 1
};

/// 64 * eps * n * ||Q||_F.
double default_zero_tol(const SymMatrix& q) noexcept;

/// Householder reduction Q = H T H^T.
Tridiagonal tridiagonalize(const SymMatrix& q);

/// Implicit-shift QL on a tridiagonal matrix. At most 30n iterations in total,
/// otherwise NumericFailure.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t);

/// Number of eigenvalues of t strictly below x (Sturm sequence). Zero pivots
/// are replaced by -pivmin with pivmin = DBL_MIN * max(1, max e_i^2).
std::size_t sturm_count_below(const Tridiagonal& t, double x) noexcept;

/// Primary dense path: tridiagonalize then QL. zero_tol < 0 selects the
/// default tolerance.
Spectrum eigenvalues(const SymMatrix& q, double zero_tol = -1.0);

Inertia inertia(const SymMatrix& q, double zero_tol = -1.0);

/// Inertia from Sturm counts at -zero_tol and +zero_tol, no QL iteration.
Inertia inertia_sturm(const SymMatrix& q, double zero_tol = -1.0);
Inertia inertia_sturm(const Tridiagonal& t, double zero_tol);

std::size_t count_below(const SymMatrix& q, double x);

/// min_i |lambda_i|
double min_abs_eig(const SymMatrix& q);

/// Cyclic Jacobi rotations run to convergence. Independent of the
/// Householder/QL path; used to cross-check it.
struct JacobiResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns, matching order; empty unless requested
    int sweeps = 0;
};
JacobiResult jacobi_eigen(const SymMatrix& q, bool want_vectors = false, int max_sweeps = 100);

}  // namespace qbl
