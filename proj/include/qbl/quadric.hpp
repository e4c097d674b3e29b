#pragma once

// Topology of a single quadric X = {q = 0}. Throughout the library n is the
// number of variables and the zero locus lives in RP^{n-1}.

#include <cstddef>

#include <Eigen/Dense>

#include "qbl/rng.hpp"
#include "qbl/spectra.hpp"
#include "qbl/sym_matrix.hpp"

namespace qbl {

struct BettiResult {
    std::size_t total_betti = 0;  // b(X_R); meaningless when degenerate
    std::size_t mu = 0;           // max(i+, i-)
    bool degenerate = false;      // Q has a kernel at the given tolerance
    Inertia inertia;
};

/// b(X_R) = 2(n - mu) = n + nu - mu for nondegenerate Q of order n >= 2.
BettiResult betti_one_quadric(const SymMatrix& q, double zero_tol = -1.0);

/// Total Betti number of a smooth quadric hypersurface in CP^{n_ambient}:
/// n_ambient + (1 + (-1)^{n_ambient+1}) / 2. For a form in n variables pass
/// n_ambient = n - 1.
std::size_t complex_betti_one_quadric(std::size_t n_ambient);

/// Real projective zeros of q restricted to the projective line spanned by
/// the two columns of `plane` (orthonormal, n x 2): 2, 1 or 0 according to
/// the sign of the restricted 2x2 determinant.
int projective_line_root_count(const SymMatrix& q, const Eigen::MatrixXd& plane);

/// Mean real-root count of Q over `n_lines` Haar-random projective lines.
/// Line l draws from derive_seed(seed, l), so the estimate does not depend on
/// evaluation order.
double crofton_volume_estimate(const SymMatrix& q, std::size_t n_lines, SeedSpec seed);

}  // namespace qbl
