#include "qbl/quadric.hpp"

#include <cmath>
#include <limits>

#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"

namespace qbl {

BettiResult betti_one_quadric(const SymMatrix& q, double zero_tol) {
    if (q.order() < 2) throw InvalidArgument("betti_one_quadric: need at least 2 variables");
    BettiResult r;
    r.inertia = inertia(q, zero_tol);
    r.mu = r.inertia.mu();
    r.degenerate = r.inertia.null > 0;
    r.total_betti = r.degenerate ? 0 : 2 * (q.order() - r.mu);
    return r;
}

std::size_t complex_betti_one_quadric(std::size_t n_ambient) {
    if (n_ambient == 0) throw InvalidArgument("complex_betti_one_quadric: n_ambient must be >= 1");
    return n_ambient + (n_ambient % 2 == 1 ? 1 : 0);
}

int projective_line_root_count(const SymMatrix& q, const Eigen::MatrixXd& plane) {
    if (static_cast<std::size_t>(plane.rows()) != q.order() || plane.cols() != 2) {
        throw InvalidArgument("projective_line_root_count: plane must be n x 2");
    }
    const Eigen::MatrixXd qp = q.dense() * plane;
    const double a = plane.col(0).dot(qp.col(0));
    const double b = plane.col(0).dot(qp.col(1));
    const double c = plane.col(1).dot(qp.col(1));
    const double det = a * c - b * b;
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(a * c) + b * b);
    if (det < -tol) return 2;
    if (det > tol) return 0;
    return 1;
}

double crofton_volume_estimate(const SymMatrix& q, std::size_t n_lines, SeedSpec seed) {
    if (q.order() < 2) throw InvalidArgument("crofton_volume_estimate: need at least 2 variables");
    if (n_lines == 0) throw InvalidArgument("crofton_volume_estimate: need at least one line");
    std::size_t roots = 0;
    for (std::size_t l = 0; l < n_lines; ++l) {
        Rng rng(derive_seed(seed, l));
        roots += static_cast<std::size_t>(projective_line_root_count(q, haar_frame(q.order(), 2, rng)));
    }
    return static_cast<double>(roots) / static_cast<double>(n_lines);
}

}  // namespace qbl
