#include "qbl/ensembles.hpp"

#include <cmath>
#include <numbers>

#include "qbl/error.hpp"

namespace qbl {

SymMatrix sample_goe(std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidArgument("sample_goe: n must be >= 1");
    const double off_sd = std::numbers::sqrt2 / 2.0;
    std::vector<double> packed(n * (n + 1) / 2);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) packed[k++] = (i == j) ? rng.normal() : rng.normal(off_sd);
    }
    return SymMatrix(n, std::move(packed));
}

SymMatrix sample_goe(std::size_t n, SeedSpec seed) {
    Rng rng(seed);
    return sample_goe(n, rng);
}

QuadraticForm sample_weyl_quadric(std::size_t n, Rng& rng) {
    // c_ij = 2 Q_ij is exact, so the form and its matrix share one stream.
    return matrix_to_form(sample_goe(n, rng));
}

QuadraticForm sample_weyl_quadric(std::size_t n, SeedSpec seed) {
    Rng rng(seed);
    return sample_weyl_quadric(n, rng);
}

Eigen::MatrixXd haar_rotation(std::size_t m, Rng& rng) {
    if (m == 0) throw InvalidArgument("haar_rotation: m must be >= 1");
    Eigen::MatrixXd g(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) g(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd& r = qr.matrixQR();
    for (std::size_t j = 0; j < m; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    if (q.determinant() < 0.0) q.col(0) = -q.col(0);
    return q;
}

Eigen::MatrixXd haar_rotation(std::size_t m, SeedSpec seed) {
    Rng rng(seed);
    return haar_rotation(m, rng);
}

Eigen::MatrixXd haar_frame(std::size_t m, std::size_t k, Rng& rng) {
    if (k == 0 || k > m) throw InvalidArgument("haar_frame: need 1 <= k <= m");
    // Gram-Schmidt on k Gaussian vectors has the law of the first k columns
    // of a Haar rotation; O(mk^2) instead of O(m^3).
    Eigen::MatrixXd f(m, k);
    for (std::size_t j = 0; j < k; ++j) {
        Eigen::VectorXd v(m);
        for (std::size_t i = 0; i < m; ++i) v(i) = rng.normal();
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t l = 0; l < j; ++l) v -= f.col(l).dot(v) * f.col(l);
        }
        f.col(j) = v / v.norm();
    }
    return f;
}

}  // namespace qbl
