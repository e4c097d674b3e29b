#include "qbl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qbl/error.hpp"

namespace qbl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

Inertia Spectrum::inertia() const noexcept {
    Inertia in;
    in.zero_tol = zero_tol;
    for (double l : eigenvalues) {
        if (l > zero_tol) {
            ++in.pos;
        } else if (l < -zero_tol) {
            ++in.neg;
        } else {
            ++in.null;
        }
    }
    return in;
}

double default_zero_tol(const SymMatrix& q) noexcept {
    return 64.0 * kEps * static_cast<double>(q.order()) * q.frobenius_norm();
}

Tridiagonal tridiagonalize(const SymMatrix& q) {
    const auto n = static_cast<Eigen::Index>(q.order());
    Tridiagonal t;
    t.diag.resize(n);
    t.offdiag.resize(n > 0 ? n - 1 : 0);
    Eigen::MatrixXd a = q.dense();

    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index m = n - k - 1;
        Eigen::VectorXd v = a.col(k).tail(m);
        const double xnorm = v.norm();
        if (xnorm == 0.0) {
            t.diag[k] = a(k, k);
            t.offdiag[k] = 0.0;
            continue;
        }
        const double alpha = v(0) > 0.0 ? -xnorm : xnorm;
        v(0) -= alpha;
        v /= v.norm();

        auto sub = a.bottomRightCorner(m, m);
        Eigen::VectorXd w = sub.selfadjointView<Eigen::Lower>() * v;
        w -= v.dot(w) * v;
        sub.selfadjointView<Eigen::Lower>().rankUpdate(v, w, -2.0);

        t.diag[k] = a(k, k);
        t.offdiag[k] = alpha;
    }
    if (n >= 2) {
        t.diag[n - 2] = a(n - 2, n - 2);
        t.offdiag[n - 2] = a(n - 1, n - 2);
    }
    t.diag[n - 1] = a(n - 1, n - 1);
    return t;
}

std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
    const std::size_t n = t.diag.size();
    std::vector<double>& d = t.diag;
    std::vector<double> e(n, 0.0);
    std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());

    const std::size_t cap = 30 * std::max<std::size_t>(n, 1);
    std::size_t iterations = 0;

    for (std::size_t l = 0; l < n; ++l) {
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m == l) break;
            if (++iterations > cap) {
                throw NumericFailure("tridiagonal QL: no convergence within " + std::to_string(cap) + " iterations");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return std::move(d);
}

std::size_t sturm_count_below(const Tridiagonal& t, double x) noexcept {
    const std::size_t n = t.diag.size();
    double emax2 = 1.0;
    for (double e : t.offdiag) emax2 = std::max(emax2, e * e);
    const double pivmin = std::numeric_limits<double>::min() * emax2;

    std::size_t count = 0;
    double q = t.diag[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        const double e = t.offdiag[i - 1];
        q = (t.diag[i] - x) - e * e / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

Spectrum eigenvalues(const SymMatrix& q, double zero_tol) {
    Spectrum s;
    s.zero_tol = zero_tol < 0.0 ? default_zero_tol(q) : zero_tol;
    s.eigenvalues = tridiagonal_eigenvalues(tridiagonalize(q));
    return s;
}

Inertia inertia(const SymMatrix& q, double zero_tol) { return eigenvalues(q, zero_tol).inertia(); }

Inertia inertia_sturm(const Tridiagonal& t, double zero_tol) {
    const std::size_t n = t.diag.size();
    const std::size_t below_neg = sturm_count_below(t, -zero_tol);
    const std::size_t below_pos = zero_tol > 0.0 ? sturm_count_below(t, zero_tol) : below_neg;
    Inertia in;
    in.zero_tol = zero_tol;
    in.neg = below_neg;
    in.null = below_pos - below_neg;
    in.pos = n - below_pos;
    return in;
}

Inertia inertia_sturm(const SymMatrix& q, double zero_tol) {
    return inertia_sturm(tridiagonalize(q), zero_tol < 0.0 ? default_zero_tol(q) : zero_tol);
}

std::size_t count_below(const SymMatrix& q, double x) { return sturm_count_below(tridiagonalize(q), x); }

double min_abs_eig(const SymMatrix& q) {
    const Spectrum s = eigenvalues(q, 0.0);
    double m = std::numeric_limits<double>::infinity();
    for (double l : s.eigenvalues) m = std::min(m, std::abs(l));
    return m;
}

JacobiResult jacobi_eigen(const SymMatrix& q, bool want_vectors, int max_sweeps) {
    const auto n = static_cast<Eigen::Index>(q.order());
    Eigen::MatrixXd a = q.dense();
    Eigen::MatrixXd v;
    if (want_vectors) v = Eigen::MatrixXd::Identity(n, n);
    const double fro = q.frobenius_norm();

    JacobiResult res;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (std::sqrt(off) <= 1e-17 * fro || off == 0.0) break;
        res.sweeps = sweep + 1;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index r = p + 1; r < n; ++r) {
                const double apq = a(p, r);
                if (std::abs(apq) < std::numeric_limits<double>::min()) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::hypot(t, 1.0);
                const double s = t * c;
                a(p, p) -= t * apq;
                a(r, r) += t * apq;
                a(p, r) = a(r, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    if (k == p || k == r) continue;
                    const double akp = a(k, p), akr = a(k, r);
                    a(k, p) = a(p, k) = c * akp - s * akr;
                    a(k, r) = a(r, k) = s * akp + c * akr;
                }
                if (want_vectors) {
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double vkp = v(k, p), vkr = v(k, r);
                        v(k, p) = c * vkp - s * vkr;
                        v(k, r) = s * vkp + c * vkr;
                    }
                }
            }
        }
        if (sweep + 1 == max_sweeps) throw NumericFailure("jacobi_eigen: no convergence");
    }

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
    res.eigenvalues.resize(n);
    if (want_vectors) res.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        res.eigenvalues(k) = a(order[k], order[k]);
        if (want_vectors) res.eigenvectors.col(k) = v.col(order[k]);
    }
    return res;
}

}  // namespace qbl
