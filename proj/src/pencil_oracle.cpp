// Sturm-sequence count of the real roots of det(A + tB), in multiprecision.
// Shares nothing with the inertia scans except the Pencil type.

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qbl/error.hpp"
#include "qbl/pencil.hpp"

namespace qbl {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;
using Poly = std::vector<Real>;  // coefficients, constant term first

const Real kTrimTol("1e-32");

Real determinant(std::vector<Real> a, std::size_t n) {
    Real det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (abs(a[i * n + k]) > abs(a[piv * n + k])) piv = i;
        }
        if (a[piv * n + k] == 0) return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            det = -det;
        }
        const Real pivot = a[k * n + k];
        det *= pivot;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Real f = a[i * n + k] / pivot;
            if (f == 0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
        }
    }
    return det;
}

Real max_abs(const Poly& p) {
    Real m = 0;
    for (const auto& c : p) m = std::max(m, Real(abs(c)));
    return m;
}

/// Drops leading coefficients that are negligible relative to `scale`.
void trim(Poly& p, const Real& scale) {
    while (!p.empty() && abs(p.back()) <= kTrimTol * scale) p.pop_back();
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<int>(k));
    return d;
}

/// Remainder of a divided by b (b nonempty, leading coefficient nonzero).
Poly remainder(Poly a, const Poly& b) {
    const std::size_t db = b.size() - 1;
    const Real scale = max_abs(a);
    while (a.size() >= b.size()) {
        const Real f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k < db; ++k) a[shift + k] -= f * b[k];
        a.pop_back();
    }
    trim(a, scale);
    return a;
}

int sign(const Real& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

struct SturmOutcome {
    bool ok = false;
    std::size_t real_roots = 0;
};

SturmOutcome count_real_roots(Poly p) {
    trim(p, max_abs(p));
    if (p.size() < 2) return {true, 0};
    std::vector<Poly> chain{p, derivative(p)};
    while (chain.back().size() > 1) {
        Poly r = remainder(chain[chain.size() - 2], chain.back());
        if (r.empty()) return {};  // repeated root, or lost to rounding
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    int changes_neg = 0, changes_pos = 0;
    int prev_neg = 0, prev_pos = 0;
    for (const auto& q : chain) {
        const int lead = sign(q.back());
        const int deg_parity = ((q.size() - 1) % 2 == 0) ? 1 : -1;
        const int at_pos = lead, at_neg = lead * deg_parity;
        if (prev_pos != 0 && at_pos != prev_pos) ++changes_pos;
        if (prev_neg != 0 && at_neg != prev_neg) ++changes_neg;
        prev_pos = at_pos;
        prev_neg = at_neg;
    }
    return {true, static_cast<std::size_t>(changes_neg - changes_pos)};
}

}  // namespace

std::size_t spectral_variety_count_oracle(const Pencil& p, int max_attempts) {
    const std::size_t n = p.order();
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        // Golden-angle sequence of basis rotations; attempt 0 keeps the basis.
        const double phi = std::fmod(2.399963229728653 * attempt, std::numbers::pi);
        const Pencil r = p.rotated(phi);
        const double bnorm = r.q2().frobenius_norm();
        if (min_abs_eig(r.q2()) < 1e-8 * bnorm) continue;

        std::vector<Real> nodes(n + 1), values(n + 1);
        std::vector<Real> work(n * n);
        for (std::size_t k = 0; k <= n; ++k) {
            nodes[k] = cos(boost::math::constants::pi<Real>() * (2 * k + 1) / (2 * (n + 1)));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    work[i * n + j] = Real(r.q1()(i, j)) + nodes[k] * Real(r.q2()(i, j));
                }
            }
            values[k] = determinant(work, n);
        }

        // Newton divided differences, then expand to the monomial basis.
        std::vector<Real> dd = values;
        for (std::size_t level = 1; level <= n; ++level) {
            for (std::size_t k = n; k >= level; --k) {
                dd[k] = (dd[k] - dd[k - 1]) / (nodes[k] - nodes[k - level]);
            }
        }
        Poly poly{dd[n]};
        for (std::size_t k = n; k-- > 0;) {
            Poly next(poly.size() + 1, Real(0));
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i + 1] += poly[i];
                next[i] -= nodes[k] * poly[i];
            }
            next[0] += dd[k];
            poly = std::move(next);
        }

        const SturmOutcome out = count_real_roots(std::move(poly));
        if (out.ok) return 2 * out.real_roots;
    }
    throw NumericFailure("spectral_variety_count_oracle: no well-conditioned basis after " +
                         std::to_string(max_attempts) + " rotations");
}

}  // namespace qbl
