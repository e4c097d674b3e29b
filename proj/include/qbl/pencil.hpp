#pragma once

// Two quadrics q1, q2 on R^n and their pencil W = span{q1, q2}, parametrized
// by the circle theta -> cos(theta) Q1 + sin(theta) Q2.
//
// The positive inertia index i+ is piecewise constant on the circle and
// changes at the degenerate members of the pencil (the spectral variety
// Sigma_W). Because i+(-Q) = n - i+(Q) - i0(Q), the half circle [0, pi)
// determines everything: Sigma_W is the set of crossings in [0, pi) together
// with their antipodes.

#include <cstddef>
#include <string>
#include <vector>

#include "qbl/spectra.hpp"
#include "qbl/sym_matrix.hpp"

namespace qbl {

class Pencil {
public:
    /// Throws InvalidArgument if the orders differ or the pair is
    /// proportional (|cos angle| >= 1 - 1e-12 in the Frobenius inner product).
    Pencil(SymMatrix q1, SymMatrix q2);

    std::size_t order() const noexcept { return q1_.order(); }
    const SymMatrix& q1() const noexcept { return q1_; }
    const SymMatrix& q2() const noexcept { return q2_; }

    /// cos(theta) Q1 + sin(theta) Q2
    SymMatrix at(double theta) const;

    /// Basis (cos phi Q1 + sin phi Q2, -sin phi Q1 + cos phi Q2); the same W.
    Pencil rotated(double phi) const;

private:
    SymMatrix q1_;
    SymMatrix q2_;
};

enum class ScanMethod {
    /// Uniform grid on [0, pi) with bisection of every cell where i+ changes.
    grid,
    /// Crossings from the real eigenvalues of Q1^{-1} Q2, arc values from an
    /// inertia evaluation inside every arc. O(n^3) per pencil.
    spectral,
};

const char* to_string(ScanMethod m) noexcept;
ScanMethod scan_method_from_string(const std::string& s);

struct ScanParams {
    std::size_t grid_size = 0;  // 0 selects 8n
    double refine_tol = 1e-10;  // bisection width in theta
    double zero_tol = -1.0;     // < 0 selects default_zero_tol at each angle
    ScanMethod method = ScanMethod::grid;
};

/// Index-function barcode of a pencil.
struct PencilScan {
    std::size_t n = 0;
    ScanMethod method = ScanMethod::grid;

    /// Degenerate angles in [0, pi), ascending.
    std::vector<double> crossings;
    /// Change of i+ across each crossing, in increasing theta (+1 or -1).
    std::vector<int> jumps;
    /// i+ on each open arc of the full circle. arc_index[0] is the arc that
    /// contains theta = 0; the rest follow in increasing theta. Length
    /// 2 * crossings.size(), or 1 when the index is constant.
    std::vector<std::size_t> arc_index;

    std::size_t mu = 0;           // max i+ on W \ {0}
    std::size_t min_index = 0;    // min i+ on W \ {0}
    std::size_t sigma_count = 0;  // b(Sigma_W) = number of points on the circle
    bool index_constant = false;  // Sigma_W empty

    bool discarded = false;
    std::string discard_reason;

    /// Failures of i+(theta) + i+(theta + pi) + i0(theta) = n at the
    /// independently evaluated check angles.
    std::size_t antipodal_violations = 0;
    /// Symmetric inertia evaluations performed.
    std::size_t evaluations = 0;

    /// b0 of Omega^j = {theta : i+ >= j} on the full circle.
    std::size_t omega_components(std::size_t j) const;
    /// True when Omega^j is the whole circle.
    bool omega_is_circle(std::size_t j) const;
    /// sum_{j = min_index}^{mu - 1} b0(Omega^{j+1}); equals sigma_count / 2 on
    /// generic pencils.
    std::size_t alexander_sum() const;
    /// Cyclically adjacent arcs differ by exactly one.
    bool jump_rule_holds() const;
};

PencilScan scan_index_function(const Pencil& p, const ScanParams& params = {});

/// b(Sigma_W) only: twice the number of real eigenvalues of Q1^{-1} Q2
/// (rotating the basis first if Q1 is close to singular).
std::size_t spectral_variety_count(const Pencil& p);

/// Independent count of b(Sigma_W): p(t) = det(A + tB) for a rotated basis
/// (A, B) is interpolated from its values at n + 1 Chebyshev nodes in 50-digit
/// arithmetic and its real roots are counted with a Sturm sequence. Retries
/// with a new rotation (up to max_attempts) when det B is too small or the
/// Sturm chain degenerates; NumericFailure after that.
std::size_t spectral_variety_count_oracle(const Pencil& p, int max_attempts = 8);

/// c_W + d_W from the parity rule: 1 unless the index is constant, in which
/// case 2 if n = 0 mod 4 and 0 if n = 2 mod 4. InvalidArgument on discarded
/// scans.
int c_plus_d(const PencilScan& scan);

/// rank of the second differential: 0 unless the index is constant, then
/// (n / 2) mod 2.
int rank_d2(const PencilScan& scan);

struct TwoQuadricBetti {
    /// 3n - 1 - 4 mu + (c + d) + sigma_count / 2, clamped at zero.
    std::size_t total_betti = 0;
    long closed_form_raw = 0;
    bool clamped = false;
    /// (n - 1) - 2 (mu - m) + (c + d) + sum_{j=m}^{mu-1} b0(Omega^{j+1}).
    long ledger_betti = 0;
    /// rank of E_3 counted directly from the E_2 page H^i(W, Omega^{j+1}),
    /// j = 0..n-1, minus 2 rk d_2. Agrees with the two formulas above on
    /// pencils with crossings.
    std::size_t rank_e3 = 0;

    int c_plus_d = 0;
    int rank_d2 = 0;
    std::size_t sigma_count = 0;
    std::size_t mu = 0;
    std::size_t min_index = 0;
    bool index_constant = false;
};

/// Throws SampleDiscarded if the scan is discarded.
TwoQuadricBetti betti_two_quadrics(const PencilScan& scan);
TwoQuadricBetti betti_two_quadrics(const Pencil& p, const ScanParams& params = {});

/// i+(Q1) <= mu_W <= i+(Q1) + sigma_count
bool mu_sandwich_check(const Pencil& p, const PencilScan& scan);

}  // namespace qbl
