#include "qbl/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qbl/error.hpp"

namespace qbl {

namespace {

constexpr double kPi = std::numbers::pi;

double frobenius_dot(const SymMatrix& a, const SymMatrix& b) {
    const std::size_t n = a.order();
    const auto pa = a.packed();
    const auto pb = b.packed();
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j, ++k) s += (i == j ? 1.0 : 2.0) * pa[k] * pb[k];
    }
    return s;
}

struct Evaluator {
    const Pencil& pencil;
    const ScanParams& params;
    std::size_t count = 0;

    Inertia operator()(double theta) {
        ++count;
        const SymMatrix f = pencil.at(theta);
        const double tol = params.zero_tol < 0.0 ? default_zero_tol(f) : params.zero_tol;
        return inertia_sturm(tridiagonalize(f), tol);
    }

    /// i+(theta) + i+(theta + pi) + i0(theta) == n, with -F evaluated on its
    /// own tridiagonalization.
    bool antipodal_holds(double theta) {
        const Inertia here = (*this)(theta);
        const Inertia there = (*this)(theta + kPi);
        return here.pos + there.pos + here.null == pencil.order();
    }
};

void discard(PencilScan& scan, std::string reason) {
    if (!scan.discarded) {
        scan.discarded = true;
        scan.discard_reason = std::move(reason);
    }
}

/// Fills arc_index, mu, min_index, sigma_count and index_constant from the
/// value at theta = 0 and the jumps at the half-circle crossings.
void assemble_arcs(PencilScan& scan, std::size_t index_at_zero) {
    const std::size_t n = scan.n;
    const std::size_t k = scan.crossings.size();
    std::vector<long> half(k + 1);
    half[0] = static_cast<long>(index_at_zero);
    for (std::size_t i = 0; i < k; ++i) half[i + 1] = half[i] + scan.jumps[i];

    const long closing = static_cast<long>(n) - half[0];
    if (half[k] != closing) {
        discard(scan, "half-circle index does not close antipodally");
        return;
    }
    for (long v : half) {
        if (v < 0 || v > static_cast<long>(n)) {
            discard(scan, "index out of range");
            return;
        }
    }

    scan.arc_index.clear();
    if (k == 0) {
        scan.arc_index.push_back(index_at_zero);
    } else {
        for (std::size_t i = 0; i <= k; ++i) scan.arc_index.push_back(static_cast<std::size_t>(half[i]));
        for (std::size_t i = 1; i < k; ++i) scan.arc_index.push_back(n - static_cast<std::size_t>(half[i]));
    }
    scan.sigma_count = 2 * k;
    scan.index_constant = (k == 0);
    scan.mu = *std::max_element(scan.arc_index.begin(), scan.arc_index.end());
    scan.min_index = *std::min_element(scan.arc_index.begin(), scan.arc_index.end());
    if (!scan.jump_rule_holds()) discard(scan, "jump rule violated");
}

struct Crossing {
    double theta;
    int jump;
};

void refine_cell(Evaluator& eval, const ScanParams& params, double a, std::size_t va, double b, std::size_t vb,
                 std::vector<Crossing>& out, PencilScan& scan) {
    if (va == vb || scan.discarded) return;
    if (b - a <= params.refine_tol) {
        const long jump = static_cast<long>(vb) - static_cast<long>(va);
        if (jump == 1 || jump == -1) {
            out.push_back({0.5 * (a + b), static_cast<int>(jump)});
        } else {
            discard(scan, "unresolved multi-jump near theta=" + std::to_string(0.5 * (a + b)));
        }
        return;
    }
    const double m = 0.5 * (a + b);
    const std::size_t vm = eval(m).pos;
    refine_cell(eval, params, a, va, m, vm, out, scan);
    refine_cell(eval, params, m, vm, b, vb, out, scan);
}

PencilScan scan_grid(const Pencil& p, const ScanParams& params) {
    const std::size_t n = p.order();
    PencilScan scan;
    scan.n = n;
    scan.method = ScanMethod::grid;
    const std::size_t grid = params.grid_size == 0 ? 8 * n : params.grid_size;
    if (grid < 2) throw InvalidArgument("scan_index_function: grid_size must be >= 2");
    if (!(params.refine_tol > 0.0)) throw InvalidArgument("scan_index_function: refine_tol must be positive");

    Evaluator eval{p, params};
    for (double theta : {0.0, 0.5 * kPi}) {
        if (!eval.antipodal_holds(theta)) ++scan.antipodal_violations;
    }

    const Inertia at_zero = eval(0.0);
    if (at_zero.null > 0) {
        discard(scan, "basis form Q1 is singular");
        scan.evaluations = eval.count;
        return scan;
    }

    std::vector<Crossing> crossings;
    double prev_theta = 0.0;
    std::size_t prev_value = at_zero.pos;
    for (std::size_t k = 1; k <= grid && !scan.discarded; ++k) {
        const double theta = kPi * static_cast<double>(k) / static_cast<double>(grid);
        const std::size_t value = (k == grid) ? at_zero.neg : eval(theta).pos;
        refine_cell(eval, params, prev_theta, prev_value, theta, value, crossings, scan);
        prev_theta = theta;
        prev_value = value;
    }
    scan.evaluations = eval.count;
    if (scan.discarded) return scan;

    for (const auto& c : crossings) {
        scan.crossings.push_back(c.theta);
        scan.jumps.push_back(c.jump);
    }
    assemble_arcs(scan, at_zero.pos);
    return scan;
}

/// Real eigenvalues of A^{-1} B mapped to angles in [0, pi) of the original
/// basis, where A, B is the basis rotated by phi.
std::vector<double> spectral_crossings(const Pencil& p, double& phi_used) {
    static constexpr double kPhis[] = {0.0, 0.6180339887498949, 1.2360679774997898, 1.8541019662496847,
                                       2.4721359549995796};
    for (double phi : kPhis) {
        const Pencil r = p.rotated(phi);
        const Eigen::MatrixXd a = r.q1().dense();
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        if (!(lu.rcond() > 1e-10)) continue;
        const Eigen::MatrixXd m = lu.solve(r.q2().dense());
        Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
        if (es.info() != Eigen::Success) throw NumericFailure("spectral scan: real Schur iteration failed");
        std::vector<double> thetas;
        for (const auto& lambda : es.eigenvalues()) {
            if (lambda.imag() != 0.0) continue;
            double theta = phi + std::atan2(1.0, -lambda.real());
            theta = std::fmod(theta, kPi);
            if (theta < 0.0) theta += kPi;
            thetas.push_back(theta);
        }
        std::sort(thetas.begin(), thetas.end());
        phi_used = phi;
        return thetas;
    }
    throw NumericFailure("spectral scan: every trial basis form is near singular");
}

PencilScan scan_spectral(const Pencil& p, const ScanParams& params) {
    const std::size_t n = p.order();
    PencilScan scan;
    scan.n = n;
    scan.method = ScanMethod::spectral;
    Evaluator eval{p, params};
    for (double theta : {0.0, 0.5 * kPi}) {
        if (!eval.antipodal_holds(theta)) ++scan.antipodal_violations;
    }

    double phi = 0.0;
    const std::vector<double> thetas = spectral_crossings(p, phi);
    const Inertia at_zero = eval(0.0);
    if (at_zero.null > 0) {
        discard(scan, "basis form Q1 is singular");
        scan.evaluations = eval.count;
        return scan;
    }
    if (!thetas.empty() && (thetas.front() <= params.refine_tol || kPi - thetas.back() <= params.refine_tol)) {
        discard(scan, "crossing within refine_tol of theta=0");
        scan.evaluations = eval.count;
        return scan;
    }
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        if (thetas[i] - thetas[i - 1] <= params.refine_tol) {
            discard(scan, "crossings closer than refine_tol");
            scan.evaluations = eval.count;
            return scan;
        }
    }

    // Value on every half-circle arc, the last one included so that the
    // antipodal closure is checked rather than assumed.
    std::size_t prev = at_zero.pos;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double right = (i + 1 < thetas.size()) ? thetas[i + 1] : kPi;
        const Inertia in = eval(0.5 * (thetas[i] + right));
        if (in.null > 0) {
            discard(scan, "singular form inside an arc");
            break;
        }
        const long jump = static_cast<long>(in.pos) - static_cast<long>(prev);
        if (jump != 1 && jump != -1) {
            discard(scan, "index jump of " + std::to_string(jump) + " at theta=" + std::to_string(thetas[i]));
            break;
        }
        scan.crossings.push_back(thetas[i]);
        scan.jumps.push_back(static_cast<int>(jump));
        prev = in.pos;
    }
    scan.evaluations = eval.count;
    if (scan.discarded) return scan;
    assemble_arcs(scan, at_zero.pos);
    return scan;
}

}  // namespace

Pencil::Pencil(SymMatrix q1, SymMatrix q2) : q1_(std::move(q1)), q2_(std::move(q2)) {
    if (q1_.order() != q2_.order()) throw InvalidArgument("Pencil: orders differ");
    const double n1 = q1_.frobenius_norm();
    const double n2 = q2_.frobenius_norm();
    if (n1 == 0.0 || n2 == 0.0 || std::abs(frobenius_dot(q1_, q2_)) >= (1.0 - 1e-12) * n1 * n2) {
        throw InvalidArgument("Pencil: q1 and q2 are proportional");
    }
}

SymMatrix Pencil::at(double theta) const { return combine(std::cos(theta), q1_, std::sin(theta), q2_); }

Pencil Pencil::rotated(double phi) const {
    const double c = std::cos(phi), s = std::sin(phi);
    return Pencil(combine(c, q1_, s, q2_), combine(-s, q1_, c, q2_));
}

const char* to_string(ScanMethod m) noexcept { return m == ScanMethod::grid ? "grid" : "spectral"; }

ScanMethod scan_method_from_string(const std::string& s) {
    if (s == "grid") return ScanMethod::grid;
    if (s == "spectral") return ScanMethod::spectral;
    throw InvalidArgument("unknown scan method '" + s + "' (expected grid or spectral)");
}

std::size_t PencilScan::omega_components(std::size_t j) const {
    const std::size_t len = arc_index.size();
    std::size_t inside = 0, starts = 0;
    for (std::size_t k = 0; k < len; ++k) {
        const bool in = arc_index[k] >= j;
        const bool prev_in = arc_index[(k + len - 1) % len] >= j;
        inside += in;
        starts += (in && !prev_in);
    }
    if (inside == 0) return 0;
    if (inside == len) return 1;
    return starts;
}

bool PencilScan::omega_is_circle(std::size_t j) const {
    return !arc_index.empty() && std::all_of(arc_index.begin(), arc_index.end(), [j](auto v) { return v >= j; });
}

std::size_t PencilScan::alexander_sum() const {
    std::size_t s = 0;
    for (std::size_t j = min_index; j < mu; ++j) s += omega_components(j + 1);
    return s;
}

bool PencilScan::jump_rule_holds() const {
    const std::size_t len = arc_index.size();
    if (len == 1) return true;
    for (std::size_t k = 0; k < len; ++k) {
        const long d = static_cast<long>(arc_index[(k + 1) % len]) - static_cast<long>(arc_index[k]);
        if (d != 1 && d != -1) return false;
    }
    return true;
}

PencilScan scan_index_function(const Pencil& p, const ScanParams& params) {
    return params.method == ScanMethod::grid ? scan_grid(p, params) : scan_spectral(p, params);
}

std::size_t spectral_variety_count(const Pencil& p) {
    double phi = 0.0;
    return 2 * spectral_crossings(p, phi).size();
}

int c_plus_d(const PencilScan& scan) {
    if (scan.discarded) throw InvalidArgument("c_plus_d: scan was discarded");
    if (!scan.index_constant) return 1;
    return (scan.n / 2) % 2 == 0 ? 2 : 0;
}

int rank_d2(const PencilScan& scan) {
    if (scan.discarded) throw InvalidArgument("rank_d2: scan was discarded");
    if (!scan.index_constant) return 0;
    return static_cast<int>((scan.n / 2) % 2);
}

TwoQuadricBetti betti_two_quadrics(const PencilScan& scan) {
    if (scan.discarded) throw SampleDiscarded("betti_two_quadrics: " + scan.discard_reason);
    const long n = static_cast<long>(scan.n);
    const long mu = static_cast<long>(scan.mu);
    const long m = static_cast<long>(scan.min_index);

    TwoQuadricBetti b;
    b.c_plus_d = c_plus_d(scan);
    b.rank_d2 = rank_d2(scan);
    b.sigma_count = scan.sigma_count;
    b.mu = scan.mu;
    b.min_index = scan.min_index;
    b.index_constant = scan.index_constant;

    b.closed_form_raw = 3 * n - 1 - 4 * mu + b.c_plus_d + static_cast<long>(scan.sigma_count / 2);
    b.ledger_betti = (n - 1) - 2 * (mu - m) + b.c_plus_d + static_cast<long>(scan.alexander_sum());

    // E_2^{i,j} = H^i(W, Omega^{j+1}) with W a disc: empty Omega gives H^0,
    // the full circle gives H^2, and c > 0 disjoint arcs give H^1 of rank c - 1.
    long page = 0;
    for (std::size_t j = 0; j < scan.n; ++j) {
        const std::size_t comps = scan.omega_components(j + 1);
        if (comps == 0 || scan.omega_is_circle(j + 1)) {
            page += 1;
        } else {
            page += static_cast<long>(comps) - 1;
        }
    }
    page -= 2 * b.rank_d2;
    b.rank_e3 = static_cast<std::size_t>(std::max(page, 0L));

    if (b.closed_form_raw < 0) {
        b.clamped = true;
        b.total_betti = static_cast<std::size_t>(std::max(b.ledger_betti, 0L));
    } else {
        b.total_betti = static_cast<std::size_t>(b.closed_form_raw);
    }
    return b;
}

TwoQuadricBetti betti_two_quadrics(const Pencil& p, const ScanParams& params) {
    return betti_two_quadrics(scan_index_function(p, params));
}

bool mu_sandwich_check(const Pencil& p, const PencilScan& scan) {
    const std::size_t ip = inertia_sturm(p.q1()).pos;
    return ip <= scan.mu && scan.mu <= ip + scan.sigma_count;
}

}  // namespace qbl
