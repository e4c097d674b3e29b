// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here; statistical bounds use 3 standard errors unless noted.
//
// Usage: qbl_acceptance [--only 1,2,...] [--threads N] [--strict]
// Exit status is 1 if a criterion fails that is not listed in kKnownRed, or
// if any criterion fails under --strict.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"
#include "qbl/experiment.hpp"
#include "qbl/pencil.hpp"
#include "qbl/report_io.hpp"
#include "qbl/rmt.hpp"
#include "qbl/spectra.hpp"

using namespace qbl;

namespace {

constexpr std::uint64_t kSeed = 20120301;
constexpr double kSigmas = 3.0;

// Criteria that fail for reasons recorded in the README (section "Known
// acceptance results"). They still print FAIL.
const std::set<int> kKnownRed = {8};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::size_t g_threads = 0;
std::vector<InvariantViolation> g_violations;
std::size_t g_reports = 0;

std::string f(double x, int p = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", p, x);
    return buf;
}

ExperimentReport run(ExperimentKind kind, std::vector<std::size_t> n, std::size_t trials,
                     std::uint64_t seed = kSeed) {
    ExperimentConfig c;
    c.kind = kind;
    c.n_list = std::move(n);
    c.trials = trials;
    c.root_seed = seed;
    c.threads = g_threads;
    ExperimentReport r = run_experiment(c);
    g_violations.insert(g_violations.end(), r.violations.begin(), r.violations.end());
    ++g_reports;
    return r;
}

bool any_flagged(const ExperimentReport& r) {
    for (const auto& row : r.rows) {
        if (row.flagged) return true;
    }
    return false;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Pencil random_pencil(std::size_t n, SeedSpec s) {
    Rng rng(s);
    SymMatrix a = sample_goe(n, rng);
    SymMatrix b = sample_goe(n, rng);
    return Pencil(std::move(a), std::move(b));
}

const std::vector<std::size_t> kLadderK1{8, 16, 32, 64, 128};
const std::vector<std::size_t> kLadderK2{9, 17, 33, 65, 129};

// 1. E b(X_R) / n -> 1 for one quadric.
Outcome c1() {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = run(ExperimentKind::betti_k1, kLadderK1, 500);
    const double secs = elapsed(t0);
    bool inc = true;
    std::ostringstream os;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        os << "n=" << r.rows[i].n << ":" << f(r.rows[i].mean) << " ";
        if (i && !(r.rows[i].mean > r.rows[i - 1].mean)) inc = false;
    }
    const double last = r.rows.back().mean;
    os << "runtime=" << f(secs, 1) << "s";
    return {inc && last >= 0.9 && last < 1.0 && secs <= 120.0 && !any_flagged(r), os.str()};
}

// 2. E|i+ - i-| / n -> 0.
Outcome c2() {
    const ExperimentReport r = run(ExperimentKind::index_imbalance, kLadderK1, 500);
    bool dec = true;
    std::ostringstream os;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        os << "n=" << r.rows[i].n << ":" << f(r.rows[i].mean) << " ";
        if (i && !(r.rows[i].mean < r.rows[i - 1].mean)) dec = false;
    }
    return {dec && r.rows.back().mean <= 0.05, os.str()};
}

// 3. Semicircle law.
Outcome c3() {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = run(ExperimentKind::semicircle, {256}, 100);
    const double secs = elapsed(t0);
    const double ks = r.rows[0].mean;
    const double out = r.rows[0].extras.at("mass_outside_2.1");
    return {ks <= 0.02 && out <= 0.01 && secs <= 60.0,
            "ks=" + f(ks) + " mass_outside_2.1=" + f(out, 5) + " runtime=" + f(secs, 1) + "s"};
}

// 4. Kac / Crofton: sqrt(2) real roots on average.
Outcome c4() {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = run(ExperimentKind::crofton, {3}, 1000000);
    const double secs = elapsed(t0);
    const double m = r.rows[0].mean;
    const double rel = std::abs(m - std::numbers::sqrt2) / std::numbers::sqrt2;
    return {rel <= 0.01 && secs <= 60.0,
            "mean=" + f(m, 5) + " stderr=" + f(r.rows[0].stderr_, 5) + " rel_err=" + f(rel, 5) +
                " runtime=" + f(secs, 1) + "s"};
}

// 5. Gap slope f_n'(0) = -2 c_n.
Outcome c5() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig c;
    c.kind = ExperimentKind::gap_slope;
    c.n_list = {4};
    c.trials = 1000000;
    c.root_seed = kSeed;
    c.epsilon = 0.02;
    c.threads = g_threads;
    const ExperimentReport r = run_experiment(c);
    ++g_reports;
    const double secs = elapsed(t0);
    const double ratio = r.rows[0].extras.at("slope_ratio");
    const double c4 = c_n_exact(4);
    const bool c4_exact = std::abs(c4 - 1.5 / std::sqrt(std::numbers::pi)) < 1e-14;
    return {ratio >= 0.85 && ratio <= 1.15 && c4_exact && secs <= 120.0,
            "ratio=" + f(ratio) + " +- " + f(r.rows[0].extras.at("slope_ratio_stderr")) + " c4=" + f(c4, 7) +
                " runtime=" + f(secs, 1) + "s"};
}

// 6. c_n ~ sqrt(2n) / pi.
Outcome c6() {
    const double ratio = c_n_asymptotic_ratio(200);
    return {ratio >= 0.95 && ratio <= 1.05, "c_200 / (sqrt(400)/pi) = " + f(ratio, 6)};
}

// 7. E b(Sigma_W) = O(sqrt n).
Outcome c7() {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = run(ExperimentKind::sigma_scaling, {8, 16, 32, 64, 128, 256}, 2000);
    const double secs = elapsed(t0);
    std::ostringstream os;
    for (const auto& row : r.rows) os << "n=" << row.n << ":" << f(row.mean, 2) << " ";
    os << "exponent=" << f(r.fit->exponent) << " r2=" << f(r.fit->r2) << " runtime=" << f(secs, 1) << "s";
    return {r.fit->exponent >= 0.4 && r.fit->exponent <= 0.6 && r.fit->r2 >= 0.98 && secs <= 600.0 &&
                !any_flagged(r),
            os.str()};
}

ExperimentReport g_k2;
bool g_k2_ready = false;

// 8. E b / n -> 1 for two quadrics, n odd.
Outcome c8() {
    const auto t0 = std::chrono::steady_clock::now();
    g_k2 = run(ExperimentKind::betti_k2, kLadderK2, 500);
    g_k2_ready = true;
    const double secs = elapsed(t0);
    std::ostringstream os;
    for (const auto& row : g_k2.rows) os << "n=" << row.n << ":" << f(row.mean) << "+-" << f(row.stderr_) << " ";
    const std::size_t k = g_k2.rows.size();
    const double d0 = std::abs(g_k2.rows[k - 3].mean - 1.0);
    const double d1 = std::abs(g_k2.rows[k - 2].mean - 1.0);
    const double d2 = std::abs(g_k2.rows[k - 1].mean - 1.0);
    const bool trend = d1 < d0 && d2 < d1;
    const double last = g_k2.rows.back().mean;
    os << "|mean-1| over last three: " << f(d0) << " " << f(d1) << " " << f(d2) << " runtime=" << f(secs, 1)
       << "s";
    return {last >= 0.7 && last <= 1.1 && trend && secs <= 900.0 && !any_flagged(g_k2), os.str()};
}

// 9. E 4 mu_W / n -> 2.
Outcome c9() {
    const ExperimentReport r = run(ExperimentKind::mu_over_n, kLadderK2, 500);
    bool dec = true;
    std::ostringstream os;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        os << "n=" << r.rows[i].n << ":" << f(r.rows[i].mean) << " ";
        // nonincreasing within 3 combined standard errors, and above 2 - 3 se
        if (i) {
            const double se = std::hypot(r.rows[i].stderr_, r.rows[i - 1].stderr_);
            if (r.rows[i].mean > r.rows[i - 1].mean + kSigmas * se) dec = false;
        }
        if (r.rows[i].mean < 2.0 - kSigmas * r.rows[i].stderr_) dec = false;
    }
    if (g_k2_ready) {
        // The same pencils as criterion 8, so mu must agree exactly.
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            // Summation order differs, so equal up to rounding.
            const double from_k2 = 4.0 * g_k2.rows[i].mean_mu / double(r.rows[i].n);
            if (std::abs(from_k2 - r.rows[i].mean) > 1e-12 * r.rows[i].mean) dec = false;
        }
    }
    const double last = r.rows.back().mean;
    const bool first_over_last = r.rows.front().mean > last;
    return {dec && first_over_last && last >= 2.0 && last <= 2.4, os.str()};
}

// 10. E rk d2 = 0, E[c + d] = 1 + (-1)^{n/2} P{constant index}.
Outcome c10() {
    const ExperimentReport cd = run(ExperimentKind::cplusd, {64}, 2000);
    const ExperimentReport rk = run(ExperimentKind::rankd2, {64}, 2000);
    const double constant64 = cd.rows[0].extras.at("constant_index_count");
    const bool big = cd.rows[0].mean == 1.0 && rk.rows[0].mean == 0.0 && constant64 == 0.0;

    // n = 2: c + d on one seed set, P{constant} from b(Sigma_W) = 0 on another.
    const ExperimentReport two = run(ExperimentKind::cplusd, {2}, 100000);
    std::size_t empty = 0;
    const std::size_t trials = 100000;
    for (std::size_t t = 0; t < trials; ++t) {
        empty += spectral_variety_count(random_pencil(2, trial_seed(kSeed + 1, 2, t))) == 0;
    }
    const double p = double(empty) / double(trials);
    const double se_p = std::sqrt(p * (1 - p) / double(trials));
    const double lhs = two.rows[0].mean;
    const double rhs = 1.0 - p;
    const double se = std::hypot(two.rows[0].stderr_, se_p);
    const bool small = std::abs(lhs - rhs) <= kSigmas * se;
    return {big && small,
            "n=64: mean c+d=" + f(cd.rows[0].mean) + " mean rk d2=" + f(rk.rows[0].mean) +
                " constant=" + f(constant64, 0) + "; n=2: E[c+d]=" + f(lhs) + " 1-P{const}=" + f(rhs) +
                " (P=" + f(p) + ", exact 1-1/sqrt2=" + f(1 - 1 / std::numbers::sqrt2) + ")"};
}

// 11. Exact oracle equivalences.
std::size_t g_oracle_violations = 0;

Outcome c11() {
    std::ostringstream os;
    bool ok = true;

    // (a) grid scan vs multiprecision Sturm count at n = 16.
    {
        const std::size_t count = 10000;
        std::size_t agree = 0, resolved = 0, unresolved = 0, discarded = 0;
        for (std::size_t t = 0; t < count; ++t) {
            const SeedSpec s = derive_seed(SeedSpec{kSeed, 11}, t);
            const Pencil p = random_pencil(16, s);
            const PencilScan scan = scan_index_function(p);
            const std::size_t oracle = spectral_variety_count_oracle(p);
            if (!scan.discarded && scan.sigma_count == oracle) {
                ++agree;
                continue;
            }
            // Refine: finer grids and tighter bisection until the scan agrees
            // or discards. Two crossings inside one cell cancel in i+, so a
            // close pair needs a cell narrower than its gap.
            if (scan.discarded) ++discarded;
            bool fixed = false;
            for (const std::size_t grid : {1024, 8192, 65536}) {
                ScanParams fine;
                fine.grid_size = grid;
                fine.refine_tol = 1e-13;
                const PencilScan again = scan_index_function(p, fine);
                if (again.discarded || again.sigma_count == oracle) {
                    fixed = true;
                    break;
                }
            }
            ++(fixed ? resolved : unresolved);
        }
        const double rate = double(agree) / double(count);
        os << "(a) agree=" << f(100 * rate, 2) << "% resolved=" << resolved << " unresolved=" << unresolved
           << " first-pass discards=" << discarded << "; ";
        ok = ok && rate >= 0.99 && unresolved == 0;
    }

    // (b) Sturm inertia vs eigensolver inertia on GOE(32).
    {
        std::size_t mismatch = 0;
        for (std::size_t t = 0; t < 1000; ++t) {
            const SymMatrix q = sample_goe(32, derive_seed(SeedSpec{kSeed, 12}, t));
            const Inertia a = inertia_sturm(q);
            const Inertia b = inertia(q);
            const JacobiResult j = jacobi_eigen(q);
            std::size_t jp = 0;
            for (double l : j.eigenvalues) jp += l > a.zero_tol;
            if (!(a == b) || a.pos != jp) ++mismatch;
        }
        os << "(b) inertia mismatches=" << mismatch << "/1000; ";
        ok = ok && mismatch == 0;
    }

    // (c) ledger vs closed form, n = 4..16.
    {
        std::size_t mismatch = 0, flagged = 0, discarded = 0, total = 0;
        ScanParams sp;
        sp.method = ScanMethod::spectral;
        for (std::size_t t = 0; t < 10000; ++t) {
            const std::size_t n = 4 + t % 13;
            const Pencil p = random_pencil(n, derive_seed(SeedSpec{kSeed, 13}, t));
            const PencilScan s = scan_index_function(p, sp);
            if (s.discarded) {
                ++discarded;
                continue;
            }
            const TwoQuadricBetti b = betti_two_quadrics(s);
            ++total;
            if (s.index_constant || b.clamped) {
                ++flagged;
                continue;
            }
            if (b.ledger_betti != b.closed_form_raw || static_cast<long>(b.rank_e3) != b.ledger_betti) ++mismatch;
            if (s.antipodal_violations || !s.jump_rule_holds() || !mu_sandwich_check(p, s) ||
                2 * s.alexander_sum() != s.sigma_count) {
                ++g_oracle_violations;
            }
        }
        os << "(c) ledger/closed-form mismatches=" << mismatch << " constant-or-clamped=" << flagged
           << " discarded=" << discarded << "; ";
        ok = ok && mismatch == 0 && discarded * 100 <= total + discarded;
    }

    // (d) n = 3 against brute-force common zeros.
    {
        std::size_t mismatch = 0, undecided = 0;
        ScanParams sp;
        sp.method = ScanMethod::spectral;
        for (std::size_t t = 0; t < 500; ++t) {
            const Pencil p = random_pencil(3, derive_seed(SeedSpec{kSeed, 14}, t));
            const auto points = testing::conic_intersection_count(p.q1(), p.q2());
            const PencilScan s = scan_index_function(p, sp);
            if (!points || s.discarded) {
                ++undecided;
                continue;
            }
            if (betti_two_quadrics(s).rank_e3 != *points) ++mismatch;
        }
        os << "(d) n=3 mismatches=" << mismatch << " undecided=" << undecided;
        ok = ok && mismatch == 0 && undecided <= 5;
    }
    return {ok, os.str()};
}

// 12. Per-trial invariants across every experiment run above.
Outcome c12() {
    std::ostringstream os;
    os << "violations=" << g_violations.size() + g_oracle_violations << " across " << g_reports << " reports";
    for (std::size_t i = 0; i < g_violations.size() && i < 5; ++i) {
        os << " [" << g_violations[i].check << " n=" << g_violations[i].n << " seed=" << g_violations[i].seed.root_seed
           << "/" << g_violations[i].seed.stream_id << "]";
    }
    return {g_violations.empty() && g_oracle_violations == 0 && g_reports > 0, os.str()};
}

// 13. Byte-identical reports for 1 and 4 workers, every kind.
Outcome c13() {
    std::size_t differ = 0, kinds = 0;
    for (ExperimentKind k : all_experiment_kinds()) {
        ExperimentConfig c;
        c.kind = k;
        c.root_seed = 99;
        switch (k) {
            case ExperimentKind::gap_slope: c.n_list = {4, 6}; c.trials = 5000; break;
            case ExperimentKind::semicircle: c.n_list = {32, 64}; c.trials = 30; break;
            case ExperimentKind::crofton: c.n_list = {3, 5}; c.trials = 5000; break;
            case ExperimentKind::betti_k1:
            case ExperimentKind::index_imbalance: c.n_list = {8, 16}; c.trials = 200; break;
            default: c.n_list = {4, 9, 16}; c.trials = 100; break;
        }
        std::string first;
        for (std::size_t threads : {1u, 4u, 1u}) {
            c.threads = threads;
            const ExperimentReport r = run_experiment(c);
            const std::string bytes = report_to_csv(r) + report_to_json(r);
            if (first.empty()) {
                first = bytes;
            } else if (bytes != first) {
                ++differ;
            }
        }
        ++kinds;
    }
    return {differ == 0, "kinds=" + std::to_string(kinds) + " differing reruns=" + std::to_string(differ)};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>> kCriteria = {
    {1, {"one-quadric limit", c1}},
    {2, {"index imbalance", c2}},
    {3, {"semicircle", c3}},
    {4, {"crofton/kac", c4}},
    {5, {"gap slope", c5}},
    {6, {"c_n asymptotics", c6}},
    {7, {"spectral-variety scaling", c7}},
    {8, {"two-quadric limit", c8}},
    {9, {"mu limit", c9}},
    {10, {"c+d and rk d2 expectations", c10}},
    {11, {"oracle equivalences", c11}},
    {12, {"per-trial invariants", c12}},
    {13, {"reproducibility", c13}},
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    bool strict = false;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--strict") {
            strict = true;
        } else if (a == "--threads" && i + 1 < argc) {
            g_threads = std::stoul(argv[++i]);
        } else if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string item;
            while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
        } else {
            std::fprintf(stderr, "usage: %s [--only 1,2,...] [--threads N] [--strict]\n", argv[0]);
            return 2;
        }
    }

    int failed = 0, unexpected = 0;
    for (const auto& [id, entry] : kCriteria) {
        if (!only.empty() && !only.count(id)) continue;
        if (id == 12 && !only.empty() && only.size() == 1) {
            std::printf("SKIP %2d %s: needs the other criteria in the same run\n", id, entry.first);
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = entry.second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const bool known = kKnownRed.count(id) > 0;
        std::printf("%s %2d %s: %s [%.1fs]%s\n", o.pass ? "PASS" : "FAIL", id, entry.first, o.detail.c_str(),
                    elapsed(t0), (!o.pass && known) ? " (known red, see README)" : "");
        std::fflush(stdout);
        if (!o.pass) {
            ++failed;
            if (!known) ++unexpected;
        }
    }
    std::printf("%d failed, %d unexpected\n", failed, unexpected);
    if (strict) return failed ? 1 : 0;
    return unexpected ? 1 : 0;
}
