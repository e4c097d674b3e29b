#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"
#include "qbl/experiment.hpp"
#include "qbl/integral_geometry.hpp"
#include "qbl/pencil.hpp"
#include "qbl/quadric.hpp"
#include "qbl/report_io.hpp"
#include "qbl/rmt.hpp"
#include "qbl/spectra.hpp"

namespace py = pybind11;
using namespace qbl;

namespace {

SymMatrix to_sym(const Eigen::MatrixXd& a) { return SymMatrix::from_dense(a, 1e-12); }

py::dict scan_dict(const PencilScan& s) {
    py::dict d;
    d["n"] = s.n;
    d["method"] = to_string(s.method);
    d["crossings"] = s.crossings;
    d["jumps"] = s.jumps;
    d["arc_index"] = s.arc_index;
    d["mu"] = s.mu;
    d["min_index"] = s.min_index;
    d["sigma_count"] = s.sigma_count;
    d["index_constant"] = s.index_constant;
    d["discarded"] = s.discarded;
    d["discard_reason"] = s.discard_reason;
    d["antipodal_violations"] = s.antipodal_violations;
    return d;
}

ScanParams params(const std::string& method, std::size_t grid, double refine_tol, double zero_tol) {
    ScanParams p;
    p.method = scan_method_from_string(method);
    p.grid_size = grid;
    p.refine_tol = refine_tol;
    p.zero_tol = zero_tol;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random real quadrics: GOE sampling, Betti numbers, pencils, Monte Carlo experiments";
    m.attr("__version__") = QBL_VERSION;
    m.attr("DEFAULT_SEED") = kDefaultSeed;

    py::register_exception<NumericFailure>(m, "NumericFailure");
    py::register_exception<SampleDiscarded>(m, "SampleDiscarded");
    py::register_exception<UnsupportedConfiguration>(m, "UnsupportedConfiguration", PyExc_ValueError);

    m.def("sample_goe", [](std::size_t n, std::uint64_t seed, std::uint64_t stream) {
        return sample_goe(n, SeedSpec{seed, stream}).dense();
    }, py::arg("n"), py::arg("seed") = kDefaultSeed, py::arg("stream") = 0);

    m.def("haar_rotation", [](std::size_t m_, std::uint64_t seed, std::uint64_t stream) {
        return haar_rotation(m_, SeedSpec{seed, stream});
    }, py::arg("m"), py::arg("seed") = kDefaultSeed, py::arg("stream") = 0);

    m.def("eigenvalues", [](const Eigen::MatrixXd& a) { return eigenvalues(to_sym(a)).eigenvalues; },
          py::arg("matrix"), "Ascending eigenvalues (Householder + implicit QL).");

    m.def("inertia", [](const Eigen::MatrixXd& a, double tol) {
        const Inertia i = inertia(to_sym(a), tol);
        return py::make_tuple(i.pos, i.null, i.neg);
    }, py::arg("matrix"), py::arg("zero_tol") = -1.0, "(i+, i0, i-)");

    m.def("betti_one_quadric", [](const Eigen::MatrixXd& a, double tol) {
        const BettiResult b = betti_one_quadric(to_sym(a), tol);
        py::dict d;
        d["b"] = b.total_betti;
        d["mu"] = b.mu;
        d["degenerate"] = b.degenerate;
        return d;
    }, py::arg("matrix"), py::arg("zero_tol") = -1.0);

    m.def("scan_pencil", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::string& method,
                            std::size_t grid, double refine_tol, double zero_tol) {
        return scan_dict(scan_index_function(Pencil(to_sym(a), to_sym(b)), params(method, grid, refine_tol, zero_tol)));
    }, py::arg("q1"), py::arg("q2"), py::arg("method") = "spectral", py::arg("grid") = 0,
       py::arg("refine_tol") = 1e-10, py::arg("zero_tol") = -1.0);

    m.def("betti_two_quadrics", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::string& method) {
        const TwoQuadricBetti r = betti_two_quadrics(Pencil(to_sym(a), to_sym(b)), params(method, 0, 1e-10, -1.0));
        py::dict d;
        d["b"] = r.rank_e3;
        d["closed_form"] = r.closed_form_raw;
        d["ledger"] = r.ledger_betti;
        d["c_plus_d"] = r.c_plus_d;
        d["rank_d2"] = r.rank_d2;
        d["sigma_count"] = r.sigma_count;
        d["mu"] = r.mu;
        d["index_constant"] = r.index_constant;
        return d;
    }, py::arg("q1"), py::arg("q2"), py::arg("method") = "spectral");

    m.def("spectral_variety_count", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, bool oracle) {
        const Pencil p(to_sym(a), to_sym(b));
        return oracle ? spectral_variety_count_oracle(p) : spectral_variety_count(p);
    }, py::arg("q1"), py::arg("q2"), py::arg("oracle") = false);

    m.def("gap_probability", [](std::size_t n, double eps, std::size_t trials, std::uint64_t seed, bool rescaled,
                                std::size_t threads) {
        const GapEstimate g = gap_probability_mc(n, eps, trials, seed, rescaled, threads);
        return py::make_tuple(g.estimate, g.stderr_);
    }, py::arg("n"), py::arg("eps"), py::arg("trials"), py::arg("seed") = kDefaultSeed,
       py::arg("rescaled") = false, py::arg("threads") = 1);

    m.def("c_n_exact", &c_n_exact, py::arg("n"));
    m.def("semicircle_cdf", &semicircle_cdf, py::arg("x"));

    m.def("band_volume", [](double r, std::size_t ambient_dim, std::size_t sub_dim) {
        SubsphereSpec s;
        s.ambient_dim = ambient_dim;
        s.sub_dim = sub_dim;
        s.band_radius = r;
        return normalized_volume(s);
    }, py::arg("radius"), py::arg("ambient_dim") = 2, py::arg("sub_dim") = 1);

    m.def("integral_geometry_check", [](double band, std::size_t rotations, std::uint64_t seed) {
        const SubsphereSpec b = band > 0.0 ? SubsphereSpec::equatorial_band(band) : SubsphereSpec::great_circle();
        const IntegralGeometryCheck r =
            integral_geometry_check(SubsphereSpec::great_circle(), b, rotations, seed);
        return py::make_tuple(r.lhs_estimate, r.lhs_stderr, r.rhs_exact);
    }, py::arg("band") = 0.0, py::arg("rotations") = 10000, py::arg("seed") = kDefaultSeed);

    m.def("run_experiment_json", [](const std::string& kind, std::vector<std::size_t> n_list, std::size_t trials,
                                    std::uint64_t seed, std::size_t threads, const std::string& method,
                                    double eps) {
        ExperimentConfig c;
        c.kind = experiment_kind_from_string(kind);
        c.n_list = std::move(n_list);
        c.trials = trials;
        c.root_seed = seed;
        c.threads = threads;
        c.scan.method = scan_method_from_string(method);
        c.epsilon = eps;
        ExperimentReport r;
        {
            py::gil_scoped_release release;
            r = run_experiment(c);
        }
        return py::make_tuple(report_to_json(r), report_to_csv(r));
    }, py::arg("kind"), py::arg("n_list"), py::arg("trials"), py::arg("seed") = kDefaultSeed,
       py::arg("threads") = 1, py::arg("method") = "spectral", py::arg("eps") = 0.02);
}
