#include "qbl/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "qbl/error.hpp"

namespace qbl {

namespace {

std::size_t packed_length(std::size_t n) { return n * (n + 1) / 2; }

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
}

}  // namespace

SymMatrix::SymMatrix(std::size_t n) : n_(n), packed_(packed_length(n), 0.0) {
    if (n == 0) throw InvalidArgument("SymMatrix: order must be >= 1");
}

SymMatrix::SymMatrix(std::size_t n, std::vector<double> packed) : n_(n), packed_(std::move(packed)) {
    if (n == 0) throw InvalidArgument("SymMatrix: order must be >= 1");
    if (packed_.size() != packed_length(n)) throw InvalidArgument("SymMatrix: packed length mismatch");
    require_finite(packed_, "SymMatrix");
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) q.packed_[q.index(i, i)] = 1.0;
    return q;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    SymMatrix q(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) q.set(i, i, d[i]);
    return q;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0) throw InvalidArgument("from_dense: matrix must be square and nonempty");
    const auto n = static_cast<std::size_t>(a.rows());
    const double scale = a.cwiseAbs().maxCoeff();
    SymMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double aij = a(i, j), aji = a(j, i);
            if (std::abs(aij - aji) > tol * scale) throw InvalidArgument("from_dense: matrix is not symmetric");
            q.set(i, j, 0.5 * (aij + aji));
        }
    }
    return q;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
    if (!std::isfinite(value)) throw InvalidArgument("SymMatrix::set: non-finite entry");
    packed_[index(i, j)] = value;
}

double SymMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
            const double v = packed_[index(i, j)];
            s += (i == j ? 1.0 : 2.0) * v * v;
        }
    }
    return std::sqrt(s);
}

double SymMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : packed_) m = std::max(m, std::abs(v));
    return m;
}

Eigen::MatrixXd SymMatrix::dense() const {
    Eigen::MatrixXd a(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) a(i, j) = a(j, i) = packed_[index(i, j)];
    }
    return a;
}

SymMatrix SymMatrix::leading_block(std::size_t m) const {
    if (m == 0 || m > n_) throw InvalidArgument("leading_block: block order out of range");
    SymMatrix b(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) b.packed_[b.index(i, j)] = (*this)(i, j);
    }
    return b;
}

SymMatrix SymMatrix::congruence(const Eigen::MatrixXd& m) const {
    if (static_cast<std::size_t>(m.rows()) != n_ || m.cols() == 0) {
        throw InvalidArgument("congruence: row count must equal the matrix order");
    }
    const Eigen::MatrixXd r = m.transpose() * dense() * m;
    return from_dense(0.5 * (r + r.transpose()));
}

SymMatrix& SymMatrix::operator*=(double c) noexcept {
    for (double& v : packed_) v *= c;
    return *this;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
    if (other.n_ != n_) throw InvalidArgument("SymMatrix: order mismatch");
    for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += other.packed_[k];
    return *this;
}

std::string SymMatrix::to_string(int precision) const {
    std::ostringstream os;
    os << std::setprecision(precision);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (j) os << ',';
            os << (*this)(i, j);
        }
        if (i + 1 < n_) os << ';';
    }
    return os.str();
}

SymMatrix parse_matrix_literal(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::string row;
    auto flush = [&rows](const std::string& r) {
        if (r.find_first_not_of(" \t\r") == std::string::npos) return;
        std::vector<double> vals;
        std::stringstream ss(r);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw InvalidArgument("matrix literal: bad entry '" + cell + "'");
            }
            if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
                throw InvalidArgument("matrix literal: bad entry '" + cell + "'");
            }
            vals.push_back(v);
        }
        rows.push_back(std::move(vals));
    };
    for (char c : text) {
        if (c == ';' || c == '\n') {
            flush(row);
            row.clear();
        } else {
            row += c;
        }
    }
    flush(row);
    const std::size_t n = rows.size();
    if (n == 0) throw InvalidArgument("matrix literal: empty");
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw InvalidArgument("matrix literal: matrix is not square");
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rows[i][j];
    }
    return SymMatrix::from_dense(a, 1e-12);
}

SymMatrix combine(double a, const SymMatrix& p, double b, const SymMatrix& q) {
    if (p.order() != q.order()) throw InvalidArgument("combine: order mismatch");
    std::vector<double> out(p.space_dim());
    const auto pp = p.packed();
    const auto qp = q.packed();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * pp[k] + b * qp[k];
    return SymMatrix(p.order(), std::move(out));
}

QuadraticForm::QuadraticForm(std::size_t nvars) : n_(nvars), coeffs_(packed_length(nvars), 0.0) {
    if (nvars == 0) throw InvalidArgument("QuadraticForm: need at least one variable");
}

QuadraticForm::QuadraticForm(std::size_t nvars, std::vector<double> coeffs)
    : n_(nvars), coeffs_(std::move(coeffs)) {
    if (nvars == 0) throw InvalidArgument("QuadraticForm: need at least one variable");
    if (coeffs_.size() != packed_length(nvars)) throw InvalidArgument("QuadraticForm: coefficient count mismatch");
    require_finite(coeffs_, "QuadraticForm");
}

double QuadraticForm::coeff(std::size_t i, std::size_t j) const noexcept {
    if (i > j) std::swap(i, j);
    return coeffs_[i * n_ - i * (i - 1) / 2 + (j - i)];
}

void QuadraticForm::set_coeff(std::size_t i, std::size_t j, double c) {
    if (!std::isfinite(c)) throw InvalidArgument("QuadraticForm: non-finite coefficient");
    if (i > j) std::swap(i, j);
    coeffs_[i * n_ - i * (i - 1) / 2 + (j - i)] = c;
}

double QuadraticForm::evaluate(std::span<const double> x) const {
    if (x.size() != n_) throw InvalidArgument("QuadraticForm::evaluate: dimension mismatch");
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) s += coeffs_[k++] * x[i] * x[j];
    }
    return s;
}

SymMatrix form_to_matrix(const QuadraticForm& q) {
    const std::size_t n = q.nvars();
    std::vector<double> packed(q.coeffs().begin(), q.coeffs().end());
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j, ++k) {
            if (i != j) packed[k] *= 0.5;
        }
    }
    return SymMatrix(n, std::move(packed));
}

QuadraticForm matrix_to_form(const SymMatrix& q) {
    const std::size_t n = q.order();
    std::vector<double> coeffs(q.packed().begin(), q.packed().end());
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j, ++k) {
            if (i != j) coeffs[k] *= 2.0;
        }
    }
    return QuadraticForm(n, std::move(coeffs));
}

}  // namespace qbl
