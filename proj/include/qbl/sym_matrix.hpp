#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qbl {

/// Dense real symmetric matrix stored as its packed upper triangle
/// (row-major over i <= j). Symmetry holds by construction.
class SymMatrix {
public:
    /// Zero matrix of order n (n >= 1).
    explicit SymMatrix(std::size_t n);

    /// Takes ownership of a packed upper triangle of length n(n+1)/2.
    SymMatrix(std::size_t n, std::vector<double> packed);

    static SymMatrix identity(std::size_t n);
    static SymMatrix diagonal(std::span<const double> d);
    /// Symmetric part check: throws unless |a_ij - a_ji| <= tol * max|a|.
    static SymMatrix from_dense(const Eigen::MatrixXd& a, double tol = 0.0);

    std::size_t order() const noexcept { return n_; }
    /// Dimension of Sym(n, R), n(n+1)/2.
    std::size_t space_dim() const noexcept { return packed_.size(); }

    double operator()(std::size_t i, std::size_t j) const noexcept { return packed_[index(i, j)]; }
    void set(std::size_t i, std::size_t j, double value);

    std::span<const double> packed() const noexcept { return packed_; }

    /// sqrt(tr Q^2).
    double frobenius_norm() const noexcept;
    double max_abs() const noexcept;

    Eigen::MatrixXd dense() const;
    /// Top-left m x m block.
    SymMatrix leading_block(std::size_t m) const;
    /// M^T Q M for a square or tall M (result has order M.cols()).
    SymMatrix congruence(const Eigen::MatrixXd& m) const;

    SymMatrix& operator*=(double c) noexcept;
    SymMatrix& operator+=(const SymMatrix& other);
    friend SymMatrix operator*(double c, SymMatrix q) { return q *= c; }
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    SymMatrix operator-() const { return -1.0 * *this; }

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

    std::string to_string(int precision = 6) const;

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        if (i > j) std::swap(i, j);
        return i * n_ - i * (i - 1) / 2 + (j - i);
    }

    std::size_t n_;
    std::vector<double> packed_;
};

/// Parses rows separated by ';' or newlines, entries by ',' (the format of
/// SymMatrix::to_string). The matrix must be square and symmetric to 1e-12
/// relative. Throws InvalidArgument.
SymMatrix parse_matrix_literal(const std::string& text);

/// a * p + b * q, same order.
SymMatrix combine(double a, const SymMatrix& p, double b, const SymMatrix& q);

/// q(x) = sum_{i <= j} c_ij x_i x_j in n variables. Coefficients are packed in
/// the same order as SymMatrix.
class QuadraticForm {
public:
    explicit QuadraticForm(std::size_t nvars);
    QuadraticForm(std::size_t nvars, std::vector<double> coeffs);

    std::size_t nvars() const noexcept { return n_; }
    double coeff(std::size_t i, std::size_t j) const noexcept;
    void set_coeff(std::size_t i, std::size_t j, double c);
    std::span<const double> coeffs() const noexcept { return coeffs_; }

    double evaluate(std::span<const double> x) const;

    friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;

private:
    std::size_t n_;
    std::vector<double> coeffs_;
};

/// Q_ii = c_ii, Q_ij = c_ij / 2, so that q(x) = <x, Qx>.
SymMatrix form_to_matrix(const QuadraticForm& q);
QuadraticForm matrix_to_form(const SymMatrix& q);

}  // namespace qbl
