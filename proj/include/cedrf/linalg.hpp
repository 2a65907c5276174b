#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cedrf::linalg {

/// Dense real matrix, row-major. Entries are always finite.
class Matrix {
public:
    Matrix() = default;
    /// Zero-filled rows x cols matrix.
    Matrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of row-major entries; throws InvalidMatrix on size
    /// mismatch or non-finite entries.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    /// Nested-list construction, e.g. Matrix{{1, 2}, {3, 4}}.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> values);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] std::vector<double> diag() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
/// Matrix product; throws DimensionMismatch.
Matrix operator*(const Matrix& a, const Matrix& b);

/// y = A x. Throws DimensionMismatch.
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
/// y = A x into a caller-provided buffer (no allocation, no checks).
void matvec_into(const Matrix& a, std::span<const double> x, std::span<double> y) noexcept;

double trace(const Matrix& a);
double frobenius_norm(const Matrix& a) noexcept;
/// max |S_ij - S_ji|; throws DimensionMismatch for non-square input.
double max_asymmetry(const Matrix& s);

struct SymEig {
    std::vector<double> values;  ///< descending
    Matrix vectors;              ///< column j pairs with values[j]
};

inline constexpr double kSymmetryTolerance = 1e-10;

/// Cyclic Jacobi diagonalization of a symmetric matrix. Eigenvalues are
/// returned in descending order; ties keep the order in which the rotations
/// left them on the diagonal.
SymEig sym_eig(const Matrix& s);

struct Svd {
    Matrix u;                   ///< rows x n, orthonormal columns
    std::vector<double> sigma;  ///< descending, n = cols
    Matrix v;                   ///< n x n orthogonal
};

/// Thin SVD by one-sided (Hestenes) Jacobi. Requires rows >= cols.
Svd svd_jacobi(const Matrix& a);

inline constexpr double kPinvTolerance = 1e-12;

/// Moore-Penrose pseudoinverse. Singular values at or below
/// tol * largest singular value are treated as zero.
Matrix pinv(const Matrix& s, double tol = kPinvTolerance);

}  // namespace cedrf::linalg
