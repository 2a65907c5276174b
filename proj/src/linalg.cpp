#include "cedrf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cedrf/error.hpp"

namespace cedrf::linalg {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(op) + ": " + shape(a) + " vs " + shape(b));
    }
}

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            sum += 2.0 * a(i, j) * a(i, j);
        }
    }
    return std::sqrt(sum);
}

// Flip each column so its largest-magnitude entry is positive. First such
// entry wins on ties.
void canonicalize_signs(Matrix& v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, j)) > best) {
                best = std::abs(v(i, j));
                arg = i;
            }
        }
        if (v.rows() > 0 && v(arg, j) < 0.0) {
            for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
        }
    }
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

Matrix permute_columns(const Matrix& m, const std::vector<std::size_t>& order) {
    Matrix out(m.rows(), order.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, order[j]);
    }
    return out;
}

constexpr int kMaxSweeps = 100;

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidMatrix("entry count " + std::to_string(data_.size()) + " does not match shape " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (double x : data_) {
        if (!std::isfinite(x)) throw InvalidMatrix("matrix entries must be finite");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InvalidMatrix("ragged initializer list");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    for (double x : data_) {
        if (!std::isfinite(x)) throw InvalidMatrix("matrix entries must be finite");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw InvalidMatrix("matrix entries must be finite");
        m(i, i) = values[i];
    }
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    std::vector<double> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw InvalidMatrix("ragged rows");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return {r, c, std::move(entries)};
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
}

std::vector<double> Matrix::diag() const {
    std::vector<double> d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
    return d;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other, "add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other, "subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& x : data_) x *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: " + shape(a) + " * " + shape(b));
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw DimensionMismatch("matvec: " + shape(a) + " * vector of length " + std::to_string(x.size()));
    }
    std::vector<double> y(a.rows());
    matvec_into(a, x, y);
    return y;
}

void matvec_into(const Matrix& a, std::span<const double> x, std::span<double> y) noexcept {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * x[j];
        y[i] = acc;
    }
}

double trace(const Matrix& a) {
    if (!a.square()) throw DimensionMismatch("trace of non-square " + shape(a));
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const Matrix& a) noexcept {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

double max_asymmetry(const Matrix& s) {
    if (!s.square()) throw DimensionMismatch("symmetry check on non-square " + shape(s));
    double worst = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = i + 1; j < s.cols(); ++j) worst = std::max(worst, std::abs(s(i, j) - s(j, i)));
    }
    return worst;
}

SymEig sym_eig(const Matrix& s) {
    const double asym = max_asymmetry(s);
    if (asym > kSymmetryTolerance) {
        throw NotSymmetric("sym_eig: asymmetry " + std::to_string(asym) + " exceeds tolerance");
    }
    const std::size_t n = s.rows();
    // Work on the exactly symmetrized copy.
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s(i, j) + s(j, i));
    }
    Matrix v = Matrix::identity(n);
    const double norm = frobenius_norm(a);

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        if (off == 0.0 || off <= 1e-15 * norm) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == kMaxSweeps && off_diagonal_norm(a) > 1e-12 * std::max(norm, 1.0)) {
        throw NoConvergence("sym_eig: Jacobi sweeps exhausted");
    }

    const std::vector<double> raw = a.diag();
    const auto order = descending_order(raw);
    SymEig out;
    out.values.reserve(n);
    for (std::size_t j : order) out.values.push_back(raw[j]);
    out.vectors = permute_columns(v, order);
    canonicalize_signs(out.vectors);
    return out;
}

Svd svd_jacobi(const Matrix& a) {
    if (a.rows() < a.cols()) throw DimensionMismatch("svd_jacobi requires rows >= cols, got " + shape(a));
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Matrix u = a;
    Matrix v = Matrix::identity(n);
    constexpr double eps = 1e-15;

    bool rotated = true;
    for (int sweep = 0; sweep < kMaxSweeps && rotated; ++sweep) {
        rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += u(i, p) * u(i, p);
                    beta += u(i, q) * u(i, q);
                    gamma += u(i, p) * u(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double up = u(i, p);
                    const double uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p);
                    const double vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
        if (sweep + 1 == kMaxSweeps) throw NoConvergence("svd_jacobi: sweeps exhausted");
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += u(i, j) * u(i, j);
        sigma[j] = std::sqrt(s);
        if (sigma[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) u(i, j) /= sigma[j];
        }
    }
    const auto order = descending_order(sigma);
    Svd out;
    for (std::size_t j : order) out.sigma.push_back(sigma[j]);
    out.u = permute_columns(u, order);
    out.v = permute_columns(v, order);
    return out;
}

Matrix pinv(const Matrix& s, double tol) {
    if (s.empty()) return Matrix(s.cols(), s.rows());

    if (s.square() && max_asymmetry(s) <= 1e-14 * std::max(frobenius_norm(s), 1e-300)) {
        const SymEig eig = sym_eig(s);
        double largest = 0.0;
        for (double w : eig.values) largest = std::max(largest, std::abs(w));
        const std::size_t n = s.rows();
        Matrix out(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = eig.values[k];
            if (largest == 0.0 || std::abs(w) <= tol * largest) continue;
            const double inv = 1.0 / w;
            for (std::size_t i = 0; i < n; ++i) {
                const double vik = eig.vectors(i, k) * inv;
                for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * eig.vectors(j, k);
            }
        }
        return out;
    }

    if (s.rows() < s.cols()) return pinv(s.transpose(), tol).transpose();

    const Svd d = svd_jacobi(s);
    const double largest = d.sigma.empty() ? 0.0 : d.sigma.front();
    Matrix out(s.cols(), s.rows());
    for (std::size_t k = 0; k < d.sigma.size(); ++k) {
        if (largest == 0.0 || d.sigma[k] <= tol * largest) continue;
        const double inv = 1.0 / d.sigma[k];
        for (std::size_t i = 0; i < s.cols(); ++i) {
            const double vik = d.v(i, k) * inv;
            for (std::size_t j = 0; j < s.rows(); ++j) out(i, j) += vik * d.u(j, k);
        }
    }
    return out;
}

}  // namespace cedrf::linalg
