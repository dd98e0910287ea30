// Dense real matrix/vector arithmetic and Cholesky factorization.
//
// Everything here is plain double precision, row-major storage. Sizes are
// desk-scale (n up to a few hundred), so clarity wins over blocking tricks.

#ifndef PARTINFO_MATRIX_HPP
#define PARTINFO_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "partinfo/errors.hpp"

namespace partinfo {

using Vec = std::vector<double>;

class Matrix {
   public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw argument_error("matrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const Vec& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool same_shape(const Matrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    Matrix& operator+=(const Matrix& o) {
        if (!same_shape(o)) throw argument_error("matrix +=: shape mismatch");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        if (!same_shape(o)) throw argument_error("matrix -=: shape mismatch");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    Matrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
inline Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
inline Matrix operator*(Matrix a, double s) { return a *= s; }
inline Matrix operator*(double s, Matrix a) { return a *= s; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw argument_error("matrix *: inner dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.row_ptr(k);
            double* crow = c.row_ptr(i);
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

inline Vec operator*(const Matrix& a, const Vec& x) {
    if (a.cols() != x.size()) throw argument_error("matrix-vector *: dimension mismatch");
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row_ptr(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

inline Vec operator+(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw argument_error("vector +: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec operator-(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw argument_error("vector -: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec operator*(double s, Vec a) {
    for (double& v : a) v *= s;
    return a;
}

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw argument_error("dot: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

inline double max_abs(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

inline double trace(const Matrix& a) {
    if (a.rows() != a.cols()) throw argument_error("trace: matrix not square");
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

inline bool all_finite(const Matrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!std::isfinite(a(i, j))) return false;
    return true;
}

// ============================================================================
// SymMatrix — a square matrix validated symmetric and stored exactly so
// ============================================================================

/// Symmetry tolerance is relative: |a_ij - a_ji| <= tol * max(1, max|a_ij|).
class SymMatrix {
   public:
    static constexpr double kSymTol = 1e-12;

    SymMatrix() = default;

    explicit SymMatrix(Matrix m, double tol = kSymTol) {
        if (m.rows() != m.cols()) throw argument_error("SymMatrix: matrix not square");
        if (!all_finite(m)) throw argument_error("SymMatrix: non-finite entries");
        const double scale = std::max(1.0, max_abs(m));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = i + 1; j < m.cols(); ++j) {
                if (std::abs(m(i, j) - m(j, i)) > tol * scale)
                    throw argument_error("SymMatrix: matrix not symmetric within tolerance");
                const double avg = 0.5 * (m(i, j) + m(j, i));
                m(i, j) = avg;
                m(j, i) = avg;
            }
        mat_ = std::move(m);
    }

    static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
    static SymMatrix diagonal(const Vec& d) { return SymMatrix(Matrix::diagonal(d)); }

    std::size_t order() const noexcept { return mat_.rows(); }
    const Matrix& mat() const noexcept { return mat_; }
    double operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

    Vec diagonal_entries() const {
        Vec d(order());
        for (std::size_t i = 0; i < order(); ++i) d[i] = mat_(i, i);
        return d;
    }

   private:
    Matrix mat_;
};

/// Builds a SymMatrix from a product that is symmetric in exact arithmetic,
/// averaging away roundoff asymmetry without a tolerance check.
inline SymMatrix symmetrize(const Matrix& m) {
    if (m.rows() != m.cols()) throw argument_error("symmetrize: matrix not square");
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return SymMatrix(std::move(s), 1.0);
}

// ============================================================================
// Cholesky factorization — A = L Lᵀ for symmetric positive definite A
// ============================================================================

class Cholesky {
   public:
    /// Throws not_positive_definite_error naming the failing pivot.
    static Cholesky factor(const SymMatrix& a, const char* context = "cholesky") {
        const std::size_t n = a.order();
        Matrix lower(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            double d = a(j, j);
            for (std::size_t k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
            if (!(d > 0.0))
                throw not_positive_definite_error(std::string(context) + ": matrix not positive definite", j);
            const double ljj = std::sqrt(d);
            lower(j, j) = ljj;
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = a(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
                lower(i, j) = s / ljj;
            }
        }
        return Cholesky(std::move(lower));
    }

    const Matrix& lower() const noexcept { return lower_; }
    std::size_t order() const noexcept { return lower_.rows(); }

    double det() const {
        double d = 1.0;
        for (std::size_t i = 0; i < order(); ++i) d *= lower_(i, i) * lower_(i, i);
        return d;
    }

    double log_det() const {
        double d = 0.0;
        for (std::size_t i = 0; i < order(); ++i) d += 2.0 * std::log(lower_(i, i));
        return d;
    }

    /// Solves L y = b (forward substitution).
    Vec solve_lower(Vec b) const {
        for (std::size_t i = 0; i < order(); ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * b[k];
            b[i] = s / lower_(i, i);
        }
        return b;
    }

    /// Solves (L Lᵀ) x = b.
    Vec solve(Vec b) const {
        b = solve_lower(std::move(b));
        const std::size_t n = order();
        for (std::size_t ii = n; ii-- > 0;) {
            double s = b[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * b[k];
            b[ii] = s / lower_(ii, ii);
        }
        return b;
    }

    /// Solves (L Lᵀ) X = B column by column.
    Matrix solve(const Matrix& b) const {
        if (b.rows() != order()) throw argument_error("cholesky solve: dimension mismatch");
        Matrix x(b.rows(), b.cols());
        Vec col(b.rows());
        for (std::size_t j = 0; j < b.cols(); ++j) {
            for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
            Vec sol = solve(col);
            for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
        }
        return x;
    }

    SymMatrix inverse() const { return symmetrize(solve(Matrix::identity(order()))); }

    /// L⁻¹, lower triangular. (L⁻¹)ᵀ L⁻¹ = A⁻¹.
    Matrix inverse_lower() const {
        const std::size_t n = order();
        Matrix inv(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            inv(j, j) = 1.0 / lower_(j, j);
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = 0.0;
                for (std::size_t k = j; k < i; ++k) s += lower_(i, k) * inv(k, j);
                inv(i, j) = -s / lower_(i, i);
            }
        }
        return inv;
    }

   private:
    explicit Cholesky(Matrix lower) : lower_(std::move(lower)) {}
    Matrix lower_;
};

}  // namespace partinfo

#endif  // PARTINFO_MATRIX_HPP
