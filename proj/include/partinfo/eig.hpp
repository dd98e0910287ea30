// Symmetric eigendecomposition via cyclic Jacobi rotations.
//
// Jacobi is chosen over tridiagonalization + QL: at the problem sizes this
// library targets its O(n^3)-per-sweep cost is irrelevant, and it delivers
// small-residual factorizations with orthonormal vectors almost for free.

#ifndef PARTINFO_EIG_HPP
#define PARTINFO_EIG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "partinfo/errors.hpp"
#include "partinfo/matrix.hpp"

namespace partinfo {

enum class EigenOrder { ascending, descending };

/// Spectral factorization A = V diag(values) Vᵀ with orthonormal V columns.
struct EigenPair {
    Matrix vectors;  // column i is the eigenvector for values[i]
    Vec values;

    Matrix reconstruct() const {
        const std::size_t n = values.size();
        Matrix scaled(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) scaled(i, j) = vectors(i, j) * values[j];
        return scaled * vectors.transposed();
    }
};

namespace detail {

inline double off_diag_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) acc += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(acc);
}

}  // namespace detail

/// Full spectral factorization of a symmetric matrix.
///
/// Eigenvalues are sorted per `order`; exact ties keep their pre-sort
/// (rotation-pivot) index order, which makes repeated spectra reproducible.
inline EigenPair eig_sym(const SymMatrix& a, EigenOrder order = EigenOrder::ascending) {
    const std::size_t n = a.order();
    Matrix work = a.mat();
    Matrix vec = Matrix::identity(n);

    const double scale = std::max(1.0, frobenius_norm(work));
    const double tol = 1e-15 * scale;
    constexpr int kMaxSweeps = 64;

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        double off = detail::off_diag_norm(work);
        if (off <= tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = work(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;

                // Rotation angle zeroing work(p,q); stable tangent form.
                const double tau = (work(q, q) - work(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = work(p, p);
                const double aqq = work(q, q);
                work(p, p) = app - t * apq;
                work(q, q) = aqq + t * apq;
                work(p, q) = 0.0;
                work(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = work(r, p);
                        const double arq = work(r, q);
                        work(r, p) = c * arp - s * arq;
                        work(p, r) = work(r, p);
                        work(r, q) = s * arp + c * arq;
                        work(q, r) = work(r, q);
                    }
                    const double vrp = vec(r, p);
                    const double vrq = vec(r, q);
                    vec(r, p) = c * vrp - s * vrq;
                    vec(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }
    if (sweep == kMaxSweeps) {
        throw convergence_error("eig_sym: Jacobi sweeps exhausted", detail::off_diag_norm(work));
    }

    Vec values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = work(i, i);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (order == EigenOrder::ascending) {
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    } else {
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
    }

    EigenPair out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = values[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vec(i, idx[j]);
    }
    return out;
}

}  // namespace partinfo

#endif  // PARTINFO_EIG_HPP
