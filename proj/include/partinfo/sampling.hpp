// Gaussian vector sampling and random matrix generators.

#ifndef PARTINFO_SAMPLING_HPP
#define PARTINFO_SAMPLING_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "partinfo/eig.hpp"
#include "partinfo/errors.hpp"
#include "partinfo/matrix.hpp"
#include "partinfo/rng.hpp"

namespace partinfo {

/// One draw from N(mean, L Lᵀ) given a precomputed Cholesky factor. The
/// factor-taking overload exists for trial loops that sample thousands of
/// times from one covariance.
inline Vec sample_gaussian(const Vec& mean, const Cholesky& cov_factor, RngStream& rng) {
    const std::size_t n = cov_factor.order();
    if (mean.size() != n) throw argument_error("sample_gaussian: mean/factor size mismatch");
    const Vec z = rng.normal_vector(n);
    Vec out = mean;
    const Matrix& lower = cov_factor.lower();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) acc += lower(i, k) * z[k];
        out[i] += acc;
    }
    return out;
}

/// One draw from N(mean, cov). cov must be positive definite; the failing
/// Cholesky pivot index is reported otherwise.
inline Vec sample_gaussian(const Vec& mean, const SymMatrix& cov, RngStream& rng) {
    if (mean.size() != cov.order()) throw argument_error("sample_gaussian: mean/cov size mismatch");
    const Cholesky chol = Cholesky::factor(cov, "sample_gaussian");
    return sample_gaussian(mean, chol, rng);
}

/// n x m matrix with orthonormal columns, Haar-distributed: QR of a standard
/// Gaussian matrix with the R diagonal kept positive. Gram–Schmidt with one
/// reorthogonalization pass produces exactly that factor.
inline Matrix random_orthonormal_columns(std::size_t n, std::size_t m, RngStream& rng) {
    if (n == 0 || m == 0) throw argument_error("random_orthonormal_columns: zero dimension");
    if (m > n) throw argument_error("random_orthonormal_columns: more columns than rows");

    Matrix g(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) g(i, j) = rng.normal();

    for (std::size_t j = 0; j < m; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += g(i, k) * g(i, j);
                for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += g(i, j) * g(i, j);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) throw consistency_error("random_orthonormal_columns: degenerate Gaussian draw");
        for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
    }
    return g;
}

/// Random symmetric positive definite matrix Q diag(λ) Qᵀ with λ_i i.i.d.
/// Uniform(eig_low, eig_high) and Q Haar orthogonal.
inline SymMatrix random_psd(std::size_t n, double eig_low, double eig_high, RngStream& rng) {
    if (n == 0) throw argument_error("random_psd: order must be positive");
    if (!(eig_low > 0.0) || !(eig_low <= eig_high))
        throw argument_error("random_psd: need 0 < eig_low <= eig_high");

    Vec lambda(n);
    for (double& v : lambda) v = rng.uniform(eig_low, eig_high);
    const Matrix q = random_orthonormal_columns(n, n, rng);

    Matrix scaled(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scaled(i, j) = q(i, j) * lambda[j];
    return symmetrize(scaled * q.transposed());
}

}  // namespace partinfo

#endif  // PARTINFO_SAMPLING_HPP
