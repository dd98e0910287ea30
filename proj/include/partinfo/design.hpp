// Constructive design of reduction transforms that minimize the expected
// Chernoff bound.
//
// The construction runs through a whitened coordinate system: factor the
// signal covariance, express signal-plus-noise in units of the signal
// spectrum, and read off per-direction scores whose m smallest entries mark
// the best reduction subspace. Every minimizer is then
//
//     T = E · D · Mᵀ · U_pᵀ · Λ⁻¹ · Fᵀ
//
// with E unitary, D positive diagonal and M an orthonormal basis of that
// subspace (itself free up to an m x m rotation Γ). The bound value is flat
// across the whole (E, D, Γ) family.

#ifndef PARTINFO_DESIGN_HPP
#define PARTINFO_DESIGN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "partinfo/eig.hpp"
#include "partinfo/errors.hpp"
#include "partinfo/matrix.hpp"
#include "partinfo/model.hpp"
#include "partinfo/rng.hpp"
#include "partinfo/sampling.hpp"

namespace partinfo {

/// Whitened factorization of a covariance pair, plus the subspace selection
/// it induces for a given target dimension m.
///
/// Invariants maintained here:
///   signal_cov  = signal_basis · diag(signal_scale²) · signal_basisᵀ
///   whitened_total = Λ⁻¹ Fᵀ (Σ_x + Σ_e) F Λ⁻¹ with F = signal_basis,
///                    Λ = diag(signal_scale); its spectrum is > 1 whenever
///                    the noise covariance is positive definite
///   selection_scores[i] = 1 − 1/whitened_spectrum[i], all in (0, 1)
///   score_order = stable ascending ordering of selection_scores
///   selected    = first m entries of score_order
struct TransformFactors {
    SymMatrix signal_cov;
    SymMatrix noise_cov;

    Matrix signal_basis;            // n x n orthonormal, eigenvalues descending
    Vec signal_scale;               // square roots of the signal eigenvalues
    SymMatrix whitened_total;       // signal-plus-noise in whitened signal coordinates
    Matrix whitened_basis;          // n x n orthonormal, eigenvalues ascending
    Vec whitened_spectrum;          // ascending, all > 1
    Vec selection_scores;           // entry i belongs to whitened_basis column i
    std::vector<std::size_t> score_order;
    std::vector<std::size_t> selected;

    std::size_t n() const noexcept { return signal_scale.size(); }
    std::size_t m() const noexcept { return selected.size(); }
};

/// A member of the optimal transform family together with the bound value
/// it attains. attained_j always equals optimal_j up to roundoff; the
/// constructor cross-checks that.
struct OptimalTransform {
    Matrix transform;           // m x n
    Matrix output_rotation;     // E, m x m unitary
    Vec output_scale;           // D diagonal, positive
    Matrix subspace_rotation;   // Γ, m x m unitary
    double attained_j;          // det criterion evaluated on `transform`
    double optimal_j;           // best possible det criterion, same units
};

/// Converts the bare product form of the optimal value into det-criterion
/// (J) units. The two scalings coexist in the construction; converting
/// explicitly at call sites keeps factor-of-2^m slips impossible.
inline double product_to_j(double product_form, std::size_t m) {
    return std::ldexp(product_form, -static_cast<int>(m));
}

inline TransformFactors factorize(const SymMatrix& signal_cov, const SymMatrix& noise_cov,
                                  std::size_t m) {
    const std::size_t n = signal_cov.order();
    if (noise_cov.order() != n) throw argument_error("factorize: covariance orders differ");
    if (!(m >= 1 && m < n)) throw argument_error("factorize: need 1 <= m < n");

    TransformFactors f;
    f.signal_cov = signal_cov;
    f.noise_cov = noise_cov;

    const EigenPair signal_eig = eig_sym(signal_cov, EigenOrder::descending);
    if (!(signal_eig.values.back() > 0.0))
        throw not_positive_definite_error(
            "factorize: signal covariance not positive definite, smallest eigenvalue " +
                std::to_string(signal_eig.values.back()),
            n - 1);
    f.signal_basis = signal_eig.vectors;
    f.signal_scale.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.signal_scale[i] = std::sqrt(signal_eig.values[i]);

    // Whitened signal-plus-noise: Λ⁻¹ Fᵀ (Σ_x + Σ_e) F Λ⁻¹.
    const Matrix total = signal_cov.mat() + noise_cov.mat();
    Matrix ft_total_f = f.signal_basis.transposed() * total * f.signal_basis;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            ft_total_f(i, j) /= f.signal_scale[i] * f.signal_scale[j];
    f.whitened_total = symmetrize(ft_total_f);

    const EigenPair whitened_eig = eig_sym(f.whitened_total, EigenOrder::ascending);
    f.whitened_basis = whitened_eig.vectors;
    f.whitened_spectrum = whitened_eig.values;

    f.selection_scores.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.selection_scores[i] = 1.0 - 1.0 / f.whitened_spectrum[i];

    f.score_order.resize(n);
    std::iota(f.score_order.begin(), f.score_order.end(), std::size_t{0});
    std::stable_sort(f.score_order.begin(), f.score_order.end(), [&](std::size_t a, std::size_t b) {
        return f.selection_scores[a] < f.selection_scores[b];
    });
    f.selected.assign(f.score_order.begin(), f.score_order.begin() + m);
    return f;
}

/// Optimal value of the reduced subspace problem in product form:
/// ∏ over the selected directions of (1 + 1/score).
inline double optimal_value(const TransformFactors& factors) {
    double prod = 1.0;
    for (std::size_t idx : factors.selected) prod *= 1.0 + 1.0 / factors.selection_scores[idx];
    return prod;
}

namespace detail {

inline void require_unitary(const Matrix& u, const char* name, double tol = 1e-10) {
    if (u.rows() != u.cols()) throw argument_error(std::string(name) + ": not square");
    const Matrix gram = u.transposed() * u;
    const double dev = frobenius_norm(gram - Matrix::identity(u.rows()));
    if (dev > tol)
        throw argument_error(std::string(name) + ": not unitary (deviation " + std::to_string(dev) + ")");
}

}  // namespace detail

/// Orthonormal basis of the selected subspace, mixed by Γ: column k of the
/// result carries Γ's row k into the selected coordinate slots.
inline Matrix subspace_basis(const TransformFactors& factors, const Matrix& gamma) {
    const std::size_t n = factors.n();
    const std::size_t m = factors.m();
    detail::require_unitary(gamma, "subspace_basis: Γ");
    if (gamma.rows() != m) throw argument_error("subspace_basis: Γ must be m x m");

    Matrix basis(n, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) basis(factors.score_order[k], j) = gamma(k, j);
    return basis;
}

/// Subspace objective G: 2^{-m} ∏ (1 + 1/λ_i(Mᵀ S M)) with S the diagonal
/// score matrix in the whitened eigenbasis. Equals the det criterion of the
/// transform assembled from M (see transform_from_subspace).
inline double subspace_objective(const TransformFactors& factors, const Matrix& subspace) {
    const std::size_t n = factors.n();
    const std::size_t m = factors.m();
    if (subspace.rows() != n || subspace.cols() != m)
        throw argument_error("subspace_objective: basis must be n x m");
    const Matrix gram = subspace.transposed() * subspace;
    if (frobenius_norm(gram - Matrix::identity(m)) > 1e-8)
        throw argument_error("subspace_objective: basis columns not orthonormal");

    // Mᵀ diag(scores) M
    Matrix scored = subspace;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) scored(i, j) *= factors.selection_scores[i];
    const SymMatrix compressed = symmetrize(subspace.transposed() * scored);

    const EigenPair eig = eig_sym(compressed, EigenOrder::ascending);
    double prod = 1.0;
    for (double lambda : eig.values) prod *= 1.0 + 1.0 / lambda;
    return product_to_j(prod, m);
}

/// Assembles T = E D Mᵀ U_pᵀ Λ⁻¹ Fᵀ from an orthonormal subspace basis M.
inline Matrix transform_from_subspace(const TransformFactors& factors, const Matrix& subspace,
                                      const Matrix& output_rotation, const Vec& output_scale) {
    const std::size_t n = factors.n();
    const std::size_t m = subspace.cols();

    Matrix core = subspace.transposed() * factors.whitened_basis.transposed();  // m x n
    // Right-multiply by Λ⁻¹ Fᵀ.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) core(i, j) /= factors.signal_scale[j];
    core = core * factors.signal_basis.transposed();

    Matrix scaled = core;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= output_scale[i];
    return output_rotation * scaled;
}

/// Optimal transform for a chosen family member (E, D, Γ). The attained det
/// criterion is evaluated through the full bound computation on the
/// assembled transform and must agree with the closed-form optimum; a
/// mismatch beyond 1e-6 relative is an internal error, not bad input.
inline OptimalTransform build_optimal(const TransformFactors& factors, const Matrix& output_rotation,
                                      const Vec& output_scale, const Matrix& subspace_rotation) {
    const std::size_t m = factors.m();
    detail::require_unitary(output_rotation, "build_optimal: E");
    detail::require_unitary(subspace_rotation, "build_optimal: Γ");
    if (output_rotation.rows() != m || subspace_rotation.rows() != m)
        throw argument_error("build_optimal: E and Γ must be m x m");
    if (output_scale.size() != m) throw argument_error("build_optimal: D must have m entries");
    for (double d : output_scale)
        if (!(d > 0.0)) throw argument_error("build_optimal: D entries must be positive");

    OptimalTransform opt;
    opt.output_rotation = output_rotation;
    opt.output_scale = output_scale;
    opt.subspace_rotation = subspace_rotation;

    const Matrix subspace = subspace_basis(factors, subspace_rotation);
    opt.transform = transform_from_subspace(factors, subspace, output_rotation, output_scale);
    opt.optimal_j = product_to_j(optimal_value(factors), m);

    const ProblemInstance inst(factors.signal_cov, factors.noise_cov, opt.transform);
    opt.attained_j = expected_chernoff_bound(inst).j_value;

    const double rel = std::abs(opt.attained_j - opt.optimal_j) / opt.optimal_j;
    if (!(rel <= 1e-6))
        throw consistency_error("build_optimal: attained criterion " + std::to_string(opt.attained_j) +
                                " disagrees with closed form " + std::to_string(opt.optimal_j));
    return opt;
}

/// Canonical optimal transform: E = D = Γ = identity.
inline OptimalTransform build_optimal(const TransformFactors& factors) {
    const std::size_t m = factors.m();
    return build_optimal(factors, Matrix::identity(m), Vec(m, 1.0), Matrix::identity(m));
}

/// Det criterion J of an arbitrary instance; delegates to the bound.
inline double transform_objective(const ProblemInstance& inst) {
    return expected_chernoff_bound(inst).j_value;
}

/// Subspace representative of an arbitrary full-rank transform: an
/// orthonormal M (plus the rotation/scale pair splitting T Σ_x Tᵀ) whose
/// subspace objective equals the transform's det criterion exactly.
///
/// The factor pair comes from the spectral decomposition of T Σ_x Tᵀ with
/// eigenvalues descending and each rotation column flipped to a non-negative
/// leading entry, which pins one representative of the sign/ordering freedom.
struct SubspaceLift {
    Matrix subspace;   // n x m, orthonormal columns
    Matrix rotation;   // Ẽ, m x m unitary
    Vec scale;         // D̃ diagonal, positive
};

inline SubspaceLift lift_transform(const ProblemInstance& inst, const TransformFactors& factors) {
    const std::size_t m = inst.m();
    const Matrix& t = inst.transform();

    const SymMatrix z_cov = symmetrize(t * inst.signal_cov().mat() * t.transposed());
    EigenPair z_eig = eig_sym(z_cov, EigenOrder::descending);
    for (std::size_t j = 0; j < m; ++j) {
        if (z_eig.vectors(0, j) < 0.0)
            for (std::size_t i = 0; i < m; ++i) z_eig.vectors(i, j) = -z_eig.vectors(i, j);
    }

    SubspaceLift lift;
    lift.rotation = z_eig.vectors;
    lift.scale.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (!(z_eig.values[j] > 0.0))
            throw rank_error("lift_transform: T Σ_x Tᵀ numerically singular");
        lift.scale[j] = std::sqrt(z_eig.values[j]);
    }

    // M = U_pᵀ Λ Fᵀ Tᵀ Ẽ D̃⁻¹
    Matrix ft_tt = factors.signal_basis.transposed() * t.transposed();  // n x m
    for (std::size_t i = 0; i < factors.n(); ++i)
        for (std::size_t j = 0; j < m; ++j) ft_tt(i, j) *= factors.signal_scale[i];
    Matrix subspace = factors.whitened_basis.transposed() * ft_tt * lift.rotation;
    for (std::size_t i = 0; i < factors.n(); ++i)
        for (std::size_t j = 0; j < m; ++j) subspace(i, j) /= lift.scale[j];
    lift.subspace = std::move(subspace);
    return lift;
}

/// Dense Gaussian m x n transform, resampled until the full-row-rank check
/// passes (which the first draw does almost surely).
inline Matrix random_full_rank_t(std::size_t n, std::size_t m, RngStream& rng) {
    if (!(m >= 1 && m < n)) throw argument_error("random_full_rank_t: need 1 <= m < n");
    for (;;) {
        Matrix t(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) t(i, j) = rng.normal();

        const EigenPair gram = eig_sym(symmetrize(t * t.transposed()), EigenOrder::ascending);
        const double smax = std::sqrt(std::max(0.0, gram.values.back()));
        const double smin = std::sqrt(std::max(0.0, gram.values.front()));
        if (smin > kRankTol * smax) return t;
    }
}

/// Det criterion of the m = n reference problem — an invertible transform,
/// i.e. the detector effectively holds the full codebook:
/// det(I_n + Σ_x Σ_e⁻¹ / 2), evaluated in the symmetric form
/// det(I_n + L⁻¹ Σ_x L⁻ᵀ / 2) for Σ_e = L Lᵀ.
inline double gaussian_bound_j(const SymMatrix& signal_cov, const SymMatrix& noise_cov) {
    const std::size_t n = signal_cov.order();
    if (noise_cov.order() != n) throw argument_error("gaussian_bound_j: orders differ");
    const Cholesky noise_chol = Cholesky::factor(noise_cov, "gaussian_bound_j noise covariance");
    const Matrix noise_white = noise_chol.inverse_lower();
    const Matrix whitened_signal = noise_white * signal_cov.mat() * noise_white.transposed();
    const SymMatrix inner = symmetrize(Matrix::identity(n) + 0.5 * whitened_signal);
    return Cholesky::factor(inner, "gaussian_bound_j criterion matrix").det();
}

}  // namespace partinfo

#endif  // PARTINFO_DESIGN_HPP
