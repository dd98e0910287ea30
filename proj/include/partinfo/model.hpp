// Binary detection with partial information: problem instance, conditional
// statistics of the channel output given the reduced codewords, the MAP
// decision rule, its closed-form conditional error probability, and the
// Chernoff bounds on that error.
//
// Setting: the transmitter sends one of two codewords x_0, x_1 ~ N(0, Σ_x)
// through additive noise e ~ N(0, Σ_e); the detector observes y = x_b + e
// but knows the codewords only through z_i = T x_i for a fixed wide matrix
// T with full row rank.

#ifndef PARTINFO_MODEL_HPP
#define PARTINFO_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "partinfo/eig.hpp"
#include "partinfo/errors.hpp"
#include "partinfo/matrix.hpp"
#include "partinfo/qfunc.hpp"
#include "partinfo/rng.hpp"
#include "partinfo/sampling.hpp"

namespace partinfo {

/// Relative cutoff under which the reduction transform counts as rank deficient.
constexpr double kRankTol = 1e-10;

/// Full statistical description of one detection problem: signal covariance
/// Σ_x (n x n), noise covariance Σ_e (n x n) and the reduction transform
/// T (m x n, m < n, full row rank). Validated on construction; immutable after.
class ProblemInstance {
   public:
    ProblemInstance(SymMatrix signal_cov, SymMatrix noise_cov, Matrix transform)
        : signal_cov_(std::move(signal_cov)),
          noise_cov_(std::move(noise_cov)),
          transform_(std::move(transform)) {
        const std::size_t n = signal_cov_.order();
        const std::size_t m = transform_.rows();
        if (noise_cov_.order() != n)
            throw argument_error("ProblemInstance: covariance orders differ");
        if (transform_.cols() != n)
            throw argument_error("ProblemInstance: transform width != signal length");
        if (!(m >= 1 && m < n))
            throw argument_error("ProblemInstance: need 1 <= m < n");
        if (!all_finite(transform_))
            throw argument_error("ProblemInstance: non-finite transform");

        Cholesky::factor(signal_cov_, "ProblemInstance signal covariance");
        Cholesky::factor(noise_cov_, "ProblemInstance noise covariance");

        // Full row rank check on T via the spectrum of T Tᵀ: the singular
        // values of T are the square roots of its eigenvalues.
        const EigenPair gram = eig_sym(symmetrize(transform_ * transform_.transposed()),
                                       EigenOrder::ascending);
        const double smax = std::sqrt(std::max(0.0, gram.values.back()));
        const double smin = std::sqrt(std::max(0.0, gram.values.front()));
        if (!(smin > kRankTol * smax))
            throw rank_error("ProblemInstance: transform is rank deficient");
    }

    std::size_t n() const noexcept { return signal_cov_.order(); }
    std::size_t m() const noexcept { return transform_.rows(); }
    const SymMatrix& signal_cov() const noexcept { return signal_cov_; }
    const SymMatrix& noise_cov() const noexcept { return noise_cov_; }
    const Matrix& transform() const noexcept { return transform_; }

   private:
    SymMatrix signal_cov_;
    SymMatrix noise_cov_;
    Matrix transform_;
};

/// One transmitter/receiver codeword pair. z_i is always T x_i as computed,
/// never an independent degree of freedom.
struct Codebook {
    Vec x0, x1;  // transmitter codewords, length n
    Vec z0, z1;  // receiver partial information, length m
};

/// Everything the detector needs, computed once per instance:
///   gain      = Σ_x Tᵀ (T Σ_x Tᵀ)⁻¹            (n x m), maps z_i to the
///               conditional mean of y under hypothesis i;
///   cov       = Σ_x + Σ_e − gain · T Σ_x        (n x n), the conditional
///               covariance of y given z_i — the same for both hypotheses
///               and always positive definite;
///   whitener  = L⁻¹ for cov = L Lᵀ, so that whitenerᵀ whitener = cov⁻¹.
struct ConditionalStats {
    SymMatrix cov;
    Matrix gain;
    Matrix whitener;

    Vec mean_given(const Vec& z) const { return gain * z; }

    /// Squared Mahalanobis distance ‖cov^{-1/2} v‖².
    double whitened_norm2(const Vec& v) const {
        const Vec w = whitener * v;
        return dot(w, w);
    }
};

/// Expected-Chernoff-bound summary for an instance.
struct BoundReport {
    double j_value;           // det(I_m + W/2), always >= 1
    double expected_chernoff; // j_value^{-1/2} / 2, in (0, 1/2]
};

inline ConditionalStats conditional_stats(const ProblemInstance& inst) {
    const Matrix& t = inst.transform();
    const Matrix t_sigma = t * inst.signal_cov().mat();          // m x n
    const SymMatrix z_cov = symmetrize(t_sigma * t.transposed());

    Cholesky z_chol = [&] {
        try {
            return Cholesky::factor(z_cov, "conditional_stats reduced covariance");
        } catch (const not_positive_definite_error&) {
            throw rank_error("conditional_stats: T Σ_x Tᵀ numerically singular");
        }
    }();

    // gain = Σ_x Tᵀ (T Σ_x Tᵀ)⁻¹, computed as a solve against (T Σ_x)ᵀ.
    const Matrix gain = z_chol.solve(t_sigma).transposed();      // n x m

    Matrix cov = inst.signal_cov().mat() + inst.noise_cov().mat() - gain * t_sigma;
    const SymMatrix cond_cov = symmetrize(cov);
    const Cholesky cond_chol = Cholesky::factor(cond_cov, "conditional_stats conditional covariance");

    return ConditionalStats{cond_cov, gain, cond_chol.inverse_lower()};
}

/// MAP (equivalently ML) decision: the hypothesis whose conditional mean is
/// closer to y in the whitened metric. A tie — difference of squared
/// whitened distances at most 1e-12 — decides 0.
inline int map_decide(const ConditionalStats& stats, const Vec& z0, const Vec& z1, const Vec& y) {
    const double d0 = stats.whitened_norm2(y - stats.mean_given(z0));
    const double d1 = stats.whitened_norm2(y - stats.mean_given(z1));
    if (d0 - d1 <= 1e-12) return 0;
    return 1;
}

/// Whitened separation ‖cov^{-1/2}(μ_0 − μ_1)‖ between the two conditional means.
inline double whitened_separation(const ConditionalStats& stats, const Vec& z0, const Vec& z1) {
    return std::sqrt(stats.whitened_norm2(stats.mean_given(z0) - stats.mean_given(z1)));
}

/// Exact error probability of map_decide given the pair (z0, z1):
/// Q(separation / 2). Equal partial information short-circuits to 1/2 —
/// there is nothing to discriminate and detection is a fair coin toss.
inline double conditional_error_prob(const ConditionalStats& stats, const Vec& z0, const Vec& z1) {
    if (z0 == z1) return 0.5;
    return q_function(0.5 * whitened_separation(stats, z0, z1));
}

/// Chernoff bound exp(−separation²/8)/2 on conditional_error_prob; never
/// smaller than it on the same inputs.
inline double chernoff_conditional(const ConditionalStats& stats, const Vec& z0, const Vec& z1) {
    if (z0 == z1) return 0.5;
    return q_chernoff(0.5 * whitened_separation(stats, z0, z1));
}

/// Expected Chernoff bound over the distribution of (z0, z1):
///
///   P_e <= (1/2) det(I_m + W/2)^{-1/2},
///   W = T Σ_x Σ_{y|z}⁻¹ Σ_x Tᵀ (T Σ_x Tᵀ)⁻¹.
///
/// Evaluated through the two symmetric positive definite factors behind the
/// determinant: with Σ_z = T Σ_x Tᵀ, A = gain and B = Σ_{y|z},
///
///   det(I_m + W/2) = det(2 Σ_z) · det((2 Σ_z)⁻¹ + Aᵀ B⁻¹ A / 4),
///
/// and the second factor is the precision matrix of the Gaussian integral
/// defining the bound — it must be positive definite for the bound to exist,
/// which is validated here by its Cholesky factorization.
inline BoundReport expected_chernoff_bound(const ProblemInstance& inst) {
    const std::size_t m = inst.m();
    const ConditionalStats stats = conditional_stats(inst);

    const Matrix t_sigma = inst.transform() * inst.signal_cov().mat();
    const SymMatrix z_cov = symmetrize(t_sigma * inst.transform().transposed());
    Cholesky z_chol = [&] {
        try {
            return Cholesky::factor(z_cov, "expected_chernoff_bound reduced covariance");
        } catch (const not_positive_definite_error&) {
            throw rank_error("expected_chernoff_bound: T Σ_x Tᵀ numerically singular");
        }
    }();

    // Aᵀ B⁻¹ A as a Gram matrix of the whitened gain.
    const Matrix whitened_gain = stats.whitener * stats.gain;  // n x m
    const SymMatrix gain_gram = symmetrize(whitened_gain.transposed() * whitened_gain);

    const SymMatrix z_precision_half = symmetrize(0.5 * z_chol.inverse().mat());
    Matrix precision = z_precision_half.mat() + 0.25 * gain_gram.mat();
    const SymMatrix integral_precision = symmetrize(precision);

    Cholesky precision_chol = [&] {
        try {
            return Cholesky::factor(integral_precision, "expected_chernoff_bound integral precision");
        } catch (const not_positive_definite_error& e) {
            throw consistency_error(
                std::string("expected_chernoff_bound: integral precision not positive definite — ") +
                e.what());
        }
    }();

    const double log_j = static_cast<double>(m) * std::log(2.0) + z_chol.log_det() +
                         precision_chol.log_det();
    const double j_value = std::exp(log_j);
    if (!(j_value >= 1.0 - 1e-9))
        throw consistency_error("expected_chernoff_bound: determinant fell below 1");

    return BoundReport{j_value, 0.5 * std::exp(-0.5 * log_j)};
}

/// One simulated channel use. Draw order is fixed (x0, x1, e, bit) so a
/// given RngStream state always yields the same trial.
struct Trial {
    int bit;        // transmitted hypothesis index
    Codebook book;
    Vec y;          // channel output x_bit + e
};

inline Trial sample_trial(const ProblemInstance& inst, const Cholesky& signal_factor,
                          const Cholesky& noise_factor, RngStream& rng) {
    const Vec zero(inst.n(), 0.0);
    Trial trial;
    trial.book.x0 = sample_gaussian(zero, signal_factor, rng);
    trial.book.x1 = sample_gaussian(zero, signal_factor, rng);
    const Vec e = sample_gaussian(zero, noise_factor, rng);
    trial.bit = rng.bernoulli(0.5) ? 1 : 0;
    trial.y = (trial.bit == 0 ? trial.book.x0 : trial.book.x1) + e;
    trial.book.z0 = inst.transform() * trial.book.x0;
    trial.book.z1 = inst.transform() * trial.book.x1;
    return trial;
}

inline Trial sample_trial(const ProblemInstance& inst, RngStream& rng) {
    const Cholesky signal_factor = Cholesky::factor(inst.signal_cov(), "sample_trial signal covariance");
    const Cholesky noise_factor = Cholesky::factor(inst.noise_cov(), "sample_trial noise covariance");
    return sample_trial(inst, signal_factor, noise_factor, rng);
}

}  // namespace partinfo

#endif  // PARTINFO_MODEL_HPP
