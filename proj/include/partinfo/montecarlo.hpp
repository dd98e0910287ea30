// Seeded Monte Carlo estimation of detection error probabilities.
//
// Determinism contract: a TrialReport is a pure function of (instance,
// trials, seed). Trials are partitioned into fixed-size blocks whose RNG
// stream id is the global block index; the worker count only decides how
// blocks are scheduled across threads and never leaks into the result.

#ifndef PARTINFO_MONTECARLO_HPP
#define PARTINFO_MONTECARLO_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "partinfo/errors.hpp"
#include "partinfo/model.hpp"
#include "partinfo/rng.hpp"

namespace partinfo {

constexpr std::uint64_t kTrialBlock = 4096;

struct TrialPlan {
    ProblemInstance instance;
    std::uint64_t trials;
    std::uint64_t seed;
    unsigned workers = 1;
};

struct TrialReport {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    double std_err = 0.0;    // sqrt(p_hat (1 - p_hat) / trials)
    BoundReport bound{1.0, 0.5};
};

namespace detail {

inline void finalize(TrialReport& report) {
    report.p_hat = report.trials == 0 ? 0.0 : static_cast<double>(report.errors) / static_cast<double>(report.trials);
    report.std_err = report.trials == 0
                         ? 0.0
                         : std::sqrt(report.p_hat * (1.0 - report.p_hat) / static_cast<double>(report.trials));
}

struct UnconditionalContext {
    const ProblemInstance& inst;
    const ConditionalStats stats;
    const Cholesky signal_factor;
    const Cholesky noise_factor;

    explicit UnconditionalContext(const ProblemInstance& instance)
        : inst(instance),
          stats(conditional_stats(instance)),
          signal_factor(Cholesky::factor(instance.signal_cov(), "run_unconditional signal covariance")),
          noise_factor(Cholesky::factor(instance.noise_cov(), "run_unconditional noise covariance")) {}

    std::uint64_t run_block(std::uint64_t seed, std::uint64_t block_index, std::uint64_t count) const {
        RngStream rng(seed, block_index);
        std::uint64_t errors = 0;
        for (std::uint64_t t = 0; t < count; ++t) {
            const Trial trial = sample_trial(inst, signal_factor, noise_factor, rng);
            const int decided = map_decide(stats, trial.book.z0, trial.book.z1, trial.y);
            if (decided != trial.bit) ++errors;
        }
        return errors;
    }
};

/// Runs blocks [block_begin, block_end) of the plan's fixed partition,
/// possibly across plan.workers threads, and accumulates error counts.
inline std::uint64_t run_block_range(const UnconditionalContext& ctx, const TrialPlan& plan,
                                     std::uint64_t block_begin, std::uint64_t block_end) {
    const std::uint64_t block_count = block_end - block_begin;
    const auto block_trials = [&](std::uint64_t block) {
        const std::uint64_t start = block * kTrialBlock;
        return std::min(kTrialBlock, plan.trials - std::min(plan.trials, start));
    };

    const unsigned workers = std::max(1u, plan.workers);
    if (workers == 1 || block_count <= 1) {
        std::uint64_t errors = 0;
        for (std::uint64_t b = block_begin; b < block_end; ++b)
            errors += ctx.run_block(plan.seed, b, block_trials(b));
        return errors;
    }

    std::vector<std::uint64_t> per_block(block_count, 0);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::uint64_t k = next.fetch_add(1);
            if (k >= block_count) return;
            const std::uint64_t b = block_begin + k;
            per_block[k] = ctx.run_block(plan.seed, b, block_trials(b));
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(std::min<std::uint64_t>(workers, block_count));
    pool.reserve(spawn);
    for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    std::uint64_t errors = 0;
    for (std::uint64_t e : per_block) errors += e;
    return errors;
}

}  // namespace detail

/// Unconditional error estimate: fresh codewords, noise and message bit per
/// trial, decided by map_decide against the trial's own partial information.
/// The report carries the expected Chernoff bound for comparison.
inline TrialReport run_unconditional(const TrialPlan& plan) {
    if (plan.trials < 100) throw argument_error("run_unconditional: need at least 100 trials");
    const detail::UnconditionalContext ctx(plan.instance);

    const std::uint64_t blocks = (plan.trials + kTrialBlock - 1) / kTrialBlock;
    TrialReport report;
    report.trials = plan.trials;
    report.errors = detail::run_block_range(ctx, plan, 0, blocks);
    report.bound = expected_chernoff_bound(plan.instance);
    detail::finalize(report);
    return report;
}

/// One contiguous part of the plan's fixed block partition: part `part` of
/// `num_parts`. Blocks keep their global stream ids, so reducing all parts
/// reproduces run_unconditional exactly.
inline TrialReport run_unconditional_part(const TrialPlan& plan, unsigned part, unsigned num_parts) {
    if (num_parts == 0 || part >= num_parts) throw argument_error("run_unconditional_part: bad part index");
    if (plan.trials < 100) throw argument_error("run_unconditional_part: need at least 100 trials");
    const detail::UnconditionalContext ctx(plan.instance);

    const std::uint64_t blocks = (plan.trials + kTrialBlock - 1) / kTrialBlock;
    const std::uint64_t base = blocks / num_parts;
    const std::uint64_t extra = blocks % num_parts;
    const std::uint64_t begin = part * base + std::min<std::uint64_t>(part, extra);
    const std::uint64_t end = begin + base + (part < extra ? 1 : 0);

    TrialReport report;
    report.errors = detail::run_block_range(ctx, plan, begin, end);
    for (std::uint64_t b = begin; b < end; ++b) {
        const std::uint64_t start = b * kTrialBlock;
        report.trials += std::min(kTrialBlock, plan.trials - std::min(plan.trials, start));
    }
    report.bound = expected_chernoff_bound(plan.instance);
    detail::finalize(report);
    return report;
}

/// Conditional error estimate for a fixed pair (z0, z1): per trial a fair
/// message bit and a draw of y from the conditional law N(mean_given(z_bit),
/// cov), decided by map_decide. Equal partial information short-circuits to
/// the exact value 1/2 with zero variance — no sampling happens, std_err is
/// 0 and errors is trials/2 by convention.
inline TrialReport run_conditional(const ConditionalStats& stats, const Vec& z0, const Vec& z1,
                                   std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw argument_error("run_conditional: need at least one trial");
    TrialReport report;
    report.trials = trials;
    if (z0 == z1) {
        report.errors = trials / 2;
        report.p_hat = 0.5;
        report.std_err = 0.0;
        return report;
    }

    const Cholesky cond_chol = Cholesky::factor(stats.cov, "run_conditional conditional covariance");
    const Vec mean0 = stats.mean_given(z0);
    const Vec mean1 = stats.mean_given(z1);

    RngStream rng(seed, 0);
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int bit = rng.bernoulli(0.5) ? 1 : 0;
        const Vec y = sample_gaussian(bit == 0 ? mean0 : mean1, cond_chol, rng);
        if (map_decide(stats, z0, z1, y) != bit) ++errors;
    }
    report.errors = errors;
    detail::finalize(report);
    return report;
}

/// Merges disjoint parts of one partitioned run: counts add, estimates are
/// recomputed, the bound is carried through. Associative and order
/// independent. Parts from different instances (detected through their
/// bound values) are rejected.
inline TrialReport reduce_reports(std::span<const TrialReport> parts) {
    if (parts.empty()) throw argument_error("reduce_reports: no parts");
    TrialReport total;
    total.bound = parts.front().bound;
    for (const TrialReport& part : parts) {
        if (part.bound.j_value != total.bound.j_value ||
            part.bound.expected_chernoff != total.bound.expected_chernoff)
            throw argument_error("reduce_reports: parts come from different instances");
        total.errors += part.errors;
        total.trials += part.trials;
    }
    detail::finalize(total);
    return total;
}

}  // namespace partinfo

#endif  // PARTINFO_MONTECARLO_HPP
