// Config-driven experiment runners: the random-vs-optimal comparison, the
// SNR / m / n sweeps, and single-instance inspection. These back the CLI
// subcommands and emit schema-stable CSV.
//
// SNR is the trace ratio tr(Σ_x)/tr(Σ_e) and is enforced by scalar-scaling
// Σ_e; on the dB axis SNR_dB = 10 log10(trace ratio).

#ifndef PARTINFO_EXPERIMENTS_HPP
#define PARTINFO_EXPERIMENTS_HPP

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "partinfo/design.hpp"
#include "partinfo/errors.hpp"
#include "partinfo/io.hpp"
#include "partinfo/matrix.hpp"
#include "partinfo/model.hpp"
#include "partinfo/montecarlo.hpp"
#include "partinfo/rng.hpp"
#include "partinfo/sampling.hpp"

namespace partinfo {

enum class ExperimentKind { random_vs_opt, sweep_snr, sweep_m, sweep_n, inspect };

inline const char* kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::random_vs_opt: return "random-vs-opt";
        case ExperimentKind::sweep_snr: return "sweep-snr";
        case ExperimentKind::sweep_m: return "sweep-m";
        case ExperimentKind::sweep_n: return "sweep-n";
        case ExperimentKind::inspect: return "inspect";
    }
    return "?";
}

inline ExperimentKind kind_from_name(const std::string& name) {
    if (name == "random-vs-opt") return ExperimentKind::random_vs_opt;
    if (name == "sweep-snr") return ExperimentKind::sweep_snr;
    if (name == "sweep-m") return ExperimentKind::sweep_m;
    if (name == "sweep-n") return ExperimentKind::sweep_n;
    if (name == "inspect") return ExperimentKind::inspect;
    throw config_error("unknown experiment kind '" + name + "'");
}

/// Inclusive arithmetic progression start:step:stop (or start:stop with step
/// 1, or a single value).
struct SweepRange {
    double start = 0.0;
    double step = 1.0;
    double stop = 0.0;

    static SweepRange single(double v) { return {v, 1.0, v}; }

    std::vector<double> points() const {
        if (step <= 0.0) throw config_error("range step must be positive");
        std::vector<double> pts;
        for (double v = start; v <= stop + 1e-9 * std::abs(step); v += step) pts.push_back(v);
        if (pts.empty()) throw config_error("range is empty");
        return pts;
    }
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::inspect;
    SweepRange n = SweepRange::single(20);
    SweepRange m = SweepRange::single(5);
    SweepRange snr_db = SweepRange::single(0.0);
    double eig_low = 0.1;
    double eig_high = 2.0;
    bool shared_basis = false;
    std::uint64_t trials = 0;            // 0: skip Monte Carlo columns
    std::uint64_t random_transforms = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string output_path;             // empty: stdout
    std::string sigma_x_file;            // inspect inputs
    std::string sigma_e_file;
    std::string t_file;
};

// ============================================================================
// Config construction
// ============================================================================

namespace detail {

inline double parse_number(const std::string& text, const std::string& key) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end)
        throw config_error("config key '" + key + "': bad number '" + text + "'");
    return value;
}

inline std::uint64_t parse_unsigned(const std::string& text, const std::string& key) {
    std::uint64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end)
        throw config_error("config key '" + key + "': bad unsigned integer '" + text + "'");
    return value;
}

inline SweepRange parse_range(const std::string& text, const std::string& key) {
    std::vector<std::string> parts;
    std::size_t from = 0;
    for (;;) {
        const auto colon = text.find(':', from);
        if (colon == std::string::npos) {
            parts.push_back(text.substr(from));
            break;
        }
        parts.push_back(text.substr(from, colon - from));
        from = colon + 1;
    }
    SweepRange range;
    if (parts.size() == 1) {
        range = SweepRange::single(parse_number(parts[0], key));
    } else if (parts.size() == 2) {
        range = {parse_number(parts[0], key), 1.0, parse_number(parts[1], key)};
    } else if (parts.size() == 3) {
        range = {parse_number(parts[0], key), parse_number(parts[1], key), parse_number(parts[2], key)};
    } else {
        throw config_error("config key '" + key + "': expected value, start:stop or start:step:stop");
    }
    range.points();  // validates non-empty, positive step
    return range;
}

inline bool parse_bool(const std::string& text, const std::string& key) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw config_error("config key '" + key + "': bad boolean '" + text + "'");
}

}  // namespace detail

/// Builds an ExperimentConfig from a parsed config file. Unknown keys are
/// rejected — silent typos in experiment definitions are worse than errors.
inline ExperimentConfig make_experiment_config(const ConfigFile& file) {
    ExperimentConfig cfg;
    cfg.kind = kind_from_name(file.get("kind"));

    for (const auto& [key, value] : file.values) {
        if (key == "kind") continue;
        if (key == "n") cfg.n = detail::parse_range(value, key);
        else if (key == "m") cfg.m = detail::parse_range(value, key);
        else if (key == "snr_db") cfg.snr_db = detail::parse_range(value, key);
        else if (key == "eig_low") cfg.eig_low = detail::parse_number(value, key);
        else if (key == "eig_high") cfg.eig_high = detail::parse_number(value, key);
        else if (key == "shared_basis") cfg.shared_basis = detail::parse_bool(value, key);
        else if (key == "trials") cfg.trials = detail::parse_unsigned(value, key);
        else if (key == "random_transforms") cfg.random_transforms = detail::parse_unsigned(value, key);
        else if (key == "seed") cfg.seed = detail::parse_unsigned(value, key);
        else if (key == "workers") cfg.workers = static_cast<unsigned>(detail::parse_unsigned(value, key));
        else if (key == "out") cfg.output_path = value;
        else if (key == "sigma_x_file") cfg.sigma_x_file = value;
        else if (key == "sigma_e_file") cfg.sigma_e_file = value;
        else if (key == "t_file") cfg.t_file = value;
        else throw config_error("config '" + file.path + "': unknown key '" + key + "'");
    }

    if (!(cfg.eig_low > 0.0) || !(cfg.eig_low <= cfg.eig_high))
        throw config_error("config: need 0 < eig_low <= eig_high");
    if (cfg.workers == 0) throw config_error("config: workers must be positive");
    if (cfg.kind == ExperimentKind::random_vs_opt && cfg.random_transforms == 0)
        throw config_error("config: random-vs-opt needs random_transforms >= 1");
    return cfg;
}

// ============================================================================
// Instance construction for experiments
// ============================================================================

/// Scalar that brings tr(Σ_e) to tr(Σ_x)/snr.
inline double snr_scale(const SymMatrix& signal_cov, const SymMatrix& noise_cov, double snr) {
    if (!(snr > 0.0)) throw config_error("SNR must be positive");
    return trace(signal_cov.mat()) / (snr * trace(noise_cov.mat()));
}

inline SymMatrix scale_to_snr(const SymMatrix& signal_cov, const SymMatrix& noise_cov, double snr) {
    return symmetrize(snr_scale(signal_cov, noise_cov, snr) * noise_cov.mat());
}

struct CovariancePair {
    SymMatrix signal;
    SymMatrix noise;  // already scaled to the requested SNR
};

/// Random covariance pair with Uniform(eig_low, eig_high) spectra. With
/// shared_basis the two matrices share one Haar eigenbasis (their spectra
/// stay independent); otherwise the bases are independent Haar draws.
inline CovariancePair make_covariances(std::size_t n, double eig_low, double eig_high, double snr,
                                       bool shared_basis, RngStream& rng) {
    CovariancePair pair;
    if (shared_basis) {
        Vec signal_spectrum(n), noise_spectrum(n);
        for (double& v : signal_spectrum) v = rng.uniform(eig_low, eig_high);
        for (double& v : noise_spectrum) v = rng.uniform(eig_low, eig_high);
        const Matrix q = random_orthonormal_columns(n, n, rng);
        auto rotate = [&](const Vec& spectrum) {
            Matrix scaled(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) scaled(i, j) = q(i, j) * spectrum[j];
            return symmetrize(scaled * q.transposed());
        };
        pair.signal = rotate(signal_spectrum);
        pair.noise = rotate(noise_spectrum);
    } else {
        pair.signal = random_psd(n, eig_low, eig_high, rng);
        pair.noise = random_psd(n, eig_low, eig_high, rng);
    }
    pair.noise = scale_to_snr(pair.signal, pair.noise, snr);
    return pair;
}

/// Orthogonal similarity bringing every diagonal entry to trace/n, one
/// Givens rotation per fixed entry. The spectrum is untouched. Constant
/// diagonals make every leading principal submatrix hit the trace ratio of
/// the full matrix exactly, which the nested n-sweep relies on.
inline SymMatrix balance_diagonal(const SymMatrix& a) {
    const std::size_t n = a.order();
    Matrix work = a.mat();
    const double target = trace(work) / static_cast<double>(n);
    const double flat_tol = 1e-13 * std::max(1.0, std::abs(target));

    for (std::size_t fixed = 0; fixed + 1 < n; ++fixed) {
        // Trace is rotation invariant and fixed slots hold the target
        // exactly, so the remaining diagonal always straddles the target.
        std::size_t i = fixed, j = fixed;
        for (std::size_t k = fixed; k < n; ++k) {
            if (work(k, k) < work(i, i)) i = k;
            if (work(k, k) > work(j, j)) j = k;
        }
        if (work(j, j) - work(i, i) <= flat_tol) break;  // already constant

        const double aii = work(i, i), ajj = work(j, j), aij = work(i, j);
        // Rotation angle making the (i,i) entry equal the target:
        // (ajj - target) t² + 2 aij t + (aii - target) = 0.
        const double qa = ajj - target;
        const double qb = 2.0 * aij;
        const double qc = aii - target;
        double t;
        if (std::abs(qa) < 1e-300) {
            t = qb == 0.0 ? 0.0 : -qc / qb;
        } else {
            const double disc = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
            const double r1 = (-qb + disc) / (2.0 * qa);
            const double r2 = (-qb - disc) / (2.0 * qa);
            t = std::abs(r1) <= std::abs(r2) ? r1 : r2;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Apply G(i,j,θ)ᵀ A G(i,j,θ) on rows/columns i, j.
        for (std::size_t k = 0; k < n; ++k) {
            const double aki = work(k, i), akj = work(k, j);
            work(k, i) = c * aki + s * akj;
            work(k, j) = -s * aki + c * akj;
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = work(i, k), ajk = work(j, k);
            work(i, k) = c * aik + s * ajk;
            work(j, k) = -s * aik + c * ajk;
        }
        // Swap the fixed entry into position `fixed` so it is never revisited.
        if (i != fixed) {
            for (std::size_t k = 0; k < n; ++k) std::swap(work(k, i), work(k, fixed));
            for (std::size_t k = 0; k < n; ++k) std::swap(work(i, k), work(fixed, k));
        }
        work(fixed, fixed) = target;
    }
    return symmetrize(work);
}

/// Leading principal submatrix of order k.
inline SymMatrix leading_principal(const SymMatrix& a, std::size_t k) {
    if (k == 0 || k > a.order()) throw argument_error("leading_principal: bad order");
    Matrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = a(i, j);
    return SymMatrix(std::move(sub), 1.0);
}

// ============================================================================
// random-vs-opt
// ============================================================================

struct TransformRow {
    std::size_t index;        // position in the emitted set
    double j_value;
    double bound;
    double reciprocal_bound;  // the Fig-style visibility axis
    bool is_optimal;
};

struct RandomVsOptResult {
    std::vector<TransformRow> rows;
    std::size_t optimal_index;
    double optimal_bound;
    double best_random_bound;
    double bound_ratio;  // best random / optimal, >= 1
};

/// Evaluates cfg.random_transforms Gaussian transforms plus the constructed
/// optimal one, placed in the middle of the set. Rows are ordered by index;
/// the optimal row attains the maximum reciprocal bound.
inline RandomVsOptResult run_random_vs_opt(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::random_vs_opt)
        throw config_error("run_random_vs_opt: config kind is not random-vs-opt");
    const std::size_t n = static_cast<std::size_t>(cfg.n.points().front());
    const std::size_t m = static_cast<std::size_t>(cfg.m.points().front());
    if (!(m >= 1 && m < n)) throw config_error("random-vs-opt: need 1 <= m < n");
    const double snr = std::pow(10.0, cfg.snr_db.points().front() / 10.0);

    RngStream cov_rng(cfg.seed, 0);
    const CovariancePair cov = make_covariances(n, cfg.eig_low, cfg.eig_high, snr, cfg.shared_basis, cov_rng);

    const TransformFactors factors = factorize(cov.signal, cov.noise, m);
    const OptimalTransform opt = build_optimal(factors);

    const std::size_t total = static_cast<std::size_t>(cfg.random_transforms) + 1;
    const std::size_t opt_index = total / 2;

    RandomVsOptResult result;
    result.rows.resize(total);
    result.optimal_index = opt_index;

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= total) return;
            TransformRow row;
            row.index = k;
            row.is_optimal = (k == opt_index);
            if (row.is_optimal) {
                row.j_value = opt.attained_j;
            } else {
                RngStream t_rng(cfg.seed, 1000 + k);
                const Matrix t = random_full_rank_t(n, m, t_rng);
                row.j_value = transform_objective(ProblemInstance(cov.signal, cov.noise, t));
            }
            row.bound = 0.5 / std::sqrt(row.j_value);
            row.reciprocal_bound = 1.0 / row.bound;
            result.rows[k] = row;
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(total)));
    for (unsigned w = 1; w < spawn; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    result.optimal_bound = result.rows[opt_index].bound;
    double best_random = 1.0;
    for (const TransformRow& row : result.rows)
        if (!row.is_optimal) best_random = std::min(best_random, row.bound);
    result.best_random_bound = best_random;
    result.bound_ratio = best_random / result.optimal_bound;
    return result;
}

// ============================================================================
// sweeps
// ============================================================================

struct SweepRow {
    double x = 0.0;       // swept variable: snr_db, m or n
    std::size_t n = 0;
    std::size_t m = 0;
    double snr_db = 0.0;
    double j_opt = 1.0;
    double bound_opt = 0.5;
    std::optional<double> gaussian_bound;  // m = n reference, sweep-m only
    std::optional<double> p_hat;
    std::optional<double> std_err;
};

namespace detail {

/// Decorrelates the Monte Carlo streams from the covariance-construction
/// streams, which share the config seed.
inline std::uint64_t mc_seed(std::uint64_t seed, std::size_t point) {
    return (seed ^ 0x6a09e667f3bcc909ull) + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(point) + 1);
}

inline void maybe_run_mc(SweepRow& row, const ExperimentConfig& cfg, std::size_t point,
                         const ProblemInstance& inst) {
    if (cfg.trials == 0) return;
    TrialPlan plan{inst, cfg.trials, mc_seed(cfg.seed, point), cfg.workers};
    const TrialReport report = run_unconditional(plan);
    row.p_hat = report.p_hat;
    row.std_err = report.std_err;
}

template <typename PointFn>
inline void run_points_parallel(std::size_t count, unsigned workers, PointFn&& point) {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= count) return;
            point(k);
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    for (unsigned w = 1; w < spawn; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// One covariance pair per sweep; each SNR point rescales the noise.
inline std::vector<SweepRow> run_sweep_snr(const ExperimentConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.n.points().front());
    const std::size_t m = static_cast<std::size_t>(cfg.m.points().front());
    if (!(m >= 1 && m < n)) throw config_error("sweep-snr: need 1 <= m < n");
    const std::vector<double> snr_points = cfg.snr_db.points();

    RngStream cov_rng(cfg.seed, 0);
    CovariancePair base = make_covariances(n, cfg.eig_low, cfg.eig_high, 1.0, cfg.shared_basis, cov_rng);

    std::vector<SweepRow> rows(snr_points.size());
    detail::run_points_parallel(snr_points.size(), cfg.workers, [&](std::size_t k) {
        const double snr = std::pow(10.0, snr_points[k] / 10.0);
        const SymMatrix noise = scale_to_snr(base.signal, base.noise, snr);
        const TransformFactors factors = factorize(base.signal, noise, m);
        const OptimalTransform opt = build_optimal(factors);

        SweepRow row;
        row.x = snr_points[k];
        row.n = n;
        row.m = m;
        row.snr_db = snr_points[k];
        row.j_opt = opt.attained_j;
        row.bound_opt = 0.5 / std::sqrt(opt.attained_j);
        detail::maybe_run_mc(row, cfg, k, ProblemInstance(base.signal, noise, opt.transform));
        rows[k] = row;
    });
    return rows;
}

/// One covariance pair, swept over the partial-information length. Includes
/// the analytic m = n reference (the Gaussian bound) in every row.
inline std::vector<SweepRow> run_sweep_m(const ExperimentConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.n.points().front());
    const std::vector<double> m_points = cfg.m.points();
    for (double mp : m_points)
        if (!(mp >= 1.0 && mp < static_cast<double>(n))) throw config_error("sweep-m: need 1 <= m < n");
    const double snr = std::pow(10.0, cfg.snr_db.points().front() / 10.0);

    RngStream cov_rng(cfg.seed, 0);
    const CovariancePair cov = make_covariances(n, cfg.eig_low, cfg.eig_high, snr, cfg.shared_basis, cov_rng);
    const double gauss_j = gaussian_bound_j(cov.signal, cov.noise);
    const double gauss_bound = 0.5 / std::sqrt(gauss_j);

    std::vector<SweepRow> rows(m_points.size());
    detail::run_points_parallel(m_points.size(), cfg.workers, [&](std::size_t k) {
        const std::size_t m = static_cast<std::size_t>(m_points[k]);
        const TransformFactors factors = factorize(cov.signal, cov.noise, m);
        const OptimalTransform opt = build_optimal(factors);

        SweepRow row;
        row.x = static_cast<double>(m);
        row.n = n;
        row.m = m;
        row.snr_db = cfg.snr_db.points().front();
        row.j_opt = opt.attained_j;
        row.bound_opt = 0.5 / std::sqrt(opt.attained_j);
        row.gaussian_bound = gauss_bound;
        detail::maybe_run_mc(row, cfg, k, ProblemInstance(cov.signal, cov.noise, opt.transform));
        rows[k] = row;
    });
    return rows;
}

/// Signal-length sweep at fixed m. Every point is a leading principal
/// submatrix of one master covariance pair whose diagonals are balanced to a
/// constant, so the trace-ratio SNR is exact at every point and the bound is
/// monotone by eigenvalue interlacing of the nested pencil.
inline std::vector<SweepRow> run_sweep_n(const ExperimentConfig& cfg) {
    const std::vector<double> n_points = cfg.n.points();
    const std::size_t m = static_cast<std::size_t>(cfg.m.points().front());
    for (double np : n_points)
        if (!(static_cast<double>(m) >= 1.0 && static_cast<double>(m) < np))
            throw config_error("sweep-n: need 1 <= m < n at every point");
    const double snr_db = cfg.snr_db.points().front();
    const double snr = std::pow(10.0, snr_db / 10.0);
    const std::size_t n_max = static_cast<std::size_t>(n_points.back());

    RngStream cov_rng(cfg.seed, 0);
    const SymMatrix signal_master = balance_diagonal(random_psd(n_max, cfg.eig_low, cfg.eig_high, cov_rng));
    SymMatrix noise_master = balance_diagonal(random_psd(n_max, cfg.eig_low, cfg.eig_high, cov_rng));
    noise_master = scale_to_snr(signal_master, noise_master, snr);

    std::vector<SweepRow> rows(n_points.size());
    detail::run_points_parallel(n_points.size(), cfg.workers, [&](std::size_t k) {
        const std::size_t n = static_cast<std::size_t>(n_points[k]);
        const SymMatrix signal = leading_principal(signal_master, n);
        SymMatrix noise = leading_principal(noise_master, n);
        noise = scale_to_snr(signal, noise, snr);  // identity up to roundoff; keeps the ratio exact
        const TransformFactors factors = factorize(signal, noise, m);
        const OptimalTransform opt = build_optimal(factors);

        SweepRow row;
        row.x = static_cast<double>(n);
        row.n = n;
        row.m = m;
        row.snr_db = snr_db;
        row.j_opt = opt.attained_j;
        row.bound_opt = 0.5 / std::sqrt(opt.attained_j);
        detail::maybe_run_mc(row, cfg, k, ProblemInstance(signal, noise, opt.transform));
        rows[k] = row;
    });
    return rows;
}

inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::sweep_snr: return run_sweep_snr(cfg);
        case ExperimentKind::sweep_m: return run_sweep_m(cfg);
        case ExperimentKind::sweep_n: return run_sweep_n(cfg);
        default: throw config_error("run_sweep: config kind is not a sweep");
    }
}

// ============================================================================
// inspect
// ============================================================================

struct InspectReport {
    std::size_t n = 0;
    std::size_t m = 0;
    double singular_min = 0.0;
    double singular_max = 0.0;
    Vec cond_cov_spectrum;
    double j_value = 1.0;
    double expected_chernoff = 0.5;
    double optimal_product = 1.0;  // product-form optimal value
    double optimal_j = 1.0;        // same quantity in det-criterion units
    double gap_rel = 0.0;          // (optimal_j - j_value) / optimal_j
};

/// Full diagnostic for explicit (Σ_x, Σ_e, T). Throws rank_error for a rank
/// deficient transform rather than producing silent numbers.
inline InspectReport inspect_instance(const SymMatrix& signal_cov, const SymMatrix& noise_cov,
                                      const Matrix& transform) {
    const ProblemInstance inst(signal_cov, noise_cov, transform);

    InspectReport report;
    report.n = inst.n();
    report.m = inst.m();

    const EigenPair gram = eig_sym(symmetrize(transform * transform.transposed()), EigenOrder::ascending);
    report.singular_min = std::sqrt(std::max(0.0, gram.values.front()));
    report.singular_max = std::sqrt(std::max(0.0, gram.values.back()));

    const ConditionalStats stats = conditional_stats(inst);
    report.cond_cov_spectrum = eig_sym(stats.cov, EigenOrder::ascending).values;

    const BoundReport bound = expected_chernoff_bound(inst);
    report.j_value = bound.j_value;
    report.expected_chernoff = bound.expected_chernoff;

    const TransformFactors factors = factorize(signal_cov, noise_cov, inst.m());
    report.optimal_product = optimal_value(factors);
    report.optimal_j = product_to_j(report.optimal_product, inst.m());
    report.gap_rel = (report.optimal_j - report.j_value) / report.optimal_j;
    return report;
}

inline void print_inspect_report(std::ostream& out, const InspectReport& r) {
    out << "n: " << r.n << "\n";
    out << "m: " << r.m << "\n";
    out << "transform_singular_values: min " << format_number(r.singular_min) << ", max "
        << format_number(r.singular_max) << " (full row rank)\n";
    out << "cond_cov_spectrum:";
    for (double v : r.cond_cov_spectrum) out << ' ' << format_number(v);
    out << "\n";
    out << "j_value: " << format_number(r.j_value) << "\n";
    out << "expected_chernoff_bound: " << format_number(r.expected_chernoff) << "\n";
    out << "optimal_value_product: " << format_number(r.optimal_product) << "\n";
    out << "optimal_j: " << format_number(r.optimal_j) << "\n";
    out << "relative_gap_to_optimal: " << format_number(r.gap_rel) << "\n";
}

// ============================================================================
// CSV emission — fixed header per kind, 12 significant digits
// ============================================================================

inline void write_random_vs_opt_csv(std::ostream& out, const RandomVsOptResult& result) {
    out << "index,j_value,bound,reciprocal_bound,is_optimal\n";
    for (const TransformRow& row : result.rows) {
        out << row.index << ',' << format_number(row.j_value) << ',' << format_number(row.bound) << ','
            << format_number(row.reciprocal_bound) << ',' << (row.is_optimal ? 1 : 0) << '\n';
    }
}

/// The independent variable is the kind's own column (snr_db, m or n).
inline void write_sweep_csv(std::ostream& out, ExperimentKind kind, const std::vector<SweepRow>& rows) {
    out << "n,m,snr_db,j_opt,bound_opt";
    if (kind == ExperimentKind::sweep_m) out << ",gaussian_bound";
    out << ",p_hat,std_err\n";
    for (const SweepRow& row : rows) {
        out << row.n << ',' << row.m << ',' << format_number(row.snr_db) << ','
            << format_number(row.j_opt) << ',' << format_number(row.bound_opt);
        if (kind == ExperimentKind::sweep_m)
            out << ',' << (row.gaussian_bound ? format_number(*row.gaussian_bound) : std::string());
        out << ',' << (row.p_hat ? format_number(*row.p_hat) : std::string());
        out << ',' << (row.std_err ? format_number(*row.std_err) : std::string());
        out << '\n';
    }
}

}  // namespace partinfo

#endif  // PARTINFO_EXPERIMENTS_HPP
