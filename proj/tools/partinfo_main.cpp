// partinfo command line front end.
//
// Subcommands:
//   random-vs-opt   compare random reduction transforms against the optimum
//   sweep           bound vs SNR, m or n (kind taken from the config file)
//   inspect         diagnostics for explicit Σ_x, Σ_e, T matrix files
//
// Exit codes: 0 success, 1 runtime/numerical failure, 2 configuration error.

#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "partinfo/partinfo.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct FlagOverrides {
    std::string seed;
    std::string trials;
    std::string out;
    std::string workers;
};

std::uint64_t parse_u64_flag(const std::string& text, const char* flag) {
    std::uint64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end)
        throw partinfo::config_error(std::string(flag) + ": bad unsigned integer '" + text + "'");
    return value;
}

partinfo::ExperimentConfig load_config(const std::string& config_path, const FlagOverrides& flags,
                                       partinfo::ExperimentKind subcommand_kind, bool is_sweep) {
    partinfo::ExperimentConfig cfg;
    if (!config_path.empty()) {
        partinfo::ConfigFile file = partinfo::parse_config_file(config_path);
        if (!is_sweep && !file.has("kind")) file.values["kind"] = partinfo::kind_name(subcommand_kind);
        cfg = partinfo::make_experiment_config(file);
    } else {
        cfg.kind = subcommand_kind;
    }

    const bool kind_matches = is_sweep ? (cfg.kind == partinfo::ExperimentKind::sweep_snr ||
                                          cfg.kind == partinfo::ExperimentKind::sweep_m ||
                                          cfg.kind == partinfo::ExperimentKind::sweep_n)
                                       : cfg.kind == subcommand_kind;
    if (!kind_matches)
        throw partinfo::config_error(std::string("config kind '") + partinfo::kind_name(cfg.kind) +
                                     "' does not match the subcommand");

    if (!flags.seed.empty()) cfg.seed = parse_u64_flag(flags.seed, "--seed");
    if (!flags.trials.empty()) cfg.trials = parse_u64_flag(flags.trials, "--trials");
    if (!flags.out.empty()) cfg.output_path = flags.out;
    if (!flags.workers.empty()) {
        const std::uint64_t w = parse_u64_flag(flags.workers, "--workers");
        if (w == 0) throw partinfo::config_error("--workers: must be positive");
        cfg.workers = static_cast<unsigned>(w);
    }
    return cfg;
}

/// Streams the emitted text either to the configured file or stdout.
int with_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    if (path.empty()) {
        emit(std::cout);
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return kExitRuntime;
    }
    emit(out);
    if (!out) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return kExitRuntime;
    }
    return 0;
}

int cmd_random_vs_opt(const partinfo::ExperimentConfig& cfg) {
    const partinfo::RandomVsOptResult result = partinfo::run_random_vs_opt(cfg);
    const int rc = with_output(cfg.output_path, [&](std::ostream& out) {
        partinfo::write_random_vs_opt_csv(out, result);
    });
    if (rc != 0) return rc;
    std::cerr << "optimal bound " << partinfo::format_number(result.optimal_bound) << ", best random bound "
              << partinfo::format_number(result.best_random_bound) << ", ratio "
              << partinfo::format_number(result.bound_ratio) << " (transform index " << result.optimal_index
              << " is optimal)\n";
    return 0;
}

int cmd_sweep(const partinfo::ExperimentConfig& cfg) {
    const std::vector<partinfo::SweepRow> rows = partinfo::run_sweep(cfg);
    return with_output(cfg.output_path, [&](std::ostream& out) {
        partinfo::write_sweep_csv(out, cfg.kind, rows);
    });
}

int cmd_inspect(const partinfo::ExperimentConfig& cfg) {
    if (cfg.sigma_x_file.empty() || cfg.sigma_e_file.empty() || cfg.t_file.empty())
        throw partinfo::config_error("inspect needs sigma_x_file, sigma_e_file and t_file");

    const partinfo::SymMatrix sigma_x(partinfo::load_matrix(cfg.sigma_x_file));
    const partinfo::SymMatrix sigma_e(partinfo::load_matrix(cfg.sigma_e_file));
    const partinfo::Matrix t = partinfo::load_matrix(cfg.t_file);

    const partinfo::InspectReport report = partinfo::inspect_instance(sigma_x, sigma_e, t);
    return with_output(cfg.output_path, [&](std::ostream& out) {
        partinfo::print_inspect_report(out, report);
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"binary detection with partial information: bounds, optimal reduction transforms, experiments"};
    app.require_subcommand(1);

    std::string config_path;
    FlagOverrides flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file");
        sub->add_option("--seed", flags.seed, "override config seed (u64)");
        sub->add_option("--trials", flags.trials, "override Monte Carlo trial count");
        sub->add_option("--out", flags.out, "output path (default stdout)");
        sub->add_option("--workers", flags.workers, "worker thread count");
    };

    CLI::App* rvo = app.add_subcommand("random-vs-opt", "random transforms vs the constructed optimum");
    CLI::App* sweep = app.add_subcommand("sweep", "bound vs SNR, m or n (kind from config)");
    CLI::App* inspect = app.add_subcommand("inspect", "diagnostics for explicit matrices");
    add_common(rvo);
    add_common(sweep);
    add_common(inspect);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (rvo->parsed())
            return cmd_random_vs_opt(
                load_config(config_path, flags, partinfo::ExperimentKind::random_vs_opt, false));
        if (sweep->parsed()) {
            if (config_path.empty())
                throw partinfo::config_error("sweep needs --config naming kind sweep-snr, sweep-m or sweep-n");
            return cmd_sweep(load_config(config_path, flags, partinfo::ExperimentKind::sweep_snr, true));
        }
        if (inspect->parsed())
            return cmd_inspect(load_config(config_path, flags, partinfo::ExperimentKind::inspect, false));
        std::cerr << "error: no subcommand\n";
        return kExitConfig;
    } catch (const partinfo::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const partinfo::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const partinfo::argument_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const partinfo::rank_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const partinfo::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
