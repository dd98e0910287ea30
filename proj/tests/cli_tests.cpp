// End-to-end CLI contract checks, run against the built binary:
// exit code 0 on success, 1 on runtime failure, 2 on configuration errors,
// and the documented text/CSV surfaces.
//
// Usage: cli_tests <path-to-partinfo-cli>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int checks = 0;
int failed = 0;

void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
        ++failed;
        std::cerr << "FAILED: " << what << "\n";
    }
}

std::string cli_path;

int run_cli(const std::string& args) {
    const std::string cmd = cli_path + " " + args + " >cli_out.txt 2>cli_err.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <partinfo-cli>\n";
        return 2;
    }
    cli_path = argv[1];
    if (std::system("mkdir -p cli_tmp") != 0) {
        std::cerr << "cannot create scratch directory\n";
        return 1;
    }

    // Inspect on the hand-checkable instance: zero gap at the optimum.
    write_file("cli_tmp/sx.txt", "2 0\n0 1\n");
    write_file("cli_tmp/se.txt", "1 0\n0 1\n");
    write_file("cli_tmp/t_opt.txt", "0.70710678118654752440 0\n");
    write_file("cli_tmp/inspect.cfg",
               "kind = inspect\n"
               "sigma_x_file = cli_tmp/sx.txt\n"
               "sigma_e_file = cli_tmp/se.txt\n"
               "t_file = cli_tmp/t_opt.txt\n");
    expect(run_cli("inspect --config cli_tmp/inspect.cfg") == 0, "inspect exits 0 on a valid instance");
    {
        const std::string out = slurp("cli_out.txt");
        expect(out.find("j_value: 2") != std::string::npos, "inspect reports the det criterion 2");
        expect(out.find("optimal_value_product: 4") != std::string::npos,
               "inspect reports the closed-form optimal value 4");
        const std::string key = "relative_gap_to_optimal: ";
        const auto pos = out.find(key);
        expect(pos != std::string::npos, "inspect prints the gap line");
        const double gap = pos == std::string::npos ? 1.0 : std::strtod(out.c_str() + pos + key.size(), nullptr);
        expect(std::abs(gap) <= 1e-9, "inspect reports a closed gap at the optimum");
    }

    // Rank-deficient transform: configuration error, exit 2.
    write_file("cli_tmp/t_rank.txt", "1 0\n2 0\n");
    write_file("cli_tmp/sx3.txt", "1 0 0\n0 1 0\n0 0 1\n");
    write_file("cli_tmp/inspect_rank.cfg",
               "kind = inspect\n"
               "sigma_x_file = cli_tmp/sx3.txt\n"
               "sigma_e_file = cli_tmp/sx3.txt\n"
               "t_file = cli_tmp/t_rank.txt\n");
    expect(run_cli("inspect --config cli_tmp/inspect_rank.cfg") == 2,
           "inspect exits 2 for a rank-deficient transform");

    // Malformed matrix file: parse error with a line number, exit 2.
    write_file("cli_tmp/t_bad.txt", "1 0\n0 oops\n");
    write_file("cli_tmp/inspect_bad.cfg",
               "kind = inspect\n"
               "sigma_x_file = cli_tmp/sx.txt\n"
               "sigma_e_file = cli_tmp/se.txt\n"
               "t_file = cli_tmp/t_bad.txt\n");
    expect(run_cli("inspect --config cli_tmp/inspect_bad.cfg") == 2, "inspect exits 2 on a malformed matrix");
    expect(slurp("cli_err.txt").find("line 2") != std::string::npos,
           "matrix parse error names the offending line");

    // Non-square covariance file: configuration error, exit 2.
    write_file("cli_tmp/sx_rect.txt", "1 0 0\n0 1 0\n");
    write_file("cli_tmp/inspect_rect.cfg",
               "kind = inspect\n"
               "sigma_x_file = cli_tmp/sx_rect.txt\n"
               "sigma_e_file = cli_tmp/se.txt\n"
               "t_file = cli_tmp/t_opt.txt\n");
    expect(run_cli("inspect --config cli_tmp/inspect_rect.cfg") == 2,
           "inspect exits 2 for a non-square covariance file");

    // Unknown config key: exit 2.
    write_file("cli_tmp/badkey.cfg", "kind = sweep-m\nn = 8\nm = 1:7\nbogus = 1\n");
    expect(run_cli("sweep --config cli_tmp/badkey.cfg") == 2, "unknown config key exits 2");

    // sweep without a config: exit 2.
    expect(run_cli("sweep") == 2, "sweep without --config exits 2");

    // Subcommand/kind mismatch: exit 2.
    write_file("cli_tmp/mismatch.cfg", "kind = sweep-m\nn = 8\nm = 1:7\n");
    expect(run_cli("random-vs-opt --config cli_tmp/mismatch.cfg") == 2,
           "kind/subcommand mismatch exits 2");

    // Unknown flag: exit 2 via the argument parser.
    expect(run_cli("sweep --frobnicate") == 2, "unknown flag exits 2");

    // Valid sweep writes CSV with the documented header; flag overrides apply.
    expect(run_cli("sweep --config cli_tmp/mismatch.cfg --seed 5 --out cli_tmp/sweep.csv") == 0,
           "sweep exits 0 and accepts overrides");
    {
        const std::string csv = slurp("cli_tmp/sweep.csv");
        expect(csv.rfind("n,m,snr_db,j_opt,bound_opt,gaussian_bound,p_hat,std_err\n", 0) == 0,
               "sweep-m CSV header is schema-stable");
        expect(csv.find("\n8,1,") != std::string::npos, "sweep CSV rows carry the sweep points");
    }

    // --trials override populates the Monte Carlo columns.
    write_file("cli_tmp/snr.cfg", "kind = sweep-snr\nn = 6\nm = 2\nsnr_db = 0\nseed = 4\n");
    expect(run_cli("sweep --config cli_tmp/snr.cfg --trials 2000 --out cli_tmp/snr_mc.csv") == 0,
           "sweep with --trials exits 0");
    {
        const std::string csv = slurp("cli_tmp/snr_mc.csv");
        const std::string row = csv.substr(csv.find('\n') + 1);
        expect(row.find(",,") == std::string::npos, "--trials fills p_hat and std_err");
    }

    // Unwritable output path: runtime failure, exit 1, message names the path.
    expect(run_cli("sweep --config cli_tmp/mismatch.cfg --out cli_tmp/no_dir/x.csv") == 1,
           "unwritable output exits 1");
    expect(slurp("cli_err.txt").find("cli_tmp/no_dir/x.csv") != std::string::npos,
           "I/O failure names the output path");

    // random-vs-opt end to end with its summary line on stderr.
    write_file("cli_tmp/rvo.cfg", "kind = random-vs-opt\nn = 8\nm = 2\nrandom_transforms = 20\nseed = 3\n");
    expect(run_cli("random-vs-opt --config cli_tmp/rvo.cfg --out cli_tmp/rvo.csv") == 0,
           "random-vs-opt exits 0");
    expect(slurp("cli_tmp/rvo.csv").rfind("index,j_value,bound,reciprocal_bound,is_optimal\n", 0) == 0,
           "random-vs-opt CSV header is schema-stable");
    expect(slurp("cli_err.txt").find("ratio") != std::string::npos,
           "random-vs-opt reports the best-random/optimal ratio");

    // --help succeeds.
    expect(run_cli("--help") == 0, "--help exits 0");

    if (failed != 0) {
        std::cerr << failed << "/" << checks << " CLI checks failed\n";
        return 1;
    }
    std::cout << "all " << checks << " CLI checks passed\n";
    return 0;
}
