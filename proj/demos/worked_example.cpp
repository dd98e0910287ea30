// Minimal tour of the library on a 2-dimensional instance small enough to
// check by hand: Σ_x = diag(2, 1), Σ_e = I.

#include <iostream>

#include "partinfo/partinfo.hpp"

int main() {
    using namespace partinfo;

    const SymMatrix sigma_x = SymMatrix::diagonal({2.0, 1.0});
    const SymMatrix sigma_e = SymMatrix::identity(2);

    // Best rank-1 reduction for this pair.
    const TransformFactors factors = factorize(sigma_x, sigma_e, 1);
    const OptimalTransform opt = build_optimal(factors);
    std::cout << "optimal transform: [" << opt.transform(0, 0) << ", " << opt.transform(0, 1) << "]\n";
    std::cout << "det criterion at optimum: " << opt.attained_j << "\n";

    const ProblemInstance inst(sigma_x, sigma_e, opt.transform);
    const BoundReport bound = expected_chernoff_bound(inst);
    std::cout << "expected Chernoff bound: " << bound.expected_chernoff << "\n";

    // Closed-form conditional error for one partial-information pair, and a
    // seeded Monte Carlo estimate next to it.
    const ConditionalStats stats = conditional_stats(inst);
    const Vec z0{1.5}, z1{-1.5};
    std::cout << "conditional error (closed form): " << conditional_error_prob(stats, z0, z1) << "\n";

    const TrialReport mc = run_conditional(stats, z0, z1, 200000, /*seed=*/7);
    std::cout << "conditional error (Monte Carlo): " << mc.p_hat << " +/- " << mc.std_err << "\n";

    const TrialPlan plan{inst, 200000, /*seed=*/7, /*workers=*/2};
    const TrialReport unconditional = run_unconditional(plan);
    std::cout << "unconditional error estimate: " << unconditional.p_hat << " (bound "
              << unconditional.bound.expected_chernoff << ")\n";
    return 0;
}
