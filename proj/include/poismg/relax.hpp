// Gauss-Seidel / SOR sweeps and the standalone SOR solver.

#pragma once

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "poismg/operator.hpp"

namespace poismg {

/// How a solve decides it is done. ResidualRms compares the RMS algebraic
/// residual against tol, relative to the RMS right-hand side when that is
/// nonzero and absolute otherwise. IterateDifference is a compatibility
/// criterion on the largest nodewise update of the last sweep.
enum class ConvergenceCriterion { ResidualRms, IterateDifference };

/// Raised when an iterative solve exhausts its budget; carries the final
/// residual in the message. Callers that can continue check
/// SolveResult::converged instead.
struct SolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveResult {
    ScalarField phi;
    int iterations = 0;  // sweeps for SOR, cycles for multigrid
    std::vector<double> residual_history;
    bool converged = false;
    double final_residual = 0.0;
    double seconds = 0.0;
};

/// One in-place lexicographic SOR sweep (i inner, j outer) with the given
/// right-hand side. Fixed and dependent nodes are untouched; zero-gradient
/// edge copies are refreshed after the pass. Returns the largest update.
///
/// The update is phi = (1-omega)*phi_old + omega*candidate, which at
/// omega = 1 assigns the Gauss-Seidel candidate bit-exactly.
inline double sor_sweep_rhs(ScalarField& phi, const ProblemInstance& inst,
                            const ScalarField& rhs, double omega) {
    if (!(omega >= 1.0 && omega < 2.0))
        throw std::invalid_argument("sor_sweep: omega must lie in [1, 2)");
    const UniformGrid& g = inst.grid;
    double max_update = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (!inst.is_unknown(k)) continue;
            const double candidate =
                (detail::neighbor_sum(inst, phi, i, j, k) + rhs.values[k]) / inst.c_center[k];
            const double old = phi.values[k];
            const double next = (1.0 - omega) * old + omega * candidate;
            phi.values[k] = next;
            max_update = std::max(max_update, std::abs(next - old));
        }
    refresh_neumann_copies(phi, inst.bc);
    return max_update;
}

inline double sor_sweep(ScalarField& phi, const ProblemInstance& inst, double omega) {
    return sor_sweep_rhs(phi, inst, inst.rho, omega);
}

struct SorOptions {
    double omega = 1.875;
    double tol = 1e-10;
    int max_iters = 200000;
    ConvergenceCriterion criterion = ConvergenceCriterion::ResidualRms;
};

/// Sweeps until the convergence criterion is met. The returned history holds
/// the monitored quantity after every sweep.
inline SolveResult sor_solve(const ProblemInstance& inst, const SorOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("sor_solve: tol must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    res.phi = ScalarField(inst.grid);
    apply_bc(res.phi, inst.bc);
    const double b_norm = rhs_rms(inst, inst.rho);
    const double denom = b_norm > 0.0 ? b_norm : 1.0;
    ScalarField r;
    for (int it = 1; it <= opts.max_iters; ++it) {
        const double max_update = sor_sweep(res.phi, inst, opts.omega);
        double monitored;
        if (opts.criterion == ConvergenceCriterion::ResidualRms) {
            residual_into(res.phi, inst, inst.rho, r);
            monitored = rms(r) / denom;
        } else {
            monitored = max_update;
        }
        res.residual_history.push_back(monitored);
        res.iterations = it;
        res.final_residual = monitored;
        if (monitored <= opts.tol) {
            res.converged = true;
            break;
        }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace poismg
