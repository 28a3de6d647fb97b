#include "sasvi/lasso_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sasvi {

namespace {

// y - X beta, touching only the nonzero coefficients.
Vector residual(const ProblemInstance& inst, const Vector& beta) {
    Vector r = inst.y();
    for (Index j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) r.noalias() -= beta[j] * inst.X().col(j);
    return r;
}

struct GapInfo {
    double primal;
    double dual;
    double relative;
    double scale;  // max(lambda, max |<x_j, r>|) over the evaluated features
};

// Primal/dual values for theta = r / scale. The dual objective is
// 0.5 ||y||^2 - 0.5 ||lambda theta - y||^2.
GapInfo gap_from(const Vector& y, const Vector& r, double l1, double lambda, double max_corr) {
    GapInfo g{};
    g.scale = std::max(lambda, max_corr);
    g.primal = 0.5 * r.squaredNorm() + lambda * l1;
    const double t = lambda / g.scale;
    g.dual = 0.5 * y.squaredNorm() - 0.5 * (t * r - y).squaredNorm();
    g.relative = std::max(0.0, g.primal - g.dual) / std::max(1.0, g.primal);
    return g;
}

class CoordinateDescent {
public:
    CoordinateDescent(const ProblemInstance& inst, double lambda, std::vector<Index> set)
        : inst_(inst), lambda_(lambda), set_(std::move(set)) {}

    // One cyclic pass over `idx`; returns max_j |delta beta_j| * ||x_j||.
    double sweep(std::span<const Index> idx, Vector& beta, Vector& r) const {
        const auto& X = inst_.X();
        const auto& norms2 = inst_.col_norms2();
        double max_step = 0.0;
        for (Index j : idx) {
            const double nj2 = norms2[j];
            if (nj2 == 0.0) continue;
            const double old = beta[j];
            const double z = old * nj2 + X.col(j).dot(r);
            const double updated = soft_threshold(z, lambda_) / nj2;
            const double delta = updated - old;
            if (delta != 0.0) {
                r.noalias() -= delta * X.col(j);
                beta[j] = updated;
                max_step = std::max(max_step, std::abs(delta) * std::sqrt(nj2));
            }
        }
        return max_step;
    }

    GapInfo working_gap(const Vector& beta, const Vector& r) const {
        double max_corr = 0.0;
        double l1 = 0.0;
        for (Index j : set_) {
            max_corr = std::max(max_corr, std::abs(inst_.X().col(j).dot(r)));
            l1 += std::abs(beta[j]);
        }
        return gap_from(inst_.y(), r, l1, lambda_, max_corr);
    }

    // Cyclic passes over `active` with covariance updates: caches
    // G = X_A^T X_A and c = X_A^T r, so a coordinate step costs |A| instead
    // of 2n. Stops after a pass with max step <= limit or after `budget`
    // passes, then rebuilds r. Returns the number of passes.
    std::int64_t gram_passes(const std::vector<Index>& active, Vector& beta, Vector& r, double limit,
                             std::int64_t budget) const {
        const Index k = static_cast<Index>(active.size());
        if (k == 0 || budget < 1) return 0;
        const auto& norms2 = inst_.col_norms2();
        Matrix XA(inst_.n(), k);
        for (Index i = 0; i < k; ++i) XA.col(i) = inst_.X().col(active[static_cast<std::size_t>(i)]);
        const Matrix G = XA.transpose() * XA;
        Vector c = XA.transpose() * r;
        Vector moved = Vector::Zero(k);
        std::int64_t passes = 0;
        while (passes < budget) {
            double max_step = 0.0;
            for (Index i = 0; i < k; ++i) {
                const Index j = active[static_cast<std::size_t>(i)];
                const double nj2 = norms2[j];
                if (nj2 == 0.0) continue;
                const double old = beta[j];
                const double updated = soft_threshold(old * nj2 + c[i], lambda_) / nj2;
                const double delta = updated - old;
                if (delta != 0.0) {
                    c.noalias() -= delta * G.col(i);
                    beta[j] = updated;
                    moved[i] += delta;
                    max_step = std::max(max_step, std::abs(delta) * std::sqrt(nj2));
                }
            }
            ++passes;
            if (max_step <= limit) break;
        }
        r.noalias() -= XA * moved;
        return passes;
    }

    const std::vector<Index>& set() const { return set_; }

private:
    const ProblemInstance& inst_;
    double lambda_;
    std::vector<Index> set_;
};

PrimalDualSolution run_solver(const ProblemInstance& inst, double lambda, std::vector<Index> set,
                              const SolverConfig& config, const Vector* warm) {
    config.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("solve: lambda must be positive");
    const Index p = inst.p();
    for (Index j : set)
        if (j < 0 || j >= p) throw Error("solve: working-set index out of range");

    Vector beta = Vector::Zero(p);
    if (lambda >= lambda_max(inst)) {
        PrimalDualSolution out = certify(inst, lambda, beta, config.gap_tol);
        out.working_gap = out.gap;
        return out;
    }

    Vector r = inst.y();
    if (warm != nullptr) {
        if (warm->size() != p) throw Error("solve: warm start has wrong length");
        Vector candidate = Vector::Zero(p);
        for (Index j : set) candidate[j] = (*warm)[j];
        if (primal_objective(inst, lambda, candidate) <= primal_objective(inst, lambda, beta)) {
            beta = std::move(candidate);
            r = residual(inst, beta);
        }
    }

    CoordinateDescent cd(inst, lambda, std::move(set));
    const double step_limit = config.step_tol * inst.y_norm();
    std::int64_t sweeps = 0;
    GapInfo gap{};
    std::vector<Index> active;
    bool converged = false;
    while (sweeps < config.max_sweeps) {
        const double step = cd.sweep(cd.set(), beta, r);
        ++sweeps;
        gap = cd.working_gap(beta, r);
        if (gap.relative <= config.gap_tol && step <= step_limit) {
            converged = true;
            break;
        }
        if (!config.active_set_cycling) continue;
        active.clear();
        for (Index j : cd.set())
            if (beta[j] != 0.0) active.push_back(j);
        if (static_cast<Index>(active.size()) <= inst.n()) {
            sweeps += cd.gram_passes(active, beta, r, step_limit, config.max_sweeps - sweeps);
            continue;
        }
        while (sweeps < config.max_sweeps) {
            const double inner = cd.sweep(active, beta, r);
            ++sweeps;
            if (inner <= step_limit) break;
        }
    }
    if (!converged) gap = cd.working_gap(beta, r);

    // Recompute the residual from scratch so the certificate does not carry
    // the drift of incremental updates.
    PrimalDualSolution out = certify(inst, lambda, beta, config.gap_tol);
    out.working_gap = gap.relative;
    out.sweeps_used = sweeps;
    out.certified = out.certified && converged;
    return out;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(gap_tol > 0.0)) throw Error("solver config needs gap_tol > 0");
    if (max_sweeps < 1) throw Error("solver config needs max_sweeps >= 1");
    if (!(step_tol >= 0.0)) throw Error("solver config needs step_tol >= 0");
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

double lambda_max(const ProblemInstance& inst) { return inst.xj_dot_y().cwiseAbs().maxCoeff(); }

void require_nondegenerate(const ProblemInstance& inst) {
    if (lambda_max(inst) == 0.0)
        throw Error("degenerate instance: y is orthogonal to every feature (lambda_max = 0)");
}

double primal_objective(const ProblemInstance& inst, double lambda, const Vector& beta) {
    return 0.5 * residual(inst, beta).squaredNorm() + lambda * beta.lpNorm<1>();
}

PrimalDualSolution certify(const ProblemInstance& inst, double lambda, const Vector& beta, double gap_tol) {
    if (beta.size() != inst.p()) throw Error("certify: beta has wrong length");
    PrimalDualSolution out;
    out.lambda = lambda;
    out.beta = beta;
    const Vector r = residual(inst, beta);
    out.correlations = inst.X().transpose() * r;
    const double max_corr = out.correlations.size() ? out.correlations.cwiseAbs().maxCoeff() : 0.0;
    const GapInfo g = gap_from(inst.y(), r, beta.lpNorm<1>(), lambda, max_corr);
    out.theta = r / g.scale;
    out.dual_scale = g.scale;
    out.primal = g.primal;
    out.dual = g.dual;
    out.gap = g.relative;
    out.working_gap = g.relative;
    out.certified = g.relative <= gap_tol;
    return out;
}

PrimalDualSolution solve(const ProblemInstance& inst, double lambda, const SolverConfig& config,
                         const Vector* warm_start) {
    std::vector<Index> all(static_cast<std::size_t>(inst.p()));
    std::iota(all.begin(), all.end(), Index{0});
    return run_solver(inst, lambda, std::move(all), config, warm_start);
}

PrimalDualSolution solve_on(const ProblemInstance& inst, double lambda, std::span<const Index> working_set,
                            const SolverConfig& config, const Vector* warm_start) {
    return run_solver(inst, lambda, std::vector<Index>(working_set.begin(), working_set.end()), config,
                      warm_start);
}

std::vector<Index> kkt_violations(const ProblemInstance& inst, const PrimalDualSolution& solution,
                                  std::span<const Index> candidates, double tol) {
    std::vector<Index> out;
    const double limit = solution.lambda * (1.0 + tol);
    for (Index j : candidates) {
        if (j < 0 || j >= inst.p()) throw Error("kkt_violations: index out of range");
        if (std::abs(solution.correlations[j]) > limit) out.push_back(j);
    }
    return out;
}

}  // namespace sasvi
