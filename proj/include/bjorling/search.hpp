#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bjorling/strip.hpp"
#include "bjorling/types.hpp"

namespace bjorling {

/// Family of perpendicular symmetric curves: an optional fixed base (x even,
/// y odd) plus free polynomial coefficients over even x-powers and odd
/// y-powers, so every instantiation is perpendicular symmetric about the
/// X-axis with its vertex at t = 0 by construction.
struct CurveFamily {
    AnalyticExpr x_base = AnalyticExpr::constant(0.0);
    AnalyticExpr y_base = AnalyticExpr::constant(0.0);
    std::vector<int> x_powers;  // even, >= 2
    std::vector<int> y_powers;  // odd, >= 1
    Eigen::VectorXd lower, upper, theta0;

    int dim() const { return int(x_powers.size() + y_powers.size()); }
    AnalyticCurve instantiate(const Eigen::VectorXd& theta) const;

    /// Parity of the powers, matching bound/seed sizes, numeric parity of the
    /// base expressions. Throws InputError.
    void validate() const;
};

struct SearchOptions {
    int budget = 2000;         // total objective evaluations across restarts
    int restarts = 5;          // restart 0 starts from theta0, the rest randomly
    std::uint64_t seed = 1;    // rng seed for the random restarts
    int t_samples = 33;        // samples per axis in the residual
    double t_range = 0.8;      // residual compares X(it), X(t) on [-r, r]
    double quad_tol = defaults::quad_tol;
    double tol = defaults::check_tol;  // pass threshold recorded in the result
    int threads = 0;           // parallel restarts; results independent of it
};

struct SearchResult {
    Eigen::VectorXd best_theta;
    double residual = 0.0;
    bool converged = false;  // residual <= tol
    int evaluations = 0;
    int best_restart = 0;
    std::vector<std::pair<int, double>> history;  // (evaluation count, best residual so far)
};

/// Self-CPG residual of the instantiated curve's transform; +infinity when the
/// instantiation is irregular or degenerate near t = 0, or the evaluation
/// fails numerically.
double self_cpg_objective(const CurveFamily& family, const Eigen::VectorXd& theta,
                          const SearchOptions& opt);

/// Derivative-free simplex minimization of the self-CPG residual with
/// deterministic seeded restarts. Ties select the lowest restart index.
SearchResult self_cpg_search(const CurveFamily& family, const SearchOptions& opt = {});

}  // namespace bjorling
