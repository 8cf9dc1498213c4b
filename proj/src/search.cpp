#include "bjorling/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "bjorling/patch.hpp"
#include "bjorling/symmetry.hpp"

namespace bjorling {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
}

bool numerically_even(const AnalyticExpr& e)
{
    for (int i = 1; i <= 16; ++i) {
        const double t = 0.11 * i;
        if (std::abs(e.eval({t, 0}).real() - e.eval({-t, 0}).real()) > 1e-12) return false;
    }
    return true;
}

bool numerically_odd(const AnalyticExpr& e)
{
    for (int i = 1; i <= 16; ++i) {
        const double t = 0.11 * i;
        if (std::abs(e.eval({t, 0}).real() + e.eval({-t, 0}).real()) > 1e-12) return false;
    }
    return true;
}

struct ObjectiveLog {
    std::vector<std::pair<int, double>> history;
    int evals = 0;
    double best = kInf;

    void record(double fx)
    {
        ++evals;
        if (fx < best) {
            best = fx;
            history.emplace_back(evals, best);
        }
    }
};

struct NelderMeadOutcome {
    Eigen::VectorXd x;
    double fx = kInf;
};

// Standard reflect/expand/contract/shrink simplex with stable ordering.
NelderMeadOutcome nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                              const Eigen::VectorXd& x0, const Eigen::VectorXd& step, int budget,
                              ObjectiveLog& log)
{
    const int n = int(x0.size());
    std::vector<Eigen::VectorXd> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    int used = 0;

    auto eval = [&](const Eigen::VectorXd& x) {
        const double fx = objective(x);
        log.record(fx);
        ++used;
        return fx;
    };

    for (int i = 1; i <= n; ++i) xs[i](i - 1) += step(i - 1);
    for (int i = 0; i <= n && used < budget; ++i) fs[i] = eval(xs[i]);

    std::vector<int> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    };

    while (used + 2 <= budget) {
        sort_simplex();
        const int lo = order[0], hi = order[n], next_hi = order[n - 1];

        double spread = 0.0;
        for (int i = 1; i <= n; ++i) spread = std::max(spread, (xs[order[i]] - xs[lo]).norm());
        if (spread < 1e-13 && std::isfinite(fs[lo])) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != hi) centroid += xs[i];
        centroid /= double(n);

        const Eigen::VectorXd reflected = centroid + (centroid - xs[hi]);
        const double fr = eval(reflected);
        if (fr < fs[lo]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[hi]);
            const double fe = eval(expanded);
            if (fe < fr) {
                xs[hi] = expanded;
                fs[hi] = fe;
            } else {
                xs[hi] = reflected;
                fs[hi] = fr;
            }
            continue;
        }
        if (fr < fs[next_hi]) {
            xs[hi] = reflected;
            fs[hi] = fr;
            continue;
        }
        const Eigen::VectorXd contracted = centroid + 0.5 * (xs[hi] - centroid);
        const double fc = eval(contracted);
        if (fc < fs[hi]) {
            xs[hi] = contracted;
            fs[hi] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (int i = 0; i <= n && used < budget; ++i) {
            if (i == lo) continue;
            xs[i] = xs[lo] + 0.5 * (xs[i] - xs[lo]);
            fs[i] = eval(xs[i]);
        }
    }

    sort_simplex();
    return {xs[order[0]], fs[order[0]]};
}

}  // namespace

AnalyticCurve CurveFamily::instantiate(const Eigen::VectorXd& theta) const
{
    if (theta.size() != dim()) throw InputError("CurveFamily: wrong coefficient count");
    const AnalyticExpr t = AnalyticExpr::variable();
    AnalyticExpr x = x_base;
    AnalyticExpr y = y_base;
    int at = 0;
    for (int p : x_powers) x = x + AnalyticExpr::constant(theta(at++)) * pow(t, p);
    for (int p : y_powers) y = y + AnalyticExpr::constant(theta(at++)) * pow(t, p);
    return AnalyticCurve(std::move(x), std::move(y), AnalyticExpr::constant(0.0));
}

void CurveFamily::validate() const
{
    for (int p : x_powers)
        if (p < 2 || p % 2 != 0) throw InputError("CurveFamily: x powers must be even and >= 2");
    for (int p : y_powers)
        if (p < 1 || p % 2 != 1) throw InputError("CurveFamily: y powers must be odd");
    const int k = dim();
    if (lower.size() != k || upper.size() != k || theta0.size() != k)
        throw InputError("CurveFamily: bounds and seed must match the coefficient count");
    for (int i = 0; i < k; ++i)
        if (!(lower(i) <= theta0(i) && theta0(i) <= upper(i)))
            throw InputError("CurveFamily: seed must lie inside the bounds");
    if (!numerically_even(x_base)) throw InputError("CurveFamily: x base must be even in t");
    if (!numerically_odd(y_base)) throw InputError("CurveFamily: y base must be odd in t");
}

double self_cpg_objective(const CurveFamily& family, const Eigen::VectorXd& theta,
                          const SearchOptions& opt)
{
    try {
        const AnalyticCurve curve = family.instantiate(theta);
        const double r = opt.t_range;

        // regularity and non-degeneracy gates near the vertex
        BranchTracker branch;
        if (curve.acceleration({0, 0}, &branch).real().norm() <= 1e-10) return kInf;
        for (int i = 0; i <= 32; ++i) {
            const double t = -r + 2.0 * r * i / 32.0;
            if (curve.velocity({t, 0}, &branch).real().norm() <= 1e-8) return kInf;
        }

        // ||c'||^2 zeros on or near the compared axes put a branch point on
        // an evaluation path; such instantiations are infeasible.
        const auto& dc = curve.first_derivatives();
        const AnalyticExpr speed2 = pow(dc[0], 2) + pow(dc[1], 2);
        for (int i = 0; i <= 64; ++i) {
            const double t = -r + 2.0 * r * i / 64.0;
            if (std::abs(speed2.eval({0.0, t})) <= 1e-4) return kInf;
            if (std::abs(speed2.eval({t, 0.0})) <= 1e-4) return kInf;
        }

        const Strip strip = make_planar_strip(curve, kPi / 2, -r, r);
        DomainGrid grid;
        grid.u_min = grid.v_min = -r;
        grid.u_max = grid.v_max = r;
        grid.nu = grid.nv = 2;
        QuadratureOptions qopt;
        qopt.tol = opt.quad_tol;
        qopt.max_levels = 8;  // treat slow refinement as infeasible, not as work
        const SurfacePatch probe = SurfacePatch::evaluate(strip, grid, qopt, 1);
        return self_cpg_test(probe, opt.tol, opt.t_samples).residual;
    } catch (const Error&) {
        return kInf;
    }
}

SearchResult self_cpg_search(const CurveFamily& family, const SearchOptions& opt)
{
    family.validate();
    const int k = family.dim();
    const int restarts = std::max(1, opt.restarts);

    // Zero-dimensional family: a single fixed curve, one evaluation.
    if (k == 0) {
        SearchResult out;
        out.best_theta = Eigen::VectorXd(0);
        out.residual = self_cpg_objective(family, out.best_theta, opt);
        out.converged = out.residual <= opt.tol;
        out.evaluations = 1;
        out.history = {{1, out.residual}};
        if (!std::isfinite(out.residual))
            throw NumericError("self_cpg_search: no finite residual evaluation");
        return out;
    }

    struct RestartOutcome {
        NelderMeadOutcome nm;
        ObjectiveLog log;
    };
    std::vector<RestartOutcome> outcomes(restarts);

    const int per_restart = std::max(k + 2, opt.budget / restarts);
    auto run_restart = [&](int r) {
        Eigen::VectorXd start(k);
        if (r == 0) {
            start = family.theta0;
        } else {
            std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ull + std::uint64_t(r));
            for (int i = 0; i < k; ++i) start(i) = uniform(rng, family.lower(i), family.upper(i));
        }
        Eigen::VectorXd step(k);
        for (int i = 0; i < k; ++i)
            step(i) = std::max(0.05 * (family.upper(i) - family.lower(i)), 1e-3);
        outcomes[r].nm = nelder_mead(
            [&](const Eigen::VectorXd& x) { return self_cpg_objective(family, x, opt); }, start,
            step, per_restart, outcomes[r].log);
    };

    int nthreads = opt.threads > 0 ? opt.threads
                                   : int(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
    nthreads = std::min(nthreads, restarts);
    if (nthreads <= 1) {
        for (int r = 0; r < restarts; ++r) run_restart(r);
    } else {
        std::vector<std::thread> pool;
        for (int tindex = 0; tindex < nthreads; ++tindex)
            pool.emplace_back([&, tindex] {
                for (int r = tindex; r < restarts; r += nthreads) run_restart(r);
            });
        for (auto& th : pool) th.join();
    }

    SearchResult out;
    out.residual = kInf;
    int eval_base = 0;
    for (int r = 0; r < restarts; ++r) {
        for (const auto& [it, res] : outcomes[r].log.history)
            out.history.emplace_back(eval_base + it, res);
        eval_base += outcomes[r].log.evals;
        if (outcomes[r].nm.fx < out.residual) {
            out.residual = outcomes[r].nm.fx;
            out.best_theta = outcomes[r].nm.x;
            out.best_restart = r;
        }
    }
    out.evaluations = eval_base;
    out.converged = out.residual <= opt.tol;
    if (!std::isfinite(out.residual))
        throw NumericError("self_cpg_search: budget exhausted without a finite residual");
    return out;
}

}  // namespace bjorling
