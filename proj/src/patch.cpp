#include "bjorling/patch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace bjorling {

namespace {

struct GaussLegendre16 {
    std::array<double, 16> x{};  // ascending
    std::array<double, 16> w{};
};

// Nodes and weights from Newton iteration on P16; computed once, bit-stable.
const GaussLegendre16& gl16()
{
    static const GaussLegendre16 table = [] {
        GaussLegendre16 t;
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 64; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) {
                    // one more pass to settle dp at the converged abscissa
                    double q0 = 1.0, q1 = x;
                    for (int k = 2; k <= n; ++k) {
                        double qk = ((2.0 * k - 1.0) * x * q1 - (k - 1.0) * q0) / k;
                        q0 = q1;
                        q1 = qk;
                    }
                    dp = n * (x * q1 - q0) / (x * x - 1.0);
                    break;
                }
            }
            t.x[n - 1 - i] = x;  // initial guesses descend; store ascending
            t.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return t;
    }();
    return table;
}

int resolve_threads(int threads)
{
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return int(std::clamp(hc, 1u, 8u));
}

}  // namespace

double DomainGrid::diameter() const { return std::hypot(u_max - u_min, v_max - v_min); }

bool DomainGrid::contains(Complex w, double pad) const
{
    return w.real() >= u_min - pad && w.real() <= u_max + pad && w.imag() >= v_min - pad &&
           w.imag() <= v_max + pad;
}

void DomainGrid::validate() const
{
    if (!(std::isfinite(u_min) && std::isfinite(u_max) && std::isfinite(v_min) &&
          std::isfinite(v_max)))
        throw InputError("domain ranges must be finite");
    if (!(u_min < u_max && v_min < v_max)) throw InputError("domain ranges must satisfy min < max");
    if (nu < 2 || nv < 2) throw InputError("grid counts nu, nv must be at least 2");
    if (!(std::isfinite(base.real()) && std::isfinite(base.imag())))
        throw InputError("base point must be finite");
}

CVec3 integrate_segment(const Strip& strip, Complex z0, Complex z1, const QuadratureOptions& opt,
                        BranchTracker& branch)
{
    if (z0 == z1) return CVec3::Zero();
    const GaussLegendre16& q = gl16();

    const BranchTracker start_state = branch;
    CVec3 prev = CVec3::Zero();
    bool have_prev = false;
    for (int level = 0; level <= opt.max_levels; ++level) {
        branch = start_state;
        const int panels = 1 << level;
        const Complex step = (z1 - z0) / double(panels);
        const Complex half = step * 0.5;
        CVec3 acc = CVec3::Zero();
        for (int p = 0; p < panels; ++p) {
            const Complex a = z0 + step * double(p);
            CVec3 panel = CVec3::Zero();
            for (int i = 0; i < 16; ++i) {
                const Complex z = a + half * (q.x[i] + 1.0);
                panel += q.w[i] * strip.integrand_at(z, &branch);
            }
            acc += half * panel;
        }
        if (have_prev && (acc - prev).norm() <= opt.tol * (1.0 + acc.norm())) return acc;
        prev = acc;
        have_prev = true;
    }
    throw NumericError("contour quadrature did not converge within the refinement budget");
}

PathEvaluator::PathEvaluator(const Strip& strip, Complex base, QuadratureOptions opt, Complex gauge)
    : strip_(&strip), opt_(opt), gauge_(gauge), current_(base), accum_(CVec3::Zero())
{
}

PathEvaluator::Sample PathEvaluator::advance(Complex w, bool with_second)
{
    accum_ += integrate_segment(*strip_, current_, w, opt_, branch_);
    current_ = w;

    const Complex minus_i(0.0, -1.0);
    Sample s;
    s.w = w;
    s.f = gauge_ * (strip_->curve().point(w, &branch_) + minus_i * accum_);

    try {
        CVec3 g = strip_->integrand_at(w, &branch_);
        s.fprime = gauge_ * (strip_->curve().velocity(w, &branch_) + minus_i * g);
        if (with_second) {
            CVec3 dg = strip_->integrand_derivative_at(w, &branch_);
            s.fsecond = gauge_ * (strip_->curve().acceleration(w, &branch_) + minus_i * dg);
        }
    } catch (const BranchPointError&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.fprime.setConstant(Complex(nan, nan));
        s.fsecond.setConstant(Complex(nan, nan));
        s.branch_failed = true;
    }
    return s;
}

SurfacePatch SurfacePatch::evaluate(const Strip& strip, const DomainGrid& grid,
                                    QuadratureOptions opt, int threads)
{
    grid.validate();

    SurfacePatch patch;
    patch.strip_ = strip;
    patch.grid_ = grid;
    patch.opt_ = opt;

    const int nu = grid.nu, nv = grid.nv;
    const std::size_t count = std::size_t(nu) * nv;
    patch.f_.resize(count);
    patch.fprime_.resize(count);
    patch.singular_.assign(count, 0);

    // Shared base row: w0 -> (u_j, Im w0) for every column, swept outward from
    // the column nearest Re w0 so the branch state stays on one path.
    const double vb = grid.base.imag();
    std::vector<CVec3> foot_integral(nu);
    std::vector<BranchTracker> foot_branch(nu, BranchTracker{});

    int j0 = int(std::lround((grid.base.real() - grid.u_min) / grid.du()));
    j0 = std::clamp(j0, 0, nu - 1);

    {
        BranchTracker branch;
        CVec3 acc = integrate_segment(strip, grid.base, Complex(grid.u_min + j0 * grid.du(), vb),
                                      opt, branch);
        foot_integral[j0] = acc;
        foot_branch[j0] = branch;
        CVec3 acc_right = acc;
        BranchTracker branch_right = branch;
        for (int j = j0 + 1; j < nu; ++j) {
            acc_right += integrate_segment(strip, Complex(grid.u_min + (j - 1) * grid.du(), vb),
                                           Complex(grid.u_min + j * grid.du(), vb), opt, branch_right);
            foot_integral[j] = acc_right;
            foot_branch[j] = branch_right;
        }
        CVec3 acc_left = acc;
        BranchTracker branch_left = branch;
        for (int j = j0 - 1; j >= 0; --j) {
            acc_left += integrate_segment(strip, Complex(grid.u_min + (j + 1) * grid.du(), vb),
                                          Complex(grid.u_min + j * grid.du(), vb), opt, branch_left);
            foot_integral[j] = acc_left;
            foot_branch[j] = branch_left;
        }
    }

    // Vertical sweeps, independent per column.
    const Complex minus_i(0.0, -1.0);
    auto eval_node = [&](SurfacePatch& p, int j, int k, const CVec3& integral,
                         BranchTracker& branch) {
        const Complex w = grid.node(j, k);
        const std::size_t at = p.idx(j, k);
        p.f_[at] = strip.curve().point(w, &branch) + minus_i * integral;
        try {
            CVec3 g = strip.integrand_at(w, &branch);
            p.fprime_[at] = strip.curve().velocity(w, &branch) + minus_i * g;
        } catch (const BranchPointError&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            p.fprime_[at].setConstant(Complex(nan, nan));
            p.singular_[at] = 1;
        }
    };

    auto run_column = [&](int j) {
        const double u = grid.u_min + j * grid.du();
        int k_up = 0;
        while (k_up < nv && grid.v_min + k_up * grid.dv() < vb) ++k_up;

        BranchTracker branch = foot_branch[j];
        CVec3 acc = foot_integral[j];
        Complex from(u, vb);
        for (int k = k_up; k < nv; ++k) {
            const Complex to = grid.node(j, k);
            acc += integrate_segment(strip, from, to, opt, branch);
            eval_node(patch, j, k, acc, branch);
            from = to;
        }
        branch = foot_branch[j];
        acc = foot_integral[j];
        from = Complex(u, vb);
        for (int k = k_up - 1; k >= 0; --k) {
            const Complex to = grid.node(j, k);
            acc += integrate_segment(strip, from, to, opt, branch);
            eval_node(patch, j, k, acc, branch);
            from = to;
        }
    };

    const int nthreads = std::min(resolve_threads(threads), nu);
    if (nthreads <= 1) {
        for (int j = 0; j < nu; ++j) run_column(j);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex error_mutex;
        pool.reserve(nthreads);
        for (int tindex = 0; tindex < nthreads; ++tindex) {
            pool.emplace_back([&, tindex] {
                try {
                    for (int j = tindex; j < nu; j += nthreads) run_column(j);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    patch.derive_fields();
    return patch;
}

void SurfacePatch::derive_fields()
{
    const std::size_t count = f_.size();
    x_.resize(count);
    xstar_.resize(count);
    n_.resize(count);
    scale_fprime_ = 0.0;

    for (std::size_t i = 0; i < count; ++i) {
        x_[i] = f_[i].real();
        xstar_[i] = f_[i].imag();

        const double herm = fprime_[i].squaredNorm();
        if (!(herm >= 1e-16)) {  // tiny or NaN
            singular_[i] = 1;
            n_[i].setZero();
            continue;
        }
        scale_fprime_ = std::max(scale_fprime_, std::sqrt(herm));
        const Vec3 xu = fprime_[i].real();
        const Vec3 xv = -fprime_[i].imag();
        const Vec3 cr = xu.cross(xv);
        const double len = cr.norm();
        if (len < 1e-300) {
            singular_[i] = 1;
            n_[i].setZero();
        } else {
            n_[i] = cr / len;
        }
    }
}

bool SurfacePatch::any_singular() const
{
    for (auto s : singular_)
        if (s) return true;
    return false;
}

PathEvaluator SurfacePatch::evaluator() const
{
    return PathEvaluator(strip_, grid_.base, opt_, gauge_);
}

PathEvaluator::Sample SurfacePatch::eval_at(Complex w) const
{
    PathEvaluator ev = evaluator();
    return ev.advance(w);
}

SurfacePatch SurfacePatch::adjoint() const
{
    SurfacePatch out = *this;
    const Complex minus_i(0.0, -1.0);
    out.gauge_ *= minus_i;
    for (std::size_t i = 0; i < f_.size(); ++i) {
        out.f_[i] = minus_i * f_[i];
        out.fprime_[i] = minus_i * fprime_[i];
        out.x_[i] = out.f_[i].real();
        out.xstar_[i] = out.f_[i].imag();
        // X_u x X_v is invariant under f -> -i f: the adjoint shares the Gauss map.
    }
    return out;
}

SurfacePatch SurfacePatch::transformed(const Mat3& rotation, const Vec3& translation) const
{
    SurfacePatch out = *this;
    const double det = rotation.determinant();
    const CVec3 shift = translation.cast<Complex>();
    const CMat3 rot_c = rotation.cast<Complex>();
    for (std::size_t i = 0; i < f_.size(); ++i) {
        out.f_[i] = rot_c * f_[i] + shift;
        out.fprime_[i] = rot_c * fprime_[i];
        out.x_[i] = out.f_[i].real();
        out.xstar_[i] = out.f_[i].imag();
        out.n_[i] = det * (rotation * n_[i]);
    }
    return out;
}

SurfacePatch evaluate_patch(const Strip& strip, const DomainGrid& grid, double quad_tol, int threads)
{
    QuadratureOptions opt;
    opt.tol = quad_tol;
    return SurfacePatch::evaluate(strip, grid, opt, threads);
}

SurfacePatch adjoint_patch(const SurfacePatch& patch) { return patch.adjoint(); }

}  // namespace bjorling
