#pragma once

#include <cstdint>
#include <vector>

#include "bjorling/strip.hpp"
#include "bjorling/types.hpp"

namespace bjorling {

/// Rectangular evaluation window in the parameter plane, uniform nu x nv
/// lattice, plus the integration base point w0.
struct DomainGrid {
    double u_min = -1.0, u_max = 1.0;
    double v_min = -1.0, v_max = 1.0;
    int nu = 2, nv = 2;
    Complex base{0.0, 0.0};

    double du() const { return (u_max - u_min) / (nu - 1); }
    double dv() const { return (v_max - v_min) / (nv - 1); }
    Complex node(int j, int k) const { return {u_min + j * du(), v_min + k * dv()}; }
    double diameter() const;
    bool contains(Complex w, double pad = 1e-9) const;
    bool contains_real_segment() const { return v_min <= 0.0 && 0.0 <= v_max; }

    /// Throws InputError unless ranges are finite with min < max and nu, nv >= 2.
    void validate() const;
};

struct QuadratureOptions {
    double tol = defaults::quad_tol;
    int max_levels = 16;
};

/// Adaptive composite 16-point Gauss-Legendre integral of the strip integrand
/// n x c' over the straight segment [z0, z1]. Panels are swept in path order
/// so sqrt branches continue correctly; each refinement restarts from the
/// branch state at z0. Stops when successive composite estimates differ by
/// less than tol*(1+|estimate|).
CVec3 integrate_segment(const Strip& strip, Complex z0, Complex z1, const QuadratureOptions& opt,
                        BranchTracker& branch);

/// Sequential evaluator of the isotropic curve f(w) = gauge*(c(w) - i int g)
/// along a caller-chosen polyline starting at the base point. Single-owner.
class PathEvaluator {
public:
    PathEvaluator(const Strip& strip, Complex base, QuadratureOptions opt, Complex gauge);

    struct Sample {
        Complex w;
        CVec3 f;
        CVec3 fprime;
        CVec3 fsecond;  // valid only when requested
        bool branch_failed = false;
    };

    /// Moves to w along a straight chord from the current position,
    /// accumulating the contour integral, and returns f, f' (and f'' on
    /// request) there. branch_failed marks nodes where the integrand's sqrt
    /// sat inside the branch guard; f is still valid, f' is NaN.
    Sample advance(Complex w, bool with_second = false);

    Complex position() const { return current_; }

private:
    const Strip* strip_;
    QuadratureOptions opt_;
    Complex gauge_;
    Complex current_;
    CVec3 accum_;
    BranchTracker branch_;
};

/// Grid evaluation of the isotropic curve and the derived surfaces:
/// X = Re f, X* = Im f, Gauss map N from f' = c' - i n x c'.
class SurfacePatch {
public:
    /// Integration runs from w0 along the base row, then vertically with
    /// cumulative reuse per column; columns are evaluated in parallel.
    /// threads = 0 picks a machine default; results are identical for any
    /// thread count.
    static SurfacePatch evaluate(const Strip& strip, const DomainGrid& grid,
                                 QuadratureOptions opt = {}, int threads = 0);

    const DomainGrid& grid() const { return grid_; }
    const Strip& strip() const { return strip_; }
    const QuadratureOptions& quadrature() const { return opt_; }
    Complex gauge() const { return gauge_; }
    int nu() const { return grid_.nu; }
    int nv() const { return grid_.nv; }

    const CVec3& f(int j, int k) const { return f_[idx(j, k)]; }
    const CVec3& fprime(int j, int k) const { return fprime_[idx(j, k)]; }
    const Vec3& X(int j, int k) const { return x_[idx(j, k)]; }
    const Vec3& Xstar(int j, int k) const { return xstar_[idx(j, k)]; }
    const Vec3& N(int j, int k) const { return n_[idx(j, k)]; }
    bool singular(int j, int k) const { return singular_[idx(j, k)] != 0; }
    bool any_singular() const;

    /// max ||f'|| over the grid; the patch scale used to normalize residuals.
    double scale_fprime() const { return scale_fprime_; }

    /// Fresh evaluator sharing this patch's strip, base point, quadrature
    /// settings and gauge; use for off-grid points.
    PathEvaluator evaluator() const;

    /// f and f' at a single point, integrating base -> w along one chord.
    PathEvaluator::Sample eval_at(Complex w) const;

    /// Patch of the isotropic curve -i f: real part X*, adjoint-of-adjoint -X.
    SurfacePatch adjoint() const;

    /// Patch moved by the rigid (or reflecting) motion X -> R X + t.
    SurfacePatch transformed(const Mat3& rotation, const Vec3& translation) const;

    std::size_t idx(int j, int k) const { return std::size_t(k) * grid_.nu + j; }

private:
    SurfacePatch() = default;
    void derive_fields();

    Strip strip_;
    DomainGrid grid_;
    QuadratureOptions opt_;
    Complex gauge_{1.0, 0.0};
    std::vector<CVec3> f_, fprime_;
    std::vector<Vec3> x_, xstar_, n_;
    std::vector<std::uint8_t> singular_;
    double scale_fprime_ = 0.0;
};

/// Spec-facing wrappers.
SurfacePatch evaluate_patch(const Strip& strip, const DomainGrid& grid,
                            double quad_tol = defaults::quad_tol, int threads = 0);
SurfacePatch adjoint_patch(const SurfacePatch& patch);

}  // namespace bjorling
