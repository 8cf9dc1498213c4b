#pragma once

#include <array>
#include <optional>

#include "bjorling/analytic.hpp"
#include "bjorling/types.hpp"

namespace bjorling {

/// Real-analytic space curve with cached first and second derivatives.
/// Components are real-valued on the real axis.
class AnalyticCurve {
public:
    AnalyticCurve();
    AnalyticCurve(AnalyticExpr x, AnalyticExpr y, AnalyticExpr z);

    CVec3 point(Complex w, BranchTracker* branch = nullptr) const;
    CVec3 velocity(Complex w, BranchTracker* branch = nullptr) const;
    CVec3 acceleration(Complex w, BranchTracker* branch = nullptr) const;

    const std::array<AnalyticExpr, 3>& components() const { return c_; }
    const std::array<AnalyticExpr, 3>& first_derivatives() const { return dc_; }
    const std::array<AnalyticExpr, 3>& second_derivatives() const { return ddc_; }

    /// z component identically the literal 0, or numerically ~0 on samples of [t0, t1].
    bool planar_xy(double t0 = -1.0, double t1 = 1.0, int samples = 50, double tol = 1e-12) const;

private:
    std::array<AnalyticExpr, 3> c_, dc_, ddc_;
};

/// Björling data S(t) = (c(t), n(t)): curve plus unit normal field orthogonal
/// to the tangent. The cross-product integrand n x c' and its derivative are
/// prepared once; they drive both the Schwarz integral and f'.
class Strip {
public:
    Strip() = default;
    /// `integrand` overrides the symbolic cross product n x c' with an
    /// algebraically equal form (the planar reduction keeps it finite at
    /// double zeros of the hodograph square).
    Strip(AnalyticCurve curve, std::array<AnalyticExpr, 3> normal, bool planar,
          std::optional<double> phi,
          std::optional<std::array<AnalyticExpr, 3>> integrand = std::nullopt);

    const AnalyticCurve& curve() const { return curve_; }
    const std::array<AnalyticExpr, 3>& normal() const { return normal_; }
    bool planar() const { return planar_; }
    std::optional<double> phi() const { return phi_; }

    /// g = n x c', componentwise analytic.
    const std::array<AnalyticExpr, 3>& integrand() const { return g_; }
    const std::array<AnalyticExpr, 3>& integrand_derivative() const { return dg_; }

    CVec3 normal_at(Complex w, BranchTracker* branch = nullptr) const;
    CVec3 integrand_at(Complex w, BranchTracker* branch = nullptr) const;
    CVec3 integrand_derivative_at(Complex w, BranchTracker* branch = nullptr) const;

private:
    AnalyticCurve curve_;
    std::array<AnalyticExpr, 3> normal_;
    std::array<AnalyticExpr, 3> g_, dg_;
    bool planar_ = false;
    std::optional<double> phi_;
};

/// Builds the strip of a regular curve in the XY-plane from the analytic
/// in-plane frame: t = c'/||c'||, the in-plane normal is t x e_z, the
/// binormal is the plane normal e_z, and n = e_z cos(phi) + (t x e_z) sin(phi).
/// phi = pi/2 selects the in-plane normal (the classical planar reduction);
/// phi = 0 selects the binormal. ||c'|| enters through a branch-tracked sqrt.
/// Throws InputError when the curve leaves the XY-plane and BranchPointError
/// when ||c'||^2 vanishes on the sampled real interval.
Strip make_planar_strip(const AnalyticCurve& curve, double phi = kPi / 2, double t0 = -1.0,
                        double t1 = 1.0);

/// Strip with an explicitly given normal field; validity is checked by
/// validate_strip, not at construction.
Strip make_strip(AnalyticCurve curve, AnalyticExpr nx, AnalyticExpr ny, AnalyticExpr nz);

struct StripValidation {
    double max_unit_norm_deviation = 0.0;
    double max_orthogonality_deviation = 0.0;  // |<c', n>| / ||c'||
    double min_speed = 0.0;
    bool pass = false;
};

/// Samples the strip conditions on [t0, t1]: | ||n||-1 |, |<c',n>|/||c'||,
/// min ||c'||. Report-only; pass requires both deviations within tol and
/// min ||c'|| > 1e-10.
StripValidation validate_strip(const Strip& strip, int n_samples = 200,
                               double tol = 1e-10, double t0 = -1.0, double t1 = 1.0);

struct SymmetricCurveReport {
    double vertex_parameter = 0.0;
    Vec3 vertex_point = Vec3::Zero();
    double symmetry_residual = 0.0;
    bool symmetric = false;
    bool degenerate = true;
    Vec3 second_derivative_at_vertex = Vec3::Zero();
};

/// Checks the normalized perpendicular-symmetry convention: curve in the
/// XY-plane, x even and y odd about t = 0, tangent at the vertex orthogonal
/// to the X-axis. Degeneracy means c''(0) ~ 0.
SymmetricCurveReport check_perpendicular_symmetric(const AnalyticCurve& curve, int samples = 100,
                                                   double tol = defaults::check_tol,
                                                   double t0 = -1.0, double t1 = 1.0);

}  // namespace bjorling
