#include "bjorling/strip.hpp"

#include <cmath>

namespace bjorling {

namespace {

CVec3 eval3(const std::array<AnalyticExpr, 3>& e, Complex w, BranchTracker* branch)
{
    return CVec3(e[0].eval(w, branch), e[1].eval(w, branch), e[2].eval(w, branch));
}

std::array<AnalyticExpr, 3> cross3(const std::array<AnalyticExpr, 3>& a,
                                   const std::array<AnalyticExpr, 3>& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double snap(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

}  // namespace

AnalyticCurve::AnalyticCurve() : AnalyticCurve(AnalyticExpr(), AnalyticExpr(), AnalyticExpr()) {}

AnalyticCurve::AnalyticCurve(AnalyticExpr x, AnalyticExpr y, AnalyticExpr z)
    : c_{std::move(x), std::move(y), std::move(z)}
{
    for (int i = 0; i < 3; ++i) {
        dc_[i] = c_[i].derivative();
        ddc_[i] = dc_[i].derivative();
    }
}

CVec3 AnalyticCurve::point(Complex w, BranchTracker* branch) const { return eval3(c_, w, branch); }
CVec3 AnalyticCurve::velocity(Complex w, BranchTracker* branch) const { return eval3(dc_, w, branch); }
CVec3 AnalyticCurve::acceleration(Complex w, BranchTracker* branch) const
{
    return eval3(ddc_, w, branch);
}

bool AnalyticCurve::planar_xy(double t0, double t1, int samples, double tol) const
{
    if (c_[2].is_zero()) return true;
    for (int i = 0; i < samples; ++i) {
        double t = t0 + (t1 - t0) * i / double(samples - 1);
        if (std::abs(c_[2].eval(Complex(t, 0.0))) > tol) return false;
    }
    return true;
}

Strip::Strip(AnalyticCurve curve, std::array<AnalyticExpr, 3> normal, bool planar,
             std::optional<double> phi, std::optional<std::array<AnalyticExpr, 3>> integrand)
    : curve_(std::move(curve)), normal_(std::move(normal)), planar_(planar), phi_(phi)
{
    g_ = integrand ? std::move(*integrand) : cross3(normal_, curve_.first_derivatives());
    for (int i = 0; i < 3; ++i) dg_[i] = g_[i].derivative();
}

CVec3 Strip::normal_at(Complex w, BranchTracker* branch) const { return eval3(normal_, w, branch); }
CVec3 Strip::integrand_at(Complex w, BranchTracker* branch) const { return eval3(g_, w, branch); }
CVec3 Strip::integrand_derivative_at(Complex w, BranchTracker* branch) const
{
    return eval3(dg_, w, branch);
}

Strip make_planar_strip(const AnalyticCurve& curve, double phi, double t0, double t1)
{
    if (!curve.planar_xy(t0, t1))
        throw InputError("make_planar_strip: curve does not lie in the XY-plane");

    const auto& dc = curve.first_derivatives();
    AnalyticExpr speed2 = pow(dc[0], 2) + pow(dc[1], 2);

    // Branch points of ||c'|| on the data interval make the strip unusable.
    for (int i = 0; i <= 200; ++i) {
        double t = t0 + (t1 - t0) * i / 200.0;
        if (std::abs(speed2.eval(Complex(t, 0.0))) < 1e-20)
            throw BranchPointError("make_planar_strip: ||c'||^2 vanishes on the real interval");
    }

    AnalyticExpr speed = sqrt(speed2);
    const double cs = snap(std::cos(phi));
    const double sn = snap(std::sin(phi));
    const AnalyticExpr zero = AnalyticExpr::constant(0.0);

    // n = e_z cos(phi) + (t x e_z) sin(phi), with t x e_z = (y', -x', 0)/||c'||.
    std::array<AnalyticExpr, 3> n;
    n[0] = sn == 0.0 ? zero : AnalyticExpr::constant(sn) * dc[1] / speed;
    n[1] = sn == 0.0 ? zero : AnalyticExpr::constant(-sn) * dc[0] / speed;
    n[2] = AnalyticExpr::constant(cs);

    // n x c' reduced in-plane: (-cos(phi) y', cos(phi) x', sin(phi) ||c'||),
    // sharing the sqrt node with the normal so branches stay coherent.
    std::array<AnalyticExpr, 3> g;
    g[0] = cs == 0.0 ? zero : AnalyticExpr::constant(-cs) * dc[1];
    g[1] = cs == 0.0 ? zero : AnalyticExpr::constant(cs) * dc[0];
    g[2] = sn == 0.0 ? zero : AnalyticExpr::constant(sn) * speed;

    return Strip(curve, std::move(n), true, phi, std::move(g));
}

Strip make_strip(AnalyticCurve curve, AnalyticExpr nx, AnalyticExpr ny, AnalyticExpr nz)
{
    return Strip(std::move(curve), {std::move(nx), std::move(ny), std::move(nz)}, false,
                 std::nullopt);
}

StripValidation validate_strip(const Strip& strip, int n_samples, double tol, double t0, double t1)
{
    StripValidation rep;
    rep.min_speed = std::numeric_limits<double>::infinity();
    BranchTracker branch;
    for (int i = 0; i < n_samples; ++i) {
        double t = t0 + (t1 - t0) * i / double(n_samples - 1);
        Vec3 n = strip.normal_at(Complex(t, 0.0), &branch).real();
        Vec3 dc = strip.curve().velocity(Complex(t, 0.0), &branch).real();
        double speed = dc.norm();
        rep.min_speed = std::min(rep.min_speed, speed);
        rep.max_unit_norm_deviation = std::max(rep.max_unit_norm_deviation, std::abs(n.norm() - 1.0));
        if (speed > 0.0)
            rep.max_orthogonality_deviation =
                std::max(rep.max_orthogonality_deviation, std::abs(n.dot(dc)) / speed);
    }
    rep.pass = rep.max_unit_norm_deviation <= tol && rep.max_orthogonality_deviation <= tol &&
               rep.min_speed > 1e-10;
    return rep;
}

SymmetricCurveReport check_perpendicular_symmetric(const AnalyticCurve& curve, int samples,
                                                   double tol, double t0, double t1)
{
    SymmetricCurveReport rep;
    const double r = std::min(std::abs(t0), std::abs(t1));

    double residual = 0.0;
    double extent = 1.0;
    for (int i = 0; i < samples; ++i) {
        double t = r * (i + 1) / double(samples);
        CVec3 cp = curve.point(Complex(t, 0.0));
        CVec3 cm = curve.point(Complex(-t, 0.0));
        extent = std::max({extent, cp.real().norm(), cm.real().norm()});
        residual = std::max(residual, std::abs(cm[0].real() - cp[0].real()));
        residual = std::max(residual, std::abs(cm[1].real() + cp[1].real()));
        residual = std::max(residual, std::abs(cp[2].real()));
    }
    rep.symmetry_residual = residual / extent;

    rep.vertex_parameter = 0.0;
    rep.vertex_point = curve.point(Complex(0.0, 0.0)).real();
    Vec3 v0 = curve.velocity(Complex(0.0, 0.0)).real();
    const bool vertex_perpendicular = std::abs(v0.x()) <= tol * (1.0 + v0.norm());
    rep.symmetric = rep.symmetry_residual <= tol && vertex_perpendicular;
    rep.second_derivative_at_vertex = curve.acceleration(Complex(0.0, 0.0)).real();
    rep.degenerate = rep.second_derivative_at_vertex.norm() <= 1e-10;
    return rep;
}

}  // namespace bjorling
