#include "bjorling/geometry.hpp"

#include <cmath>
#include <limits>

namespace bjorling {

namespace {

Complex bilinear_self_product(const CVec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

}  // namespace

GeometryReport minimality_report(const SurfacePatch& patch, const Strip& strip,
                                 int boundary_samples)
{
    GeometryReport rep;
    const DomainGrid& grid = patch.grid();
    const double scale = std::max(patch.scale_fprime(), 1e-300);
    const double scale2 = scale * scale;

    for (int k = 0; k < grid.nv; ++k) {
        for (int j = 0; j < grid.nu; ++j) {
            if (patch.singular(j, k)) continue;
            const CVec3& fp = patch.fprime(j, k);
            rep.isotropy_max =
                std::max(rep.isotropy_max, std::abs(bilinear_self_product(fp)) / scale2);
            const Vec3 xu = fp.real();
            const Vec3 xv = -fp.imag();
            rep.conformal_max = std::max(
                rep.conformal_max, std::abs(xu.squaredNorm() - xv.squaredNorm()) / scale2);
            rep.conformal_max = std::max(rep.conformal_max, std::abs(xu.dot(xv)) / scale2);
        }
    }

    const double du2 = grid.du() * grid.du();
    const double dv2 = grid.dv() * grid.dv();
    for (int k = 1; k + 1 < grid.nv; ++k) {
        for (int j = 1; j + 1 < grid.nu; ++j) {
            const Vec3 lap = (patch.X(j + 1, k) - 2.0 * patch.X(j, k) + patch.X(j - 1, k)) / du2 +
                             (patch.X(j, k + 1) - 2.0 * patch.X(j, k) + patch.X(j, k - 1)) / dv2;
            rep.laplacian_max = std::max(rep.laplacian_max, lap.norm() / scale);
        }
    }

    if (grid.contains_real_segment() && patch.gauge() == Complex(1.0, 0.0)) {
        PathEvaluator ev = patch.evaluator();
        BranchTracker normal_branch;
        for (int i = 0; i < boundary_samples; ++i) {
            const double t =
                grid.u_min + (grid.u_max - grid.u_min) * i / double(boundary_samples - 1);
            auto s = ev.advance(Complex(t, 0.0));
            const Vec3 c = strip.curve().point(Complex(t, 0.0), &normal_branch).real();
            const Vec3 n = strip.normal_at(Complex(t, 0.0), &normal_branch).real();
            rep.boundary_curve_max = std::max(rep.boundary_curve_max, (s.f.real() - c).norm());
            if (!s.branch_failed) {
                const Vec3 xu = s.fprime.real();
                const Vec3 xv = -s.fprime.imag();
                const Vec3 cr = xu.cross(xv);
                if (cr.norm() > 1e-300)
                    rep.boundary_normal_max =
                        std::max(rep.boundary_normal_max, (cr.normalized() - n).norm());
            }
        }
    } else {
        rep.boundary_curve_max = std::numeric_limits<double>::quiet_NaN();
        rep.boundary_normal_max = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

std::vector<CurveGeometrySample> curve_on_surface_geometry(const SurfacePatch& patch,
                                                           const AnalyticExpr& gamma_u,
                                                           const AnalyticExpr& gamma_v, double s0,
                                                           double s1, int samples)
{
    const AnalyticExpr du = gamma_u.derivative();
    const AnalyticExpr dv = gamma_v.derivative();
    const AnalyticExpr ddu = du.derivative();
    const AnalyticExpr ddv = dv.derivative();

    std::vector<CurveGeometrySample> out;
    out.reserve(samples);
    PathEvaluator ev = patch.evaluator();
    for (int i = 0; i < samples; ++i) {
        const double s = s0 + (s1 - s0) * i / double(samples - 1);
        const Complex sc(s, 0.0);
        const Complex w(gamma_u.eval(sc).real(), gamma_v.eval(sc).real());
        if (!patch.grid().contains(w))
            throw InputError("curve_on_surface_geometry: path leaves the grid rectangle");
        const Complex g1(du.eval(sc).real(), dv.eval(sc).real());
        const Complex g2(ddu.eval(sc).real(), ddv.eval(sc).real());

        auto sample = ev.advance(w, true);
        CurveGeometrySample rec;
        rec.s = s;
        rec.point = sample.f.real();

        const CVec3 d1 = sample.fprime * g1;
        const CVec3 d2 = sample.fsecond * (g1 * g1) + sample.fprime * g2;
        const Vec3 cd1 = d1.real();
        const Vec3 cd2 = d2.real();
        const double speed = cd1.norm();
        if (speed < 1e-12) throw NumericError("curve_on_surface_geometry: image curve not regular");

        const Vec3 cross = cd1.cross(cd2);
        rec.kappa = cross.norm() / (speed * speed * speed);
        if (rec.kappa < 1e-12) {
            rec.zero_curvature = true;
            rec.kappa = 0.0;
            rec.theta = std::numeric_limits<double>::quiet_NaN();
        } else {
            // (c' x c'') x c' = |c'|^2 (c'' - <c'',t>t), the unnormalized principal normal
            const Vec3 principal = cross.cross(cd1).normalized();
            const Vec3 xu = sample.fprime.real();
            const Vec3 xv = -sample.fprime.imag();
            const Vec3 nsurf = xu.cross(xv).normalized();
            // sin(theta) from the cross product: stable where the normals align
            const double sin_theta = nsurf.cross(principal).norm();
            const double cos_theta = nsurf.dot(principal);
            rec.theta = std::atan2(sin_theta, cos_theta);
            rec.kappa_g = rec.kappa * sin_theta;
            rec.kappa_n = rec.kappa * cos_theta;
        }
        out.push_back(rec);
    }
    return out;
}

}  // namespace bjorling
