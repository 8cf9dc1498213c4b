#include <cmath>

#include "bjorling/catalog.hpp"
#include "bjorling/geometry.hpp"
#include "bjorling/patch.hpp"
#include "doctest.h"

using namespace bjorling;

namespace {

double oracle_deviation(const SurfacePatch& patch, const std::function<Vec3(double, double)>& oracle)
{
    double worst = 0.0;
    for (int k = 0; k < patch.nv(); ++k)
        for (int j = 0; j < patch.nu(); ++j) {
            const Complex w = patch.grid().node(j, k);
            worst = std::max(worst, (patch.X(j, k) - oracle(w.real(), w.imag())).norm());
        }
    return worst;
}

DomainGrid grid(double u0, double u1, double v0, double v1, int nu, int nv)
{
    DomainGrid g;
    g.u_min = u0;
    g.u_max = u1;
    g.v_min = v0;
    g.v_max = v1;
    g.nu = nu;
    g.nv = nv;
    return g;
}

}  // namespace

TEST_CASE("domain grid validation")
{
    CHECK_THROWS_AS(grid(0, 0, -1, 1, 5, 5).validate(), InputError);
    CHECK_THROWS_AS(grid(0, 1, -1, 1, 1, 5).validate(), InputError);
    DomainGrid g = grid(-1, 1, -1, 1, 5, 5);
    CHECK_NOTHROW(g.validate());
    CHECK(g.node(2, 2) == Complex(0.0, 0.0));
}

TEST_CASE("plane patch is the identity embedding")
{
    CatalogEntry e = builtin("plane_line");
    SurfacePatch p = evaluate_patch(e.strip, grid(-1, 1, -1, 1, 11, 11));
    CHECK(oracle_deviation(p, e.oracle) < 1e-13);

    // f(w) = (w, -i w, 0)
    const CVec3 f = p.eval_at(Complex(1.0, 1.0)).f;
    CHECK(std::abs(f[0] - Complex(1.0, 1.0)) < 1e-12);
    CHECK(std::abs(f[1] - Complex(1.0, -1.0)) < 1e-12);
    CHECK(std::abs(f[2]) < 1e-12);
}

TEST_CASE("catenoid from the circle strip")
{
    CatalogEntry e = builtin("circle");
    SurfacePatch p = evaluate_patch(e.strip, grid(0, 2 * kPi, -1, 1, 21, 21));
    CHECK(oracle_deviation(p, e.oracle) < 1e-8);

    // X(0, 1) = (cosh 1, 0, 1)
    const Vec3 x = p.eval_at(Complex(0.0, 1.0)).f.real();
    CHECK((x - Vec3(1.5430806348152437, 0.0, 1.0)).norm() < 1e-9);
}

TEST_CASE("helicoid from the rotating-normal line strip")
{
    CatalogEntry e = builtin("line_rotating_normal");
    SurfacePatch p = evaluate_patch(e.strip, grid(-kPi, kPi, -1, 1, 21, 21));
    CHECK(oracle_deviation(p, e.oracle) < 1e-8);

    const Vec3 x = p.eval_at(Complex(kPi / 2, 1.0)).f.real();
    CHECK((x - Vec3(kPi / 2, 1.1752011936438014, 0.0)).norm() < 1e-9);
}

TEST_CASE("Enneper surface from the cubic, including branch-guarded corners")
{
    CatalogEntry e = builtin("enneper_cubic");
    // u = 0, v = +-1 hits the double zero of the hodograph square exactly
    SurfacePatch p = evaluate_patch(e.strip, grid(-1, 1, -1, 1, 21, 21));
    CHECK(oracle_deviation(p, e.oracle) < 1e-10);
    CHECK(!p.any_singular());

    // boundary condition X(t) = c(t)
    const Vec3 x1 = p.eval_at(Complex(1.0, 0.0)).f.real();
    CHECK((x1 - Vec3(1.0, -2.0 / 3.0, 0.0)).norm() < 1e-10);

    // f' = (2w, w^2 - 1, -i(w^2 + 1))
    const CVec3 fp = p.eval_at(Complex(0.5, 0.25)).fprime;
    const Complex w(0.5, 0.25);
    CHECK(std::abs(fp[0] - 2.0 * w) < 1e-10);
    CHECK(std::abs(fp[1] - (w * w - 1.0)) < 1e-10);
    CHECK(std::abs(fp[2] - Complex(0.0, -1.0) * (w * w + 1.0)) < 1e-10);
}

TEST_CASE("quadrature self-consistency when the tolerance halves")
{
    for (const char* name : {"circle", "catenary", "parabola", "ellipse"}) {
        CatalogEntry e = builtin(name);
        DomainGrid g = e.default_grid;
        g.nu = g.nv = 9;
        SurfacePatch coarse = evaluate_patch(e.strip, g, 1e-8);
        SurfacePatch fine = evaluate_patch(e.strip, g, 5e-9);
        double diff = 0.0;
        for (int k = 0; k < g.nv; ++k)
            for (int j = 0; j < g.nu; ++j)
                diff = std::max(diff, (coarse.f(j, k) - fine.f(j, k)).norm());
        INFO(name);
        CHECK(diff < 1e-8);
    }
}

TEST_CASE("path independence of the contour integral")
{
    for (const char* name : {"circle", "catenary", "enneper_cubic"}) {
        CatalogEntry e = builtin(name);
        const QuadratureOptions opt;
        for (Complex target : {Complex(0.8, 0.6), Complex(-0.7, -0.5), Complex(0.3, 0.9)}) {
            BranchTracker b1;
            CVec3 two_leg = integrate_segment(e.strip, Complex(0, 0), Complex(target.real(), 0),
                                              opt, b1);
            two_leg += integrate_segment(e.strip, Complex(target.real(), 0), target, opt, b1);
            BranchTracker b2;
            const CVec3 diagonal = integrate_segment(e.strip, Complex(0, 0), target, opt, b2);
            INFO(name);
            CHECK((two_leg - diagonal).norm() <= 10.0 * opt.tol * (1.0 + diagonal.norm()));
        }
    }
}

TEST_CASE("finite-difference derivative consistency of the stored f'")
{
    CatalogEntry e = builtin("circle");
    SurfacePatch p21 = evaluate_patch(e.strip, grid(-1, 1, -1, 1, 21, 21));
    SurfacePatch p41 = evaluate_patch(e.strip, grid(-1, 1, -1, 1, 41, 41));
    auto xu_error = [](const SurfacePatch& p) {
        double worst = 0.0;
        const double du = p.grid().du();
        for (int k = 0; k < p.nv(); ++k)
            for (int j = 1; j + 1 < p.nu(); ++j) {
                const Vec3 fd = (p.X(j + 1, k) - p.X(j - 1, k)) / (2.0 * du);
                worst = std::max(worst, (fd - Vec3(p.fprime(j, k).real())).norm());
            }
        return worst;
    };
    const double factor = xu_error(p21) / xu_error(p41);
    CHECK(factor > 3.0);
    CHECK(factor < 5.0);
}

TEST_CASE("minimality report on closed-form patches")
{
    CatalogEntry enneper = builtin("enneper_cubic");
    SurfacePatch pe = evaluate_patch(enneper.strip, grid(-1, 1, -1, 1, 41, 41));
    GeometryReport re = minimality_report(pe, enneper.strip);
    CHECK(re.isotropy_max < 1e-12);
    CHECK(re.conformal_max < 1e-12);
    CHECK(re.boundary_curve_max < 1e-9);
    CHECK(re.boundary_normal_max < 1e-8);

    CatalogEntry circle = builtin("circle");
    SurfacePatch pc = evaluate_patch(circle.strip, grid(-kPi, kPi, -1, 1, 41, 41));
    GeometryReport rc = minimality_report(pc, circle.strip);
    CHECK(rc.isotropy_max < 1e-10);
    CHECK(rc.conformal_max < 1e-9);
    CHECK(rc.boundary_curve_max < 1e-9);
    CHECK(rc.boundary_normal_max < 1e-8);

    CatalogEntry plane = builtin("plane_line");
    SurfacePatch pp = evaluate_patch(plane.strip, grid(-1, 1, -1, 1, 21, 21));
    GeometryReport rp = minimality_report(pp, plane.strip);
    CHECK(rp.isotropy_max < 1e-14);
    CHECK(rp.conformal_max < 1e-14);
    CHECK(rp.laplacian_max < 1e-12);
    CHECK(rp.boundary_curve_max < 1e-13);
}

namespace {

// Max 5-point Laplacian over interior nodes restricted to the sublattice
// j, k = 0 mod stride, so coarse and halved grids sample identical points.
double laplacian_max_at(const SurfacePatch& p, int stride)
{
    const double du2 = p.grid().du() * p.grid().du();
    const double dv2 = p.grid().dv() * p.grid().dv();
    double worst = 0.0;
    for (int k = 1; k + 1 < p.nv(); ++k) {
        if (k % stride != 0) continue;
        for (int j = 1; j + 1 < p.nu(); ++j) {
            if (j % stride != 0) continue;
            const Vec3 lap = (p.X(j + 1, k) - 2.0 * p.X(j, k) + p.X(j - 1, k)) / du2 +
                             (p.X(j, k + 1) - 2.0 * p.X(j, k) + p.X(j, k - 1)) / dv2;
            worst = std::max(worst, lap.norm());
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("FD Laplacian drops by ~4x when the spacing halves")
{
    for (const char* name : {"circle", "catenary", "weak_cpg(2)"}) {
        CatalogEntry e = builtin(name);
        DomainGrid g = e.default_grid;
        g.nu = g.nv = 21;
        SurfacePatch coarse = evaluate_patch(e.strip, g);
        g.nu = g.nv = 41;
        SurfacePatch fine = evaluate_patch(e.strip, g);
        INFO(std::string(name));
        const double factor = laplacian_max_at(coarse, 1) / laplacian_max_at(fine, 2);
        CHECK(factor > 3.2);
        CHECK(factor < 4.8);
    }
}

TEST_CASE("adjoint patch identities")
{
    CatalogEntry e = builtin("enneper_cubic");
    SurfacePatch p = evaluate_patch(e.strip, grid(-1, 1, -1, 1, 11, 11));
    SurfacePatch adj = adjoint_patch(p);
    SurfacePatch adj2 = adjoint_patch(adj);
    for (int k = 0; k < p.nv(); ++k)
        for (int j = 0; j < p.nu(); ++j) {
            CHECK((adj.X(j, k) - p.Xstar(j, k)).norm() < 1e-14);
            CHECK((adj2.X(j, k) + p.X(j, k)).norm() < 1e-14);
            CHECK((adj.N(j, k) - p.N(j, k)).norm() < 1e-14);  // shared Gauss map
        }

    // Enneper adjoint along the data curve: (0, 0, -(t^3/3 + t))
    for (double t : {-0.8, 0.1, 0.9}) {
        const Vec3 xs = adj.eval_at(Complex(t, 0.0)).f.real();
        CHECK((xs - Vec3(0.0, 0.0, -(t * t * t / 3.0 + t))).norm() < 1e-10);
    }

    // catenoid adjoint along the data curve: (0, 0, -t)
    CatalogEntry c = builtin("circle");
    SurfacePatch pc = evaluate_patch(c.strip, grid(-kPi, kPi, -1, 1, 11, 11));
    SurfacePatch adjc = adjoint_patch(pc);
    for (double t : {-1.0, 0.4, 2.0}) {
        const Vec3 xs = adjc.eval_at(Complex(t, 0.0)).f.real();
        CHECK((xs - Vec3(0.0, 0.0, -t)).norm() < 1e-9);
    }
}

TEST_CASE("Gauss map equals the strip normal on the real axis")
{
    for (const char* name : {"circle", "enneper_cubic", "plane_line"}) {
        CatalogEntry e = builtin(name);
        SurfacePatch p = evaluate_patch(e.strip, e.default_grid);
        GeometryReport r = minimality_report(p, e.strip);
        INFO(name);
        CHECK(r.boundary_normal_max <= 1e-8);
    }
}

TEST_CASE("thread count does not change results")
{
    CatalogEntry e = builtin("catenary");
    DomainGrid g = e.default_grid;
    g.nu = g.nv = 17;
    SurfacePatch a = SurfacePatch::evaluate(e.strip, g, {}, 1);
    SurfacePatch b = SurfacePatch::evaluate(e.strip, g, {}, 5);
    for (int k = 0; k < g.nv; ++k)
        for (int j = 0; j < g.nu; ++j) {
            CHECK(a.f(j, k) == b.f(j, k));        // bitwise
            CHECK(a.fprime(j, k) == b.fprime(j, k));
        }
}

TEST_CASE("curve geometry along paths")
{
    AnalyticExpr s = AnalyticExpr::variable();
    AnalyticExpr zero = AnalyticExpr::constant(0.0);

    // the data curve of any patch is a geodesic: real axis on the catenoid
    CatalogEntry c = builtin("circle");
    SurfacePatch pc = evaluate_patch(c.strip, grid(-kPi, kPi, -1, 1, 21, 21));
    auto circle_geo = curve_on_surface_geometry(pc, s, zero, -3.0, 3.0, 41);
    for (const auto& rec : circle_geo) {
        CHECK(rec.kappa == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(rec.kappa_g) < 1e-8);
        CHECK(std::abs(std::abs(rec.kappa_n) - 1.0) < 1e-8);
    }

    // Enneper data curve: geodesic with curvature of the cubic
    CatalogEntry en = builtin("enneper_cubic");
    SurfacePatch pe = evaluate_patch(en.strip, grid(-1, 1, -1, 1, 21, 21));
    auto enneper_geo = curve_on_surface_geometry(pe, s, zero, -0.9, 0.9, 31);
    for (const auto& rec : enneper_geo) CHECK(std::abs(rec.kappa_g) < 1e-8);

    // straight line on the plane: zero curvature everywhere
    CatalogEntry pl = builtin("plane_line");
    SurfacePatch pp = evaluate_patch(pl.strip, grid(-1, 1, -1, 1, 11, 11));
    auto line_geo = curve_on_surface_geometry(pp, s, zero, -0.9, 0.9, 11);
    for (const auto& rec : line_geo) {
        CHECK(rec.zero_curvature);
        CHECK(rec.kappa == 0.0);
        CHECK(rec.kappa_g == 0.0);
        CHECK(rec.kappa_n == 0.0);
    }

    CHECK_THROWS_AS(curve_on_surface_geometry(pp, s, zero, -5.0, 5.0, 11), InputError);
}
