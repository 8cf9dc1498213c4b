#include <cmath>

#include "bjorling/catalog.hpp"
#include "bjorling/symmetry.hpp"
#include "doctest.h"

using namespace bjorling;

namespace {

SurfacePatch patch_of(const char* name, int n = 33)
{
    CatalogEntry e = builtin(name);
    DomainGrid g = e.default_grid;
    g.nu = g.nv = n;
    return evaluate_patch(e.strip, g);
}

}  // namespace

TEST_CASE("dihedral matrix identities hold to 1e-15")
{
    const Mat3 t = DihedralMatrices::T();
    const Mat3 l = DihedralMatrices::Lambda();
    CHECK(((t * t) - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(((l * l * l * l) - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((l.inverse() - t * l * t).cwiseAbs().maxCoeff() <= 1e-15);

    const CMat3 r = DihedralMatrices::R();
    CHECK(((r * r) - l.cast<Complex>()).cwiseAbs().maxCoeff() <= 1e-15);

    for (Complex w : {Complex(0.3, -1.2), Complex(-2.0, 0.5)}) {
        CHECK(std::abs(DihedralMatrices::rho(DihedralMatrices::rho(w)) -
                       DihedralMatrices::lambda(w)) <= 1e-15 * std::abs(w));
    }
}

TEST_CASE("reflection checks")
{
    SurfacePatch catenoid = patch_of("circle");
    auto reps = reflection_checks(catenoid);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].pass);
    CHECK(reps[0].residual <= 1e-9);
    CHECK(reps[1].pass);
    CHECK(reps[1].residual <= 1e-9);

    SurfacePatch enneper = patch_of("enneper_cubic");
    for (const auto& rep : reflection_checks(enneper)) {
        CHECK(rep.pass);
        CHECK(rep.residual <= 1e-9);
    }

    // plane through a normalized perpendicular symmetric line (the Y-axis):
    // X = (0, u, v), fixed by both reflections
    AnalyticExpr t = AnalyticExpr::variable();
    AnalyticCurve vline(AnalyticExpr::constant(0.0), t, AnalyticExpr::constant(0.0));
    SurfacePatch plane = evaluate_patch(make_planar_strip(vline), builtin("plane_line").default_grid);
    for (const auto& rep : reflection_checks(plane)) CHECK(rep.residual <= 1e-13);

    // asymmetric grid is rejected
    CatalogEntry e = builtin("circle");
    DomainGrid g = e.default_grid;
    g.u_min = 0.0;
    CHECK_THROWS_AS(reflection_checks(evaluate_patch(e.strip, g)), InputError);
}

TEST_CASE("Enneper point identity at w = 1+i: Lambda^2 T X(w) = X(-conj w)")
{
    SurfacePatch enneper = patch_of("enneper_cubic");
    const Vec3 lhs = DihedralMatrices::Lambda() * DihedralMatrices::Lambda() *
                     DihedralMatrices::T() * enneper.eval_at(Complex(1.0, 1.0)).f.real();
    const Vec3 rhs = enneper.eval_at(Complex(-1.0, 1.0)).f.real();
    CHECK((lhs - rhs).norm() <= 1e-9);
}

TEST_CASE("CPG extraction: circle gives the catenary")
{
    SurfacePatch catenoid = patch_of("circle");
    CpgExtraction cpg = extract_cpg(catenoid);
    CHECK(cpg.pass);
    CHECK(cpg.planarity_residual <= 1e-9);
    CHECK(cpg.symmetry_residual <= 1e-9);
    CHECK(!cpg.degenerate);
    for (std::size_t i = 0; i < cpg.t.size(); ++i) {
        const double t = cpg.t[i];
        CHECK((cpg.points[i] - Vec3(std::cosh(t), 0.0, t)).norm() <= 1e-8);
    }
    // nondegeneracy via the reversed vertex normal: c_hat''(0) = -c''(0)
    CHECK((cpg.second_derivative_at_vertex - Vec3(1, 0, 0)).norm() <= 1e-8);
}

TEST_CASE("CPG extraction: Enneper cubic maps to itself under Lambda")
{
    SurfacePatch enneper = patch_of("enneper_cubic");
    CpgExtraction cpg = extract_cpg(enneper);
    CHECK(cpg.pass);
    for (std::size_t i = 0; i < cpg.t.size(); ++i) {
        const double t = cpg.t[i];
        CHECK((cpg.points[i] - Vec3(-t * t, 0.0, t - t * t * t / 3.0)).norm() <= 1e-10);
    }
}

TEST_CASE("CPG extraction: parabola gives a planar perpendicular symmetric curve")
{
    SurfacePatch catalan = patch_of("parabola");
    CpgExtraction cpg = extract_cpg(catalan);
    CHECK(cpg.pass);
    CHECK(!cpg.degenerate);
}

TEST_CASE("self-CPG test is exact for Enneper with sigma = -1")
{
    SurfacePatch enneper = patch_of("enneper_cubic");
    SymmetryReport rep = self_cpg_test(enneper);
    CHECK(rep.pass);
    CHECK(rep.residual <= 1e-10);
    CHECK(rep.sign_sigma == -1);
    CHECK(rep.sign_s == +1);
}

TEST_CASE("self-CPG test fails for the catenoid")
{
    SurfacePatch catenoid = patch_of("circle");
    SymmetryReport rep = self_cpg_test(catenoid);
    CHECK(!rep.pass);
    CHECK(rep.residual > 0.1);
}

TEST_CASE("weak family member k=2 satisfies the self-CPG identity")
{
    SurfacePatch weak = patch_of("weak_cpg(2)");
    SymmetryReport rep = self_cpg_test(weak);
    CHECK(rep.pass);
    CHECK(rep.residual <= 1e-9);
    CHECK(rep.sign_sigma == -1);
}

TEST_CASE("diagonal line test agrees with the self-CPG verdicts (Prop 2.5)")
{
    struct Expectation {
        const char* name;
        bool expected;
    };
    for (auto [name, expected] : {Expectation{"enneper_cubic", true},
                                  Expectation{"circle", false},
                                  Expectation{"parabola", false},
                                  Expectation{"catenary", false},
                                  Expectation{"cycloid", false},
                                  Expectation{"ellipse", false},
                                  Expectation{"weak_cpg(2)", true}}) {
        SurfacePatch p = patch_of(name);
        SymmetryReport scpg = self_cpg_test(p);
        SymmetryReport diag = diagonal_line_test(p);
        INFO(std::string(name));
        CHECK(scpg.pass == expected);
        CHECK(diag.pass == expected);
        CHECK(scpg.pass == diag.pass);
    }
}

TEST_CASE("Enneper diagonals land on the expected lines")
{
    SurfacePatch enneper = patch_of("enneper_cubic");
    SymmetryReport rep = diagonal_line_test(enneper);
    CHECK(rep.pass);
    CHECK(rep.residual <= 1e-10);
    // X(t+it) = (0, -(2t^3/3 + t), 2t^3/3 + t) sits in (0, y, -y)
    const double t = 0.5;
    const Vec3 p = enneper.eval_at(Complex(t, t)).f.real();
    const double q = 2.0 * t * t * t / 3.0 + t;
    CHECK((p - Vec3(0.0, -q, q)).norm() <= 1e-10);
}

TEST_CASE("plane diagonals are straight but not on the symmetry lines")
{
    SurfacePatch plane = patch_of("plane_line");
    SymmetryReport rep = diagonal_line_test(plane);
    CHECK(!rep.pass);
}

TEST_CASE("D4 relations of the Enneper isotropic curve")
{
    SurfacePatch enneper = patch_of("enneper_cubic");
    auto reps = d4_d8_test(enneper);
    REQUIRE(reps.size() == 3);

    CHECK(reps[0].relation == "Lambda f(w) = f(lambda^sigma w)");
    CHECK(reps[0].pass);
    CHECK(reps[0].residual <= 1e-10);
    CHECK(reps[0].orientation == -1);

    CHECK(reps[1].relation == "T conj(f(w)) = f(conj w)");
    CHECK(reps[1].pass);
    CHECK(reps[1].residual <= 1e-10);

    // The literal complex D8 identity does not hold componentwise on this
    // normalization of f; self-adjointness is decided by registration below.
    CHECK(reps[2].relation == "R f(w) = f(rho^sigma w)");
    CHECK(reps[2].residual > 0.01);
}

TEST_CASE("catenoid D4 relations fail, only the T reflection holds")
{
    SurfacePatch catenoid = patch_of("circle");
    auto reps = d4_d8_test(catenoid);
    CHECK(reps[0].residual > 0.1);   // Lambda relation
    CHECK(reps[1].pass);             // T conj f = f(conj w) holds for real data
    CHECK(reps[1].residual <= 1e-9);
    CHECK(reps[2].residual > 0.1);
}

TEST_CASE("orthogonal registration recovers a known motion")
{
    std::vector<Vec3> src;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 3; ++k) src.push_back(Vec3(i * 0.3, j * 0.2 - 1.0, k * 0.7));
    const Mat3 rot = Eigen::AngleAxisd(0.8, Vec3(1, 2, -1).normalized()).toRotationMatrix();
    const Vec3 shift(0.4, -2.0, 1.5);
    std::vector<Vec3> dst;
    for (const Vec3& p : src) dst.push_back(2.5 * (rot * p) + shift);

    RigidFit rigid = fit_orthogonal(src, dst, true);
    CHECK((rigid.rotation - rot).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((rigid.translation - shift).norm() <= 1e-12);
    CHECK(rigid.scale == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(rigid.rms_normalized <= 1e-12);

    CHECK_THROWS_AS(fit_orthogonal({src[0], src[1]}, {dst[0], dst[1]}, false), InputError);
}

TEST_CASE("self-adjointness: Enneper passes and matches the reference generator")
{
    SurfacePatch enneper = patch_of("enneper_cubic");
    SelfAdjointResult res = self_adjoint_test(enneper);
    CHECK(res.pass);
    CHECK(res.residual <= 1e-6);
    CHECK(res.orthogonality_defect <= 1e-10);
    CHECK(res.matches_reference);
}

TEST_CASE("self-adjointness: catenoid fails with a large residual")
{
    SurfacePatch catenoid = patch_of("circle");
    SelfAdjointResult res = self_adjoint_test(catenoid);
    CHECK(!res.pass);
    CHECK(res.residual > 0.1);
}

TEST_CASE("self-adjointness: plane passes trivially")
{
    SurfacePatch plane = patch_of("plane_line");
    SelfAdjointResult res = self_adjoint_test(plane);
    CHECK(res.pass);
    CHECK(res.residual <= 1e-9);
}

TEST_CASE("self-adjointness: weak family k=2 passes")
{
    SurfacePatch weak = patch_of("weak_cpg(2)");
    SelfAdjointResult res = self_adjoint_test(weak);
    CHECK(res.pass);
    CHECK(res.residual <= 1e-6);
}

TEST_CASE("dihedral search: Enneper detects order 4 with the Lambda-type generator")
{
    SurfacePatch enneper = patch_of("enneper_cubic");
    DihedralSearchResult res = dihedral_search(enneper, 12, 1e-6, 1);
    CHECK(res.detected_order == 4);
    CHECK(res.generator_residual <= 1e-8);
    CHECK(!res.continuous);
    // x-flip composed with a quarter turn in the yz-plane
    CHECK(res.generator(0, 0) == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(std::abs(std::abs(res.rotation_angle) - kPi / 2) <= 1e-8);
    CHECK(res.claimed_order.value() == 4);
}

TEST_CASE("dihedral search: weak family k=2 detects order 12, not the claimed 6")
{
    SurfacePatch weak = patch_of("weak_cpg(2)");
    DihedralSearchResult res = dihedral_search(weak, 16, 1e-6, 2);
    CHECK(res.detected_order == 12);
    CHECK(res.generator_residual <= 1e-6);
    for (int m : {2, 3, 4, 6, 12}) {
        INFO(m);
        CHECK(std::find(res.passing_orders.begin(), res.passing_orders.end(), m) !=
              res.passing_orders.end());
    }
    CHECK(res.claimed_order.value() == 6);
    CHECK(!res.matches_claim);
    CHECK(std::abs(std::abs(res.rotation_angle) - kPi / 6) <= 1e-6);
}

TEST_CASE("dihedral search: plane reports a continuous family")
{
    SurfacePatch plane = patch_of("plane_line");
    DihedralSearchResult res = dihedral_search(plane, 10, 1e-6);
    CHECK(res.continuous);
    CHECK(res.detected_order == 10);
    CHECK(res.note.find("continuous") != std::string::npos);
}

TEST_CASE("congruence recovers an applied motion of the catenoid")
{
    SurfacePatch catenoid = patch_of("circle", 21);
    const Mat3 rot = Eigen::AngleAxisd(0.6, Vec3(0.2, -1.0, 0.4).normalized()).toRotationMatrix();
    const Vec3 shift(1.0, 2.0, -0.5);
    SurfacePatch moved = catenoid.transformed(rot, shift);

    CongruenceResult res = congruence_test(catenoid, moved, false, 1e-8);
    CHECK(res.pass);
    CHECK(res.residual <= 1e-8);
    CHECK(res.scale == 1.0);
    CHECK((res.rotation - rot).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((res.translation - shift).norm() <= 1e-8);

    // reflexive and symmetric; transitive on the catenoid triple
    CHECK(congruence_test(catenoid, catenoid, false, 1e-8).pass);
    CHECK(congruence_test(moved, catenoid, false, 1e-8).pass);
    SurfacePatch rotated_only = catenoid.transformed(rot, Vec3::Zero());
    CHECK(congruence_test(rotated_only, moved, false, 1e-8).pass);
}

TEST_CASE("congruence rejects catenoid vs Enneper")
{
    SurfacePatch catenoid = patch_of("circle", 21);
    SurfacePatch enneper = patch_of("enneper_cubic", 21);
    CongruenceResult res = congruence_test(catenoid, enneper, false, 1e-8);
    CHECK(!res.pass);
    CHECK(res.residual > 0.1);

    CongruenceResult scaled = congruence_test(catenoid, enneper, true, 1e-8);
    CHECK(!scaled.pass);
    CHECK(scaled.residual > 0.1);
}

TEST_CASE("congruence requires matching grids")
{
    SurfacePatch a = patch_of("circle", 21);
    SurfacePatch b = patch_of("circle", 33);
    CHECK_THROWS_AS(congruence_test(a, b, false, 1e-8), InputError);
}

TEST_CASE("theorem on the adjoint of a self-CPG patch (Enneper)")
{
    SurfacePatch enneper = patch_of("enneper_cubic");
    TheoremMainReport rep = theorem_main_check(enneper);
    CHECK(rep.pass);
    CHECK(rep.planarity_residual <= 1e-8);
    CHECK(rep.perpendicularity_residual <= 1e-8);
    CHECK(rep.self_cpg_residual <= 1e-8);
}

TEST_CASE("adjoint real-axis image is a straight arc for planar geodesics")
{
    for (const char* name : {"circle", "catenary", "parabola", "cycloid", "ellipse",
                             "enneper_cubic", "weak_cpg(2)", "plane_line"}) {
        SurfacePatch p = patch_of(name);
        AdjointLineReport rep = prop23_straight_arc_check(p);
        INFO(std::string(name));
        CHECK(rep.pass);
        CHECK(rep.collinearity <= 1e-8);
    }

    // the helicoid's data line is a straight arc, not a planar geodesic:
    // its adjoint real-axis image is the catenoid circle, far from straight
    SurfacePatch helicoid = patch_of("line_rotating_normal");
    AdjointLineReport rep = prop23_straight_arc_check(helicoid);
    CHECK(!rep.pass);
    CHECK(rep.collinearity > 0.1);
}

TEST_CASE("collinearity and planarity residuals on synthetic clouds")
{
    std::vector<Vec3> line, plane_pts;
    for (int i = 0; i < 20; ++i) {
        line.push_back(Vec3(0.5 * i, -0.25 * i, i));
        plane_pts.push_back(Vec3(0.3 * i, std::sin(0.4 * i), 0.0));
    }
    CHECK(collinearity_residual(line) <= 1e-14);
    CHECK(planarity_residual(plane_pts) <= 1e-14);
    CHECK(collinearity_residual(plane_pts) > 0.1);
}
