#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bjorling/patch.hpp"
#include "bjorling/strip.hpp"

namespace bjorling {

/// The two dihedral representations working together: domain maps on C and
/// orthogonal matrices on R^3 (plus the D8 generator on C^3).
struct DihedralMatrices {
    static Mat3 T();                       // reflection z -> -z
    static Mat3 Lambda();                  // x-flip composed with 90-degree yz-rotation
    static CMat3 R();                      // D8 generator on the isotropic curve
    static Mat3 R_real();                  // R acting X* -> X(rho w): the i entry acts as -1
    static Mat3 LambdaK(int k);            // claimed family generator, block angle pi/(2n), n = 2k+2
    static Complex tau(Complex w) { return std::conj(w); }
    static Complex lambda(Complex w) { return Complex(0.0, 1.0) * w; }
    static Complex rho(Complex w);         // e^{i pi/4} w
    static std::array<Mat3, 8> d4_elements();  // {Lambda^j, Lambda^j T}
};

struct SymmetryReport {
    std::string relation;
    double residual = 0.0;   // max over samples, normalized by sample extent
    int orientation = +1;    // +1 for the map, -1 for its inverse, where applicable
    int sign_sigma = +1;     // parameter reversal sign (self-CPG)
    int sign_s = +1;         // matrix sign (self-CPG)
    bool pass = false;
    std::string note;
};

/// Schwarz-reflection residuals on stored grid values:
///   X(conj w) = T X(w)  and  X(-conj w) = Lambda^2 T X(w).
/// Requires the grid symmetric about both axes (nodes map to nodes).
std::vector<SymmetryReport> reflection_checks(const SurfacePatch& patch,
                                              double tol = defaults::check_tol);

struct CpgExtraction {
    std::vector<double> t;
    std::vector<Vec3> points;          // c_hat(t) = X(it)
    double planarity_residual = 0.0;   // max |y| / extent
    double symmetry_residual = 0.0;    // x even / z odd violation / extent
    Vec3 vertex = Vec3::Zero();
    Vec3 second_derivative_at_vertex = Vec3::Zero();
    bool degenerate = true;
    bool pass = false;
};

/// Samples the conjugated perpendicular geodesic along the imaginary axis and
/// verifies it is a planar perpendicular symmetric curve in the XZ-plane.
CpgExtraction extract_cpg(const SurfacePatch& patch, int t_samples = 81,
                          double tol = defaults::check_tol);

/// Minimizes max_t ||X(it) - s Lambda X(sigma t)|| over sigma, s in {+-1}.
SymmetryReport self_cpg_test(const SurfacePatch& patch, double tol = defaults::check_tol,
                             int t_samples = 81);

/// Tests whether X(t+it), X(t-it) land on the lines (0,y,y) and (0,y,-y)
/// under the best assignment; also reports the perpendicularity of the two
/// image directions at t = 0 in the note.
SymmetryReport diagonal_line_test(const SurfacePatch& patch, double tol = defaults::check_tol,
                                  int t_samples = 81);

/// Residuals of the isotropic-curve relations
///   Lambda f(w) = f(lambda^sigma w),  T conj(f(w)) = f(tau w),
///   R f(w) = f(rho^sigma w),
/// each over subsampled grid nodes whose mapped point stays in the grid,
/// with both orientations tried where applicable.
std::vector<SymmetryReport> d4_d8_test(const SurfacePatch& patch,
                                       double tol = defaults::check_tol, int max_axis_points = 33);

struct RigidFit {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    double scale = 1.0;
    double rms = 0.0;             // absolute RMS misfit
    double rms_normalized = 0.0;  // RMS misfit / RMS spread of the target cloud
};

/// Least-squares orthogonal registration dst ~ scale * R * src + t over known
/// correspondences (Procrustes via SVD; R in O(3), reflections allowed).
/// Throws InputError on fewer than 3 points or zero spread.
RigidFit fit_orthogonal(const std::vector<Vec3>& src, const std::vector<Vec3>& dst,
                        bool allow_scale);

struct SelfAdjointResult {
    bool pass = false;
    int rho_orientation = +1;
    Mat3 fitted_rotation = Mat3::Identity();
    Vec3 fitted_translation = Vec3::Zero();
    double residual = 0.0;            // normalized RMS registration misfit
    double orthogonality_defect = 0.0;
    bool matches_reference = false;   // fitted R equals R_real composed with a D4 element
    Mat3 matched_reference = Mat3::Identity();
    std::string note;
};

/// Registration test of X*(w) against X(rho^sigma w) for both orientations of
/// rho; passes when the best rigid fit leaves a residual within tol and the
/// fitted matrix is orthogonal. The fitted matrix is compared to the
/// reference rotation up to composition with a D4 element.
SelfAdjointResult self_adjoint_test(const SurfacePatch& patch,
                                    double tol = defaults::registration_tol,
                                    int max_axis_points = 33);

struct DihedralSearchResult {
    std::vector<std::pair<int, double>> residuals;  // (m, normalized residual)
    std::vector<int> passing_orders;
    int detected_order = 0;
    Mat3 generator = Mat3::Identity();
    double generator_residual = 0.0;
    double rotation_angle = 0.0;  // fitted yz-block angle of the generator
    bool continuous = false;      // every tested order passed
    std::optional<int> claimed_order;
    double claimed_angle = 0.0;
    bool matches_claim = false;
    std::string note;
};

/// For each domain rotation angle 2 pi / m, m <= max_order, fits the best
/// orthogonal A with X(e^{i theta} w) ~ A X(w) and reports every order within
/// tol plus the largest one. When family_k is given the fitted generator is
/// compared against the claimed D_{2k+2} generator.
DihedralSearchResult dihedral_search(const SurfacePatch& patch, int max_order = 16,
                                     double tol = defaults::registration_tol,
                                     std::optional<int> family_k = std::nullopt,
                                     int max_axis_points = 33);

struct CongruenceResult {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    double scale = 1.0;  // exactly 1 unless allow_scale
    double residual = 0.0;
    bool pass = false;
};

/// Sampled congruence check: registration over grid-index correspondences.
/// This is a sufficient sampled test, not a proof of surface congruence.
CongruenceResult congruence_test(const SurfacePatch& a, const SurfacePatch& b,
                                 bool allow_scale = false, double tol = defaults::check_tol);

struct TheoremMainReport {
    double planarity_residual = 0.0;         // worse diagonal, sigma_3 / spread
    double perpendicularity_residual = 0.0;  // |<d+, d->| / (|d+||d-|) at t = 0
    double self_cpg_residual = 0.0;          // c_hat* vs +-Lambda c*(+-t)
    bool pass = false;
};

/// On the adjoint patch: the diagonal curves X*(t+-it) are planar, meet
/// perpendicularly at the vertex, and satisfy the self-CPG relation.
TheoremMainReport theorem_main_check(const SurfacePatch& patch, double tol = defaults::check_tol,
                                     int t_samples = 61);

/// sigma_2 / spread of the centered sample cloud (0 for a straight arc).
double collinearity_residual(const std::vector<Vec3>& points);
/// sigma_3 / spread of the centered sample cloud (0 for a planar set).
double planarity_residual(const std::vector<Vec3>& points);

struct AdjointLineReport {
    double collinearity = 0.0;
    bool pass = false;
    std::vector<Vec3> points;
};

/// Real-axis image of the adjoint surface, checked for collinearity.
AdjointLineReport prop23_straight_arc_check(const SurfacePatch& patch,
                                            double tol = defaults::check_tol, int samples = 61);

}  // namespace bjorling
