#pragma once

#include <vector>

#include "bjorling/patch.hpp"

namespace bjorling {

/// Quantitative minimal-surface residuals of a patch. All entries are
/// nonnegative; isotropy and conformality are normalized by max ||f'||^2,
/// the finite-difference Laplacian by max ||f'||. Boundary residuals are NaN
/// when the grid misses the real segment or the patch gauge is not 1.
struct GeometryReport {
    double isotropy_max = 0.0;
    double conformal_max = 0.0;
    double laplacian_max = 0.0;
    double boundary_curve_max = 0.0;
    double boundary_normal_max = 0.0;
};

GeometryReport minimality_report(const SurfacePatch& patch, const Strip& strip,
                                 int boundary_samples = 50);

struct CurveGeometrySample {
    double s = 0.0;
    Vec3 point = Vec3::Zero();
    double kappa = 0.0;
    double kappa_g = 0.0;
    double kappa_n = 0.0;
    double theta = 0.0;  // angle between surface normal and curve principal normal
    bool zero_curvature = false;
};

/// Frenet data of c(s) = X(gamma(s)) along a path gamma = (gu, gv) in the
/// parameter plane, differentiated analytically through the chain rule, with
/// theta measured against the patch Gauss map: kappa_g = kappa sin(theta),
/// kappa_n = kappa cos(theta). Samples with kappa < 1e-12 are flagged
/// zero-curvature (theta undefined, curvatures reported as zero).
std::vector<CurveGeometrySample> curve_on_surface_geometry(const SurfacePatch& patch,
                                                           const AnalyticExpr& gamma_u,
                                                           const AnalyticExpr& gamma_v, double s0,
                                                           double s1, int samples);

}  // namespace bjorling
