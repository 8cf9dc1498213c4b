#include "bjorling/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bjorling {

namespace {

constexpr double kTiny = 1e-300;

double extent_of(double acc, const Vec3& v) { return std::max(acc, v.norm()); }
double extent_of(double acc, const CVec3& v) { return std::max(acc, v.norm()); }

/// Indices 0, s, 2s, ... with at most max_count entries.
std::vector<int> stride_indices(int n, int max_count)
{
    const int stride = std::max(1, (n + max_count - 1) / max_count);
    std::vector<int> idx;
    for (int i = 0; i < n; i += stride) idx.push_back(i);
    return idx;
}

double symmetric_real_extent(const DomainGrid& g) { return std::min(-g.u_min, g.u_max); }
double symmetric_imag_extent(const DomainGrid& g) { return std::min(-g.v_min, g.v_max); }

struct LineSamples {
    std::vector<double> t;   // size 2*n_half + 1, ascending
    std::vector<CVec3> f;
    std::vector<CVec3> fprime;
    CVec3 fsecond_at_0 = CVec3::Zero();
};

/// f along the ray family dir * t, t in [-r, r], sampled outward from 0 in
/// two path-ordered sweeps.
LineSamples sample_line(const SurfacePatch& patch, Complex dir, double r, int n_half,
                        bool with_second = false)
{
    LineSamples out;
    const int count = 2 * n_half + 1;
    out.t.resize(count);
    out.f.resize(count);
    out.fprime.resize(count);

    PathEvaluator up = patch.evaluator();
    auto origin = up.advance(Complex(0.0, 0.0), with_second);
    out.t[n_half] = 0.0;
    out.f[n_half] = origin.f;
    out.fprime[n_half] = origin.fprime;
    out.fsecond_at_0 = origin.fsecond;
    PathEvaluator down = patch.evaluator();
    down.advance(Complex(0.0, 0.0));

    for (int j = 1; j <= n_half; ++j) {
        const double t = r * j / double(n_half);
        auto sp = up.advance(dir * t);
        out.t[n_half + j] = t;
        out.f[n_half + j] = sp.f;
        out.fprime[n_half + j] = sp.fprime;
        auto sm = down.advance(dir * (-t));
        out.t[n_half - j] = -t;
        out.f[n_half - j] = sm.f;
        out.fprime[n_half - j] = sm.fprime;
    }
    return out;
}

/// Subsampled grid nodes whose image under `map` stays inside the grid,
/// paired with freshly evaluated f at the image.
struct MappedSamples {
    std::vector<CVec3> f_w;
    std::vector<CVec3> f_mapped;
    std::vector<Complex> w;
};

template <typename MapFn>
MappedSamples mapped_samples(const SurfacePatch& patch, MapFn map, int max_axis_points)
{
    MappedSamples out;
    const DomainGrid& g = patch.grid();
    const auto js = stride_indices(g.nu, max_axis_points);
    const auto ks = stride_indices(g.nv, max_axis_points);
    for (int k : ks) {
        for (int j : js) {
            const Complex w = g.node(j, k);
            const Complex m = map(w);
            if (!g.contains(m)) continue;
            out.w.push_back(w);
            out.f_w.push_back(patch.f(j, k));
            out.f_mapped.push_back(patch.eval_at(m).f);
        }
    }
    return out;
}

bool vertex_at_origin(const SurfacePatch& patch)
{
    BranchTracker branch;
    const Vec3 c0 = patch.strip().curve().point(Complex(0.0, 0.0), &branch).real();
    return c0.norm() <= 1e-9;
}

}  // namespace

Mat3 DihedralMatrices::T()
{
    Mat3 m = Mat3::Identity();
    m(2, 2) = -1.0;
    return m;
}

Mat3 DihedralMatrices::Lambda()
{
    Mat3 m = Mat3::Zero();
    m(0, 0) = -1.0;
    m(1, 2) = -1.0;
    m(2, 1) = 1.0;
    return m;
}

CMat3 DihedralMatrices::R()
{
    CMat3 m = CMat3::Zero();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    m(0, 0) = Complex(0.0, 1.0);
    m(1, 1) = inv_sqrt2;
    m(1, 2) = -inv_sqrt2;
    m(2, 1) = inv_sqrt2;
    m(2, 2) = inv_sqrt2;
    return m;
}

Mat3 DihedralMatrices::R_real()
{
    Mat3 m = Mat3::Zero();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    m(0, 0) = -1.0;
    m(1, 1) = inv_sqrt2;
    m(1, 2) = -inv_sqrt2;
    m(2, 1) = inv_sqrt2;
    m(2, 2) = inv_sqrt2;
    return m;
}

Mat3 DihedralMatrices::LambdaK(int k)
{
    const int n = 2 * k + 2;
    const double a = kPi / (2.0 * n);
    Mat3 m = Mat3::Zero();
    m(0, 0) = -1.0;
    m(1, 1) = std::cos(a);
    m(1, 2) = -std::sin(a);
    m(2, 1) = std::sin(a);
    m(2, 2) = std::cos(a);
    return m;
}

Complex DihedralMatrices::rho(Complex w)
{
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return Complex(inv_sqrt2, inv_sqrt2) * w;
}

std::array<Mat3, 8> DihedralMatrices::d4_elements()
{
    std::array<Mat3, 8> out;
    Mat3 p = Mat3::Identity();
    for (int j = 0; j < 4; ++j) {
        out[j] = p;
        out[4 + j] = p * T();
        p = Lambda() * p;
    }
    return out;
}

std::vector<SymmetryReport> reflection_checks(const SurfacePatch& patch, double tol)
{
    const DomainGrid& g = patch.grid();
    const double uspan = g.u_max - g.u_min, vspan = g.v_max - g.v_min;
    if (std::abs(g.u_min + g.u_max) > 1e-12 * uspan || std::abs(g.v_min + g.v_max) > 1e-12 * vspan)
        throw InputError("reflection_checks: grid must be symmetric about both axes");

    const Mat3 t_mat = DihedralMatrices::T();
    Mat3 l2t = DihedralMatrices::Lambda() * DihedralMatrices::Lambda() * t_mat;

    double res_t = 0.0, res_l2t = 0.0, extent = kTiny;
    for (int k = 0; k < g.nv; ++k) {
        for (int j = 0; j < g.nu; ++j) {
            const Vec3& x = patch.X(j, k);
            extent = extent_of(extent, x);
            res_t = std::max(res_t, (patch.X(j, g.nv - 1 - k) - t_mat * x).norm());
            res_l2t = std::max(res_l2t, (patch.X(g.nu - 1 - j, k) - l2t * x).norm());
        }
    }

    std::vector<SymmetryReport> out(2);
    out[0].relation = "X(conj w) = T X(w)";
    out[0].residual = res_t / extent;
    out[0].pass = out[0].residual <= tol;
    out[1].relation = "X(-conj w) = Lambda^2 T X(w)";
    out[1].residual = res_l2t / extent;
    out[1].pass = out[1].residual <= tol;
    return out;
}

CpgExtraction extract_cpg(const SurfacePatch& patch, int t_samples, double tol)
{
    const DomainGrid& g = patch.grid();
    if (!(g.u_min <= 0.0 && 0.0 <= g.u_max))
        throw InputError("extract_cpg: imaginary axis does not lie in the grid");
    const double r = symmetric_imag_extent(g);
    if (r <= 0.0) throw InputError("extract_cpg: grid has no symmetric imaginary segment");

    const int n_half = std::max(1, t_samples / 2);
    LineSamples line = sample_line(patch, Complex(0.0, 1.0), r, n_half, true);

    CpgExtraction out;
    out.t = line.t;
    out.points.reserve(line.f.size());
    double extent = 1e-30;
    for (const CVec3& f : line.f) {
        out.points.push_back(f.real());
        extent = extent_of(extent, out.points.back());
    }

    double planarity = 0.0, symmetry = 0.0;
    const int count = int(out.points.size());
    for (int i = 0; i < count; ++i) {
        planarity = std::max(planarity, std::abs(out.points[i].y()));
        const Vec3& p = out.points[i];
        const Vec3& q = out.points[count - 1 - i];  // parameter -t
        symmetry = std::max(symmetry, std::abs(q.x() - p.x()));
        symmetry = std::max(symmetry, std::abs(q.z() + p.z()));
    }
    out.planarity_residual = planarity / extent;
    out.symmetry_residual = symmetry / extent;
    out.vertex = out.points[n_half];

    // c_hat''(0) = Re(f''(0) * i^2) = -Re f''(0); equals -c''(0) on the data curve.
    out.second_derivative_at_vertex = -line.fsecond_at_0.real();
    out.degenerate = out.second_derivative_at_vertex.norm() <= 1e-10;
    out.pass = out.planarity_residual <= tol && out.symmetry_residual <= tol;
    return out;
}

SymmetryReport self_cpg_test(const SurfacePatch& patch, double tol, int t_samples)
{
    const DomainGrid& g = patch.grid();
    const double r = std::min(symmetric_real_extent(g), symmetric_imag_extent(g));
    if (r <= 0.0)
        throw InputError("self_cpg_test: grid has no symmetric real and imaginary segments");

    const int n_half = std::max(1, t_samples / 2);
    LineSamples imag = sample_line(patch, Complex(0.0, 1.0), r, n_half);
    LineSamples real = sample_line(patch, Complex(1.0, 0.0), r, n_half);

    const Mat3 lambda = DihedralMatrices::Lambda();
    const int count = 2 * n_half + 1;
    double extent = kTiny;
    for (int i = 0; i < count; ++i) {
        extent = extent_of(extent, Vec3(imag.f[i].real()));
        extent = extent_of(extent, Vec3(real.f[i].real()));
    }

    SymmetryReport rep;
    rep.relation = "X(it) = s Lambda X(sigma t)";
    rep.residual = std::numeric_limits<double>::infinity();
    for (int sigma : {+1, -1}) {
        for (int s : {+1, -1}) {
            double worst = 0.0;
            for (int i = 0; i < count; ++i) {
                const int src = sigma > 0 ? i : count - 1 - i;
                const Vec3 rhs = double(s) * (lambda * real.f[src].real());
                worst = std::max(worst, (imag.f[i].real() - rhs).norm());
            }
            worst /= extent;
            if (worst < rep.residual) {
                rep.residual = worst;
                rep.sign_sigma = sigma;
                rep.sign_s = s;
            }
        }
    }
    rep.pass = rep.residual <= tol;
    return rep;
}

SymmetryReport diagonal_line_test(const SurfacePatch& patch, double tol, int t_samples)
{
    const DomainGrid& g = patch.grid();
    const double r = std::min(symmetric_real_extent(g), symmetric_imag_extent(g));
    if (r <= 0.0) throw InputError("diagonal_line_test: diagonal segments do not lie in the grid");

    const int n_half = std::max(1, t_samples / 2);
    LineSamples plus = sample_line(patch, Complex(1.0, 1.0), r, n_half);
    LineSamples minus = sample_line(patch, Complex(1.0, -1.0), r, n_half);

    double extent = kTiny;
    const int count = 2 * n_half + 1;
    for (int i = 0; i < count; ++i) {
        extent = extent_of(extent, Vec3(plus.f[i].real()));
        extent = extent_of(extent, Vec3(minus.f[i].real()));
    }

    // Membership of a sample set in the line (0, y, sy) for s = +-1.
    auto line_residual = [&](const LineSamples& ls, double s) {
        double worst = 0.0;
        for (int i = 0; i < count; ++i) {
            const Vec3 p = ls.f[i].real();
            worst = std::max(worst, std::abs(p.x()));
            worst = std::max(worst, std::abs(p.y() * s - p.z()));
        }
        return worst;
    };

    const double assign_a = std::max(line_residual(plus, +1.0), line_residual(minus, -1.0));
    const double assign_b = std::max(line_residual(plus, -1.0), line_residual(minus, +1.0));

    SymmetryReport rep;
    rep.relation = "X(t+-it) in the lines (0,y,y), (0,y,-y)";
    rep.residual = std::min(assign_a, assign_b) / extent;
    rep.orientation = assign_a <= assign_b ? +1 : -1;
    rep.pass = rep.residual <= tol;

    const Vec3 dplus = (plus.fprime[n_half] * Complex(1.0, 1.0)).real();
    const Vec3 dminus = (minus.fprime[n_half] * Complex(1.0, -1.0)).real();
    const double denom = std::max(dplus.norm() * dminus.norm(), kTiny);
    rep.note = "perpendicularity |<d+,d->|/(|d+||d-|) = " +
               std::to_string(std::abs(dplus.dot(dminus)) / denom);
    return rep;
}

std::vector<SymmetryReport> d4_d8_test(const SurfacePatch& patch, double tol, int max_axis_points)
{
    std::vector<SymmetryReport> out;
    const bool centered = vertex_at_origin(patch);

    const Mat3 lambda = DihedralMatrices::Lambda();
    const Mat3 t_mat = DihedralMatrices::T();
    const CMat3 r_mat = DihedralMatrices::R();

    auto run_two_orientations = [&](const char* relation, auto map_for,
                                    auto lhs_of) -> SymmetryReport {
        SymmetryReport rep;
        rep.relation = relation;
        rep.residual = std::numeric_limits<double>::infinity();
        for (int sigma : {+1, -1}) {
            MappedSamples ms = mapped_samples(patch, map_for(sigma), max_axis_points);
            if (ms.w.empty()) continue;
            double worst = 0.0, extent = kTiny;
            for (std::size_t i = 0; i < ms.w.size(); ++i) {
                const CVec3 lhs = lhs_of(ms.f_w[i]);
                worst = std::max(worst, (lhs - ms.f_mapped[i]).norm());
                extent = extent_of(extent, lhs);
                extent = extent_of(extent, ms.f_mapped[i]);
            }
            worst /= extent;
            if (worst < rep.residual) {
                rep.residual = worst;
                rep.orientation = sigma;
            }
        }
        rep.pass = rep.residual <= tol;
        if (!centered) rep.note = "warning: data vertex not at the origin";
        return rep;
    };

    out.push_back(run_two_orientations(
        "Lambda f(w) = f(lambda^sigma w)",
        [](int sigma) {
            return [sigma](Complex w) { return Complex(0.0, double(sigma)) * w; };
        },
        [&](const CVec3& f) -> CVec3 { return lambda.cast<Complex>() * f; }));

    {
        SymmetryReport rep;
        rep.relation = "T conj(f(w)) = f(conj w)";
        MappedSamples ms =
            mapped_samples(patch, [](Complex w) { return std::conj(w); }, max_axis_points);
        double worst = 0.0, extent = kTiny;
        for (std::size_t i = 0; i < ms.w.size(); ++i) {
            const CVec3 lhs = t_mat.cast<Complex>() * ms.f_w[i].conjugate();
            worst = std::max(worst, (lhs - ms.f_mapped[i]).norm());
            extent = extent_of(extent, lhs);
            extent = extent_of(extent, ms.f_mapped[i]);
        }
        rep.residual = ms.w.empty() ? std::numeric_limits<double>::infinity() : worst / extent;
        rep.pass = rep.residual <= tol;
        if (!centered) rep.note = "warning: data vertex not at the origin";
        out.push_back(rep);
    }

    out.push_back(run_two_orientations(
        "R f(w) = f(rho^sigma w)",
        [](int sigma) {
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            const Complex r(inv_sqrt2, sigma > 0 ? inv_sqrt2 : -inv_sqrt2);
            return [r](Complex w) { return r * w; };
        },
        [&](const CVec3& f) -> CVec3 { return r_mat * f; }));

    return out;
}

RigidFit fit_orthogonal(const std::vector<Vec3>& src, const std::vector<Vec3>& dst,
                        bool allow_scale)
{
    if (src.size() != dst.size()) throw InputError("fit_orthogonal: size mismatch");
    const std::size_t n = src.size();
    if (n < 3) throw InputError("fit_orthogonal: degenerate point set (fewer than 3 points)");

    Vec3 mean_src = Vec3::Zero(), mean_dst = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        mean_src += src[i];
        mean_dst += dst[i];
    }
    mean_src /= double(n);
    mean_dst /= double(n);

    Mat3 cov = Mat3::Zero();
    double var_src = 0.0, var_dst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 a = src[i] - mean_src;
        const Vec3 b = dst[i] - mean_dst;
        cov += b * a.transpose();
        var_src += a.squaredNorm();
        var_dst += b.squaredNorm();
    }
    cov /= double(n);
    var_src /= double(n);
    var_dst /= double(n);
    if (var_src < 1e-30 || var_dst < 1e-30)
        throw InputError("fit_orthogonal: degenerate point set (zero spread)");

    Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RigidFit fit;
    fit.rotation = svd.matrixU() * svd.matrixV().transpose();
    fit.scale = allow_scale ? svd.singularValues().sum() / var_src : 1.0;
    fit.translation = mean_dst - fit.scale * (fit.rotation * mean_src);

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        ss += (dst[i] - (fit.scale * (fit.rotation * src[i]) + fit.translation)).squaredNorm();
    fit.rms = std::sqrt(ss / double(n));
    fit.rms_normalized = fit.rms / std::sqrt(var_dst);
    return fit;
}

SelfAdjointResult self_adjoint_test(const SurfacePatch& patch, double tol, int max_axis_points)
{
    const DomainGrid& g = patch.grid();
    const auto js = stride_indices(g.nu, max_axis_points);
    const auto ks = stride_indices(g.nv, max_axis_points);

    SelfAdjointResult best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int sigma : {+1, -1}) {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const Complex r(inv_sqrt2, sigma > 0 ? inv_sqrt2 : -inv_sqrt2);
        std::vector<Vec3> src, dst;
        for (int k : ks) {
            for (int j : js) {
                const Complex w = g.node(j, k);
                const Complex m = r * w;
                if (!g.contains(m)) continue;
                src.push_back(patch.Xstar(j, k));
                dst.push_back(patch.eval_at(m).f.real());
            }
        }
        if (src.size() < 3) continue;
        RigidFit fit = fit_orthogonal(src, dst, false);
        if (fit.rms_normalized < best.residual) {
            best.residual = fit.rms_normalized;
            best.rho_orientation = sigma;
            best.fitted_rotation = fit.rotation;
            best.fitted_translation = fit.translation;
        }
    }
    if (!std::isfinite(best.residual))
        throw InputError("self_adjoint_test: no usable sample points (rho image leaves the grid)");

    best.orthogonality_defect =
        (best.fitted_rotation.transpose() * best.fitted_rotation - Mat3::Identity())
            .cwiseAbs()
            .maxCoeff();
    best.pass = best.residual <= tol && best.orthogonality_defect <= 1e-8;

    const Mat3 reference = DihedralMatrices::R_real();
    double bestdiff = std::numeric_limits<double>::infinity();
    for (const Mat3& d : DihedralMatrices::d4_elements()) {
        for (const Mat3& candidate : {Mat3(reference * d), Mat3(d * reference)}) {
            const double diff = (best.fitted_rotation - candidate).cwiseAbs().maxCoeff();
            if (diff < bestdiff) {
                bestdiff = diff;
                best.matched_reference = candidate;
            }
        }
    }
    best.matches_reference = bestdiff <= 1e-6;
    best.note = best.matches_reference
                    ? "fitted rotation matches the reference generator up to a D4 element"
                    : "fitted rotation differs from the reference generator (max diff " +
                          std::to_string(bestdiff) + ")";
    return best;
}

DihedralSearchResult dihedral_search(const SurfacePatch& patch, int max_order, double tol,
                                     std::optional<int> family_k, int max_axis_points)
{
    const DomainGrid& g = patch.grid();
    const double r_disc =
        0.9 * std::min(std::min(-g.u_min, g.u_max), std::min(-g.v_min, g.v_max));
    if (r_disc <= 0.0)
        throw InputError("dihedral_search: grid must contain a disc centered at the origin");

    const auto js = stride_indices(g.nu, max_axis_points);
    const auto ks = stride_indices(g.nv, max_axis_points);
    std::vector<Complex> ws;
    std::vector<Vec3> src;
    for (int k : ks) {
        for (int j : js) {
            const Complex w = g.node(j, k);
            if (std::abs(w) > r_disc) continue;
            ws.push_back(w);
            src.push_back(patch.X(j, k));
        }
    }
    if (src.size() < 3) throw InputError("dihedral_search: too few sample points in the disc");

    DihedralSearchResult out;
    for (int m = 2; m <= max_order; ++m) {
        const double theta = 2.0 * kPi / m;
        const Complex rot(std::cos(theta), std::sin(theta));
        std::vector<Vec3> dst;
        dst.reserve(ws.size());
        for (const Complex& w : ws) dst.push_back(patch.eval_at(rot * w).f.real());
        RigidFit fit = fit_orthogonal(src, dst, false);
        out.residuals.emplace_back(m, fit.rms_normalized);
        if (fit.rms_normalized <= tol) {
            out.passing_orders.push_back(m);
            if (m > out.detected_order) {
                out.detected_order = m;
                out.generator = fit.rotation;
                out.generator_residual = fit.rms_normalized;
            }
        }
    }

    out.continuous = int(out.passing_orders.size()) == std::max(0, max_order - 1);
    if (out.continuous) out.note = "order > max_order (continuous rotation family)";

    if (out.detected_order > 0) {
        const Mat3& a = out.generator;
        out.rotation_angle = std::atan2(a(2, 1) - a(1, 2), a(1, 1) + a(2, 2));
    }

    if (family_k) {
        out.claimed_order = 2 * (*family_k) + 2;
        out.claimed_angle = kPi / (2.0 * (2.0 * (*family_k) + 2.0));
        out.matches_claim = out.detected_order == *out.claimed_order &&
                            std::abs(std::abs(out.rotation_angle) - out.claimed_angle) <= 1e-6;
        if (!out.note.empty()) out.note += "; ";
        out.note += "claimed order " + std::to_string(*out.claimed_order) + " (block angle " +
                    std::to_string(out.claimed_angle) + "), detected order " +
                    std::to_string(out.detected_order) + " (block angle " +
                    std::to_string(out.rotation_angle) + ")";
    }
    return out;
}

CongruenceResult congruence_test(const SurfacePatch& a, const SurfacePatch& b, bool allow_scale,
                                 double tol)
{
    if (a.nu() != b.nu() || a.nv() != b.nv())
        throw InputError("congruence_test: patches must share grid dimensions");

    std::vector<Vec3> src, dst;
    const std::size_t count = std::size_t(a.nu()) * a.nv();
    src.reserve(count);
    dst.reserve(count);
    for (int k = 0; k < a.nv(); ++k) {
        for (int j = 0; j < a.nu(); ++j) {
            src.push_back(a.X(j, k));
            dst.push_back(b.X(j, k));
        }
    }
    RigidFit fit = fit_orthogonal(src, dst, allow_scale);

    CongruenceResult out;
    out.rotation = fit.rotation;
    out.translation = fit.translation;
    out.scale = fit.scale;
    out.residual = fit.rms_normalized;
    out.pass = out.residual <= tol;
    return out;
}

TheoremMainReport theorem_main_check(const SurfacePatch& patch, double tol, int t_samples)
{
    const SurfacePatch adj = patch.adjoint();
    const DomainGrid& g = adj.grid();
    const double r = std::min(symmetric_real_extent(g), symmetric_imag_extent(g));
    if (r <= 0.0) throw InputError("theorem_main_check: diagonals do not lie in the grid");

    const int n_half = std::max(1, t_samples / 2);
    LineSamples plus = sample_line(adj, Complex(1.0, 1.0), r, n_half);
    LineSamples minus = sample_line(adj, Complex(1.0, -1.0), r, n_half);

    const int count = 2 * n_half + 1;
    std::vector<Vec3> cplus, cminus;
    cplus.reserve(count);
    cminus.reserve(count);
    for (int i = 0; i < count; ++i) {
        cplus.push_back(plus.f[i].real());
        cminus.push_back(minus.f[i].real());
    }

    TheoremMainReport rep;
    rep.planarity_residual = std::max(planarity_residual(cplus), planarity_residual(cminus));

    const Vec3 dplus = (plus.fprime[n_half] * Complex(1.0, 1.0)).real();
    const Vec3 dminus = (minus.fprime[n_half] * Complex(1.0, -1.0)).real();
    rep.perpendicularity_residual =
        std::abs(dplus.dot(dminus)) / std::max(dplus.norm() * dminus.norm(), kTiny);

    const Mat3 lambda = DihedralMatrices::Lambda();
    double extent = kTiny;
    for (int i = 0; i < count; ++i) {
        extent = extent_of(extent, cplus[i]);
        extent = extent_of(extent, cminus[i]);
    }
    double best = std::numeric_limits<double>::infinity();
    for (int sigma : {+1, -1}) {
        for (int s : {+1, -1}) {
            double worst = 0.0;
            for (int i = 0; i < count; ++i) {
                const int src = sigma > 0 ? i : count - 1 - i;
                worst = std::max(worst, (cminus[i] - double(s) * (lambda * cplus[src])).norm());
            }
            best = std::min(best, worst / extent);
        }
    }
    rep.self_cpg_residual = best;
    rep.pass = rep.planarity_residual <= tol && rep.perpendicularity_residual <= tol &&
               rep.self_cpg_residual <= tol;
    return rep;
}

namespace {

/// Singular values of the centered cloud, descending, plus the spread.
std::pair<Vec3, double> cloud_singular_values(const std::vector<Vec3>& points)
{
    if (points.size() < 2) throw InputError("cloud_singular_values: need at least 2 points");
    Vec3 mean = Vec3::Zero();
    for (const Vec3& p : points) mean += p;
    mean /= double(points.size());
    Eigen::MatrixXd m(points.size(), 3);
    for (std::size_t i = 0; i < points.size(); ++i) m.row(i) = (points[i] - mean).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    Vec3 sv = Vec3::Zero();
    for (int i = 0; i < std::min<int>(3, svd.singularValues().size()); ++i)
        sv[i] = svd.singularValues()[i];
    return {sv, std::max(sv[0], kTiny)};
}

}  // namespace

double collinearity_residual(const std::vector<Vec3>& points)
{
    auto [sv, spread] = cloud_singular_values(points);
    return sv[1] / spread;
}

double planarity_residual(const std::vector<Vec3>& points)
{
    auto [sv, spread] = cloud_singular_values(points);
    return sv[2] / spread;
}

AdjointLineReport prop23_straight_arc_check(const SurfacePatch& patch, double tol, int samples)
{
    const SurfacePatch adj = patch.adjoint();
    const DomainGrid& g = adj.grid();
    const double r = symmetric_real_extent(g);
    if (r <= 0.0)
        throw InputError("prop23_straight_arc_check: grid has no symmetric real segment");

    const int n_half = std::max(1, samples / 2);
    LineSamples line = sample_line(adj, Complex(1.0, 0.0), r, n_half);

    AdjointLineReport rep;
    rep.points.reserve(line.f.size());
    for (const CVec3& f : line.f) rep.points.push_back(f.real());
    rep.collinearity = collinearity_residual(rep.points);
    rep.pass = rep.collinearity <= tol;
    return rep;
}

}  // namespace bjorling
