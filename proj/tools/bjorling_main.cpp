// Command-line front end for the Björling workbench: transforms strips into
// minimal-surface patches and runs the symmetry verification suites.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bjorling/catalog.hpp"
#include "bjorling/geometry.hpp"
#include "bjorling/mesh_io.hpp"
#include "bjorling/patch.hpp"
#include "bjorling/report.hpp"
#include "bjorling/search.hpp"
#include "bjorling/specfile.hpp"
#include "bjorling/symmetry.hpp"

namespace {

using namespace bjorling;
using nlohmann::ordered_json;

int env_threads()
{
    const char* env = std::getenv("BJORLING_THREADS");
    if (!env || !*env) return 0;
    return std::atoi(env);
}

bool env_timings()
{
    const char* env = std::getenv("BJORLING_TIMINGS");
    return env && *env;
}

struct CommonOpts {
    std::string input;
    std::string catalog_name;
    std::string grid_spec;
    std::string domain_spec;
    double tol = defaults::check_tol;
    double reg_tol = defaults::registration_tol;
    double quad_tol = defaults::quad_tol;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string report_path;
    std::string format = "obj";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_input = true)
{
    if (with_input)
        cmd->add_option("input", o.input, "spec file path or catalog entry name");
    cmd->add_option("--catalog", o.catalog_name, "use a built-in catalog entry");
    cmd->add_option("--grid", o.grid_spec, "grid resolution NUxNV");
    cmd->add_option("--domain", o.domain_spec, "evaluation window uMIN:uMAX,vMIN:vMAX");
    cmd->add_option("--tol", o.tol, "check tolerance (scale-normalized)");
    cmd->add_option("--registration-tol", o.reg_tol, "registration tolerance");
    cmd->add_option("--quad-tol", o.quad_tol, "contour quadrature tolerance");
    cmd->add_option("--seed", o.seed, "random seed for search");
    cmd->add_option("--out", o.out_path, "mesh output path");
    cmd->add_option("--report", o.report_path, "JSON report path");
    cmd->add_option("--format", o.format, "mesh format: obj or ply")
        ->check(CLI::IsMember({"obj", "ply"}));
}

void apply_grid_overrides(DomainGrid& grid, const CommonOpts& o)
{
    if (!o.grid_spec.empty()) {
        const auto x = o.grid_spec.find('x');
        if (x == std::string::npos) throw InputError("--grid expects NUxNV");
        try {
            grid.nu = std::stoi(o.grid_spec.substr(0, x));
            grid.nv = std::stoi(o.grid_spec.substr(x + 1));
        } catch (const std::exception&) {
            throw InputError("--grid expects NUxNV");
        }
    }
    if (!o.domain_spec.empty()) {
        const auto comma = o.domain_spec.find(',');
        if (comma == std::string::npos) throw InputError("--domain expects uMIN:uMAX,vMIN:vMAX");
        auto parse_pair = [](const std::string& s, double& lo, double& hi) {
            const auto colon = s.find(':');
            if (colon == std::string::npos) throw InputError("--domain expects MIN:MAX ranges");
            try {
                lo = std::stod(s.substr(0, colon));
                hi = std::stod(s.substr(colon + 1));
            } catch (const std::exception&) {
                throw InputError("--domain expects numeric ranges");
            }
        };
        parse_pair(o.domain_spec.substr(0, comma), grid.u_min, grid.u_max);
        parse_pair(o.domain_spec.substr(comma + 1), grid.v_min, grid.v_max);
    }
    grid.validate();
}

struct ResolvedInput {
    Strip strip;
    DomainGrid grid;
    std::string source;
    std::string bytes;  // digest input
    std::optional<SpecFile> spec;
    std::optional<CatalogEntry> entry;
};

std::string canonical_run_bytes(const std::string& source, const DomainGrid& g,
                                const CommonOpts& o)
{
    ordered_json j;
    j["source"] = source;
    j["u"] = {g.u_min, g.u_max};
    j["v"] = {g.v_min, g.v_max};
    j["nu"] = g.nu;
    j["nv"] = g.nv;
    j["base"] = {g.base.real(), g.base.imag()};
    j["quad_tol"] = o.quad_tol;
    return j.dump();
}

ResolvedInput resolve_input(const CommonOpts& o)
{
    ResolvedInput r;
    std::string name = o.catalog_name;
    if (name.empty() && !o.input.empty() && !std::filesystem::exists(o.input)) name = o.input;

    if (!name.empty()) {
        r.entry = builtin(name);
        r.strip = r.entry->strip;
        r.grid = r.entry->default_grid;
        r.source = "catalog:" + name;
    } else if (!o.input.empty()) {
        SpecFile spec = SpecFile::load(o.input);
        r.strip = spec.build_strip();
        r.grid = spec.grid;
        r.source = o.input;
        r.bytes = spec.raw;
        r.spec = std::move(spec);
    } else {
        throw InputError("no input: give a spec file or --catalog NAME");
    }
    apply_grid_overrides(r.grid, o);
    if (r.bytes.empty()) r.bytes = canonical_run_bytes(r.source, r.grid, o);
    return r;
}

SurfacePatch make_patch(const ResolvedInput& in, const CommonOpts& o)
{
    QuadratureOptions q;
    q.tol = o.quad_tol;
    return SurfacePatch::evaluate(in.strip, in.grid, q, env_threads());
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void print_check(const std::string& name, double residual, double tol, bool pass)
{
    std::printf("%s  %-28s residual=%.3e  tol=%.1e\n", pass ? "PASS" : "FAIL", name.c_str(),
                residual, tol);
}

void print_info(const std::string& name, double residual, bool verdict)
{
    std::printf("INFO  %-28s residual=%.3e  verdict=%s\n", name.c_str(), residual,
                verdict ? "yes" : "no");
}

void finish(ReportDocument& report, const CommonOpts& o, const ResolvedInput& in)
{
    std::string path = o.report_path;
    if (path.empty() && in.spec) path = in.spec->report_path;
    if (!path.empty()) report.write(path, env_timings());
    std::printf("%s\n", report.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT");
}

void maybe_export_mesh(const SurfacePatch& patch, const CommonOpts& o, const ResolvedInput& in,
                       ReportDocument& report)
{
    std::string path = o.out_path;
    std::string format = o.format;
    if (path.empty() && in.spec && !in.spec->mesh_path.empty()) {
        path = in.spec->mesh_path;
        format = in.spec->mesh_format;
    }
    if (path.empty()) return;
    Timer t;
    export_mesh(patch, format, path);
    report.add_timing("export_mesh", t.ms());
    report.add_section("mesh", {{"path", path},
                                {"format", format},
                                {"vertices", patch.nu() * patch.nv()},
                                {"faces", 2 * (patch.nu() - 1) * (patch.nv() - 1)}});
}

void run_minimality_checks(const SurfacePatch& patch, const Strip& strip, const CommonOpts& o,
                           ReportDocument& report, const std::vector<SpecCheck>& requested)
{
    Timer t;
    const GeometryReport geo = minimality_report(patch, strip);
    report.add_timing("minimality_report", t.ms());
    const StripValidation val =
        validate_strip(strip, 200, 1e-10, patch.grid().u_min, patch.grid().u_max);

    struct Row {
        const char* name;
        double residual;
    };
    const Row rows[] = {
        {"unit_normal", val.max_unit_norm_deviation},
        {"orthogonality", val.max_orthogonality_deviation},
        {"isotropy", geo.isotropy_max},
        {"conformality", geo.conformal_max},
        {"laplacian", geo.laplacian_max},
        {"boundary_curve", geo.boundary_curve_max},
        {"boundary_normal", geo.boundary_normal_max},
    };

    auto add = [&](const std::string& name, double tol) {
        for (const Row& row : rows) {
            if (name == row.name) {
                const bool pass = row.residual <= tol;
                report.add_check(name, row.residual, tol, pass);
                print_check(name, row.residual, tol, pass);
                return;
            }
        }
        throw InputError("unknown check name '" + name + "'");
    };

    if (requested.empty()) {
        for (const Row& row : rows) {
            // laplacian is resolution-limited, not a fixed-tolerance identity
            if (std::string(row.name) == "laplacian") continue;
            add(row.name, std::string(row.name) == "unit_normal" ||
                                  std::string(row.name) == "orthogonality"
                              ? 1e-10
                              : o.tol);
        }
    } else {
        for (const SpecCheck& c : requested) add(c.name, c.tol);
    }
}

int cmd_transform(const CommonOpts& o)
{
    ResolvedInput in = resolve_input(o);
    ReportDocument report("transform", in.source, in.bytes);
    Timer t;
    SurfacePatch patch = make_patch(in, o);
    report.add_timing("evaluate_patch", t.ms());
    maybe_export_mesh(patch, o, in, report);
    run_minimality_checks(patch, in.strip, o, report, {});
    finish(report, o, in);
    return report.all_pass() ? 0 : 1;
}

int cmd_verify(const CommonOpts& o)
{
    ResolvedInput in = resolve_input(o);
    ReportDocument report("verify", in.source, in.bytes);
    SurfacePatch patch = make_patch(in, o);
    run_minimality_checks(patch, in.strip, o, report,
                          in.spec ? in.spec->checks : std::vector<SpecCheck>{});
    finish(report, o, in);
    return report.all_pass() ? 0 : 1;
}

int cmd_cpg(const CommonOpts& o)
{
    ResolvedInput in = resolve_input(o);
    ReportDocument report("cpg", in.source, in.bytes);
    SurfacePatch patch = make_patch(in, o);

    CpgExtraction cpg = extract_cpg(patch, 81, o.tol);
    report.add_check("cpg_planarity", cpg.planarity_residual, o.tol,
                     cpg.planarity_residual <= o.tol);
    print_check("cpg_planarity", cpg.planarity_residual, o.tol, cpg.planarity_residual <= o.tol);
    report.add_check("cpg_perpendicular_symmetry", cpg.symmetry_residual, o.tol,
                     cpg.symmetry_residual <= o.tol);
    print_check("cpg_perpendicular_symmetry", cpg.symmetry_residual, o.tol,
                cpg.symmetry_residual <= o.tol);

    SymmetryReport self = self_cpg_test(patch, o.tol);
    SymmetryReport diag = diagonal_line_test(patch, o.tol);
    ordered_json details;
    details["self_cpg"] = self.pass;
    details["sigma"] = self.sign_sigma;
    details["s"] = self.sign_s;
    details["diagonal_lines"] = diag.pass;
    details["vertex"] = {cpg.vertex.x(), cpg.vertex.y(), cpg.vertex.z()};
    details["degenerate"] = cpg.degenerate;
    if (in.entry && !in.entry->cpg_partner.empty()) details["cpg_partner"] = in.entry->cpg_partner;
    print_info("self_cpg", self.residual, self.pass);
    print_info("diagonal_lines", diag.residual, diag.pass);

    // Prop 2.5: the two verdicts must agree
    const bool agree = self.pass == diag.pass;
    report.add_check("self_cpg_diagonal_agreement", std::abs(self.residual - diag.residual),
                     1.0, agree, details);
    print_check("self_cpg_diagonal_agreement", std::abs(self.residual - diag.residual), 1.0,
                agree);

    if (in.entry && in.entry->self_cpg) {
        const bool match = self.pass == *in.entry->self_cpg;
        report.add_check("expected_self_cpg", self.residual, o.tol, match);
        print_check("expected_self_cpg", self.residual, o.tol, match);
    }
    finish(report, o, in);
    return report.all_pass() ? 0 : 1;
}

int cmd_adjoint(const CommonOpts& o)
{
    ResolvedInput in = resolve_input(o);
    ReportDocument report("adjoint", in.source, in.bytes);
    SurfacePatch patch = make_patch(in, o);
    SurfacePatch adj = adjoint_patch(patch);
    maybe_export_mesh(adj, o, in, report);

    AdjointLineReport line = prop23_straight_arc_check(patch, o.tol);
    report.add_check("adjoint_real_axis_straight", line.collinearity, o.tol, line.pass);
    print_check("adjoint_real_axis_straight", line.collinearity, o.tol, line.pass);

    const GeometryReport geo = minimality_report(adj, in.strip);
    report.add_check("adjoint_isotropy", geo.isotropy_max, o.tol, geo.isotropy_max <= o.tol);
    print_check("adjoint_isotropy", geo.isotropy_max, o.tol, geo.isotropy_max <= o.tol);
    finish(report, o, in);
    return report.all_pass() ? 0 : 1;
}

int cmd_symmetry(const CommonOpts& o)
{
    ResolvedInput in = resolve_input(o);
    ReportDocument report("symmetry", in.source, in.bytes);
    SurfacePatch patch = make_patch(in, o);

    for (const SymmetryReport& rep : reflection_checks(patch, o.tol)) {
        report.add_check(rep.relation, rep.residual, o.tol, rep.pass);
        print_check(rep.relation, rep.residual, o.tol, rep.pass);
    }

    SymmetryReport self = self_cpg_test(patch, o.tol);
    SymmetryReport diag = diagonal_line_test(patch, o.tol);
    const bool agree = self.pass == diag.pass;
    report.add_check("self_cpg_diagonal_agreement", std::abs(self.residual - diag.residual), 1.0,
                     agree);
    print_check("self_cpg_diagonal_agreement", std::abs(self.residual - diag.residual), 1.0,
                agree);
    print_info("self_cpg", self.residual, self.pass);

    ordered_json verdicts;
    verdicts["self_cpg"] = {{"residual", self.residual},
                            {"pass", self.pass},
                            {"sigma", self.sign_sigma},
                            {"s", self.sign_s}};
    for (const SymmetryReport& rep : d4_d8_test(patch, o.tol)) {
        verdicts[rep.relation] = {{"residual", rep.residual},
                                  {"pass", rep.pass},
                                  {"orientation", rep.orientation}};
        print_info(rep.relation, rep.residual, rep.pass);
    }

    SelfAdjointResult sa = self_adjoint_test(patch, o.reg_tol);
    {
        ordered_json m = ordered_json::array();
        for (int r = 0; r < 3; ++r)
            m.push_back({sa.fitted_rotation(r, 0), sa.fitted_rotation(r, 1), sa.fitted_rotation(r, 2)});
        verdicts["self_adjoint"] = {{"residual", sa.residual},
                                    {"pass", sa.pass},
                                    {"rho_orientation", sa.rho_orientation},
                                    {"matches_reference", sa.matches_reference},
                                    {"fitted_rotation", m},
                                    {"note", sa.note}};
        print_info("self_adjoint", sa.residual, sa.pass);
    }

    std::optional<int> family_k;
    if (in.entry && in.entry->weak_cpg_k) family_k = in.entry->weak_cpg_k;
    DihedralSearchResult dh = dihedral_search(patch, 16, o.reg_tol, family_k);
    {
        ordered_json rec;
        rec["detected_order"] = dh.detected_order;
        rec["passing_orders"] = dh.passing_orders;
        rec["rotation_angle"] = dh.rotation_angle;
        rec["continuous"] = dh.continuous;
        if (dh.claimed_order) {
            rec["claimed_order"] = *dh.claimed_order;
            rec["claimed_angle"] = dh.claimed_angle;
            rec["matches_claim"] = dh.matches_claim;
        }
        if (!dh.note.empty()) rec["note"] = dh.note;
        verdicts["dihedral"] = rec;
        std::printf("INFO  %-28s detected_order=%d%s\n", "dihedral_search", dh.detected_order,
                    dh.continuous ? " (continuous)" : "");
    }
    report.add_section("verdicts", verdicts);

    if (in.entry) {
        if (in.entry->self_cpg) {
            const bool match = self.pass == *in.entry->self_cpg;
            report.add_check("expected_self_cpg", self.residual, o.tol, match);
            print_check("expected_self_cpg", self.residual, o.tol, match);
        }
        if (in.entry->self_adjoint) {
            const bool match = sa.pass == *in.entry->self_adjoint;
            report.add_check("expected_self_adjoint", sa.residual, o.reg_tol, match);
            print_check("expected_self_adjoint", sa.residual, o.reg_tol, match);
        }
    }
    finish(report, o, in);
    return report.all_pass() ? 0 : 1;
}

int cmd_relate(const CommonOpts& a_opts, const std::string& input_b, bool allow_scale)
{
    CommonOpts b_opts = a_opts;
    b_opts.input = input_b;
    b_opts.catalog_name.clear();

    ResolvedInput a = resolve_input(a_opts);
    ResolvedInput b = resolve_input(b_opts);
    // grids must agree pointwise for the sampled correspondence
    b.grid.nu = a.grid.nu;
    b.grid.nv = a.grid.nv;

    ReportDocument report("relate", a.source + " ~ " + b.source, a.bytes + "\n---\n" + b.bytes);
    SurfacePatch pa = make_patch(a, a_opts);
    SurfacePatch pb = make_patch(b, b_opts);

    CongruenceResult res = congruence_test(pa, pb, allow_scale, a_opts.tol);
    ordered_json details;
    ordered_json m = ordered_json::array();
    for (int r = 0; r < 3; ++r)
        m.push_back({res.rotation(r, 0), res.rotation(r, 1), res.rotation(r, 2)});
    details["rotation"] = m;
    details["translation"] = {res.translation.x(), res.translation.y(), res.translation.z()};
    details["scale"] = res.scale;
    details["note"] = "sampled congruence: sufficient evidence, not a proof";
    report.add_check("congruent", res.residual, a_opts.tol, res.pass, details);
    print_check("congruent", res.residual, a_opts.tol, res.pass);
    finish(report, a_opts, a);
    return report.all_pass() ? 0 : 1;
}

int cmd_search(const CommonOpts& o, int budget_override, int restarts_override)
{
    ResolvedInput in = resolve_input(o);
    if (!in.spec) throw InputError("search requires a spec file with a [search] section");
    CurveFamily family = in.spec->build_family();

    SearchOptions sopt;
    const SpecSearchBlock& blk = *in.spec->search;
    sopt.budget = budget_override > 0 ? budget_override : blk.budget;
    sopt.restarts = restarts_override > 0 ? restarts_override : blk.restarts;
    sopt.seed = o.seed != 1 ? o.seed : blk.seed;
    sopt.t_samples = blk.t_samples;
    sopt.t_range = blk.t_range;
    sopt.quad_tol = o.quad_tol;
    sopt.tol = o.tol;
    sopt.threads = env_threads();

    ReportDocument report("search", in.source, in.bytes);
    Timer t;
    SearchResult res = self_cpg_search(family, sopt);
    report.add_timing("self_cpg_search", t.ms());

    ordered_json details;
    details["best_theta"] = std::vector<double>(res.best_theta.data(),
                                                res.best_theta.data() + res.best_theta.size());
    details["evaluations"] = res.evaluations;
    details["best_restart"] = res.best_restart;
    report.add_check("search_converged", res.residual, o.tol, res.converged, details);
    print_check("search_converged", res.residual, o.tol, res.converged);

    ordered_json hist = ordered_json::array();
    for (const auto& [it, r] : res.history) hist.push_back({it, r});
    report.add_section("history", hist);
    finish(report, o, in);
    return report.all_pass() ? 0 : 1;
}

int cmd_catalog(const CommonOpts& o)
{
    if (o.input.empty() && o.catalog_name.empty()) {
        std::printf("available catalog entries:\n");
        for (const std::string& name : catalog_names()) std::printf("  %s\n", name.c_str());
        return 0;
    }
    const std::string name = o.catalog_name.empty() ? o.input : o.catalog_name;
    CatalogEntry e = builtin(name);
    std::printf("name: %s\n", e.name.c_str());
    for (const auto& [k, v] : e.parameters) std::printf("  %s = %g\n", k.c_str(), v);
    std::printf("  default domain: [%g, %g] x [%g, %g], %dx%d\n", e.default_grid.u_min,
                e.default_grid.u_max, e.default_grid.v_min, e.default_grid.v_max, e.default_grid.nu,
                e.default_grid.nv);
    if (e.oracle) std::printf("  closed-form oracle: yes\n");
    if (e.self_cpg) std::printf("  expected self-CPG: %s\n", *e.self_cpg ? "yes" : "no");
    if (e.self_adjoint)
        std::printf("  expected self-adjoint: %s\n", *e.self_adjoint ? "yes" : "no");
    if (e.weak_cpg_k) std::printf("  weak-CPG family k = %d\n", *e.weak_cpg_k);
    if (!e.cpg_partner.empty()) std::printf("  CPG partner: %s\n", e.cpg_partner.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Björling workbench: minimal surfaces from analytic strips, with symmetry checks"};
    app.require_subcommand(1);

    CommonOpts transform_opts, verify_opts, cpg_opts, adjoint_opts, symmetry_opts, relate_opts,
        search_opts, catalog_opts;
    std::string relate_b;
    bool relate_allow_scale = false;
    int search_budget = 0, search_restarts = 0;

    add_common(app.add_subcommand("transform", "evaluate the Björling transform and export a mesh"),
               transform_opts);
    add_common(app.add_subcommand("verify", "run the minimality residual suite"), verify_opts);
    add_common(app.add_subcommand("cpg", "extract the conjugated perpendicular geodesic"),
               cpg_opts);
    add_common(app.add_subcommand("adjoint", "evaluate the adjoint surface and its checks"),
               adjoint_opts);
    add_common(app.add_subcommand("symmetry", "reflection, dihedral and self-adjointness suite"),
               symmetry_opts);

    CLI::App* relate = app.add_subcommand("relate", "congruence test of two inputs");
    add_common(relate, relate_opts);
    relate->add_option("input_b", relate_b, "second spec file or catalog name")->required();
    relate->add_flag("--allow-scale", relate_allow_scale, "fit a similarity instead of a rigid motion");

    CLI::App* search = app.add_subcommand("search", "minimize the self-CPG residual over a family");
    add_common(search, search_opts);
    search->add_option("--budget", search_budget, "objective evaluation budget");
    search->add_option("--restarts", search_restarts, "number of simplex restarts");

    add_common(app.add_subcommand("catalog", "list or describe built-in entries"), catalog_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("transform")) return cmd_transform(transform_opts);
        if (app.got_subcommand("verify")) return cmd_verify(verify_opts);
        if (app.got_subcommand("cpg")) return cmd_cpg(cpg_opts);
        if (app.got_subcommand("adjoint")) return cmd_adjoint(adjoint_opts);
        if (app.got_subcommand("symmetry")) return cmd_symmetry(symmetry_opts);
        if (app.got_subcommand("relate")) return cmd_relate(relate_opts, relate_b, relate_allow_scale);
        if (app.got_subcommand("search")) return cmd_search(search_opts, search_budget, search_restarts);
        if (app.got_subcommand("catalog")) return cmd_catalog(catalog_opts);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
