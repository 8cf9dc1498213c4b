#include "bjorling/catalog.hpp"

#include <cmath>

namespace bjorling {

namespace {

struct NameSpec {
    std::string name;
    std::vector<double> params;
};

NameSpec parse_name(const std::string& spec)
{
    NameSpec out;
    const auto open = spec.find('(');
    if (open == std::string::npos) {
        out.name = spec;
        return out;
    }
    if (spec.back() != ')') throw InputError("catalog: malformed entry name '" + spec + "'");
    out.name = spec.substr(0, open);
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    std::size_t pos = 0;
    while (pos < inner.size()) {
        std::size_t next = inner.find(',', pos);
        if (next == std::string::npos) next = inner.size();
        try {
            out.params.push_back(std::stod(inner.substr(pos, next - pos)));
        } catch (const std::exception&) {
            throw InputError("catalog: bad parameter in '" + spec + "'");
        }
        pos = next + 1;
    }
    return out;
}

AnalyticExpr k(double v) { return AnalyticExpr::constant(v); }
AnalyticExpr var() { return AnalyticExpr::variable(); }

DomainGrid grid_of(double u_half, double v_half, int n = 41)
{
    DomainGrid g;
    g.u_min = -u_half;
    g.u_max = u_half;
    g.v_min = -v_half;
    g.v_max = v_half;
    g.nu = n;
    g.nv = n;
    return g;
}

}  // namespace

CatalogEntry builtin(const std::string& spec)
{
    const NameSpec ns = parse_name(spec);
    const std::string& name = ns.name;
    auto param = [&](std::size_t i, double fallback) {
        return i < ns.params.size() ? ns.params[i] : fallback;
    };

    CatalogEntry e;
    e.name = name;

    if (name == "circle") {
        const double r = param(0, 1.0);
        if (r <= 0.0) throw InputError("catalog: circle radius must be positive");
        e.parameters["r"] = r;
        AnalyticCurve c(k(r) * cos(var()), k(r) * sin(var()), k(0.0));
        e.default_grid = grid_of(kPi, 1.0);
        e.strip = make_planar_strip(c, kPi / 2, e.default_grid.u_min, e.default_grid.u_max);
        if (r == 1.0) e.oracle = closed_form("catenoid");
        e.self_cpg = false;
        e.cpg_partner = "catenary";
        return e;
    }
    if (name == "catenary") {
        AnalyticCurve c(cosh(var()), var(), k(0.0));
        e.default_grid = grid_of(1.0, 1.0);
        e.strip = make_planar_strip(c, kPi / 2, -1.0, 1.0);
        e.self_cpg = false;
        e.cpg_partner = "circle";
        return e;
    }
    if (name == "parabola") {
        const double a = param(0, 1.0);
        if (a == 0.0) throw InputError("catalog: parabola coefficient must be nonzero");
        e.parameters["a"] = a;
        AnalyticCurve c(k(a) * pow(var(), 2), var(), k(0.0));
        // sqrt branch points of ||c'||^2 = 4a^2 t^2 + 1 sit at +-i/(2a)
        const double v_half = 0.8 / (2.0 * std::abs(a));
        e.default_grid = grid_of(1.0, v_half);
        e.strip = make_planar_strip(c, kPi / 2, -1.0, 1.0);
        e.self_cpg = false;
        e.cpg_partner = "cycloid (numeric)";
        return e;
    }
    if (name == "cycloid") {
        // one arch centered at its crest: regular there, cusps at t = +-pi
        AnalyticCurve c(k(1.0) + cos(var()), var() + sin(var()), k(0.0));
        e.default_grid = grid_of(2.5, 1.0);
        e.strip = make_planar_strip(c, kPi / 2, -2.5, 2.5);
        e.self_cpg = false;
        e.cpg_partner = "parabola";
        return e;
    }
    if (name == "ellipse") {
        const double a = param(0, 2.0);
        const double b = param(1, 1.0);
        if (a <= 0.0 || b <= 0.0) throw InputError("catalog: ellipse semi-axes must be positive");
        e.parameters["a"] = a;
        e.parameters["b"] = b;
        AnalyticCurve c(k(a) * cos(var()), k(b) * sin(var()), k(0.0));
        // branch points of a^2 sin^2 + b^2 cos^2 at |Im w| = atanh(min/max)
        const double v_half = 0.8 * std::atanh(std::min(a, b) / std::max(a, b));
        e.default_grid = grid_of(kPi, v_half);
        e.strip = make_planar_strip(c, kPi / 2, -kPi, kPi);
        e.self_cpg = false;
        e.cpg_partner = "elliptical roulette (numeric)";
        return e;
    }
    if (name == "enneper_cubic") {
        AnalyticCurve c(pow(var(), 2), pow(var(), 3) / k(3.0) - var(), k(0.0));
        e.default_grid = grid_of(1.0, 1.0);
        e.strip = make_planar_strip(c, kPi / 2, -1.0, 1.0);
        e.oracle = closed_form("enneper");
        e.self_cpg = true;
        e.self_adjoint = true;
        e.cpg_partner = "itself";
        return e;
    }
    if (name == "weak_cpg") {
        if (ns.params.empty()) throw InputError("catalog: weak_cpg requires a parameter k");
        const double kd = ns.params[0];
        const int kk = int(kd);
        if (kk < 1 || double(kk) != kd) throw InputError("catalog: weak_cpg k must be an integer >= 1");
        e.parameters["k"] = kk;
        const int m = 4 * kk - 2;
        AnalyticCurve c(k(2.0 / m) * pow(var(), m),
                        pow(var(), 2 * m - 1) / k(double(2 * m - 1)) - var(), k(0.0));
        e.default_grid = grid_of(1.0, 1.0);
        e.strip = make_planar_strip(c, kPi / 2, -1.0, 1.0);
        e.weak_cpg_k = kk;
        if (kk == 1) {
            // k = 1 reduces to the Enneper cubic
            e.oracle = closed_form("enneper");
            e.self_cpg = true;
            e.self_adjoint = true;
        }
        return e;
    }
    if (name == "line_rotating_normal") {
        AnalyticCurve c(var(), k(0.0), k(0.0));
        e.strip = make_strip(c, k(0.0), cos(var()), sin(var()));
        e.default_grid = grid_of(kPi, 1.0);
        e.oracle = closed_form("helicoid");
        return e;
    }
    if (name == "plane_line") {
        AnalyticCurve c(var(), k(0.0), k(0.0));
        e.strip = make_planar_strip(c, 0.0, -1.0, 1.0);
        e.default_grid = grid_of(1.0, 1.0);
        e.oracle = closed_form("plane");
        return e;
    }
    throw InputError("unknown catalog entry '" + spec + "'");
}

std::vector<std::string> catalog_names()
{
    return {"circle",        "catenary", "parabola",            "cycloid",   "ellipse",
            "enneper_cubic", "weak_cpg(k)", "line_rotating_normal", "plane_line"};
}

std::function<Vec3(double, double)> closed_form(const std::string& name)
{
    if (name == "catenoid")
        return [](double u, double v) {
            return Vec3(std::cos(u) * std::cosh(v), std::sin(u) * std::cosh(v), v);
        };
    if (name == "helicoid")
        return [](double u, double v) {
            return Vec3(u, std::sin(u) * std::sinh(v), -std::cos(u) * std::sinh(v));
        };
    if (name == "enneper")
        return [](double u, double v) {
            const Complex w(u, v);
            const Complex w3 = w * w * w;
            return Vec3(std::real(w * w), std::real(w3 / 3.0 - w),
                        std::real(Complex(0.0, -1.0) * (w3 / 3.0 + w)));
        };
    if (name == "plane") return [](double u, double v) { return Vec3(u, v, 0.0); };
    throw InputError("unknown closed-form surface '" + name + "'");
}

}  // namespace bjorling
