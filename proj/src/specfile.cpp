#include "bjorling/specfile.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace bjorling {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

double parse_double(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("spec: expected a number for " + what + ", got '" + s + "'");
    }
}

long parse_int(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("spec: expected an integer for " + what + ", got '" + s + "'");
    }
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// "MIN:MAX" range
std::pair<double, double> parse_range(const std::string& s, const std::string& what)
{
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw InputError("spec: expected MIN:MAX for " + what + ", got '" + s + "'");
    return {parse_double(trim(s.substr(0, colon)), what),
            parse_double(trim(s.substr(colon + 1)), what)};
}

using Section = std::map<std::string, std::string>;

}  // namespace

SpecFile SpecFile::parse(const std::string& text)
{
    std::map<std::string, Section> sections;
    std::vector<std::pair<std::string, std::string>> check_lines;

    std::istringstream in(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw InputError("spec: malformed section header at line " + std::to_string(lineno));
            current = trim(t.substr(1, t.size() - 2));
            sections[current];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InputError("spec: expected key = value at line " + std::to_string(lineno));
        if (current.empty())
            throw InputError("spec: key outside any section at line " + std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = unquote(trim(t.substr(eq + 1)));
        if (current == "checks")
            check_lines.emplace_back(key, value);
        else
            sections[current][key] = value;
    }

    SpecFile spec;
    spec.raw = text;

    if (!sections.count("curve")) throw InputError("spec: missing required [curve] section");
    if (!sections.count("domain")) throw InputError("spec: missing required [domain] section");

    const Section& curve = sections["curve"];
    auto require = [](const Section& s, const char* key, const char* section) -> const std::string& {
        auto it = s.find(key);
        if (it == s.end())
            throw InputError(std::string("spec: missing key '") + key + "' in [" + section + "]");
        return it->second;
    };
    spec.curve_x = require(curve, "x", "curve");
    spec.curve_y = require(curve, "y", "curve");
    spec.curve_z = curve.count("z") ? curve.at("z") : "0";
    if (curve.count("phi")) spec.phi = parse_double(curve.at("phi"), "phi");

    if (sections.count("normal")) {
        const Section& normal = sections["normal"];
        spec.has_normal = true;
        spec.normal_x = require(normal, "x", "normal");
        spec.normal_y = require(normal, "y", "normal");
        spec.normal_z = require(normal, "z", "normal");
        if (spec.phi)
            throw InputError("spec: give either [normal] or phi, not both");
    }

    const Section& domain = sections["domain"];
    auto urange = parse_range(require(domain, "u", "domain"), "u");
    auto vrange = parse_range(require(domain, "v", "domain"), "v");
    spec.grid.u_min = urange.first;
    spec.grid.u_max = urange.second;
    spec.grid.v_min = vrange.first;
    spec.grid.v_max = vrange.second;
    spec.grid.nu = int(parse_int(require(domain, "nu", "domain"), "nu"));
    spec.grid.nv = int(parse_int(require(domain, "nv", "domain"), "nv"));
    if (domain.count("base")) {
        const auto parts = split_list(domain.at("base"));
        if (parts.empty() || parts.size() > 2)
            throw InputError("spec: base must be RE or RE,IM");
        const double re = parse_double(parts[0], "base");
        const double im = parts.size() == 2 ? parse_double(parts[1], "base") : 0.0;
        spec.grid.base = Complex(re, im);
    }
    spec.grid.validate();

    for (const auto& [name, tol] : check_lines)
        spec.checks.push_back({name, parse_double(tol, "check tolerance")});

    if (sections.count("search")) {
        const Section& s = sections["search"];
        SpecSearchBlock blk;
        if (s.count("x_base")) blk.x_base = s.at("x_base");
        if (s.count("y_base")) blk.y_base = s.at("y_base");
        auto to_ints = [](const std::string& v, const std::string& what) {
            std::vector<int> out;
            for (const auto& p : split_list(v)) out.push_back(int(parse_int(p, what)));
            return out;
        };
        auto to_doubles = [](const std::string& v, const std::string& what) {
            std::vector<double> out;
            for (const auto& p : split_list(v)) out.push_back(parse_double(p, what));
            return out;
        };
        if (s.count("x_powers")) blk.x_powers = to_ints(s.at("x_powers"), "x_powers");
        if (s.count("y_powers")) blk.y_powers = to_ints(s.at("y_powers"), "y_powers");
        if (s.count("theta0")) blk.theta0 = to_doubles(s.at("theta0"), "theta0");
        if (s.count("lower")) blk.lower = to_doubles(s.at("lower"), "lower");
        if (s.count("upper")) blk.upper = to_doubles(s.at("upper"), "upper");
        if (s.count("budget")) blk.budget = int(parse_int(s.at("budget"), "budget"));
        if (s.count("restarts")) blk.restarts = int(parse_int(s.at("restarts"), "restarts"));
        if (s.count("seed")) blk.seed = std::uint64_t(parse_int(s.at("seed"), "seed"));
        if (s.count("samples")) blk.t_samples = int(parse_int(s.at("samples"), "samples"));
        if (s.count("range")) blk.t_range = parse_double(s.at("range"), "range");
        spec.search = std::move(blk);
    }

    if (sections.count("output")) {
        const Section& o = sections["output"];
        if (o.count("mesh")) spec.mesh_path = o.at("mesh");
        if (o.count("format")) spec.mesh_format = o.at("format");
        if (o.count("report")) spec.report_path = o.at("report");
    }
    return spec;
}

SpecFile SpecFile::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Strip SpecFile::build_strip() const
{
    AnalyticCurve curve(parse_expr(curve_x), parse_expr(curve_y), parse_expr(curve_z));
    if (has_normal)
        return make_strip(std::move(curve), parse_expr(normal_x), parse_expr(normal_y),
                          parse_expr(normal_z));
    return make_planar_strip(curve, phi.value_or(kPi / 2), grid.u_min, grid.u_max);
}

CurveFamily SpecFile::build_family() const
{
    if (!search) throw InputError("spec: [search] section is required for this command");
    const SpecSearchBlock& blk = *search;
    CurveFamily fam;
    if (!blk.x_base.empty()) fam.x_base = parse_expr(blk.x_base);
    if (!blk.y_base.empty()) fam.y_base = parse_expr(blk.y_base);
    fam.x_powers = blk.x_powers;
    fam.y_powers = blk.y_powers;
    const int k = fam.dim();
    auto to_vec = [&](const std::vector<double>& v, const char* what) {
        if (int(v.size()) != k)
            throw InputError(std::string("spec: [search] ") + what + " must list " +
                             std::to_string(k) + " values");
        Eigen::VectorXd out(k);
        for (int i = 0; i < k; ++i) out(i) = v[i];
        return out;
    };
    fam.theta0 = to_vec(blk.theta0, "theta0");
    fam.lower = to_vec(blk.lower, "lower");
    fam.upper = to_vec(blk.upper, "upper");
    fam.validate();
    return fam;
}

}  // namespace bjorling
