#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bjorling/patch.hpp"
#include "bjorling/search.hpp"
#include "bjorling/strip.hpp"

namespace bjorling {

struct SpecCheck {
    std::string name;
    double tol = defaults::check_tol;
};

struct SpecSearchBlock {
    std::string x_base, y_base;  // optional expression strings
    std::vector<int> x_powers, y_powers;
    std::vector<double> theta0, lower, upper;
    int budget = 2000;
    int restarts = 5;
    std::uint64_t seed = 1;
    int t_samples = 33;
    double t_range = 0.8;
};

/// Flat INI-style run description:
///   [curve]  x/y/z expression strings (double-quoted), optional phi
///   [normal] optional explicit x/y/z normal expressions
///   [domain] u = MIN:MAX, v = MIN:MAX, nu, nv, base = RE[,IM]
///   [checks] check-name = tolerance lines
///   [search] optional family block
///   [output] mesh, format, report
struct SpecFile {
    std::string curve_x = "0", curve_y = "0", curve_z = "0";
    std::optional<double> phi;
    bool has_normal = false;
    std::string normal_x, normal_y, normal_z;

    DomainGrid grid;
    std::vector<SpecCheck> checks;
    std::optional<SpecSearchBlock> search;

    std::string mesh_path;
    std::string mesh_format = "obj";
    std::string report_path;

    std::string raw;  // exact bytes the spec was parsed from (digest input)

    static SpecFile parse(const std::string& text);
    static SpecFile load(const std::string& path);

    Strip build_strip() const;
    CurveFamily build_family() const;  // requires [search]
};

}  // namespace bjorling
