#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bjorling/patch.hpp"
#include "bjorling/strip.hpp"

namespace bjorling {

/// Built-in strip with its natural evaluation window, optional closed-form
/// surface oracle and the properties expected of it.
struct CatalogEntry {
    std::string name;
    Strip strip;
    std::map<std::string, double> parameters;
    DomainGrid default_grid;
    std::function<Vec3(double, double)> oracle;  // closed-form X(u,v) when known
    std::optional<bool> self_cpg;
    std::optional<bool> self_adjoint;
    std::optional<int> weak_cpg_k;  // set for the weak-CPG family entries
    std::string cpg_partner;        // descriptive, may be empty
};

/// Instantiates a catalog strip. Accepted names:
///   circle[(r)], catenary, parabola[(a)], cycloid, ellipse[(a,b)],
///   enneper_cubic, line_rotating_normal, weak_cpg(k), plane_line
/// Parameters are positional numbers in parentheses. Throws InputError for
/// unknown names or invalid parameters (e.g. weak_cpg with k < 1).
CatalogEntry builtin(const std::string& spec);

std::vector<std::string> catalog_names();

/// Exact surfaces for acceptance testing: catenoid, helicoid, enneper, plane.
std::function<Vec3(double, double)> closed_form(const std::string& name);

}  // namespace bjorling
