#include "demos.hpp"

#include <map>

#include "scenario.hpp"

namespace agmon::cli {

namespace {

using nlohmann::ordered_json;

ordered_json schrodinger_well_1d() {
    return {
        {"schema", kSchemaVersion},
        {"family", "schrodinger"},
        {"dimension", 1},
        {"fields",
         {{"rho", {{"kind", "identity"}}},
          {"magnetic", {{"kind", "zero"}}},
          {"potential", {{"kind", "rational_well"}, {"base", 2.0}, {"depth", 3.0}}}}},
        {"weight", {{"kind", "radial"}, {"rate", 1.0}}},
        {"grid", {{"half_width", 40.0}, {"points", 4001}}},
        {"window", {-1.0, 1.95}},
        {"lambda", 0.2},
        {"pipeline", {"spectrum", "fredholm", "eig", "decay", "certify", "symbol-check"}},
        {"seed", 0},
    };
}

ordered_json dirac_gap() {
    return {
        {"schema", kSchemaVersion},
        {"family", "dirac"},
        {"dimension", 1},
        {"fields",
         {{"rho", {{"kind", "identity"}}},
          {"magnetic", {{"kind", "zero"}}},
          {"potential", {{"kind", "rational_well"}, {"base", 0.0}, {"depth", -0.8}}}}},
        {"constants", {{"h", 1.0}, {"c", 1.0}, {"m", 1.0}, {"e", 1.0}}},
        {"weight", {{"kind", "radial"}, {"rate", 0.3}}},
        {"grid", {{"half_width", 30.0}, {"points", 1201}}},
        {"window", {-0.95, 0.95}},
        {"lambda", 0.5},
        {"pipeline", {"spectrum", "fredholm", "eig", "decay", "certify", "symbol-check"}},
        {"seed", 0},
    };
}

ordered_json mt_decay() {
    return {
        {"schema", kSchemaVersion},
        {"family", "mt"},
        {"dimension", 3},
        {"fields",
         {{"principal", {{"kind", "constant"}, {"vector", {1.0, 1.0, 1.0}}}},
          {"quaternion", {{"kind", "constant"}, {"vector", {2.0, 0.0, 0.0}}}},
          {"source", {{"kind", "bump"}, {"radius", 1.5}}}}},
        {"weight", {{"kind", "radial"}, {"rate", 1.8}}},
        {"grid", {{"half_width", 6.0}, {"points", 49}}},
        {"tolerances", {{"scan_xi_points", 9}, {"scan_directions", 26}}},
        {"pipeline", {"fredholm", "symbol-check", "decay", "certify"}},
        {"seed", 0},
    };
}

ordered_json pauli_2d() {
    return {
        {"schema", kSchemaVersion},
        {"family", "schrodinger"},
        {"dimension", 2},
        {"fields",
         {{"rho", {{"kind", "identity"}}},
          {"magnetic", {{"kind", "rotational"}, {"strength", 0.3}}},
          {"potential",
           {{"kind", "diagonal"},
            {"entries",
             {{{"kind", "rational_well"}, {"base", 2.0}, {"depth", 3.0}},
              {{"kind", "rational_well"}, {"base", 2.5}, {"depth", 3.0}}}}}}}},
        {"weight", {{"kind", "radial"}, {"rate", 0.5}}},
        {"grid", {{"half_width", 12.0}, {"points", 97}}},
        {"window", {-2.0, 1.9}},
        {"tolerances", {{"max_pairs", 4}, {"scan_xi_points", 33}, {"scan_directions", 16}}},
        {"lambda", 0.0},
        {"pipeline", {"spectrum", "fredholm", "eig", "decay", "certify", "symbol-check"}},
        {"seed", 0},
    };
}

const std::map<std::string, ordered_json (*)()>& registry() {
    static const std::map<std::string, ordered_json (*)()> demos{
        {"schrodinger-well-1d", schrodinger_well_1d},
        {"dirac-gap", dirac_gap},
        {"mt-decay", mt_decay},
        {"pauli-2d", pauli_2d},
    };
    return demos;
}

}  // namespace

std::vector<std::string> demo_names() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
}

std::string demo_scenario(const std::string& name) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw ValidationError("unknown demo '" + name + "'");
    return it->second().dump(2) + "\n";
}

}  // namespace agmon::cli
