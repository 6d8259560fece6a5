#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "agmon/decay.hpp"
#include "agmon/weights.hpp"

namespace agmon::cli {

/// Malformed JSON; the message carries line and column.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed JSON that breaks the scenario schema; the message names the field.
class ValidationError : public Error {
public:
    using Error::Error;
};

inline constexpr int kSchemaVersion = 1;

enum class Stage { Spectrum, Fredholm, Eig, Decay, Certify, SymbolCheck };
std::string to_string(Stage s);

/// Parametric coefficient families; `params` keeps the validated raw parameters.
struct FieldSpec {
    std::string kind;
    nlohmann::json params;
};

struct WeightSpec {
    std::string kind = "radial";
    nlohmann::json params;
};

struct Tolerances {
    double eig = 1e-8;
    double slack = 0.1;
    double scan = 1e-8;
    int max_pairs = 64;
    int scan_xi_points = 0;     ///< 0 selects the library default
    int scan_directions = 0;    ///< weight directions per limit point; 0 selects the library default
    std::optional<FitWindow> fit_window;
};

struct Scenario {
    int schema = kSchemaVersion;
    Family family = Family::Schrodinger;
    int dimension = 1;
    int block = 1;

    std::optional<FieldSpec> rho;
    std::optional<FieldSpec> magnetic;
    std::optional<FieldSpec> potential;
    std::optional<FieldSpec> principal;
    std::optional<FieldSpec> quaternion;
    std::optional<FieldSpec> source;

    std::optional<nlohmann::json> limits;
    std::optional<WeightSpec> weight;
    PhysicalConstants constants{};
    Grid grid{};
    std::vector<Stage> pipeline;
    Tolerances tolerances{};
    std::optional<double> lambda;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool has_window = false;
    int decay_index = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    bool has(Stage s) const;
};

/// Parses and validates scenario text. `origin` prefixes diagnostics.
Scenario parse_scenario(const std::string& text, const std::string& origin = "scenario");
Scenario load_scenario(const std::string& path);

// Field construction from validated specs.
MetricField build_rho(const Scenario& s);
VectorField build_magnetic(const Scenario& s);
MatrixField build_potential(const Scenario& s);
ScalarField build_scalar_potential(const Scenario& s);
VectorField build_principal(const Scenario& s);
std::function<Quaternion(const Point&)> build_quaternion(const Scenario& s);
std::function<Eigen::Vector4cd(const Point&)> build_source(const Scenario& s);
Weight build_weight(const Scenario& s);
/// Declared limits when present, otherwise limits sampled along rays.
LimitSet build_limits(const Scenario& s);

}  // namespace agmon::cli
