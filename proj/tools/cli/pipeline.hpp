#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "agmon/decay.hpp"
#include "agmon/eigensolve.hpp"
#include "scenario.hpp"

namespace agmon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolated = 2;

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

/// Runs the scenario's pipeline, writes result files into out_dir and a summary
/// table to `summary`. Returns kExitOk or kExitViolated; errors propagate.
int run_scenario(const Scenario& s, const RunOptions& opt, std::ostream& summary);

/// JSON encoding of a spectrum: [[lo, hi], ...] with null for infinite ends.
nlohmann::ordered_json spectrum_json(const SpectrumSet& set);

/// %.17g
std::string format_number(double v);

}  // namespace agmon::cli
