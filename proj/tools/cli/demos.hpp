#pragma once

#include <string>
#include <vector>

namespace agmon::cli {

std::vector<std::string> demo_names();

/// Scenario JSON of a built-in demo; throws ValidationError for unknown names.
std::string demo_scenario(const std::string& name);

}  // namespace agmon::cli
