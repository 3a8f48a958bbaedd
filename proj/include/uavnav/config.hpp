#pragma once

#include <string>

#include "uavnav/filter.hpp"
#include "uavnav/simulator.hpp"

namespace uavnav {

/// Everything a run needs: filter parameters plus the scenario description.
struct Config {
  FilterConfig filter;
  Scenario scenario;
};

/// Parses the dotted key-value config format. Unknown keys are hard errors.
/// Missing keys keep their defaults.
Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

/// Writes every known key with its current value.
std::string dump_config(const Config& cfg);

}  // namespace uavnav
