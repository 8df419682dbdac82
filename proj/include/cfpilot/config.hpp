#pragma once

#include <string>

#include "cfpilot/harness.hpp"

namespace cfpilot {

// JSON config with sections radio / topology / solver / experiment. Missing
// fields keep their defaults.
ExperimentSpec load_spec(const std::string& path);
ExperimentSpec spec_from_json_text(const std::string& text);

// Dotted-path override, e.g. "radio.num_pilots=3" or
// "experiment.schemes=[\"random\",\"ideal\"]". Values are parsed as JSON,
// falling back to a plain string.
void apply_override(ExperimentSpec& spec, const std::string& key_value);

std::string spec_to_json_text(const ExperimentSpec& spec);

}  // namespace cfpilot
