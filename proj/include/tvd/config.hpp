#ifndef TVD_CONFIG_HPP
#define TVD_CONFIG_HPP

#include <string>

#include "tvd/harness.hpp"

namespace tvd {

// Flat key-value config text: one `key = value` per line, `#` comments.
// Unknown keys are rejected with the offending key named in the exception.
// A file written by save_config reloads to a config that reproduces the same
// outputs byte for byte.

std::string config_to_text(const ExperimentConfig& cfg);
ExperimentConfig config_from_text(const std::string& text);  // throws invalid_argument

void save_config(const std::string& path, const ExperimentConfig& cfg,
                 const std::string& trailing_comment = "");
ExperimentConfig load_config(const std::string& path);

// Applies one `key = value` assignment; shared by the file loader and CLI
// overrides. Throws std::invalid_argument for unknown keys or bad values.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

}  // namespace tvd

#endif
