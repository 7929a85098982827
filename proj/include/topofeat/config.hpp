#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "topofeat/pipeline.hpp"

namespace topofeat {

/// Parses the YAML config schema (JSON, being a YAML subset, also works, so a
/// plain key/value mapping serialized by any host language is accepted).
/// Missing keys keep their defaults; unknown keys are a ConfigError.
PipelineConfig parse_config(std::string_view text);

PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical YAML for `cfg`. With comments it is the `config init` template.
std::string emit_config(const PipelineConfig& cfg, bool with_comments = false);

/// 16 hex digits of FNV-1a/64 over the canonical emission.
std::string config_hash(const PipelineConfig& cfg);

}  // namespace topofeat
