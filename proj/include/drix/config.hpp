#pragma once

#include <map>
#include <string>

#include "drix/pipeline.hpp"
#include "drix/synth.hpp"

namespace drix::config {

/// Flat "[section]\nkey = value" file. '#' starts a comment; keys are stored
/// as "section.key". Unknown keys are rejected when a typed config is built,
/// so typos surface immediately.
struct KeyValues {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
};

KeyValues parse_text(const std::string& text, const std::string& origin = "<string>");
KeyValues parse_file(const std::string& path);

/// Builds the pipeline configuration, applying documented defaults for every
/// absent key. Relative input paths are resolved against base_dir.
pipeline::PipelineConfig load_pipeline_config(const KeyValues& kv, const std::string& base_dir);

/// [synth] section over the generator defaults.
synth::SynthConfig load_synth_config(const KeyValues& kv);

/// Deterministic echo of the effective configuration (sorted keys), embedded
/// in reports.
std::string render_effective(const pipeline::PipelineConfig& config);

}  // namespace drix::config
