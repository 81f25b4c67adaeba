#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "vismvs/cascade.hpp"
#include "vismvs/filtering.hpp"

namespace vismvs {

/// Plain-text "key = value" file with [section] headers and '#' comments.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::filesystem::path& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, const std::string& value);

    double get_double(const std::string& section, const std::string& key) const;
    long long get_int(const std::string& section, const std::string& key) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

    std::string serialize() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Full run configuration; defaults follow the reference constants
/// (32/16/8 hypotheses, w2 = 1/4, w3 = 1/16, a = 2, b = -1). d_min/delta
/// of 0 means "take the range from the scene manifest".
struct PipelineConfig {
    CascadeConfig cascade;
    FilterConfig filter;
    int n_views = 7;
    std::uint64_t seed = 1;
    int jobs = 0;

    bool operator==(const PipelineConfig&) const = default;
};

PipelineConfig default_pipeline_config();
PipelineConfig pipeline_config_from(const ConfigFile& file);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
std::string serialize_pipeline_config(const PipelineConfig& config);
void save_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config);

} // namespace vismvs
