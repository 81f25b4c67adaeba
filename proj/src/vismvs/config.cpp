#include "vismvs/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace vismvs {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

} // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

const std::string& ConfigFile::get(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end())
        throw std::invalid_argument("config: missing section [" + section + "]");
    const auto k = s->second.find(key);
    if (k == s->second.end())
        throw std::invalid_argument("config: missing key " + key + " in [" + section + "]");
    return k->second;
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
    sections_[section][key] = value;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    const std::string& v = get(section, key);
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size())
        throw std::invalid_argument("config: bad number for " + key + ": " + v);
    return out;
}

long long ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const std::string& v = get(section, key);
    std::size_t pos = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size())
        throw std::invalid_argument("config: bad integer for " + key + ": " + v);
    return out;
}

std::string ConfigFile::serialize() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [section, keys] : sections_) {
        if (!first) out << "\n";
        first = false;
        out << "[" << section << "]\n";
        for (const auto& [key, value] : keys)
            out << key << " = " << value << "\n";
    }
    return out.str();
}

PipelineConfig default_pipeline_config() {
    PipelineConfig cfg;
    cfg.cascade.d_min = 0.0;
    cfg.cascade.delta = 0.0;
    cfg.cascade.stages = {
        StageConfig{32, 0.0, 4, 2, 1, 0.06},
        StageConfig{16, 0.25, 2, 2, 1, 0.06},
        StageConfig{8, 0.0625, 1, 2, 1, 0.06},
    };
    cfg.cascade.strategy = FusionStrategy::vis_weighted;
    cfg.cascade.fu = FuParams{2.0, -1.0};
    cfg.filter = dtu_filter_preset();
    cfg.n_views = 7;
    cfg.seed = 1;
    cfg.jobs = 0;
    return cfg;
}

namespace {

const char* stage_section(int k) {
    switch (k) {
    case 0: return "stage1";
    case 1: return "stage2";
    default: return "stage3";
    }
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"range", {"d_min", "delta"}},
        {"stage1", {"n_hypotheses", "scale", "box_radius", "depth_radius", "temperature"}},
        {"stage2",
         {"n_hypotheses", "range_scale", "scale", "box_radius", "depth_radius", "temperature"}},
        {"stage3",
         {"n_hypotheses", "range_scale", "scale", "box_radius", "depth_radius", "temperature"}},
        {"fusion", {"strategy"}},
        {"uncertainty", {"a", "b"}},
        {"filter",
         {"threshold1", "threshold2", "threshold3", "min_views", "max_reproj_px",
          "max_rel_depth_err"}},
        {"run", {"n_views", "seed", "jobs"}},
    };
    return keys;
}

} // namespace

PipelineConfig pipeline_config_from(const ConfigFile& file) {
    // Reject unknown sections/keys so typos fail loudly.
    for (const auto& [section, keys] : file.sections()) {
        const auto known = known_keys().find(section);
        if (known == known_keys().end())
            throw std::invalid_argument("config: unknown section [" + section + "]");
        for (const auto& [key, value] : keys) {
            if (std::find(known->second.begin(), known->second.end(), key) ==
                known->second.end())
                throw std::invalid_argument("config: unknown key " + key + " in [" +
                                            section + "]");
        }
    }

    PipelineConfig cfg = default_pipeline_config();
    if (file.has("range", "d_min")) cfg.cascade.d_min = file.get_double("range", "d_min");
    if (file.has("range", "delta")) cfg.cascade.delta = file.get_double("range", "delta");
    for (int k = 0; k < 3; ++k) {
        const std::string s = stage_section(k);
        StageConfig& st = cfg.cascade.stages[k];
        if (file.has(s, "n_hypotheses"))
            st.n_hypotheses = static_cast<int>(file.get_int(s, "n_hypotheses"));
        if (k > 0 && file.has(s, "range_scale"))
            st.range_scale = file.get_double(s, "range_scale");
        if (file.has(s, "scale")) st.scale_divisor = static_cast<int>(file.get_int(s, "scale"));
        if (file.has(s, "box_radius"))
            st.box_radius = static_cast<int>(file.get_int(s, "box_radius"));
        if (file.has(s, "depth_radius"))
            st.depth_radius = static_cast<int>(file.get_int(s, "depth_radius"));
        if (file.has(s, "temperature")) st.temperature = file.get_double(s, "temperature");
    }
    if (file.has("fusion", "strategy"))
        cfg.cascade.strategy = parse_fusion_strategy(file.get("fusion", "strategy"));
    if (file.has("uncertainty", "a")) cfg.cascade.fu.a = file.get_double("uncertainty", "a");
    if (file.has("uncertainty", "b")) cfg.cascade.fu.b = file.get_double("uncertainty", "b");
    for (int k = 0; k < 3; ++k) {
        const std::string key = "threshold" + std::to_string(k + 1);
        if (file.has("filter", key))
            cfg.filter.prob_thresholds[k] = file.get_double("filter", key);
    }
    if (file.has("filter", "min_views"))
        cfg.filter.min_consistent_views = static_cast<int>(file.get_int("filter", "min_views"));
    if (file.has("filter", "max_reproj_px"))
        cfg.filter.max_reproj_px = file.get_double("filter", "max_reproj_px");
    if (file.has("filter", "max_rel_depth_err"))
        cfg.filter.max_rel_depth_err = file.get_double("filter", "max_rel_depth_err");
    if (file.has("run", "n_views")) cfg.n_views = static_cast<int>(file.get_int("run", "n_views"));
    if (file.has("run", "seed"))
        cfg.seed = static_cast<std::uint64_t>(file.get_int("run", "seed"));
    if (file.has("run", "jobs")) cfg.jobs = static_cast<int>(file.get_int("run", "jobs"));

    if (cfg.n_views < 1) throw std::invalid_argument("config: n_views must be >= 1");
    // Range may legitimately be absent (taken from the scene); everything
    // else must validate now.
    CascadeConfig probe = cfg.cascade;
    if (probe.d_min <= 0.0 || probe.delta <= 0.0) {
        probe.d_min = 1.0;
        probe.delta = 1.0;
    }
    probe.validate();
    return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return pipeline_config_from(ConfigFile::parse_file(path));
}

std::string serialize_pipeline_config(const PipelineConfig& config) {
    ConfigFile file;
    if (config.cascade.d_min > 0.0) file.set("range", "d_min", format_double(config.cascade.d_min));
    if (config.cascade.delta > 0.0) file.set("range", "delta", format_double(config.cascade.delta));
    for (int k = 0; k < 3; ++k) {
        const std::string s = stage_section(k);
        const StageConfig& st = config.cascade.stages[k];
        file.set(s, "n_hypotheses", std::to_string(st.n_hypotheses));
        if (k > 0) file.set(s, "range_scale", format_double(st.range_scale));
        file.set(s, "scale", std::to_string(st.scale_divisor));
        file.set(s, "box_radius", std::to_string(st.box_radius));
        file.set(s, "depth_radius", std::to_string(st.depth_radius));
        file.set(s, "temperature", format_double(st.temperature));
    }
    file.set("fusion", "strategy", fusion_strategy_name(config.cascade.strategy));
    file.set("uncertainty", "a", format_double(config.cascade.fu.a));
    file.set("uncertainty", "b", format_double(config.cascade.fu.b));
    for (int k = 0; k < 3; ++k)
        file.set("filter", "threshold" + std::to_string(k + 1),
                 format_double(config.filter.prob_thresholds[k]));
    file.set("filter", "min_views", std::to_string(config.filter.min_consistent_views));
    file.set("filter", "max_reproj_px", format_double(config.filter.max_reproj_px));
    file.set("filter", "max_rel_depth_err", format_double(config.filter.max_rel_depth_err));
    file.set("run", "n_views", std::to_string(config.n_views));
    file.set("run", "seed", std::to_string(config.seed));
    file.set("run", "jobs", std::to_string(config.jobs));
    return file.serialize();
}

void save_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("config: cannot open " + path.string() + " for writing");
    out << serialize_pipeline_config(config);
    if (!out)
        throw std::runtime_error("config: write failed for " + path.string());
}

} // namespace vismvs
