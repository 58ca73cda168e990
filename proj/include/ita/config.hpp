#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ita/analytics.hpp"
#include "ita/errors.hpp"
#include "ita/sim_time.hpp"
#include "ita/sources.hpp"

namespace ita {

inline constexpr std::string_view kDefaultDatasetUrl = "http://db.csail.mit.edu/labdata/data.txt.gz";

struct RunConfig {
    SimTime duration = SimTime::from_seconds(1000);
    std::uint64_t seed = 1;
    SimTime sample_interval = SimTime::from_seconds(1);

    bool operator==(const RunConfig&) const = default;
};

struct LinkSpec {
    std::uint64_t rate_bps = 0;
    SimTime prop_delay;

    bool operator==(const LinkSpec&) const = default;
};

/// Channel speeds: 1 Gbps from the sources, 100 Mbps towards the cloud.
struct LinkRates {
    LinkSpec source_to_inn{1'000'000'000, {}};
    LinkSpec source_to_edge{1'000'000'000, {}};
    LinkSpec inn_to_cloud{100'000'000, {}};
    LinkSpec edge_to_cloud{100'000'000, {}};

    bool operator==(const LinkRates&) const = default;
};

struct PriorityConfig {
    int raw_sensor = 0;
    int image_frame = 1;
    std::map<std::string, int> source_rank;  // by source name

    bool operator==(const PriorityConfig&) const = default;
};

struct ScalingStep {
    SimTime at;
    std::uint32_t count = 0;

    bool operator==(const ScalingStep&) const = default;
};

struct ScalingConfig {
    std::vector<ScalingStep> schedule{{SimTime::from_seconds(500), 3}, {SimTime::from_seconds(800), 4}};
    std::string clone_of = "sensor";

    bool operator==(const ScalingConfig&) const = default;
};

enum class DatasetMode : std::uint8_t { Auto, Replay, Synthetic };

constexpr std::string_view to_string(DatasetMode m) noexcept {
    switch (m) {
        case DatasetMode::Auto: return "auto";
        case DatasetMode::Replay: return "replay";
        case DatasetMode::Synthetic: return "synthetic";
    }
    return "?";
}

struct DatasetConfig {
    DatasetMode mode = DatasetMode::Auto;
    std::string path;  // empty: <cache_dir>/data.txt.gz
    std::string url{kDefaultDatasetUrl};
    std::string cache_dir;
    std::set<std::uint32_t> motes;  // empty: all motes
    std::optional<std::size_t> max_records;
    bool strict = false;  // error instead of wrapping around when exhausted
    SyntheticParams synthetic;

    std::string resolved_path() const { return path.empty() ? cache_dir + "/data.txt.gz" : path; }

    bool operator==(const DatasetConfig&) const = default;
};

struct Config {
    RunConfig run;
    LinkRates links;
    std::vector<SourceSpec> sources;
    RuleSet rules;
    RuleMode rule_mode = RuleMode::Either;
    EdgeParams edge;
    SimTime cloud_algorithm_time = SimTime::from_micros(10'000);
    PriorityConfig priority;
    ScalingConfig scaling;
    DatasetConfig dataset;

    const SourceSpec* find_source(std::string_view name) const {
        for (const auto& s : sources) {
            if (s.name == name) return &s;
        }
        return nullptr;
    }

    bool operator==(const Config&) const = default;
};

/// Default sensor: 49 000-byte messages every 0.5 s.
inline SourceSpec default_sensor() {
    SourceSpec s;
    s.name = "sensor";
    s.kind = SourceKind::Sensor;
    s.emit_interval = SimTime::from_micros(500'000);
    s.start_at = s.emit_interval;
    s.payload_bytes = 49'000;
    return s;
}

/// Default camera: ten 49 500-byte frames batched into one message every 0.5 s.
inline SourceSpec default_camera() {
    SourceSpec s;
    s.name = "camera";
    s.kind = SourceKind::Camera;
    s.emit_interval = SimTime::from_micros(500'000);
    s.start_at = s.emit_interval;
    s.frames_per_message = 10;
    s.payload_bytes = 49'500 * 10;
    return s;
}

inline std::string default_cache_dir() {
    if (const char* d = std::getenv("ITA_CACHE_DIR"); d && *d) return d;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::string(x) + "/ita";
    if (const char* h = std::getenv("HOME"); h && *h) return std::string(h) + "/.cache/ita";
    return ".ita-cache";
}

inline void validate(const Config& cfg) {
    if (cfg.run.duration.micros() <= 0) throw ConfigError("run.duration", "must be positive");
    if (cfg.run.sample_interval.micros() <= 0) throw ConfigError("run.sample_interval", "must be positive");
    const std::pair<const char*, const LinkSpec*> links[] = {{"links.source_to_inn", &cfg.links.source_to_inn},
                                                             {"links.source_to_edge", &cfg.links.source_to_edge},
                                                             {"links.inn_to_cloud", &cfg.links.inn_to_cloud},
                                                             {"links.edge_to_cloud", &cfg.links.edge_to_cloud}};
    for (const auto& [key, l] : links) {
        if (l->rate_bps == 0) throw ConfigError(key, "rate must be positive");
    }
    if (cfg.sources.empty()) throw ConfigError("source", "at least one source is required");
    std::set<std::string> names;
    for (const auto& s : cfg.sources) {
        const std::string key = "source." + s.name;
        if (!names.insert(s.name).second) throw ConfigError(key, "duplicate source name");
        if (s.emit_interval.micros() <= 0) throw ConfigError(key + ".interval", "must be positive");
        if (s.payload_bytes == 0) throw ConfigError(key + ".payload_bytes", "must be positive");
        if (s.frames_per_message == 0) throw ConfigError(key + ".frames_per_message", "must be positive");
    }
    for (const auto& [key, v] : {std::pair{"rules.temp_threshold", cfg.rules.temp_threshold},
                                 std::pair{"rules.humidity_threshold", cfg.rules.humidity_threshold},
                                 std::pair{"rules.light_threshold", cfg.rules.light_threshold},
                                 std::pair{"rules.voltage_threshold", cfg.rules.voltage_threshold}}) {
        if (std::isnan(v)) throw ConfigError(key, "must be a number");
    }
    if (cfg.edge.buffer_storage == 0) throw ConfigError("edge.buffer_storage", "must be at least 1");
    if (cfg.edge.analytics_deadline.micros() <= 0) throw ConfigError("edge.analytics_deadline", "must be positive");
    if (cfg.edge.algorithm_time.micros() <= 0) throw ConfigError("edge.algorithm_time", "must be positive");
    for (const auto& [name, rank] : cfg.priority.source_rank) {
        (void)rank;
        if (!cfg.find_source(name)) throw ConfigError("priority.source." + name, "no such source");
    }
    if (!cfg.scaling.schedule.empty()) {
        if (!cfg.find_source(cfg.scaling.clone_of)) throw ConfigError("scaling.clone_of", "no such source");
    }
    for (const auto& step : cfg.scaling.schedule) {
        if (step.count == 0) throw ConfigError("scaling.schedule", "step count must be positive");
    }
    try {
        cfg.dataset.synthetic.validate();
    } catch (const BadParams& e) {
        throw ConfigError("dataset.synthetic", e.what());
    }
}

namespace detail {

inline std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
        s = s.substr(1, s.size() - 2);
    }
    return std::string(s);
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline std::string fmt_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline std::string fmt_rate(std::uint64_t bps) {
    if (bps % 1'000'000'000 == 0) return std::to_string(bps / 1'000'000'000) + "Gbps";
    if (bps % 1'000'000 == 0) return std::to_string(bps / 1'000'000) + "Mbps";
    if (bps % 1'000 == 0) return std::to_string(bps / 1'000) + "Kbps";
    return std::to_string(bps) + "bps";
}

}  // namespace detail

/// Parses "100Mbps", "1 Gbps", "2.5Mbps" or a plain bits-per-second integer.
inline std::uint64_t parse_rate(std::string_view text) {
    const std::string s = detail::trim(text);
    std::size_t i = 0;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
    const std::string number = s.substr(0, i);
    const std::string unit = detail::lower(detail::trim(s.substr(i)));
    double value = 0;
    auto [p, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (number.empty() || ec != std::errc{} || p != number.data() + number.size()) {
        throw BadParams("malformed rate '" + std::string(text) + "'");
    }
    double mult = 0;
    if (unit.empty() || unit == "bps") mult = 1;
    else if (unit == "kbps") mult = 1e3;
    else if (unit == "mbps") mult = 1e6;
    else if (unit == "gbps") mult = 1e9;
    else throw BadParams("unknown rate unit '" + unit + "'");
    const double bps = value * mult;
    if (!(bps >= 1) || bps > 1e18 || bps != std::floor(bps)) {
        throw BadParams("rate '" + std::string(text) + "' must be a positive whole number of bits/s");
    }
    return static_cast<std::uint64_t>(bps);
}

namespace detail {

/// Typed access to one INI section with unknown-key rejection.
class Section {
public:
    Section(std::string name, const boost::property_tree::ptree& tree) : name_(std::move(name)), tree_(tree) {}

    std::optional<std::string> take(const std::string& key) {
        seen_.insert(key);
        auto child = tree_.get_child_optional(boost::property_tree::ptree::path_type(key, '\0'));
        if (!child) return std::nullopt;
        return trim(child->data());
    }

    template <class F>
    void with(const std::string& key, F&& apply) {
        if (auto v = take(key)) {
            try {
                apply(*v);
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                throw ConfigError(name_ + "." + key, e.what());
            }
        }
    }

    void time(const std::string& key, SimTime& out) {
        with(key, [&](const std::string& v) { out = SimTime::parse(v); });
    }

    void real(const std::string& key, double& out) {
        with(key, [&](const std::string& v) {
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (v.empty() || ec != std::errc{} || p != v.data() + v.size() || std::isnan(out)) {
                throw BadParams("expected a number, got '" + v + "'");
            }
        });
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        with(key, [&](const std::string& v) {
            if (!parse_int(v, out)) throw BadParams("expected an integer, got '" + v + "'");
        });
    }

    void boolean(const std::string& key, bool& out) {
        with(key, [&](const std::string& v) {
            const std::string l = lower(v);
            if (l == "true" || l == "yes" || l == "1") out = true;
            else if (l == "false" || l == "no" || l == "0") out = false;
            else throw BadParams("expected true/false, got '" + v + "'");
        });
    }

    void rate(const std::string& key, std::uint64_t& out) {
        with(key, [&](const std::string& v) { out = parse_rate(v); });
    }

    const boost::property_tree::ptree& tree() const { return tree_; }
    const std::string& name() const { return name_; }

    void reject_unknown() const {
        for (const auto& [k, v] : tree_) {
            (void)v;
            if (!seen_.contains(k)) throw ConfigError(name_ + "." + k, "unknown key");
        }
    }

private:
    std::string name_;
    const boost::property_tree::ptree& tree_;
    std::set<std::string> seen_;
};

inline RuleMode parse_rule_mode(const std::string& v) {
    const std::string l = lower(v);
    if (l == "rule1") return RuleMode::Rule1;
    if (l == "rule2") return RuleMode::Rule2;
    if (l == "either") return RuleMode::Either;
    throw BadParams("expected rule1|rule2|either, got '" + v + "'");
}

inline std::vector<ScalingStep> parse_schedule(const std::string& v) {
    std::vector<ScalingStep> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw BadParams("expected <time>:<count>, got '" + item + "'");
        ScalingStep step;
        step.at = SimTime::parse(item.substr(0, colon));
        const std::string count = trim(item.substr(colon + 1));
        if (!parse_int(count, step.count)) throw BadParams("bad count in '" + item + "'");
        out.push_back(step);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
    return out;
}

inline std::set<std::uint32_t> parse_motes(const std::string& v) {
    std::set<std::uint32_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::uint32_t id = 0;
        if (!parse_int(item, id)) throw BadParams("bad mote id '" + item + "'");
        out.insert(id);
    }
    return out;
}

inline void parse_source(Section& sec, SourceSpec& spec, bool is_new) {
    sec.with("kind", [&](const std::string& v) {
        const std::string l = lower(v);
        if (l == "sensor") spec.kind = SourceKind::Sensor;
        else if (l == "camera") spec.kind = SourceKind::Camera;
        else throw BadParams("expected sensor|camera, got '" + v + "'");
    });
    if (is_new && !sec.take("kind")) throw ConfigError(sec.name() + ".kind", "required for a new source");
    if (is_new && spec.kind == SourceKind::Camera) {
        spec.frames_per_message = 10;
        spec.payload_bytes = 49'500 * 10;
    }
    std::optional<SimTime> start;
    sec.time("interval", spec.emit_interval);
    sec.with("start_at", [&](const std::string& v) { start = SimTime::parse(v); });
    if (spec.kind == SourceKind::Sensor) {
        sec.integer("payload_bytes", spec.payload_bytes);
        sec.with("rule_mode", [&](const std::string& v) { spec.rule_mode = parse_rule_mode(v); });
    } else {
        std::uint64_t frame_bytes = spec.payload_bytes / spec.frames_per_message;
        sec.integer("frame_bytes", frame_bytes);
        sec.integer("frames_per_message", spec.frames_per_message);
        spec.payload_bytes = frame_bytes * spec.frames_per_message;
    }
    spec.start_at = start.value_or(spec.emit_interval);
    sec.reject_unknown();
}

}  // namespace detail

/// Parses config text. Every key is optional; missing keys keep their
/// defaults and unknown sections or keys are errors.
inline Config parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree root;
    try {
        std::istringstream in(text);
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", std::string("syntax error: ") + e.what());
    }

    Config cfg;
    cfg.sources = {default_sensor(), default_camera()};
    cfg.dataset.cache_dir = default_cache_dir();

    auto section = [&](const std::string& name) -> std::optional<detail::Section> {
        auto child = root.get_child_optional(pt::ptree::path_type(name, '\0'));
        if (!child) return std::nullopt;
        return detail::Section(name, *child);
    };

    for (const auto& [name, child] : root) {
        static const std::set<std::string> known = {"run",      "links",   "rules",   "edge",
                                                    "cloud",    "priority", "scaling", "dataset"};
        if (!child.data().empty() && child.empty()) throw ConfigError(name, "key outside of any section");
        if (!known.contains(name) && !name.starts_with("source.")) throw ConfigError(name, "unknown section");
    }

    if (auto s = section("run")) {
        s->time("duration", cfg.run.duration);
        s->integer("seed", cfg.run.seed);
        s->time("sample_interval", cfg.run.sample_interval);
        s->reject_unknown();
    }
    if (auto s = section("links")) {
        const std::pair<const char*, LinkSpec*> links[] = {{"source_to_inn", &cfg.links.source_to_inn},
                                                           {"source_to_edge", &cfg.links.source_to_edge},
                                                           {"inn_to_cloud", &cfg.links.inn_to_cloud},
                                                           {"edge_to_cloud", &cfg.links.edge_to_cloud}};
        for (const auto& [key, l] : links) {
            s->rate(key, l->rate_bps);
            s->time(std::string(key) + "_delay", l->prop_delay);
        }
        s->reject_unknown();
    }
    if (auto s = section("rules")) {
        s->real("temp_threshold", cfg.rules.temp_threshold);
        s->real("humidity_threshold", cfg.rules.humidity_threshold);
        s->real("light_threshold", cfg.rules.light_threshold);
        s->real("voltage_threshold", cfg.rules.voltage_threshold);
        s->with("mode", [&](const std::string& v) { cfg.rule_mode = detail::parse_rule_mode(v); });
        s->reject_unknown();
    }
    if (auto s = section("edge")) {
        s->time("analytics_deadline", cfg.edge.analytics_deadline);
        s->integer("buffer_storage", cfg.edge.buffer_storage);
        s->time("algorithm_time", cfg.edge.algorithm_time);
        s->with("overflow", [&](const std::string& v) {
            const std::string l = detail::lower(v);
            if (l == "forward") cfg.edge.overflow = OverflowPolicy::Forward;
            else if (l == "drop") cfg.edge.overflow = OverflowPolicy::Drop;
            else throw BadParams("expected forward|drop, got '" + v + "'");
        });
        s->reject_unknown();
    }
    if (auto s = section("cloud")) {
        s->time("algorithm_time", cfg.cloud_algorithm_time);
        s->reject_unknown();
    }

    for (const auto& [name, child] : root) {
        if (!name.starts_with("source.")) continue;
        const std::string src = name.substr(7);
        if (src.empty()) throw ConfigError(name, "source needs a name");
        detail::Section sec(name, child);
        bool enabled = true;
        sec.boolean("enabled", enabled);
        auto it = std::find_if(cfg.sources.begin(), cfg.sources.end(), [&](const auto& s) { return s.name == src; });
        if (!enabled) {
            for (const auto& [k, v] : child) {
                (void)v;
                if (k != "enabled") throw ConfigError(name + "." + k, "disabled source takes no other keys");
            }
            if (it != cfg.sources.end()) cfg.sources.erase(it);
            continue;
        }
        if (it == cfg.sources.end()) {
            SourceSpec spec;
            spec.name = src;
            detail::parse_source(sec, spec, true);
            cfg.sources.push_back(std::move(spec));
        } else {
            const SourceKind before = it->kind;
            detail::parse_source(sec, *it, false);
            if (it->kind != before) throw ConfigError(name + ".kind", "cannot change the kind of a built-in source");
        }
    }

    if (auto s = section("priority")) {
        s->integer("raw_sensor", cfg.priority.raw_sensor);
        s->integer("image_frame", cfg.priority.image_frame);
        for (const auto& [k, v] : s->tree()) {
            (void)v;
            if (k.starts_with("source.")) {
                int rank = 0;
                s->integer(k, rank);
                cfg.priority.source_rank[k.substr(7)] = rank;
            }
        }
        s->reject_unknown();
    }
    if (auto s = section("scaling")) {
        s->with("schedule", [&](const std::string& v) { cfg.scaling.schedule = detail::parse_schedule(v); });
        s->with("clone_of", [&](const std::string& v) { cfg.scaling.clone_of = v; });
        s->reject_unknown();
    }
    if (auto s = section("dataset")) {
        s->with("mode", [&](const std::string& v) {
            const std::string l = detail::lower(v);
            if (l == "auto") cfg.dataset.mode = DatasetMode::Auto;
            else if (l == "replay") cfg.dataset.mode = DatasetMode::Replay;
            else if (l == "synthetic") cfg.dataset.mode = DatasetMode::Synthetic;
            else throw BadParams("expected auto|replay|synthetic, got '" + v + "'");
        });
        s->with("path", [&](const std::string& v) { cfg.dataset.path = v; });
        s->with("url", [&](const std::string& v) { cfg.dataset.url = v; });
        s->with("cache_dir", [&](const std::string& v) {
            if (!v.empty()) cfg.dataset.cache_dir = v;
        });
        s->with("motes", [&](const std::string& v) { cfg.dataset.motes = detail::parse_motes(v); });
        s->with("max_records", [&](const std::string& v) {
            if (v.empty()) {
                cfg.dataset.max_records.reset();
                return;
            }
            std::size_t n = 0;
            if (!detail::parse_int(v, n)) throw BadParams("expected an integer, got '" + v + "'");
            cfg.dataset.max_records = n;
        });
        s->boolean("strict", cfg.dataset.strict);
        auto& syn = cfg.dataset.synthetic;
        const std::pair<const char*, Range*> ranges[] = {{"temperature", &syn.temperature},
                                                         {"humidity", &syn.humidity},
                                                         {"light", &syn.light},
                                                         {"voltage", &syn.voltage}};
        for (const auto& [key, r] : ranges) {
            s->real(std::string(key) + "_min", r->lo);
            s->real(std::string(key) + "_max", r->hi);
        }
        s->reject_unknown();
    }

    if (const char* url = std::getenv("ITA_DATASET_URL"); url && *url) cfg.dataset.url = url;

    validate(cfg);
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

inline Config default_config() { return parse_config(""); }

/// Renders a fully-resolved config that parse_config reads back unchanged.
inline std::string to_ini(const Config& cfg) {
    using detail::fmt_double;
    std::ostringstream o;
    o << "[run]\n"
      << "duration = " << cfg.run.duration << "\n"
      << "seed = " << cfg.run.seed << "\n"
      << "sample_interval = " << cfg.run.sample_interval << "\n\n";
    o << "[links]\n";
    const std::pair<const char*, const LinkSpec*> links[] = {{"source_to_inn", &cfg.links.source_to_inn},
                                                             {"source_to_edge", &cfg.links.source_to_edge},
                                                             {"inn_to_cloud", &cfg.links.inn_to_cloud},
                                                             {"edge_to_cloud", &cfg.links.edge_to_cloud}};
    for (const auto& [key, l] : links) {
        o << key << " = " << detail::fmt_rate(l->rate_bps) << "\n" << key << "_delay = " << l->prop_delay << "\n";
    }
    o << "\n[rules]\n"
      << "temp_threshold = " << fmt_double(cfg.rules.temp_threshold) << "\n"
      << "humidity_threshold = " << fmt_double(cfg.rules.humidity_threshold) << "\n"
      << "light_threshold = " << fmt_double(cfg.rules.light_threshold) << "\n"
      << "voltage_threshold = " << fmt_double(cfg.rules.voltage_threshold) << "\n"
      << "mode = " << to_string(cfg.rule_mode) << "\n\n";
    o << "[edge]\n"
      << "analytics_deadline = " << cfg.edge.analytics_deadline << "\n"
      << "buffer_storage = " << cfg.edge.buffer_storage << "\n"
      << "algorithm_time = " << cfg.edge.algorithm_time << "\n"
      << "overflow = " << (cfg.edge.overflow == OverflowPolicy::Forward ? "forward" : "drop") << "\n\n";
    o << "[cloud]\n"
      << "algorithm_time = " << cfg.cloud_algorithm_time << "\n\n";
    o << "[priority]\n"
      << "raw_sensor = " << cfg.priority.raw_sensor << "\n"
      << "image_frame = " << cfg.priority.image_frame << "\n";
    for (const auto& [name, rank] : cfg.priority.source_rank) o << "source." << name << " = " << rank << "\n";
    o << "\n[scaling]\nschedule = ";
    for (std::size_t i = 0; i < cfg.scaling.schedule.size(); ++i) {
        o << (i ? ", " : "") << cfg.scaling.schedule[i].at << ":" << cfg.scaling.schedule[i].count;
    }
    o << "\nclone_of = " << cfg.scaling.clone_of << "\n\n";
    o << "[dataset]\n"
      << "mode = " << to_string(cfg.dataset.mode) << "\n"
      << "path = " << cfg.dataset.path << "\n"
      << "url = " << cfg.dataset.url << "\n"
      << "cache_dir = " << cfg.dataset.cache_dir << "\n"
      << "motes = ";
    bool first = true;
    for (auto m : cfg.dataset.motes) {
        o << (first ? "" : ", ") << m;
        first = false;
    }
    o << "\nmax_records = " << (cfg.dataset.max_records ? std::to_string(*cfg.dataset.max_records) : "") << "\n"
      << "strict = " << (cfg.dataset.strict ? "true" : "false") << "\n";
    const auto& syn = cfg.dataset.synthetic;
    const std::pair<const char*, const Range*> ranges[] = {
        {"temperature", &syn.temperature}, {"humidity", &syn.humidity}, {"light", &syn.light}, {"voltage", &syn.voltage}};
    for (const auto& [key, r] : ranges) {
        o << key << "_min = " << fmt_double(r->lo) << "\n" << key << "_max = " << fmt_double(r->hi) << "\n";
    }
    // Built-in sources that were removed must stay removed on reload.
    for (const char* builtin : {"sensor", "camera"}) {
        if (!cfg.find_source(builtin)) o << "\n[source." << builtin << "]\nenabled = false\n";
    }
    for (const auto& s : cfg.sources) {
        o << "\n[source." << s.name << "]\n"
          << "kind = " << to_string(s.kind) << "\n"
          << "interval = " << s.emit_interval << "\n"
          << "start_at = " << s.start_at << "\n";
        if (s.kind == SourceKind::Sensor) {
            o << "payload_bytes = " << s.payload_bytes << "\n";
            if (s.rule_mode) o << "rule_mode = " << to_string(*s.rule_mode) << "\n";
        } else {
            o << "frame_bytes = " << s.payload_bytes / s.frames_per_message << "\n"
              << "frames_per_message = " << s.frames_per_message << "\n";
        }
    }
    return o.str();
}

}  // namespace ita
