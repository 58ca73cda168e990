#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ita/errors.hpp"
#include "ita/netmodel.hpp"
#include "ita/sim_time.hpp"

namespace ita {

enum class SeriesUnit : std::uint8_t { Count, Bytes, Bits, Seconds };

/// Seconds-valued series hold integer microseconds so they print exactly.
struct MetricSeries {
    std::string name;
    SeriesUnit unit = SeriesUnit::Count;
    bool cumulative = true;
    std::vector<std::pair<SimTime, std::int64_t>> points;

    std::int64_t final_value() const { return points.empty() ? 0 : points.back().second; }

    bool operator==(const MetricSeries&) const = default;
};

/// Cumulative bits a channel can carry in [0, t].
inline std::int64_t bandwidth_available(std::uint64_t rate_bps, SimTime t) {
    const unsigned __int128 bits = static_cast<unsigned __int128>(rate_bps) * static_cast<std::uint64_t>(t.micros()) /
                                   SimTime::kMicrosPerSecond;
    return static_cast<std::int64_t>(bits);
}

inline std::int64_t bandwidth_available(const Link& link, SimTime t) { return bandwidth_available(link.rate_bps, t); }

/// Accumulates deltas into fixed sample buckets. Bucket k covers
/// ((k-1)*interval, k*interval], and the sampled value at k*interval is the
/// running total through that instant.
class MetricsRecorder {
public:
    explicit MetricsRecorder(SimTime sample_interval) : interval_(sample_interval) {
        if (interval_.micros() <= 0) throw BadParams("sample interval must be positive");
    }

    SimTime sample_interval() const noexcept { return interval_; }

    void add_series(std::string name, SeriesUnit unit) {
        if (!index_.contains(name)) {
            index_.emplace(name, series_.size());
            series_.push_back(Accum{std::move(name), unit, {}, 0});
        }
    }

    bool has_series(std::string_view name) const { return index_.contains(std::string(name)); }

    void record(std::string_view name, SimTime t, std::int64_t delta) {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) throw UnknownSeries("unknown series '" + std::string(name) + "'");
        Accum& a = series_[it->second];
        const std::size_t bucket = bucket_of(t);
        if (a.deltas.size() <= bucket) a.deltas.resize(bucket + 1, 0);
        a.deltas[bucket] += delta;
        a.total += delta;
        if (bucket > last_bucket_) last_bucket_ = bucket;
    }

    std::int64_t total(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) throw UnknownSeries("unknown series '" + std::string(name) + "'");
        return series_[it->second].total;
    }

    /// Number of the last sample point needed to cover `end`.
    std::size_t last_sample(SimTime end) const { return std::max(bucket_of(end), last_bucket_); }

    /// Cumulative samples at 0, interval, ..., last_sample(end) * interval.
    MetricSeries sampled(std::string_view name, SimTime end) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) throw UnknownSeries("unknown series '" + std::string(name) + "'");
        const Accum& a = series_[it->second];
        MetricSeries out{a.name, a.unit, true, {}};
        const std::size_t last = last_sample(end);
        out.points.reserve(last + 1);
        std::int64_t running = 0;
        for (std::size_t k = 0; k <= last; ++k) {
            if (k < a.deltas.size()) running += a.deltas[k];
            out.points.emplace_back(interval_ * static_cast<std::int64_t>(k), running);
        }
        return out;
    }

private:
    struct Accum {
        std::string name;
        SeriesUnit unit;
        std::vector<std::int64_t> deltas;
        std::int64_t total;
    };

    std::size_t bucket_of(SimTime t) const {
        const std::int64_t us = t.micros();
        return static_cast<std::size_t>((us + interval_.micros() - 1) / interval_.micros());
    }

    SimTime interval_;
    std::vector<Accum> series_;
    std::map<std::string, std::size_t> index_;
    std::size_t last_bucket_ = 0;
};

/// Per-sample increments of a cumulative series.
inline MetricSeries per_sample_delta(const MetricSeries& cumulative, std::string name) {
    MetricSeries out{std::move(name), cumulative.unit, false, {}};
    std::int64_t prev = 0;
    for (const auto& [t, v] : cumulative.points) {
        out.points.emplace_back(t, v - prev);
        prev = v;
    }
    return out;
}

inline MetricSeries capacity_series(std::string name, std::uint64_t rate_bps, const MetricSeries& like) {
    MetricSeries out{std::move(name), SeriesUnit::Bits, true, {}};
    for (const auto& [t, v] : like.points) {
        (void)v;
        out.points.emplace_back(t, bandwidth_available(rate_bps, t));
    }
    return out;
}

// Series file names; every run writes all of these.
namespace series {
inline constexpr std::string_view cloud_bytes_edge = "cloud_bytes_edge";
inline constexpr std::string_view cloud_bytes_inn = "cloud_bytes_inn";
inline constexpr std::string_view compute_seconds_edge = "compute_seconds_edge";
inline constexpr std::string_view compute_seconds_inn = "compute_seconds_inn";
inline constexpr std::string_view bw_consumed_edge = "bw_consumed_edge";
inline constexpr std::string_view bw_consumed_inn = "bw_consumed_inn";
inline constexpr std::string_view bw_available_ec = "bw_available_ec";
inline constexpr std::string_view bw_available_ic = "bw_available_ic";
inline constexpr std::string_view msgs_processed_edge = "msgs_processed_edge";
inline constexpr std::string_view msgs_processed_inn = "msgs_processed_inn";
inline constexpr std::string_view bw_rate_edge = "bw_rate_edge";
inline constexpr std::string_view bw_rate_inn = "bw_rate_inn";

inline constexpr std::string_view all[] = {
    cloud_bytes_edge,    cloud_bytes_inn,    compute_seconds_edge, compute_seconds_inn,
    bw_consumed_edge,    bw_consumed_inn,    bw_available_ec,      bw_available_ic,
    msgs_processed_edge, msgs_processed_inn, bw_rate_edge,         bw_rate_inn,
};

inline SeriesUnit unit_of(std::string_view name) {
    if (name.starts_with("cloud_bytes")) return SeriesUnit::Bytes;
    if (name.starts_with("compute_seconds")) return SeriesUnit::Seconds;
    if (name.starts_with("msgs_processed")) return SeriesUnit::Count;
    return SeriesUnit::Bits;
}
}  // namespace series

/// Everything a finished run leaves behind for reporting.
struct RunData {
    std::vector<MetricSeries> series;  // in series::all order
    std::uint64_t emitted = 0;         // per path; every emission is duplicated onto both
    std::uint64_t dropped_at_edge = 0;
    std::uint64_t processed_at_edge = 0;

    const MetricSeries& get(std::string_view name) const {
        for (const auto& s : series) {
            if (s.name == name) return s;
        }
        throw UnknownSeries("run has no series '" + std::string(name) + "'");
    }
};

template <class T>
struct PerPath {
    T edge{};
    T inn{};

    bool operator==(const PerPath&) const = default;
};

struct RunSummary {
    PerPath<std::uint64_t> stored_bytes;
    PerPath<SimTime> compute_seconds;
    PerPath<std::uint64_t> messages_to_cloud;
    PerPath<std::uint64_t> bandwidth_bits;
    std::optional<double> storage_pct;
    std::optional<double> compute_pct;
    std::optional<double> messages_pct;
    std::optional<double> bandwidth_pct;
    PerPath<std::optional<SimTime>> saturation_time;  // first sample where demand > capacity
    std::uint64_t emitted = 0;
    std::uint64_t dropped_at_edge = 0;
    std::uint64_t processed_at_edge = 0;

    bool operator==(const RunSummary&) const = default;
};

/// 100 * (1 - edge/inn); undefined when inn is zero.
inline std::optional<double> reduction_pct(std::uint64_t edge, std::uint64_t inn) {
    if (inn == 0) return std::nullopt;
    return 100.0 * (static_cast<double>(inn) - static_cast<double>(edge)) / static_cast<double>(inn);
}

inline std::optional<SimTime> first_exceedance(const MetricSeries& demand, const MetricSeries& capacity) {
    const std::size_t n = std::min(demand.points.size(), capacity.points.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (demand.points[i].second > capacity.points[i].second) return demand.points[i].first;
    }
    return std::nullopt;
}

/// Derives the summary purely from the sampled series, so recomputing it from
/// the written CSVs gives the same answer.
inline RunSummary summarize(const RunData& run) {
    RunSummary s;
    auto final_u = [&](std::string_view n) { return static_cast<std::uint64_t>(run.get(n).final_value()); };
    s.stored_bytes = {final_u(series::cloud_bytes_edge), final_u(series::cloud_bytes_inn)};
    s.compute_seconds = {SimTime::from_micros(run.get(series::compute_seconds_edge).final_value()),
                         SimTime::from_micros(run.get(series::compute_seconds_inn).final_value())};
    s.messages_to_cloud = {final_u(series::msgs_processed_edge), final_u(series::msgs_processed_inn)};
    s.bandwidth_bits = {final_u(series::bw_consumed_edge), final_u(series::bw_consumed_inn)};
    s.storage_pct = reduction_pct(s.stored_bytes.edge, s.stored_bytes.inn);
    s.compute_pct = reduction_pct(static_cast<std::uint64_t>(s.compute_seconds.edge.micros()),
                                  static_cast<std::uint64_t>(s.compute_seconds.inn.micros()));
    s.messages_pct = reduction_pct(s.messages_to_cloud.edge, s.messages_to_cloud.inn);
    s.bandwidth_pct = reduction_pct(s.bandwidth_bits.edge, s.bandwidth_bits.inn);
    s.saturation_time = {first_exceedance(run.get(series::bw_consumed_edge), run.get(series::bw_available_ec)),
                         first_exceedance(run.get(series::bw_consumed_inn), run.get(series::bw_available_ic))};
    s.emitted = run.emitted;
    s.dropped_at_edge = run.dropped_at_edge;
    s.processed_at_edge = run.processed_at_edge;
    return s;
}

// ---- CSV -------------------------------------------------------------------

inline std::string format_value(std::int64_t v, SeriesUnit unit) {
    return unit == SeriesUnit::Seconds ? SimTime::from_micros(v).str() : std::to_string(v);
}

/// Six significant digits; empty when undefined.
inline std::string format_pct(const std::optional<double>& pct) {
    if (!pct) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", *pct);
    return buf;
}

inline std::string series_csv(const MetricSeries& s) {
    std::string out = "t_seconds,value\n";
    for (const auto& [t, v] : s.points) {
        out += t.str();
        out += ',';
        out += format_value(v, s.unit);
        out += '\n';
    }
    return out;
}

struct SummaryRow {
    std::string metric;
    std::string edge;
    std::string inn;
    std::string reduction_pct;

    bool operator==(const SummaryRow&) const = default;
};

/// Rows that can be rebuilt from the series files alone.
inline std::vector<SummaryRow> derived_rows(const RunSummary& s) {
    auto opt_time = [](const std::optional<SimTime>& t) { return t ? t->str() : std::string{}; };
    return {
        {"stored_bytes", std::to_string(s.stored_bytes.edge), std::to_string(s.stored_bytes.inn),
         format_pct(s.storage_pct)},
        {"compute_seconds", s.compute_seconds.edge.str(), s.compute_seconds.inn.str(), format_pct(s.compute_pct)},
        {"messages_to_cloud", std::to_string(s.messages_to_cloud.edge), std::to_string(s.messages_to_cloud.inn),
         format_pct(s.messages_pct)},
        {"bandwidth_bits", std::to_string(s.bandwidth_bits.edge), std::to_string(s.bandwidth_bits.inn),
         format_pct(s.bandwidth_pct)},
        {"saturation_time_s", opt_time(s.saturation_time.edge), opt_time(s.saturation_time.inn), ""},
    };
}

inline std::vector<SummaryRow> summary_rows(const RunSummary& s) {
    auto rows = derived_rows(s);
    rows.push_back({"emitted", std::to_string(s.emitted), std::to_string(s.emitted), ""});
    rows.push_back({"dropped_at_edge", std::to_string(s.dropped_at_edge), "0", ""});
    rows.push_back({"processed_at_edge", std::to_string(s.processed_at_edge), "0", ""});
    return rows;
}

inline std::string summary_csv(const RunSummary& s) {
    std::string out = "metric,edge,inn,reduction_pct\n";
    for (const auto& r : summary_rows(s)) {
        out += r.metric + ',' + r.edge + ',' + r.inn + ',' + r.reduction_pct + '\n';
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + p.string() + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + p.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot read '" + p.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Writes one CSV per series plus summary.csv. Returns the paths written.
inline std::vector<std::filesystem::path> write_csv(const RunData& run, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> files;
    for (const auto& s : run.series) {
        files.push_back(out_dir / (s.name + ".csv"));
        write_text_file(files.back(), series_csv(s));
    }
    files.push_back(out_dir / "summary.csv");
    write_text_file(files.back(), summary_csv(summarize(run)));
    return files;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline MetricSeries parse_series_csv(std::string name, const std::string& text) {
    const SeriesUnit unit = series::unit_of(name);
    const bool cumulative = !name.starts_with("bw_rate");
    MetricSeries s{std::move(name), unit, cumulative, {}};
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "t_seconds,value") {
        throw IoError(s.name + ".csv: missing 't_seconds,value' header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 2) throw IoError(s.name + ".csv: malformed row '" + line + "'");
        try {
            const SimTime t = SimTime::parse(cols[0]);
            std::int64_t v = 0;
            if (s.unit == SeriesUnit::Seconds) {
                v = SimTime::parse(cols[1]).micros();
            } else if (!detail::parse_int(cols[1], v)) {
                throw IoError("bad value");
            }
            s.points.emplace_back(t, v);
        } catch (const Error&) {
            throw IoError(s.name + ".csv: malformed row '" + line + "'");
        }
    }
    return s;
}

/// Loads every series file of a run directory.
inline RunData read_series_dir(const std::filesystem::path& dir) {
    RunData run;
    for (auto name : series::all) {
        const std::string n(name);
        run.series.push_back(parse_series_csv(n, read_text_file(dir / (n + ".csv"))));
    }
    return run;
}

inline std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "metric,edge,inn,reduction_pct") {
        throw IoError("summary.csv: missing header");
    }
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cols = split_csv_line(line);
        if (cols.size() != 4) throw IoError("summary.csv: malformed row '" + line + "'");
        rows.push_back({cols[0], cols[1], cols[2], cols[3]});
    }
    return rows;
}

}  // namespace ita
