#pragma once

#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ita/analytics.hpp"
#include "ita/errors.hpp"
#include "ita/netmodel.hpp"
#include "ita/reading.hpp"
#include "ita/rng.hpp"
#include "ita/sim_time.hpp"

namespace ita {

struct Dataset {
    std::vector<SensorReading> readings;
    std::size_t rejected = 0;
};

/// Loads a dataset file, plain or gzip-compressed. Malformed lines are counted
/// and skipped; blank lines are ignored.
inline Dataset load_dataset(const std::string& path, std::optional<std::size_t> max_records = std::nullopt) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) throw IoError("cannot open dataset '" + path + "'");
    std::unique_ptr<gzFile_s, int (*)(gzFile)> guard(f, gzclose);
    gzbuffer(f, 1 << 16);

    Dataset ds;
    std::string line;
    char buf[4096];
    bool eof = false;
    while (!eof && (!max_records || ds.readings.size() < *max_records)) {
        line.clear();
        for (;;) {
            if (gzgets(f, buf, sizeof buf) == nullptr) {
                int err = 0;
                const char* msg = gzerror(f, &err);
                if (err != Z_OK && err != Z_STREAM_END) {
                    throw IoError("reading '" + path + "': " + (msg ? msg : "zlib error"));
                }
                eof = true;
                break;
            }
            line += buf;
            if (!line.empty() && line.back() == '\n') break;
        }
        if (detail::split_ws(line).empty()) continue;
        if (auto r = try_parse_intel_line(line)) {
            ds.readings.push_back(*r);
        } else {
            ++ds.rejected;
        }
    }
    if (ds.readings.empty()) throw EmptyDataset("no valid records in '" + path + "'");
    return ds;
}

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    bool operator==(const Range&) const = default;
};

/// Uniform ranges for generated readings. The defaults put about 38% of
/// readings through the combined raw-data rules.
struct SyntheticParams {
    Range temperature{15.0, 35.0};
    Range humidity{26.0, 56.0};
    Range light{0.0, 49.0};
    Range voltage{2.3, 2.8};

    bool operator==(const SyntheticParams&) const = default;

    void validate() const {
        for (const auto& [name, r] : {std::pair{"temperature", temperature}, std::pair{"humidity", humidity},
                                      std::pair{"light", light}, std::pair{"voltage", voltage}}) {
            if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) {
                throw BadParams(std::string(name) + " range must be finite");
            }
            if (r.lo > r.hi) throw BadParams(std::string(name) + " range is empty");
        }
    }
};

inline SensorReading synth_reading(RngState& rng, const SyntheticParams& params) {
    params.validate();
    SensorReading r;
    r.date = Date{2004, 2, 28};
    r.moteid = 0;
    r.temperature = rng.uniform(params.temperature.lo, params.temperature.hi);
    r.humidity = rng.uniform(params.humidity.lo, params.humidity.hi);
    r.light = rng.uniform(params.light.lo, params.light.hi);
    r.voltage = rng.uniform(params.voltage.lo, params.voltage.hi);
    return r;
}

/// Sequential supply of readings for every raw sensor in a run, either a
/// replay of a dataset slice or generated values. Draws happen in event order,
/// so the supply is deterministic for a given seed and dataset.
class ReadingSupply {
public:
    static ReadingSupply replay(std::shared_ptr<const std::vector<SensorReading>> readings, bool strict) {
        if (!readings || readings->empty()) throw EmptyDataset("replay needs at least one reading");
        return ReadingSupply(Replay{std::move(readings), 0, strict});
    }

    static ReadingSupply synthetic(std::uint64_t seed, SyntheticParams params) {
        params.validate();
        return ReadingSupply(Synthetic{RngState(seed), params});
    }

    SensorReading next() {
        SensorReading r;
        if (auto* rp = std::get_if<Replay>(&source_)) {
            if (rp->cursor == rp->readings->size()) {
                if (rp->strict) throw DatasetExhausted("dataset exhausted after " + std::to_string(drawn_) + " readings");
                rp->cursor = 0;
            }
            r = (*rp->readings)[rp->cursor++];
        } else {
            auto& sp = std::get<Synthetic>(source_);
            r = synth_reading(sp.rng, sp.params);
            r.epoch = drawn_;
        }
        ++drawn_;
        return r;
    }

    std::uint64_t drawn() const noexcept { return drawn_; }
    bool is_replay() const noexcept { return std::holds_alternative<Replay>(source_); }

private:
    struct Replay {
        std::shared_ptr<const std::vector<SensorReading>> readings;
        std::size_t cursor = 0;
        bool strict = false;
    };
    struct Synthetic {
        RngState rng;
        SyntheticParams params;
    };

    template <class S>
    explicit ReadingSupply(S s) : source_(std::move(s)) {}

    std::variant<Replay, Synthetic> source_;
    std::uint64_t drawn_ = 0;
};

/// Keeps only readings from the listed motes; an empty filter keeps all.
inline std::vector<SensorReading> filter_motes(const std::vector<SensorReading>& in,
                                               const std::set<std::uint32_t>& motes) {
    if (motes.empty()) return in;
    std::vector<SensorReading> out;
    for (const auto& r : in) {
        if (motes.contains(r.moteid)) out.push_back(r);
    }
    return out;
}

enum class SourceKind : std::uint8_t { Sensor, Camera };

constexpr std::string_view to_string(SourceKind k) noexcept { return k == SourceKind::Sensor ? "sensor" : "camera"; }

struct SourceSpec {
    std::string name;
    SourceKind kind = SourceKind::Sensor;
    SimTime emit_interval = SimTime::from_micros(500'000);
    std::uint64_t payload_bytes = 49'000;
    SimTime start_at = SimTime::from_micros(500'000);  // first emission
    std::optional<RuleMode> rule_mode;                 // sensors only; falls back to rules.mode
    std::uint32_t frames_per_message = 1;              // cameras batch frames into one message

    bool operator==(const SourceSpec&) const = default;

    void validate() const {
        if (emit_interval.micros() <= 0) throw BadParams(name + ": emit interval must be positive");
        if (payload_bytes == 0) throw BadParams(name + ": payload must be positive");
        if (frames_per_message == 0) throw BadParams(name + ": frames_per_message must be positive");
    }

    DataClass data_class() const noexcept {
        return kind == SourceKind::Sensor ? DataClass::RawSensor : DataClass::ImageFrame;
    }
};

/// Emissions at start_at, start_at + interval, ... up to and including run_end.
inline std::uint64_t emission_count(const SourceSpec& spec, SimTime run_end) {
    if (spec.start_at > run_end) return 0;
    return static_cast<std::uint64_t>((run_end - spec.start_at).micros() / spec.emit_interval.micros()) + 1;
}

/// Builds the message a source emits at `now`. Raw sensors pull one reading.
inline Message make_emission(const SourceSpec& spec, NodeId source, std::uint64_t msg_id, SimTime now,
                             ReadingSupply* supply) {
    Message m;
    m.msg_id = msg_id;
    m.source = source;
    m.data_class = spec.data_class();
    m.size = spec.payload_bytes;
    m.created_at = now;
    if (spec.kind == SourceKind::Sensor) {
        if (supply == nullptr) throw BadParams(spec.name + ": raw sensor without a reading supply");
        m.body = supply->next();
    }
    return m;
}

}  // namespace ita
