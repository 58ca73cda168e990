#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ita/analytics.hpp"
#include "ita/config.hpp"
#include "ita/engine.hpp"
#include "ita/metrics.hpp"
#include "ita/netmodel.hpp"
#include "ita/sources.hpp"
#include "ita/topology.hpp"

namespace ita {

enum class Scenario : std::uint8_t { CaseOne, CaseTwo, Scaling };

constexpr std::string_view to_string(Scenario s) noexcept {
    switch (s) {
        case Scenario::CaseOne: return "case1";
        case Scenario::CaseTwo: return "case2";
        case Scenario::Scaling: return "scaling";
    }
    return "?";
}

inline Scenario parse_scenario(std::string_view s) {
    if (s == "case1") return Scenario::CaseOne;
    if (s == "case2") return Scenario::CaseTwo;
    if (s == "scaling") return Scenario::Scaling;
    throw ConfigError("scenario", "expected case1|case2|scaling, got '" + std::string(s) + "'");
}

/// Event payload of the ITA simulation.
struct SimEvent {
    enum class Kind : std::uint8_t { Emit, Deliver, EdgeComplete, EdgeDeadline, Attach };

    Kind kind = Kind::Emit;
    std::uint32_t index = 0;  // source index (Emit) or schedule step (Attach)
    std::uint64_t epoch = 0;  // EdgeDeadline guard
    LinkId link;
    std::optional<Message> msg;

    static SimEvent delivery(Message m, LinkId l) {
        SimEvent e;
        e.kind = Kind::Deliver;
        e.link = l;
        e.msg = std::move(m);
        return e;
    }
};

struct DatasetInfo {
    std::string mode;  // "replay" or "synthetic"; empty when no raw sensors ran
    std::string path;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::uint64_t drawn = 0;
};

struct LinkTotal {
    std::string from;
    std::string to;
    std::uint64_t bytes = 0;
    std::uint64_t messages = 0;
};

struct RunResult {
    Scenario scenario = Scenario::CaseOne;
    Config config;  // effective config of this scenario
    RunData data;
    RunSummary summary;
    EdgeCounters edge;
    CloudState cloud;
    std::vector<LinkTotal> links;
    std::uint64_t emitted = 0;
    std::uint64_t sensor_emissions = 0;
    std::uint64_t camera_emissions = 0;
    std::size_t events = 0;
    std::uint64_t trace_digest = 0;
    SimTime end_time;
    DatasetInfo dataset;
    std::vector<SensorReading> emitted_readings;        // every raw reading, in emission order
    std::vector<SensorReading> edge_forwarded_readings;  // readings the edge rules let through

    std::uint64_t edge_dropped() const noexcept { return edge.raw_dropped + edge.overflow_dropped; }
};

/// Narrows a config to one experiment: case1 runs the raw sensors only, case2
/// the cameras only, scaling everything plus the attach schedule.
inline Config scenario_config(Config cfg, Scenario scenario) {
    if (scenario != Scenario::Scaling) {
        const SourceKind keep = scenario == Scenario::CaseOne ? SourceKind::Sensor : SourceKind::Camera;
        std::erase_if(cfg.sources, [&](const SourceSpec& s) { return s.kind != keep; });
        std::erase_if(cfg.priority.source_rank, [&](const auto& kv) { return !cfg.find_source(kv.first); });
        cfg.scaling.schedule.clear();
    }
    if (cfg.sources.empty()) {
        throw ConfigError("source", std::string("scenario ") + std::string(to_string(scenario)) + " has no sources");
    }
    validate(cfg);
    return cfg;
}

class Simulation {
public:
    /// `readings`, when given, replaces whatever the dataset config would load.
    Simulation(Config cfg, Scenario scenario, std::shared_ptr<const std::vector<SensorReading>> readings = nullptr)
        : scenario_(scenario),
          cfg_(scenario_config(std::move(cfg), scenario)),
          topo_(build_topology(cfg_, net_)),
          edge_(cfg_.edge),
          metrics_(cfg_.run.sample_interval) {
        cloud_.algorithm_time = cfg_.cloud_algorithm_time;
        path_of_[topo_.inn_to_cloud.value] = Path::INN;
        path_of_[topo_.edge_to_cloud.value] = Path::Edge;
        maps_.class_rank = {{DataClass::RawSensor, cfg_.priority.raw_sensor},
                            {DataClass::ImageFrame, cfg_.priority.image_frame}};
        for (std::size_t i = 0; i < topo_.sources.size(); ++i) register_source(i, topo_.sources[i].spec.name);
        for (auto name : series::all) {
            if (name.starts_with("bw_available") || name.starts_with("bw_rate")) continue;
            metrics_.add_series(std::string(name), series::unit_of(name));
        }
        if (needs_readings()) supply_ = make_supply(std::move(readings));
    }

    RunResult run() {
        engine_.set_trace([this](const Engine<SimEvent>::EventType& ev) { mix_trace(ev); });
        for (std::uint32_t i = 0; i < topo_.sources.size(); ++i) schedule_first_emit(i);
        for (std::uint32_t k = 0; k < cfg_.scaling.schedule.size(); ++k) {
            const auto& step = cfg_.scaling.schedule[k];
            if (step.at <= cfg_.run.duration) {
                SimEvent ev;
                ev.kind = SimEvent::Kind::Attach;
                ev.index = k;
                engine_.schedule(step.at, topo_.monitor, std::move(ev));
            }
        }
        auto handler = [this](const Engine<SimEvent>::EventType& ev) { handle(ev); };
        std::size_t events = engine_.run(cfg_.run.duration, handler);
        // Drain whatever is still in flight once the sources have stopped.
        events += engine_.run_to_completion(handler);
        return finish(events);
    }

private:
    bool needs_readings() const {
        for (const auto& s : cfg_.sources) {
            if (s.kind == SourceKind::Sensor) return true;
        }
        return false;
    }

    std::optional<ReadingSupply> make_supply(std::shared_ptr<const std::vector<SensorReading>> readings) {
        const auto& ds = cfg_.dataset;
        if (!readings) {
            const std::string path = ds.resolved_path();
            const bool replay = ds.mode == DatasetMode::Replay ||
                                (ds.mode == DatasetMode::Auto && std::filesystem::exists(path));
            if (replay) {
                Dataset loaded = load_dataset(path, ds.max_records);
                dataset_.path = path;
                dataset_.rejected = loaded.rejected;
                readings = std::make_shared<const std::vector<SensorReading>>(std::move(loaded.readings));
            }
        } else {
            dataset_.path = "<in-memory>";
        }
        if (readings) {
            auto kept = std::make_shared<const std::vector<SensorReading>>(filter_motes(*readings, ds.motes));
            if (kept->empty()) throw EmptyDataset("no readings left after the mote filter");
            dataset_.mode = "replay";
            dataset_.accepted = kept->size();
            return ReadingSupply::replay(std::move(kept), ds.strict);
        }
        dataset_.mode = "synthetic";
        return ReadingSupply::synthetic(cfg_.run.seed, ds.synthetic);
    }

    void register_source(std::size_t index, const std::string& rank_name) {
        const auto& sn = topo_.sources[index];
        if (auto it = cfg_.priority.source_rank.find(rank_name); it != cfg_.priority.source_rank.end()) {
            maps_.source_rank[sn.node.id] = it->second;
        }
        rule_mode_[sn.node.id] = sn.spec.rule_mode.value_or(cfg_.rule_mode);
    }

    void schedule_first_emit(std::uint32_t index) {
        const auto& sn = topo_.sources[index];
        if (sn.spec.start_at <= cfg_.run.duration) {
            SimEvent ev;
            ev.kind = SimEvent::Kind::Emit;
            ev.index = index;
            engine_.schedule(sn.spec.start_at, sn.node, std::move(ev));
        }
    }

    void handle(const Engine<SimEvent>::EventType& ev) {
        const SimTime now = engine_.now();
        switch (ev.payload.kind) {
            case SimEvent::Kind::Emit: on_emit(ev.payload.index, now); break;
            case SimEvent::Kind::Deliver: on_deliver(ev.target, *ev.payload.msg, ev.payload.link, now); break;
            case SimEvent::Kind::EdgeComplete: apply(edge_.on_completion(now)); break;
            case SimEvent::Kind::EdgeDeadline: apply(edge_.on_deadline(ev.payload.epoch, now)); break;
            case SimEvent::Kind::Attach: on_attach(ev.payload.index, now); break;
        }
    }

    void on_emit(std::uint32_t index, SimTime now) {
        const SourceNode& sn = topo_.sources[index];
        Message msg = make_emission(sn.spec, sn.node, ++next_msg_id_, now, supply_ ? &*supply_ : nullptr);
        ++emitted_;
        if (sn.spec.kind == SourceKind::Sensor) {
            ++sensor_emissions_;
            emitted_readings_.push_back(*msg.body);
        } else {
            ++camera_emissions_;
        }
        net_.transmit(engine_, sn.to_inn, msg, now);
        net_.transmit(engine_, sn.to_edge, std::move(msg), now);
        const SimTime next = now + sn.spec.emit_interval;
        if (next <= cfg_.run.duration) {
            SimEvent ev;
            ev.kind = SimEvent::Kind::Emit;
            ev.index = index;
            engine_.schedule(next, sn.node, std::move(ev));
        }
    }

    void on_deliver(NodeId at, const Message& msg, LinkId via, SimTime now) {
        switch (at.kind) {
            case NodeKind::INN: send_to_cloud(Path::INN, msg, now); break;
            case NodeKind::Edge: on_edge_arrival(msg, now); break;
            case NodeKind::Cloud: on_cloud_arrival(msg, path_of_.at(via.value), now); break;
            default: throw UnknownNode("delivery to a node that cannot receive");
        }
    }

    void on_edge_arrival(Message msg, SimTime now) {
        msg.priority = classify(msg, maps_, ++edge_arrivals_);
        if (msg.data_class == DataClass::RawSensor) {
            const Verdict v = edge_.on_raw(*msg.body, cfg_.rules, rule_mode_.at(msg.source.id));
            if (v == Verdict::Forward) {
                edge_forwarded_.push_back(*msg.body);
                send_to_cloud(Path::Edge, msg, now);
            }
            return;
        }
        apply(edge_.on_image(std::move(msg), now));
    }

    void apply(EdgeEffects fx) {
        const SimTime now = engine_.now();
        for (auto& m : fx.to_cloud) send_to_cloud(Path::Edge, m, now);
        if (fx.schedule_deadline) {
            SimEvent ev;
            ev.kind = SimEvent::Kind::EdgeDeadline;
            ev.epoch = fx.schedule_deadline->epoch;
            engine_.schedule(fx.schedule_deadline->at, topo_.edge, std::move(ev));
        }
        if (fx.schedule_completion) {
            SimEvent ev;
            ev.kind = SimEvent::Kind::EdgeComplete;
            engine_.schedule(*fx.schedule_completion, topo_.edge, std::move(ev));
        }
    }

    void send_to_cloud(Path path, const Message& msg, SimTime now) {
        const bool edge = path == Path::Edge;
        net_.transmit(engine_, edge ? topo_.edge_to_cloud : topo_.inn_to_cloud, msg, now);
        metrics_.record(edge ? series::bw_consumed_edge : series::bw_consumed_inn, now,
                        static_cast<std::int64_t>(msg.size * 8));
    }

    void on_cloud_arrival(const Message& msg, Path path, SimTime now) {
        cloud_.on_receive(msg, path);
        const bool edge = path == Path::Edge;
        metrics_.record(edge ? series::cloud_bytes_edge : series::cloud_bytes_inn, now,
                        static_cast<std::int64_t>(msg.size));
        metrics_.record(edge ? series::compute_seconds_edge : series::compute_seconds_inn, now,
                        cloud_.algorithm_time.micros());
        metrics_.record(edge ? series::msgs_processed_edge : series::msgs_processed_inn, now, 1);
    }

    void on_attach(std::uint32_t step_index, SimTime now) {
        const ScalingStep& step = cfg_.scaling.schedule[step_index];
        const SourceSpec* base = cfg_.find_source(cfg_.scaling.clone_of);
        for (std::uint32_t i = 0; i < step.count; ++i) {
            SourceSpec spec = *base;
            spec.name = base->name + "_" + std::to_string(++clones_);
            spec.start_at = now + spec.emit_interval;
            if (!supply_ && spec.kind == SourceKind::Sensor) supply_ = make_supply(nullptr);
            attach_source(topo_, net_, cfg_.links, std::move(spec));
            const auto index = static_cast<std::uint32_t>(topo_.sources.size() - 1);
            register_source(index, base->name);
            schedule_first_emit(index);
        }
    }

    void mix_trace(const Engine<SimEvent>::EventType& ev) {
        auto mix = [this](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                trace_ ^= (v >> (8 * i)) & 0xffu;
                trace_ *= 0x100000001b3ULL;
            }
        };
        mix(static_cast<std::uint64_t>(ev.fire_at.micros()));
        mix(ev.seq);
        mix(ev.target.id);
        mix(static_cast<std::uint64_t>(ev.payload.kind));
        mix(ev.payload.msg ? ev.payload.msg->msg_id : 0);
    }

    RunResult finish(std::size_t events) {
        RunResult r;
        r.scenario = scenario_;
        r.config = cfg_;
        r.end_time = std::max(cfg_.run.duration, engine_.now());
        for (auto name : series::all) {
            const std::string n(name);
            if (name == series::bw_available_ec) {
                r.data.series.push_back(capacity_series(
                    n, net_.link(topo_.edge_to_cloud).rate_bps, metrics_.sampled(series::bw_consumed_edge, r.end_time)));
            } else if (name == series::bw_available_ic) {
                r.data.series.push_back(capacity_series(
                    n, net_.link(topo_.inn_to_cloud).rate_bps, metrics_.sampled(series::bw_consumed_inn, r.end_time)));
            } else if (name == series::bw_rate_edge) {
                r.data.series.push_back(per_sample_delta(metrics_.sampled(series::bw_consumed_edge, r.end_time), n));
            } else if (name == series::bw_rate_inn) {
                r.data.series.push_back(per_sample_delta(metrics_.sampled(series::bw_consumed_inn, r.end_time), n));
            } else {
                r.data.series.push_back(metrics_.sampled(name, r.end_time));
            }
        }
        r.data.emitted = emitted_;
        r.data.dropped_at_edge = edge_.counters().raw_dropped + edge_.counters().overflow_dropped;
        r.data.processed_at_edge = edge_.counters().processed;
        r.summary = summarize(r.data);
        r.edge = edge_.counters();
        r.cloud = cloud_;
        for (std::uint32_t i = 0; i < net_.link_count(); ++i) {
            const Link& l = net_.link(LinkId{i});
            r.links.push_back({net_.node(l.from).name, net_.node(l.to).name, l.bytes_sent, l.messages_sent});
        }
        r.emitted = emitted_;
        r.sensor_emissions = sensor_emissions_;
        r.camera_emissions = camera_emissions_;
        r.events = events;
        r.trace_digest = trace_;
        if (supply_) dataset_.drawn = supply_->drawn();
        r.dataset = dataset_;
        r.emitted_readings = std::move(emitted_readings_);
        r.edge_forwarded_readings = std::move(edge_forwarded_);
        return r;
    }

    Scenario scenario_;
    Config cfg_;
    Engine<SimEvent> engine_;
    Network<SimEvent> net_;
    Topology topo_;
    EdgeNode edge_;
    CloudState cloud_;
    MetricsRecorder metrics_;
    PriorityMaps maps_;
    std::map<std::uint32_t, RuleMode> rule_mode_;  // by source node id
    std::map<std::uint32_t, Path> path_of_;        // cloud-bound link id -> path
    std::optional<ReadingSupply> supply_;
    DatasetInfo dataset_;
    std::uint64_t next_msg_id_ = 0;
    std::uint64_t edge_arrivals_ = 0;
    std::uint64_t emitted_ = 0;
    std::uint64_t sensor_emissions_ = 0;
    std::uint64_t camera_emissions_ = 0;
    std::uint32_t clones_ = 0;
    std::uint64_t trace_ = 0xcbf29ce484222325ULL;
    std::vector<SensorReading> emitted_readings_;
    std::vector<SensorReading> edge_forwarded_;
};

inline RunResult run_scenario(const Config& cfg, Scenario scenario,
                              std::shared_ptr<const std::vector<SensorReading>> readings = nullptr) {
    return Simulation(cfg, scenario, std::move(readings)).run();
}

/// Raw-data experiment: sensor readings through the edge rule engine.
inline RunResult run_case_one(const Config& cfg, std::shared_ptr<const std::vector<SensorReading>> readings = nullptr) {
    return run_scenario(cfg, Scenario::CaseOne, std::move(readings));
}

/// Image experiment: camera frames through the edge buffer and deadline.
inline RunResult run_case_two(const Config& cfg) { return run_scenario(cfg, Scenario::CaseTwo); }

/// Everything at once, with extra sensors attached on the scaling schedule.
inline RunResult run_scaling(const Config& cfg, std::shared_ptr<const std::vector<SensorReading>> readings = nullptr) {
    return run_scenario(cfg, Scenario::Scaling, std::move(readings));
}

inline std::string dataset_info_ini(const DatasetInfo& d) {
    std::string out = "# dataset slice used by this run\n";
    out += "# mode = " + (d.mode.empty() ? std::string("none") : d.mode) + "\n";
    if (d.mode == "replay") {
        out += "# path = " + d.path + "\n";
        out += "# accepted = " + std::to_string(d.accepted) + "\n";
        out += "# rejected = " + std::to_string(d.rejected) + "\n";
    }
    out += "# readings_drawn = " + std::to_string(d.drawn) + "\n";
    return out;
}

/// Writes config.resolved, every series CSV and summary.csv into `out_dir`.
inline std::vector<std::filesystem::path> write_run(const RunResult& r, const std::filesystem::path& out_dir) {
    auto files = write_csv(r.data, out_dir);
    const auto resolved = out_dir / "config.resolved";
    write_text_file(resolved, "# scenario = " + std::string(to_string(r.scenario)) + "\n" +
                                  dataset_info_ini(r.dataset) + "\n" + to_ini(r.config));
    files.insert(files.begin(), resolved);
    return files;
}

}  // namespace ita
