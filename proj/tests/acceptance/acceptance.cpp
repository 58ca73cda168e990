// Acceptance gate: one [PASS]/[FAIL] line per criterion, [INFO] lines for
// documented example parameterizations. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "ita/ita.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using ita::Path;
using ita::SimTime;
namespace series = ita::series;

int failures = 0;

void gate(const std::string& id, bool ok, const std::string& what) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << what << "\n";
    if (!ok) ++failures;
}

void info(const std::string& id, const std::string& what) { std::cout << "[INFO] " << id << " " << what << "\n"; }

ita::Config synthetic_defaults() {
    auto c = ita::default_config();
    c.dataset.mode = ita::DatasetMode::Synthetic;
    return c;
}

oracle::Record as_record(const ita::SensorReading& r) { return {r.temperature, r.humidity, r.light, r.voltage}; }

std::uint64_t oracle_pass_count(const std::vector<ita::SensorReading>& slice) {
    std::uint64_t n = 0;
    for (const auto& r : slice) n += oracle::passes_default_rules(as_record(r));
    return n;
}

std::string pct(const std::optional<double>& p) { return p ? ita::format_pct(p) + "%" : "n/a"; }

oracle::QueueWalkInput walk_input(const ita::Config& c) {
    const auto& cam = *c.find_source("camera");
    oracle::QueueWalkInput in;
    in.first_emit = cam.start_at.micros();
    in.interval = cam.emit_interval.micros();
    in.duration = c.run.duration.micros();
    in.uplink_tx = ita::transmission_time(cam.payload_bytes, c.links.source_to_edge.rate_bps).micros();
    in.uplink_prop = c.links.source_to_edge.prop_delay.micros();
    in.algorithm_time = c.edge.algorithm_time.micros();
    in.deadline = c.edge.analytics_deadline.micros();
    in.capacity = c.edge.buffer_storage;
    in.overflow_forwards = c.edge.overflow == ita::OverflowPolicy::Forward;
    return in;
}

void ac1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = ita::run_case_one(synthetic_defaults());
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << "case1 defaults: " << r.sensor_emissions << " messages, compute_time.inn=" << r.summary.compute_seconds.inn
      << " s (want 20), wall " << wall << " s (limit 5)";
    gate("AC1", r.sensor_emissions == 2000 && r.summary.compute_seconds.inn == SimTime::from_seconds(20) && wall < 5.0,
         d.str());
}

void ac2_ac3(const testutil::TempDir& dir) {
    // Dataset slice tuned so that 930 of the first 2000 accepted records pass.
    const auto path = dir / "tuned.txt";
    testutil::write_file(path, testutil::tuned_dataset(2000, 930));
    auto cfg = ita::default_config();
    cfg.dataset.mode = ita::DatasetMode::Replay;
    cfg.dataset.path = path.string();
    const auto r = ita::run_case_one(cfg);
    const auto records = oracle::read_valid_records(path.string());
    const std::uint64_t forwarded = oracle::forwarded_in_slice(records, r.sensor_emissions);

    // Same check on the generated default slice.
    const auto syn = ita::run_case_one(synthetic_defaults());
    const std::uint64_t syn_forwarded = oracle_pass_count(syn.emitted_readings);

    const bool tied = r.summary.compute_seconds.edge.micros() == static_cast<std::int64_t>(forwarded) * 10'000 &&
                      syn.summary.compute_seconds.edge.micros() == static_cast<std::int64_t>(syn_forwarded) * 10'000;
    const bool tuned = forwarded == 930 && r.summary.compute_seconds.edge == SimTime::parse("9.3") &&
                       r.summary.compute_pct && *r.summary.compute_pct == 53.5;
    std::ostringstream d;
    d << "oracle forwards " << forwarded << " of " << r.sensor_emissions << " (tuned slice), compute_time.edge="
      << r.summary.compute_seconds.edge << " s, saving " << pct(r.summary.compute_pct) << "; synthetic slice "
      << syn_forwarded << " -> " << syn.summary.compute_seconds.edge << " s";
    gate("AC2", tied && tuned, d.str());

    auto ratio_exact = [&](const ita::RunResult& run, std::uint64_t passed) {
        return run.summary.stored_bytes.edge * run.sensor_emissions == run.summary.stored_bytes.inn * passed;
    };
    std::ostringstream d3;
    d3 << "stored_bytes edge/inn = " << r.summary.stored_bytes.edge << "/" << r.summary.stored_bytes.inn
       << " == " << forwarded << "/" << r.sensor_emissions << " (tuned), " << syn.summary.stored_bytes.edge << "/"
       << syn.summary.stored_bytes.inn << " == " << syn_forwarded << "/" << syn.sensor_emissions << " (synthetic)";
    gate("AC3", ratio_exact(r, forwarded) && ratio_exact(syn, syn_forwarded), d3.str());

    auto example = synthetic_defaults();
    example.run.seed = 42;
    const auto ex = ita::run_case_one(example);
    const double red = ex.summary.storage_pct.value_or(0);
    std::ostringstream di;
    di << "documented slice (synthetic, seed 42): storage reduction " << pct(ex.summary.storage_pct)
       << " vs 62% reference, " << (std::abs(red - 62.0) <= 10.0 ? "within" : "outside") << " +-10 pp";
    info("AC3", di.str());
}

void ac4() {
    bool ok = true;
    std::ostringstream d;
    const std::pair<const char*, std::function<void(ita::Config&)>> variants[] = {
        {"defaults", [](ita::Config&) {}},
        {"algorithm_time=0.7", [](ita::Config& c) { c.edge.algorithm_time = SimTime::parse("0.7"); }},
        {"algorithm_time=1.2,buffer=5",
         [](ita::Config& c) {
             c.edge.algorithm_time = SimTime::parse("1.2");
             c.edge.buffer_storage = 5;
         }},
        {"algorithm_time=0.9,deadline=3,drop",
         [](ita::Config& c) {
             c.edge.algorithm_time = SimTime::parse("0.9");
             c.edge.analytics_deadline = SimTime::from_seconds(3);
             c.edge.overflow = ita::OverflowPolicy::Drop;
         }},
    };
    std::uint64_t slow_edge = 0;
    for (const auto& [name, tweak] : variants) {
        auto c = synthetic_defaults();
        tweak(c);
        const auto r = ita::run_case_two(c);
        const auto want = oracle::queue_walk(walk_input(c));
        const bool match = r.cloud.messages(Path::INN) == r.camera_emissions &&
                           r.cloud.messages(Path::Edge) == want.forwarded && r.edge.processed == want.processed;
        ok = ok && match;
        d << name << ": inn " << r.cloud.messages(Path::INN) << "/" << r.camera_emissions << ", edge "
          << r.cloud.messages(Path::Edge) << " (oracle " << want.forwarded << "); ";
        if (std::string(name) == "defaults") ok = ok && r.camera_emissions == 2000;
        if (std::string(name) == "algorithm_time=0.7") slow_edge = r.cloud.messages(Path::Edge);
    }
    const bool near600 = slow_edge >= 540 && slow_edge <= 660;
    d << "example parameterization " << slow_edge << " vs 600 (+-10%)";
    gate("AC4", ok && near600, d.str());
}

void ac5() {
    bool dominance = true;
    std::ostringstream d;
    for (auto sc : {ita::Scenario::CaseOne, ita::Scenario::CaseTwo, ita::Scenario::Scaling}) {
        const auto r = ita::run_scenario(synthetic_defaults(), sc);
        const auto& e = r.data.get(series::bw_consumed_edge).points;
        const auto& i = r.data.get(series::bw_consumed_inn).points;
        std::size_t bad = 0;
        for (std::size_t k = 0; k < e.size(); ++k) bad += e[k].second > i[k].second;
        dominance = dominance && bad == 0 && e.size() == i.size();
        d << ita::to_string(sc) << ": " << e.size() << " samples, " << bad << " violations; ";
    }
    gate("AC5a", dominance, "bw_consumed.edge(t) <= bw_consumed.inn(t) at every sample. " + d.str());

    const auto s = ita::run_scaling(synthetic_defaults());
    const auto inn_t = s.summary.saturation_time.inn;
    const auto edge_t = s.summary.saturation_time.edge;
    std::int64_t peak = 0;
    const auto& rate = s.data.get(series::bw_rate_inn).points;
    for (const auto& [t, v] : rate) peak = std::max(peak, v);
    std::ostringstream d5;
    d5 << "scaling defaults: INN saturation t*=" << (inn_t ? inn_t->str() : std::string("none"))
       << ", edge saturation " << (edge_t ? edge_t->str() : std::string("none")) << "; INN demand "
       << s.summary.bandwidth_bits.inn << " bits vs capacity "
       << ita::bandwidth_available(s.config.links.inn_to_cloud.rate_bps, s.end_time) << " bits, peak "
       << peak << " bit/s per sample vs " << s.config.links.inn_to_cloud.rate_bps << " bit/s";
    gate("AC5b", inn_t && *inn_t <= SimTime::from_seconds(1000) && !edge_t, d5.str());

    auto sat = synthetic_defaults();
    sat.links.inn_to_cloud.rate_bps = 10'000'000;
    sat.links.edge_to_cloud.rate_bps = 10'000'000;
    const auto sr = ita::run_scaling(sat);
    std::ostringstream di;
    di << "scaling with 10 Mbps cloud links: INN saturation t*="
       << (sr.summary.saturation_time.inn ? sr.summary.saturation_time.inn->str() : std::string("none"))
       << ", edge saturation "
       << (sr.summary.saturation_time.edge ? sr.summary.saturation_time.edge->str() : std::string("none"));
    info("AC5b", di.str());

    bool formula = true;
    std::ostringstream d6;
    for (auto sc : {ita::Scenario::CaseOne, ita::Scenario::CaseTwo, ita::Scenario::Scaling}) {
        const auto r = ita::run_scenario(synthetic_defaults(), sc);
        const double eb = static_cast<double>(r.cloud.bytes(Path::Edge));
        const double ib = static_cast<double>(r.cloud.bytes(Path::INN));
        const std::string expect = ita::format_pct(100.0 * (1.0 - eb / ib));
        const std::string got = ita::format_pct(r.summary.bandwidth_pct);
        formula = formula && got == expect;
        d6 << ita::to_string(sc) << " " << got << "% (formula " << expect << "%); ";
    }
    gate("AC5c", formula, "bandwidth saving equals 100*(1 - edge_bytes/inn_bytes). " + d6.str());
}

void ac6() {
    std::mt19937_64 g(20240601);
    int bad = 0;
    std::string first_bad;
    for (int i = 0; i < 100; ++i) {
        const auto gen = testutil::random_config(g);
        const auto r = ita::run_scenario(gen.cfg, gen.scenario);
        const auto& s = r.summary;
        std::uint64_t up_inn = 0, up_edge = 0, inn_cloud = 0, edge_cloud = 0;
        for (const auto& l : r.links) {
            if (l.to == "inn") up_inn += l.bytes;
            if (l.to == "edge") up_edge += l.bytes;
            if (l.from == "inn") inn_cloud = l.bytes;
            if (l.from == "edge") edge_cloud = l.bytes;
        }
        const bool ok = r.emitted == s.dropped_at_edge + s.processed_at_edge + s.messages_to_cloud.edge &&
                        r.emitted == s.messages_to_cloud.inn && up_inn == up_edge && inn_cloud == up_inn &&
                        inn_cloud == s.stored_bytes.inn && edge_cloud == s.stored_bytes.edge &&
                        s.bandwidth_bits.inn == 8 * inn_cloud && s.bandwidth_bits.edge == 8 * edge_cloud &&
                        r.cloud.bytes(Path::Edge) == s.stored_bytes.edge && r.cloud.bytes(Path::INN) == s.stored_bytes.inn;
        if (!ok) {
            ++bad;
            if (first_bad.empty()) first_bad = " first failing config #" + std::to_string(i);
        }
    }
    gate("AC6", bad == 0,
         "conservation and per-link byte totals on 100 randomized configs (seed 20240601): " +
             std::to_string(100 - bad) + "/100 hold" + first_bad);
}

void ac7(const testutil::TempDir& dir) {
    bool ok = true;
    std::ostringstream d;
    std::mt19937_64 g(7);
    const auto random = testutil::random_config(g);
    const std::pair<ita::Config, ita::Scenario> runs[] = {{synthetic_defaults(), ita::Scenario::CaseOne},
                                                          {synthetic_defaults(), ita::Scenario::CaseTwo},
                                                          {synthetic_defaults(), ita::Scenario::Scaling},
                                                          {random.cfg, random.scenario}};
    int n = 0;
    for (const auto& [cfg, sc] : runs) {
        const auto a = dir / ("det_a" + std::to_string(n));
        const auto b = dir / ("det_b" + std::to_string(n++));
        ita::write_run(ita::run_scenario(cfg, sc), a);
        ita::write_run(ita::run_scenario(cfg, sc), b);
        const auto ta = testutil::tree(a), tb = testutil::tree(b);
        ok = ok && ta == tb && !ta.empty();
        d << ita::to_string(sc) << " " << ta.size() << " files " << (ta == tb ? "identical" : "DIFFER") << "; ";
    }
    gate("AC7", ok, "byte-identical CSV trees for repeated runs. " + d.str());
}

void ac8() {
    const ita::RuleSet rules;
    using ita::Verdict;
    struct Case {
        const char* label;
        Verdict got;
        Verdict want;
    };
    const Case cases[] = {
        {"rule1(51)", ita::rule1(51, rules), Verdict::Forward},
        {"rule1(50)", ita::rule1(50, rules), Verdict::Drop},
        {"rule1(122.153)", ita::rule1(122.153, rules), Verdict::Forward},
        {"rule2(29,10,2.7)", ita::rule2(29, 10, 2.7, rules), Verdict::Forward},
        {"rule2(30,35,500)", ita::rule2(30, 35, 500, rules), Verdict::Drop},
        {"rule2(45,36,2.7)", ita::rule2(45, 36, 2.7, rules), Verdict::Forward},
        {"rule2(30,10,2.7)", ita::rule2(30, 10, 2.7, rules), Verdict::Drop},
        {"rule2(45,35,2.7)", ita::rule2(45, 35, 2.7, rules), Verdict::Drop},
        {"rule2(45,10,500.1)", ita::rule2(45, 10, 500.1, rules), Verdict::Forward},
    };
    int passed = 0;
    std::string wrong;
    for (const auto& c : cases) {
        if (c.got == c.want) {
            ++passed;
        } else {
            wrong += std::string(" ") + c.label;
        }
    }
    gate("AC8", passed == 9, "rule truth table " + std::to_string(passed) + "/9" + (wrong.empty() ? "" : ", wrong:" + wrong));
}

}  // namespace

int main() {
    testutil::TempDir dir;
    try {
        ac1();
        ac2_ac3(dir);
        ac4();
        ac5();
        ac6();
        ac7(dir);
        ac8();
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance aborted: " << e.what() << "\n";
        return 1;
    }
    std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criterion line(s) failed\n"
                           : "acceptance: all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
