#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "ita/analytics.hpp"
#include "ita/engine.hpp"

using ita::DataClass;
using ita::EdgeNode;
using ita::Message;
using ita::SimTime;
using ita::Verdict;

namespace {

SimTime s(const char* text) { return SimTime::parse(text); }

const ita::RuleSet kRules{};

ita::SensorReading reading(double t, double h, double l, double v) {
    ita::SensorReading r;
    r.temperature = t;
    r.humidity = h;
    r.light = l;
    r.voltage = v;
    return r;
}

Message frame(std::uint64_t id, std::optional<ita::PriorityKey> key = std::nullopt) {
    Message m;
    m.msg_id = id;
    m.data_class = DataClass::ImageFrame;
    m.size = 495'000;
    m.priority = key.value_or(ita::PriorityKey{1, 0, id});
    return m;
}

/// Drives an EdgeNode on a real engine: completions and deadlines become
/// events, everything sent to the cloud is recorded.
struct Harness {
    struct Ev {
        enum Kind { Complete, Deadline } kind;
        std::uint64_t epoch = 0;
    };

    explicit Harness(ita::EdgeParams p) : edge(p) {}

    void apply(ita::EdgeEffects fx) {
        for (auto& m : fx.to_cloud) cloud.push_back({eng.now(), m.msg_id});
        if (fx.completed) done.push_back({eng.now(), fx.completed->msg_id});
        if (fx.schedule_deadline) {
            eng.schedule(fx.schedule_deadline->at, {}, {Ev::Deadline, fx.schedule_deadline->epoch});
        }
        if (fx.schedule_completion) eng.schedule(*fx.schedule_completion, {}, {Ev::Complete, 0});
    }

    void arrive(Message m) { apply(edge.on_image(std::move(m), eng.now())); }

    void run() {
        eng.run_to_completion([&](const auto& ev) {
            if (ev.payload.kind == Ev::Complete) {
                apply(edge.on_completion(eng.now()));
            } else {
                apply(edge.on_deadline(ev.payload.epoch, eng.now()));
            }
        });
    }

    ita::Engine<Ev> eng;
    EdgeNode edge;
    std::vector<std::pair<SimTime, std::uint64_t>> done;
    std::vector<std::pair<SimTime, std::uint64_t>> cloud;
};

}  // namespace

TEST(Rules, Rule1Boundaries) {
    EXPECT_EQ(ita::rule1(51, kRules), Verdict::Forward);
    EXPECT_EQ(ita::rule1(50, kRules), Verdict::Drop);
    EXPECT_EQ(ita::rule1(122.153, kRules), Verdict::Forward);
}

TEST(Rules, Rule2Boundaries) {
    EXPECT_EQ(ita::rule2(29, 10, 2.7, kRules), Verdict::Forward);
    EXPECT_EQ(ita::rule2(30, 35, 500, kRules), Verdict::Drop);
    EXPECT_EQ(ita::rule2(45, 36, 2.7, kRules), Verdict::Forward);
    EXPECT_EQ(ita::rule2(30, 10, 2.7, kRules), Verdict::Drop);
    EXPECT_EQ(ita::rule2(45, 35, 2.7, kRules), Verdict::Drop);
    EXPECT_EQ(ita::rule2(45, 10, 500.1, kRules), Verdict::Forward);
}

TEST(Rules, ModeSelectsPredicate) {
    const auto hot = reading(55, 40, 10, 2.6);
    const auto dark_dry = reading(20, 25, 10, 2.6);
    const auto neither = reading(20, 40, 10, 2.6);
    EXPECT_EQ(ita::evaluate(hot, kRules, ita::RuleMode::Rule1), Verdict::Forward);
    EXPECT_EQ(ita::evaluate(hot, kRules, ita::RuleMode::Rule2), Verdict::Drop);
    EXPECT_EQ(ita::evaluate(dark_dry, kRules, ita::RuleMode::Rule1), Verdict::Drop);
    EXPECT_EQ(ita::evaluate(dark_dry, kRules, ita::RuleMode::Rule2), Verdict::Forward);
    EXPECT_EQ(ita::evaluate(dark_dry, kRules, ita::RuleMode::Either), Verdict::Forward);
    EXPECT_EQ(ita::evaluate(neither, kRules, ita::RuleMode::Either), Verdict::Drop);
}

TEST(Rules, PropertyTotalAndMatchesDirectComparison) {
    std::mt19937_64 g(50);
    std::uniform_real_distribution<double> d(-100, 600);
    std::uniform_int_distribution<int> snap(0, 3);
    const double edges[] = {50, 30, 35, 500};
    for (int i = 0; i < 20'000; ++i) {
        double f[4];
        for (int k = 0; k < 4; ++k) f[k] = snap(g) == 0 ? edges[k] : d(g);
        const auto r = reading(f[0], f[1], f[2], f[3]);
        const bool r1 = f[0] > 50, r2 = f[1] < 30 || f[2] > 35 || f[3] > 500;
        ASSERT_EQ(ita::evaluate(r, kRules, ita::RuleMode::Rule1) == Verdict::Forward, r1);
        ASSERT_EQ(ita::evaluate(r, kRules, ita::RuleMode::Rule2) == Verdict::Forward, r2);
        ASSERT_EQ(ita::evaluate(r, kRules, ita::RuleMode::Either) == Verdict::Forward, r1 || r2);
    }
}

TEST(Classify, ClassRankFirst) {
    ita::PriorityMaps maps;
    Message raw;
    raw.data_class = DataClass::RawSensor;
    raw.source = {7, ita::NodeKind::Sensor};
    const auto kr = ita::classify(raw, maps, 100);
    EXPECT_EQ(kr.class_rank, 0);
    const auto ki = ita::classify(frame(1), maps, 1);
    EXPECT_LT(kr, ki);
}

TEST(Classify, SourceRankThenArrival) {
    ita::PriorityMaps maps;
    maps.source_rank = {{2, 2}, {5, 5}};
    Message a, b;
    a.source = {2, ita::NodeKind::Sensor};
    b.source = {5, ita::NodeKind::Sensor};
    EXPECT_LT(ita::classify(a, maps, 9), ita::classify(b, maps, 1));
    EXPECT_LT(ita::classify(a, maps, 1), ita::classify(a, maps, 2));
    Message unmapped;
    unmapped.source = {99, ita::NodeKind::Sensor};
    EXPECT_LT(ita::classify(b, maps, 9), ita::classify(unmapped, maps, 1));
}

TEST(EdgeNode, RawReadingsBypassTheBuffer) {
    EdgeNode e;
    EXPECT_EQ(e.on_raw(reading(55, 40, 10, 2.6), kRules, ita::RuleMode::Either), Verdict::Forward);
    EXPECT_EQ(e.on_raw(reading(20, 40, 10, 2.6), kRules, ita::RuleMode::Either), Verdict::Drop);
    EXPECT_EQ(e.buffered(), 0u);
    EXPECT_FALSE(e.busy());
    EXPECT_EQ(e.counters().raw_forwarded, 1u);
    EXPECT_EQ(e.counters().raw_dropped, 1u);
    EXPECT_EQ(e.counters().compute_time, s("0.02"));
}

TEST(EdgeNode, IdleArrivalStartsImmediately) {
    EdgeNode e;
    const auto fx = e.on_image(frame(1), s("3"));
    ASSERT_TRUE(fx.schedule_completion);
    EXPECT_EQ(*fx.schedule_completion, s("3.01"));
    ASSERT_TRUE(fx.schedule_deadline);
    EXPECT_EQ(fx.schedule_deadline->at, s("4"));
    EXPECT_TRUE(e.busy());
    EXPECT_EQ(e.buffered(), 0u);
}

TEST(EdgeNode, FullBufferForwardsRaw) {
    EdgeNode e;
    e.on_image(frame(0), SimTime{});
    for (std::uint64_t i = 1; i <= 20; ++i) EXPECT_TRUE(e.on_image(frame(i), SimTime{}).to_cloud.empty());
    EXPECT_EQ(e.buffered(), 20u);
    const auto fx = e.on_image(frame(21), SimTime{});
    ASSERT_EQ(fx.to_cloud.size(), 1u);
    EXPECT_EQ(fx.to_cloud[0].msg_id, 21u);
    EXPECT_FALSE(fx.to_cloud[0].processed_at_edge);
    EXPECT_EQ(e.counters().overflow_forwarded, 1u);
}

TEST(EdgeNode, FullBufferDropsWhenConfigured) {
    ita::EdgeParams p;
    p.buffer_storage = 1;
    p.overflow = ita::OverflowPolicy::Drop;
    EdgeNode e(p);
    e.on_image(frame(0), SimTime{});
    e.on_image(frame(1), SimTime{});
    const auto fx = e.on_image(frame(2), SimTime{});
    EXPECT_TRUE(fx.dropped);
    EXPECT_TRUE(fx.to_cloud.empty());
    EXPECT_EQ(e.counters().overflow_dropped, 1u);
}

TEST(EdgeProcess, SingleItemCompletes) {
    Harness h({});
    h.eng.run(s("2"), [](const auto&) {});
    h.arrive(frame(1));
    h.run();
    ASSERT_EQ(h.done.size(), 1u);
    EXPECT_EQ(h.done[0].first, s("2.01"));
    EXPECT_TRUE(h.cloud.empty());
    EXPECT_EQ(h.edge.buffered(), 0u);
    EXPECT_FALSE(h.edge.busy());
}

TEST(EdgeProcess, BackToBackCompletions) {
    Harness h({});
    for (std::uint64_t i = 0; i < 3; ++i) h.arrive(frame(i));
    h.run();
    ASSERT_EQ(h.done.size(), 3u);
    EXPECT_EQ(h.done[0].first, s("0.01"));
    EXPECT_EQ(h.done[1].first, s("0.02"));
    EXPECT_EQ(h.done[2].first, s("0.03"));
    EXPECT_TRUE(h.cloud.empty());
}

TEST(EdgeProcess, CompletedItemIsMarkedAndAbsorbed) {
    EdgeNode e;
    e.on_image(frame(1), SimTime{});
    const auto fx = e.on_completion(s("0.01"));
    ASSERT_TRUE(fx.completed);
    EXPECT_TRUE(fx.completed->processed_at_edge);
    EXPECT_TRUE(fx.to_cloud.empty());
}

TEST(Deadline, TwentyFastItemsNeverFlush) {
    Harness h({});
    for (std::uint64_t i = 0; i < 20; ++i) h.arrive(frame(i));
    h.run();
    EXPECT_EQ(h.done.size(), 20u);
    EXPECT_EQ(h.done.back().first, s("0.2"));
    EXPECT_TRUE(h.cloud.empty());
    EXPECT_EQ(h.edge.counters().deadline_flushes, 0u);
}

TEST(Deadline, SlowItemsGetFlushed) {
    ita::EdgeParams p;
    p.algorithm_time = s("0.2");
    Harness h(p);
    for (std::uint64_t i = 0; i < 20; ++i) h.arrive(frame(i));
    h.run();
    // Items 0-4 complete at 0.2..1.0; the deadline at 1.0 runs first and
    // flushes the 15 still waiting, then item 4 finishes.
    EXPECT_EQ(h.done.size(), 5u);
    EXPECT_EQ(h.cloud.size(), 15u);
    for (const auto& [t, id] : h.cloud) {
        EXPECT_EQ(t, s("1"));
        EXPECT_GE(id, 5u);
    }
    EXPECT_EQ(h.done.back().first, s("1"));
}

TEST(Deadline, EmptyBufferIsNoOp) {
    EdgeNode e;
    e.on_image(frame(1), SimTime{});
    const auto fx = e.on_deadline(e.epoch(), s("1"));
    EXPECT_TRUE(fx.to_cloud.empty());
    EXPECT_TRUE(e.busy());
    EXPECT_EQ(e.counters().deadline_flushes, 0u);
}

TEST(Deadline, StaleEpochIsIgnored) {
    EdgeNode e;
    e.on_image(frame(1), SimTime{});
    const auto old = e.epoch();
    e.on_completion(s("0.01"));
    e.on_image(frame(2), s("0.5"));
    e.on_image(frame(3), s("0.5"));
    const auto fx = e.on_deadline(old, s("1"));
    EXPECT_TRUE(fx.to_cloud.empty());
    EXPECT_FALSE(fx.schedule_deadline);
    EXPECT_EQ(e.buffered(), 1u);
}

// Whatever order co-resident items arrive in, the edge serves them by key.
TEST(EdgeProcess, PropertyServiceOrderFollowsPriority) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        std::mt19937_64 g(seed);
        std::uniform_int_distribution<int> rank(0, 3);
        ita::EdgeParams p;
        p.buffer_storage = 40;
        p.analytics_deadline = s("100");
        Harness h(p);
        h.arrive(frame(1000, ita::PriorityKey{0, 0, 0}));  // occupies the server while the rest queue up
        std::vector<ita::PriorityKey> keys;
        for (std::uint64_t i = 0; i < 30; ++i) {
            keys.push_back({rank(g), rank(g), i + 1});
            h.arrive(frame(i, keys.back()));
        }
        h.run();
        ASSERT_EQ(h.done.size(), 31u);
        std::vector<std::uint64_t> expected;
        std::vector<std::size_t> idx(keys.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
        for (auto i : idx) expected.push_back(i);
        std::vector<std::uint64_t> got;
        for (std::size_t i = 1; i < h.done.size(); ++i) got.push_back(h.done[i].second);
        ASSERT_EQ(got, expected);
    }
}

// Arrival gaps at least algorithm_time: the server is always free again in time.
TEST(EdgeProcess, KeepsUpWhenGapsCoverServiceTime) {
    Harness h({});
    for (int i = 1; i <= 2000; ++i) {
        h.eng.run(SimTime::from_micros(500'000LL * i), [&](const auto& ev) {
            if (ev.payload.kind == Harness::Ev::Complete) {
                h.apply(h.edge.on_completion(h.eng.now()));
            } else {
                h.apply(h.edge.on_deadline(ev.payload.epoch, h.eng.now()));
            }
        });
        h.arrive(frame(i));
    }
    h.run();
    EXPECT_EQ(h.done.size(), 2000u);
    EXPECT_TRUE(h.cloud.empty());
}

TEST(Cloud, CountersPerPath) {
    ita::CloudState c;
    Message m;
    m.size = 49'000;
    for (int i = 0; i < 2000; ++i) c.on_receive(m, ita::Path::INN);
    for (int i = 0; i < 930; ++i) c.on_receive(m, ita::Path::Edge);
    EXPECT_EQ(c.compute(ita::Path::INN), s("20"));
    EXPECT_EQ(c.compute(ita::Path::Edge), s("9.3"));
    EXPECT_EQ(c.bytes(ita::Path::INN), 98'000'000u);
    EXPECT_EQ(c.messages(ita::Path::Edge), 930u);
    ita::CloudState empty;
    EXPECT_EQ(empty.compute(ita::Path::Edge), SimTime{});
    EXPECT_EQ(empty.bytes(ita::Path::INN), 0u);
}
