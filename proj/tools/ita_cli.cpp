// ita: command-line front end for the in-transit analytics simulator.
//
//   ita run --scenario case1 --seed 42 --out r1 [--config cfg.ini] [--duration 1000]
//   ita sweep --scenario case2 --seeds 1,2,3 --out sweep/ [--jobs 4]
//   ita fetch-dataset [--url URL] [--cache-dir DIR]
//   ita validate --config cfg.ini
//   ita report --in r1
//
// Exit codes: 0 success, 1 configuration/usage error, 2 I/O error,
// 3 report found the summary inconsistent with the series files.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ita/fetch.hpp"
#include "ita/ita.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitInconsistent = 3;

ita::Config load_or_default(const std::string& path) {
    return path.empty() ? ita::default_config() : ita::load_config(path);
}

void print_summary(const ita::RunSummary& s) {
    for (const auto& r : ita::summary_rows(s)) {
        std::cout << "  " << r.metric << ": edge=" << r.edge << " inn=" << r.inn;
        if (!r.reduction_pct.empty()) std::cout << " reduction=" << r.reduction_pct << "%";
        std::cout << "\n";
    }
}

int cmd_run(const std::string& config_path, const std::string& scenario, std::optional<std::uint64_t> seed,
            std::optional<std::string> duration, const std::string& out) {
    ita::Config cfg = load_or_default(config_path);
    if (seed) cfg.run.seed = *seed;
    if (duration) {
        try {
            cfg.run.duration = ita::SimTime::parse(*duration);
        } catch (const ita::BadParams& e) {
            throw ita::ConfigError("run.duration", e.what());
        }
        ita::validate(cfg);
    }
    const auto result = ita::run_scenario(cfg, ita::parse_scenario(scenario));
    const auto files = ita::write_run(result, out);
    std::cout << "scenario " << scenario << ": " << result.events << " events, " << result.emitted
              << " emissions, " << files.size() << " files in " << out << "\n";
    print_summary(result.summary);
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& scenario, const std::vector<std::uint64_t>& seeds,
              const std::string& out, unsigned jobs) {
    const ita::Config base = load_or_default(config_path);
    const ita::Scenario sc = ita::parse_scenario(scenario);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::vector<std::string> errors;
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                ita::Config cfg = base;
                cfg.run.seed = seeds[i];
                const auto result = ita::run_scenario(cfg, sc);
                ita::write_run(result, std::filesystem::path(out) / ("seed_" + std::to_string(seeds[i])));
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                errors.push_back("seed " + std::to_string(seeds[i]) + ": " + e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::max(1u, jobs); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    std::cout << "sweep: " << seeds.size() - errors.size() << "/" << seeds.size() << " runs written to " << out
              << "\n";
    return errors.empty() ? 0 : kExitIo;
}

int cmd_fetch(std::optional<std::string> url, std::optional<std::string> cache_dir) {
    const ita::Config cfg = ita::default_config();
    const std::string u = url.value_or(cfg.dataset.url);
    const std::string dir = cache_dir.value_or(cfg.dataset.cache_dir);
    std::cout << "fetching " << u << "\n";
    const auto res = ita::fetch_dataset(u, dir);
    const auto ds = ita::load_dataset(res.path.string());
    std::cout << "saved " << res.bytes << " bytes to " << res.path.string() << " (" << ds.readings.size()
              << " records, " << ds.rejected << " rejected lines)\n";
    return 0;
}

int cmd_validate(const std::string& path) {
    const ita::Config cfg = ita::load_config(path);
    std::cout << path << ": ok (" << cfg.sources.size() << " sources)\n";
    return 0;
}

int cmd_report(const std::string& dir) {
    const auto run = ita::read_series_dir(dir);
    const auto recomputed = ita::derived_rows(ita::summarize(run));
    const auto stored = ita::parse_summary_csv(ita::read_text_file(std::filesystem::path(dir) / "summary.csv"));
    int mismatches = 0;
    for (const auto& row : recomputed) {
        auto it = std::find_if(stored.begin(), stored.end(), [&](const auto& s) { return s.metric == row.metric; });
        std::cout << row.metric << ",edge=" << row.edge << ",inn=" << row.inn << ",reduction_pct=" << row.reduction_pct;
        if (it == stored.end()) {
            std::cout << "  MISSING in summary.csv\n";
            ++mismatches;
        } else if (!(*it == row)) {
            std::cout << "  MISMATCH (summary.csv: " << it->edge << "," << it->inn << "," << it->reduction_pct << ")\n";
            ++mismatches;
        } else {
            std::cout << "  ok\n";
        }
    }
    if (mismatches) {
        std::cerr << "report: " << mismatches << " row(s) disagree with summary.csv\n";
        return kExitInconsistent;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"In-transit analytics simulator: edge vs plain forwarding"};
    app.require_subcommand(1);

    std::string config_path, scenario, out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> duration;
    auto* run = app.add_subcommand("run", "Run one scenario and write CSVs");
    run->add_option("--config", config_path, "Config file (defaults when omitted)")->check(CLI::ExistingFile);
    run->add_option("--scenario", scenario, "case1 | case2 | scaling")->required();
    run->add_option("--seed", seed, "Random seed (overrides run.seed)");
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--duration", duration, "Simulated seconds (overrides run.duration)");

    std::vector<std::uint64_t> seeds;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "Run one scenario for several seeds in parallel");
    sweep->add_option("--config", config_path, "Config file")->check(CLI::ExistingFile);
    sweep->add_option("--scenario", scenario, "case1 | case2 | scaling")->required();
    sweep->add_option("--seeds", seeds, "Seeds, comma separated")->required()->delimiter(',');
    sweep->add_option("--out", out, "Output directory; one seed_<n>/ per run")->required();
    sweep->add_option("--jobs", jobs, "Parallel runs");

    std::optional<std::string> url, cache_dir;
    auto* fetch = app.add_subcommand("fetch-dataset", "Download and cache the sensor dataset");
    fetch->add_option("--url", url, "Dataset URL (default: dataset.url / ITA_DATASET_URL)");
    fetch->add_option("--cache-dir", cache_dir, "Cache directory (default: ITA_CACHE_DIR)");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config file");
    validate->add_option("--config", validate_path, "Config file")->required();

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Recompute the summary from a run's CSVs");
    report->add_option("--in", report_dir, "Run output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, scenario, seed, duration, out);
        if (*sweep) return cmd_sweep(config_path, scenario, seeds, out, jobs);
        if (*fetch) return cmd_fetch(url, cache_dir);
        if (*validate) return cmd_validate(validate_path);
        if (*report) return cmd_report(report_dir);
    } catch (const ita::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ita::BadParams& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ita::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
