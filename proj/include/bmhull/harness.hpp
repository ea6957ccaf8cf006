#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bmhull/bounds.hpp"
#include "bmhull/path.hpp"
#include "bmhull/transform.hpp"

namespace bmhull {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string command;  // estimate | inverse | bounds | optimize | stage | report
    int dim = 2;
    std::int64_t steps = 10000;
    std::int64_t replicates = 10000;
    std::uint64_t seed = 0;
    std::string method = "both";  // direct | transform | both
    std::string output;           // empty = stdout
    std::string format = "csv";   // csv | json
    int workers = 0;              // 0 = hardware concurrency
    bool heavy = false;           // raises steps to 1e5 for bias studies
    int nmax = 5;                 // bounds table / report dimension range
    double level = 1.0;           // inverse passage level
    double allowance = 0.05;      // discretization allowance for verdicts
    std::vector<double> radii;    // stage override
    double dt_factor = 1e-4;      // stage step-size factor
    std::string dump_paths;       // debug path dump target
};

enum class Verdict { None, InBounds, BelowLower, AboveUpper, Inconclusive };

const char* verdict_name(Verdict v);

struct ReportRow {
    Quantity quantity = Quantity::V1;
    int dim = 1;
    std::string method;
    std::optional<Estimate> estimate;
    BoundRow bounds;
    Verdict verdict = Verdict::None;
};

/// CI position against [lower (1-a), upper (1+a)]: inside, fully below,
/// fully above, or straddling (Inconclusive).
Verdict judge(const Estimate& estimate, const BoundRow& bounds, double allowance);

/// Runs `job(replicate)` for replicate = 0..replicates-1 on `workers`
/// threads; the result vector is ordered by replicate index and identical
/// to serial execution. A job failure is rethrown naming the replicate.
template <typename Job>
auto schedule(std::int64_t replicates, int workers, Job job)
    -> std::vector<decltype(job(std::int64_t{}))> {
    using T = decltype(job(std::int64_t{}));
    std::vector<T> results(static_cast<std::size_t>(replicates));
    if (replicates <= 0) return results;
    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(
        std::min<std::int64_t>(workers, replicates));
    if (workers == 1) {
        for (std::int64_t i = 0; i < replicates; ++i) {
            try {
                results[static_cast<std::size_t>(i)] = job(i);
            } catch (const std::exception& e) {
                throw std::runtime_error("replicate " + std::to_string(i) +
                                         " failed: " + e.what());
            }
        }
        return results;
    }
    std::atomic<std::int64_t> next{0};
    std::atomic<std::int64_t> failed{-1};
    std::string error_text;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            std::int64_t i = next.fetch_add(1);
            if (i >= replicates || failed.load() >= 0) return;
            try {
                results[static_cast<std::size_t>(i)] = job(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (failed.load() < 0 || i < failed.load()) {
                    failed.store(i);
                    error_text = e.what();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load() >= 0)
        throw std::runtime_error("replicate " + std::to_string(failed.load()) +
                                 " failed: " + error_text);
    return results;
}

/// Per-replicate samples of all four functionals at time t, one path and
/// one hull per replicate.
struct FunctionalSamples {
    int dim = 1;
    std::vector<double> volume, surface, diameter, circumradius;
};

FunctionalSamples sample_functionals(int dim, std::int64_t steps,
                                     std::int64_t replicates, std::uint64_t seed,
                                     int workers, double t = 1.0,
                                     std::uint32_t lane = 0);

struct PassageSummary {
    std::vector<double> times;  // uncensored passage times
    std::int64_t censored = 0;
    std::int64_t total = 0;
};

/// Direct first-passage sampling at the given level. The grid step is
/// 1/steps_per_unit and the horizon is 16x the theorem upper bound for the
/// quantity, which keeps the censored fraction far below the 0.1% budget.
PassageSummary sample_direct_passage(Functional kind, int dim,
                                     std::int64_t steps_per_unit,
                                     std::int64_t replicates, std::uint64_t seed,
                                     int workers, double level = 1.0);

struct ExitSummary {
    std::vector<double> times;
    std::int64_t censored = 0;
    std::int64_t total = 0;
};

ExitSummary sample_exit_times(int dim, double dt, std::int64_t replicates,
                              std::uint64_t seed, int workers,
                              double radius = 1.0);

std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string rows_to_json(const std::vector<ReportRow>& rows);

struct RunResult {
    std::vector<ReportRow> rows;
    std::string text;  // serialized output (rows or a command-specific table)
    int exit_code = 0;
};

/// Executes a full CLI command. Deterministic for fixed (config, seed)
/// regardless of worker count; exit code 1 iff some verdict fell outside
/// the bounds, 2 on configuration errors (thrown as ConfigError).
RunResult run(const ExperimentConfig& config);

}  // namespace bmhull
