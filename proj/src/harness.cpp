#include "bmhull/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bmhull/optimize.hpp"
#include "bmhull/stage.hpp"

namespace bmhull {

namespace {

// Sub-stream lanes, fixed so every experiment draws from its own stream.
constexpr std::uint32_t kLaneFunctionals = 0;
constexpr std::uint32_t kLanePassageBase = 1;  // +0..3 by functional
constexpr std::uint32_t kLaneExit = 5;

Functional quantity_functional(Quantity q) {
    switch (q) {
        case Quantity::V1:
        case Quantity::ThetaV1: return Functional::Volume;
        case Quantity::S1:
        case Quantity::ThetaS1: return Functional::SurfaceArea;
        case Quantity::D1:
        case Quantity::ThetaD1: return Functional::Diameter;
        case Quantity::R1:
        case Quantity::ThetaR1: return Functional::Circumradius;
    }
    return Functional::Volume;
}

Quantity inverse_quantity(Functional kind) {
    switch (kind) {
        case Functional::Volume: return Quantity::ThetaV1;
        case Functional::SurfaceArea: return Quantity::ThetaS1;
        case Functional::Diameter: return Quantity::ThetaD1;
        case Functional::Circumradius: return Quantity::ThetaR1;
    }
    return Quantity::ThetaV1;
}

Quantity direct_quantity(Functional kind) {
    switch (kind) {
        case Functional::Volume: return Quantity::V1;
        case Functional::SurfaceArea: return Quantity::S1;
        case Functional::Diameter: return Quantity::D1;
        case Functional::Circumradius: return Quantity::R1;
    }
    return Quantity::V1;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

constexpr Functional kKinds[] = {Functional::Volume, Functional::SurfaceArea,
                                 Functional::Diameter, Functional::Circumradius};

void validate(const ExperimentConfig& config) {
    if (config.dim < 1) throw ConfigError("dim must be >= 1");
    if (config.format != "csv" && config.format != "json")
        throw ConfigError("format must be csv or json");
    if (config.method != "direct" && config.method != "transform" &&
        config.method != "both")
        throw ConfigError("method must be direct, transform, or both");
    if (config.nmax < 1) throw ConfigError("nmax must be >= 1");
    const bool path_command = config.command == "estimate" ||
                              config.command == "inverse" ||
                              config.command == "report";
    if (path_command) {
        if (config.replicates < 2)
            throw ConfigError("replicates must be >= 2 for a confidence interval");
        if (config.steps < 100)
            throw ConfigError("steps must be >= 100 for path experiments");
        if (!(config.level > 0.0)) throw ConfigError("level must be > 0");
    }
    if (config.command == "stage") {
        if (config.replicates < 1) throw ConfigError("replicates must be >= 1");
        if (!(config.dt_factor > 0.0)) throw ConfigError("dt-factor must be > 0");
        if (!config.radii.empty() &&
            static_cast<int>(config.radii.size()) != config.dim)
            throw ConfigError("need one radius per dimension");
    }
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::None: return "";
        case Verdict::InBounds: return "InBounds";
        case Verdict::BelowLower: return "BelowLower";
        case Verdict::AboveUpper: return "AboveUpper";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "";
}

Verdict judge(const Estimate& estimate, const BoundRow& bounds, double allowance) {
    const double lo = bounds.lower * (1.0 - allowance);
    const double hi = bounds.upper * (1.0 + allowance);
    if (estimate.ci_hi < lo) return Verdict::BelowLower;
    if (estimate.ci_lo > hi) return Verdict::AboveUpper;
    if (estimate.ci_lo >= lo && estimate.ci_hi <= hi) return Verdict::InBounds;
    return Verdict::Inconclusive;
}

FunctionalSamples sample_functionals(int dim, std::int64_t steps,
                                     std::int64_t replicates, std::uint64_t seed,
                                     int workers, double t, std::uint32_t lane) {
    struct Row {
        double v = 0, s = 0, d = 0, r = 0;
    };
    auto rows = schedule(replicates, workers, [&](std::int64_t rep) {
        PathConfig pc;
        pc.dim = dim;
        pc.steps = steps;
        pc.horizon = t;
        pc.key = StreamKey{seed, static_cast<std::uint64_t>(rep), lane};
        BrownianPath path = sample_path(pc);
        HullFunctionals f = all_functionals_at(path, t);
        return Row{f.volume, f.surface.value_or(0.0), f.diameter, f.circumradius};
    });
    FunctionalSamples out;
    out.dim = dim;
    out.volume.reserve(rows.size());
    out.diameter.reserve(rows.size());
    out.circumradius.reserve(rows.size());
    if (dim > 1) out.surface.reserve(rows.size());
    for (const Row& r : rows) {
        out.volume.push_back(r.v);
        if (dim > 1) out.surface.push_back(r.s);
        out.diameter.push_back(r.d);
        out.circumradius.push_back(r.r);
    }
    return out;
}

PassageSummary sample_direct_passage(Functional kind, int dim,
                                     std::int64_t steps_per_unit,
                                     std::int64_t replicates, std::uint64_t seed,
                                     int workers, double level) {
    const BoundRow bounds = theorem_bounds(inverse_quantity(kind), dim);
    // Theta_y scales the level-1 bound by y^p (same exponent as the inverse
    // transform); 16x that keeps censoring negligible.
    const double p = inverse_transform_exponent(kind, dim);
    const double horizon = 16.0 * bounds.upper * std::pow(level, p);
    const auto steps = static_cast<std::int64_t>(
        std::ceil(horizon * static_cast<double>(steps_per_unit)));
    const std::uint32_t lane = kLanePassageBase + static_cast<std::uint32_t>(kind);
    auto samples = schedule(replicates, workers, [&](std::int64_t rep) {
        PathConfig pc;
        pc.dim = dim;
        pc.steps = steps;
        pc.horizon = horizon;
        pc.key = StreamKey{seed, static_cast<std::uint64_t>(rep), lane};
        return first_passage(pc, kind, level);
    });
    PassageSummary out;
    out.total = replicates;
    for (const PassageSample& s : samples) {
        if (s.censored)
            ++out.censored;
        else
            out.times.push_back(s.time);
    }
    return out;
}

ExitSummary sample_exit_times(int dim, double dt, std::int64_t replicates,
                              std::uint64_t seed, int workers, double radius) {
    const double horizon = 16.0 * ball_exit_mean(dim, radius);
    const auto steps = static_cast<std::int64_t>(std::ceil(horizon / dt));
    auto samples = schedule(replicates, workers, [&](std::int64_t rep) {
        PathConfig pc;
        pc.dim = dim;
        pc.steps = steps;
        pc.horizon = horizon;
        pc.key = StreamKey{seed, static_cast<std::uint64_t>(rep), kLaneExit};
        return exit_time_ball(pc, radius);
    });
    ExitSummary out;
    out.total = replicates;
    for (const ExitSample& s : samples) {
        if (s.censored)
            ++out.censored;
        else
            out.times.push_back(s.time);
    }
    return out;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "quantity,dim,method,n_samples,mean,stderr,ci_lo,ci_hi,"
           "censored_fraction,lower,exact,upper,verdict\n";
    for (const ReportRow& row : rows) {
        out << quantity_name(row.quantity) << ',' << row.dim << ',' << row.method
            << ',';
        if (row.estimate) {
            const Estimate& e = *row.estimate;
            out << e.n_samples << ',' << fmt(e.mean) << ',' << fmt(e.std_err) << ','
                << fmt(e.ci_lo) << ',' << fmt(e.ci_hi) << ','
                << fmt(e.censored_fraction) << ',';
        } else {
            out << "0,,,,,,";
        }
        out << fmt(row.bounds.lower) << ',';
        if (row.bounds.exact) out << fmt(*row.bounds.exact);
        out << ',' << fmt(row.bounds.upper) << ',' << verdict_name(row.verdict)
            << '\n';
    }
    return out.str();
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ReportRow& row = rows[i];
        out << "  {\"quantity\":\"" << quantity_name(row.quantity)
            << "\",\"dim\":" << row.dim << ",\"method\":\"" << row.method << "\",";
        if (row.estimate) {
            const Estimate& e = *row.estimate;
            out << "\"n_samples\":" << e.n_samples << ",\"mean\":" << fmt(e.mean)
                << ",\"stderr\":" << fmt(e.std_err) << ",\"ci_lo\":" << fmt(e.ci_lo)
                << ",\"ci_hi\":" << fmt(e.ci_hi)
                << ",\"censored_fraction\":" << fmt(e.censored_fraction) << ",";
        } else {
            out << "\"n_samples\":0,\"mean\":null,\"stderr\":null,\"ci_lo\":null,"
                   "\"ci_hi\":null,\"censored_fraction\":null,";
        }
        out << "\"lower\":" << fmt(row.bounds.lower) << ",\"exact\":";
        if (row.bounds.exact)
            out << fmt(*row.bounds.exact);
        else
            out << "null";
        out << ",\"upper\":" << fmt(row.bounds.upper) << ",\"verdict\":\""
            << verdict_name(row.verdict) << "\"}";
        out << (i + 1 < rows.size() ? ",\n" : "\n");
    }
    out << "]\n";
    return out.str();
}

namespace {

void append_estimate_rows(std::vector<ReportRow>& rows,
                          const FunctionalSamples& samples, int dim,
                          double allowance) {
    for (Functional kind : kKinds) {
        if (kind == Functional::SurfaceArea && dim == 1) continue;
        const std::vector<double>* data = nullptr;
        switch (kind) {
            case Functional::Volume: data = &samples.volume; break;
            case Functional::SurfaceArea: data = &samples.surface; break;
            case Functional::Diameter: data = &samples.diameter; break;
            case Functional::Circumradius: data = &samples.circumradius; break;
        }
        ReportRow row;
        row.quantity = direct_quantity(kind);
        row.dim = dim;
        row.method = "plain";
        row.estimate = mean_with_ci(*data);
        row.bounds = theorem_bounds(row.quantity, dim);
        row.verdict = judge(*row.estimate, row.bounds, allowance);
        rows.push_back(std::move(row));
    }
}

void append_transform_rows(std::vector<ReportRow>& rows,
                           const FunctionalSamples& samples, int dim,
                           double allowance) {
    for (Functional kind : kKinds) {
        if (kind == Functional::SurfaceArea && dim == 1) continue;
        const std::vector<double>* data = nullptr;
        switch (kind) {
            case Functional::Volume: data = &samples.volume; break;
            case Functional::SurfaceArea: data = &samples.surface; break;
            case Functional::Diameter: data = &samples.diameter; break;
            case Functional::Circumradius: data = &samples.circumradius; break;
        }
        const BoundRow bounds = theorem_bounds(inverse_quantity(kind), dim);
        for (AggMethod agg : {AggMethod::MedianOfMeans, AggMethod::PlainMean}) {
            ReportRow row;
            row.quantity = inverse_quantity(kind);
            row.dim = dim;
            row.method = agg == AggMethod::MedianOfMeans ? "transform_mom"
                                                         : "transform_mean";
            row.estimate = inverse_mean_via_transform(*data, kind, dim, agg);
            row.bounds = bounds;
            row.verdict = judge(*row.estimate, row.bounds, allowance);
            rows.push_back(std::move(row));
        }
    }
}

void append_direct_rows(std::vector<ReportRow>& rows,
                        const ExperimentConfig& config, int dim) {
    for (Functional kind : kKinds) {
        if (kind == Functional::SurfaceArea && dim == 1) continue;
        PassageSummary summary =
            sample_direct_passage(kind, dim, config.steps, config.replicates,
                                  config.seed, config.workers, config.level);
        ReportRow row;
        row.quantity = inverse_quantity(kind);
        row.dim = dim;
        row.method = "direct";
        Estimate est = mean_with_ci(summary.times);
        est.censored_fraction = static_cast<double>(summary.censored) /
                                static_cast<double>(summary.total);
        row.estimate = est;
        row.bounds = theorem_bounds(row.quantity, dim);
        row.verdict = judge(*row.estimate, row.bounds, config.allowance);
        rows.push_back(std::move(row));
    }
}

void dump_first_path(const ExperimentConfig& config) {
    PathConfig pc;
    pc.dim = config.dim;
    pc.steps = config.steps;
    pc.horizon = 1.0;
    pc.key = StreamKey{config.seed, 0, kLaneFunctionals};
    BrownianPath path = sample_path(pc);
    std::ofstream out(config.dump_paths);
    if (!out) throw ConfigError("cannot open dump file " + config.dump_paths);
    out.precision(17);
    for (std::int64_t k = 0; k <= pc.steps; ++k) {
        const double* x = path.at(k);
        for (int c = 0; c < pc.dim; ++c) out << (c ? " " : "") << x[c];
        out << "\n";
    }
}

std::string optimize_table(const ExperimentConfig& config) {
    std::ostringstream out;
    const bool json = config.format == "json";
    if (json)
        out << "[\n";
    else
        out << "n,value,numeric_value,kkt_residual,coord_max_error\n";
    for (int n = 1; n <= config.nmax; ++n) {
        OptProblem problem{n};
        OptSolution exact = closed_form(problem);
        OptSolution numeric = solve_numeric(problem, 1e-10);
        double coord_err = 0.0;
        for (int j = 0; j < n; ++j)
            coord_err = std::max(coord_err,
                                 std::abs(numeric.x[j] - exact.x[j]) / exact.x[j]);
        if (json) {
            out << "  {\"n\":" << n << ",\"value\":" << fmt(exact.value)
                << ",\"numeric_value\":" << fmt(numeric.value)
                << ",\"kkt_residual\":" << fmt(exact.kkt_residual)
                << ",\"coord_max_error\":" << fmt(coord_err) << "}"
                << (n < config.nmax ? ",\n" : "\n");
        } else {
            out << n << ',' << fmt(exact.value) << ',' << fmt(numeric.value) << ','
                << fmt(exact.kkt_residual) << ',' << fmt(coord_err) << '\n';
        }
    }
    if (json) out << "]\n";
    return out.str();
}

std::string stage_table(const ExperimentConfig& config) {
    const int n = config.dim;
    StageRadii radii;
    if (config.radii.empty())
        radii = optimal_radii(n);
    else
        radii.r = config.radii;
    auto results = schedule(config.replicates, config.workers, [&](std::int64_t rep) {
        return run_construction(
            n, radii, config.dt_factor,
            StreamKey{config.seed, static_cast<std::uint64_t>(rep), 0});
    });
    std::ostringstream out;
    const bool json = config.format == "json";
    if (json) {
        out << "[\n";
    } else {
        out << "replicate";
        for (int j = 1; j <= n; ++j) out << ",T_" << j;
        out << ",simplex_volume,hull_volume,total_time\n";
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        const StageResult& r = results[i];
        if (json) {
            out << "  {\"replicate\":" << i << ",\"times\":[";
            for (int j = 0; j < n; ++j) out << (j ? "," : "") << fmt(r.times[j]);
            out << "],\"simplex_volume\":" << fmt(r.simplex_volume)
                << ",\"hull_volume\":" << fmt(r.hull_volume)
                << ",\"total_time\":" << fmt(r.total_time) << "}"
                << (i + 1 < results.size() ? ",\n" : "\n");
        } else {
            out << i;
            for (int j = 0; j < n; ++j) out << ',' << fmt(r.times[j]);
            out << ',' << fmt(r.simplex_volume) << ',' << fmt(r.hull_volume) << ','
                << fmt(r.total_time) << '\n';
        }
    }
    if (json) out << "]\n";
    return out.str();
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
    validate(config);
    ExperimentConfig cfg = config;
    if (cfg.heavy) cfg.steps = std::max<std::int64_t>(cfg.steps, 100000);

    RunResult result;
    if (cfg.command == "bounds") {
        for (const BoundRow& b : render_table(cfg.nmax)) {
            ReportRow row;
            row.quantity = b.quantity;
            row.dim = b.dim;
            row.bounds = b;
            result.rows.push_back(std::move(row));
        }
    } else if (cfg.command == "estimate") {
        if (!cfg.dump_paths.empty()) dump_first_path(cfg);
        FunctionalSamples samples =
            sample_functionals(cfg.dim, cfg.steps, cfg.replicates, cfg.seed,
                               cfg.workers, 1.0, kLaneFunctionals);
        append_estimate_rows(result.rows, samples, cfg.dim, cfg.allowance);
    } else if (cfg.command == "inverse") {
        if (cfg.method == "transform" || cfg.method == "both") {
            FunctionalSamples samples =
                sample_functionals(cfg.dim, cfg.steps, cfg.replicates, cfg.seed,
                                   cfg.workers, 1.0, kLaneFunctionals);
            append_transform_rows(result.rows, samples, cfg.dim, cfg.allowance);
        }
        if (cfg.method == "direct" || cfg.method == "both")
            append_direct_rows(result.rows, cfg, cfg.dim);
    } else if (cfg.command == "report") {
        for (int n = 1; n <= cfg.nmax; ++n) {
            FunctionalSamples samples =
                sample_functionals(n, cfg.steps, cfg.replicates, cfg.seed,
                                   cfg.workers, 1.0, kLaneFunctionals);
            append_estimate_rows(result.rows, samples, n, cfg.allowance);
            if (cfg.method == "transform" || cfg.method == "both")
                append_transform_rows(result.rows, samples, n, cfg.allowance);
            if (cfg.method == "direct" || cfg.method == "both")
                append_direct_rows(result.rows, cfg, n);
        }
    } else if (cfg.command == "optimize") {
        result.text = optimize_table(cfg);
    } else if (cfg.command == "stage") {
        result.text = stage_table(cfg);
    } else {
        throw ConfigError("unknown command: " + cfg.command);
    }

    if (result.text.empty())
        result.text =
            cfg.format == "json" ? rows_to_json(result.rows) : rows_to_csv(result.rows);
    for (const ReportRow& row : result.rows)
        if (row.verdict == Verdict::BelowLower || row.verdict == Verdict::AboveUpper)
            result.exit_code = 1;
    return result;
}

}  // namespace bmhull
