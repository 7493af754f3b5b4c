#include "nwfc/bench.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include <omp.h>

#include "nwfc/error.hpp"
#include "nwfc/nested.hpp"
#include "nwfc/solver.hpp"

namespace nwfc {

const char* algorithm_name(Algorithm a) { return a == Algorithm::wfc ? "wfc" : "nwfc"; }

Algorithm parse_algorithm(const std::string& name)
{
    if (name == "wfc") return Algorithm::wfc;
    if (name == "nwfc") return Algorithm::nwfc;
    throw Error("invalid_config", "unknown algorithm '" + name + "'");
}

void BenchConfig::validate() const
{
    if (repeats < 1) {
        throw Error("invalid_config", "repeats must be at least 1");
    }
    if (edge_sizes.empty() || grid_sizes.empty() || algorithms.empty()) {
        throw Error("invalid_config", "edge sizes, grid sizes and algorithms must be non-empty");
    }
    for (int k : edge_sizes) {
        if (k < 2) {
            throw Error("invalid_config", "edge set sizes must be at least 2");
        }
    }
    for (const auto& g : grid_sizes) {
        try {
            plan(g.M, g.N, C);
        } catch (const Error& e) {
            throw Error("invalid_config", e.what());
        }
    }
}

BenchConfig bench_config_from_json(const nlohmann::json& doc)
{
    BenchConfig cfg;
    try {
        if (doc.contains("edge_sizes")) cfg.edge_sizes = doc.at("edge_sizes").get<std::vector<int>>();
        if (doc.contains("C")) cfg.C = doc.at("C").get<int>();
        if (doc.contains("grid_sizes")) {
            cfg.grid_sizes.clear();
            for (const auto& g : doc.at("grid_sizes")) {
                cfg.grid_sizes.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
            }
        }
        if (doc.contains("repeats")) cfg.repeats = doc.at("repeats").get<int>();
        if (doc.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& a : doc.at("algorithms")) {
                cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
            }
        }
        if (doc.contains("timeout_s")) {
            cfg.timeout = std::chrono::duration_cast<std::chrono::nanoseconds>(
                std::chrono::duration<double>(doc.at("timeout_s").get<double>()));
        }
        if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("budget")) cfg.budget = doc.at("budget").get<std::uint64_t>();
        if (doc.contains("parallel")) cfg.parallel = doc.at("parallel").get<bool>();
    } catch (const nlohmann::json::exception& ex) {
        throw Error("invalid_config", std::string("malformed bench config: ") + ex.what());
    }
    cfg.validate();
    return cfg;
}

std::uint64_t bench_seed(std::uint64_t seed, int k, GridSize grid, int repeat)
{
    std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(k));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(grid.M) << 32 | static_cast<std::uint32_t>(grid.N)));
    return splitmix64(h ^ static_cast<std::uint64_t>(repeat));
}

namespace {

BenchRow run_one(const BenchConfig& cfg, Algorithm alg, int k, GridSize grid, int repeat)
{
    const std::uint64_t seed = bench_seed(cfg.seed, k, grid, repeat);
    const Tileset ts = canonical_sub_complete(k, 0, seed);
    BenchRow row{alg, k, grid.M, grid.N, repeat, 0, 0, 0, false};
    const WeightField neutral;

    const auto start = std::chrono::steady_clock::now();
    const auto deadline = start + cfg.timeout;
    if (alg == Algorithm::wfc) {
        SolveOptions options;
        options.budget = cfg.budget;
        options.deadline = deadline;
        const SolveOutcome out = solve(grid.N, grid.M, ts, BoundarySpec{}, neutral, seed, options);
        row.elapsed_ns = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count());
        row.backtracks = out.stats.backtracks;
        row.solved = out.solved();
    } else {
        GenerateOptions options;
        options.budget = cfg.budget;
        options.deadline = deadline;
        try {
            const GenerateResult out = generate(plan(grid.M, grid.N, cfg.C), ts, neutral, seed, options);
            row.elapsed_ns = static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start)
                    .count());
            row.backtracks = out.stats.interior_backtracks;
            row.exterior_retries = out.stats.exterior_retries;
            row.solved = true;
        } catch (const Error&) {
            row.elapsed_ns = static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start)
                    .count());
            row.solved = false;
        }
    }
    if (row.solved && row.elapsed_ns == 0) {
        row.elapsed_ns = 1;
    }
    return row;
}

} // namespace

void run_experiment(const BenchConfig& cfg, const std::function<void(const BenchRow&)>& sink)
{
    cfg.validate();
    if (!cfg.parallel) {
        for (Algorithm alg : cfg.algorithms)
            for (int k : cfg.edge_sizes)
                for (const auto& grid : cfg.grid_sizes)
                    for (int r = 0; r < cfg.repeats; ++r)
                        sink(run_one(cfg, alg, k, grid, r));
        return;
    }

    // One shard per (k, grid); rows are emitted afterwards in serial order.
    const int shards = static_cast<int>(cfg.edge_sizes.size() * cfg.grid_sizes.size());
    std::vector<std::vector<BenchRow>> per_shard(shards);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < shards; ++s) {
        const int k = cfg.edge_sizes[s / cfg.grid_sizes.size()];
        const GridSize grid = cfg.grid_sizes[s % cfg.grid_sizes.size()];
        for (Algorithm alg : cfg.algorithms)
            for (int r = 0; r < cfg.repeats; ++r)
                per_shard[s].push_back(run_one(cfg, alg, k, grid, r));
    }
    for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai)
        for (int s = 0; s < shards; ++s)
            for (int r = 0; r < cfg.repeats; ++r)
                sink(per_shard[s][ai * cfg.repeats + r]);
}

std::vector<BenchRow> run_experiment(const BenchConfig& cfg)
{
    std::vector<BenchRow> rows;
    run_experiment(cfg, [&rows](const BenchRow& r) { rows.push_back(r); });
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<BenchRow>& rows)
{
    if (rows.empty()) {
        throw Error("invalid_argument", "cannot summarise an empty set of rows");
    }
    using Key = std::tuple<int, int, int, int>;
    std::map<Key, std::size_t> slot;
    std::vector<SummaryRow> out;
    std::vector<std::vector<double>> times;
    for (const auto& r : rows) {
        const Key key{static_cast<int>(r.algorithm), r.k, r.M, r.N};
        auto [it, fresh] = slot.emplace(key, out.size());
        if (fresh) {
            out.push_back({r.algorithm, r.k, r.M, r.N, 0, std::nullopt, 0.0, 0.0});
            times.emplace_back();
        }
        ++out[it->second].runs;
        if (r.solved) {
            times[it->second].push_back(static_cast<double>(r.elapsed_ns) * 1e-9);
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& t = times[i];
        out[i].timeout_frac = 1.0 - static_cast<double>(t.size()) / static_cast<double>(out[i].runs);
        if (t.empty()) {
            continue;
        }
        double mean = 0.0;
        for (double v : t) mean += v;
        mean /= static_cast<double>(t.size());
        double var = 0.0;
        for (double v : t) var += (v - mean) * (v - mean);
        out[i].mean_s = mean;
        out[i].var_s2 = var / static_cast<double>(t.size());
    }
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) {
        throw Error("invalid_argument", "x and y must have the same length");
    }
    if (x.size() < 3) {
        throw Error("insufficient_points", "a scaling fit needs at least 3 points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> windowed_slopes(const std::vector<double>& x, const std::vector<double>& y,
                                    std::size_t window)
{
    std::vector<double> out;
    for (std::size_t i = 0; i + window <= x.size(); ++i) {
        out.push_back(loglog_slope({x.begin() + i, x.begin() + i + window},
                                   {y.begin() + i, y.begin() + i + window}));
    }
    return out;
}

std::vector<ScalingFit> fit_scaling(const std::vector<SummaryRow>& summary, Algorithm algorithm)
{
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_k;
    std::vector<int> order;
    for (const auto& s : summary) {
        if (s.algorithm != algorithm) {
            continue;
        }
        if (!by_k.count(s.k)) {
            order.push_back(s.k);
        }
        auto& [x, y] = by_k[s.k];
        if (s.mean_s && *s.mean_s > 0) {
            x.push_back(static_cast<double>(s.M) * s.N);
            y.push_back(*s.mean_s);
        }
    }
    std::vector<ScalingFit> out;
    for (int k : order) {
        const auto& [x, y] = by_k[k];
        out.push_back({k, loglog_slope(x, y), x.size()});
    }
    return out;
}

const char* rows_csv_header() { return "algorithm,k,M,N,repeat,elapsed_ns,backtracks,outcome"; }

void write_row_csv(std::ostream& out, const BenchRow& r)
{
    out << algorithm_name(r.algorithm) << ',' << r.k << ',' << r.M << ',' << r.N << ',' << r.repeat << ','
        << r.elapsed_ns << ',' << r.backtracks << ',' << (r.solved ? "solved" : "timeout") << '\n';
}

void write_rows_csv(std::ostream& out, const std::vector<BenchRow>& rows)
{
    out << rows_csv_header() << '\n';
    for (const auto& r : rows) {
        write_row_csv(out, r);
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary)
{
    out << "algorithm,k,M,N,mean_s,var_s2,timeout_frac\n";
    const auto old_precision = out.precision(9);
    for (const auto& s : summary) {
        out << algorithm_name(s.algorithm) << ',' << s.k << ',' << s.M << ',' << s.N << ',';
        if (s.mean_s) {
            out << *s.mean_s;
        }
        out << ',' << s.var_s2 << ',' << s.timeout_frac << '\n';
    }
    out.precision(old_precision);
}

} // namespace nwfc
