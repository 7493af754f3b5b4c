#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nwfc {

enum class Algorithm { wfc, nwfc };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct GridSize {
    int M = 0;
    int N = 0;
    bool operator==(const GridSize&) const = default;
};

struct BenchConfig {
    std::vector<int> edge_sizes{2, 3, 4, 5, 6, 7};
    int C = 5;
    // 33x73 stands in for 33x75, which no whole number of 5x5 sub-grids covers.
    std::vector<GridSize> grid_sizes{{5, 9}, {9, 17}, {17, 33}, {25, 49}, {33, 73}, {41, 81}, {49, 97}};
    int repeats = 100;
    std::vector<Algorithm> algorithms{Algorithm::wfc, Algorithm::nwfc};
    std::chrono::nanoseconds timeout = std::chrono::seconds(60);
    std::uint64_t seed = 1;
    std::uint64_t budget = 100'000;
    bool parallel = false; // shard (k, grid) cells across OpenMP threads

    // Throws Error("invalid_config") when a grid does not fit the plan or
    // repeats < 1.
    void validate() const;
};

BenchConfig bench_config_from_json(const nlohmann::json& doc);

struct BenchRow {
    Algorithm algorithm = Algorithm::wfc;
    int k = 0;
    int M = 0;
    int N = 0;
    int repeat = 0;
    std::uint64_t elapsed_ns = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t exterior_retries = 0;
    bool solved = false; // false: timeout or budget exhaustion
};

// Tileset and solver seeds are derived from cfg.seed, k, the grid and the
// repeat, so both algorithms see the same tileset at every point.
std::uint64_t bench_seed(std::uint64_t seed, int k, GridSize grid, int repeat);

// Rows are delivered through `sink` in a deterministic order when serial.
void run_experiment(const BenchConfig& cfg, const std::function<void(const BenchRow&)>& sink);
std::vector<BenchRow> run_experiment(const BenchConfig& cfg);

struct SummaryRow {
    Algorithm algorithm = Algorithm::wfc;
    int k = 0;
    int M = 0;
    int N = 0;
    std::size_t runs = 0;
    std::optional<double> mean_s; // unset when no run solved
    double var_s2 = 0.0;          // population variance over solved runs
    double timeout_frac = 0.0;
};

// Grouped by (algorithm, k, M, N) in first-seen order. Throws on empty input.
std::vector<SummaryRow> summarize(const std::vector<BenchRow>& rows);

struct ScalingFit {
    int k = 0;
    double slope = 0.0; // d log(mean time) / d log(M*N)
    std::size_t points = 0;
};

// Least-squares slope of log y against log x. Throws
// Error("insufficient_points") with fewer than 3 points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
// Slopes over consecutive windows of `window` points.
std::vector<double> windowed_slopes(const std::vector<double>& x, const std::vector<double>& y,
                                    std::size_t window = 3);

std::vector<ScalingFit> fit_scaling(const std::vector<SummaryRow>& summary, Algorithm algorithm);

void write_rows_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_row_csv(std::ostream& out, const BenchRow& row);
const char* rows_csv_header();
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);

} // namespace nwfc
