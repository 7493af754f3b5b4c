#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "nwfc/brush.hpp"
#include "nwfc/solver.hpp"
#include "nwfc/tileset.hpp"

namespace nwfc {

// Per-sub-grid seed: two SplitMix64 rounds over the world seed and the
// (a, b) index. Bit-exact across implementations.
constexpr std::uint64_t chunk_seed(std::uint64_t world_seed, std::uint64_t a, std::uint64_t b) noexcept
{
    constexpr std::uint64_t k1 = 0x9E3779B97F4A7C15ULL;
    constexpr std::uint64_t k2 = 0xBF58476D1CE4E5B9ULL;
    return splitmix64(splitmix64(world_seed ^ (a * k1)) ^ (b * k2));
}

struct ChunkIndex {
    int a = 1;
    int b = 1;
    bool operator==(const ChunkIndex&) const = default;
    auto operator<=>(const ChunkIndex&) const = default;
};

// M x N cells split into A x B sub-grids of C x C that share one row/column
// with their neighbours: M = A(C-1)+1, N = B(C-1)+1.
struct SubgridPlan {
    int M = 0;
    int N = 0;
    int C = 0;
    int A = 0;
    int B = 0;

    // Global address of sub-grid (a, b)'s local cell (1, 1).
    Cell origin(int a, int b) const noexcept { return {(a - 1) * (C - 1) + 1, (b - 1) * (C - 1) + 1}; }
};

// Throws Error("plan") when M-1 or N-1 is not a multiple of C-1.
SubgridPlan plan(int M, int N, int C);

// Anti-diagonal layers a+b = 2, 3, ...; ascending a inside a layer.
std::vector<std::vector<ChunkIndex>> diagonal_layers(int A, int B);
std::vector<ChunkIndex> diagonal_order(int A, int B);

struct SubgridResult {
    int a = 1;
    int b = 1;
    Tiling tiling; // C x C
    SolveStats stats;
};

// Everything needed to solve one sub-grid; shared read-only across workers.
struct SubgridContext {
    const Tileset& tileset;
    std::shared_ptr<const AdjacencyIndex> index;
    const WeightField& weights;
    int C;
    std::uint64_t budget = kDefaultBudget;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

// First column from the west neighbour's last column, first row from the
// north neighbour's last row. Either neighbour may be absent.
BoundarySpec boundary_from(const Tiling* north, const Tiling* west);

// Runs I-WFC on sub-grid (a, b). Throws SubgridUnsat or BudgetExceeded.
SubgridResult solve_subgrid(const SubgridContext& ctx, int a, int b, const Tiling* north,
                            const Tiling* west, std::uint64_t seed);

struct GenerateStats {
    int subgrids = 0;
    std::uint64_t interior_backtracks = 0;
    // Regenerations of committed sub-grids. Nothing ever increments it: a
    // failed sub-grid aborts the run instead.
    std::uint64_t exterior_retries = 0;
    std::uint64_t elapsed_ns = 0;
    std::vector<std::uint64_t> subgrid_backtracks; // in diagonal order
    bool tileset_sub_complete = true;
};

struct GenerateResult {
    Tiling tiling;
    GenerateStats stats;
    std::vector<SubgridResult> subgrids; // row-major by (a, b)
};

enum class Schedule {
    serial,   // reference: one sub-grid at a time in diagonal order
    parallel, // OpenMP across each anti-diagonal layer
};

struct GenerateOptions {
    std::uint64_t budget = kDefaultBudget;
    Schedule schedule = Schedule::serial;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

GenerateResult generate(const SubgridPlan& plan, const Tileset& ts, const WeightField& wf,
                        std::uint64_t seed, const GenerateOptions& options = {});

// Assembles sub-grid results (any order) into the M x N tiling, checking
// that every overlapping row/column agrees. Throws Error("overlap_mismatch").
Tiling stitch(const std::vector<SubgridResult>& results, const SubgridPlan& plan);

nlohmann::json to_json(const GenerateStats& s);

} // namespace nwfc
