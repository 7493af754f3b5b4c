#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nwfc/brush.hpp"
#include "nwfc/tileset.hpp"
#include "nwfc/wave.hpp"

namespace nwfc {

inline constexpr std::uint64_t kDefaultBudget = 100'000;

// Pre-collapsed first row and/or first column of an interior solve.
struct BoundarySpec {
    std::optional<std::vector<TileId>> north_row; // length = width
    std::optional<std::vector<TileId>> west_col;  // length = height

    bool empty() const noexcept { return !north_row && !west_col; }
};

// Pins the boundary cells and propagates to a fixed point. Throws
// Error("invalid_boundary") on bad lengths, tile ids or a corner mismatch, and
// Contradiction when propagation empties a domain.
void apply_boundary(Wave& wave, const BoundarySpec& boundary);

struct Tiling {
    int width = 0;
    int height = 0;
    std::vector<TileId> cells; // row-major
    std::string tileset_hash;
    std::uint64_t seed = 0;

    TileId at(Cell c) const { return cells[static_cast<std::size_t>(c.m - 1) * width + (c.n - 1)]; }
    bool operator==(const Tiling&) const = default;
};

struct SolveStats {
    std::uint64_t collapses = 0;
    std::uint64_t propagations = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t elapsed_ns = 0;
    bool operator==(const SolveStats&) const = default;
};

enum class SolveStatus { solved, unsat, budget_exceeded };

struct SolveOutcome {
    SolveStatus status = SolveStatus::unsat;
    std::optional<Tiling> tiling; // set iff solved
    SolveStats stats;
    bool timed_out = false; // budget_exceeded because the deadline passed

    bool solved() const noexcept { return status == SolveStatus::solved; }
};

struct SolveOptions {
    std::uint64_t budget = kDefaultBudget; // collapses + backtracks
    Cell origin{1, 1};                     // global address of local (1,1), for brushes
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::shared_ptr<const AdjacencyIndex> index; // built from the tileset when null
};

SolveOutcome solve(int width, int height, const Tileset& ts, const BoundarySpec& boundary,
                   const WeightField& wf, std::uint64_t seed, const SolveOptions& options);
SolveOutcome solve(int width, int height, const Tileset& ts, const BoundarySpec& boundary,
                   const WeightField& wf, std::uint64_t seed, std::uint64_t budget = kDefaultBudget);

struct Violation {
    Cell first;
    Cell second; // east or south neighbour of `first`
    Side side;   // side of `first` that disagrees
};

struct TilingCheck {
    bool ok = true;
    std::optional<Violation> violation;
    explicit operator bool() const noexcept { return ok; }
};

// Checks every shared edge; reports the first mismatch in row-major order.
TilingCheck verify_tiling(const Tiling& t, const Tileset& ts);

// True iff t(m, n) == t(m + a, n + b) wherever both cells lie in the window.
bool is_periodic(const Tiling& t, int a, int b);

nlohmann::json to_json(const Tiling& t);
Tiling tiling_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SolveStats& s);

// Binary PPM (P6): each tile is a square of `scale` pixels split into four
// triangles coloured by edge.
std::string render_ppm(const Tiling& t, const Tileset& ts, int scale = 16);

} // namespace nwfc
