#include "nwfc/nested.hpp"

#include <exception>

#include <omp.h>

#include "nwfc/error.hpp"

namespace nwfc {

SubgridPlan plan(int M, int N, int C)
{
    if (M < 2 || N < 2 || C < 2) {
        throw Error("plan", "grid and sub-grid sides must be at least 2");
    }
    if ((M - 1) % (C - 1) != 0 || (N - 1) % (C - 1) != 0) {
        throw Error("plan", "grid " + std::to_string(M) + "x" + std::to_string(N) +
                                " cannot be split into " + std::to_string(C) + "x" + std::to_string(C) +
                                " sub-grids: M-1 and N-1 must be divisible by C-1 = " +
                                std::to_string(C - 1));
    }
    return {M, N, C, (M - 1) / (C - 1), (N - 1) / (C - 1)};
}

std::vector<std::vector<ChunkIndex>> diagonal_layers(int A, int B)
{
    std::vector<std::vector<ChunkIndex>> layers;
    for (int k = 2; k <= A + B; ++k) {
        std::vector<ChunkIndex> layer;
        for (int a = std::max(1, k - B); a <= std::min(A, k - 1); ++a) {
            layer.push_back({a, k - a});
        }
        layers.push_back(std::move(layer));
    }
    return layers;
}

std::vector<ChunkIndex> diagonal_order(int A, int B)
{
    std::vector<ChunkIndex> out;
    for (auto& layer : diagonal_layers(A, B)) {
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

BoundarySpec boundary_from(const Tiling* north, const Tiling* west)
{
    BoundarySpec b;
    if (north) {
        const int C = north->width;
        b.north_row.emplace(north->cells.end() - C, north->cells.end());
    }
    if (west) {
        std::vector<TileId> col;
        col.reserve(west->height);
        for (int m = 1; m <= west->height; ++m) {
            col.push_back(west->at({m, west->width}));
        }
        b.west_col = std::move(col);
    }
    if (b.north_row && b.west_col && b.north_row->front() != b.west_col->front()) {
        throw Error("overlap_mismatch", "north and west neighbours disagree on the shared corner");
    }
    return b;
}

SubgridResult solve_subgrid(const SubgridContext& ctx, int a, int b, const Tiling* north,
                            const Tiling* west, std::uint64_t seed)
{
    SolveOptions options;
    options.budget = ctx.budget;
    options.origin = {(a - 1) * (ctx.C - 1) + 1, (b - 1) * (ctx.C - 1) + 1};
    options.deadline = ctx.deadline;
    options.index = ctx.index;
    SolveOutcome out = solve(ctx.C, ctx.C, ctx.tileset, boundary_from(north, west), ctx.weights, seed, options);
    switch (out.status) {
    case SolveStatus::solved: break;
    case SolveStatus::unsat: throw SubgridUnsat(a, b);
    case SolveStatus::budget_exceeded: throw BudgetExceeded(a, b);
    }
    return {a, b, std::move(*out.tiling), out.stats};
}

namespace {

std::uint64_t nanos_since(std::chrono::steady_clock::time_point start)
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count());
}

} // namespace

GenerateResult generate(const SubgridPlan& p, const Tileset& ts, const WeightField& wf, std::uint64_t seed,
                        const GenerateOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    const SubgridContext ctx{ts, make_adjacency_index(ts), wf, p.C, options.budget, options.deadline};

    GenerateResult result;
    result.stats.tileset_sub_complete = check_coverage(ts).sub_complete;
    std::vector<std::optional<SubgridResult>> grid(static_cast<std::size_t>(p.A) * p.B);
    auto slot = [&](int a, int b) -> std::optional<SubgridResult>& {
        return grid[static_cast<std::size_t>(a - 1) * p.B + (b - 1)];
    };
    auto run_one = [&](ChunkIndex c) {
        const Tiling* north = c.a > 1 ? &slot(c.a - 1, c.b)->tiling : nullptr;
        const Tiling* west = c.b > 1 ? &slot(c.a, c.b - 1)->tiling : nullptr;
        slot(c.a, c.b) = solve_subgrid(ctx, c.a, c.b, north, west, chunk_seed(seed, c.a, c.b));
    };

    const auto layers = diagonal_layers(p.A, p.B);
    if (options.schedule == Schedule::serial) {
        for (const auto& layer : layers) {
            for (const auto& c : layer) {
                run_one(c);
            }
        }
    } else {
        for (const auto& layer : layers) {
            const int n = static_cast<int>(layer.size());
            std::vector<std::exception_ptr> errors(layer.size());
#pragma omp parallel for schedule(dynamic) if (n > 1)
            for (int i = 0; i < n; ++i) {
                try {
                    run_one(layer[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
            // Same failure the serial schedule would have reported first.
            for (auto& e : errors) {
                if (e) {
                    std::rethrow_exception(e);
                }
            }
        }
    }

    for (const auto& c : diagonal_order(p.A, p.B)) {
        result.stats.subgrid_backtracks.push_back(slot(c.a, c.b)->stats.backtracks);
        result.stats.interior_backtracks += slot(c.a, c.b)->stats.backtracks;
    }
    result.subgrids.reserve(grid.size());
    for (auto& g : grid) {
        result.subgrids.push_back(std::move(*g));
    }
    result.stats.subgrids = static_cast<int>(result.subgrids.size());
    result.tiling = stitch(result.subgrids, p);
    result.tiling.tileset_hash = ts.hash();
    result.tiling.seed = seed;
    result.stats.elapsed_ns = nanos_since(start);
    return result;
}

Tiling stitch(const std::vector<SubgridResult>& results, const SubgridPlan& p)
{
    if (results.size() != static_cast<std::size_t>(p.A) * p.B) {
        throw Error("invalid_argument", "stitch needs exactly A*B sub-grid results");
    }
    constexpr TileId unset = ~TileId{0};
    Tiling out;
    out.width = p.N;
    out.height = p.M;
    out.cells.assign(static_cast<std::size_t>(p.M) * p.N, unset);
    std::vector<char> seen(static_cast<std::size_t>(p.A) * p.B, 0);

    for (const auto& r : results) {
        if (r.a < 1 || r.a > p.A || r.b < 1 || r.b > p.B || r.tiling.width != p.C || r.tiling.height != p.C) {
            throw Error("invalid_argument", "sub-grid result does not fit the plan");
        }
        auto& flag = seen[static_cast<std::size_t>(r.a - 1) * p.B + (r.b - 1)];
        if (flag) {
            throw Error("invalid_argument", "sub-grid result given twice");
        }
        flag = 1;
        if (out.tileset_hash.empty()) {
            out.tileset_hash = r.tiling.tileset_hash;
        }
        const Cell o = p.origin(r.a, r.b);
        for (int m = 1; m <= p.C; ++m) {
            for (int n = 1; n <= p.C; ++n) {
                TileId& dst = out.cells[static_cast<std::size_t>(o.m + m - 2) * p.N + (o.n + n - 2)];
                const TileId src = r.tiling.at({m, n});
                if (dst != unset && dst != src) {
                    throw Error("overlap_mismatch", "sub-grid (" + std::to_string(r.a) + "," +
                                                        std::to_string(r.b) + ") disagrees with a neighbour at (" +
                                                        std::to_string(o.m + m - 1) + "," +
                                                        std::to_string(o.n + n - 1) + ")");
                }
                dst = src;
            }
        }
    }
    return out;
}

nlohmann::json to_json(const GenerateStats& s)
{
    return {{"subgrids", s.subgrids},
            {"interior_backtracks", s.interior_backtracks},
            {"exterior_retries", s.exterior_retries},
            {"elapsed_ns", s.elapsed_ns}};
}

} // namespace nwfc
