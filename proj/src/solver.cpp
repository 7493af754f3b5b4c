#include "nwfc/solver.hpp"

#include <bit>

#include "nwfc/error.hpp"

namespace nwfc {

void apply_boundary(Wave& wave, const BoundarySpec& boundary)
{
    if (boundary.north_row && boundary.north_row->size() != static_cast<std::size_t>(wave.width())) {
        throw Error("invalid_boundary", "north row length must equal the wave width");
    }
    if (boundary.west_col && boundary.west_col->size() != static_cast<std::size_t>(wave.height())) {
        throw Error("invalid_boundary", "west column length must equal the wave height");
    }
    if (boundary.north_row && boundary.west_col &&
        boundary.north_row->front() != boundary.west_col->front()) {
        throw Error("invalid_boundary", "north row and west column disagree on the corner cell");
    }
    auto check_ids = [&](const std::vector<TileId>& ids) {
        for (auto t : ids) {
            if (t >= wave.tile_count()) {
                throw Error("invalid_boundary", "boundary tile " + std::to_string(t) + " is out of range");
            }
        }
    };

    std::vector<std::size_t> touched;
    auto pin = [&](std::size_t idx, TileId t) {
        if (!wave.pin(idx, t)) {
            throw Contradiction("boundary tile " + std::to_string(t) + " was already ruled out at (" +
                                std::to_string(wave.cell_at(idx).m) + "," +
                                std::to_string(wave.cell_at(idx).n) + ")");
        }
        touched.push_back(idx);
    };
    if (boundary.north_row) {
        check_ids(*boundary.north_row);
        for (int n = 1; n <= wave.width(); ++n) {
            pin(wave.index_of({1, n}), (*boundary.north_row)[n - 1]);
        }
    }
    if (boundary.west_col) {
        check_ids(*boundary.west_col);
        for (int m = 1; m <= wave.height(); ++m) {
            pin(wave.index_of({m, 1}), (*boundary.west_col)[m - 1]);
        }
    }
    if (!touched.empty() && wave.propagate(touched) == Propagation::contradiction) {
        throw Contradiction("boundary constraints leave a cell without candidates");
    }
}

namespace {

class Search {
public:
    Search(Wave& wave, Rng& rng, const SolveOptions& options, SolveStats& stats)
        : wave_(wave), rng_(rng), options_(options), stats_(stats)
    {
    }

    SolveStatus run()
    {
        std::optional<std::size_t> repick;
        for (std::uint64_t step = 0;; ++step) {
            if (stats_.collapses + stats_.backtracks > options_.budget) {
                return SolveStatus::budget_exceeded;
            }
            if (options_.deadline && (step & 15) == 0 &&
                std::chrono::steady_clock::now() > *options_.deadline) {
                timed_out_ = true;
                return SolveStatus::budget_exceeded;
            }

            std::optional<std::size_t> cell;
            if (repick && wave_.count(*repick) > 1) {
                cell = repick;
            } else {
                cell = observe_index(wave_);
            }
            repick.reset();
            if (!cell) {
                return SolveStatus::solved;
            }

            const TileId tile = sample_candidate(wave_, *cell, rng_);
            wave_.decide(*cell, tile);
            ++stats_.collapses;
            ++stats_.propagations;
            if (wave_.propagate(*cell) == Propagation::ok) {
                continue;
            }
            repick = backtrack();
            if (!repick) {
                return SolveStatus::unsat;
            }
        }
    }

    bool timed_out() const noexcept { return timed_out_; }

private:
    // Undo decisions until excluding the failed choice leaves a consistent
    // wave. Returns the cell to re-pick, or nothing when the root is exhausted.
    std::optional<std::size_t> backtrack()
    {
        while (auto d = wave_.undo_last_decision()) {
            ++stats_.backtracks;
            if (wave_.remove(d->cell, d->tile) == 0) {
                continue;
            }
            ++stats_.propagations;
            if (wave_.propagate(d->cell) == Propagation::ok) {
                return d->cell;
            }
        }
        return std::nullopt;
    }

    Wave& wave_;
    Rng& rng_;
    const SolveOptions& options_;
    SolveStats& stats_;
    bool timed_out_ = false;
};

} // namespace

SolveOutcome solve(int width, int height, const Tileset& ts, const BoundarySpec& boundary,
                   const WeightField& wf, std::uint64_t seed, const SolveOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    auto index = options.index ? options.index : make_adjacency_index(ts);
    CellWeights weights = wf.empty() ? CellWeights(ts) : CellWeights(ts, wf, options.origin, width, height);
    Wave wave(width, height, std::move(index), std::move(weights));

    SolveOutcome out;
    auto finish = [&]() -> SolveOutcome {
        out.stats.elapsed_ns = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start)
                .count());
        return out;
    };

    try {
        apply_boundary(wave, boundary);
    } catch (const Contradiction&) {
        out.status = SolveStatus::unsat;
        return finish();
    }
    // Initial arc-consistency pass over the whole grid.
    if (!wave.adjacency().self_supported() && wave.propagate_all() == Propagation::contradiction) {
        out.status = SolveStatus::unsat;
        return finish();
    }

    Rng rng(seed);
    Search search(wave, rng, options, out.stats);
    out.status = search.run();
    out.timed_out = search.timed_out();
    if (out.status == SolveStatus::solved) {
        Tiling t;
        t.width = width;
        t.height = height;
        t.tileset_hash = ts.hash();
        t.seed = seed;
        t.cells.reserve(wave.cell_count());
        for (std::size_t i = 0; i < wave.cell_count(); ++i) {
            const auto dom = wave.domain(i);
            std::size_t w = 0;
            while (dom[w] == 0) ++w;
            t.cells.push_back(static_cast<TileId>(w * 64 + std::countr_zero(dom[w])));
        }
        out.tiling = std::move(t);
    }
    return finish();
}

SolveOutcome solve(int width, int height, const Tileset& ts, const BoundarySpec& boundary,
                   const WeightField& wf, std::uint64_t seed, std::uint64_t budget)
{
    SolveOptions options;
    options.budget = budget;
    return solve(width, height, ts, boundary, wf, seed, options);
}

TilingCheck verify_tiling(const Tiling& t, const Tileset& ts)
{
    if (t.cells.size() != static_cast<std::size_t>(t.width) * t.height) {
        throw Error("invalid_tiling", "cell count does not match the tiling dimensions");
    }
    for (auto id : t.cells) {
        if (id >= ts.size()) {
            throw Error("invalid_tiling", "tile index " + std::to_string(id) + " is out of range");
        }
    }
    for (int m = 1; m <= t.height; ++m) {
        for (int n = 1; n <= t.width; ++n) {
            const Tile& here = ts.tile(t.at({m, n}));
            if (n < t.width && here.e != ts.tile(t.at({m, n + 1})).w) {
                return {false, Violation{{m, n}, {m, n + 1}, Side::east}};
            }
            if (m < t.height && here.s != ts.tile(t.at({m + 1, n})).n) {
                return {false, Violation{{m, n}, {m + 1, n}, Side::south}};
            }
        }
    }
    return {};
}

bool is_periodic(const Tiling& t, int a, int b)
{
    if (a < 0 || a >= t.height || b < 0 || b >= t.width || (a == 0 && b == 0)) {
        throw Error("invalid_argument", "period shift must satisfy 0 <= a < height, 0 <= b < width, (a,b) != (0,0)");
    }
    for (int m = 1; m + a <= t.height; ++m) {
        for (int n = 1; n + b <= t.width; ++n) {
            if (t.at({m, n}) != t.at({m + a, n + b})) {
                return false;
            }
        }
    }
    return true;
}

} // namespace nwfc
