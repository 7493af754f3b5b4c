#pragma once

// Brute-force references used to cross-check the library. They read tiles
// directly and share no code with the solver, wave or coverage scans.

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "nwfc/solver.hpp"
#include "nwfc/tileset.hpp"

namespace oracle {

using nwfc::EdgeId;
using nwfc::TileId;
using nwfc::Tileset;

inline bool pairs_cover(const Tileset& ts, std::size_t ka, std::size_t kb,
                        EdgeId nwfc::Tile::*first, EdgeId nwfc::Tile::*second)
{
    std::set<std::pair<EdgeId, EdgeId>> seen;
    for (const auto& t : ts.tiles()) {
        seen.insert({t.*first, t.*second});
    }
    return seen.size() == ka * kb;
}

inline bool sub_complete(const Tileset& ts)
{
    const auto kn = ts.ens().size();
    const auto kw = ts.ewe().size();
    using T = nwfc::Tile;
    return pairs_cover(ts, kn, kn, &T::n, &T::s) && pairs_cover(ts, kw, kw, &T::w, &T::e) &&
           pairs_cover(ts, kn, kw, &T::n, &T::w) && pairs_cover(ts, kn, kw, &T::s, &T::e);
}

inline bool complete(const Tileset& ts)
{
    std::set<std::vector<EdgeId>> seen;
    for (const auto& t : ts.tiles()) {
        seen.insert({t.n, t.s, t.w, t.e});
    }
    const auto kn = ts.ens().size();
    const auto kw = ts.ewe().size();
    return seen.size() == kn * kn * kw * kw;
}

// Edge equations checked straight from the tiles, row-major cells.
inline bool edges_agree(const std::vector<TileId>& cells, int width, int height, const Tileset& ts)
{
    for (int m = 0; m < height; ++m) {
        for (int n = 0; n < width; ++n) {
            const auto& t = ts.tile(cells[m * width + n]);
            if (n + 1 < width && t.e != ts.tile(cells[m * width + n + 1]).w) return false;
            if (m + 1 < height && t.s != ts.tile(cells[(m + 1) * width + n]).n) return false;
        }
    }
    return true;
}

// Odometer over every assignment; `fixed` pins cells when set.
inline std::size_t count_solutions(int width, int height, const Tileset& ts,
                                   const std::vector<std::optional<TileId>>& fixed = {})
{
    const std::size_t cells = static_cast<std::size_t>(width) * height;
    std::vector<TileId> a(cells, 0);
    for (std::size_t i = 0; i < cells && i < fixed.size(); ++i) {
        if (fixed[i]) a[i] = *fixed[i];
    }
    std::size_t found = 0;
    while (true) {
        if (edges_agree(a, width, height, ts)) ++found;
        std::size_t i = 0;
        for (; i < cells; ++i) {
            if (i < fixed.size() && fixed[i]) continue;
            if (++a[i] < ts.size()) break;
            a[i] = 0;
        }
        if (i == cells) break;
    }
    return found;
}

// Naive arc consistency to a fixpoint over explicit candidate sets.
inline std::vector<std::set<TileId>> arc_consistent(std::vector<std::set<TileId>> dom, int width, int height,
                                                    const Tileset& ts)
{
    auto supported = [&](TileId t, int m, int n) {
        const auto& tile = ts.tile(t);
        auto any = [&](int mm, int nn, auto pred) {
            if (mm < 0 || nn < 0 || mm >= height || nn >= width) return true;
            for (TileId u : dom[mm * width + nn]) {
                if (pred(ts.tile(u))) return true;
            }
            return false;
        };
        return any(m - 1, n, [&](const nwfc::Tile& u) { return u.s == tile.n; }) &&
               any(m + 1, n, [&](const nwfc::Tile& u) { return u.n == tile.s; }) &&
               any(m, n - 1, [&](const nwfc::Tile& u) { return u.e == tile.w; }) &&
               any(m, n + 1, [&](const nwfc::Tile& u) { return u.w == tile.e; });
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int m = 0; m < height; ++m) {
            for (int n = 0; n < width; ++n) {
                auto& d = dom[m * width + n];
                for (auto it = d.begin(); it != d.end();) {
                    if (!supported(*it, m, n)) {
                        it = d.erase(it);
                        changed = true;
                    } else {
                        ++it;
                    }
                }
            }
        }
    }
    return dom;
}

} // namespace oracle
