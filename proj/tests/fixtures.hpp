#pragma once

#include <array>
#include <string>
#include <vector>

#include "nwfc/rng.hpp"
#include "nwfc/solver.hpp"
#include "nwfc/tileset.hpp"

namespace fixtures {

inline nwfc::EdgeSet edges(std::vector<std::string> names) { return {nwfc::Axis::north_south, std::move(names)}; }

inline nwfc::EdgeSet numbered(int k)
{
    nwfc::EdgeSet set;
    for (int i = 0; i < k; ++i) set.names.push_back("e" + std::to_string(i));
    return set;
}

using Quad = std::array<int, 4>;

// Tiles over k numbered edges on both axes, in (n, s, w, e) order.
inline nwfc::Tileset quads(int k, const std::vector<Quad>& qs, std::string name = "fixture")
{
    std::vector<nwfc::Tile> tiles;
    for (const auto& q : qs) {
        tiles.push_back({static_cast<nwfc::EdgeId>(q[0]), static_cast<nwfc::EdgeId>(q[1]),
                         static_cast<nwfc::EdgeId>(q[2]), static_cast<nwfc::EdgeId>(q[3]), 1.0, {}});
    }
    return nwfc::Tileset(std::move(name), numbered(k), numbered(k), std::move(tiles));
}

inline nwfc::Tileset all_quadruples(int k)
{
    std::vector<Quad> qs;
    for (int n = 0; n < k; ++n)
        for (int s = 0; s < k; ++s)
            for (int w = 0; w < k; ++w)
                for (int e = 0; e < k; ++e) qs.push_back({n, s, w, e});
    return quads(k, qs, "complete");
}

// Four tiles over {r,g} north-south and {b,y} west-east.
inline nwfc::Tileset four_tile_minimum()
{
    return nwfc::parse_tileset_text(R"({
      "name": "four",
      "edges_ns": ["r", "g"],
      "edges_we": ["b", "y"],
      "tiles": [
        {"n": "r", "s": "g", "w": "b", "e": "y"},
        {"n": "g", "s": "g", "w": "b", "e": "b"},
        {"n": "r", "s": "r", "w": "y", "e": "y"},
        {"n": "g", "s": "r", "w": "y", "e": "b"}
      ]})");
}

// Random north row and west column that agree with themselves and share the
// corner. Each step picks uniformly among tiles matching the previous edge.
inline nwfc::BoundarySpec random_boundary(const nwfc::Tileset& ts, int width, int height, nwfc::Rng& rng)
{
    auto pick = [&](auto matches) {
        std::vector<nwfc::TileId> ok;
        for (nwfc::TileId t = 0; t < ts.size(); ++t) {
            if (matches(ts.tile(t))) ok.push_back(t);
        }
        return ok.empty() ? nwfc::TileId{0} : ok[rng.below(ok.size())];
    };
    std::vector<nwfc::TileId> row{static_cast<nwfc::TileId>(rng.below(ts.size()))};
    while (row.size() < static_cast<std::size_t>(width)) {
        const auto e = ts.tile(row.back()).e;
        row.push_back(pick([e](const nwfc::Tile& t) { return t.w == e; }));
    }
    std::vector<nwfc::TileId> col{row.front()};
    while (col.size() < static_cast<std::size_t>(height)) {
        const auto s = ts.tile(col.back()).s;
        col.push_back(pick([s](const nwfc::Tile& t) { return t.n == s; }));
    }
    return {row, col};
}

} // namespace fixtures
