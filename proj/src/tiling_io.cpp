#include <array>
#include <cstdlib>
#include <map>

#include "nwfc/error.hpp"
#include "nwfc/rng.hpp"
#include "nwfc/solver.hpp"

namespace nwfc {

using nlohmann::json;

json to_json(const Tiling& t)
{
    return {{"width", t.width},
            {"height", t.height},
            {"tileset_hash", t.tileset_hash},
            {"seed", t.seed},
            {"cells", t.cells}};
}

Tiling tiling_from_json(const json& doc)
{
    try {
        Tiling t;
        t.width = doc.at("width").get<int>();
        t.height = doc.at("height").get<int>();
        t.tileset_hash = doc.at("tileset_hash").get<std::string>();
        t.seed = doc.at("seed").get<std::uint64_t>();
        t.cells = doc.at("cells").get<std::vector<TileId>>();
        if (t.width < 1 || t.height < 1 ||
            t.cells.size() != static_cast<std::size_t>(t.width) * t.height) {
            throw Error("parse", "tiling cell count does not match its dimensions");
        }
        return t;
    } catch (const json::exception& ex) {
        throw Error("parse", std::string("malformed tiling document: ") + ex.what());
    }
}

json to_json(const SolveStats& s)
{
    return {{"collapses", s.collapses},
            {"propagations", s.propagations},
            {"backtracks", s.backtracks},
            {"elapsed_ns", s.elapsed_ns}};
}

namespace {

using Rgb = std::array<unsigned char, 3>;

Rgb palette_color(std::size_t i)
{
    // grass, city, path, stream first so the Carcassonne set reads naturally
    static constexpr Rgb fixed[] = {{86, 160, 60},  {176, 82, 52},  {222, 200, 140}, {60, 120, 200},
                                    {220, 60, 60},  {60, 180, 80},  {60, 90, 210},   {230, 200, 40},
                                    {150, 80, 190}, {40, 190, 190}, {240, 140, 40},  {120, 120, 120}};
    if (i < std::size(fixed)) {
        return fixed[i];
    }
    const std::uint64_t h = splitmix64(i);
    return {static_cast<unsigned char>(h), static_cast<unsigned char>(h >> 8),
            static_cast<unsigned char>(h >> 16)};
}

} // namespace

std::string render_ppm(const Tiling& t, const Tileset& ts, int scale)
{
    if (scale < 2) {
        throw Error("invalid_argument", "tile scale must be at least 2 pixels");
    }
    // One colour per distinct edge name across both axes.
    std::map<std::string, std::size_t> order;
    for (const auto& n : ts.ens().names) {
        order.emplace(n, order.size());
    }
    for (const auto& n : ts.ewe().names) {
        order.emplace(n, order.size());
    }
    std::vector<Rgb> ns_color, we_color;
    for (const auto& n : ts.ens().names) {
        ns_color.push_back(palette_color(order.at(n)));
    }
    for (const auto& n : ts.ewe().names) {
        we_color.push_back(palette_color(order.at(n)));
    }

    const int px_w = t.width * scale;
    const int px_h = t.height * scale;
    std::string out = "P6\n" + std::to_string(px_w) + " " + std::to_string(px_h) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + static_cast<std::size_t>(px_w) * px_h * 3);

    for (int y = 0; y < px_h; ++y) {
        for (int x = 0; x < px_w; ++x) {
            const Tile& tile = ts.tile(t.at({y / scale + 1, x / scale + 1}));
            // Offsets from the tile centre, doubled to stay integral.
            const int dx = 2 * (x % scale) - (scale - 1);
            const int dy = 2 * (y % scale) - (scale - 1);
            Rgb c;
            if (std::abs(dy) >= std::abs(dx)) {
                c = dy < 0 ? ns_color[tile.n] : ns_color[tile.s];
            } else {
                c = dx < 0 ? we_color[tile.w] : we_color[tile.e];
            }
            const std::size_t p = header + (static_cast<std::size_t>(y) * px_w + x) * 3;
            out[p] = static_cast<char>(c[0]);
            out[p + 1] = static_cast<char>(c[1]);
            out[p + 2] = static_cast<char>(c[2]);
        }
    }
    return out;
}

} // namespace nwfc
