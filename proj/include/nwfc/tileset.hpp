#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace nwfc {

using EdgeId = std::uint16_t;
using TileId = std::uint32_t;

enum class Axis { north_south, west_east };

struct EdgeSet {
    Axis axis = Axis::north_south;
    std::vector<std::string> names;

    std::size_t size() const noexcept { return names.size(); }
    // Throws Error("unknown_edge") when the name is not part of this set.
    EdgeId index_of(std::string_view name) const;
};

// A tile is its four edge ids: north/south draw from the north-south edge set,
// west/east from the west-east edge set.
struct Tile {
    EdgeId n = 0;
    EdgeId s = 0;
    EdgeId w = 0;
    EdgeId e = 0;
    double weight = 1.0;
    std::vector<std::string> tags; // kept sorted and unique

    bool has_tag(std::string_view tag) const;
    bool same_record(const Tile& other) const
    {
        return n == other.n && s == other.s && w == other.w && e == other.e && tags == other.tags;
    }
};

class Tileset {
public:
    Tileset() = default;
    // Validates edge references, weights, duplicate records and emptiness.
    Tileset(std::string name, EdgeSet ens, EdgeSet ewe, std::vector<Tile> tiles);

    const std::string& name() const noexcept { return name_; }
    const EdgeSet& ens() const noexcept { return ens_; }
    const EdgeSet& ewe() const noexcept { return ewe_; }
    const std::vector<Tile>& tiles() const noexcept { return tiles_; }
    const Tile& tile(TileId id) const { return tiles_.at(id); }
    std::size_t size() const noexcept { return tiles_.size(); }

    // Hex digest of the canonical document; stable for equal tilesets.
    const std::string& hash() const noexcept { return hash_; }

    // Human-readable form "(grass,city,grass,city)".
    std::string describe(TileId id) const;

private:
    std::string name_;
    EdgeSet ens_;
    EdgeSet ewe_;
    std::vector<Tile> tiles_;
    std::string hash_;
};

using EdgePair = std::pair<EdgeId, EdgeId>;

struct Quadruple {
    EdgeId n, s, w, e;
    bool operator==(const Quadruple&) const = default;
};

struct CoverageReport {
    bool complete = false;
    bool sub_complete = false;
    std::vector<EdgePair> missing_ns_pairs; // (n, s)
    std::vector<EdgePair> missing_we_pairs; // (w, e)
    std::vector<EdgePair> missing_nw_pairs; // (n, w)
    std::vector<EdgePair> missing_se_pairs; // (s, e)
    std::vector<Quadruple> missing_full_quadruples;
};

Tileset parse_tileset(const nlohmann::json& doc);
Tileset parse_tileset_text(std::string_view text);
Tileset load_tileset(const std::string& path);
nlohmann::json to_json(const Tileset& ts);

CoverageReport check_coverage(const Tileset& ts);
nlohmann::json to_json(const CoverageReport& report, const Tileset& ts);

// The k*k tiles (i, j, j, i) followed by `extra` distinct random quadruples.
Tileset canonical_sub_complete(int k, int extra, std::uint64_t seed);

// Adds the four rotations (n,s,w,e) -> (e,w,n,s) -> (s,n,e,w) -> (w,e,s,n) of
// every tile. Edges are identified across axes by name.
Tileset expand_rotations(const Tileset& ts);

// The 28-tile Carcassonne set over {grass, city, path, stream}.
const Tileset& carcassonne();
const char* carcassonne_document();

} // namespace nwfc
