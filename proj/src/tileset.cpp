#include "nwfc/tileset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nwfc/error.hpp"
#include "nwfc/rng.hpp"

namespace nwfc {

using nlohmann::json;

EdgeId EdgeSet::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return static_cast<EdgeId>(i);
        }
    }
    throw Error("unknown_edge", "edge '" + std::string(name) + "' is not declared on the " +
                                    (axis == Axis::north_south ? "north-south" : "west-east") +
                                    " axis");
}

bool Tile::has_tag(std::string_view tag) const
{
    return std::binary_search(tags.begin(), tags.end(), tag);
}

namespace {

void check_edge_set(const EdgeSet& set, const char* label)
{
    if (set.names.empty()) {
        throw Error("invalid_tileset", std::string(label) + " edge set is empty");
    }
    if (set.names.size() > 0xFFFF) {
        throw Error("invalid_tileset", std::string(label) + " edge set is too large");
    }
    std::set<std::string> seen;
    for (const auto& n : set.names) {
        if (!seen.insert(n).second) {
            throw Error("invalid_tileset", std::string(label) + " edge '" + n + "' is declared twice");
        }
    }
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

Tileset::Tileset(std::string name, EdgeSet ens, EdgeSet ewe, std::vector<Tile> tiles)
    : name_(std::move(name)), ens_(std::move(ens)), ewe_(std::move(ewe)), tiles_(std::move(tiles))
{
    ens_.axis = Axis::north_south;
    ewe_.axis = Axis::west_east;
    check_edge_set(ens_, "north-south");
    check_edge_set(ewe_, "west-east");
    if (tiles_.empty()) {
        throw Error("invalid_tileset", "tileset has no tiles");
    }
    for (std::size_t i = 0; i < tiles_.size(); ++i) {
        auto& t = tiles_[i];
        if (t.n >= ens_.size() || t.s >= ens_.size() || t.w >= ewe_.size() || t.e >= ewe_.size()) {
            throw Error("unknown_edge", "tile " + std::to_string(i) + " references an undeclared edge");
        }
        if (!(t.weight > 0.0) || !std::isfinite(t.weight)) {
            throw Error("invalid_weight", "tile " + std::to_string(i) + " has a non-positive weight");
        }
        std::sort(t.tags.begin(), t.tags.end());
        t.tags.erase(std::unique(t.tags.begin(), t.tags.end()), t.tags.end());
        for (std::size_t j = 0; j < i; ++j) {
            if (tiles_[j].same_record(t)) {
                throw Error("duplicate_tile", "tile " + std::to_string(i) + " duplicates tile " +
                                                  std::to_string(j) + " (same edges and tags)");
            }
        }
    }
    hash_ = fnv1a_hex(to_json(*this).dump());
}

std::string Tileset::describe(TileId id) const
{
    const Tile& t = tile(id);
    return "(" + ens_.names[t.n] + "," + ens_.names[t.s] + "," + ewe_.names[t.w] + "," +
           ewe_.names[t.e] + ")";
}

Tileset parse_tileset(const json& doc)
{
    try {
        if (!doc.is_object()) {
            throw Error("parse", "tileset document must be a JSON object");
        }
        EdgeSet ens{Axis::north_south, doc.at("edges_ns").get<std::vector<std::string>>()};
        EdgeSet ewe{Axis::west_east, doc.at("edges_we").get<std::vector<std::string>>()};
        const auto& jt = doc.at("tiles");
        if (!jt.is_array()) {
            throw Error("parse", "\"tiles\" must be an array");
        }
        std::vector<Tile> tiles;
        tiles.reserve(jt.size());
        for (const auto& item : jt) {
            Tile t;
            t.n = ens.index_of(item.at("n").get<std::string>());
            t.s = ens.index_of(item.at("s").get<std::string>());
            t.w = ewe.index_of(item.at("w").get<std::string>());
            t.e = ewe.index_of(item.at("e").get<std::string>());
            if (item.contains("weight")) {
                t.weight = item.at("weight").get<double>();
            }
            if (item.contains("tags")) {
                t.tags = item.at("tags").get<std::vector<std::string>>();
            }
            tiles.push_back(std::move(t));
        }
        return Tileset(doc.value("name", std::string("unnamed")), std::move(ens), std::move(ewe),
                       std::move(tiles));
    } catch (const json::exception& ex) {
        throw Error("parse", std::string("malformed tileset document: ") + ex.what());
    }
}

Tileset parse_tileset_text(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& ex) {
        throw Error("parse", std::string("tileset is not valid JSON: ") + ex.what());
    }
    return parse_tileset(doc);
}

Tileset load_tileset(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("io", "cannot open tileset file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tileset_text(ss.str());
}

json to_json(const Tileset& ts)
{
    json tiles = json::array();
    for (const auto& t : ts.tiles()) {
        json jt = {{"n", ts.ens().names[t.n]},
                   {"s", ts.ens().names[t.s]},
                   {"w", ts.ewe().names[t.w]},
                   {"e", ts.ewe().names[t.e]},
                   {"weight", t.weight}};
        if (!t.tags.empty()) {
            jt["tags"] = t.tags;
        }
        tiles.push_back(std::move(jt));
    }
    return {{"name", ts.name()},
            {"edges_ns", ts.ens().names},
            {"edges_we", ts.ewe().names},
            {"tiles", std::move(tiles)}};
}

CoverageReport check_coverage(const Tileset& ts)
{
    const std::size_t kns = ts.ens().size();
    const std::size_t kwe = ts.ewe().size();
    std::vector<char> ns(kns * kns), we(kwe * kwe), nw(kns * kwe), se(kns * kwe);
    std::vector<char> quad(kns * kns * kwe * kwe);
    for (const auto& t : ts.tiles()) {
        ns[t.n * kns + t.s] = 1;
        we[t.w * kwe + t.e] = 1;
        nw[t.n * kwe + t.w] = 1;
        se[t.s * kwe + t.e] = 1;
        quad[((t.n * kns + t.s) * kwe + t.w) * kwe + t.e] = 1;
    }

    CoverageReport r;
    auto collect = [](const std::vector<char>& seen, std::size_t rows, std::size_t cols,
                      std::vector<EdgePair>& out) {
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                if (!seen[i * cols + j]) {
                    out.emplace_back(static_cast<EdgeId>(i), static_cast<EdgeId>(j));
                }
            }
        }
    };
    collect(ns, kns, kns, r.missing_ns_pairs);
    collect(we, kwe, kwe, r.missing_we_pairs);
    collect(nw, kns, kwe, r.missing_nw_pairs);
    collect(se, kns, kwe, r.missing_se_pairs);
    for (std::size_t n = 0; n < kns; ++n) {
        for (std::size_t s = 0; s < kns; ++s) {
            for (std::size_t w = 0; w < kwe; ++w) {
                for (std::size_t e = 0; e < kwe; ++e) {
                    if (!quad[((n * kns + s) * kwe + w) * kwe + e]) {
                        r.missing_full_quadruples.push_back(
                            {static_cast<EdgeId>(n), static_cast<EdgeId>(s), static_cast<EdgeId>(w),
                             static_cast<EdgeId>(e)});
                    }
                }
            }
        }
    }
    r.sub_complete = r.missing_ns_pairs.empty() && r.missing_we_pairs.empty() &&
                     r.missing_nw_pairs.empty() && r.missing_se_pairs.empty();
    r.complete = r.missing_full_quadruples.empty();
    return r;
}

json to_json(const CoverageReport& report, const Tileset& ts)
{
    const auto& ns = ts.ens().names;
    const auto& we = ts.ewe().names;
    auto pairs = [](const std::vector<EdgePair>& in, const std::vector<std::string>& first,
                    const std::vector<std::string>& second) {
        json out = json::array();
        for (const auto& [a, b] : in) {
            out.push_back({first[a], second[b]});
        }
        return out;
    };
    json quads = json::array();
    for (const auto& q : report.missing_full_quadruples) {
        quads.push_back({ns[q.n], ns[q.s], we[q.w], we[q.e]});
    }
    return {{"tileset", ts.name()},
            {"tiles", ts.size()},
            {"complete", report.complete},
            {"sub_complete", report.sub_complete},
            {"missing_ns_pairs", pairs(report.missing_ns_pairs, ns, ns)},
            {"missing_we_pairs", pairs(report.missing_we_pairs, we, we)},
            {"missing_nw_pairs", pairs(report.missing_nw_pairs, ns, we)},
            {"missing_se_pairs", pairs(report.missing_se_pairs, ns, we)},
            {"missing_full_quadruples", std::move(quads)}};
}

Tileset canonical_sub_complete(int k, int extra, std::uint64_t seed)
{
    if (k < 2) {
        throw Error("invalid_argument", "canonical sub-complete tilesets need k >= 2 edges per axis");
    }
    if (k > 255) {
        throw Error("invalid_argument", "k is too large");
    }
    const long long quads = static_cast<long long>(k) * k * k * k;
    const long long base = static_cast<long long>(k) * k;
    if (extra < 0 || extra > quads - base) {
        throw Error("invalid_argument", "cannot add " + std::to_string(extra) +
                                            " distinct tiles: only " + std::to_string(quads - base) +
                                            " quadruples remain");
    }

    EdgeSet edges;
    for (int i = 0; i < k; ++i) {
        edges.names.push_back("e" + std::to_string(i));
    }

    std::vector<Tile> tiles;
    tiles.reserve(static_cast<std::size_t>(base + extra));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const auto ei = static_cast<EdgeId>(i);
            const auto ej = static_cast<EdgeId>(j);
            tiles.push_back(Tile{ei, ej, ej, ei, 1.0, {}});
        }
    }

    if (extra > 0) {
        // Partial Fisher-Yates over the quadruples not of the (i,j,j,i) form.
        std::vector<Quadruple> pool;
        pool.reserve(static_cast<std::size_t>(quads - base));
        for (int n = 0; n < k; ++n)
            for (int s = 0; s < k; ++s)
                for (int w = 0; w < k; ++w)
                    for (int e = 0; e < k; ++e)
                        if (!(n == e && s == w))
                            pool.push_back({static_cast<EdgeId>(n), static_cast<EdgeId>(s),
                                            static_cast<EdgeId>(w), static_cast<EdgeId>(e)});
        Rng rng(seed);
        for (int i = 0; i < extra; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
            tiles.push_back(Tile{pool[i].n, pool[i].s, pool[i].w, pool[i].e, 1.0, {}});
        }
    }

    EdgeSet ewe = edges;
    ewe.axis = Axis::west_east;
    std::string name = "canonical-k" + std::to_string(k);
    if (extra > 0) {
        name += "+" + std::to_string(extra);
    }
    return Tileset(std::move(name), std::move(edges), std::move(ewe), std::move(tiles));
}

Tileset expand_rotations(const Tileset& ts)
{
    const auto& ns = ts.ens().names;
    const auto& we = ts.ewe().names;
    if (std::set<std::string>(ns.begin(), ns.end()) != std::set<std::string>(we.begin(), we.end())) {
        throw Error("invalid_argument",
                    "rotation needs identical edge names on both axes");
    }
    // Map edge ids between axes through their names.
    std::vector<EdgeId> ns_to_we(ns.size()), we_to_ns(we.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        ns_to_we[i] = ts.ewe().index_of(ns[i]);
    }
    for (std::size_t i = 0; i < we.size(); ++i) {
        we_to_ns[i] = ts.ens().index_of(we[i]);
    }

    std::vector<Tile> out;
    auto add = [&out](const Tile& t) {
        for (const auto& existing : out) {
            if (existing.same_record(t)) {
                return;
            }
        }
        out.push_back(t);
    };
    for (const auto& t : ts.tiles()) {
        Tile r = t;
        for (int turn = 0; turn < 4; ++turn) {
            add(r);
            // (n,s,w,e) -> (e,w,n,s)
            Tile next = r;
            next.n = we_to_ns[r.e];
            next.s = we_to_ns[r.w];
            next.w = ns_to_we[r.n];
            next.e = ns_to_we[r.s];
            r = next;
        }
    }
    return Tileset(ts.name(), ts.ens(), ts.ewe(), std::move(out));
}

} // namespace nwfc
