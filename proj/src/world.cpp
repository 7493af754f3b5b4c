#include "nwfc/world.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

#include "nwfc/error.hpp"

namespace nwfc {

namespace fs = std::filesystem;
using nlohmann::json;

ChunkStore::ChunkStore(ChunkStore&& other) noexcept
{
    std::unique_lock lock(other.map_mutex_);
    chunks_ = std::move(other.chunks_);
    brush_epoch_ = other.brush_epoch_.load();
    generated_ = other.generated_.load();
    regenerated_ = other.regenerated_.load();
}

std::shared_ptr<const Chunk> ChunkStore::find(ChunkIndex idx) const
{
    std::shared_lock lock(map_mutex_);
    auto it = chunks_.find(idx);
    return it == chunks_.end() ? nullptr : it->second;
}

std::size_t ChunkStore::size() const
{
    std::shared_lock lock(map_mutex_);
    return chunks_.size();
}

std::vector<ChunkIndex> ChunkStore::indices() const
{
    std::shared_lock lock(map_mutex_);
    std::vector<ChunkIndex> out;
    out.reserve(chunks_.size());
    for (const auto& [k, v] : chunks_) {
        out.push_back(k);
    }
    return out;
}

std::vector<std::shared_ptr<const Chunk>> ChunkStore::chunks() const
{
    std::shared_lock lock(map_mutex_);
    std::vector<std::shared_ptr<const Chunk>> out;
    out.reserve(chunks_.size());
    for (const auto& [k, v] : chunks_) {
        out.push_back(v);
    }
    return out;
}

bool ChunkStore::same_content(const ChunkStore& other) const
{
    const auto mine = chunks();
    const auto theirs = other.chunks();
    if (mine.size() != theirs.size()) {
        return false;
    }
    for (std::size_t i = 0; i < mine.size(); ++i) {
        if (!mine[i]->same_content(*theirs[i])) {
            return false;
        }
    }
    return true;
}

void ChunkStore::insert(std::shared_ptr<const Chunk> chunk)
{
    std::unique_lock lock(map_mutex_);
    auto [it, inserted] = chunks_.emplace(chunk->index(), chunk);
    if (!inserted) {
        ++regenerated_;
        throw Error("internal", "chunk generated twice");
    }
}

namespace {

void check_config(const WorldConfig& cfg, const Tileset& ts)
{
    if (cfg.C < 2) {
        throw Error("invalid_argument", "chunk side C must be at least 2");
    }
    if (!cfg.tileset_hash.empty() && cfg.tileset_hash != ts.hash()) {
        throw Error("hash_mismatch", "world was configured for tileset " + cfg.tileset_hash +
                                         " but got " + ts.hash());
    }
}

} // namespace

std::shared_ptr<const Chunk> ensure_chunk(ChunkStore& store, const WorldConfig& cfg, const Tileset& ts,
                                          const WeightField& wf, int a, int b, Schedule schedule)
{
    if (a < 1 || b < 1) {
        throw Error("invalid_argument", "chunk indices start at (1,1)");
    }
    if (auto existing = store.find({a, b})) {
        return existing;
    }
    check_config(cfg, ts);

    std::lock_guard writer(store.writer_mutex_);
    const SubgridContext ctx{ts, make_adjacency_index(ts), wf, cfg.C, kDefaultBudget, std::nullopt};
    const std::uint64_t epoch = store.brush_epoch();

    for (const auto& full_layer : diagonal_layers(a, b)) {
        std::vector<ChunkIndex> layer;
        for (const auto& c : full_layer) {
            if (!store.contains(c)) {
                layer.push_back(c);
            }
        }
        const int n = static_cast<int>(layer.size());
        std::vector<std::shared_ptr<const Chunk>> made(layer.size());
        std::vector<std::exception_ptr> errors(layer.size());
#pragma omp parallel for schedule(dynamic) if (schedule == Schedule::parallel && n > 1)
        for (int i = 0; i < n; ++i) {
            try {
                const ChunkIndex c = layer[i];
                auto north = c.a > 1 ? store.find({c.a - 1, c.b}) : nullptr;
                auto west = c.b > 1 ? store.find({c.a, c.b - 1}) : nullptr;
                auto chunk = std::make_shared<Chunk>();
                chunk->result = solve_subgrid(ctx, c.a, c.b, north ? &north->result.tiling : nullptr,
                                              west ? &west->result.tiling : nullptr,
                                              chunk_seed(cfg.world_seed, c.a, c.b));
                chunk->brush_epoch = epoch;
                made[i] = std::move(chunk);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (int i = 0; i < n; ++i) {
            if (errors[i]) {
                std::rethrow_exception(errors[i]);
            }
            store.insert(made[i]);
            ++store.generated_;
        }
    }
    return store.find({a, b});
}

std::vector<std::shared_ptr<const Chunk>> visible_region(ChunkStore& store, const WorldConfig& cfg,
                                                         const Tileset& ts, const WeightField& wf,
                                                         ChunkIndex player)
{
    if (player.a < 1 || player.b < 1) {
        throw Error("invalid_argument", "player chunk must lie in the quarter-plane a, b >= 1");
    }
    ensure_chunk(store, cfg, ts, wf, player.a + 1, player.b + 1);
    std::vector<std::shared_ptr<const Chunk>> out;
    for (int a = std::max(1, player.a - 1); a <= player.a + 1; ++a) {
        for (int b = std::max(1, player.b - 1); b <= player.b + 1; ++b) {
            out.push_back(store.find({a, b}));
        }
    }
    return out;
}

json chunk_to_json(const Chunk& chunk)
{
    json doc = to_json(chunk.result.tiling);
    doc["a"] = chunk.result.a;
    doc["b"] = chunk.result.b;
    doc["brush_epoch"] = chunk.brush_epoch;
    return doc;
}

Chunk chunk_from_json(const json& doc)
{
    try {
        Chunk c;
        c.result.tiling = tiling_from_json(doc);
        c.result.a = doc.at("a").get<int>();
        c.result.b = doc.at("b").get<int>();
        c.brush_epoch = doc.at("brush_epoch").get<std::uint64_t>();
        return c;
    } catch (const json::exception& ex) {
        throw Error("parse", std::string("malformed chunk document: ") + ex.what());
    }
}

json manifest_json(const ChunkStore& store, const WorldConfig& cfg)
{
    json chunks = json::array();
    for (const auto& c : store.indices()) {
        chunks.push_back({c.a, c.b});
    }
    return {{"world_seed", cfg.world_seed},
            {"C", cfg.C},
            {"tileset_hash", cfg.tileset_hash},
            {"chunks", std::move(chunks)}};
}

namespace {

fs::path chunk_path(const fs::path& dir, ChunkIndex c)
{
    return dir / ("chunk_" + std::to_string(c.a) + "_" + std::to_string(c.b) + ".json");
}

void write_atomically(const fs::path& path, const std::string& text)
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("io", "cannot write '" + tmp.string() + "'");
        }
        out << text;
        if (!out.flush()) {
            throw Error("io", "short write to '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw Error("io", "cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

json read_json_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("corrupt", "missing world file '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::exception& ex) {
        throw Error("corrupt", "unreadable world file '" + path.string() + "': " + ex.what());
    }
}

const fs::path& require_dir(const WorldConfig& cfg)
{
    if (!cfg.save_dir) {
        throw Error("invalid_argument", "world has no save directory configured");
    }
    return *cfg.save_dir;
}

} // namespace

void save_world(const ChunkStore& store, const WorldConfig& cfg)
{
    const fs::path& dir = require_dir(cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("io", "cannot create '" + dir.string() + "': " + ec.message());
    }
    for (const auto& chunk : store.chunks()) {
        const fs::path path = chunk_path(dir, chunk->index());
        if (!fs::exists(path)) {
            write_atomically(path, chunk_to_json(*chunk).dump() + "\n");
        }
    }
    write_atomically(dir / "manifest.json", manifest_json(store, cfg).dump(2) + "\n");
}

ChunkStore load_world(const WorldConfig& cfg, const Tileset& ts)
{
    const fs::path& dir = require_dir(cfg);
    const json manifest = read_json_file(dir / "manifest.json");

    std::uint64_t seed = 0;
    int C = 0;
    std::string hash;
    std::vector<ChunkIndex> listed;
    try {
        seed = manifest.at("world_seed").get<std::uint64_t>();
        C = manifest.at("C").get<int>();
        hash = manifest.at("tileset_hash").get<std::string>();
        for (const auto& pair : manifest.at("chunks")) {
            listed.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
        }
    } catch (const json::exception& ex) {
        throw Error("corrupt", std::string("malformed world manifest: ") + ex.what());
    }
    if (hash != ts.hash() || (!cfg.tileset_hash.empty() && hash != cfg.tileset_hash)) {
        throw Error("hash_mismatch", "saved world uses tileset " + hash + ", expected " + ts.hash());
    }
    if (seed != cfg.world_seed) {
        throw Error("hash_mismatch", "saved world seed " + std::to_string(seed) + " differs from " +
                                         std::to_string(cfg.world_seed));
    }
    if (C != cfg.C) {
        throw Error("hash_mismatch", "saved world chunk size differs from the configuration");
    }

    ChunkStore store;
    std::set<ChunkIndex> present(listed.begin(), listed.end());
    std::uint64_t max_epoch = 0;
    for (const auto& idx : listed) {
        if (idx.a < 1 || idx.b < 1 || (idx.a > 1 && !present.count({idx.a - 1, idx.b})) ||
            (idx.b > 1 && !present.count({idx.a, idx.b - 1}))) {
            throw Error("corrupt", "manifest chunk list breaks rectangle closure");
        }
        Chunk chunk;
        try {
            chunk = chunk_from_json(read_json_file(chunk_path(dir, idx)));
        } catch (const Error& e) {
            if (e.code() == "parse") {
                throw Error("corrupt", e.what());
            }
            throw;
        }
        const Tiling& t = chunk.result.tiling;
        if (chunk.index() != idx || t.width != C || t.height != C || t.tileset_hash != hash) {
            throw Error("corrupt", "chunk file for (" + std::to_string(idx.a) + "," + std::to_string(idx.b) +
                                       ") does not match the manifest");
        }
        for (auto id : t.cells) {
            if (id >= ts.size()) {
                throw Error("corrupt", "chunk file references an unknown tile");
            }
        }
        max_epoch = std::max(max_epoch, chunk.brush_epoch);
        store.insert(std::make_shared<const Chunk>(std::move(chunk)));
    }
    store.brush_epoch_ = max_epoch;
    return store;
}

} // namespace nwfc
