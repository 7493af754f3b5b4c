#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "nwfc/nested.hpp"

namespace nwfc {

struct WorldConfig {
    std::uint64_t world_seed = 0;
    int C = 5;
    std::string tileset_hash; // checked against the tileset on every call
    std::optional<std::filesystem::path> save_dir;
};

// An immutable generated chunk. `brush_epoch` is the store's epoch at the
// time it was generated.
struct Chunk {
    SubgridResult result;
    std::uint64_t brush_epoch = 0;

    ChunkIndex index() const noexcept { return {result.a, result.b}; }
    bool same_content(const Chunk& other) const noexcept
    {
        return result.a == other.result.a && result.b == other.result.b &&
               result.tiling == other.result.tiling && brush_epoch == other.brush_epoch;
    }
};

// Quarter-plane chunk map (a, b >= 1). Chunks are inserted once and never
// replaced; a chunk exists only when every chunk up and to the left of it does.
class ChunkStore {
public:
    ChunkStore() = default;
    ChunkStore(ChunkStore&& other) noexcept;
    ChunkStore& operator=(ChunkStore&&) = delete;
    ChunkStore(const ChunkStore&) = delete;

    std::shared_ptr<const Chunk> find(ChunkIndex idx) const;
    bool contains(ChunkIndex idx) const { return find(idx) != nullptr; }
    std::size_t size() const;
    std::vector<ChunkIndex> indices() const; // sorted by (a, b)
    std::vector<std::shared_ptr<const Chunk>> chunks() const;

    std::uint64_t brush_epoch() const noexcept { return brush_epoch_.load(); }
    std::uint64_t bump_brush_epoch() noexcept { return ++brush_epoch_; }

    std::uint64_t chunks_generated() const noexcept { return generated_.load(); }
    // Instrumentation for the never-regenerate guarantee; stays 0.
    std::uint64_t chunks_regenerated() const noexcept { return regenerated_.load(); }

    bool same_content(const ChunkStore& other) const;

private:
    friend std::shared_ptr<const Chunk> ensure_chunk(ChunkStore&, const WorldConfig&, const Tileset&,
                                                     const WeightField&, int, int, Schedule);
    friend ChunkStore load_world(const WorldConfig&, const Tileset&);

    void insert(std::shared_ptr<const Chunk> chunk);

    mutable std::shared_mutex map_mutex_;
    std::mutex writer_mutex_;
    std::map<ChunkIndex, std::shared_ptr<const Chunk>> chunks_;
    std::atomic<std::uint64_t> brush_epoch_{0};
    std::atomic<std::uint64_t> generated_{0};
    std::atomic<std::uint64_t> regenerated_{0};
};

// Generates, in diagonal order, every missing chunk of [1..a] x [1..b] and
// returns chunk (a, b). Existing chunks are returned untouched.
std::shared_ptr<const Chunk> ensure_chunk(ChunkStore& store, const WorldConfig& cfg, const Tileset& ts,
                                          const WeightField& wf, int a, int b,
                                          Schedule schedule = Schedule::serial);

// The up-to-nine chunks around the player, row-major, clamped to a, b >= 1.
std::vector<std::shared_ptr<const Chunk>> visible_region(ChunkStore& store, const WorldConfig& cfg,
                                                         const Tileset& ts, const WeightField& wf,
                                                         ChunkIndex player);

nlohmann::json chunk_to_json(const Chunk& chunk);
Chunk chunk_from_json(const nlohmann::json& doc);
nlohmann::json manifest_json(const ChunkStore& store, const WorldConfig& cfg);

// One file per chunk plus manifest.json in cfg.save_dir. Chunk files that
// already exist are not rewritten.
void save_world(const ChunkStore& store, const WorldConfig& cfg);
// Throws Error("corrupt") on unreadable files and Error("hash_mismatch") when
// the saved world used another tileset or seed.
ChunkStore load_world(const WorldConfig& cfg, const Tileset& ts);

} // namespace nwfc
