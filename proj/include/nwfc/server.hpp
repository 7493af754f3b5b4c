#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "nwfc/brush.hpp"
#include "nwfc/tileset.hpp"
#include "nwfc/world.hpp"

namespace nwfc {

// State behind the HTTP API: one world, one tileset, one brush field.
class Session {
public:
    // Loads an existing world from cfg.save_dir when a manifest is present.
    Session(Tileset ts, WorldConfig cfg);

    const Tileset& tileset() const noexcept { return tileset_; }
    const WorldConfig& config() const noexcept { return config_; }
    ChunkStore& store() noexcept { return store_; }

    // Snapshot of the brush field; painting swaps in a new snapshot.
    std::shared_ptr<const WeightField> brush() const;
    // Returns the new brush epoch.
    std::uint64_t paint(const std::string& tag, CellRect rect, double multiplier);

    std::shared_ptr<const Chunk> chunk(int a, int b);
    void flush();

private:
    Tileset tileset_;
    WorldConfig config_;
    ChunkStore store_;
    mutable std::mutex brush_mutex_;
    std::shared_ptr<const WeightField> brush_;
};

// HTTP status for a library error code: 400 validation, 409 tileset/world
// mismatch, 500 anything else.
int http_status_for(const std::string& code);

class Service {
public:
    Service(Tileset ts, WorldConfig cfg, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Returns the bound port (an ephemeral one when `port` is 0). Throws
    // Error("io") when binding fails.
    int bind(const std::string& host, int port);
    // Blocks until stop() is called.
    void listen();
    // Stops the listener and flushes the world to disk.
    void stop();

    Session& session() noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace nwfc
