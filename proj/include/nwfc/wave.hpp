#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nwfc/brush.hpp"
#include "nwfc/rng.hpp"
#include "nwfc/tileset.hpp"

namespace nwfc {

enum class Side : std::uint8_t { north = 0, south = 1, west = 2, east = 3 };

constexpr Side opposite(Side s) noexcept
{
    switch (s) {
    case Side::north: return Side::south;
    case Side::south: return Side::north;
    case Side::west: return Side::east;
    case Side::east: return Side::west;
    }
    return s;
}

// For every side and edge id, the bitmask of tiles exposing that edge on that
// side. Arc revision is then an OR of masks followed by one AND per word.
class AdjacencyIndex {
public:
    explicit AdjacencyIndex(const Tileset& ts);

    std::size_t tile_count() const noexcept { return tiles_; }
    std::size_t words() const noexcept { return words_; }
    std::size_t edge_count(Side side) const noexcept { return edges_[static_cast<int>(side)]; }
    std::span<const std::uint64_t> mask(Side side, EdgeId edge) const noexcept
    {
        return {masks_[static_cast<int>(side)].data() + edge * words_, words_};
    }
    EdgeId edge_of(TileId t, Side side) const noexcept { return tile_edges_[t * 4 + static_cast<int>(side)]; }
    // True when every edge a tile shows is shown back by some tile on the
    // opposite side, so an unconstrained wave is already arc-consistent.
    bool self_supported() const noexcept { return self_supported_; }

private:
    std::size_t tiles_ = 0;
    std::size_t words_ = 0;
    std::size_t edges_[4] = {};
    std::vector<std::uint64_t> masks_[4];
    std::vector<EdgeId> tile_edges_;
    bool self_supported_ = true;
};

std::shared_ptr<const AdjacencyIndex> make_adjacency_index(const Tileset& ts);

// Effective sampling weights over a window of cells. Without brush layers
// that touch the tileset's tags only the per-tile base weights are stored.
class CellWeights {
public:
    CellWeights() = default;
    explicit CellWeights(const Tileset& ts);
    // `origin` is the global address of the window's local cell (1,1).
    CellWeights(const Tileset& ts, const WeightField& wf, Cell origin, int width, int height);

    double weight(std::size_t cell, TileId t) const noexcept
    {
        if (!table_.empty()) return table_[cell * tiles_ + t];
        return base_.empty() ? uniform_ : base_[t];
    }
    // True when every effective weight is the same value, so weighted entropy
    // orders cells exactly like their candidate counts.
    bool flat() const noexcept { return flat_; }

private:
    std::size_t tiles_ = 0;
    double uniform_ = 1.0;
    std::vector<double> base_; // empty when every tile has weight uniform_
    std::vector<double> table_;
    bool flat_ = true;
};

enum class Propagation { ok, contradiction };

// Rectangular grid of candidate sets with an undo trail. Cells are stored
// row-major; the public interface takes 1-based (m, n) addresses.
class Wave {
public:
    Wave(int width, int height, const Tileset& ts);
    Wave(int width, int height, std::shared_ptr<const AdjacencyIndex> index, CellWeights weights);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t cell_count() const noexcept { return counts_.size(); }
    std::size_t tile_count() const noexcept { return index_->tile_count(); }
    const AdjacencyIndex& adjacency() const noexcept { return *index_; }
    const CellWeights& weights() const noexcept { return weights_; }

    std::size_t index_of(Cell c) const;
    Cell cell_at(std::size_t idx) const noexcept
    {
        return {static_cast<int>(idx / width_) + 1, static_cast<int>(idx % width_) + 1};
    }

    std::size_t count(std::size_t idx) const noexcept { return counts_[idx]; }
    std::size_t count(Cell c) const { return counts_[index_of(c)]; }
    bool contains(std::size_t idx, TileId t) const noexcept
    {
        return (domain(idx)[t >> 6] >> (t & 63)) & 1U;
    }
    std::vector<TileId> candidates(Cell c) const;
    std::vector<TileId> candidates(std::size_t idx) const;
    std::span<const std::uint64_t> domain(std::size_t idx) const noexcept
    {
        return {domains_.data() + idx * words_, words_};
    }
    bool fully_collapsed() const noexcept;

    // Weighted Shannon entropy of a cell's candidates, cached until the
    // domain changes.
    double entropy_at(std::size_t idx) const;

    // Narrows a cell to `t` without recording a decision (boundary input).
    // Returns false if `t` was not a candidate.
    bool pin(std::size_t idx, TileId t);
    // Narrows a cell to `t` and records a decision point.
    void decide(std::size_t idx, TileId t);
    // Drops one candidate; returns the new count.
    std::size_t remove(std::size_t idx, TileId t);
    // Testing hook: replace a domain outright (logged on the trail).
    void overwrite(std::size_t idx, std::span<const std::uint64_t> words);

    Propagation propagate(std::size_t from);
    Propagation propagate(std::span<const std::size_t> from);
    Propagation propagate_all();

    struct Decision {
        std::size_t cell;
        TileId tile;
        std::size_t trail_mark;
    };
    const std::vector<Decision>& decisions() const noexcept { return decisions_; }
    // Pops the most recent decision and restores every domain to its state
    // just before that decision was made.
    std::optional<Decision> undo_last_decision();
    std::size_t trail_size() const noexcept { return trail_cells_.size(); }

    std::uint64_t revisions() const noexcept { return revisions_; }

private:
    void save(std::size_t idx);
    void set_domain(std::size_t idx, std::span<const std::uint64_t> words);
    void undo_to(std::size_t mark);

    int width_ = 0;
    int height_ = 0;
    std::size_t words_ = 0;
    std::shared_ptr<const AdjacencyIndex> index_;
    CellWeights weights_;
    std::vector<std::uint64_t> domains_;
    std::vector<std::uint32_t> counts_;
    mutable std::vector<double> entropy_;
    mutable std::vector<std::uint8_t> entropy_valid_;
    std::vector<std::uint32_t> trail_cells_;
    std::vector<std::uint64_t> trail_words_;
    std::vector<Decision> decisions_;
    std::vector<std::size_t> queue_;
    std::vector<std::uint8_t> queued_;
    std::vector<std::uint64_t> scratch_;
    std::vector<std::uint64_t> allowed_;
    std::uint64_t revisions_ = 0;
};

// Spec-level operations on a wave.

Wave new_wave(int width, int height, const Tileset& ts);

// Uncollapsed cell of minimum weighted entropy, ties to the smallest (m, n).
std::optional<Cell> observe(const Wave& wave);
std::optional<std::size_t> observe_index(const Wave& wave);

// Picks a candidate with probability proportional to its effective weight,
// narrows the cell to it and records a decision.
TileId collapse(Wave& wave, Cell cell, Rng& rng);
TileId sample_candidate(const Wave& wave, std::size_t idx, Rng& rng);

Propagation propagate(Wave& wave, Cell from);

} // namespace nwfc
