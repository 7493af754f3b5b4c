#include "nwfc/wave.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "nwfc/error.hpp"

namespace nwfc {

namespace {

constexpr std::size_t words_for(std::size_t tiles) { return (tiles + 63) / 64; }

constexpr Side kSides[4] = {Side::north, Side::south, Side::west, Side::east};

} // namespace

AdjacencyIndex::AdjacencyIndex(const Tileset& ts)
    : tiles_(ts.size()), words_(words_for(ts.size()))
{
    edges_[static_cast<int>(Side::north)] = ts.ens().size();
    edges_[static_cast<int>(Side::south)] = ts.ens().size();
    edges_[static_cast<int>(Side::west)] = ts.ewe().size();
    edges_[static_cast<int>(Side::east)] = ts.ewe().size();
    for (int s = 0; s < 4; ++s) {
        masks_[s].assign(edges_[s] * words_, 0);
    }
    tile_edges_.resize(tiles_ * 4);
    for (TileId t = 0; t < tiles_; ++t) {
        const Tile& tile = ts.tile(t);
        const EdgeId edges[4] = {tile.n, tile.s, tile.w, tile.e};
        for (int s = 0; s < 4; ++s) {
            tile_edges_[t * 4 + s] = edges[s];
            masks_[s][edges[s] * words_ + (t >> 6)] |= std::uint64_t{1} << (t & 63);
        }
    }
    for (TileId t = 0; t < tiles_ && self_supported_; ++t) {
        for (Side side : kSides) {
            const auto m = mask(opposite(side), edge_of(t, side));
            self_supported_ = self_supported_ && std::any_of(m.begin(), m.end(), [](auto w) { return w != 0; });
        }
    }
}

std::shared_ptr<const AdjacencyIndex> make_adjacency_index(const Tileset& ts)
{
    return std::make_shared<const AdjacencyIndex>(ts);
}

CellWeights::CellWeights(const Tileset& ts) : tiles_(ts.size())
{
    uniform_ = ts.tiles().front().weight;
    for (const auto& t : ts.tiles()) {
        flat_ = flat_ && t.weight == uniform_;
    }
    if (!flat_) {
        base_.reserve(tiles_);
        for (const auto& t : ts.tiles()) {
            base_.push_back(t.weight);
        }
    }
}

CellWeights::CellWeights(const Tileset& ts, const WeightField& wf, Cell origin, int width, int height)
    : CellWeights(ts)
{
    bool touches = false;
    for (const auto& layer : wf.layers()) {
        for (const auto& t : ts.tiles()) {
            touches = touches || t.has_tag(layer.tag);
        }
    }
    if (!touches) {
        return;
    }
    const std::size_t cells = static_cast<std::size_t>(width) * height;
    table_.resize(cells * tiles_);
    for (std::size_t c = 0; c < cells; ++c) {
        const Cell global{origin.m + static_cast<int>(c / width), origin.n + static_cast<int>(c % width)};
        for (TileId t = 0; t < tiles_; ++t) {
            table_[c * tiles_ + t] = effective_weight(wf, global, ts.tile(t));
        }
    }
    flat_ = true;
    for (double w : table_) {
        flat_ = flat_ && w == table_.front();
    }
}

Wave::Wave(int width, int height, const Tileset& ts)
    : Wave(width, height, make_adjacency_index(ts), CellWeights(ts))
{
}

Wave::Wave(int width, int height, std::shared_ptr<const AdjacencyIndex> index, CellWeights weights)
    : width_(width), height_(height), index_(std::move(index)), weights_(std::move(weights))
{
    if (width < 1 || height < 1) {
        throw Error("invalid_argument", "wave dimensions must be at least 1x1");
    }
    words_ = index_->words();
    const std::size_t cells = static_cast<std::size_t>(width) * height;
    const std::size_t d = index_->tile_count();

    std::vector<std::uint64_t> full(words_, ~std::uint64_t{0});
    if (d % 64 != 0) {
        full.back() = (std::uint64_t{1} << (d % 64)) - 1;
    }
    domains_.resize(cells * words_);
    for (std::size_t c = 0; c < cells; ++c) {
        std::copy(full.begin(), full.end(), domains_.begin() + c * words_);
    }
    counts_.assign(cells, static_cast<std::uint32_t>(d));
    entropy_.assign(cells, 0.0);
    entropy_valid_.assign(cells, 0);
    queued_.assign(cells, 0);
    scratch_.resize(words_);
    allowed_.resize(words_);
    queue_.reserve(cells);
    decisions_.reserve(cells);
    trail_cells_.reserve(cells * 4);
    trail_words_.reserve(cells * 4 * words_);
}

std::size_t Wave::index_of(Cell c) const
{
    if (c.m < 1 || c.m > height_ || c.n < 1 || c.n > width_) {
        throw Error("invalid_argument", "cell (" + std::to_string(c.m) + "," + std::to_string(c.n) +
                                            ") is outside the wave");
    }
    return static_cast<std::size_t>(c.m - 1) * width_ + (c.n - 1);
}

std::vector<TileId> Wave::candidates(Cell c) const { return candidates(index_of(c)); }

std::vector<TileId> Wave::candidates(std::size_t idx) const
{
    std::vector<TileId> out;
    out.reserve(counts_[idx]);
    const auto dom = domain(idx);
    for (std::size_t w = 0; w < words_; ++w) {
        for (std::uint64_t bits = dom[w]; bits != 0; bits &= bits - 1) {
            out.push_back(static_cast<TileId>(w * 64 + std::countr_zero(bits)));
        }
    }
    return out;
}

bool Wave::fully_collapsed() const noexcept
{
    for (auto c : counts_) {
        if (c != 1) {
            return false;
        }
    }
    return true;
}

double Wave::entropy_at(std::size_t idx) const
{
    if (entropy_valid_[idx]) {
        return entropy_[idx];
    }
    double h = 0.0;
    if (counts_[idx] > 1) {
        if (weights_.flat()) {
            h = std::log(static_cast<double>(counts_[idx]));
        } else {
            double total = 0.0;
            double wlogw = 0.0;
            const auto dom = domain(idx);
            for (std::size_t w = 0; w < words_; ++w) {
                for (std::uint64_t bits = dom[w]; bits != 0; bits &= bits - 1) {
                    const auto t = static_cast<TileId>(w * 64 + std::countr_zero(bits));
                    const double wt = weights_.weight(idx, t);
                    total += wt;
                    wlogw += wt * std::log(wt);
                }
            }
            // -sum p ln p with p = w / total
            h = std::log(total) - wlogw / total;
        }
    }
    entropy_[idx] = h;
    entropy_valid_[idx] = 1;
    return h;
}

void Wave::save(std::size_t idx)
{
    trail_cells_.push_back(static_cast<std::uint32_t>(idx));
    const auto dom = domain(idx);
    trail_words_.insert(trail_words_.end(), dom.begin(), dom.end());
}

void Wave::set_domain(std::size_t idx, std::span<const std::uint64_t> words)
{
    std::uint32_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        domains_[idx * words_ + w] = words[w];
        count += static_cast<std::uint32_t>(std::popcount(words[w]));
    }
    counts_[idx] = count;
    entropy_valid_[idx] = 0;
}

bool Wave::pin(std::size_t idx, TileId t)
{
    if (t >= tile_count()) {
        throw Error("invalid_argument", "tile index " + std::to_string(t) + " is out of range");
    }
    if (!contains(idx, t)) {
        return false;
    }
    if (counts_[idx] == 1) {
        return true;
    }
    save(idx);
    std::fill(scratch_.begin(), scratch_.end(), 0);
    scratch_[t >> 6] = std::uint64_t{1} << (t & 63);
    set_domain(idx, scratch_);
    return true;
}

void Wave::decide(std::size_t idx, TileId t)
{
    decisions_.push_back({idx, t, trail_size()});
    save(idx);
    std::fill(scratch_.begin(), scratch_.end(), 0);
    scratch_[t >> 6] = std::uint64_t{1} << (t & 63);
    set_domain(idx, scratch_);
}

std::size_t Wave::remove(std::size_t idx, TileId t)
{
    if (contains(idx, t)) {
        save(idx);
        const auto dom = domain(idx);
        std::copy(dom.begin(), dom.end(), scratch_.begin());
        scratch_[t >> 6] &= ~(std::uint64_t{1} << (t & 63));
        set_domain(idx, scratch_);
    }
    return counts_[idx];
}

void Wave::overwrite(std::size_t idx, std::span<const std::uint64_t> words)
{
    save(idx);
    set_domain(idx, words);
}

void Wave::undo_to(std::size_t mark)
{
    while (trail_cells_.size() > mark) {
        const std::size_t idx = trail_cells_.back();
        trail_cells_.pop_back();
        set_domain(idx, {trail_words_.data() + trail_words_.size() - words_, words_});
        trail_words_.resize(trail_words_.size() - words_);
    }
}

std::optional<Wave::Decision> Wave::undo_last_decision()
{
    if (decisions_.empty()) {
        return std::nullopt;
    }
    const Decision d = decisions_.back();
    decisions_.pop_back();
    undo_to(d.trail_mark);
    return d;
}

Propagation Wave::propagate(std::size_t from) { return propagate(std::span<const std::size_t>(&from, 1)); }

Propagation Wave::propagate_all()
{
    std::vector<std::size_t> all(cell_count());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    return propagate(all);
}

Propagation Wave::propagate(std::span<const std::size_t> from)
{
    const AdjacencyIndex& adj = *index_;
    queue_.clear();
    for (auto c : from) {
        if (!queued_[c]) {
            queued_[c] = 1;
            queue_.push_back(c);
        }
    }

    auto& allowed = allowed_;
    std::size_t head = 0;
    while (head < queue_.size()) {
        const std::size_t src = queue_[head++];
        queued_[src] = 0;
        const int row = static_cast<int>(src / width_);
        const int col = static_cast<int>(src % width_);
        const auto src_dom = domain(src);

        for (Side side : kSides) {
            std::size_t nb = 0;
            switch (side) {
            case Side::north:
                if (row == 0) continue;
                nb = src - width_;
                break;
            case Side::south:
                if (row + 1 == height_) continue;
                nb = src + width_;
                break;
            case Side::west:
                if (col == 0) continue;
                nb = src - 1;
                break;
            case Side::east:
                if (col + 1 == width_) continue;
                nb = src + 1;
                break;
            }

            // The neighbour keeps t iff some source candidate shows, on
            // `side`, the edge that t shows on the opposite side.
            std::fill(allowed.begin(), allowed.end(), 0);
            const Side facing = opposite(side);
            for (EdgeId e = 0; e < adj.edge_count(side); ++e) {
                const auto exposes = adj.mask(side, e);
                bool present = false;
                for (std::size_t w = 0; w < words_ && !present; ++w) {
                    present = (src_dom[w] & exposes[w]) != 0;
                }
                if (present) {
                    const auto accepts = adj.mask(facing, e);
                    for (std::size_t w = 0; w < words_; ++w) {
                        allowed[w] |= accepts[w];
                    }
                }
            }

            const auto nb_dom = domain(nb);
            bool changed = false;
            for (std::size_t w = 0; w < words_; ++w) {
                scratch_[w] = nb_dom[w] & allowed[w];
                changed = changed || scratch_[w] != nb_dom[w];
            }
            if (!changed) {
                continue;
            }
            save(nb);
            set_domain(nb, scratch_);
            ++revisions_;
            if (counts_[nb] == 0) {
                for (std::size_t i = head; i < queue_.size(); ++i) {
                    queued_[queue_[i]] = 0;
                }
                queue_.clear();
                return Propagation::contradiction;
            }
            if (!queued_[nb]) {
                queued_[nb] = 1;
                queue_.push_back(nb);
            }
        }
    }
    queue_.clear();
    return Propagation::ok;
}

Wave new_wave(int width, int height, const Tileset& ts) { return Wave(width, height, ts); }

std::optional<std::size_t> observe_index(const Wave& wave)
{
    std::optional<std::size_t> best;
    const std::size_t cells = wave.cell_count();
    if (wave.weights().flat()) {
        // Uniform weights: entropy is ln(count), so compare counts exactly.
        std::size_t best_count = 0;
        for (std::size_t i = 0; i < cells; ++i) {
            const std::size_t c = wave.count(i);
            if (c > 1 && (!best || c < best_count)) {
                best = i;
                best_count = c;
                if (c == 2) {
                    break;
                }
            }
        }
        return best;
    }
    double best_h = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        if (wave.count(i) > 1) {
            const double h = wave.entropy_at(i);
            if (!best || h < best_h - 1e-12 * std::max(1.0, std::abs(best_h))) {
                best = i;
                best_h = h;
            }
        }
    }
    return best;
}

std::optional<Cell> observe(const Wave& wave)
{
    if (auto idx = observe_index(wave)) {
        return wave.cell_at(*idx);
    }
    return std::nullopt;
}

TileId sample_candidate(const Wave& wave, std::size_t idx, Rng& rng)
{
    const auto dom = wave.domain(idx);
    auto for_each = [&dom](auto f) {
        for (std::size_t w = 0; w < dom.size(); ++w) {
            for (std::uint64_t bits = dom[w]; bits != 0; bits &= bits - 1) {
                if (f(static_cast<TileId>(w * 64 + std::countr_zero(bits)))) {
                    return;
                }
            }
        }
    };
    const std::size_t count = wave.count(idx);
    if (count == 0) {
        throw Contradiction("cannot collapse a cell with no candidates");
    }
    TileId last = 0;
    if (count == 1) {
        for_each([&](TileId t) { last = t; return true; });
        return last;
    }
    double total = 0.0;
    for_each([&](TileId t) { total += wave.weights().weight(idx, t); return false; });
    const double r = rng.uniform01() * total;
    double acc = 0.0;
    for_each([&](TileId t) {
        acc += wave.weights().weight(idx, t);
        last = t;
        return r < acc;
    });
    return last;
}

TileId collapse(Wave& wave, Cell cell, Rng& rng)
{
    const std::size_t idx = wave.index_of(cell);
    const TileId t = sample_candidate(wave, idx, rng);
    wave.decide(idx, t);
    return t;
}

Propagation propagate(Wave& wave, Cell from) { return wave.propagate(wave.index_of(from)); }

} // namespace nwfc
