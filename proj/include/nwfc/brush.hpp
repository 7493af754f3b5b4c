#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nwfc/tileset.hpp"

namespace nwfc {

// 1-based (row m, column n) cell address, as used by every public interface.
struct Cell {
    int m = 1;
    int n = 1;
    bool operator==(const Cell&) const = default;
};

// Inclusive cell rectangle rows m0..m1, columns n0..n1.
struct CellRect {
    int m0 = 1;
    int n0 = 1;
    int m1 = 1;
    int n1 = 1;

    bool empty() const noexcept { return m1 < m0 || n1 < n0; }
    bool contains(Cell c) const noexcept { return c.m >= m0 && c.m <= m1 && c.n >= n0 && c.n <= n1; }
    bool operator==(const CellRect&) const = default;
};

struct Stroke {
    CellRect rect;
    double multiplier = 1.0;
    bool operator==(const Stroke&) const = default;
};

struct BrushLayer {
    std::string tag;
    double default_multiplier = 1.0;
    std::vector<Stroke> strokes;

    // Last stroke covering the cell wins; otherwise the default.
    double multiplier_at(Cell c) const;
    bool operator==(const BrushLayer&) const = default;
};

// Throws Error("invalid_brush") on an empty rectangle or a non-positive multiplier.
BrushLayer paint(BrushLayer layer, CellRect rect, double multiplier);

class WeightField {
public:
    WeightField() = default;
    explicit WeightField(std::vector<BrushLayer> layers);

    const std::vector<BrushLayer>& layers() const noexcept { return layers_; }
    bool empty() const noexcept { return layers_.empty(); }

    // Appends a stroke to the layer for `tag`, creating it if needed.
    void paint(const std::string& tag, CellRect rect, double multiplier);
    void add_layer(BrushLayer layer);

    bool operator==(const WeightField&) const = default;

private:
    std::vector<BrushLayer> layers_;
};

// tile.weight times the multiplier of every layer whose tag the tile carries.
double effective_weight(const WeightField& wf, Cell cell, const Tile& tile);

// Shannon entropy -sum p ln p of the normalised weights.
double entropy(std::span<const double> weights);

WeightField parse_brush(const nlohmann::json& doc);
nlohmann::json to_json(const WeightField& wf);

} // namespace nwfc
