#include "nwfc/brush.hpp"

#include <cmath>

#include "nwfc/error.hpp"

namespace nwfc {

using nlohmann::json;

namespace {

void check_multiplier(double mul)
{
    if (!(mul > 0.0) || !std::isfinite(mul)) {
        throw Error("invalid_brush", "brush multiplier must be a finite value > 0");
    }
}

} // namespace

double BrushLayer::multiplier_at(Cell c) const
{
    for (auto it = strokes.rbegin(); it != strokes.rend(); ++it) {
        if (it->rect.contains(c)) {
            return it->multiplier;
        }
    }
    return default_multiplier;
}

BrushLayer paint(BrushLayer layer, CellRect rect, double multiplier)
{
    if (rect.empty()) {
        throw Error("invalid_brush", "brush rectangle is empty");
    }
    check_multiplier(multiplier);
    layer.strokes.push_back({rect, multiplier});
    return layer;
}

WeightField::WeightField(std::vector<BrushLayer> layers)
{
    for (auto& l : layers) {
        add_layer(std::move(l));
    }
}

void WeightField::add_layer(BrushLayer layer)
{
    check_multiplier(layer.default_multiplier);
    for (const auto& s : layer.strokes) {
        if (s.rect.empty()) {
            throw Error("invalid_brush", "brush rectangle is empty");
        }
        check_multiplier(s.multiplier);
    }
    layers_.push_back(std::move(layer));
}

void WeightField::paint(const std::string& tag, CellRect rect, double multiplier)
{
    for (auto& l : layers_) {
        if (l.tag == tag) {
            l = nwfc::paint(std::move(l), rect, multiplier);
            return;
        }
    }
    layers_.push_back(nwfc::paint(BrushLayer{tag, 1.0, {}}, rect, multiplier));
}

double effective_weight(const WeightField& wf, Cell cell, const Tile& tile)
{
    double w = tile.weight;
    for (const auto& layer : wf.layers()) {
        if (tile.has_tag(layer.tag)) {
            w *= layer.multiplier_at(cell);
        }
    }
    return w;
}

double entropy(std::span<const double> weights)
{
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    double h = 0.0;
    for (double w : weights) {
        const double p = w / total;
        h -= p * std::log(p);
    }
    return h;
}

WeightField parse_brush(const json& doc)
{
    try {
        WeightField wf;
        for (const auto& jl : doc.at("layers")) {
            BrushLayer layer;
            layer.tag = jl.at("tag").get<std::string>();
            layer.default_multiplier = jl.value("default", 1.0);
            if (jl.contains("strokes")) {
                for (const auto& js : jl.at("strokes")) {
                    layer.strokes.push_back({{js.at("m0").get<int>(), js.at("n0").get<int>(),
                                              js.at("m1").get<int>(), js.at("n1").get<int>()},
                                             js.at("mul").get<double>()});
                }
            }
            wf.add_layer(std::move(layer));
        }
        return wf;
    } catch (const json::exception& ex) {
        throw Error("parse", std::string("malformed brush document: ") + ex.what());
    }
}

json to_json(const WeightField& wf)
{
    json layers = json::array();
    for (const auto& l : wf.layers()) {
        json strokes = json::array();
        for (const auto& s : l.strokes) {
            strokes.push_back({{"m0", s.rect.m0},
                               {"n0", s.rect.n0},
                               {"m1", s.rect.m1},
                               {"n1", s.rect.n1},
                               {"mul", s.multiplier}});
        }
        layers.push_back({{"tag", l.tag}, {"default", l.default_multiplier}, {"strokes", strokes}});
    }
    return {{"layers", layers}};
}

} // namespace nwfc
