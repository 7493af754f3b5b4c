#include "nwfc/tileset.hpp"

namespace nwfc {

namespace {

// Kept byte-identical to data/carcassonne.json (checked by the tileset tests).
constexpr const char* kCarcassonne = R"json(
{
  "name": "carcassonne",
  "edges_ns": ["grass", "city", "path", "stream"],
  "edges_we": ["grass", "city", "path", "stream"],
  "tiles": [
    {"n": "grass", "s": "grass", "w": "grass", "e": "grass", "tags": ["grass"]},
    {"n": "path", "s": "grass", "w": "path", "e": "grass", "tags": ["grass", "path"]},
    {"n": "grass", "s": "grass", "w": "city", "e": "city", "tags": ["city", "grass"]},
    {"n": "path", "s": "path", "w": "grass", "e": "grass", "tags": ["grass", "path"]},
    {"n": "grass", "s": "city", "w": "grass", "e": "city", "tags": ["city", "grass"]},
    {"n": "path", "s": "city", "w": "path", "e": "city", "tags": ["city", "path"]},
    {"n": "grass", "s": "grass", "w": "path", "e": "path", "tags": ["grass", "path"]},
    {"n": "path", "s": "path", "w": "city", "e": "city", "tags": ["city", "path"]},
    {"n": "grass", "s": "path", "w": "grass", "e": "path", "tags": ["grass", "path"]},
    {"n": "path", "s": "path", "w": "path", "e": "path", "tags": ["path"]},
    {"n": "grass", "s": "grass", "w": "stream", "e": "stream", "tags": ["grass", "stream"]},
    {"n": "path", "s": "path", "w": "stream", "e": "stream", "tags": ["path", "stream"]},
    {"n": "grass", "s": "stream", "w": "grass", "e": "stream", "tags": ["grass", "stream"]},
    {"n": "path", "s": "stream", "w": "path", "e": "stream", "tags": ["path", "stream"]},
    {"n": "city", "s": "city", "w": "grass", "e": "grass", "tags": ["city", "grass"]},
    {"n": "stream", "s": "stream", "w": "grass", "e": "grass", "tags": ["grass", "stream"]},
    {"n": "city", "s": "grass", "w": "city", "e": "grass", "tags": ["city", "grass"]},
    {"n": "stream", "s": "grass", "w": "stream", "e": "grass", "tags": ["grass", "stream"]},
    {"n": "city", "s": "city", "w": "path", "e": "path", "tags": ["city", "path"]},
    {"n": "stream", "s": "stream", "w": "city", "e": "city", "tags": ["city", "stream"]},
    {"n": "city", "s": "city", "w": "city", "e": "city", "tags": ["city"]},
    {"n": "stream", "s": "city", "w": "stream", "e": "city", "tags": ["city", "stream"]},
    {"n": "city", "s": "city", "w": "stream", "e": "stream", "tags": ["city", "stream"]},
    {"n": "stream", "s": "stream", "w": "path", "e": "path", "tags": ["path", "stream"]},
    {"n": "city", "s": "path", "w": "city", "e": "path", "tags": ["city", "path"]},
    {"n": "stream", "s": "path", "w": "stream", "e": "path", "tags": ["path", "stream"]},
    {"n": "city", "s": "stream", "w": "city", "e": "stream", "tags": ["city", "stream"]},
    {"n": "stream", "s": "stream", "w": "stream", "e": "stream", "tags": ["stream"]}
  ]
}
)json";

} // namespace

const char* carcassonne_document()
{
    return kCarcassonne + 1; // skip the leading newline of the raw literal
}

const Tileset& carcassonne()
{
    static const Tileset ts = parse_tileset_text(carcassonne_document());
    return ts;
}

} // namespace nwfc
