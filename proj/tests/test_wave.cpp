#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "nwfc/error.hpp"
#include "nwfc/rng.hpp"
#include "nwfc/solver.hpp"
#include "nwfc/wave.hpp"
#include "oracle.hpp"

using namespace nwfc;

namespace {

std::vector<std::set<TileId>> domains_of(const Wave& w)
{
    std::vector<std::set<TileId>> out;
    for (std::size_t i = 0; i < w.cell_count(); ++i) {
        const auto c = w.candidates(i);
        out.emplace_back(c.begin(), c.end());
    }
    return out;
}

std::vector<std::uint64_t> only(const Wave& w, std::initializer_list<TileId> tiles)
{
    std::vector<std::uint64_t> words(w.domain(0).size(), 0);
    for (auto t : tiles) words[t >> 6] |= std::uint64_t{1} << (t & 63);
    return words;
}

} // namespace

TEST_CASE("wave initialisation")
{
    const Wave w = new_wave(3, 2, carcassonne());
    CHECK(w.cell_count() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(w.count(i) == 28);

    const Wave one = new_wave(1, 1, carcassonne());
    CHECK(one.cell_count() == 1);
    CHECK(one.count(0) == 28);

    CHECK_THROWS(new_wave(0, 5, carcassonne()));
}

TEST_CASE("cell addressing is 1-based row-major")
{
    const Wave w = new_wave(4, 3, carcassonne());
    CHECK(w.index_of({1, 1}) == 0);
    CHECK(w.index_of({2, 1}) == 4);
    CHECK(w.cell_at(7) == Cell{2, 4});
    CHECK_THROWS(w.index_of({4, 1}));
}

TEST_CASE("boundary application")
{
    const Tileset ts = canonical_sub_complete(2, 0, 0);
    Wave untouched = new_wave(2, 2, ts);
    apply_boundary(untouched, BoundarySpec{});
    for (std::size_t i = 0; i < 4; ++i) CHECK(untouched.count(i) == 4);

    // Tile 0 is (0,0,0,0).
    Wave w = new_wave(2, 2, ts);
    apply_boundary(w, BoundarySpec{std::vector<TileId>{0, 0}, std::vector<TileId>{0, 0}});
    for (TileId t : w.candidates(Cell{2, 2})) {
        CHECK(ts.tile(t).n == 0);
        CHECK(ts.tile(t).w == 0);
    }
    CHECK(w.count(Cell{2, 2}) == 1);

    Wave bad = new_wave(2, 2, ts);
    CHECK_THROWS_AS(apply_boundary(bad, BoundarySpec{std::vector<TileId>{1, 0}, std::vector<TileId>{0, 0}}),
                    Error);
    CHECK_THROWS_AS(apply_boundary(bad, BoundarySpec{std::vector<TileId>{0}, std::nullopt}), Error);
}

TEST_CASE("observe picks the smallest domain")
{
    Wave done = new_wave(1, 1, carcassonne());
    done.pin(0, 3);
    CHECK_FALSE(observe(done).has_value());

    const Tileset ts = canonical_sub_complete(3, 0, 0);
    Wave w = new_wave(4, 3, ts);
    for (std::size_t i = 0; i < w.cell_count(); ++i) w.overwrite(i, only(w, {0, 1, 2, 3, 4}));
    w.overwrite(w.index_of({2, 3}), only(w, {5, 6}));
    CHECK(observe(w) == Cell{2, 3});

    Wave tie = new_wave(4, 3, ts);
    tie.overwrite(tie.index_of({2, 1}), only(tie, {0, 1, 2}));
    tie.overwrite(tie.index_of({1, 4}), only(tie, {3, 4, 5}));
    CHECK(observe(tie) == Cell{1, 4});
}

TEST_CASE("weighted sampling frequency")
{
    const Tileset ts = parse_tileset_text(R"({"edges_ns":["a","b"],"edges_we":["a","b"],"tiles":[
        {"n":"a","s":"a","w":"a","e":"a","weight":1},{"n":"b","s":"b","w":"b","e":"b","weight":3}]})");
    const Wave w = new_wave(1, 1, ts);
    int picks = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        Rng rng(static_cast<std::uint64_t>(i));
        picks += sample_candidate(w, 0, rng) == 1;
    }
    CHECK(std::abs(picks / static_cast<double>(trials) - 0.75) <= 0.02);

    Rng a(42), b(42);
    CHECK(sample_candidate(w, 0, a) == sample_candidate(w, 0, b));

    Wave single = new_wave(1, 1, carcassonne());
    single.pin(0, 7);
    Rng r(1);
    CHECK(sample_candidate(single, 0, r) == 7);
}

TEST_CASE("propagation after a collapse")
{
    const Tileset ts = canonical_sub_complete(2, 0, 0);
    Wave w = new_wave(2, 2, ts);
    w.decide(0, 1); // (0,1,1,0)
    REQUIRE(propagate(w, Cell{1, 1}) == Propagation::ok);
    const auto east = w.candidates(Cell{1, 2});
    CHECK(std::set<TileId>(east.begin(), east.end()) == std::set<TileId>{0, 2});
    const auto south = w.candidates(Cell{2, 1});
    CHECK(std::set<TileId>(south.begin(), south.end()) == std::set<TileId>{2, 3});

    const auto before = domains_of(w);
    REQUIRE(w.propagate(w.index_of({1, 2})) == Propagation::ok);
    CHECK(domains_of(w) == before);
}

TEST_CASE("unsupported neighbour is a contradiction")
{
    const Tileset ts = fixtures::quads(2, {{0, 0, 0, 0}, {0, 0, 0, 1}});
    Wave w = new_wave(2, 1, ts);
    w.overwrite(1, only(w, {0}));
    w.decide(0, 1);
    CHECK(w.propagate(std::size_t{0}) == Propagation::contradiction);
}

TEST_CASE("propagation reaches the arc-consistent fixpoint")
{
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(2));
        std::vector<fixtures::Quad> qs;
        const int count = 2 + static_cast<int>(rng.below(10));
        for (int i = 0; i < count; ++i) {
            fixtures::Quad q{};
            for (auto& x : q) x = static_cast<int>(rng.below(k));
            if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
        }
        const Tileset ts = fixtures::quads(k, qs);
        const int width = 1 + static_cast<int>(rng.below(3));
        const int height = 1 + static_cast<int>(rng.below(3));
        Wave w = new_wave(width, height, ts);

        auto expected = oracle::arc_consistent(domains_of(w), width, height, ts);
        auto status = w.propagate_all();
        for (int step = 0; step < 3; ++step) {
            const bool oracle_empty = std::any_of(expected.begin(), expected.end(), [](auto& d) { return d.empty(); });
            if (status == Propagation::contradiction) {
                CHECK(oracle_empty);
                break;
            }
            CHECK_FALSE(oracle_empty);
            CHECK(domains_of(w) == expected);

            const auto idx = static_cast<std::size_t>(rng.below(w.cell_count()));
            const auto cands = w.candidates(idx);
            const TileId t = cands[rng.below(cands.size())];
            w.decide(idx, t);
            auto narrowed = domains_of(w);
            expected = oracle::arc_consistent(narrowed, width, height, ts);
            status = w.propagate(idx);
        }
    }
}

TEST_CASE("undoing a decision restores every domain")
{
    const Tileset& ts = carcassonne();
    Rng rng(5);
    Wave w = new_wave(4, 4, ts);
    REQUIRE(w.propagate_all() == Propagation::ok);
    std::vector<std::vector<std::set<TileId>>> snapshots;
    std::vector<std::size_t> trail_sizes;
    while (auto idx = observe_index(w)) {
        snapshots.push_back(domains_of(w));
        trail_sizes.push_back(w.trail_size());
        w.decide(*idx, sample_candidate(w, *idx, rng));
        if (w.propagate(*idx) == Propagation::contradiction) break;
    }
    REQUIRE_FALSE(snapshots.empty());
    while (!snapshots.empty()) {
        REQUIRE(w.undo_last_decision().has_value());
        CHECK(domains_of(w) == snapshots.back());
        CHECK(w.trail_size() == trail_sizes.back());
        snapshots.pop_back();
        trail_sizes.pop_back();
    }
    CHECK_FALSE(w.undo_last_decision().has_value());
}

TEST_CASE("entropy cache follows domain changes")
{
    const Tileset ts = canonical_sub_complete(2, 0, 0);
    Wave w = new_wave(1, 1, ts);
    CHECK(w.entropy_at(0) == doctest::Approx(std::log(4.0)));
    w.remove(0, 3);
    CHECK(w.entropy_at(0) == doctest::Approx(std::log(3.0)));
}
