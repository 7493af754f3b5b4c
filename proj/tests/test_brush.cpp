#include <doctest.h>

#include <cmath>

#include "nwfc/brush.hpp"
#include "nwfc/error.hpp"
#include "nwfc/tileset.hpp"

using namespace nwfc;

namespace {

Tile tagged(std::vector<std::string> tags, double weight = 1.0)
{
    Tile t;
    t.weight = weight;
    t.tags = std::move(tags);
    return t;
}

} // namespace

TEST_CASE("painting strokes")
{
    BrushLayer city{"city", 1.0, {}};
    city = paint(city, {1, 1, 10, 10}, 5.0);
    REQUIRE(city.strokes.size() == 1);
    CHECK(city.multiplier_at({3, 7}) == 5.0);
    CHECK(city.multiplier_at({11, 1}) == 1.0);

    CHECK_THROWS_AS(paint(city, {1, 1, 2, 2}, 0.0), Error);
    CHECK_THROWS_AS(paint(city, {1, 1, 2, 2}, -1.0), Error);
    CHECK_THROWS_AS(paint(city, {1, 1, 2, 2}, std::nan("")), Error);

    city = paint(city, {1, 1, 4, 4}, 2.0);
    city = paint(city, {3, 3, 6, 6}, 0.5);
    CHECK(city.multiplier_at({3, 3}) == 0.5);
    CHECK(city.multiplier_at({1, 1}) == 2.0);
    CHECK(city.multiplier_at({6, 6}) == 0.5);
}

TEST_CASE("effective weights")
{
    const WeightField none;
    CHECK(effective_weight(none, {1, 1}, tagged({})) == 1.0);

    WeightField wf;
    wf.paint("city", {1, 1, 1, 1}, 4.0);
    CHECK(effective_weight(wf, {1, 1}, tagged({"city"}, 1.5)) == doctest::Approx(6.0));
    CHECK(effective_weight(wf, {2, 2}, tagged({"city"}, 1.5)) == doctest::Approx(1.5));

    wf.paint("luxury", {1, 1, 1, 1}, 0.5);
    CHECK(effective_weight(wf, {1, 1}, tagged({"city", "luxury"}, 3.0)) == doctest::Approx(2.0 * 3.0));
    CHECK(effective_weight(wf, {1, 1}, tagged({"grass"}, 3.0)) == doctest::Approx(3.0));
}

TEST_CASE("entropy of candidate weights")
{
    const double uniform[] = {1, 1, 1, 1};
    CHECK(entropy(uniform) == doctest::Approx(std::log(4.0)));
    const double single[] = {2.5};
    CHECK(entropy(single) == doctest::Approx(0.0));
    const double skew[] = {1, 1, 2};
    const double expected = -(0.25 * std::log(0.25) * 2 + 0.5 * std::log(0.5));
    CHECK(entropy(skew) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(entropy(skew) == doctest::Approx(1.0397).epsilon(1e-4));
}

TEST_CASE("brush document round trip")
{
    WeightField wf;
    wf.paint("city", {1, 1, 10, 10}, 5.0);
    wf.paint("stream", {2, 3, 4, 5}, 0.1);
    const WeightField back = parse_brush(to_json(wf));
    CHECK(back == wf);
    CHECK_THROWS_AS(parse_brush(nlohmann::json{{"layers", 3}}), Error);
    CHECK_THROWS_AS(parse_brush(nlohmann::json::parse(
                        R"({"layers":[{"tag":"city","strokes":[{"m0":1,"n0":1,"m1":2,"n1":2,"mul":-2}]}]})")),
                    Error);
}
