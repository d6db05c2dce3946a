#include <catch_amalgamated.hpp>

#include "tbn/tbn.hpp"

using namespace tbn;
using namespace tbn::atam;

namespace {

// seed with a strength-2 east glue and one tile that sticks to it
TileSystem two_tiles() {
    TileSystem sys;
    sys.seed = "S";
    sys.tiles.push_back({"S", {std::nullopt, Glue{"x", 2, false}, std::nullopt, std::nullopt}});
    sys.tiles.push_back({"T", {std::nullopt, std::nullopt, std::nullopt, Glue{"x", 2, true}}});
    return sys;
}

std::vector<int> bits_of(int x, int k) {
    std::vector<int> out;
    for (int y = 0; y < k; ++y) out.push_back((x >> y) & 1);
    return out;
}

}  // namespace

TEST_CASE("tiny system grows deterministically", "[atam]") {
    auto a = simulate(two_tiles());
    CHECK(a.terminal);
    CHECK(a.tiles.size() == 2);
    CHECK(a.is_rectangle(2, 1));
    CHECK(replays(a));
    CHECK_FALSE(has_competing_attachments(a));

    auto sys = two_tiles();
    sys.tiles[1].glues[west]->strength = 1;  // below temperature
    auto b = simulate(sys);
    CHECK(b.tiles.size() == 1);
    CHECK(b.terminal);
}

TEST_CASE("validation", "[atam]") {
    auto sys = two_tiles();
    sys.seed = "nope";
    CHECK_THROWS_AS(simulate(sys), Error);
    sys = two_tiles();
    sys.tiles[1].name = "S";
    CHECK_THROWS_AS(sys.validate(), Error);
    sys = two_tiles();
    sys.temperature = 0;
    CHECK_THROWS_AS(sys.validate(), Error);
}

TEST_CASE("counters count", "[atam][counter]") {
    for (int k = 1; k <= 4; ++k)
        for (auto v : {Variant::plain, Variant::indexed}) {
            INFO("k=" << k << (v == Variant::plain ? " plain" : " indexed"));
            auto a = simulate(gen_counter(k, v));
            REQUIRE(a.terminal);
            CHECK(a.is_rectangle((1 << k) + 1, k));
            CHECK(replays(a));
            for (int x = 0; x < (1 << k); ++x) CHECK(column_bits(a, x) == bits_of(x, k));
            for (std::uint64_t seed : {1u, 2u, 3u}) {
                auto r = simulate(gen_counter(k, v), Policy::random(seed));
                CHECK(r.tiles == a.tiles);
                CHECK(replays(r));
            }
        }
    CHECK_THROWS_AS(gen_counter(0, Variant::plain), Error);
}

TEST_CASE("tile system JSON round trip", "[atam][io]") {
    for (auto v : {Variant::plain, Variant::indexed}) {
        auto sys = gen_counter(3, v);
        auto back = system_from_json(system_to_json(sys));
        CHECK(system_to_json(back) == system_to_json(sys));
        CHECK(simulate(back).tiles == simulate(sys).tiles);
    }
    CHECK_THROWS_AS(system_from_json(nlohmann::json::parse(R"({"tiles": 3})")), Error);
    auto j = assembly_to_json(simulate(two_tiles()));
    CHECK(j["terminal"] == true);
    CHECK(j["tiles"].size() == 2);
    CHECK(j["tiles"][1]["tile"] == "T");
}

TEST_CASE("assemblies as configurations", "[atam][interpret]") {
    auto a = simulate(two_tiles());
    auto in = atam_to_tbn(a);
    CHECK(in.config.size() == 2);
    CHECK(in.config.bonds().size() == 1);
    auto m = config_metrics(in.config);
    CHECK(m.saturated);
    CHECK(m.entropy == 1);
    auto twice = atam_to_tbn(a, true);
    CHECK(twice.config.bonds().size() == 2);

    auto c = simulate(gen_counter(2, Variant::indexed));
    auto ci = atam_to_tbn(c);
    CHECK(ci.config.size() == c.tiles.size());
    CHECK(config_metrics(ci.config).entropy == 1);
    CHECK(is_saturated(ci.config));
}

TEST_CASE("counter stability", "[atam][counter]") {
    auto p3 = check_counter_stability(3, Variant::plain);
    CHECK(p3.terminal);
    CHECK(p3.rectangle);
    CHECK_FALSE(p3.stable);
    REQUIRE(p3.witness);
    CHECK(is_saturated(*p3.witness));
    CHECK(config_metrics(*p3.witness).entropy == p3.stable_entropy);
    CHECK(p3.stable_entropy >= 2);

    for (int k = 2; k <= 3; ++k) {
        auto r = check_counter_stability(k, Variant::indexed);
        CHECK(r.saturated);
        CHECK(r.stable);
        CHECK(r.stable_entropy == 1);
    }
    CHECK_THROWS_AS(check_counter_stability(4, Variant::indexed), Error);
}

TEST_CASE("indexed counter k=4 is stable", "[atam][counter][slow]") {
    auto r = check_counter_stability(4, Variant::indexed, 4);
    CHECK(r.stable);
    CHECK(r.stable_entropy == 1);
}
