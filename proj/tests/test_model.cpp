#include <catch_amalgamated.hpp>

#include <random>

#include "random_tbn.hpp"
#include "tbn/tbn.hpp"

using namespace tbn;

namespace {

Tbn fig1_tbn() { return gen_fig1().tbn; }

// m1 bound to m2 on both names; m3, m4 alone
Configuration fig1_bottom_right() {
    auto t = fig1_tbn();
    std::vector<std::size_t> inst{t.monomer_index("m1"), t.monomer_index("m2"), t.monomer_index("m3"), t.monomer_index("m4")};
    return Configuration(t, inst, {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}});
}

Tbn tbn_of(const std::string& text) { return parse_tbn(text).tbn; }

}  // namespace

TEST_CASE("domains and monomers", "[model]") {
    auto d = Domain::parse("x*");
    CHECK(d.starred);
    CHECK(d.complement().complement() == d);
    CHECK(d.complement() == Domain{"x", false});
    CHECK_THROWS_AS(Domain::parse("*"), Error);
    CHECK_THROWS_AS(Domain::parse("a b"), Error);
    CHECK_THROWS_AS(MonomerType("m", {}), Error);

    MonomerType a("m", {{"b", false}, {"a", true}, {"a", false}});
    MonomerType b("m", {{"a", false}, {"a", true}, {"b", false}});
    CHECK(a == b);
    CHECK(a.count({"a", true}) == 1);
}

TEST_CASE("parse_tbn", "[model][io]") {
    auto f = parse_tbn("monomer M1: a b\nmonomer M2: a* b*\nmonomer M3: a\nmonomer M4: b");
    CHECK(f.tbn.num_monomers() == 4);
    CHECK(f.counts == Collection::ones(f.tbn));

    auto z = parse_tbn("# nothing yet\nmonomer X: a\ncount X 0\n");
    CHECK(z.counts.empty());

    CHECK_THROWS_AS(parse_tbn("monomer X:"), ParseError);
    CHECK_THROWS_AS(parse_tbn("monomer X: a\nmonomer X: b"), ParseError);
    try {
        parse_tbn("monomer X: a\n  widget Y\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("max_bond_count", "[model]") {
    auto g = gen_fig1();
    CHECK(max_bond_count(g.tbn, g.counts) == 2);
    CHECK(max_bond_count(g.tbn, Collection(Counts(4, 0))) == 0);
    auto f = parse_tbn("monomer A: a a\nmonomer B: a*\ncount B 2");
    CHECK(max_bond_count(f.tbn, f.counts) == 2);
}

TEST_CASE("config_metrics", "[model]") {
    auto m = config_metrics(fig1_bottom_right());
    CHECK(m.enthalpy == 2);
    CHECK(m.entropy == 3);
    CHECK(m.saturated);
    CHECK(m.polymer_sizes == std::vector<std::int64_t>{2, 1, 1});

    auto t = fig1_tbn();
    Configuration free(t, {0, 1, 2}, {});
    auto fm = config_metrics(free);
    CHECK(fm.enthalpy == 0);
    CHECK(fm.entropy == 3);

    auto p = tbn_of("monomer P: a b*\nmonomer Q: a* b");
    Configuration both(p, {0, 1}, {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}});
    auto bm = config_metrics(both);
    CHECK(bm.enthalpy == 2);
    CHECK(bm.entropy == 1);
    CHECK(bm.saturated);
}

TEST_CASE("configuration invariants are enforced", "[model]") {
    auto t = fig1_tbn();
    // a with b*
    CHECK_THROWS_AS(Configuration(t, {0, 1}, {{{0, 0}, {1, 1}}}), Error);
    // slot used twice
    CHECK_THROWS_AS(Configuration(t, {0, 1, 2}, {{{0, 0}, {1, 0}}, {{2, 0}, {1, 0}}}), Error);
    // self-binding is legal
    auto s = tbn_of("monomer S: a a*");
    Configuration self(s, {0}, {{{0, 0}, {0, 1}}});
    CHECK(config_metrics(self).saturated);
}

TEST_CASE("polymers", "[model]") {
    auto ps = polymers(fig1_bottom_right());
    REQUIRE(ps.size() == 3);
    std::int64_t total = 0;
    for (auto& p : ps) total += static_cast<std::int64_t>(p.size());
    CHECK(total == 4);
    CHECK(canonical_form(join(ps)) == canonical_form(fig1_bottom_right()));

    auto t = fig1_tbn();
    CHECK(polymers(Configuration(t, {2}, {})).size() == 1);
}

TEST_CASE("monomer matrix and excess", "[model]") {
    auto t = fig1_tbn();
    auto M = t.matrix();
    CHECK(M.m == std::vector<std::vector<int>>{{1, -1, 1, 0}, {1, -1, 0, 1}});
    CHECK(excess_vector(t, Collection::ones(t)) == Counts{1, 1});
    CHECK(excess_vector(t, Collection(Counts(4, 0))) == Counts{0, 0});

    auto one = tbn_of("monomer m2: d1 d1 d1* d3");
    auto M1 = one.matrix();
    CHECK(M1.m[0][0] == 1);
    CHECK(M1.m[1][0] == 1);
    CHECK(M1.plus[0][0] == 2);
    CHECK(M1.minus[0][0] == 1);

    CHECK(tbn_of("monomer z: x x*").matrix().m[0][0] == 0);

    auto f = parse_tbn("monomer A: a a\nmonomer B: a*\ncount B 2");
    CHECK(excess_vector(f.tbn, f.counts) == Counts{0});
}

TEST_CASE("relabel_nonnegative", "[model]") {
    auto f = parse_tbn("monomer A: a*\nmonomer B: a\ncount A 2");
    auto [t, r] = relabel_nonnegative(f.tbn, f.counts);
    CHECK(r.flipped == std::set<std::string>{"a"});
    CHECK(excess_vector(t, f.counts) == Counts{1});
    CHECK(apply_relabeling(t, r) == f.tbn);

    auto g = gen_fig1();
    CHECK(relabel_nonnegative(g.tbn, g.counts).second.flipped.empty());

    auto z = parse_tbn("monomer A: a\nmonomer B: a*");
    CHECK(relabel_nonnegative(z.tbn, z.counts).second.flipped.empty());
}

TEST_CASE("relabeling preserves metrics", "[model][property]") {
    std::mt19937 rng(3);
    testing::RandomSpec spec;
    spec.slots = 12;
    for (int i = 0; i < 40; ++i) {
        auto r = testing::random_tbn(rng, spec);
        auto [t2, rl] = relabel_nonnegative(r.tbn, r.c);
        for (auto& a : enumerate_configurations(r.tbn, r.c, Filter::all, 30)) {
            // flipping a name reorders slots, so carry each bond over by domain
            auto moved = [&](SlotRef s) {
                auto& ds = a.type_of(s.monomer).domains();
                auto nth = std::count(ds.begin(), ds.begin() + static_cast<std::ptrdiff_t>(s.slot), ds[s.slot]);
                auto target = rl.apply(ds[s.slot]);
                auto& nd = t2.monomer(a.instances()[s.monomer]).domains();
                for (std::size_t k = 0; k < nd.size(); ++k)
                    if (nd[k] == target && nth-- == 0) return SlotRef{s.monomer, k};
                throw Error("slot not found");
            };
            std::vector<Bond> bonds;
            for (auto& bd : a.bonds()) bonds.push_back({moved(bd.a), moved(bd.b)});
            Configuration b(t2, a.instances(), bonds);
            auto ma = config_metrics(a), mb = config_metrics(b);
            CHECK(ma.enthalpy == mb.enthalpy);
            CHECK(ma.entropy == mb.entropy);
            CHECK(ma.saturated == mb.saturated);
        }
    }
}

TEST_CASE("saturation matches the unbound-sides characterisation", "[model][property]") {
    std::mt19937 rng(5);
    testing::RandomSpec spec;
    spec.slots = 12;
    for (int i = 0; i < 40; ++i) {
        auto r = testing::random_tbn(rng, spec);
        for (auto& a : enumerate_configurations(r.tbn, r.c, Filter::all)) {
            std::map<std::string, std::pair<int, int>> unbound;
            std::set<std::pair<std::size_t, std::size_t>> bound;
            for (auto& b : a.bonds()) {
                bound.insert({b.a.monomer, b.a.slot});
                bound.insert({b.b.monomer, b.b.slot});
            }
            for (std::size_t m = 0; m < a.size(); ++m)
                for (std::size_t s = 0; s < a.type_of(m).size(); ++s)
                    if (!bound.count({m, s})) {
                        auto& d = a.type_of(m).domains()[s];
                        (d.starred ? unbound[d.name].second : unbound[d.name].first)++;
                    }
            bool one_sided = true;
            for (auto& [n, c] : unbound) one_sided = one_sided && (c.first == 0 || c.second == 0);
            CHECK(is_saturated(a) == one_sided);
            CHECK(2 * config_metrics(a).enthalpy == static_cast<std::int64_t>(bound.size()));
        }
    }
}

TEST_CASE("excise", "[model]") {
    auto a = fig1_bottom_right();
    CHECK(canonical_form(excise(a, {"zz"}, Side::both)) == canonical_form(a));

    auto b = excise(a, {"a"}, Side::primary);
    auto m = config_metrics(b);
    CHECK(m.enthalpy == 1);
    CHECK(m.saturated);
    // m3 = {a} disappears entirely
    CHECK(b.size() == 3);
}

TEST_CASE("canonical_form", "[model]") {
    auto g = gen_fig1();
    auto all = enumerate_configurations(g.tbn, g.counts, Filter::all);
    std::set<std::string> keys;
    for (auto& a : all) keys.insert(canonical_form(a));
    CHECK(keys.size() == 9);

    auto t = tbn_of("monomer A: a a\nmonomer B: a*");
    Configuration x(t, {0, 1, 1}, {{{0, 0}, {1, 0}}, {{0, 1}, {2, 0}}});
    Configuration y(t, {0, 1, 1}, {{{0, 0}, {2, 0}}, {{0, 1}, {1, 0}}});
    CHECK(canonical_form(x) == canonical_form(y));
    Configuration p(t, {0, 1}, {{{0, 0}, {1, 0}}});
    Configuration q(t, {0, 1}, {{{0, 1}, {1, 0}}});
    CHECK(canonical_form(p) == canonical_form(q));
}

TEST_CASE("gibbs_free_energy", "[model]") {
    EnergyParams p;
    CHECK(gibbs_free_energy(0, 5, 5, p) == 0.0);
    CHECK(gibbs_free_energy(2, 4, 3, p) == Catch::Approx(-13.04).epsilon(0).margin(1e-9));
    EnergyParams half = p;
    half.molarity = 0.5;
    CHECK(gibbs_free_energy(0, 4, 3, half) > gibbs_free_energy(0, 4, 3, p));
    EnergyParams bad = p;
    bad.molarity = 0;
    CHECK_THROWS_AS(gibbs_free_energy(1, 2, 1, bad), Error);
    // linear in H and in |a| - S
    CHECK(gibbs_free_energy(3, 6, 4, p) - gibbs_free_energy(2, 6, 4, p) == Catch::Approx(p.dg_bp * p.l));
}

TEST_CASE("text and JSON round trips", "[io]") {
    std::vector<Generated> gens{gen_fig1(), gen_and_gate_basic(true, false), gen_translator(2, 3, true),
                                gen_and_tree(TreeSpec::all_present(2, 3)), gen_tree_polymer(3, 2)};
    for (auto& g : gens) {
        auto back = parse_tbn(write_tbn(g.tbn, g.counts));
        CHECK(back.tbn == g.tbn);
        CHECK(back.counts == g.counts);
        auto j = tbn_from_json(nlohmann::json::parse(tbn_to_json(g.tbn, g.counts).dump()));
        CHECK(j.tbn == g.tbn);
        CHECK(j.counts == g.counts);
    }
    auto cfg = intended_translator_config(3, 2, 1);
    auto t = cfg.tbn();
    auto c1 = parse_cfg(write_cfg(cfg), t);
    CHECK(canonical_form(c1) == canonical_form(cfg));
    auto c2 = cfg_from_json(nlohmann::json::parse(cfg_to_json(cfg).dump()), t);
    CHECK(canonical_form(c2) == canonical_form(cfg));
    auto dot = to_dot(cfg);
    CHECK(dot.find("graph configuration") == 0);
    CHECK(dot.find("label=\"x3\"") != std::string::npos);
}

TEST_CASE("cfg parse errors carry a location", "[io]") {
    auto t = fig1_tbn();
    CHECK_THROWS_AS(parse_cfg("polymer { m1#0 m2#0 }\nbond m1#0.0 m2#0.1\n", t), ParseError);
    CHECK_THROWS_AS(parse_cfg("polymer { nope#0 }\n", t), ParseError);
    CHECK_NOTHROW(parse_cfg("polymer { m1#0 m2#0 }\nbond m1#0.0 m2#0.0\n", t));
}
