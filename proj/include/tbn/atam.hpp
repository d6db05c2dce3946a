#pragma once

// Abstract Tile Assembly Model: simulation, the two binary-counter tile
// systems, and interpretation of assemblies as TBN configurations.

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "io.hpp"
#include "model.hpp"
#include "solver.hpp"

namespace tbn::atam {

enum Side { north = 0, east = 1, south = 2, west = 3 };

inline Side opposite(Side s) { return static_cast<Side>((s + 2) % 4); }
inline const char* side_name(Side s) {
    static const char* n[] = {"n", "e", "s", "w"};
    return n[s];
}

struct Glue {
    std::string label;
    int strength = 1;
    bool star = false;  // polarity of the domain this glue becomes

    bool binds(const Glue& o) const { return label == o.label && strength == o.strength && strength > 0; }
};

struct TileType {
    std::string name;
    std::array<std::optional<Glue>, 4> glues;
    int bit = -1;  // counter bit shown by the tile, -1 if none
};

struct TileSystem {
    std::vector<TileType> tiles;
    std::string seed;
    int temperature = 2;

    std::size_t index(const std::string& name) const {
        for (std::size_t i = 0; i < tiles.size(); ++i)
            if (tiles[i].name == name) return i;
        throw Error("unknown tile '" + name + "'");
    }

    void validate() const {
        if (temperature < 1) throw Error("temperature must be positive");
        std::map<std::string, int> strength;
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            if (!is_identifier(tiles[i].name)) throw Error("bad tile name '" + tiles[i].name + "'");
            for (std::size_t j = 0; j < i; ++j)
                if (tiles[j].name == tiles[i].name) throw Error("duplicate tile '" + tiles[i].name + "'");
            for (auto& g : tiles[i].glues) {
                if (!g) continue;
                if (!is_identifier(g->label)) throw Error("bad glue label '" + g->label + "'");
                if (g->strength < 0) throw Error("negative glue strength");
            }
        }
        index(seed);
    }
};

using Point = std::pair<int, int>;  // (x, y)

inline Point step(Point p, Side s) {
    static const int dx[] = {0, 1, 0, -1}, dy[] = {1, 0, -1, 0};
    return {p.first + dx[s], p.second + dy[s]};
}

struct Placement {
    Point at;
    std::size_t tile;
};

struct Assembly {
    TileSystem system;
    std::map<Point, std::size_t> tiles;
    std::vector<Placement> order;  // attachment order, seed first
    bool terminal = false;

    const TileType& at(Point p) const { return system.tiles[tiles.at(p)]; }

    // bounding box: min x, min y, max x, max y
    std::array<int, 4> bounds() const {
        std::array<int, 4> b{0, 0, 0, 0};
        bool first = true;
        for (auto& [p, _] : tiles) {
            if (first) b = {p.first, p.second, p.first, p.second};
            first = false;
            b[0] = std::min(b[0], p.first);
            b[1] = std::min(b[1], p.second);
            b[2] = std::max(b[2], p.first);
            b[3] = std::max(b[3], p.second);
        }
        return b;
    }

    bool is_rectangle(int width, int height) const {
        auto b = bounds();
        return b[2] - b[0] + 1 == width && b[3] - b[1] + 1 == height &&
               tiles.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
};

// strength a tile of type t would bind with at p
inline int binding_strength(const Assembly& a, const TileType& t, Point p) {
    int total = 0;
    for (int s = 0; s < 4; ++s) {
        auto side = static_cast<Side>(s);
        auto it = a.tiles.find(step(p, side));
        if (it == a.tiles.end() || !t.glues[s]) continue;
        auto& other = a.system.tiles[it->second].glues[opposite(side)];
        if (other && t.glues[s]->binds(*other)) total += t.glues[s]->strength;
    }
    return total;
}

struct Policy {
    enum class Kind { scan, random } kind = Kind::scan;
    std::uint64_t seed = 0;

    static Policy scan() { return {}; }
    static Policy random(std::uint64_t s) { return {Kind::random, s}; }
};

// attachable (site, tile) pairs, sites row-major (y then x), tiles in name order
inline std::vector<Placement> attachable(const Assembly& a) {
    std::vector<std::size_t> by_name(a.system.tiles.size());
    for (std::size_t i = 0; i < by_name.size(); ++i) by_name[i] = i;
    std::sort(by_name.begin(), by_name.end(),
              [&](auto x, auto y) { return a.system.tiles[x].name < a.system.tiles[y].name; });
    std::vector<Point> sites;
    for (auto& [p, _] : a.tiles)
        for (int s = 0; s < 4; ++s) {
            auto q = step(p, static_cast<Side>(s));
            if (!a.tiles.count(q)) sites.push_back(q);
        }
    std::sort(sites.begin(), sites.end(),
              [](Point u, Point v) { return std::tie(u.second, u.first) < std::tie(v.second, v.first); });
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    std::vector<Placement> out;
    for (auto q : sites)
        for (auto t : by_name)
            if (binding_strength(a, a.system.tiles[t], q) >= a.system.temperature) out.push_back({q, t});
    return out;
}

inline Assembly simulate(const TileSystem& sys, Policy policy = {}, std::size_t max_steps = 1000000) {
    sys.validate();
    Assembly a;
    a.system = sys;
    auto s = sys.index(sys.seed);
    a.tiles[{0, 0}] = s;
    a.order.push_back({{0, 0}, s});
    std::mt19937_64 rng(policy.seed);
    for (std::size_t n = 0; n < max_steps; ++n) {
        auto opts = attachable(a);
        if (opts.empty()) {
            a.terminal = true;
            return a;
        }
        std::size_t pick = 0;
        if (policy.kind == Policy::Kind::random)
            pick = std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng);
        a.tiles[opts[pick].at] = opts[pick].tile;
        a.order.push_back(opts[pick]);
    }
    a.terminal = attachable(a).empty();
    return a;
}

// Re-grows the recorded order from the seed, checking the threshold at each step.
inline bool replays(const Assembly& a) {
    if (a.order.empty() || a.order[0].at != Point{0, 0} || a.order[0].tile != a.system.index(a.system.seed))
        return false;
    Assembly b;
    b.system = a.system;
    b.tiles[{0, 0}] = a.order[0].tile;
    for (std::size_t i = 1; i < a.order.size(); ++i) {
        auto& pl = a.order[i];
        if (b.tiles.count(pl.at)) return false;
        if (binding_strength(b, b.system.tiles[pl.tile], pl.at) < b.system.temperature) return false;
        b.tiles[pl.at] = pl.tile;
    }
    return b.tiles == a.tiles;
}

// A site is ambiguous if two different tile types could attach there.
inline bool has_competing_attachments(const Assembly& a) {
    auto opts = attachable(a);
    for (std::size_t i = 1; i < opts.size(); ++i)
        if (opts[i].at == opts[i - 1].at) return true;
    return false;
}

inline std::string ascii(const Assembly& a) {
    auto b = a.bounds();
    std::string out;
    for (int y = b[3]; y >= b[1]; --y) {
        for (int x = b[0]; x <= b[2]; ++x) {
            auto it = a.tiles.find({x, y});
            if (it == a.tiles.end()) out += '.';
            else {
                int bit = a.system.tiles[it->second].bit;
                out += bit < 0 ? '#' : static_cast<char>('0' + bit);
            }
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// binary counters

enum class Variant { plain, indexed };

namespace detail {

struct CounterBuilder {
    int k;
    bool indexed;
    std::vector<TileType> tiles;

    // horizontal glue in row y, vertical glue between rows y and y+1
    std::string h(const std::string& l, int y) const { return indexed ? l + "_" + std::to_string(y) : l; }
    std::string v(const std::string& l, int y) const { return indexed ? l + "_" + std::to_string(y) : l; }

    void add(std::string name, int bit, std::optional<Glue> n, std::optional<Glue> e, std::optional<Glue> s,
             std::optional<Glue> w) {
        // output sides primary, input sides starred
        if (s) s->star = true;
        if (w) w->star = true;
        tiles.push_back({std::move(name), {n, e, s, w}, bit});
    }
};

inline Glue g1(std::string l) { return {std::move(l), 1, false}; }
inline Glue g2(std::string l) { return {std::move(l), 2, false}; }

}  // namespace detail

// Seed column holds 0. Copy columns grow top-down from a strength-2 glue on
// the previous column's top tile, copy the bits, set the bottom bit, and pass
// an "all ones so far" flag downward; their bottom tile starts the next carry
// column (bottom-up) or, when the column is all ones, the halt column.
inline TileSystem gen_counter(int k, Variant variant) {
    if (k < 1) throw Error("counter needs k >= 1");
    detail::CounterBuilder b{k, variant == Variant::indexed, {}};
    using detail::g1;
    using detail::g2;
    const int top = k - 1;
    auto row = [&](std::string base, int y) { return b.indexed || y == 0 || y == top ? base + std::to_string(y) : base; };
    // without row indices, bottom and top rows need their own bit labels once
    // middle rows exist
    bool edge_labels = !b.indexed && k > 2;
    auto bitg = [&](int bit, int y) {
        std::string l = !edge_labels ? "b" : y == 0 ? "z" : y == top ? "t" : "b";
        return g1(b.h(l + std::to_string(bit), y));
    };

    // seed column
    for (int y = 0; y < k; ++y) {
        std::optional<Glue> n, s;
        if (y < top) n = g2("s" + std::to_string(y));
        if (y > 0) s = g2("s" + std::to_string(y - 1));
        auto e = y == top ? g2(b.h("cs0", y)) : bitg(0, y);
        b.add("seed" + std::to_string(y), 0, n, e, s, std::nullopt);
    }

    // copy column; k = 1 is a single tile
    if (k == 1) {
        b.add("copy0", 1, std::nullopt, g2(b.h("halt", 0)), std::nullopt, g2(b.h("cs0", 0)));
    } else {
        for (int bit = 0; bit < 2; ++bit)
            b.add("copyT" + std::to_string(bit), bit, std::nullopt, bitg(bit, top),
                  g1(b.v(bit ? "d1" : "d", top - 1)), g2(b.h("cs" + std::to_string(bit), top)));
        for (int y = 1; y < top; ++y) {
            if (!b.indexed && y > 1) break;
            for (int f = 0; f < 2; ++f)
                for (int bit = 0; bit < 2; ++bit)
                    b.add(row("copyM", y) + "f" + std::to_string(f) + "b" + std::to_string(bit), bit,
                          g1(b.v(f ? "d1" : "d", y)), bitg(bit, y), g1(b.v(f && bit ? "d1" : "d", y - 1)),
                          bitg(bit, y));
        }
        for (int f = 0; f < 2; ++f)
            b.add("copyB" + std::string(f ? "1" : "0"), 1, g1(b.v(f ? "d1" : "d", 0)),
                  g2(b.h(f ? "halt" : "ks", 0)), std::nullopt, bitg(0, 0));
    }

    // carry column (never reached for k = 1)
    if (k > 1) {
        b.add("carryB", 0, g1(b.v("c", 0)), bitg(0, 0), std::nullopt, g2(b.h("ks", 0)));
        for (int y = 1; y < top; ++y) {
            if (!b.indexed && y > 1) break;
            for (int c = 0; c < 2; ++c)
                for (int bit = 0; bit < 2; ++bit) {
                    int out = bit ^ c;
                    b.add(row("carryM", y) + "c" + std::to_string(c) + "b" + std::to_string(bit), out,
                          g1(b.v(c && bit ? "c" : "n", y)), bitg(out, y), g1(b.v(c ? "c" : "n", y - 1)),
                          bitg(bit, y));
                }
        }
        // carry into an all-ones top bit never happens: all-ones columns halt
        for (int c = 0; c < 2; ++c)
            for (int bit = 0; bit < 2; ++bit) {
                if (c && bit) continue;
                int out = bit ^ c;
                b.add("carryTc" + std::to_string(c) + "b" + std::to_string(bit), out, std::nullopt,
                      g2(b.h("cs" + std::to_string(out), top)), g1(b.v(c ? "c" : "n", top - 1)), bitg(bit, top));
            }
    }

    // halt column, grown bottom-up with no east glues
    if (k == 1) {
        b.add("halt0", -1, std::nullopt, std::nullopt, std::nullopt, g2(b.h("halt", 0)));
    } else {
        b.add("haltB", -1, g1(b.v("u", 0)), std::nullopt, std::nullopt, g2(b.h("halt", 0)));
        for (int y = 1; y < top; ++y) {
            if (!b.indexed && y > 1) break;
            b.add(row("haltM", y), -1, g1(b.v("u", y)), std::nullopt, g1(b.v("u", y - 1)), bitg(1, y));
        }
        b.add("haltT", -1, std::nullopt, std::nullopt, g1(b.v("u", top - 1)), bitg(1, top));
    }

    TileSystem sys{std::move(b.tiles), "seed0", 2};
    sys.validate();
    return sys;
}

// bits of column x, bottom row first; empty if any tile shows no bit
inline std::vector<int> column_bits(const Assembly& a, int x) {
    auto b = a.bounds();
    std::vector<int> bits;
    for (int y = b[1]; y <= b[3]; ++y) {
        auto it = a.tiles.find({x, y});
        if (it == a.tiles.end() || a.system.tiles[it->second].bit < 0) return {};
        bits.push_back(a.system.tiles[it->second].bit);
    }
    return bits;
}

// ---------------------------------------------------------------------------
// interpretation

struct Interpretation {
    Tbn tbn;
    Configuration config;
    std::map<Point, std::size_t> instance;  // grid point -> instance index
};

inline std::vector<Domain> tile_domains(const TileType& t, bool strength_as_copies) {
    std::vector<Domain> ds;
    for (auto& g : t.glues) {
        if (!g) continue;
        int copies = strength_as_copies ? std::max(1, g->strength) : 1;
        for (int c = 0; c < copies; ++c) ds.push_back({g->label, g->star});
    }
    return ds;
}

// Monomer per tile type present, instance per placement, bond per matched
// adjacent glue pair (strength-2 glues become two bonds only with copies on).
inline Interpretation atam_to_tbn(const Assembly& a, bool strength_as_copies = false) {
    std::map<std::size_t, std::size_t> type_of;  // tile index -> position in `used`
    std::vector<std::size_t> used;
    for (auto& [p, t] : a.tiles)
        if (!type_of.count(t)) {
            type_of[t] = used.size();
            used.push_back(t);
        }
    std::vector<MonomerType> ms;
    for (auto t : used) {
        auto ds = tile_domains(a.system.tiles[t], strength_as_copies);
        if (ds.empty()) throw Error("tile '" + a.system.tiles[t].name + "' has no glues");
        ms.emplace_back(a.system.tiles[t].name, ds);
    }
    auto tp = std::make_shared<const Tbn>(Tbn(ms));
    Interpretation out{*tp, Configuration(), {}};
    std::vector<std::size_t> inst;
    for (auto& [p, t] : a.tiles) {
        out.instance[p] = inst.size();
        inst.push_back(tp->monomer_index(a.system.tiles[t].name));
    }
    // slot of (side, copy) on a tile: the n-th occurrence of the domain in sorted order
    auto slot = [&](const TileType& t, Side side, int copy) {
        auto& g = *t.glues[side];
        Domain d{g.label, g.star};
        int before = copy;
        for (int s = 0; s < side; ++s) {
            auto& o = t.glues[s];
            if (o && o->label == g.label && o->star == g.star)
                before += strength_as_copies ? std::max(1, o->strength) : 1;
        }
        auto& ds = tp->monomer(tp->monomer_index(t.name)).domains();
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds[i] == d && before-- == 0) return i;
        throw Error("internal: slot lookup");
    };
    std::vector<Bond> bonds;
    for (auto& [p, t] : a.tiles)
        for (Side side : {east, north}) {
            auto q = step(p, side);
            auto it = a.tiles.find(q);
            if (it == a.tiles.end()) continue;
            auto& ta = a.system.tiles[t];
            auto& tb = a.system.tiles[it->second];
            auto& ga = ta.glues[side];
            auto& gb = tb.glues[opposite(side)];
            if (!ga || !gb || !ga->binds(*gb)) continue;
            if (ga->star == gb->star)
                throw Error("glues '" + ga->label + "' at adjacent tiles have the same polarity");
            int copies = strength_as_copies ? std::max(1, ga->strength) : 1;
            for (int c = 0; c < copies; ++c)
                bonds.push_back({{out.instance[p], slot(ta, side, c)}, {out.instance[q], slot(tb, opposite(side), c)}});
        }
    out.config = Configuration(tp, inst, bonds);
    return out;
}

struct CounterReport {
    int k = 0;
    Variant variant = Variant::plain;
    bool terminal = false;
    bool rectangle = false;
    bool saturated = false;
    bool stable = false;
    std::int64_t stable_entropy = 0;
    std::optional<Configuration> witness;  // saturated, S >= 2, when unstable
    bool self_saturated_monomer = false;    // witness has a monomer bound only to itself
};

inline bool has_self_saturated_monomer(const Configuration& c) {
    auto comps = c.components();
    std::vector<std::size_t> size(c.size(), 0);
    for (auto x : comps) ++size[x];
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (size[comps[i]] != 1) continue;
        std::size_t bound = 0;
        for (auto& b : c.bonds())
            if (b.a.monomer == i) bound += 2;
        if (bound == c.type_of(i).size() && bound > 0) return true;
    }
    return false;
}

inline CounterReport check_counter_stability(int k, Variant v, int max_k = 3) {
    if (k > max_k) throw Error("counter k=" + std::to_string(k) + " is over the solver guard (" + std::to_string(max_k) + ")");
    CounterReport r;
    r.k = k;
    r.variant = v;
    auto a = simulate(gen_counter(k, v));
    r.terminal = a.terminal;
    r.rectangle = a.is_rectangle((1 << k) + 1, k);
    auto in = atam_to_tbn(a);
    r.saturated = is_saturated(in.config);
    auto c = in.config.collection();
    auto s = stable_entropy(in.tbn, c);
    r.stable_entropy = s.entropy;
    r.stable = r.saturated && s.entropy == config_metrics(in.config).entropy;
    if (!r.stable && s.entropy >= 2) {
        r.witness = s.config;
        r.self_saturated_monomer = has_self_saturated_monomer(s.config);
    }
    return r;
}

// ---------------------------------------------------------------------------
// tile system JSON: {"tiles": [{"name", "bit", "n"|"e"|"s"|"w": {"label", "strength", "star"}}], "seed", "temperature"}

inline nlohmann::json system_to_json(const TileSystem& sys) {
    nlohmann::json j;
    j["seed"] = sys.seed;
    j["temperature"] = sys.temperature;
    j["tiles"] = nlohmann::json::array();
    for (auto& t : sys.tiles) {
        nlohmann::json jt{{"name", t.name}};
        if (t.bit >= 0) jt["bit"] = t.bit;
        for (int s = 0; s < 4; ++s)
            if (auto& g = t.glues[s]) jt[side_name(static_cast<Side>(s))] = {{"label", g->label}, {"strength", g->strength}, {"star", g->star}};
        j["tiles"].push_back(jt);
    }
    return j;
}

inline TileSystem system_from_json(const nlohmann::json& j) {
    try {
        TileSystem sys;
        for (auto& jt : j.at("tiles")) {
            TileType t;
            t.name = jt.at("name").get<std::string>();
            t.bit = jt.value("bit", -1);
            for (int s = 0; s < 4; ++s) {
                auto key = side_name(static_cast<Side>(s));
                if (!jt.contains(key)) continue;
                auto& g = jt[key];
                t.glues[s] = Glue{g.at("label").get<std::string>(), g.value("strength", 1), g.value("star", s >= 2)};
            }
            sys.tiles.push_back(std::move(t));
        }
        sys.seed = j.at("seed").get<std::string>();
        sys.temperature = j.value("temperature", 2);
        sys.validate();
        return sys;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad tile system JSON: ") + e.what());
    }
}

inline nlohmann::json assembly_to_json(const Assembly& a) {
    nlohmann::json j;
    j["terminal"] = a.terminal;
    j["tiles"] = nlohmann::json::array();
    for (auto& pl : a.order) j["tiles"].push_back({{"x", pl.at.first}, {"y", pl.at.second}, {"tile", a.system.tiles[pl.tile].name}});
    return j;
}

}  // namespace tbn::atam
