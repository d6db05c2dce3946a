#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "model.hpp"

namespace tbn {

using BigInt = boost::multiprecision::cpp_int;

struct Generated {
    Tbn tbn;
    Collection counts;
};

namespace detail {

struct Builder {
    std::vector<std::pair<MonomerType, std::int64_t>> items;

    void add(const std::string& name, const std::vector<std::string>& doms, std::int64_t count = 1) {
        std::vector<Domain> ds;
        for (auto& d : doms) ds.push_back(Domain::parse(d));
        items.emplace_back(MonomerType(name, ds), count);
    }
    Generated build() const {
        std::vector<MonomerType> types;
        for (auto& [m, n] : items) types.push_back(m);
        Tbn t(types);
        Counts c(t.num_monomers(), 0);
        for (auto& [m, n] : items) c[t.monomer_index(m.name())] += n;
        return {t, Collection(c)};
    }
};

inline std::vector<std::string> rep(const std::string& d, std::int64_t n) { return std::vector<std::string>(n, d); }

}  // namespace detail

inline Generated gen_fig1() {
    detail::Builder b;
    b.add("m1", {"a", "b"});
    b.add("m2", {"a*", "b*"});
    b.add("m3", {"a"});
    b.add("m4", {"b"});
    return b.build();
}

// Two-input AND gate with inputs i1={a,b}, i2={c,d} and output o={e,f}.
// k pins o. x, y and z bind the inputs; y and z also carry e and f, so once
// both inputs tie them into one polymer, k can move onto it and leave o free.
inline Generated gen_and_gate_basic(bool input1, bool input2) {
    detail::Builder b;
    if (input1) b.add("i1", {"a", "b"});
    if (input2) b.add("i2", {"c", "d"});
    b.add("o", {"e", "f"});
    b.add("k", {"e*", "f*"});
    b.add("x", {"a*", "d*"});
    b.add("y", {"b*", "e"});
    b.add("z", {"c*", "f"});
    return b.build();
}

// ---------------------------------------------------------------------------
// translator cascade: layer i has n x {x_i*, x_{i+1}} (L<i>) and n x {x_i} (X<i>)

inline std::string xname(std::int64_t i) { return "x" + std::to_string(i); }

inline Generated gen_translator(std::int64_t n, std::int64_t k, bool input) {
    if (n < 1 || k < 1) throw Error("translator needs n >= 1 and k >= 1");
    detail::Builder b;
    for (std::int64_t i = 1; i <= k; ++i) {
        b.add("L" + std::to_string(i), {xname(i) + "*", xname(i + 1)}, n);
        b.add("X" + std::to_string(i), {xname(i)}, n);
    }
    b.add("TERM", detail::rep(xname(k + 1), n));
    b.add("TERMC", detail::rep(xname(k + 1) + "*", n));
    if (input) b.add("IN", detail::rep(xname(1), n));
    return b.build();
}

// output 0: every L<i> paired with an X<i>, terminator bound to its complement.
// output 1: TERMC holds all of layer k (each with its X<k>), terminator free.
inline Configuration intended_translator_config(std::int64_t n, std::int64_t k, int output) {
    auto g = gen_translator(n, k, false);
    auto tp = std::make_shared<const Tbn>(g.tbn);
    auto& t = *tp;
    std::vector<std::size_t> inst;
    std::vector<Bond> bonds;
    auto add = [&](const std::string& name) {
        inst.push_back(t.monomer_index(name));
        return inst.size() - 1;
    };
    auto slot_of = [&](std::size_t i, const Domain& d, std::size_t nth = 0) {
        auto& ds = t.monomer(inst[i]).domains();
        for (std::size_t s = 0; s < ds.size(); ++s)
            if (ds[s] == d && nth-- == 0) return s;
        throw Error("internal: slot not found");
    };
    std::vector<std::vector<std::size_t>> L(k + 1);
    for (std::int64_t i = 1; i <= k; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            auto l = add("L" + std::to_string(i));
            auto x = add("X" + std::to_string(i));
            L[i].push_back(l);
            bonds.push_back({{l, slot_of(l, {xname(i), true})}, {x, slot_of(x, {xname(i), false})}});
        }
    auto term = add("TERM");
    auto comp = add("TERMC");
    for (std::int64_t j = 0; j < n; ++j) {
        Domain star{xname(k + 1), true};
        if (output == 0)
            bonds.push_back({{term, slot_of(term, {xname(k + 1), false}, j)}, {comp, slot_of(comp, star, j)}});
        else
            bonds.push_back({{L[k][j], slot_of(L[k][j], {xname(k + 1), false})}, {comp, slot_of(comp, star, j)}});
    }
    return Configuration(tp, std::move(inst), std::move(bonds));
}

// ---------------------------------------------------------------------------
// AND trees. Gates are numbered heap-style (root 1, children 2g and 2g+1);
// gate g reads signals s<2g>, s<2g+1> and writes s<g>. Leaves are s<2^k..2^{k+1}-1>.

struct TreeSpec {
    int k = 1;
    std::int64_t n = 2;
    std::vector<bool> inputs;  // size 2^k, leaf order left to right
    bool or_merge = false;     // drop the root AND: gates 2 and 3 both write s1

    static TreeSpec all_present(int k, std::int64_t n) { return {k, n, std::vector<bool>(std::size_t{1} << k, true)}; }
};

inline std::string sname(std::int64_t g) { return "s" + std::to_string(g); }

inline void check_spec(const TreeSpec& s) {
    if (s.k < 1 || s.k > 16 || s.n < 1) throw Error("tree spec needs 1 <= k <= 16 and n >= 1");
    if (s.inputs.size() != (std::size_t{1} << s.k)) throw Error("tree spec needs 2^k input flags");
    if (s.or_merge && s.k < 2) throw Error("or_merge needs depth >= 2");
}

inline std::int64_t gate_output(const TreeSpec& s, std::int64_t g) { return (s.or_merge && g <= 3) ? 1 : g; }

namespace detail {

inline void add_gate(Builder& b, const TreeSpec& s, std::int64_t g) {
    auto n = s.n;
    auto gs = std::to_string(g);
    auto in1 = sname(2 * g) + "*", in2 = sname(2 * g + 1) + "*", out = sname(gate_output(s, g));
    auto a = "a" + gs, bb = "b" + gs;
    if (n == 1) {
        b.add("G" + gs + "_1", {in1, in2, out, a, bb});
    } else {
        b.add("G" + gs + "_1", {in1, in2, out, a});
        b.add("G" + gs + "_2", {in1, in2, out, bb});
        if (n > 2) b.add("G" + gs + "_3", {in1, in2, out}, n - 2);
    }
    b.add("P" + gs, {sname(2 * g), sname(2 * g + 1)}, n);
    b.add("H" + gs + "ab", {a + "*", bb + "*"});
    b.add("H" + gs + "a", {a});
    b.add("H" + gs + "b", {bb});
}

}  // namespace detail

inline Generated gen_and_tree(const TreeSpec& s) {
    check_spec(s);
    detail::Builder b;
    std::int64_t leaves = std::int64_t{1} << s.k;
    for (std::int64_t g = s.or_merge ? 2 : 1; g < leaves; ++g) detail::add_gate(b, s, g);
    for (std::int64_t j = 0; j < leaves; ++j)
        if (s.inputs[j]) b.add("IN" + std::to_string(j + 1), detail::rep(sname(leaves + j), s.n));
    b.add("TERM", detail::rep(sname(1), s.n));
    b.add("TERMC", detail::rep(sname(1) + "*", s.n));
    return b.build();
}

// Gates from the first absent leaf (or leaf 1) up to the root.
inline std::vector<std::int64_t> leak_path(const TreeSpec& s) {
    check_spec(s);
    std::int64_t leaves = std::int64_t{1} << s.k, leaf = 0;
    for (std::int64_t j = 0; j < leaves; ++j)
        if (!s.inputs[j]) {
            leaf = j;
            break;
        }
    std::vector<std::int64_t> path;
    for (std::int64_t g = (leaves + leaf) / 2; g >= 1; g /= 2)
        if (!(s.or_merge && g == 1)) path.push_back(g);
    return path;
}

// Leak-path gates in their untriggered state (each G paired with a P, the
// three helpers together) plus the terminator bound to its complement.
inline Configuration untriggered_gate_config(const TreeSpec& s) {
    auto g = gen_and_tree(s);
    auto tp = std::make_shared<const Tbn>(g.tbn);
    auto& t = *tp;
    std::vector<std::size_t> inst;
    std::vector<Bond> bonds;
    auto add = [&](const std::string& name) {
        inst.push_back(t.monomer_index(name));
        return inst.size() - 1;
    };
    auto slot = [&](std::size_t i, const Domain& d, std::size_t nth = 0) {
        auto& ds = t.monomer(inst[i]).domains();
        for (std::size_t x = 0; x < ds.size(); ++x)
            if (ds[x] == d && nth-- == 0) return x;
        throw Error("internal: slot not found");
    };
    for (auto gate : leak_path(s)) {
        auto gs = std::to_string(gate);
        for (std::int64_t j = 0; j < s.n; ++j) {
            std::string gname = "G" + gs + "_" + std::to_string(s.n == 1 ? 1 : std::min<std::int64_t>(j + 1, 3));
            auto gi = add(gname);
            auto pi = add("P" + gs);
            for (auto in : {2 * gate, 2 * gate + 1})
                bonds.push_back({{gi, slot(gi, {sname(in), true})}, {pi, slot(pi, {sname(in), false})}});
        }
        auto hab = add("H" + gs + "ab"), ha = add("H" + gs + "a"), hb = add("H" + gs + "b");
        bonds.push_back({{hab, slot(hab, {"a" + gs, true})}, {ha, 0}});
        bonds.push_back({{hab, slot(hab, {"b" + gs, true})}, {hb, 0}});
    }
    auto term = add("TERM"), comp = add("TERMC");
    for (std::int64_t j = 0; j < s.n; ++j) bonds.push_back({{term, static_cast<std::size_t>(j)}, {comp, static_cast<std::size_t>(j)}});
    return Configuration(tp, std::move(inst), std::move(bonds));
}

// ---------------------------------------------------------------------------
// exponential tree polymer: m1 = {k d1}, m_j = {d_{j-1}*, k d_j}, m_n = {d_{n-1}*}, c(m_j) = k^{j-1}

inline Generated gen_tree_polymer(std::int64_t n, std::int64_t k) {
    if (n < 2 || k < 1) throw Error("tree polymer needs n >= 2 and k >= 1");
    detail::Builder b;
    std::int64_t count = 1;
    for (std::int64_t j = 1; j <= n; ++j) {
        std::vector<std::string> ds;
        if (j > 1) ds.push_back("d" + std::to_string(j - 1) + "*");
        if (j < n)
            for (std::int64_t x = 0; x < k; ++x) ds.push_back("d" + std::to_string(j));
        b.add("m" + std::to_string(j), ds, count);
        if (j < n) {
            if (count > (std::int64_t{1} << 40) / k) throw Error("tree polymer too large");
            count *= k;
        }
    }
    return b.build();
}

inline BigInt tree_polymer_size(std::int64_t n, std::int64_t k) {
    if (k == 1) return BigInt(n);
    BigInt p = 1;
    for (std::int64_t i = 0; i < n; ++i) p *= k;
    return (p - 1) / (k - 1);
}

// ---------------------------------------------------------------------------
// bounds

inline BigInt big_pow(BigInt b, std::int64_t e) {
    BigInt r = 1;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline BigInt polymer_size_bound(std::int64_t d, std::int64_t m, std::int64_t a) {
    if (d < 1 || m < 1 || a < 1) throw Error("bound needs d, m, a >= 1");
    return 2 * BigInt(m + d) * big_pow(BigInt(a) * d, 2 * d + 3);
}

inline BigInt farkas_K(std::int64_t a, std::int64_t d) {
    if (a < 1 || d < 1) throw Error("K needs a, d >= 1");
    return big_pow(BigInt(a) * d, d + 1);
}

inline BigInt acyclic_bound_sum(std::int64_t d, std::int64_t l) {
    BigInt s = 0;
    for (std::int64_t j = 1; j <= d - 1; ++j) s += big_pow(BigInt(l - 1), j - 1);
    return 1 + BigInt(l) * s;
}

inline BigInt acyclic_bound_closed(std::int64_t d, std::int64_t l) {
    if (l < 3) throw Error("closed form needs l >= 3");
    BigInt num = big_pow(BigInt(l - 1), d) - l + 1;
    return 1 + BigInt(l) * num / (BigInt(l) * l - 3 * l + 2);
}

inline BigInt acyclic_bound(std::int64_t d, std::int64_t l) {
    if (d < 1 || l < 1) throw Error("acyclic bound needs d, l >= 1");
    return l >= 3 ? acyclic_bound_closed(d, l) : acyclic_bound_sum(d, l);
}

// Saturated path over names d1..dd whose 2d+1 bonds read d1 d2 .. dd d1 d2 ..,
// each with the primary side on the left. Repeats an oriented domain.
inline Configuration rewire_chain_config(std::int64_t d) {
    if (d < 1) throw Error("rewire chain needs d >= 1");
    auto name = [&](std::int64_t e) { return "d" + std::to_string(e % d + 1); };
    std::int64_t edges = 2 * d + 1;
    detail::Builder b;
    std::vector<std::string> type_of;
    std::map<std::vector<std::string>, std::string> seen;
    for (std::int64_t i = 0; i <= edges; ++i) {
        std::vector<std::string> ds;
        if (i > 0) ds.push_back(name(i - 1) + "*");
        if (i < edges) ds.push_back(name(i));
        auto key = ds;
        std::sort(key.begin(), key.end());
        auto it = seen.find(key);
        if (it == seen.end()) {
            it = seen.emplace(key, "c" + std::to_string(seen.size())).first;
            b.add(it->second, ds, 0);
        }
        for (auto& [m, n] : b.items)
            if (m.name() == it->second) ++n;
        type_of.push_back(it->second);
    }
    auto g = b.build();
    auto tp = std::make_shared<const Tbn>(g.tbn);
    std::vector<std::size_t> inst;
    for (auto& t : type_of) inst.push_back(tp->monomer_index(t));
    auto slot = [&](std::size_t i, const Domain& dom) {
        auto& ds = tp->monomer(inst[i]).domains();
        return static_cast<std::size_t>(std::find(ds.begin(), ds.end(), dom) - ds.begin());
    };
    std::vector<Bond> bonds;
    for (std::int64_t e = 0; e < edges; ++e) {
        auto l = static_cast<std::size_t>(e), r = l + 1;
        bonds.push_back({{l, slot(l, {name(e), false})}, {r, slot(r, {name(e), true})}});
    }
    return Configuration(tp, std::move(inst), std::move(bonds));
}

// ---------------------------------------------------------------------------
// Exchange partners of two bonds of the same domain lying on one path with
// the same orientation; in a tree this cuts the path and raises S.

inline std::optional<Configuration> tree_rewire_split(const Configuration& a) {
    auto m = config_metrics(a);
    if (!m.saturated) throw Error("tree_rewire_split needs a saturated configuration");
    if (m.enthalpy != m.size - m.entropy) throw Error("tree_rewire_split needs an acyclic binding graph");
    auto& bonds = a.bonds();
    for (std::size_t x = 0; x < bonds.size(); ++x)
        for (std::size_t y = x + 1; y < bonds.size(); ++y) {
            if (a.domain_at(bonds[x].a).name != a.domain_at(bonds[y].a).name) continue;
            auto px = bonds[x].a, sx = bonds[x].b, py = bonds[y].a, sy = bonds[y].b;
            if (a.domain_at(px).starred) std::swap(px, sx);
            if (a.domain_at(py).starred) std::swap(py, sy);
            auto nb = bonds;
            nb[x] = {px, sy};
            nb[y] = {py, sx};
            Configuration b(a.tbn_ptr(), a.instances(), nb);
            if (config_metrics(b).entropy > m.entropy) return b;
        }
    return std::nullopt;
}

}  // namespace tbn
