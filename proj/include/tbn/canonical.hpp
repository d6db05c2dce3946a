#pragma once

// Canonical keys for configurations up to permutation of identical monomer
// instances and identical slots. A configuration is viewed as a multigraph on
// instances (colored by type) with edges primary-holder -> star-holder labeled
// by domain. Trees use AHU encoding; other components use
// individualization/refinement with twin pruning.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "model.hpp"

namespace tbn {
namespace detail {

struct LGraph {
    std::vector<int> color;
    // neighbour -> (label -> multiplicity); label = 2*domain + (0 outgoing | 1 incoming)
    std::vector<std::map<int, std::map<int, int>>> adj;
};

inline LGraph label_graph(const Configuration& a, const std::vector<std::size_t>& verts) {
    std::vector<int> pos(a.size(), -1);
    for (std::size_t k = 0; k < verts.size(); ++k) pos[verts[k]] = static_cast<int>(k);
    LGraph g;
    g.adj.resize(verts.size());
    for (auto v : verts) g.color.push_back(static_cast<int>(a.instances()[v]));
    for (auto& b : a.bonds()) {
        auto u = b.a, v = b.b;
        if (a.domain_at(u).starred) std::swap(u, v);
        int d = static_cast<int>(*a.tbn().find_domain(a.domain_at(u).name));
        int pu = pos[u.monomer], pv = pos[v.monomer];
        if (pu < 0 || pv < 0) continue;
        g.adj[pu][pv][2 * d] += 1;
        g.adj[pv][pu][2 * d + 1] += 1;
    }
    return g;
}

inline std::string edge_str(const std::map<int, int>& labels) {
    std::string s;
    for (auto& [l, m] : labels) s += std::to_string(l) + "x" + std::to_string(m) + ",";
    return s;
}

inline std::optional<std::string> tree_key(const LGraph& g) {
    int n = static_cast<int>(g.color.size());
    int edges = 0;
    for (int v = 0; v < n; ++v)
        for (auto& [w, _] : g.adj[v])
            if (w > v) ++edges;
    if (edges != n - 1) return std::nullopt;
    // centers by leaf stripping
    std::vector<int> deg(n, 0);
    for (int v = 0; v < n; ++v)
        for (auto& [w, _] : g.adj[v])
            if (w != v) ++deg[v];
    std::vector<int> layer, removed(n, 0);
    for (int v = 0; v < n; ++v)
        if (deg[v] <= 1) layer.push_back(v);
    int left = n;
    while (left > 2) {
        std::vector<int> next;
        for (int v : layer) {
            removed[v] = 1;
            --left;
            for (auto& [w, _] : g.adj[v])
                if (w != v && !removed[w] && --deg[w] == 1) next.push_back(w);
        }
        layer = next;
    }
    std::vector<int> centers;
    for (int v = 0; v < n; ++v)
        if (!removed[v]) centers.push_back(v);
    std::function<std::string(int, int)> enc = [&](int v, int parent) {
        std::vector<std::string> kids;
        std::string loops;
        for (auto& [w, labels] : g.adj[v]) {
            if (w == v) loops = edge_str(labels);
            else if (w != parent) kids.push_back(edge_str(labels) + enc(w, v));
        }
        std::sort(kids.begin(), kids.end());
        std::string s = "(" + std::to_string(g.color[v]) + "@" + loops;
        for (auto& k : kids) s += k;
        return s + ")";
    };
    std::string best;
    for (int c : centers) {
        auto k = enc(c, -1);
        if (best.empty() || k < best) best = k;
    }
    return "T" + best;
}

inline std::vector<int> refine(const LGraph& g, std::vector<int> col) {
    int n = static_cast<int>(col.size());
    std::size_t classes = 0;
    while (true) {
        using Sig = std::pair<int, std::vector<std::tuple<int, int, int>>>;
        std::vector<Sig> sig(n);
        for (int v = 0; v < n; ++v) {
            sig[v].first = col[v];
            for (auto& [w, labels] : g.adj[v])
                for (auto& [l, m] : labels) sig[v].second.emplace_back(l, w == v ? -1 : col[w], m);
            std::sort(sig[v].second.begin(), sig[v].second.end());
        }
        auto uniq = sig;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (int v = 0; v < n; ++v)
            col[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
        if (uniq.size() == classes) break;
        classes = uniq.size();
    }
    return col;
}

inline bool twins(const LGraph& g, int u, int v) {
    auto& au = g.adj[u];
    auto& av = g.adj[v];
    auto get = [](const std::map<int, std::map<int, int>>& a, int w) -> const std::map<int, int>* {
        auto it = a.find(w);
        return it == a.end() ? nullptr : &it->second;
    };
    auto same = [](const std::map<int, int>* x, const std::map<int, int>* y) {
        if (!x || !y) return !x && !y;
        return *x == *y;
    };
    if (!same(get(au, u), get(av, v))) return false;
    if (!same(get(au, v), get(av, u))) return false;
    for (auto& [w, _] : au)
        if (w != u && w != v && !same(get(au, w), get(av, w))) return false;
    for (auto& [w, _] : av)
        if (w != u && w != v && !get(au, w)) return false;
    return true;
}

inline std::string certificate(const LGraph& g, const std::vector<int>& col) {
    int n = static_cast<int>(col.size());
    std::vector<int> at(n);
    for (int v = 0; v < n; ++v) at[col[v]] = v;
    std::string s;
    for (int p = 0; p < n; ++p) s += std::to_string(g.color[at[p]]) + " ";
    std::vector<std::tuple<int, int, int, int>> es;
    for (int v = 0; v < n; ++v)
        for (auto& [w, labels] : g.adj[v])
            for (auto& [l, m] : labels)
                if (l % 2 == 0) es.emplace_back(col[v], col[w], l, m);
    std::sort(es.begin(), es.end());
    s += ";";
    for (auto& [x, y, l, m] : es)
        s += std::to_string(x) + "-" + std::to_string(l) + "-" + std::to_string(y) + "x" + std::to_string(m) + " ";
    return s;
}

inline void ir_search(const LGraph& g, std::vector<int> col, std::string& best) {
    col = refine(g, col);
    int n = static_cast<int>(col.size());
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < n; ++v) cells[col[v]].push_back(v);
    const std::vector<int>* target = nullptr;
    for (auto& [c, members] : cells)
        if (members.size() > 1) {
            target = &members;
            break;
        }
    if (!target) {
        auto cert = certificate(g, col);
        if (best.empty() || cert < best) best = cert;
        return;
    }
    std::vector<int> reps;
    for (int v : *target) {
        bool dup = false;
        for (int r : reps)
            if (twins(g, r, v)) {
                dup = true;
                break;
            }
        if (!dup) reps.push_back(v);
    }
    for (int v : reps) {
        // individualize v: it gets a fresh colour just below its cell-mates
        std::vector<int> c2(n);
        for (int w = 0; w < n; ++w) c2[w] = 2 * col[w] + ((w == v) ? 0 : 1);
        ir_search(g, c2, best);
    }
}

inline std::string component_key(const LGraph& g) {
    if (auto t = tree_key(g)) return *t;
    std::string best;
    ir_search(g, g.color, best);
    return "G" + best;
}

}  // namespace detail

inline std::string canonical_form(const Configuration& a) {
    auto comp = a.components();
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < comp.size(); ++i) groups[comp[i]].push_back(i);
    std::vector<std::string> keys;
    for (auto& [c, verts] : groups) keys.push_back(detail::component_key(detail::label_graph(a, verts)));
    std::sort(keys.begin(), keys.end());
    std::string s;
    for (auto& k : keys) s += k + "|";
    return s;
}

}  // namespace tbn
