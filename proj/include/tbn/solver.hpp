#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "model.hpp"
#include "partition.hpp"

namespace tbn {

struct PartitionWitness {
    std::vector<Collection> parts;
};

struct StableResult {
    std::int64_t entropy = 0;
    PartitionWitness witness;
    Configuration config;
};

namespace detail {

using Vec = PartitionProblem::Vec;

// Spread class-level parts over concrete monomer types. Types listed in
// `first` are handed out before the others of their class.
inline std::vector<Collection> to_collections(const Tbn& t, const Collection& c, const PartitionProblem& P,
                                              const std::vector<Vec>& parts) {
    std::vector<Counts> left(P.classes());
    for (std::size_t k = 0; k < P.classes(); ++k)
        for (auto j : P.types_of(k)) left[k].push_back(c.counts[j]);
    std::vector<Collection> out;
    for (auto& p : parts) {
        Counts cc(t.num_monomers(), 0);
        for (std::size_t k = 0; k < p.size(); ++k) {
            std::int64_t need = p[k];
            auto& types = P.types_of(k);
            for (std::size_t x = 0; x < types.size() && need > 0; ++x) {
                auto take = std::min(need, left[k][x]);
                cc[types[x]] += take;
                left[k][x] -= take;
                need -= take;
            }
        }
        out.emplace_back(std::move(cc));
    }
    return out;
}

inline std::vector<std::size_t> expand(const Collection& c) {
    std::vector<std::size_t> inst;
    for (std::size_t j = 0; j < c.counts.size(); ++j)
        for (std::int64_t k = 0; k < c.counts[j]; ++k) inst.push_back(j);
    return inst;
}

// Saturated matching on one part, preferring bonds across current components.
inline Configuration realize_greedy(std::shared_ptr<const Tbn> t, const Collection& part) {
    auto inst = expand(part);
    std::vector<std::size_t> parent(inst.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<Bond> bonds;
    for (auto& name : t->domains()) {
        std::vector<SlotRef> prim, star;
        for (std::size_t i = 0; i < inst.size(); ++i) {
            auto& ds = t->monomer(inst[i]).domains();
            for (std::size_t s = 0; s < ds.size(); ++s)
                if (ds[s].name == name) (ds[s].starred ? star : prim).push_back({i, s});
        }
        auto* few = &prim;
        auto* many = &star;
        if (star.size() < prim.size()) std::swap(few, many);
        std::vector<char> used(many->size(), 0);
        for (auto& s : *few) {
            std::size_t pick = SIZE_MAX;
            for (std::size_t x = 0; x < many->size(); ++x) {
                if (used[x]) continue;
                if (pick == SIZE_MAX) pick = x;
                if (find((*many)[x].monomer) != find(s.monomer)) {
                    pick = x;
                    break;
                }
            }
            used[pick] = 1;
            bonds.push_back({s, (*many)[pick]});
            parent[find(s.monomer)] = find((*many)[pick].monomer);
        }
    }
    return Configuration(std::move(t), std::move(inst), std::move(bonds));
}

// Search for a saturated matching of `part` whose binding graph is connected.
inline std::optional<Configuration> realize_connected(std::shared_ptr<const Tbn> t, const Collection& part,
                                                      std::size_t budget = 2000000) {
    auto inst = expand(part);
    if (inst.size() == 1) return realize_greedy(t, part);
    struct Need {
        std::size_t inst, slot;
        std::string name;
        bool starred;
    };
    // per domain: the side with fewer instances is fully bound
    std::vector<Need> needs;
    std::map<std::pair<std::size_t, std::string>, std::vector<std::size_t>> free_slots;  // (inst, domain str) -> slots
    for (auto& name : t->domains()) {
        std::int64_t np = 0, ns = 0;
        for (auto j : inst)
            for (auto& d : t->monomer(j).domains())
                if (d.name == name) (d.starred ? ns : np) += 1;
        bool few_star = ns <= np;
        for (std::size_t i = 0; i < inst.size(); ++i) {
            auto& ds = t->monomer(inst[i]).domains();
            for (std::size_t s = 0; s < ds.size(); ++s) {
                if (ds[s].name != name) continue;
                if (ds[s].starred == few_star) needs.push_back({i, s, name, ds[s].starred});
                else free_slots[{i, ds[s].str()}].push_back(s);
            }
        }
    }
    std::vector<std::size_t> parent(inst.size());
    std::vector<Bond> bonds;
    std::size_t nodes = 0;
    auto components = [&]() {
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        std::size_t comps = inst.size();
        for (auto& b : bonds) {
            auto a = find(b.a.monomer), c = find(b.b.monomer);
            if (a != c) {
                parent[a] = c;
                --comps;
            }
        }
        return comps;
    };
    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t k, std::size_t min_target) -> bool {
        if (++nodes > budget) throw Error("connected realization search exceeded its budget");
        if (components() - 1 > needs.size() - k) return false;
        if (k == needs.size()) return components() == 1;
        auto& nd = needs[k];
        std::string want = Domain{nd.name, !nd.starred}.str();
        bool same_group = k > 0 && needs[k - 1].inst == nd.inst && needs[k - 1].name == nd.name;
        for (std::size_t v = same_group ? min_target : 0; v < inst.size(); ++v) {
            auto it = free_slots.find({v, want});
            if (it == free_slots.end() || it->second.empty()) continue;
            auto slot = it->second.back();
            it->second.pop_back();
            bonds.push_back({{nd.inst, nd.slot}, {v, slot}});
            bool ok = go(k + 1, v);
            if (ok) return true;
            bonds.pop_back();
            it->second.push_back(slot);
        }
        return false;
    };
    if (!go(0, 0)) return std::nullopt;
    return Configuration(std::move(t), std::move(inst), std::move(bonds));
}

}  // namespace detail

inline StableResult stable_entropy(const Tbn& t, const Collection& c) {
    check_collection(t, c);
    if (c.empty()) throw Error("stable entropy of an empty collection");
    PartitionProblem P(t, c);
    PartitionSolver S(P);
    StableResult res;
    res.entropy = S.solve(P.total());
    res.witness.parts = detail::to_collections(t, c, P, S.witness(P.total()));
    auto tp = std::make_shared<const Tbn>(t);
    std::vector<Configuration> pieces;
    for (auto& p : res.witness.parts) pieces.push_back(detail::realize_greedy(tp, p));
    res.config = join(pieces);
    return res;
}

inline bool is_stable(const Configuration& a) {
    auto m = config_metrics(a);
    if (!m.saturated) return false;
    if (a.size() == 0) return true;
    return m.entropy == stable_entropy(a.tbn(), a.collection()).entropy;
}

// ---------------------------------------------------------------------------
// output predicates

struct Predicate {
    enum class Kind { free, coloc, together };
    Kind kind = Kind::free;
    std::string monomer;               // free
    Domain domain;                     // coloc
    std::int64_t k = 0;                // coloc
    std::vector<std::string> members;  // together

    static Predicate free(std::string m) {
        Predicate p;
        p.monomer = std::move(m);
        return p;
    }
    static Predicate coloc(Domain d, std::int64_t k) {
        Predicate p;
        p.kind = Kind::coloc;
        p.domain = std::move(d);
        p.k = k;
        return p;
    }
    static Predicate together(std::vector<std::string> ms) {
        Predicate p;
        p.kind = Kind::together;
        p.members = std::move(ms);
        return p;
    }

    // free:<monomer> | coloc:<domain>:<k> | together:<m1>,<m2>,...
    static Predicate parse(const std::string& s) {
        auto colon = s.find(':');
        if (colon == std::string::npos) throw Error("bad predicate '" + s + "'");
        auto kind = s.substr(0, colon), rest = s.substr(colon + 1);
        if (kind == "free") {
            if (!is_identifier(rest)) throw Error("bad monomer name in predicate '" + s + "'");
            return free(rest);
        }
        if (kind == "coloc") {
            auto c2 = rest.rfind(':');
            if (c2 == std::string::npos) throw Error("coloc predicate needs ':<k>'");
            auto num = rest.substr(c2 + 1);
            if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
                throw Error("bad count in predicate '" + s + "'");
            return coloc(Domain::parse(rest.substr(0, c2)), std::stoll(num));
        }
        if (kind == "together") {
            std::vector<std::string> ms;
            std::size_t start = 0;
            while (start <= rest.size()) {
                auto comma = rest.find(',', start);
                auto name = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                if (!is_identifier(name)) throw Error("bad monomer name in predicate '" + s + "'");
                ms.push_back(name);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            return together(ms);
        }
        throw Error("unknown predicate kind '" + kind + "'");
    }

    std::string str() const {
        switch (kind) {
            case Kind::free: return "free:" + monomer;
            case Kind::coloc: return "coloc:" + domain.str() + ":" + std::to_string(k);
            default: {
                std::string s = "together:";
                for (std::size_t i = 0; i < members.size(); ++i) s += (i ? "," : "") + members[i];
                return s;
            }
        }
    }
};

struct ConstrainedResult {
    std::int64_t entropy = 0;
    PartitionWitness witness;
    Configuration config;
};

namespace detail {

inline std::optional<ConstrainedResult> anchored_max(const Tbn& t, const Collection& c, const PartitionProblem& P,
                                                    const PartitionProblem::PartQuery& q) {
    PartitionSolver S(P);
    auto tp = std::make_shared<const Tbn>(t);
    auto r = P.total();
    std::vector<Vec> parts;
    P.for_each_part(r, q, [&](const Vec& p) {
        parts.push_back(p);
        return true;
    });
    std::optional<ConstrainedResult> best;
    Vec rest(r.size());
    for (auto& p : parts) {
        for (std::size_t k = 0; k < r.size(); ++k) rest[k] = r[k] - p[k];
        std::int64_t rest_sz = std::accumulate(rest.begin(), rest.end(), std::int64_t{0});
        if (best && 1 + static_cast<std::int64_t>(P.upper_bound(rest) + 1e-9) <= best->entropy) continue;
        std::int64_t v = 1 + (rest_sz ? S.solve(rest) : 0);
        if (best && v <= best->entropy) continue;
        std::vector<Vec> all{p};
        if (rest_sz)
            for (auto& w : S.witness(rest)) all.push_back(w);
        auto cols = to_collections(t, c, P, all);
        auto anchored = realize_connected(tp, cols[0]);
        if (!anchored) continue;
        ConstrainedResult res;
        res.entropy = v;
        res.witness.parts = cols;
        std::vector<Configuration> pieces{*anchored};
        for (std::size_t x = 1; x < cols.size(); ++x) pieces.push_back(realize_greedy(tp, cols[x]));
        res.config = join(pieces);
        best = std::move(res);
    }
    return best;
}

}  // namespace detail

inline std::optional<ConstrainedResult> constrained_max_entropy(const Tbn& t, const Collection& c,
                                                                const Predicate& pred) {
    check_collection(t, c);
    if (c.empty()) throw Error("constrained entropy of an empty collection");
    auto tp = std::make_shared<const Tbn>(t);
    if (pred.kind == Predicate::Kind::free) {
        auto o = t.monomer_index(pred.monomer);
        if (c.counts[o] == 0) return std::nullopt;
        PartitionProblem P(t, c, {o});
        auto k = P.class_of(o);
        if (!P.nonneg(k)) return std::nullopt;
        auto r = P.total();
        r[k] -= 1;
        if (!P.valid(r)) return std::nullopt;
        PartitionSolver S(P);
        ConstrainedResult res;
        std::vector<detail::Vec> parts;
        detail::Vec one(r.size(), 0);
        one[k] = 1;
        parts.push_back(one);
        std::int64_t rest_sz = std::accumulate(r.begin(), r.end(), std::int64_t{0});
        res.entropy = 1 + (rest_sz ? S.solve(r) : 0);
        if (rest_sz)
            for (auto& w : S.witness(r)) parts.push_back(w);
        res.witness.parts = detail::to_collections(t, c, P, parts);
        std::vector<Configuration> pieces;
        for (auto& p : res.witness.parts) pieces.push_back(detail::realize_greedy(tp, p));
        res.config = join(pieces);
        return res;
    }
    if (pred.kind == Predicate::Kind::coloc) {
        if (!t.find_domain(pred.domain.name)) throw Error("unknown domain '" + pred.domain.name + "'");
        PartitionProblem P(t, c);
        std::vector<int> w(P.classes(), 0);
        for (std::size_t k = 0; k < P.classes(); ++k) w[k] = t.monomer(P.types_of(k)[0]).count(pred.domain);
        PartitionProblem::PartQuery q;
        q.at_least.push_back({w, pred.k});
        q.irreducible_only = false;
        q.allow_whole = true;
        return detail::anchored_max(t, c, P, q);
    }
    std::vector<std::size_t> listed;
    for (auto& m : pred.members) listed.push_back(t.monomer_index(m));
    PartitionProblem P(t, c, listed);
    detail::Vec need(P.classes(), 0);
    for (auto j : listed) {
        if (c.counts[j] == 0) return std::nullopt;
        need[P.class_of(j)] += 1;
    }
    for (std::size_t k = 0; k < need.size(); ++k)
        if (need[k] > P.total()[k]) return std::nullopt;
    PartitionProblem::PartQuery q;
    q.min = need;
    q.irreducible_only = false;
    q.allow_whole = true;
    return detail::anchored_max(t, c, P, q);
}

// nullopt = no saturated configuration satisfies the predicate (unbounded distance)
inline std::optional<std::int64_t> distance_to_stability(const Tbn& t, const Collection& c, const Predicate& p) {
    auto s = stable_entropy(t, c).entropy;
    auto m = constrained_max_entropy(t, c, p);
    if (!m) return std::nullopt;
    return s - m->entropy;
}

enum class Convention { weak, strong };
enum class Output { zero, one, indeterminate };

inline std::string to_string(Output o) {
    return o == Output::zero ? "0" : o == Output::one ? "1" : "indeterminate";
}

// Largest entropy of a saturated configuration in which no instance of type o
// is free; nullopt if none exists.
inline std::optional<std::int64_t> max_entropy_output_bound(const Tbn& t, const Collection& c, std::size_t o) {
    PartitionProblem P(t, c, {o});
    PartitionSolver S(P);
    auto tp = std::make_shared<const Tbn>(t);
    auto k = P.class_of(o);
    std::map<detail::Vec, std::optional<std::int64_t>> memo;
    std::function<std::optional<std::int64_t>(const detail::Vec&)> go =
        [&](const detail::Vec& r) -> std::optional<std::int64_t> {
        std::int64_t sz = std::accumulate(r.begin(), r.end(), std::int64_t{0});
        if (sz == 0) return 0;
        if (r[k] == 0) return S.solve(r);
        if (auto it = memo.find(r); it != memo.end()) return it->second;
        PartitionProblem::PartQuery q;
        q.anchor = k;
        q.irreducible_only = false;
        q.allow_whole = true;
        std::optional<std::int64_t> best;
        P.for_each_part(r, q, [&](const detail::Vec& p) {
            if (std::accumulate(p.begin(), p.end(), std::int64_t{0}) < 2) return true;
            detail::Vec rest(r.size());
            for (std::size_t x = 0; x < r.size(); ++x) rest[x] = r[x] - p[x];
            auto sub = go(rest);
            if (!sub || (best && 1 + *sub <= *best)) return true;
            auto cols = detail::to_collections(t, c, P, {p});
            if (!detail::realize_connected(tp, cols[0])) return true;
            best = 1 + *sub;
            return true;
        });
        memo[r] = best;
        return best;
    };
    return go(P.total());
}

inline Output evaluate_output(const Tbn& t, const Collection& c, const std::string& o, Convention conv) {
    auto oi = t.monomer_index(o);
    if (c.counts[oi] == 0) throw Error("output monomer '" + o + "' is not in the collection");
    auto s = stable_entropy(t, c).entropy;
    auto f = constrained_max_entropy(t, c, Predicate::free(o));
    bool some_free = f && f->entropy == s;
    if (conv == Convention::weak) return some_free ? Output::one : Output::zero;
    auto b = max_entropy_output_bound(t, c, oi);
    bool some_bound = b && *b == s;
    if (some_free && !some_bound) return Output::one;
    if (!some_free && some_bound) return Output::zero;
    return Output::indeterminate;
}

inline std::optional<std::pair<Collection, Collection>> find_split(const Tbn& t, const Collection& c) {
    check_collection(t, c);
    PartitionProblem P(t, c);
    PartitionSolver S(P);
    auto r = P.total();
    auto p = S.find_split(r);
    if (!p) return std::nullopt;
    detail::Vec rest(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) rest[k] = r[k] - (*p)[k];
    auto cols = detail::to_collections(t, c, P, {*p, rest});
    return std::make_pair(cols[0], cols[1]);
}

// ---------------------------------------------------------------------------
// Farkas-type dichotomy for integer vectors

struct FarkasResult {
    enum class Kind { balanced, hyperplane };
    Kind kind = Kind::balanced;
    std::vector<std::int64_t> values;  // coefficients n_j, or hyperplane h
};

inline std::int64_t farkas_K_int(std::int64_t a, std::int64_t d) {
    std::int64_t base = a * d, k = 1;
    for (std::int64_t i = 0; i <= d; ++i) {
        if (k > (std::int64_t{1} << 40) / std::max<std::int64_t>(base, 1)) throw Error("K too large");
        k *= base;
    }
    return k;
}

inline bool farkas_check(const std::vector<std::vector<std::int64_t>>& v, std::int64_t K, const FarkasResult& r) {
    std::size_t d = v.empty() ? 0 : v[0].size();
    if (r.kind == FarkasResult::Kind::balanced) {
        if (r.values.size() != v.size()) return false;
        bool nonzero = false;
        std::vector<std::int64_t> sum(d, 0);
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (r.values[j] < 0 || r.values[j] > K) return false;
            nonzero |= r.values[j] != 0;
            for (std::size_t i = 0; i < d; ++i) sum[i] += r.values[j] * v[j][i];
        }
        return nonzero && std::all_of(sum.begin(), sum.end(), [](auto x) { return x == 0; });
    }
    if (r.values.size() != d) return false;
    for (auto h : r.values)
        if (h < -K || h > K) return false;
    for (auto& vj : v) {
        std::int64_t dot = 0;
        for (std::size_t i = 0; i < d; ++i) dot += r.values[i] * vj[i];
        if (dot < 1) return false;
    }
    return true;
}

inline std::optional<FarkasResult> farkas_find(const std::vector<std::vector<std::int64_t>>& v, std::int64_t K,
                                               FarkasResult::Kind kind) {
    std::size_t l = v.size(), d = v[0].size();
    std::optional<FarkasResult> out;
    if (kind == FarkasResult::Kind::balanced) {
        detail::BoxCP cp(l);
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<detail::BoxCP::Term> terms;
            for (std::size_t j = 0; j < l; ++j)
                if (v[j][i]) terms.push_back({static_cast<int>(j), static_cast<int>(v[j][i])});
            if (!terms.empty()) cp.add_row(terms, 0, 0);
        }
        std::vector<detail::BoxCP::Term> all;
        for (std::size_t j = 0; j < l; ++j) all.push_back({static_cast<int>(j), 1});
        cp.add_row(all, 1, K * static_cast<std::int64_t>(l));
        std::vector<int> order(l);
        std::iota(order.begin(), order.end(), 0);
        cp.enumerate(order, std::vector<std::int64_t>(l, 0), std::vector<std::int64_t>(l, K), [&](const auto& x) {
            out = FarkasResult{FarkasResult::Kind::balanced, x};
            return false;
        });
    } else {
        detail::BoxCP cp(d);
        for (auto& vj : v) {
            std::vector<detail::BoxCP::Term> terms;
            std::int64_t maxdot = 0;
            for (std::size_t i = 0; i < d; ++i)
                if (vj[i]) {
                    terms.push_back({static_cast<int>(i), static_cast<int>(vj[i])});
                    maxdot += std::abs(vj[i]) * K;
                }
            cp.add_row(terms, 1, std::max<std::int64_t>(maxdot, 1));
        }
        std::vector<int> order(d);
        std::iota(order.begin(), order.end(), 0);
        cp.enumerate(order, std::vector<std::int64_t>(d, -K), std::vector<std::int64_t>(d, K), [&](const auto& x) {
            out = FarkasResult{FarkasResult::Kind::hyperplane, x};
            return false;
        });
    }
    return out;
}

inline FarkasResult farkas_decide(const std::vector<std::vector<std::int64_t>>& v, std::int64_t a, std::int64_t d) {
    if (v.empty()) throw Error("farkas_decide needs at least one vector");
    for (auto& x : v) {
        if (static_cast<std::int64_t>(x.size()) != d) throw Error("vector dimension mismatch");
        for (auto e : x)
            if (std::abs(e) > a) throw Error("vector entry outside [-a, a]");
    }
    auto K = farkas_K_int(a, d);
    if (K > 100000) throw Error("K budget exceeded");
    for (auto kind : {FarkasResult::Kind::balanced, FarkasResult::Kind::hyperplane})
        if (auto r = farkas_find(v, K, kind)) {
            if (!farkas_check(v, K, *r)) throw Error("internal: certificate failed verification");
            return *r;
        }
    throw Error("internal: neither certificate found");
}

// ---------------------------------------------------------------------------
// brute-force enumeration (oracle)

enum class Filter { all, saturated, stable };

inline std::size_t enum_cap() {
    if (const char* s = std::getenv("TBN_ENUM_CAP")) {
        try {
            return std::stoul(s);
        } catch (const std::exception&) {
            throw Error("bad TBN_ENUM_CAP value");
        }
    }
    return 24;
}

inline std::vector<Configuration> enumerate_configurations(const Tbn& t, const Collection& c, Filter filter,
                                                           std::size_t limit = 0,
                                                           std::optional<std::size_t> cap = std::nullopt) {
    check_collection(t, c);
    auto inst = detail::expand(c);
    std::size_t slots = 0;
    for (auto j : inst) slots += t.monomer(j).size();
    if (slots > cap.value_or(enum_cap()))
        throw Error("collection has " + std::to_string(slots) +
                    " domain instances, over the enumeration cap; use the partition solver");
    auto tp = std::make_shared<const Tbn>(t);
    // groups of identical primary slots: (instance, domain name) with multiplicity
    struct Group {
        std::size_t inst;
        std::string name;
        std::vector<std::size_t> slots;
    };
    std::vector<Group> groups;
    std::map<std::pair<std::size_t, std::string>, std::vector<std::size_t>> star_slots;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        auto& ds = t.monomer(inst[i]).domains();
        for (std::size_t s = 0; s < ds.size(); ++s) {
            if (ds[s].starred) {
                star_slots[{i, ds[s].name}].push_back(s);
                continue;
            }
            if (groups.empty() || groups.back().inst != i || groups.back().name != ds[s].name)
                groups.push_back({i, ds[s].name, {}});
            groups.back().slots.push_back(s);
        }
    }
    std::map<std::pair<std::size_t, std::string>, std::size_t> used;
    std::vector<Bond> bonds;
    std::map<std::string, Configuration> found;
    std::function<void(std::size_t, std::size_t, std::size_t)> go = [&](std::size_t g, std::size_t k,
                                                                         std::size_t min_target) {
        if (g == groups.size()) {
            Configuration a(tp, inst, bonds);
            found.emplace(canonical_form(a), std::move(a));
            return;
        }
        auto& grp = groups[g];
        if (k == grp.slots.size()) return go(g + 1, 0, 0);
        // target index: v+1 binds to instance v, 0 leaves the slot unbound
        for (std::size_t tgt = min_target; tgt <= inst.size(); ++tgt) {
            if (tgt == 0) {
                go(g, k + 1, 0);
                continue;
            }
            std::size_t v = tgt - 1;
            auto it = star_slots.find({v, grp.name});
            if (it == star_slots.end()) continue;
            auto& u = used[{v, grp.name}];
            if (u == it->second.size()) continue;
            bonds.push_back({{grp.inst, grp.slots[k]}, {v, it->second[u]}});
            ++u;
            go(g, k + 1, tgt);
            --u;
            bonds.pop_back();
        }
    };
    go(0, 0, 0);
    std::vector<Configuration> out;
    auto maxh = max_bond_count(t, c);
    std::int64_t best_s = 0;
    for (auto& [key, a] : found) {
        auto m = config_metrics(a);
        if (filter != Filter::all && m.enthalpy != maxh) continue;
        best_s = std::max(best_s, m.entropy);
    }
    for (auto& [key, a] : found) {
        auto m = config_metrics(a);
        if (filter != Filter::all && m.enthalpy != maxh) continue;
        if (filter == Filter::stable && m.entropy != best_s) continue;
        out.push_back(a);
        if (limit && out.size() >= limit) break;
    }
    return out;
}

}  // namespace tbn
