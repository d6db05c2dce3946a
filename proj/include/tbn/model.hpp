#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tbn {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (ch == '*' || ch == '#' || ch == '.' || ch == ':' || ch == ',' || ch == '{' || ch == '}' ||
            static_cast<unsigned char>(ch) <= ' ')
            return false;
    }
    return true;
}

struct Domain {
    std::string name;
    bool starred = false;

    Domain complement() const { return {name, !starred}; }
    std::string str() const { return starred ? name + "*" : name; }

    auto operator<=>(const Domain&) const = default;
    bool operator==(const Domain&) const = default;

    static Domain parse(std::string_view tok) {
        bool star = !tok.empty() && tok.back() == '*';
        if (star) tok.remove_suffix(1);
        if (!is_identifier(tok)) throw Error("bad domain name '" + std::string(tok) + "'");
        return {std::string(tok), star};
    }
};

class MonomerType {
  public:
    MonomerType(std::string name, std::vector<Domain> doms) : name_(std::move(name)), domains_(std::move(doms)) {
        if (!is_identifier(name_)) throw Error("bad monomer name '" + name_ + "'");
        if (domains_.empty()) throw Error("monomer '" + name_ + "' is empty");
        std::sort(domains_.begin(), domains_.end());
    }

    const std::string& name() const { return name_; }
    const std::vector<Domain>& domains() const { return domains_; }
    std::size_t size() const { return domains_.size(); }

    int count(const Domain& d) const { return static_cast<int>(std::count(domains_.begin(), domains_.end(), d)); }

    bool operator==(const MonomerType&) const = default;

  private:
    std::string name_;
    std::vector<Domain> domains_;  // sorted; slot index = position
};

// d x m integer matrices, row = domain name, column = monomer type
struct MonomerMatrix {
    std::vector<std::vector<int>> plus, minus, m;
};

class Tbn {
  public:
    Tbn() = default;
    explicit Tbn(std::vector<MonomerType> monomers, const std::vector<std::string>& extra_domains = {})
        : monomers_(std::move(monomers)) {
        std::sort(monomers_.begin(), monomers_.end(),
                  [](const MonomerType& a, const MonomerType& b) { return a.name() < b.name(); });
        for (std::size_t i = 1; i < monomers_.size(); ++i)
            if (monomers_[i].name() == monomers_[i - 1].name())
                throw Error("duplicate monomer '" + monomers_[i].name() + "'");
        std::set<std::string> names(extra_domains.begin(), extra_domains.end());
        for (auto& mt : monomers_)
            for (auto& d : mt.domains()) names.insert(d.name);
        domains_.assign(names.begin(), names.end());
        for (auto& n : domains_)
            if (!is_identifier(n)) throw Error("bad domain name '" + n + "'");
    }

    const std::vector<MonomerType>& monomers() const { return monomers_; }
    const MonomerType& monomer(std::size_t i) const { return monomers_.at(i); }
    const std::vector<std::string>& domains() const { return domains_; }
    std::size_t num_monomers() const { return monomers_.size(); }
    std::size_t num_domains() const { return domains_.size(); }

    std::optional<std::size_t> find_monomer(std::string_view name) const {
        auto it = std::lower_bound(monomers_.begin(), monomers_.end(), name,
                                   [](const MonomerType& a, std::string_view n) { return a.name() < n; });
        if (it == monomers_.end() || it->name() != name) return std::nullopt;
        return static_cast<std::size_t>(it - monomers_.begin());
    }
    std::size_t monomer_index(std::string_view name) const {
        auto i = find_monomer(name);
        if (!i) throw Error("unknown monomer '" + std::string(name) + "'");
        return *i;
    }
    std::optional<std::size_t> find_domain(std::string_view name) const {
        auto it = std::lower_bound(domains_.begin(), domains_.end(), name);
        if (it == domains_.end() || *it != name) return std::nullopt;
        return static_cast<std::size_t>(it - domains_.begin());
    }

    MonomerMatrix matrix() const {
        MonomerMatrix r;
        auto d = domains_.size(), m = monomers_.size();
        r.plus.assign(d, std::vector<int>(m, 0));
        r.minus = r.plus;
        r.m = r.plus;
        for (std::size_t j = 0; j < m; ++j)
            for (auto& dom : monomers_[j].domains()) {
                auto i = *find_domain(dom.name);
                (dom.starred ? r.minus : r.plus)[i][j] += 1;
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < m; ++j) r.m[i][j] = r.plus[i][j] - r.minus[i][j];
        return r;
    }

    bool operator==(const Tbn&) const = default;

  private:
    std::vector<MonomerType> monomers_;  // sorted by name
    std::vector<std::string> domains_;   // sorted primary names
};

using Counts = std::vector<std::int64_t>;

struct Collection {
    Counts counts;

    Collection() = default;
    explicit Collection(Counts c) : counts(std::move(c)) {}
    static Collection ones(const Tbn& t) { return Collection(Counts(t.num_monomers(), 1)); }

    std::int64_t size() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }
    bool empty() const { return size() == 0; }
    std::int64_t operator[](std::size_t i) const { return counts.at(i); }
    bool operator==(const Collection&) const = default;
};

inline void check_collection(const Tbn& t, const Collection& c) {
    if (c.counts.size() != t.num_monomers()) throw Error("collection does not match TBN");
    for (auto x : c.counts)
        if (x < 0) throw Error("negative monomer count");
}

// number of instances of each domain name on each side
inline std::pair<Counts, Counts> domain_totals(const Tbn& t, const Collection& c) {
    Counts prim(t.num_domains(), 0), star(t.num_domains(), 0);
    for (std::size_t j = 0; j < t.num_monomers(); ++j)
        for (auto& d : t.monomer(j).domains()) (d.starred ? star : prim)[*t.find_domain(d.name)] += c.counts[j];
    return {prim, star};
}

inline std::int64_t max_bond_count(const Tbn& t, const Collection& c) {
    check_collection(t, c);
    auto [p, s] = domain_totals(t, c);
    std::int64_t h = 0;
    for (std::size_t i = 0; i < p.size(); ++i) h += std::min(p[i], s[i]);
    return h;
}

inline Counts excess_vector(const Tbn& t, const Collection& c) {
    check_collection(t, c);
    auto [p, s] = domain_totals(t, c);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= s[i];
    return p;
}

struct Relabeling {
    std::set<std::string> flipped;

    Domain apply(const Domain& d) const { return flipped.count(d.name) ? d.complement() : d; }
};

inline Tbn apply_relabeling(const Tbn& t, const Relabeling& r) {
    std::vector<MonomerType> ms;
    for (auto& mt : t.monomers()) {
        std::vector<Domain> ds;
        for (auto& d : mt.domains()) ds.push_back(r.apply(d));
        ms.emplace_back(mt.name(), std::move(ds));
    }
    return Tbn(std::move(ms), t.domains());
}

inline std::pair<Tbn, Relabeling> relabel_nonnegative(const Tbn& t, const Collection& c) {
    auto ex = excess_vector(t, c);
    Relabeling r;
    for (std::size_t i = 0; i < ex.size(); ++i)
        if (ex[i] < 0) r.flipped.insert(t.domains()[i]);
    return {apply_relabeling(t, r), r};
}

// ---------------------------------------------------------------------------

struct SlotRef {
    std::size_t monomer = 0;  // instance index within the configuration
    std::size_t slot = 0;
    auto operator<=>(const SlotRef&) const = default;
};

struct Bond {
    SlotRef a, b;  // a < b
    auto operator<=>(const Bond&) const = default;
};

struct ConfigMetrics {
    std::int64_t enthalpy = 0;
    std::int64_t entropy = 0;
    bool saturated = false;
    std::vector<std::int64_t> polymer_sizes;  // descending
    std::int64_t size = 0;
};

class Configuration {
  public:
    Configuration() : tbn_(std::make_shared<Tbn>()) {}
    Configuration(std::shared_ptr<const Tbn> t, std::vector<std::size_t> instances, std::vector<Bond> bonds)
        : tbn_(std::move(t)), inst_(std::move(instances)), bonds_(std::move(bonds)) {
        normalize();
    }
    Configuration(const Tbn& t, std::vector<std::size_t> instances, std::vector<Bond> bonds)
        : Configuration(std::make_shared<const Tbn>(t), std::move(instances), std::move(bonds)) {}

    const Tbn& tbn() const { return *tbn_; }
    std::shared_ptr<const Tbn> tbn_ptr() const { return tbn_; }
    const std::vector<std::size_t>& instances() const { return inst_; }
    const std::vector<Bond>& bonds() const { return bonds_; }
    std::size_t size() const { return inst_.size(); }

    const MonomerType& type_of(std::size_t inst) const { return tbn_->monomer(inst_.at(inst)); }
    const Domain& domain_at(SlotRef s) const { return type_of(s.monomer).domains().at(s.slot); }

    Collection collection() const {
        Counts c(tbn_->num_monomers(), 0);
        for (auto t : inst_) ++c[t];
        return Collection(std::move(c));
    }

    // ordinal of an instance among instances of the same type
    std::size_t ordinal(std::size_t inst) const {
        std::size_t k = 0;
        for (std::size_t i = 0; i < inst; ++i)
            if (inst_[i] == inst_[inst]) ++k;
        return k;
    }

    // component label per instance, labels 0.. in order of first appearance
    std::vector<std::size_t> components() const {
        std::vector<std::size_t> parent(inst_.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto& b : bonds_) parent[find(b.a.monomer)] = find(b.b.monomer);
        std::map<std::size_t, std::size_t> label;
        std::vector<std::size_t> out(inst_.size());
        for (std::size_t i = 0; i < inst_.size(); ++i) {
            auto r = find(i);
            auto it = label.try_emplace(r, label.size()).first;
            out[i] = it->second;
        }
        return out;
    }

    bool operator==(const Configuration& o) const {
        return *tbn_ == *o.tbn_ && inst_ == o.inst_ && bonds_ == o.bonds_;
    }

  private:
    void normalize() {
        std::vector<char> used;
        std::vector<std::size_t> offset(inst_.size() + 1, 0);
        for (std::size_t i = 0; i < inst_.size(); ++i) {
            if (inst_[i] >= tbn_->num_monomers()) throw Error("instance refers to unknown monomer type");
            offset[i + 1] = offset[i] + tbn_->monomer(inst_[i]).size();
        }
        used.assign(offset.back(), 0);
        for (auto& b : bonds_) {
            if (b.b < b.a) std::swap(b.a, b.b);
            for (auto s : {b.a, b.b}) {
                if (s.monomer >= inst_.size() || s.slot >= tbn_->monomer(inst_[s.monomer]).size())
                    throw Error("bond refers to a missing slot");
                auto& u = used[offset[s.monomer] + s.slot];
                if (u) throw Error("domain slot bound twice");
                u = 1;
            }
            if (b.a == b.b) throw Error("slot bound to itself");
            if (domain_at(b.a).complement() != domain_at(b.b)) throw Error("bond between non-complementary domains");
        }
        std::sort(bonds_.begin(), bonds_.end());
    }

    std::shared_ptr<const Tbn> tbn_;
    std::vector<std::size_t> inst_;
    std::vector<Bond> bonds_;
};

inline ConfigMetrics config_metrics(const Configuration& a) {
    ConfigMetrics m;
    m.enthalpy = static_cast<std::int64_t>(a.bonds().size());
    auto comp = a.components();
    std::map<std::size_t, std::int64_t> sizes;
    for (auto c : comp) ++sizes[c];
    m.entropy = static_cast<std::int64_t>(sizes.size());
    for (auto& [k, v] : sizes) m.polymer_sizes.push_back(v);
    std::sort(m.polymer_sizes.rbegin(), m.polymer_sizes.rend());
    m.size = static_cast<std::int64_t>(a.size());
    m.saturated = m.enthalpy == max_bond_count(a.tbn(), a.collection());
    return m;
}

inline bool is_saturated(const Configuration& a) { return config_metrics(a).saturated; }

// sub-configuration on the chosen instances, renumbered in the given order
inline Configuration restrict_to(const Configuration& a, const std::vector<std::size_t>& keep) {
    std::vector<std::size_t> pos(a.size(), SIZE_MAX), inst;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        pos[keep[k]] = k;
        inst.push_back(a.instances()[keep[k]]);
    }
    std::vector<Bond> bonds;
    for (auto& b : a.bonds())
        if (pos[b.a.monomer] != SIZE_MAX && pos[b.b.monomer] != SIZE_MAX)
            bonds.push_back({{pos[b.a.monomer], b.a.slot}, {pos[b.b.monomer], b.b.slot}});
    return Configuration(a.tbn_ptr(), std::move(inst), std::move(bonds));
}

// disjoint union of configurations over the same TBN
inline Configuration join(const std::vector<Configuration>& parts) {
    if (parts.empty()) return {};
    std::vector<std::size_t> inst;
    std::vector<Bond> bonds;
    for (auto& p : parts) {
        auto off = inst.size();
        inst.insert(inst.end(), p.instances().begin(), p.instances().end());
        for (auto& b : p.bonds()) bonds.push_back({{b.a.monomer + off, b.a.slot}, {b.b.monomer + off, b.b.slot}});
    }
    return Configuration(parts.front().tbn_ptr(), std::move(inst), std::move(bonds));
}

inline std::string canonical_form(const Configuration& a);

inline std::vector<Configuration> polymers(const Configuration& a) {
    auto comp = a.components();
    std::size_t n = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<Configuration> out;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < comp.size(); ++i)
            if (comp[i] == c) keep.push_back(i);
        out.push_back(restrict_to(a, keep));
    }
    std::vector<std::string> keys;
    for (auto& p : out) keys.push_back(canonical_form(p));
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
        if (out[x].size() != out[y].size()) return out[x].size() > out[y].size();
        return keys[x] < keys[y];
    });
    std::vector<Configuration> sorted;
    for (auto i : order) sorted.push_back(out[i]);
    return sorted;
}

enum class Side { primary, complement, both };

inline Configuration excise(const Configuration& a, const std::set<std::string>& names, Side side) {
    auto hit = [&](const Domain& d) {
        if (!names.count(d.name)) return false;
        return side == Side::both || (side == Side::primary) == !d.starred;
    };
    // new monomer types: removed slots dropped; types emptied entirely disappear
    const Tbn& t = a.tbn();
    std::vector<MonomerType> types;
    std::vector<std::optional<std::size_t>> new_type(t.num_monomers());
    std::vector<std::vector<std::optional<std::size_t>>> slot_map(t.num_monomers());
    std::vector<std::string> names_kept;
    for (std::size_t j = 0; j < t.num_monomers(); ++j) {
        std::vector<Domain> ds;
        auto& src = t.monomer(j).domains();
        for (auto& d : src)
            if (!hit(d)) ds.push_back(d);
        if (ds.empty()) continue;
        new_type[j] = types.size();
        types.emplace_back(t.monomer(j).name(), ds);
    }
    Tbn nt(types);
    for (std::size_t j = 0; j < t.num_monomers(); ++j) {
        auto& src = t.monomer(j).domains();
        slot_map[j].assign(src.size(), std::nullopt);
        std::size_t k = 0;
        for (std::size_t s = 0; s < src.size(); ++s)
            if (!hit(src[s])) slot_map[j][s] = k++;
    }
    std::vector<std::size_t> inst;
    std::vector<std::optional<std::size_t>> pos(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto tj = a.instances()[i];
        if (!new_type[tj]) continue;
        pos[i] = inst.size();
        inst.push_back(*nt.find_monomer(t.monomer(tj).name()));
    }
    std::vector<Bond> bonds;
    for (auto& b : a.bonds()) {
        auto ta = a.instances()[b.a.monomer], tb = a.instances()[b.b.monomer];
        auto sa = slot_map[ta][b.a.slot], sb = slot_map[tb][b.b.slot];
        if (!sa || !sb) continue;
        bonds.push_back({{*pos[b.a.monomer], *sa}, {*pos[b.b.monomer], *sb}});
    }
    return Configuration(nt, std::move(inst), std::move(bonds));
}

struct EnergyParams {
    double l = 5;
    double molarity = 1;
    double dg_bp = -1.5;
    double dg_assoc = 1.96;
    double rt = 0.593;
};

inline double gibbs_free_energy(std::int64_t h, std::int64_t size, std::int64_t s, const EnergyParams& p = {}) {
    if (!(p.molarity > 0)) throw Error("effective molarity must be positive");
    if (p.l < 1) throw Error("bases per domain must be at least 1");
    return p.dg_bp * p.l * static_cast<double>(h) +
           (p.dg_assoc + p.rt * std::log(1.0 / p.molarity)) * static_cast<double>(size - s);
}

inline double gibbs_free_energy(const ConfigMetrics& m, const EnergyParams& p = {}) {
    return gibbs_free_energy(m.enthalpy, m.size, m.entropy, p);
}

}  // namespace tbn

#include "canonical.hpp"
