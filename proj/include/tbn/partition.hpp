#pragma once

// Exact stable-entropy search. After flipping rows with negative excess, the
// stable entropy of c is the largest number of nonzero parts c_1..c_S summing
// to c with M c_i >= 0 for every part. The search fixes one "anchor" class,
// enumerates every valid part containing it (bounded by a small interval
// propagation), recurses on the residual and memoizes on it. Residuals whose
// classes share no domain rows are solved independently.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "model.hpp"

namespace tbn {
namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Integer box x_j in [lo_j, hi_j] with linear rows L_i <= sum a_ij x_j <= U_i.
class BoxCP {
  public:
    struct Term {
        int var;
        int coef;
    };

    explicit BoxCP(std::size_t nvars) : var_rows_(nvars) {}

    std::size_t add_row(std::vector<Term> terms, std::int64_t lo, std::int64_t hi) {
        auto id = static_cast<int>(rows_.size());
        for (auto& t : terms) var_rows_[t.var].push_back(id);
        rows_.push_back({std::move(terms), lo, hi});
        return rows_.size() - 1;
    }
    void set_bounds(std::size_t row, std::int64_t lo, std::int64_t hi) {
        rows_[row].lo = lo;
        rows_[row].hi = hi;
    }

    // seeds: only rows touching these variables start in the queue (all rows if null)
    bool propagate(std::vector<std::int64_t>& lo, std::vector<std::int64_t>& hi,
                   const std::vector<int>* seeds = nullptr) const {
        std::vector<char> queued(rows_.size(), seeds ? 0 : 1);
        std::vector<int> queue;
        if (seeds) {
            for (int v : *seeds)
                for (int ri : var_rows_[v])
                    if (!queued[ri]) {
                        queued[ri] = 1;
                        queue.push_back(ri);
                    }
        } else {
            queue.resize(rows_.size());
            std::iota(queue.begin(), queue.end(), 0);
        }
        std::size_t head = 0;
        while (head < queue.size()) {
            int ri = queue[head++];
            queued[ri] = 0;
            auto& row = rows_[ri];
            std::int64_t smin = 0, smax = 0;
            for (auto& t : row.terms) {
                auto a = t.coef * lo[t.var], b = t.coef * hi[t.var];
                smin += std::min(a, b);
                smax += std::max(a, b);
            }
            if (smax < row.lo || smin > row.hi) return false;
            for (auto& t : row.terms) {
                auto a = t.coef * lo[t.var], b = t.coef * hi[t.var];
                auto omin = smin - std::min(a, b), omax = smax - std::max(a, b);
                std::int64_t L = row.lo - omax, U = row.hi - omin;  // L <= coef*x <= U
                std::int64_t nlo, nhi;
                if (t.coef > 0) {
                    nlo = ceil_div(L, t.coef);
                    nhi = floor_div(U, t.coef);
                } else {
                    nlo = ceil_div(U, t.coef);
                    nhi = floor_div(L, t.coef);
                }
                nlo = std::max(nlo, lo[t.var]);
                nhi = std::min(nhi, hi[t.var]);
                if (nlo > nhi) return false;
                if (nlo != lo[t.var] || nhi != hi[t.var]) {
                    lo[t.var] = nlo;
                    hi[t.var] = nhi;
                    // ri included: its later terms used the old bounds
                    for (int r2 : var_rows_[t.var])
                        if (!queued[r2]) {
                            queued[r2] = 1;
                            queue.push_back(r2);
                        }
                }
            }
        }
        return true;
    }

    // Calls f(x) for each integer point, values ascending along `order`; f returns false to stop.
    template <class F>
    bool enumerate(const std::vector<int>& order, std::vector<std::int64_t> lo, std::vector<std::int64_t> hi,
                   F&& f) const {
        if (!propagate(lo, hi)) return true;
        return dfs(order, 0, lo, hi, f);
    }

  private:
    struct Row {
        std::vector<Term> terms;
        std::int64_t lo, hi;
    };

    template <class F>
    bool dfs(const std::vector<int>& order, std::size_t k, std::vector<std::int64_t>& lo,
             std::vector<std::int64_t>& hi, F& f) const {
        while (k < order.size() && lo[order[k]] == hi[order[k]]) ++k;
        if (k == order.size()) return f(lo);
        int v = order[k];
        std::vector<int> seed{v};
        for (auto x = lo[v]; x <= hi[v]; ++x) {
            auto l2 = lo, h2 = hi;
            l2[v] = h2[v] = x;
            if (!propagate(l2, h2, &seed)) continue;
            if (!dfs(order, k + 1, l2, h2, f)) return false;
        }
        return true;
    }

    std::vector<Row> rows_;
    std::vector<std::vector<int>> var_rows_;
};

struct VecHash {
    std::size_t operator()(const std::vector<std::int32_t>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

}  // namespace detail

// Columns of the relabeled monomer matrix, with monomer types of identical
// domain content merged into one class.
class PartitionProblem {
  public:
    using Vec = std::vector<std::int32_t>;

    PartitionProblem(const Tbn& t, const Collection& c, const std::vector<std::size_t>& distinct = {}) {
        check_collection(t, c);
        auto [rt, rl] = relabel_nonnegative(t, c);
        relabeling_ = rl;
        rows_ = t.num_domains();
        auto M = rt.matrix().m;
        std::vector<std::pair<std::vector<Domain>, std::size_t>> seen;
        type_class_.assign(t.num_monomers(), SIZE_MAX);
        for (std::size_t j = 0; j < t.num_monomers(); ++j) {
            if (c.counts[j] == 0) continue;
            bool own = std::find(distinct.begin(), distinct.end(), j) != distinct.end();
            std::size_t cls = SIZE_MAX;
            if (!own)
                for (auto& [doms, k] : seen)
                    if (doms == t.monomer(j).domains()) cls = k;
            if (cls == SIZE_MAX) {
                cls = cols_.size();
                std::vector<int> col(rows_);
                for (std::size_t i = 0; i < rows_; ++i) col[i] = M[i][j];
                cols_.push_back(col);
                std::vector<char> touch(rows_, 0);
                for (auto& d : t.monomer(j).domains()) touch[*rt.find_domain(d.name)] = 1;
                touch_.push_back(touch);
                class_types_.push_back({});
                total_.push_back(0);
                if (!own) seen.emplace_back(t.monomer(j).domains(), cls);
            }
            type_class_[j] = cls;
            class_types_[cls].push_back(j);
            total_[cls] += static_cast<std::int32_t>(c.counts[j]);
        }
        for (std::size_t k = 0; k < cols_.size(); ++k) {
            bool nonneg = true, zero = true;
            for (auto x : cols_[k]) {
                nonneg &= x >= 0;
                zero &= x == 0;
            }
            nonneg_.push_back(nonneg);
            zero_.push_back(zero);
        }
        for (std::size_t k = 0; k < cols_.size(); ++k) min_size_.push_back(smallest_part(k));
    }

    std::size_t classes() const { return cols_.size(); }
    std::size_t rows() const { return rows_; }
    const Vec& total() const { return total_; }
    const std::vector<int>& column(std::size_t k) const { return cols_[k]; }
    bool nonneg(std::size_t k) const { return nonneg_[k]; }
    bool zero(std::size_t k) const { return zero_[k]; }
    std::size_t class_of(std::size_t type) const { return type_class_.at(type); }
    const std::vector<std::size_t>& types_of(std::size_t k) const { return class_types_[k]; }
    const Relabeling& relabeling() const { return relabeling_; }

    std::vector<std::int64_t> excess(const Vec& r) const {
        std::vector<std::int64_t> e(rows_, 0);
        for (std::size_t k = 0; k < r.size(); ++k)
            if (r[k])
                for (std::size_t i = 0; i < rows_; ++i) e[i] += static_cast<std::int64_t>(cols_[k][i]) * r[k];
        return e;
    }
    bool valid(const Vec& r) const {
        for (auto x : excess(r))
            if (x < 0) return false;
        return true;
    }

    // Upper bound on the number of valid parts of r: a part without a
    // nonnegative column holds, for each member j, at least 1 + need_j monomers.
    double upper_bound(const Vec& r) const {
        std::vector<int> maxpos(rows_, 0);
        for (std::size_t k = 0; k < r.size(); ++k)
            if (r[k])
                for (std::size_t i = 0; i < rows_; ++i) maxpos[i] = std::max(maxpos[i], cols_[k][i]);
        double ub = 0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (!r[k]) continue;
            if (nonneg_[k]) {
                ub += r[k];
                continue;
            }
            std::int64_t need = 1;
            for (std::size_t i = 0; i < rows_; ++i)
                if (cols_[k][i] < 0 && maxpos[i] > 0)
                    need = std::max<std::int64_t>(need, detail::ceil_div(-cols_[k][i], maxpos[i]));
            ub += static_cast<double>(r[k]) / static_cast<double>(std::max(1 + need, min_size_[k]));
        }
        // Nonnegative instances sharing a part with a negative one count at most
        // 1/2 each; rows with disjoint supplier sets each force their own.
        std::vector<std::int64_t> deficit(rows_, 0);
        for (std::size_t k = 0; k < r.size(); ++k)
            if (r[k] && !nonneg_[k])
                for (std::size_t i = 0; i < rows_; ++i) deficit[i] += static_cast<std::int64_t>(cols_[k][i]) * r[k];
        std::vector<char> used(r.size(), 0);
        std::int64_t forced = 0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (deficit[i] >= 0) continue;
            int best = 0;
            bool clash = false;
            for (std::size_t k = 0; k < r.size(); ++k)
                if (r[k] && nonneg_[k] && cols_[k][i] > 0) {
                    best = std::max(best, cols_[k][i]);
                    clash |= used[k] != 0;
                }
            if (clash || best == 0) continue;
            for (std::size_t k = 0; k < r.size(); ++k)
                if (r[k] && nonneg_[k] && cols_[k][i] > 0) used[k] = 1;
            forced += detail::ceil_div(-deficit[i], best);
        }
        ub -= static_cast<double>(forced) / 2;
        return ub;
    }

    // Groups of classes present in r that share no nonzero row.
    std::vector<std::vector<std::size_t>> split_components(const Vec& r) const {
        std::vector<std::size_t> parent(r.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::vector<std::size_t> row_owner(rows_, SIZE_MAX);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (!r[k] || zero_[k]) continue;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (!cols_[k][i]) continue;
                if (row_owner[i] == SIZE_MAX) row_owner[i] = k;
                else parent[find(k)] = find(row_owner[i]);
            }
        }
        std::vector<std::vector<std::size_t>> groups;
        std::vector<std::size_t> gid(r.size(), SIZE_MAX);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (!r[k] || zero_[k]) continue;
            auto root = find(k);
            if (gid[root] == SIZE_MAX) {
                gid[root] = groups.size();
                groups.emplace_back();
            }
            groups[gid[root]].push_back(k);
        }
        return groups;
    }

    struct PartQuery {
        std::optional<std::size_t> anchor;            // class forced to be >= 1
        Vec min;                                      // lower bounds (may be empty)
        std::vector<std::pair<std::vector<int>, std::int64_t>> at_least;  // weight . p >= k
        bool irreducible_only = true;
        bool allow_whole = false;
    };

    // Every valid part p <= r meeting the query with M(r-p) >= 0 whose support
    // is connected through shared rows (nonzero net rows for irreducible
    // queries, any shared domain name otherwise). Supports are grown from a root class
    // by include/exclude decisions on a frontier, so each is visited once.
    template <class F>
    void for_each_part(const Vec& r, const PartQuery& q, F&& f) const {
        auto e = excess(r);
        std::vector<int> vars;
        for (std::size_t k = 0; k < r.size(); ++k)
            if (r[k] && !(q.irreducible_only && zero_[k] && q.anchor != k)) vars.push_back(static_cast<int>(k));
        if (vars.empty()) return;
        const auto n = vars.size();
        std::vector<int> local(r.size(), -1);
        for (std::size_t x = 0; x < n; ++x) local[vars[x]] = static_cast<int>(x);
        detail::BoxCP cp(n);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::vector<detail::BoxCP::Term> terms;
            for (int v : vars)
                if (cols_[v][i]) terms.push_back({local[v], cols_[v][i]});
            if (!terms.empty()) cp.add_row(std::move(terms), 0, e[i]);
        }
        for (auto& [w, k] : q.at_least) {
            std::vector<detail::BoxCP::Term> terms;
            std::int64_t maxw = 0;
            for (int v : vars)
                if (w[v]) {
                    terms.push_back({local[v], w[v]});
                    maxw += static_cast<std::int64_t>(w[v]) * r[v];
                }
            cp.add_row(std::move(terms), k, std::max(maxw, k));
        }
        std::vector<std::vector<int>> nb(n);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                if (x != y && (q.irreducible_only ? shares_row(vars[x], vars[y]) : shares_name(vars[x], vars[y])))
                    nb[x].push_back(static_cast<int>(y));

        using Box = std::vector<std::int64_t>;
        enum : char { untouched, in, out, pending };
        bool stop = false;
        Vec p(r.size(), 0);
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);

        // some nonnegative member stays removable in every completion of size >= 2
        auto reducible = [&](const Box& lo, const Box& hi) {
            if (!q.irreducible_only) return false;
            std::int64_t size = 0;
            for (std::size_t x = 0; x < n; ++x) size += lo[x];
            if (size < 2) return false;
            std::vector<std::int64_t> smin(rows_, 0);
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t i = 0; i < rows_; ++i) {
                    auto c = cols_[vars[x]][i];
                    smin[i] += c > 0 ? c * lo[x] : c * hi[x];
                }
            for (std::size_t x = 0; x < n; ++x) {
                if (!lo[x] || !nonneg_[vars[x]]) continue;
                bool removable = true;
                for (std::size_t i = 0; i < rows_ && removable; ++i)
                    removable = smin[i] >= cols_[vars[x]][i];
                if (removable) return true;
            }
            return false;
        };

        auto leaf = [&](Box lo, Box hi, const std::vector<char>& st) {
            std::vector<int> order;
            for (std::size_t x = 0; x < n; ++x) {
                if (st[x] == in) {
                    order.push_back(static_cast<int>(x));
                } else {
                    if (lo[x] > 0) return;
                    hi[x] = 0;
                }
            }
            if (!cp.propagate(lo, hi) || reducible(lo, hi)) return;
            cp.enumerate(order, lo, hi, [&](const Box& v) {
                std::fill(p.begin(), p.end(), 0);
                for (std::size_t x = 0; x < n; ++x) p[vars[x]] = static_cast<std::int32_t>(v[x]);
                if (!q.allow_whole && p == r) return true;
                if (q.irreducible_only && !plausibly_irreducible(p)) return true;
                if (!f(p)) stop = true;
                return !stop;
            });
        };

        std::function<void(const Box&, const Box&, const std::vector<char>&, const std::vector<int>&, std::size_t)>
            grow = [&](const Box& lo, const Box& hi, const std::vector<char>& st, const std::vector<int>& ext,
                       std::size_t pos) {
                if (stop) return;
                if (pos == ext.size()) return leaf(lo, hi, st);
                int v = ext[pos];
                std::vector<int> seed{v};
                if (lo[v] == 0) {
                    auto l2 = lo, h2 = hi;
                    auto st2 = st;
                    h2[v] = 0;
                    st2[v] = out;
                    if (cp.propagate(l2, h2, &seed) && !reducible(l2, h2)) grow(l2, h2, st2, ext, pos + 1);
                }
                if (stop || hi[v] == 0) return;
                auto l2 = lo, h2 = hi;
                auto st2 = st;
                auto ext2 = ext;
                l2[v] = std::max<std::int64_t>(l2[v], 1);
                st2[v] = in;
                for (int w : nb[v])
                    if (st2[w] == untouched) {
                        st2[w] = pending;
                        ext2.push_back(w);
                    }
                if (cp.propagate(l2, h2, &seed) && !reducible(l2, h2)) grow(l2, h2, st2, ext2, pos + 1);
            };

        Box lo(n, 0), hi(n);
        for (std::size_t x = 0; x < n; ++x) {
            hi[x] = r[vars[x]];
            if (!q.min.empty()) lo[x] = q.min[vars[x]];
        }
        std::vector<int> roots;
        if (q.anchor) {
            roots.push_back(local[*q.anchor]);
        } else {
            for (std::size_t x = 0; x < n; ++x)
                if (lo[x] > 0) {
                    roots.push_back(static_cast<int>(x));
                    break;
                }
            if (roots.empty()) roots = all;
        }
        std::vector<char> st(n, untouched);
        for (int root : roots) {
            if (stop) break;
            auto l2 = lo, h2 = hi;
            auto st2 = st;
            l2[root] = std::max<std::int64_t>(l2[root], 1);
            st2[root] = in;
            std::vector<int> ext;
            for (int w : nb[root])
                if (st2[w] == untouched) {
                    st2[w] = pending;
                    ext.push_back(w);
                }
            if (l2[root] <= h2[root] && cp.propagate(l2, h2)) grow(l2, h2, st2, ext, 0);
            // later roots never contain this one
            st[root] = out;
            hi[root] = 0;
            if (lo[root] > 0) break;
        }
    }

    bool shares_name(std::size_t a, std::size_t b) const {
        for (std::size_t i = 0; i < rows_; ++i)
            if (touch_[a][i] && touch_[b][i]) return true;
        return false;
    }

    bool shares_row(std::size_t a, std::size_t b) const {
        for (std::size_t i = 0; i < rows_; ++i)
            if (cols_[a][i] && cols_[b][i]) return true;
        return false;
    }

    // Cheap necessary conditions for p not splitting into two valid parts.
    bool plausibly_irreducible(const Vec& p) const {
        std::int64_t size = 0;
        for (auto x : p) size += x;
        if (size <= 1) return true;
        std::vector<std::size_t> support;
        for (std::size_t k = 0; k < p.size(); ++k)
            if (p[k]) support.push_back(k);
        // support connected through shared rows
        std::vector<char> seen(p.size(), 0);
        std::vector<std::size_t> queue{support[0]};
        seen[support[0]] = 1;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (auto v : support)
                if (!seen[v] && shares_row(queue[h], v)) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
        if (queue.size() != support.size()) return false;
        auto e = excess(p);
        for (auto k : support) {
            if (zero_[k]) return false;
            if (!nonneg_[k]) continue;
            bool rest_ok = true;
            for (std::size_t i = 0; i < rows_; ++i) rest_ok &= e[i] - cols_[k][i] >= 0;
            if (rest_ok) return false;
        }
        return true;
    }

  private:
    // fewest monomers in a part p <= total with M p >= 0 containing class k
    std::int64_t smallest_part(std::size_t k) const {
        if (nonneg_[k]) return 1;
        const auto n = cols_.size();
        detail::BoxCP cp(n);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::vector<detail::BoxCP::Term> terms;
            std::int64_t hi = 0;
            for (std::size_t v = 0; v < n; ++v)
                if (cols_[v][i]) {
                    terms.push_back({static_cast<int>(v), cols_[v][i]});
                    if (cols_[v][i] > 0) hi += static_cast<std::int64_t>(cols_[v][i]) * total_[v];
                }
            if (!terms.empty()) cp.add_row(std::move(terms), 0, hi);
        }
        std::vector<detail::BoxCP::Term> size;
        std::int64_t all = 0;
        for (std::size_t v = 0; v < n; ++v) {
            size.push_back({static_cast<int>(v), 1});
            all += total_[v];
        }
        auto sz = cp.add_row(std::move(size), 0, all);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (std::int64_t s = 2; s <= all; ++s) {
            cp.set_bounds(sz, s, s);
            std::vector<std::int64_t> lo(n, 0), hi(total_.begin(), total_.end());
            lo[k] = 1;
            bool found = false;
            cp.enumerate(order, lo, hi, [&](const std::vector<std::int64_t>&) {
                found = true;
                return false;
            });
            if (found) return s;
        }
        return all;
    }

    std::size_t rows_ = 0;
    std::vector<std::vector<int>> cols_;
    std::vector<std::vector<char>> touch_;  // rows holding any domain of the class
    std::vector<std::vector<std::size_t>> class_types_;
    std::vector<std::size_t> type_class_;
    Vec total_;
    std::vector<char> nonneg_, zero_;
    std::vector<std::int64_t> min_size_;
    Relabeling relabeling_;
};

class PartitionSolver {
  public:
    using Vec = PartitionProblem::Vec;

    explicit PartitionSolver(const PartitionProblem& p) : P_(p) {}

    // maximum number of valid parts of a valid residual r
    std::int64_t solve(const Vec& r) { return entry(r).value; }

    std::vector<Vec> witness(const Vec& r) {
        std::vector<Vec> out;
        collect(r, out);
        return out;
    }

    // some proper valid part with valid remainder, if any
    std::optional<Vec> find_split(const Vec& r) {
        std::optional<Vec> hit;
        std::int64_t size = 0;
        for (auto x : r) size += x;
        if (size < 2) return std::nullopt;
        for (std::size_t k = 0; k < r.size(); ++k)
            if (r[k] && P_.zero(k)) {
                Vec p(r.size(), 0);
                p[k] = 1;
                return p;
            }
        auto groups = P_.split_components(r);
        if (groups.size() > 1) {
            Vec p(r.size(), 0);
            for (auto k : groups[0]) p[k] = r[k];
            return p;
        }
        auto anchor = choose_anchor(r);
        if (!anchor) return std::nullopt;
        PartitionProblem::PartQuery q;
        q.anchor = anchor;
        P_.for_each_part(r, q, [&](const Vec& p) {
            hit = p;
            return false;
        });
        return hit;
    }

    std::size_t states() const { return memo_.size(); }

  private:
    struct Entry {
        std::int64_t value = 0;
        int kind = 0;  // 0 whole, 1 part + rest, 2 independent groups
        bool exact = true;
        Vec part;
    };

    std::optional<std::size_t> choose_anchor(const Vec& r) const {
        std::optional<std::size_t> best;
        std::int64_t best_key = -1;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (!r[k] || P_.zero(k)) continue;
            std::int64_t neg = 0;
            for (auto x : P_.column(k))
                if (x < 0) neg -= x;
            if (neg > best_key) {
                best_key = neg;
                best = k;
            }
        }
        return best;
    }

    // Exact when the result exceeds floor; otherwise only "value <= floor" is known.
    const Entry& entry(const Vec& r, std::int64_t floor = -1) {
        auto it = memo_.find(r);
        if (it != memo_.end() && (it->second.exact || it->second.value <= floor)) return it->second;
        Entry e = compute(r, floor);
        if (it != memo_.end()) return it->second = std::move(e);
        return memo_.emplace(r, std::move(e)).first->second;
    }

    Entry compute(const Vec& r, std::int64_t floor) {
        Entry e;
        std::int64_t size = 0;
        for (auto x : r) size += x;
        if (size == 0) return e;
        std::int64_t zeros = 0;
        for (std::size_t k = 0; k < r.size(); ++k)
            if (P_.zero(k)) zeros += r[k];
        auto groups = P_.split_components(r);
        if (zeros > 0 || groups.size() > 1) {
            e.kind = 2;
            e.value = zeros;
            for (auto& g : groups) {
                Vec sub(r.size(), 0);
                for (auto k : g) sub[k] = r[k];
                e.value += entry(sub).value;
            }
            return e;
        }
        e.value = 1;
        auto ub = static_cast<std::int64_t>(P_.upper_bound(r) + 1e-9);
        if (ub <= 1) return e;
        if (ub <= floor) {
            e.value = ub;
            e.exact = false;
            return e;
        }
        auto anchor = choose_anchor(r);
        std::vector<Vec> parts;
        PartitionProblem::PartQuery q;
        q.anchor = anchor;
        P_.for_each_part(r, q, [&](const Vec& p) {
            parts.push_back(p);
            return true;
        });
        auto sz = [](const Vec& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); };
        std::stable_sort(parts.begin(), parts.end(), [&](const Vec& a, const Vec& b) { return sz(a) < sz(b); });
        Vec rest(r.size());
        for (auto& p : parts) {
            for (std::size_t k = 0; k < r.size(); ++k) rest[k] = r[k] - p[k];
            auto target = std::max(e.value, floor);
            if (1 + static_cast<std::int64_t>(P_.upper_bound(rest) + 1e-9) <= target) continue;
            auto v = 1 + entry(rest, target - 1).value;
            if (v > target) {
                e.value = v;
                e.kind = 1;
                e.part = p;
                if (e.value >= ub) break;
            }
        }
        if (e.value <= floor) {
            e.value = floor;
            e.exact = false;
        }
        return e;
    }

    void collect(const Vec& r, std::vector<Vec>& out) {
        std::int64_t size = 0;
        for (auto x : r) size += x;
        if (size == 0) return;
        const Entry e = entry(r);
        if (e.kind == 0) {
            out.push_back(r);
        } else if (e.kind == 1) {
            out.push_back(e.part);
            Vec rest(r.size());
            for (std::size_t k = 0; k < r.size(); ++k) rest[k] = r[k] - e.part[k];
            collect(rest, out);
        } else {
            for (std::size_t k = 0; k < r.size(); ++k)
                if (P_.zero(k))
                    for (std::int32_t i = 0; i < r[k]; ++i) {
                        Vec one(r.size(), 0);
                        one[k] = 1;
                        out.push_back(one);
                    }
            for (auto& g : P_.split_components(r)) {
                Vec sub(r.size(), 0);
                for (auto k : g) sub[k] = r[k];
                collect(sub, out);
            }
        }
    }

    const PartitionProblem& P_;
    std::unordered_map<Vec, Entry, detail::VecHash> memo_;
};

}  // namespace tbn
