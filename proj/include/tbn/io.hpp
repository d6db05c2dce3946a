#pragma once

#include <cctype>
#include <map>
#include <numeric>
#include <tuple>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "model.hpp"

namespace tbn {

class ParseError : public Error {
  public:
    ParseError(std::size_t line, std::size_t col, const std::string& msg)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }

  private:
    std::size_t line_, col_;
};

namespace detail {

struct Token {
    std::string text;
    std::size_t col;  // 1-based
};

inline std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '{' || line[i] == '}') {
            out.push_back({std::string(1, line[i]), i + 1});
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '{' && line[j] != '}')
            ++j;
        out.push_back({line.substr(i, j - i), i + 1});
        i = j;
    }
    return out;
}

inline std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        out.push_back(l);
    }
    return out;
}

inline std::int64_t parse_count(const Token& t, std::size_t ln) {
    if (t.text.empty() || t.text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(ln, t.col, "expected a nonnegative integer, got '" + t.text + "'");
    try {
        return std::stoll(t.text);
    } catch (const std::exception&) {
        throw ParseError(ln, t.col, "count out of range");
    }
}

}  // namespace detail

struct TbnFile {
    Tbn tbn;
    Collection counts;
};

inline TbnFile parse_tbn(const std::string& text) {
    struct Decl {
        std::string name;
        std::vector<Domain> doms;
        std::size_t line, col;
    };
    std::vector<Decl> decls;
    std::vector<std::tuple<std::string, std::int64_t, std::size_t, std::size_t>> counts;
    auto lines = detail::lines_of(text);
    for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
        auto toks = detail::tokenize(lines[ln - 1]);
        if (toks.empty()) continue;
        auto& kw = toks[0];
        if (kw.text == "monomer") {
            if (toks.size() < 2) throw ParseError(ln, kw.col, "expected monomer name");
            std::string name = toks[1].text;
            std::size_t first = 2;
            if (!name.empty() && name.back() == ':') name.pop_back();
            else if (toks.size() > 2 && toks[2].text == ":") first = 3;
            else if (toks.size() > 2 && toks[2].text.front() == ':') {
                toks[2].text.erase(0, 1);
                toks[2].col += 1;
            } else
                throw ParseError(ln, toks[1].col + toks[1].text.size(), "expected ':' after monomer name");
            if (!is_identifier(name)) throw ParseError(ln, toks[1].col, "bad monomer name '" + name + "'");
            std::vector<Domain> doms;
            for (std::size_t k = first; k < toks.size(); ++k) {
                if (toks[k].text.empty()) continue;
                try {
                    doms.push_back(Domain::parse(toks[k].text));
                } catch (const Error& e) {
                    throw ParseError(ln, toks[k].col, e.what());
                }
            }
            if (doms.empty()) throw ParseError(ln, kw.col, "monomer '" + name + "' has no domains");
            for (auto& d : decls)
                if (d.name == name) throw ParseError(ln, toks[1].col, "duplicate monomer '" + name + "'");
            decls.push_back({name, doms, ln, kw.col});
        } else if (kw.text == "count") {
            if (toks.size() != 3) throw ParseError(ln, kw.col, "expected 'count <name> <n>'");
            counts.emplace_back(toks[1].text, detail::parse_count(toks[2], ln), ln, toks[1].col);
        } else {
            throw ParseError(ln, kw.col, "unknown statement '" + kw.text + "'");
        }
    }
    std::vector<MonomerType> types;
    for (auto& d : decls) types.emplace_back(d.name, d.doms);
    TbnFile f{Tbn(types), {}};
    f.counts = Collection::ones(f.tbn);
    for (auto& [name, n, ln, col] : counts) {
        auto i = f.tbn.find_monomer(name);
        if (!i) throw ParseError(ln, col, "count for unknown monomer '" + name + "'");
        f.counts.counts[*i] = n;
    }
    return f;
}

inline std::string monomer_line(const MonomerType& m) {
    std::string s = "monomer " + m.name() + ":";
    for (auto& d : m.domains()) s += " " + d.str();
    return s;
}

inline std::string write_tbn(const Tbn& t, const Collection& c) {
    std::string s;
    for (auto& m : t.monomers()) s += monomer_line(m) + "\n";
    for (std::size_t j = 0; j < t.num_monomers(); ++j)
        if (c.counts.at(j) != 1) s += "count " + t.monomer(j).name() + " " + std::to_string(c.counts[j]) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// .cfg: polymer { M#0 N#1 } blocks, then bond M#0.<slot> N#1.<slot>
// slot = index into the monomer's sorted domain list

inline std::string instance_name(const Configuration& a, std::size_t i) {
    return a.type_of(i).name() + "#" + std::to_string(a.ordinal(i));
}

inline std::string write_cfg(const Configuration& a) {
    auto comp = a.components();
    std::size_t n = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::string s;
    for (std::size_t c = 0; c < n; ++c) {
        s += "polymer {";
        for (std::size_t i = 0; i < a.size(); ++i)
            if (comp[i] == c) s += " " + instance_name(a, i);
        s += " }\n";
    }
    for (auto& b : a.bonds())
        s += "bond " + instance_name(a, b.a.monomer) + "." + std::to_string(b.a.slot) + " " +
             instance_name(a, b.b.monomer) + "." + std::to_string(b.b.slot) + "\n";
    return s;
}

namespace detail {

struct InstanceTable {
    const Tbn& tbn;
    std::vector<std::size_t> inst;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;  // (type, ordinal) -> instance
    std::vector<std::size_t> next;

    explicit InstanceTable(const Tbn& t) : tbn(t), next(t.num_monomers(), 0) {}

    // "M#3" or "M"; throws Error on unknown names
    std::size_t declare(const std::string& ref) {
        auto h = ref.find('#');
        auto type = tbn.monomer_index(ref.substr(0, h));
        std::size_t ord = next[type];
        if (h != std::string::npos) ord = std::stoul(ref.substr(h + 1));
        if (index.count({type, ord})) throw Error("instance '" + ref + "' declared twice");
        index[{type, ord}] = inst.size();
        inst.push_back(type);
        next[type] = std::max(next[type], ord + 1);
        return inst.size() - 1;
    }
    std::size_t lookup(const std::string& ref) const {
        auto h = ref.find('#');
        if (h == std::string::npos) throw Error("bond endpoint '" + ref + "' needs an instance number");
        auto type = tbn.monomer_index(ref.substr(0, h));
        auto it = index.find({type, std::stoul(ref.substr(h + 1))});
        if (it == index.end()) throw Error("undeclared instance '" + ref + "'");
        return it->second;
    }
    SlotRef slot(const std::string& ref) const {
        auto dot = ref.rfind('.');
        if (dot == std::string::npos) throw Error("bond endpoint '" + ref + "' needs '.<slot>'");
        auto m = lookup(ref.substr(0, dot));
        return {m, std::stoul(ref.substr(dot + 1))};
    }

    // instances are renumbered so ordinals within a type follow declaration order
    Configuration build(const std::shared_ptr<const Tbn>& t, std::vector<Bond> bonds) const {
        std::vector<std::pair<std::size_t, std::size_t>> key(inst.size());
        for (auto& [k, v] : index) key[v] = k;
        // keep first-appearance order of types but sort same-type instances by ordinal
        std::vector<std::size_t> pos(inst.size());
        std::map<std::size_t, std::vector<std::size_t>> by_type;
        for (std::size_t i = 0; i < inst.size(); ++i) by_type[inst[i]].push_back(i);
        for (auto& [t2, v] : by_type) {
            auto sorted = v;
            std::sort(sorted.begin(), sorted.end(), [&](auto x, auto y) { return key[x].second < key[y].second; });
            for (std::size_t k = 0; k < v.size(); ++k) pos[sorted[k]] = v[k];
        }
        std::vector<std::size_t> new_inst(inst.size());
        for (std::size_t i = 0; i < inst.size(); ++i) new_inst[pos[i]] = inst[i];
        for (auto& b : bonds) {
            b.a.monomer = pos[b.a.monomer];
            b.b.monomer = pos[b.b.monomer];
        }
        return Configuration(t, std::move(new_inst), std::move(bonds));
    }
};

}  // namespace detail

inline Configuration parse_cfg(const std::string& text, const Tbn& tbn) {
    auto tp = std::make_shared<const Tbn>(tbn);
    detail::InstanceTable tab(*tp);
    std::vector<Bond> bonds;
    auto lines = detail::lines_of(text);
    bool in_block = false;
    std::size_t block_line = 0;
    for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
        auto toks = detail::tokenize(lines[ln - 1]);
        for (std::size_t k = 0; k < toks.size(); ++k) {
            auto& t = toks[k];
            try {
                if (in_block) {
                    if (t.text == "}") in_block = false;
                    else tab.declare(t.text);
                } else if (t.text == "polymer") {
                    if (k + 1 >= toks.size() || toks[k + 1].text != "{")
                        throw ParseError(ln, t.col, "expected '{' after polymer");
                    ++k;
                    in_block = true;
                    block_line = ln;
                } else if (t.text == "bond") {
                    if (k + 2 >= toks.size()) throw ParseError(ln, t.col, "expected two bond endpoints");
                    bonds.push_back({tab.slot(toks[k + 1].text), tab.slot(toks[k + 2].text)});
                    k += 2;
                } else {
                    throw ParseError(ln, t.col, "unexpected '" + t.text + "'");
                }
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception& e) {
                throw ParseError(ln, t.col, e.what());
            }
        }
    }
    if (in_block) throw ParseError(block_line, 1, "unterminated polymer block");
    try {
        return tab.build(tp, std::move(bonds));
    } catch (const Error& e) {
        throw ParseError(lines.size(), 1, e.what());
    }
}

// ---------------------------------------------------------------------------
// JSON mirrors

inline nlohmann::json tbn_to_json(const Tbn& t, const Collection& c) {
    nlohmann::json j;
    j["domains"] = t.domains();
    j["monomers"] = nlohmann::json::array();
    for (auto& m : t.monomers()) {
        std::vector<std::string> ds;
        for (auto& d : m.domains()) ds.push_back(d.str());
        j["monomers"].push_back({{"name", m.name()}, {"domains", ds}});
    }
    j["counts"] = nlohmann::json::object();
    for (std::size_t i = 0; i < t.num_monomers(); ++i) j["counts"][t.monomer(i).name()] = c.counts.at(i);
    return j;
}

inline TbnFile tbn_from_json(const nlohmann::json& j) {
    try {
        std::vector<MonomerType> types;
        for (auto& m : j.at("monomers")) {
            std::vector<Domain> ds;
            for (auto& d : m.at("domains")) ds.push_back(Domain::parse(d.get<std::string>()));
            types.emplace_back(m.at("name").get<std::string>(), ds);
        }
        std::vector<std::string> extra;
        if (j.contains("domains")) extra = j["domains"].get<std::vector<std::string>>();
        TbnFile f{Tbn(types, extra), {}};
        f.counts = Collection::ones(f.tbn);
        if (j.contains("counts"))
            for (auto& [name, n] : j["counts"].items()) {
                auto v = n.get<std::int64_t>();
                if (v < 0) throw Error("negative count for '" + name + "'");
                f.counts.counts[f.tbn.monomer_index(name)] = v;
            }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad TBN JSON: ") + e.what());
    }
}

inline nlohmann::json cfg_to_json(const Configuration& a) {
    nlohmann::json j;
    j["monomers"] = nlohmann::json::array();
    for (std::size_t i = 0; i < a.size(); ++i) j["monomers"].push_back(instance_name(a, i));
    j["bonds"] = nlohmann::json::array();
    for (auto& b : a.bonds())
        j["bonds"].push_back({instance_name(a, b.a.monomer) + "." + std::to_string(b.a.slot),
                              instance_name(a, b.b.monomer) + "." + std::to_string(b.b.slot)});
    return j;
}

inline Configuration cfg_from_json(const nlohmann::json& j, const Tbn& tbn) {
    auto tp = std::make_shared<const Tbn>(tbn);
    detail::InstanceTable tab(*tp);
    try {
        for (auto& m : j.at("monomers")) tab.declare(m.get<std::string>());
        std::vector<Bond> bonds;
        for (auto& b : j.at("bonds")) bonds.push_back({tab.slot(b.at(0).get<std::string>()), tab.slot(b.at(1).get<std::string>())});
        return tab.build(tp, std::move(bonds));
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad configuration JSON: ") + e.what());
    }
}

inline std::string to_dot(const Configuration& a) {
    std::string s = "graph configuration {\n";
    for (std::size_t i = 0; i < a.size(); ++i)
        s += "  \"" + instance_name(a, i) + "\" [label=\"" + a.type_of(i).name() + "\"];\n";
    for (auto& b : a.bonds())
        s += "  \"" + instance_name(a, b.a.monomer) + "\" -- \"" + instance_name(a, b.b.monomer) + "\" [label=\"" +
             a.domain_at(b.a).name + "\"];\n";
    return s + "}\n";
}

}  // namespace tbn
