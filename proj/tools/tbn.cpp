// tbn: command-line front end.
// Exit codes: 0 success, 1 negative analysis result (unstable, output 0,
// unsatisfiable predicate), 2 usage or parse error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tbn/tbn.hpp"

namespace {

using nlohmann::json;

struct GenOpts {
    std::int64_t n = 2;
    std::int64_t k = 2;
    bool input = false;
    bool no_input1 = false, no_input2 = false;
    std::vector<int> missing;
    bool or_merge = false;
    int output = 0;
    bool indexed = false;
};

void add_gen_options(CLI::App* app, GenOpts& g) {
    app->add_option("--n", g.n, "redundancy / chain length");
    app->add_option("--k", g.k, "layers / depth / branching / counter bits");
    app->add_flag("--input", g.input, "translator: include the input monomer");
    app->add_flag("--no-input1", g.no_input1, "and2: omit i1");
    app->add_flag("--no-input2", g.no_input2, "and2: omit i2");
    app->add_option("--missing", g.missing, "andtree: absent leaves (1-based)")->delimiter(',');
    app->add_flag("--or-merge", g.or_merge, "andtree: root gates share one output");
    app->add_flag("--indexed", g.indexed, "counter: row-indexed glues");
}

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw tbn::Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw tbn::Error("cannot write '" + path + "'");
    out << text;
}

bool looks_json(const std::string& s) {
    auto p = s.find_first_not_of(" \t\r\n");
    return p != std::string::npos && s[p] == '{';
}

tbn::TreeSpec tree_spec(const GenOpts& g) {
    if (g.k < 1 || g.k > 16) throw tbn::Error("andtree needs 1 <= k <= 16");
    auto s = tbn::TreeSpec::all_present(static_cast<int>(g.k), g.n);
    s.or_merge = g.or_merge;
    for (int j : g.missing) {
        if (j < 1 || static_cast<std::size_t>(j) > s.inputs.size()) throw tbn::Error("leaf " + std::to_string(j) + " out of range");
        s.inputs[j - 1] = false;
    }
    return s;
}

std::optional<tbn::Generated> generate(const std::string& what, const GenOpts& g) {
    if (what == "fig1") return tbn::gen_fig1();
    if (what == "and2") return tbn::gen_and_gate_basic(!g.no_input1, !g.no_input2);
    if (what == "translator") return tbn::gen_translator(g.n, g.k, g.input);
    if (what == "andtree") return tbn::gen_and_tree(tree_spec(g));
    if (what == "treepoly") return tbn::gen_tree_polymer(g.n, g.k);
    return std::nullopt;
}

// a generator name, a path, or "-"
tbn::TbnFile load(const std::string& src, const GenOpts& g) {
    if (auto x = generate(src, g)) return {x->tbn, x->counts};
    auto text = read_all(src);
    if (looks_json(text)) {
        try {
            return tbn::tbn_from_json(json::parse(text));
        } catch (const json::parse_error& e) {
            throw tbn::Error(std::string("bad JSON: ") + e.what());
        }
    }
    return tbn::parse_tbn(text);
}

tbn::Configuration load_cfg(const std::string& path, const tbn::Tbn& t) {
    auto text = read_all(path);
    if (looks_json(text)) {
        try {
            return tbn::cfg_from_json(json::parse(text), t);
        } catch (const json::parse_error& e) {
            throw tbn::Error(std::string("bad JSON: ") + e.what());
        }
    }
    return tbn::parse_cfg(text, t);
}

tbn::atam::TileSystem load_system(const std::string& src, const GenOpts& g) {
    if (src == "counter")
        return tbn::atam::gen_counter(static_cast<int>(g.k), g.indexed ? tbn::atam::Variant::indexed : tbn::atam::Variant::plain);
    try {
        return tbn::atam::system_from_json(json::parse(read_all(src)));
    } catch (const json::parse_error& e) {
        throw tbn::Error(std::string("bad JSON: ") + e.what());
    }
}

std::string big(const tbn::BigInt& v) { return v.str(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermodynamic binding network toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    std::string dot_path;
    int threads = 1;
    app.add_flag("--json", as_json, "JSON output");
    app.add_option("--threads", threads, "worker threads (the solver is single-threaded; accepted for compatibility)");

    GenOpts g;
    std::string src = "-", cfg_path, predicate, output, convention = "weak", filter = "stable";

    auto* gen = app.add_subcommand("gen", "generate a construction");
    std::string what;
    gen->add_option("what", what, "fig1|and2|translator|andtree|treepoly|counter")->required();
    add_gen_options(gen, g);
    gen->add_option("--cfg", cfg_path, "also write the intended configuration (translator, andtree)");
    gen->add_option("--output", g.output, "translator: intended output for --cfg");

    auto* solve = app.add_subcommand("solve", "stable entropy and a stable configuration");
    solve->add_option("source", src, "file, '-', or generator name");
    add_gen_options(solve, g);
    bool witness = false;
    solve->add_flag("--witness", witness, "print the stable configuration");
    solve->add_option("--output", output, "evaluate this output monomer");
    solve->add_option("--convention", convention, "weak|strong")->check(CLI::IsMember({"weak", "strong"}));
    solve->add_option("--dot", dot_path, "write the stable configuration as DOT");

    auto* check = app.add_subcommand("check", "metrics and stability of a configuration");
    check->add_option("source", src, "file, '-', or generator name")->required();
    check->add_option("cfg", cfg_path, "configuration file")->required();
    add_gen_options(check, g);
    check->add_option("--dot", dot_path, "write the configuration as DOT");

    auto* dist = app.add_subcommand("dist", "distance to stability for a predicate");
    dist->add_option("source", src, "file, '-', or generator name");
    add_gen_options(dist, g);
    dist->add_option("--predicate", predicate, "free:<m> | coloc:<d>:<k> | together:<m1>,<m2>")->required();

    auto* enumerate = app.add_subcommand("enumerate", "brute-force configurations (small inputs)");
    enumerate->add_option("source", src, "file, '-', or generator name");
    add_gen_options(enumerate, g);
    enumerate->add_option("--filter", filter, "all|saturated|stable")->check(CLI::IsMember({"all", "saturated", "stable"}));
    std::size_t limit = 0;
    enumerate->add_option("--limit", limit, "stop after this many");

    auto* atam = app.add_subcommand("atam", "tile assembly");
    atam->require_subcommand(1);
    std::string policy = "scan";
    std::uint64_t seed = 0;
    bool copies = false;
    int max_k = 3;
    auto* sim = atam->add_subcommand("simulate", "grow a terminal assembly");
    auto* interp = atam->add_subcommand("interpret", "terminal assembly as a TBN configuration");
    auto* acheck = atam->add_subcommand("check", "stability of the interpreted counter");
    for (auto* s : {sim, interp}) {
        s->add_option("system", src, "tile system JSON, '-', or 'counter'")->default_val("counter");
        add_gen_options(s, g);
        s->add_option("--policy", policy, "scan|random")->check(CLI::IsMember({"scan", "random"}));
        s->add_option("--seed", seed, "random policy seed");
    }
    interp->add_flag("--strength-as-copies", copies, "strength-2 glues become two domains");
    interp->add_option("--cfg", cfg_path, "write the configuration here");
    interp->add_option("--dot", dot_path, "write the configuration as DOT");
    add_gen_options(acheck, g);
    acheck->add_option("--max-k", max_k, "solver guard");

    auto* bound = app.add_subcommand("bound", "polymer size bounds");
    std::int64_t bd = 1, bm = 1, ba = 1, bl = 3;
    bound->add_option("--d", bd);
    bound->add_option("--m", bm);
    bound->add_option("--a", ba);
    auto* bpoly = bound->add_subcommand("polymer", "2(m+d)(ad)^(2d+3)");
    bpoly->add_option("--d", bd)->required();
    bpoly->add_option("--m", bm)->required();
    bpoly->add_option("--a", ba)->required();
    auto* bacyc = bound->add_subcommand("acyclic", "acyclic polymer bound");
    bacyc->add_option("--d", bd)->required();
    bacyc->add_option("--l", bl)->required();
    auto* bfk = bound->add_subcommand("farkasK", "(ad)^(d+1)");
    bfk->add_option("--a", ba)->required();
    bfk->add_option("--d", bd)->required();

    auto* energy = app.add_subcommand("energy", "Gibbs free energy (kcal/mol)");
    std::int64_t eh = -1, esize = -1, es = -1;
    tbn::EnergyParams ep;
    energy->add_option("source", src, "TBN file (with cfg)");
    energy->add_option("cfg", cfg_path, "configuration file");
    energy->add_option("--enthalpy", eh, "bonds (H)");
    energy->add_option("--size", esize, "monomer instances");
    energy->add_option("--entropy", es, "polymers (S)");
    energy->add_option("--l", ep.l, "bases per domain");
    energy->add_option("--C", ep.molarity, "effective molarity");
    energy->add_option("--dgbp", ep.dg_bp);
    energy->add_option("--dgassoc", ep.dg_assoc);
    energy->add_option("--rt", ep.rt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }
    if (threads < 1) {
        std::cerr << "error: --threads must be positive\n";
        return 2;
    }

    try {
        if (*gen) {
            if (what == "counter") {
                if (g.k < 1 || g.k > 20) throw tbn::Error("counter needs 1 <= k <= 20");
                std::cout << tbn::atam::system_to_json(load_system("counter", g)).dump(2) << "\n";
                return 0;
            }
            auto x = generate(what, g);
            if (!x) throw tbn::Error("unknown generator '" + what + "'");
            if (!cfg_path.empty()) {
                tbn::Configuration c;
                if (what == "translator") c = tbn::intended_translator_config(g.n, g.k, g.output);
                else if (what == "andtree") c = tbn::untriggered_gate_config(tree_spec(g));
                else throw tbn::Error("--cfg is available for translator and andtree");
                write_file(cfg_path, as_json ? tbn::cfg_to_json(c).dump(2) + "\n" : tbn::write_cfg(c));
            }
            std::cout << (as_json ? tbn::tbn_to_json(x->tbn, x->counts).dump(2) + "\n" : tbn::write_tbn(x->tbn, x->counts));
            return 0;
        }

        if (*solve) {
            auto f = load(src, g);
            auto r = tbn::stable_entropy(f.tbn, f.counts);
            std::optional<tbn::Output> out;
            if (!output.empty())
                out = tbn::evaluate_output(f.tbn, f.counts, output,
                                           convention == "strong" ? tbn::Convention::strong : tbn::Convention::weak);
            if (!dot_path.empty()) write_file(dot_path, tbn::to_dot(r.config));
            if (as_json) {
                json j{{"stable_entropy", r.entropy}};
                if (witness) j["config"] = tbn::cfg_to_json(r.config);
                if (out) j["output"] = tbn::to_string(*out);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "stable_entropy: " << r.entropy << "\n";
                if (out) std::cout << "output: " << tbn::to_string(*out) << "\n";
                if (witness) std::cout << tbn::write_cfg(r.config);
            }
            return out && *out == tbn::Output::zero ? 1 : 0;
        }

        if (*check) {
            auto f = load(src, g);
            auto c = load_cfg(cfg_path, f.tbn);
            auto m = tbn::config_metrics(c);
            auto s = tbn::stable_entropy(f.tbn, c.collection()).entropy;
            bool stable = m.saturated && m.entropy == s;
            if (!dot_path.empty()) write_file(dot_path, tbn::to_dot(c));
            if (as_json) {
                std::cout << json{{"enthalpy", m.enthalpy}, {"entropy", m.entropy}, {"saturated", m.saturated},
                                  {"stable_entropy", s}, {"stable", stable}, {"polymer_sizes", m.polymer_sizes}}
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << "enthalpy: " << m.enthalpy << "\nentropy: " << m.entropy
                          << "\nsaturated: " << (m.saturated ? "yes" : "no") << "\nstable_entropy: " << s
                          << "\nstable: " << (stable ? "yes" : "no") << "\n";
            }
            return stable ? 0 : 1;
        }

        if (*dist) {
            auto f = load(src, g);
            auto p = tbn::Predicate::parse(predicate);
            auto d = tbn::distance_to_stability(f.tbn, f.counts, p);
            if (as_json) std::cout << json{{"predicate", p.str()}, {"distance", d ? json(*d) : json(nullptr)}}.dump(2) << "\n";
            else std::cout << (d ? std::to_string(*d) : "unsatisfiable") << "\n";
            return d ? 0 : 1;
        }

        if (*enumerate) {
            auto f = load(src, g);
            auto fl = filter == "all" ? tbn::Filter::all : filter == "saturated" ? tbn::Filter::saturated : tbn::Filter::stable;
            auto cs = tbn::enumerate_configurations(f.tbn, f.counts, fl, limit);
            if (as_json) {
                json j = json::array();
                for (auto& c : cs) j.push_back(tbn::cfg_to_json(c));
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "count: " << cs.size() << "\n";
                for (auto& c : cs) {
                    auto m = tbn::config_metrics(c);
                    std::cout << "--- H=" << m.enthalpy << " S=" << m.entropy << "\n" << tbn::write_cfg(c);
                }
            }
            return 0;
        }

        if (*atam) {
            using namespace tbn::atam;
            auto pol = policy == "random" ? Policy::random(seed) : Policy::scan();
            if (*sim) {
                auto a = simulate(load_system(src, g), pol);
                if (as_json) std::cout << assembly_to_json(a).dump(2) << "\n";
                else std::cout << ascii(a) << "terminal: " << (a.terminal ? "yes" : "no") << "\ntiles: " << a.tiles.size() << "\n";
                return a.terminal ? 0 : 1;
            }
            if (*interp) {
                auto a = simulate(load_system(src, g), pol);
                if (!a.terminal) throw tbn::Error("assembly did not terminate");
                auto in = atam_to_tbn(a, copies);
                auto c = in.config.collection();
                if (!cfg_path.empty()) write_file(cfg_path, as_json ? tbn::cfg_to_json(in.config).dump(2) + "\n" : tbn::write_cfg(in.config));
                if (!dot_path.empty()) write_file(dot_path, tbn::to_dot(in.config));
                std::cout << (as_json ? tbn::tbn_to_json(in.tbn, c).dump(2) + "\n" : tbn::write_tbn(in.tbn, c));
                return 0;
            }
            auto r = check_counter_stability(static_cast<int>(g.k), g.indexed ? Variant::indexed : Variant::plain, max_k);
            if (as_json) {
                json j{{"k", r.k}, {"variant", g.indexed ? "indexed" : "plain"}, {"terminal", r.terminal},
                       {"rectangle", r.rectangle}, {"saturated", r.saturated}, {"stable_entropy", r.stable_entropy},
                       {"stable", r.stable}, {"self_saturated_monomer", r.self_saturated_monomer}};
                if (r.witness) j["witness"] = tbn::cfg_to_json(*r.witness);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "terminal: " << (r.terminal ? "yes" : "no") << "\nrectangle: " << (r.rectangle ? "yes" : "no")
                          << "\nsaturated: " << (r.saturated ? "yes" : "no") << "\nstable_entropy: " << r.stable_entropy
                          << "\nstable: " << (r.stable ? "yes" : "no") << "\n";
                if (r.witness) std::cout << "self_saturated_monomer: " << (r.self_saturated_monomer ? "yes" : "no") << "\n";
            }
            return r.stable ? 0 : 1;
        }

        if (*bound) {
            std::string v;
            if (*bacyc) v = big(tbn::acyclic_bound(bd, bl));
            else if (*bfk) v = big(tbn::farkas_K(ba, bd));
            else v = big(tbn::polymer_size_bound(bd, bm, ba));
            std::cout << (as_json ? json{{"value", v}}.dump() : v) << "\n";
            return 0;
        }

        if (*energy) {
            double e;
            if (!cfg_path.empty()) {
                auto f = load(src, g);
                e = tbn::gibbs_free_energy(tbn::config_metrics(load_cfg(cfg_path, f.tbn)), ep);
            } else {
                if (eh < 0 || esize < 0 || es < 0) throw tbn::Error("energy needs --enthalpy, --size and --entropy, or a TBN and a configuration");
                e = tbn::gibbs_free_energy(eh, esize, es, ep);
            }
            std::ostringstream ss;
            ss << std::setprecision(12) << e;
            std::cout << (as_json ? json{{"kcal_per_mol", e}}.dump() : ss.str()) << "\n";
            return 0;
        }
    } catch (const tbn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
