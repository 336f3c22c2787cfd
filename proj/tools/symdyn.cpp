// symdyn: command-line front end over the library modules.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "symdyn/epitomes.hpp"
#include "symdyn/io.hpp"
#include "symdyn/ncavm.hpp"
#include "symdyn/sofic1d.hpp"

using namespace symdyn;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Config {
    std::uint64_t seed = 1;
    SearchLimits limits;
    std::string format = "json";
    std::string output;
    bool timing = false;
};

struct Report {
    std::string module, command;
    json result;
    std::map<std::string, std::string> artifacts;  // format -> content
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// SYMDYN_LIMITS="node_limit=..,generator_budget=..,threads=.."
void apply_env_limits(SearchLimits& lim) {
    const char* env = std::getenv("SYMDYN_LIMITS");
    if (!env) return;
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError(fmt::format("SYMDYN_LIMITS: expected key=value, got '{}'", item));
        auto key = item.substr(0, eq);
        long long v = 0;
        try {
            v = std::stoll(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError(fmt::format("SYMDYN_LIMITS: bad number in '{}'", item));
        }
        if (v <= 0) throw UsageError(fmt::format("SYMDYN_LIMITS: '{}' must be positive", key));
        if (key == "node_limit") lim.node_limit = static_cast<std::uint64_t>(v);
        else if (key == "generator_budget") lim.generator_budget = static_cast<std::size_t>(v);
        else if (key == "threads") lim.threads = static_cast<int>(v);
        else throw UsageError(fmt::format("SYMDYN_LIMITS: unknown key '{}'", key));
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Inline JSON or a file path.
json read_json(const std::string& arg) {
    std::string text = !arg.empty() && (arg[0] == '{' || arg[0] == '[') ? arg : slurp(arg);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw io::FormatError(fmt::format("malformed JSON in '{}': {}", arg, e.what()));
    }
}

ShiftSpec read_shift(const std::string& arg) {
    for (auto& n : io::builtin_shift_names())
        if (n == arg) return io::builtin_shift(n);
    return io::shift_from_json(read_json(arg));
}

bool looks_like_shift(const json& j) { return j.is_string() || j.contains("builtin") || j.contains("alphabet"); }

std::vector<int> int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError(fmt::format("expected a comma separated integer list, got '{}'", s));
        }
    }
    return out;
}

std::vector<int> digits(const std::string& s) {
    std::vector<int> out;
    for (char c : s) {
        if (c < '0' || c > '9') throw UsageError(fmt::format("expected digits, got '{}'", s));
        out.push_back(c - '0');
    }
    return out;
}

vm::Bits vm_bits(const std::string& s) {
    vm::Bits b;
    for (char c : s) {
        if (c != '0' && c != '1') throw UsageError(fmt::format("expected a bit string, got '{}'", s));
        b.push_back(c - '0');
    }
    return b;
}

std::string bit_string(const vm::Bits& b) {
    std::string s;
    for (int x : b) s += static_cast<char>('0' + x);
    return s;
}

Tiling tiling_from_json(const json& j) {
    Tiling t;
    t.w = j.at("w").get<int>();
    t.h = j.at("h").get<int>();
    for (auto& row : j.at("tiles"))
        for (auto& v : row) t.t.push_back(v.get<int>());
    if (static_cast<int>(t.t.size()) != t.w * t.h) throw io::FormatError("tiling: expected h rows of w tile ids");
    return t;
}

json diagram_rows(const SpaceTimeDiagram& d) {
    json rows = json::array();
    for (int t = 0; t < d.height(); ++t) {
        json r = json::array();
        for (int x = 0; x < d.width(); ++x) r.push_back(d.at(x, t));
        rows.push_back(r);
    }
    return rows;
}


const char* outcome_name(vm::SearchOutcome::Kind k) {
    switch (k) {
        case vm::SearchOutcome::unique: return "unique";
        case vm::SearchOutcome::pair: return "pair";
        case vm::SearchOutcome::error: return "error";
    }
    return "?";
}

json outcome_json(const vm::SearchOutcome& o) {
    return {{"kind", outcome_name(o.kind)}, {"l1", o.l1}, {"i1", o.i1}, {"l2", o.l2}, {"i2", o.i2}, {"steps", o.steps}, {"reason", o.reason}};
}

std::vector<std::vector<vm::Bits>> parse_lists(const std::string& s) {
    std::vector<std::vector<vm::Bits>> lists;
    std::stringstream ss(s);
    std::string list;
    while (std::getline(ss, list, '/')) {
        lists.emplace_back();
        std::stringstream ls(list);
        std::string el;
        while (std::getline(ls, el, ','))
            if (!el.empty()) lists.back().push_back(vm_bits(el));
    }
    return lists;
}

sparse::DensitySpec sparse_spec(int levels) {
    auto spec = sparse::desk_spec();
    if (levels < 1 || levels > static_cast<int>(spec.schedule.size()))
        throw UsageError(fmt::format("--levels must be in [1, {}]", spec.schedule.size()));
    spec.schedule.resize(static_cast<std::size_t>(levels));
    return spec;
}

fix::Simulation fix_simulation(const WangTileSet& rho, int N, bool smallest) {
    if (smallest) return fix::simulate_tileset(rho, 0, fix::smallest_geometry(rho));
    return fix::simulate_tileset(rho, N);
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    try {
        apply_env_limits(cfg.limits);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"symbolic dynamics toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "seed for every randomized step")->capture_default_str();
    app.add_option("--threads", cfg.limits.threads, "worker threads for module searches")->check(CLI::PositiveNumber);
    app.add_option("--node-limit", cfg.limits.node_limit, "search node budget")->check(CLI::PositiveNumber);
    app.add_option("--generator-budget", cfg.limits.generator_budget, "forbidden patterns taken from generators")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "svg", "ppm", "text", "dot"}))
        ->capture_default_str();
    app.add_option("-o,--output", cfg.output, "write output to this file");
    app.add_flag("--timing", cfg.timing, "add wall time to the report and stderr");

    Report rep;
    std::function<void()> action;
    auto on = [&](CLI::App* sub, const char* module, const char* command, std::function<void()> fn) {
        sub->callback([&rep, &action, module, command, fn] {
            rep.module = module;
            rep.command = command;
            action = fn;
        });
    };

    // core
    auto* core = app.add_subcommand("core", "shifts given by forbidden patterns")->require_subcommand(1);
    std::string shift_arg, pattern_arg;
    int margin = 2, n = 3;
    {
        auto* c = core->add_subcommand("check", "admissibility of a finite pattern");
        c->add_option("shift", shift_arg, "builtin name or shift JSON")->required();
        c->add_option("pattern", pattern_arg, "pattern JSON")->required();
        c->add_option("--margin", margin)->check(CLI::NonNegativeNumber)->capture_default_str();
        on(c, "core", "check", [&] {
            auto s = read_shift(shift_arg);
            auto p = io::pattern_from_json(read_json(pattern_arg), s.alphabet);
            rep.result = {{"shift", s.name},
                          {"cells", p.size()},
                          {"locally_admissible", locally_admissible(p, s, cfg.limits.generator_budget)},
                          {"margin", margin},
                          {"with_margin", to_string(admissible_with_margin(p, s, margin, cfg.limits))}};
            rep.artifacts["svg"] = io::svg_pattern(p);
        });
        auto* k = core->add_subcommand("count", "block complexity bounds");
        k->add_option("shift", shift_arg)->required();
        k->add_option("--n", n)->check(CLI::PositiveNumber)->capture_default_str();
        k->add_option("--margin", margin)->check(CLI::NonNegativeNumber)->capture_default_str();
        on(k, "core", "count", [&] {
            auto s = read_shift(shift_arg);
            auto c = block_complexity(s, n, margin, cfg.limits);
            rep.result = {{"shift", s.name}, {"n", n}, {"margin", margin}, {"lo", c.lo}, {"hi", c.hi}, {"exact", c.exact()}};
            rep.artifacts["text"] = c.exact() ? fmt::format("{}\n", c.lo) : fmt::format("[{}, {}]\n", c.lo, c.hi);
        });
    }

    // wang
    auto* wang = app.add_subcommand("wang", "Wang tilings")->require_subcommand(1);
    std::string tiles_arg;
    int W = 4, H = 4;
    {
        auto* s = wang->add_subcommand("solve", "first tiling of a rectangle");
        s->add_option("tileset", tiles_arg)->required();
        s->add_option("--width", W)->check(CLI::PositiveNumber)->capture_default_str();
        s->add_option("--height", H)->check(CLI::PositiveNumber)->capture_default_str();
        on(s, "wang", "solve", [&] {
            auto ts = io::tileset_from_json(read_json(tiles_arg));
            TileLimits tl;
            tl.node_limit = cfg.limits.node_limit;
            auto r = tile_rectangle(ts, W, H, nullptr, TileMode::first, tl);
            rep.result = {{"w", W}, {"h", H}, {"found", !r.tilings.empty()}, {"limit_hit", r.limit_hit}};
            if (!r.tilings.empty()) {
                rep.result["tiling"] = io::to_json(r.tilings.front());
                rep.artifacts["svg"] = io::svg_tiling(ts, r.tilings.front());
            }
        });
        auto* c = wang->add_subcommand("count", "number of tilings of a rectangle");
        c->add_option("tileset", tiles_arg)->required();
        c->add_option("--width", W)->check(CLI::PositiveNumber)->capture_default_str();
        c->add_option("--height", H)->check(CLI::PositiveNumber)->capture_default_str();
        on(c, "wang", "count", [&] {
            auto ts = io::tileset_from_json(read_json(tiles_arg));
            TileLimits tl;
            tl.node_limit = cfg.limits.node_limit;
            auto r = tile_rectangle(ts, W, H, nullptr, TileMode::count, tl);
            rep.result = {{"w", W}, {"h", H}, {"count", r.count}, {"limit_hit", r.limit_hit}};
            rep.artifacts["text"] = fmt::format("{}\n", r.count);
        });
        auto* v = wang->add_subcommand("convert", "shift to Wang tiles, or tiles to a shift");
        v->add_option("input", tiles_arg, "builtin shift name, shift JSON or tileset JSON")->required();
        on(v, "wang", "convert", [&] {
            bool builtin = false;
            for (auto& b : io::builtin_shift_names()) builtin |= b == tiles_arg;
            json j = builtin ? json(tiles_arg) : read_json(tiles_arg);
            if (looks_like_shift(j)) {
                auto r = sft_to_wang(io::shift_from_json(j), cfg.limits);
                rep.result = {{"direction", "shift-to-wang"},
                              {"empty_shift", r.empty_shift},
                              {"c", r.c},
                              {"tileset", io::to_json(r.tiles)},
                              {"letter_of_tile", r.letter_of_tile}};
            } else {
                rep.result = {{"direction", "wang-to-shift"}, {"shift", io::to_json(wang_to_sft(io::tileset_from_json(j)))}};
            }
        });
    }

    // compile
    auto* comp = app.add_subcommand("compile", "machines to shifts of finite type")->require_subcommand(1);
    std::string machine_arg, tape_arg, heads_arg = "0", choices_arg;
    int steps = 4, states = 3, letters = 3;
    double branch = 0.3;
    bool simulate_flag = false, expand = false;
    auto machine_opts = [&](CLI::App* s) {
        s->add_option("machine", machine_arg, "builtin:<name> or machine JSON")->required();
        s->add_flag("--expand", expand, "write rectangle rules out as forbidden windows");
        s->add_flag("--simulate", simulate_flag, "also run the machine and check the diagram");
        s->add_option("--input", tape_arg, "input row as digits (symbol or letter ids)");
        s->add_option("--steps", steps)->check(CLI::NonNegativeNumber)->capture_default_str();
    };
    auto compiled_report = [&](const ShiftSpec& s, json compiled) {
        rep.result = {{"shift", expand ? io::expanded_shift(s) : std::move(compiled)}, {"letters", s.alphabet.size()}};
    };
    auto diagram_report = [&](const SpaceTimeDiagram& d, bool ok, int num_letters) {
        rep.result["diagram"] = diagram_rows(d);
        rep.result["verified"] = ok;
        rep.artifacts["ppm"] = io::ppm(d, num_letters);
    };
    auto builtin_name = [&]() -> std::optional<std::string> {
        if (machine_arg.rfind("builtin:", 0) != 0) return std::nullopt;
        return machine_arg.substr(8);
    };
    {
        auto* t = comp->add_subcommand("tm", "one-head Turing machine");
        machine_opts(t);
        t->add_option("--head", heads_arg, "head position")->capture_default_str();
        t->add_option("--states", states, "states of builtin:random")->check(CLI::PositiveNumber)->capture_default_str();
        on(t, "compile", "tm", [&] {
            TMSpec m;
            if (auto b = builtin_name()) {
                std::mt19937_64 rng(cfg.seed);
                if (*b == "noop") m = machines::noop();
                else if (*b == "unary-successor") m = machines::unary_successor();
                else if (*b == "binary-increment") m = machines::binary_increment();
                else if (*b == "random") m = machines::random_tm(rng, states);
                else throw UsageError(fmt::format("unknown builtin tm '{}' (noop, unary-successor, binary-increment, random)", *b));
            } else {
                m = io::tm_from_json(read_json(machine_arg));
            }
            compiled_report(tm_to_sft(m), io::compiled_shift(m));
            rep.result["machine"] = io::to_json(m);
            if (simulate_flag) {
                auto d = simulate(m, digits(tape_arg), std::stoi(heads_arg), steps);
                diagram_report(d, verify_spacetime(d, m), m.num_letters());
            }
        });
        auto* h = comp->add_subcommand("twohead", "two-head Turing machine");
        machine_opts(h);
        h->add_option("--heads", heads_arg, "head positions h1,h2");
        on(h, "compile", "twohead", [&] {
            TwoHeadTMSpec m;
            if (auto b = builtin_name()) {
                if (*b == "stationary") m = machines::twohead_stationary();
                else if (*b == "copy") m = machines::twohead_copy();
                else throw UsageError(fmt::format("unknown builtin twohead '{}' (stationary, copy)", *b));
            } else {
                m = io::twohead_from_json(read_json(machine_arg));
            }
            compiled_report(twohead_to_sft(m), io::compiled_shift(m));
            rep.result["machine"] = io::to_json(m);
            if (simulate_flag) {
                auto hs = int_list(heads_arg);
                if (hs.size() != 2) throw UsageError("--heads needs two positions");
                auto d = simulate(m, digits(tape_arg), hs[0], hs[1], steps);
                diagram_report(d, verify_spacetime(d, m), num_letters(m));
            }
        });
        auto* a = comp->add_subcommand("nca", "non-deterministic cellular automaton");
        machine_opts(a);
        a->add_option("--choices", choices_arg, "choice indices, row-major over the run");
        a->add_option("--letters", letters, "letters of builtin:random")->check(CLI::Range(2, 16))->capture_default_str();
        a->add_option("--branch", branch, "branching probability of builtin:random")->check(CLI::Range(0.0, 1.0));
        on(a, "compile", "nca", [&] {
            NCASpec ca;
            if (auto b = builtin_name()) {
                std::mt19937_64 rng(cfg.seed);
                if (*b == "identity") ca = machines::identity_ca();
                else if (*b == "full-choice") ca = machines::full_choice_ca();
                else if (*b == "xor") ca = machines::xor_ca();
                else if (*b == "random") ca = machines::random_nca(rng, letters, branch);
                else throw UsageError(fmt::format("unknown builtin nca '{}' (identity, full-choice, xor, random)", *b));
            } else {
                ca = io::nca_from_json(read_json(machine_arg));
            }
            compiled_report(nca_to_sft(ca), io::compiled_shift(ca));
            rep.result["machine"] = io::to_json(ca);
            if (simulate_flag) {
                auto in = digits(tape_arg);
                auto d = simulate(ca, std::vector<Letter>(in.begin(), in.end()), steps, int_list(choices_arg));
                diagram_report(d, verify_spacetime(d, ca), ca.size());
            }
        });
    }

    // ncavm
    auto* vmc = app.add_subcommand("ncavm", "list search on the cellular virtual machine")->require_subcommand(1);
    std::string prefix_arg, lists_arg;
    {
        auto opts = [&](CLI::App* s) {
            s->add_option("--prefix", prefix_arg, "searched prefix e as bits")->required();
            s->add_option("--lists", lists_arg, "lists separated by '/', elements by ','")->required();
        };
        auto* r = vmc->add_subcommand("run", "search with a step trace");
        opts(r);
        on(r, "ncavm", "run", [&] {
            std::vector<std::string> trace;
            auto o = vm::list_search(vm_bits(prefix_arg), parse_lists(lists_arg), &trace);
            rep.result = {{"outcome", outcome_json(o)}, {"trace", trace}};
            std::string t;
            for (auto& row : trace) t += row + "\n";
            rep.artifacts["text"] = t;
        });
        auto* s = vmc->add_subcommand("search", "search checked against a linear scan");
        opts(s);
        on(s, "ncavm", "search", [&] {
            auto e = vm_bits(prefix_arg);
            auto lists = parse_lists(lists_arg);
            auto o = vm::list_search(e, lists);
            auto want = vm::list_search_oracle(e, lists);
            long long q = static_cast<long long>(e.size());
            rep.result = {{"outcome", outcome_json(o)},
                          {"oracle_agrees", o == want},
                          {"q", q},
                          {"c", vm::kListSearchC},
                          {"within_bound", o.steps <= vm::kListSearchC * q}};
            rep.artifacts["text"] = fmt::format("{} {} {} {} {}\n", outcome_name(o.kind), o.l1, o.i1, o.l2, o.i2);
        });
    }

    // flow
    auto* flow = app.add_subcommand("flow", "super-tile flow graphs")->require_subcommand(1);
    std::string graph_arg;
    std::vector<int> random_graph;
    {
        auto opts = [&](CLI::App* s) {
            s->add_option("graph", graph_arg, "graph JSON");
            s->add_option("--random", random_graph, "seeded random valid graph: N rho")->expected(2);
        };
        auto load = [&] {
            if (!random_graph.empty()) {
                std::mt19937_64 rng(cfg.seed);
                return random_valid_graph(rng, random_graph[0], random_graph[1]);
            }
            if (graph_arg.empty()) throw UsageError("give a graph file or --random N rho");
            return io::graph_from_json(read_json(graph_arg));
        };
        auto* s = flow->add_subcommand("solve", "maximum flow");
        opts(s);
        on(s, "flow", "solve", [&, load] {
            auto g = load();
            auto v = validate(g);
            auto f = max_flow(g);
            rep.result = {{"graph", io::to_json(g)}, {"valid", v.ok}, {"F", g.F()}, {"flow", io::to_json(g, f)}};
            if (!v.ok) rep.result["violation"] = v.violations.front().what;
            if (g.N <= 3) {
                auto c = min_cut_check(g);
                rep.result["cuts"] = {{"source", c.source_cut}, {"sink", c.sink_cut}, {"min", c.exhaustive_min.value_or(-1)}};
            }
            rep.result["decomposition"] = io::to_json(decompose(g, f));
            rep.artifacts["dot"] = io::dot(g, &f);
            rep.artifacts["text"] = fmt::format("{}\n", f.value);
        });
        auto* d = flow->add_subcommand("decompose", "paths and cycles of a maximum flow");
        opts(d);
        on(d, "flow", "decompose", [&, load] {
            auto g = load();
            auto f = max_flow(g);
            auto dec = decompose(g, f);
            bool elem = true;
            for (auto& p : dec.paths) elem &= elementary(g, p);
            rep.result = {{"value", f.value},
                          {"paths", dec.paths.size()},
                          {"cycles", dec.cycles.size()},
                          {"elementary", elem},
                          {"reconstructs", reconstruct(g, dec) == f.f},
                          {"decomposition", io::to_json(dec)}};
            rep.artifacts["dot"] = io::dot(g, &f);
        });
        auto* r = flow->add_subcommand("route", "route produced points to sink slots");
        opts(r);
        on(r, "flow", "route", [&, load] {
            auto g = load();
            auto rt = route_points(g.N, g.rho, g.src_cap, g.sinks);
            rep.result = io::to_json(rt);
            if (!rt.ok) throw std::runtime_error(rt.error);
        });
    }

    // epi
    auto* epic = app.add_subcommand("epi", "epitomes and enforcers")->require_subcommand(1);
    std::string family = "km", profile_arg;
    int enf_margin = 1;
    {
        auto fam = [&](int size) {
            if (family == "km") return epi::km_epitome(size);
            if (family == "mirror") return epi::mirror_epitome(size);
            if (family == "semi") return epi::semi_mirror_epitome(size);
            throw UsageError(fmt::format("unknown family '{}' (km, mirror, semi)", family));
        };
        epi::PatternSource src{{epi::kWhite, epi::kBlack, epi::kRed}};
        auto* c = epic->add_subcommand("count", "number of distinct epitome values");
        c->add_option("--family", family)->capture_default_str();
        c->add_option("--n", n)->check(CLI::Range(1, 4))->required();
        on(c, "epi", "count", [&, fam, src] {
            auto cnt = epi::count_values(fam(n), src);
            rep.result = {{"family", family}, {"n", n}, {"count", cnt}};
            rep.artifacts["text"] = fmt::format("{}\n", cnt);
        });
        auto* ch = epic->add_subcommand("chain", "maximal-first chain of epitome values");
        ch->add_option("--family", family)->capture_default_str();
        ch->add_option("--n", n)->check(CLI::Range(1, 4))->required();
        on(ch, "epi", "chain", [&, fam, src] {
            auto f = fam(n);
            json links = json::array();
            for (auto& l : epi::chain_from_epitomes(f, src))
                links.push_back({{"value", l.v}, {"pattern", io::to_json(l.p, epi::wbr_alphabet())}});
            rep.result = {{"family", family}, {"n", n}, {"ordered", f.ordered()}, {"chain", links}};
        });
        auto* e = epic->add_subcommand("enforce", "simple pattern of a profile with its enforcer");
        e->add_option("--profile", profile_arg, "row counts k_0,k_1,... (km)")->required();
        e->add_option("--margin", enf_margin)->check(CLI::PositiveNumber)->capture_default_str();
        on(e, "epi", "enforce", [&] {
            auto p = epi::simple_pattern(int_list(profile_arg));
            auto enf = epi::km_enforcer(p, enf_margin);
            auto all = p.merged(enf);
            rep.result = {{"profile", int_list(profile_arg)},
                          {"pattern", io::to_json(p, epi::wbr_alphabet())},
                          {"enforcer", io::to_json(enf, epi::wbr_alphabet())},
                          {"hidden_square_free", epi::hidden_square_free(all)}};
            rep.artifacts["svg"] = io::svg_pattern(all, &p);
        });
    }

    // kolm
    auto* kolmc = app.add_subcommand("kolm", "time-bounded complexity and the hierarchy family")->require_subcommand(1);
    std::string bits_arg;
    std::uint64_t tbudget = 600;
    int max_len = 20, theta = 24, n0 = 2, cc = 3, levels = 1, k = 2, bb_m = 8;
    {
        auto* kk = kolmc->add_subcommand("k", "shortest program within a time budget");
        kk->add_option("bits", bits_arg)->required();
        kk->add_option("--t", tbudget)->capture_default_str();
        kk->add_option("--max-len", max_len)->check(CLI::Range(1, 26))->capture_default_str();
        on(kk, "kolm", "k", [&] {
            for (char ch : bits_arg)
                if (ch != '0' && ch != '1') throw UsageError("bits must be 0/1");
            auto r = kolm::time_bounded_K(bits_arg, tbudget, max_len);
            rep.result = {{"x", bits_arg}, {"t", tbudget}, {"max_len", max_len}};
            if (r.length) rep.result["K"] = *r.length, rep.result["program"] = r.program;
            else rep.result["K"] = fmt::format(">{}", max_len);
            rep.artifacts["text"] = r.length ? fmt::format("{}\n", *r.length) : fmt::format(">{}\n", max_len);
        });
        auto* fr = kolmc->add_subcommand("first-r", "first incompressible square matrix");
        fr->add_option("--n", n)->check(CLI::Range(1, 6))->capture_default_str();
        fr->add_option("--t", tbudget)->capture_default_str();
        fr->add_option("--theta", theta)->capture_default_str();
        on(fr, "kolm", "first-r", [&] {
            auto m = kolm::first_incompressible_matrix(n, tbudget, theta);
            rep.result = {{"n", n}, {"t", tbudget}, {"theta", theta}, {"matrix", io::to_json(m)}};
            std::string t;
            for (auto& row : io::to_json(m)) t += row.get<std::string>() + "\n";
            rep.artifacts["text"] = t;
        });
        auto* fa = kolmc->add_subcommand("family", "standard pattern family");
        fa->add_option("--n0", n0)->capture_default_str();
        fa->add_option("--c", cc)->capture_default_str();
        fa->add_option("--levels", levels)->check(CLI::Range(1, 2))->capture_default_str();
        fa->add_option("--theta", theta, "threshold at level 1")->capture_default_str();
        fa->add_option("--t-prime", tbudget)->capture_default_str();
        on(fa, "kolm", "family", [&] {
            kolm::HierarchyParams p;
            p.n0 = n0;
            p.c = cc;
            p.levels = levels;
            p.theta = {theta};
            p.t_prime = tbudget;
            auto f = kolm::build_family(p);
            json R = json::array();
            for (int i = 1; i <= levels; ++i)
                R.push_back({{"level", i}, {"n", p.n(i)}, {"N", p.N(i)}, {"theta", p.theta_of(i)}, {"t", p.t(i)}, {"R", io::to_json(f.R[i])}});
            rep.result = {{"n0", n0}, {"c", cc}, {"levels", R}};
        });
        auto* co = kolmc->add_subcommand("color", "recursive coloring of a 2^k+1 square");
        co->add_option("shift", shift_arg)->required();
        co->add_option("--k", k)->check(CLI::Range(1, 6))->capture_default_str();
        on(co, "kolm", "color", [&] {
            auto s = read_shift(shift_arg);
            auto border = kolm::random_extendable_border(s, k, cfg.seed, cfg.limits);
            auto c = kolm::recursive_coloring(s, k, border, cfg.limits);
            rep.result = {{"shift", s.name}, {"k", k}, {"border", border}, {"coloring", io::to_json(c, s.alphabet)},
                          {"locally_admissible", locally_admissible(c, s)}};
            rep.artifacts["svg"] = io::svg_pattern(c);
        });
        auto* bb = kolmc->add_subcommand("bb", "longest-running program of a given length");
        bb->add_option("--m", bb_m)->check(CLI::Range(1, 20))->capture_default_str();
        bb->add_option("--t-max", tbudget)->capture_default_str();
        on(bb, "kolm", "bb", [&] {
            auto r = kolm::busy_beaver_program(bb_m, tbudget);
            rep.result = {{"m", bb_m}, {"t_max", tbudget}, {"steps", r.steps}};
            if (r.program) rep.result["program"] = *r.program;
        });
    }

    // sparse
    auto* sp = app.add_subcommand("sparse", "sparse shifts at desk scale")->require_subcommand(1);
    std::string cfg_arg;
    std::vector<double> random_cfg;
    int sparse_levels = 2;
    {
        auto opts = [&](CLI::App* s) {
            s->add_option("config", cfg_arg, "SparseConfig JSON");
            s->add_option("--random", random_cfg, "seeded random config: W fill")->expected(2);
            s->add_option("--levels", sparse_levels)->capture_default_str();
        };
        auto load = [&](const sparse::DensitySpec& spec) {
            if (!random_cfg.empty()) return sparse::random_config(spec, static_cast<int>(random_cfg[0]), random_cfg[1], cfg.seed);
            if (cfg_arg.empty()) throw UsageError("give a config file or --random W fill");
            return io::sparse_config_from_json(read_json(cfg_arg));
        };
        auto verify = [&](const sparse::Synthesis& s, const sparse::DensitySpec& spec) {
            json out = json::array();
            bool ok = true;
            for (auto& a : s.levels) {
                auto r = sparse::verify_all(a, spec, sparse::density_enumerator(spec));
                ok &= r.ok();
                out.push_back(io::to_json(r));
            }
            return std::pair{ok, out};
        };
        auto* sy = sp->add_subcommand("synth", "field synthesis with level dumps");
        opts(sy);
        on(sy, "sparse", "synth", [&, load, verify] {
            auto spec = sparse_spec(sparse_levels);
            auto c = load(spec);
            auto s = sparse::synthesize_fields(c, spec);
            json lv = json::array();
            for (auto& a : s.levels) lv.push_back(io::to_json(a));
            auto [ok, reports] = verify(s, spec);
            rep.result = {{"config", io::to_json(c)}, {"offset", {s.offset.x, s.offset.y}}, {"levels", lv}, {"verify", reports}, {"ok", ok}};
            if (!s.levels.empty()) rep.artifacts["svg"] = io::svg_arrows(s.levels.front());
        });
        auto* ve = sp->add_subcommand("verify", "properties C to G per level");
        opts(ve);
        on(ve, "sparse", "verify", [&, load, verify] {
            auto spec = sparse_spec(sparse_levels);
            auto c = load(spec);
            auto [ok, reports] = verify(sparse::synthesize_fields(c, spec), spec);
            rep.result = {{"points", c.points.size()}, {"density_admissible", sparse::density_admissible(c, spec)}, {"verify", reports}, {"ok", ok}};
            rep.artifacts["text"] = ok ? "ok\n" : "fail\n";
        });
        auto* ch = sp->add_subcommand("check", "parameter inequalities of the schedule");
        ch->add_option("--levels", sparse_levels)->capture_default_str();
        on(ch, "sparse", "check", [&] {
            auto r = sparse::parameter_check(sparse::desk_spec(), sparse_levels);
            rep.result = {{"ok", r.ok}, {"first_failing_level", r.first_failing_level}, {"failing_inequality", r.failing_inequality}};
            json slack = json::array();
            for (auto& s : r.slack) slack.push_back({static_cast<double>(s[0]), static_cast<double>(s[1]), static_cast<double>(s[2])});
            rep.result["slack_log2"] = slack;
        });
    }

    // fix
    auto* fx = app.add_subcommand("fix", "self-simulating tile sets")->require_subcommand(1);
    int N = 16;
    bool smallest = false;
    std::string tiling_arg;
    {
        auto opts = [&](CLI::App* s) {
            s->add_option("tileset", tiles_arg, "simulated tileset JSON")->required();
            s->add_option("--N", N, "zoom factor, multiple of 16")->capture_default_str();
            s->add_flag("--smallest", smallest, "tightest geometry that hosts the tileset");
        };
        auto* g = fx->add_subcommand("gen", "tileset simulating the input with zoom N");
        opts(g);
        on(g, "fix", "gen", [&] {
            auto sim = fix_simulation(io::tileset_from_json(read_json(tiles_arg)), N, smallest);
            rep.result = {{"geometry", io::to_json(sim.geom)},
                          {"regime_deviations", sim.geom.regime_deviations()},
                          {"colour_bits", sim.colour_bits},
                          {"program_length", sim.program.size()},
                          {"tiles", sim.tau.tiles.size()},
                          {"tileset", io::to_json(sim.tau)}};
        });
        auto* v = fx->add_subcommand("verify", "check super-tiles against the simulated tiles");
        opts(v);
        v->add_option("--tiling", tiling_arg, "N x N tiling JSON over the generated tileset; default: every reference super-tile");
        on(v, "fix", "verify", [&] {
            auto sim = fix_simulation(io::tileset_from_json(read_json(tiles_arg)), N, smallest);
            auto check = [&](const fix::SupertileCheck& c) {
                json j{{"ok", c.ok}};
                if (!c.ok) j["failed"] = c.failed, j["where"] = {c.where.x, c.where.y};
                return j;
            };
            if (!tiling_arg.empty()) {
                auto t = tiling_from_json(read_json(tiling_arg));
                auto c = fix::verify_supertile(sim, t);
                rep.result = check(c);
                if (!c.ok) throw std::runtime_error(fmt::format("super-tile rejected: {}", c.failed));
                return;
            }
            json all = json::array();
            bool ok = true;
            for (auto& t : sim.rho.tiles) {
                auto cells = fix::assemble(sim, t);
                auto c = fix::verify_supertile(sim, cells);
                auto phi = fix::phi(sim, cells);
                ok &= c.ok && phi && *phi == t;
                auto j = check(c);
                j["tile"] = {t.n, t.e, t.s, t.w};
                all.push_back(j);
            }
            rep.result = {{"geometry", io::to_json(sim.geom)}, {"supertiles", all}, {"ok", ok}};
        });
        auto* r = fx->add_subcommand("roles", "cell role map of a super-tile");
        r->add_option("--N", N)->capture_default_str();
        on(r, "fix", "roles", [&] {
            auto g = fix::SimGeometry::standard(N);
            g.validate();
            std::map<std::string, int> counts;
            for (int y = 0; y < g.N; ++y)
                for (int x = 0; x < g.N; ++x) ++counts[fix::role_name(fix::classify_cell(x, y, g).kind)];
            rep.result = {{"geometry", io::to_json(g)}, {"roles", counts}};
            rep.artifacts["svg"] = io::svg_roles(g);
        });
    }

    // sofic1d
    auto* so = app.add_subcommand("sofic1d", "follower classes of one-dimensional shifts")->require_subcommand(1);
    int L = 6, d = 4;
    {
        auto* c = so->add_subcommand("classes", "words grouped by follower sets");
        c->add_option("shift", shift_arg)->required();
        c->add_option("--L", L, "longest word")->check(CLI::Range(0, 16))->capture_default_str();
        c->add_option("--d", d, "follower depth")->check(CLI::Range(0, 16))->capture_default_str();
        on(c, "sofic1d", "classes", [&] {
            auto s = read_shift(shift_arg);
            if (s.dim != 1) throw UsageError("sofic1d needs a one-dimensional shift");
            auto t = sofic1d::follower_classes(s, L, d, cfg.limits);
            auto st = sofic1d::stabilization(s, L, d, cfg.limits);
            rep.result = {{"shift", s.name}, {"L", L}, {"d", d}, {"classes", t.classes()}, {"depth_counts", st.counts}, {"stable", st.stable}};
            rep.artifacts["text"] = fmt::format("{}\n", t.classes());
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        auto t0 = std::chrono::steady_clock::now();
        action();
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

        json env{{"module", rep.module}, {"command", rep.command}, {"version", kVersion}, {"seed", cfg.seed}, {"result", rep.result}};
        if (cfg.timing) {
            env["timing_ms"] = ms;
            std::cerr << fmt::format("{} {}: {:.1f} ms\n", rep.module, rep.command, ms);
        }
        std::string out;
        if (cfg.format == "json") {
            out = env.dump(2) + "\n";
        } else {
            auto it = rep.artifacts.find(cfg.format);
            if (it == rep.artifacts.end())
                throw UsageError(fmt::format("'{} {}' has no {} output", rep.module, rep.command, cfg.format));
            out = it->second;
        }
        if (cfg.output.empty()) {
            std::cout << out;
        } else {
            std::ofstream f(cfg.output);
            if (!f) throw UsageError(fmt::format("cannot write '{}'", cfg.output));
            f << out;
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
