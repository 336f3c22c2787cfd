#include "symdyn/io.hpp"

#include <fmt/format.h>

#include <map>

#include "symdyn/epitomes.hpp"
#include "symdyn/sofic1d.hpp"

namespace symdyn::io {

namespace {

template <class T>
T get(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(fmt::format("missing field '{}'", key));
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(fmt::format("field '{}': {}", key, e.what()));
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.is_object() && j.contains(key) ? get<T>(j, key) : fallback;
}

}  // namespace

json to_json(const Pattern& p, const Alphabet& a) {
    json out = json::array();
    for (auto& c : p.cells()) out.push_back({c.p.x, c.p.y, a.name(c.a)});
    return out;
}

Pattern pattern_from_json(const json& j, const Alphabet& a) {
    if (!j.is_array()) throw FormatError("pattern: expected a list of [x, y, letter]");
    Pattern p;
    for (auto& c : j) {
        if (!c.is_array() || c.size() != 3) throw FormatError("pattern: cells are [x, y, letter]");
        auto name = c[2].is_string() ? c[2].get<std::string>() : c[2].dump();
        auto id = a.find(name);
        if (!id) throw FormatError(fmt::format("pattern: unknown letter '{}'", name));
        p.set({c[0].get<int>(), c[1].get<int>()}, *id);
    }
    return p;
}

std::vector<std::string> builtin_shift_names() {
    return {"full", "full-1d", "S1", "S1-1d", "S2", "rectangles", "checkerboard", "mirror", "semi-mirror", "hidden-square",
            "mirror-1d"};
}

ShiftSpec builtin_shift(const std::string& name) {
    if (name == "full") return full_shift(binary_alphabet(), 2);
    if (name == "full-1d") return full_shift(binary_alphabet(), 1);
    if (name == "S1") return s1_shift(2);
    if (name == "S1-1d") return s1_shift(1);
    if (name == "S2") return s2_shift();
    if (name == "rectangles") return rectangle_shift();
    if (name == "checkerboard") return checkerboard_shift();
    if (name == "mirror") return epi::mirror_shift();
    if (name == "semi-mirror") return epi::semi_mirror_shift();
    if (name == "hidden-square") return epi::km_shift();
    if (name == "mirror-1d") return sofic1d::mirror_1d_shift();
    throw FormatError(fmt::format("unknown builtin shift '{}'", name));
}

json to_json(const ShiftSpec& s) {
    if (!s.finite_list()) {
        for (auto& n : builtin_shift_names())
            if (builtin_shift(n).name == s.name && builtin_shift(n).dim == s.dim) return {{"builtin", n}};
        throw FormatError(fmt::format("shift '{}' has no finite forbidden list and no builtin name", s.name));
    }
    json f = json::array();
    for (auto& p : s.forbidden) f.push_back(to_json(p, s.alphabet));
    return {{"name", s.name}, {"dim", s.dim}, {"alphabet", s.alphabet.names()}, {"forbidden", f}};
}

ShiftSpec shift_from_json(const json& j) {
    if (j.is_string()) return builtin_shift(j.get<std::string>());
    if (j.is_object() && j.contains("builtin")) return builtin_shift(get<std::string>(j, "builtin"));
    if (j.is_object() && j.contains("compiled_from")) {
        auto& c = j.at("compiled_from");
        auto kind = get<std::string>(c, "kind");
        auto m = get<json>(c, "machine");
        if (kind == "tm") return tm_to_sft(tm_from_json(m));
        if (kind == "twohead") return twohead_to_sft(twohead_from_json(m));
        if (kind == "nca") return nca_to_sft(nca_from_json(m));
        throw FormatError(fmt::format("unknown compiled kind '{}'", kind));
    }
    ShiftSpec s;
    s.alphabet = Alphabet(get<std::vector<std::string>>(j, "alphabet"));
    s.dim = get_or<int>(j, "dim", 2);
    if (s.dim != 1 && s.dim != 2) throw FormatError("shift: dim must be 1 or 2");
    s.name = get_or<std::string>(j, "name", "custom");
    for (auto& p : get<json>(j, "forbidden")) s.add_forbidden(pattern_from_json(p, s.alphabet));
    s.normalize();
    return s;
}

namespace {

json compiled(const ShiftSpec& s, const char* kind, json machine) {
    return {{"name", s.name},
            {"dim", s.dim},
            {"alphabet", s.alphabet.names()},
            {"compiled_from", {{"kind", kind}, {"machine", std::move(machine)}}}};
}

}  // namespace

json compiled_shift(const TMSpec& m) { return compiled(tm_to_sft(m), "tm", to_json(m)); }
json compiled_shift(const TwoHeadTMSpec& m) { return compiled(twohead_to_sft(m), "twohead", to_json(m)); }
json compiled_shift(const NCASpec& a) { return compiled(nca_to_sft(a), "nca", to_json(a)); }

json expanded_shift(const ShiftSpec& s, std::uint64_t max_windows) {
    if (s.generator || s.violates) throw FormatError(fmt::format("shift '{}' is not given by finitely many windows", s.name));
    ShiftSpec out;
    out.alphabet = s.alphabet;
    out.dim = s.dim;
    out.name = s.name;
    for (auto& p : s.forbidden) out.add_forbidden(p);
    const std::uint64_t A = s.alphabet.size();
    for (auto& r : s.rules) {
        const int cells = r.w * r.h;
        std::uint64_t total = 1;
        for (int i = 0; i < cells; ++i)
            if ((total *= A) > max_windows) throw FormatError(fmt::format("rule '{}' has more than {} windows", r.label, max_windows));
        std::vector<Letter> c(cells);
        for (std::uint64_t k = 0; k < total; ++k) {
            std::uint64_t v = k;
            for (auto& x : c) {
                x = static_cast<Letter>(v % A);
                v /= A;
            }
            if (r.forbidden(c.data())) out.add_forbidden(Pattern::rect(r.w, r.h, c));
        }
    }
    out.normalize();
    return to_json(out);
}

json to_json(const WangTileSet& ts) {
    json tiles = json::array();
    for (auto& t : ts.tiles) tiles.push_back({t.n, t.e, t.s, t.w});
    json out{{"num_colors", ts.num_colors}, {"tiles", tiles}};
    if (!ts.color_names.empty()) out["colors"] = ts.color_names;
    return out;
}

WangTileSet tileset_from_json(const json& j) {
    WangTileSet ts;
    ts.num_colors = get<int>(j, "num_colors");
    ts.color_names = get_or<std::vector<std::string>>(j, "colors", {});
    for (auto& t : get<json>(j, "tiles")) {
        if (!t.is_array() || t.size() != 4) throw FormatError("tileset: tiles are [n, e, s, w]");
        WangTile w{t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()};
        for (int c : {w.n, w.e, w.s, w.w})
            if (c < 0 || c >= ts.num_colors) throw FormatError("tileset: colour out of range");
        ts.add_tile(w);
    }
    return ts;
}

json to_json(const Tiling& t) {
    json rows = json::array();
    for (int y = 0; y < t.h; ++y) {
        json row = json::array();
        for (int x = 0; x < t.w; ++x) row.push_back(t.at(x, y));
        rows.push_back(row);
    }
    return {{"w", t.w}, {"h", t.h}, {"tiles", rows}};
}

json to_json(const SuperTileFlowGraph& g) { return {{"N", g.N}, {"rho", g.rho}, {"src_cap", g.src_cap}, {"sinks", g.sinks}}; }

SuperTileFlowGraph graph_from_json(const json& j) {
    auto g = SuperTileFlowGraph::empty(get<int>(j, "N"), get<int>(j, "rho"));
    if (g.N < 1 || g.rho < 1) throw FormatError("graph: N and rho must be positive");
    g.src_cap = get<std::vector<int>>(j, "src_cap");
    g.sinks = get<std::vector<int>>(j, "sinks");
    if (static_cast<int>(g.src_cap.size()) != g.N * g.N) throw FormatError("graph: src_cap needs N*N entries");
    for (int v : g.sinks)
        if (v < 0 || v >= g.N * g.N) throw FormatError("graph: sink vertex out of range");
    return g;
}

json to_json(const SuperTileFlowGraph& g, const Flow& f) {
    auto arcs = arcs_of(g);
    json used = json::array();
    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (f.f[i]) used.push_back({{"arc", i}, {"from", arcs[i].from}, {"to", arcs[i].to}, {"flow", f.f[i]}, {"cap", arcs[i].cap}});
    return {{"value", f.value}, {"arcs", used}};
}

json to_json(const Decomposition& d) { return {{"paths", d.paths}, {"cycles", d.cycles}}; }

json to_json(const Routing& r) {
    json c = json::array();
    for (auto& k : r.commodities) c.push_back({{"producer", k.producer}, {"slot", k.slot}, {"vertices", k.vertices}});
    json t = json::array();
    for (auto& v : r.tables) {
        json e = json::array();
        for (auto& x : v) e.push_back({x.commodity, x.arrow});
        t.push_back(e);
    }
    return {{"ok", r.ok}, {"error", r.error}, {"commodities", c}, {"tables", t}};
}

json to_json(const TMSpec& m) {
    json d = json::array();
    for (auto& r : m.delta) d.push_back({r.next, r.write, static_cast<int>(r.move)});
    return {{"symbols", m.symbols}, {"num_states", m.num_states}, {"start", m.start}, {"halt", m.halt}, {"delta", d}};
}

namespace {

Move move_of(int v) {
    if (v < -1 || v > 1) throw FormatError("move must be -1, 0 or 1");
    return static_cast<Move>(v);
}

}  // namespace

TMSpec tm_from_json(const json& j) {
    TMSpec m;
    m.symbols = get<std::vector<std::string>>(j, "symbols");
    m.num_states = get<int>(j, "num_states");
    m.start = get_or<int>(j, "start", 0);
    m.halt = get_or<int>(j, "halt", 0);
    for (auto& r : get<json>(j, "delta")) {
        if (!r.is_array() || r.size() != 3) throw FormatError("tm: delta entries are [next, write, move]");
        m.delta.push_back({r[0].get<int>(), r[1].get<int>(), move_of(r[2].get<int>())});
    }
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw FormatError(fmt::format("tm: {}", e.what()));
    }
    return m;
}

json to_json(const TwoHeadTMSpec& m) {
    json d = json::array();
    for (auto& r : m.delta) d.push_back({r.next, r.write1, r.write2, static_cast<int>(r.m1), static_cast<int>(r.m2)});
    return {{"symbols", m.symbols}, {"num_states", m.num_states}, {"start", m.start}, {"halt", m.halt}, {"delta", d}};
}

TwoHeadTMSpec twohead_from_json(const json& j) {
    TwoHeadTMSpec m;
    m.symbols = get<std::vector<std::string>>(j, "symbols");
    m.num_states = get<int>(j, "num_states");
    m.start = get_or<int>(j, "start", 0);
    m.halt = get_or<int>(j, "halt", 0);
    for (auto& r : get<json>(j, "delta")) {
        if (!r.is_array() || r.size() != 5) throw FormatError("twohead: delta entries are [next, write1, write2, move1, move2]");
        m.delta.push_back({r[0].get<int>(), r[1].get<int>(), r[2].get<int>(), move_of(r[3].get<int>()), move_of(r[4].get<int>())});
    }
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw FormatError(fmt::format("twohead: {}", e.what()));
    }
    return m;
}

json to_json(const NCASpec& a) { return {{"letters", a.letters}, {"f", a.f}, {"error", a.error}, {"boundary", a.boundary}}; }

NCASpec nca_from_json(const json& j) {
    NCASpec a;
    a.letters = get<std::vector<std::string>>(j, "letters");
    a.f = get<std::vector<std::vector<Letter>>>(j, "f");
    a.error = get_or<int>(j, "error", -1);
    a.boundary = get_or<int>(j, "boundary", 0);
    try {
        a.validate();
    } catch (const std::exception& e) {
        throw FormatError(fmt::format("nca: {}", e.what()));
    }
    return a;
}

json to_json(const sparse::SparseConfig& c) {
    json pts = json::array();
    for (auto& p : c.points) pts.push_back({p.x, p.y});
    return {{"W", c.W}, {"points", pts}};
}

sparse::SparseConfig sparse_config_from_json(const json& j) {
    sparse::SparseConfig c;
    c.W = get<int>(j, "W");
    for (auto& p : get<json>(j, "points")) {
        if (!p.is_array() || p.size() != 2) throw FormatError("sparse config: points are [x, y]");
        c.points.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    try {
        c.validate();
    } catch (const std::exception& e) {
        throw FormatError(fmt::format("sparse config: {}", e.what()));
    }
    return c;
}

namespace {

json pts(const std::vector<Pos>& v) {
    json out = json::array();
    for (auto& p : v) out.push_back({p.x, p.y});
    return out;
}

}  // namespace

json to_json(const sparse::LevelAssembly& a) {
    json tiles = json::array();
    for (int y = 0; y < a.rows; ++y)
        for (int x = 0; x < a.cols; ++x) {
            auto& t = a.at(x, y);
            json sides = json::array();
            for (auto& s : t.side) {
                json f6 = json::array();
                for (auto& e : s.f6) f6.push_back({e.p.x, e.p.y, e.arrow});
                sides.push_back({{"f5", pts(s.f5)}, {"f6", f6}, {"f7", s.f7}, {"f8", pts(s.f8)}});
            }
            tiles.push_back({{"x", x}, {"y", y}, {"f1", t.f1}, {"f2", t.f2}, {"f3", {t.f3.x, t.f3.y}}, {"f4", t.f4}, {"sides", sides}});
        }
    return {{"level", a.level}, {"N", a.N},       {"n_mother", a.n_mother}, {"chunk_bits", a.chunk_bits},
            {"cols", a.cols},   {"rows", a.rows}, {"tiles", tiles}};
}

json to_json(const sparse::VerifyReport& r) {
    json w = json::array();
    for (auto& x : r.witnesses) {
        json e{{"prop", std::string(1, x.prop)}, {"what", x.what}, {"tile", {x.tile.x, x.tile.y}}};
        if (x.placement) e["placement"] = {{"pattern", x.placement->pattern}, {"offset", {x.placement->offset.x, x.placement->offset.y}}};
        w.push_back(e);
    }
    return {{"ok", r.ok()}, {"C", r.C}, {"D", r.D}, {"E", r.E}, {"F", r.F}, {"G", r.G}, {"witnesses", w}};
}

json to_json(const kolm::BitMatrix& m) {
    json rows = json::array();
    for (int y = 0; y < m.h; ++y) {
        std::string r;
        for (int x = 0; x < m.w; ++x) r += m.at(x, y) ? '1' : '0';
        rows.push_back(r);
    }
    return rows;
}

json to_json(const fix::SimGeometry& g) {
    return {{"N", g.N}, {"q", g.q}, {"l", g.l}, {"h", g.h()}, {"bands", {g.hI, g.hU, g.hA}}, {"literal_width", g.lit}};
}

namespace {

std::string palette(int c) {
    static const char* base[] = {"#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6",
                                 "#bcf60c", "#fabebe", "#008080", "#e6beff", "#9a6324", "#fffac8", "#800000", "#aaffc3"};
    if (c < 16) return base[c];
    unsigned h = static_cast<unsigned>(c) * 2654435761u;
    return fmt::format("#{:02x}{:02x}{:02x}", (h >> 16) & 0xff, (h >> 8) & 0xff, h & 0xff);
}

std::string letter_fill(int a) {
    if (a == 0) return "#ffffff";
    if (a == 1) return "#000000";
    if (a == 2) return "#d62728";
    return palette(a);
}

}  // namespace

std::string svg_tiling(const WangTileSet& ts, const Tiling& t, int cell) {
    std::string s = fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}">)"
                                "\n",
                                t.w * cell, t.h * cell);
    for (int y = 0; y < t.h; ++y)
        for (int x = 0; x < t.w; ++x) {
            auto& tile = ts.tiles[t.at(x, y)];
            int X = x * cell, Y = (t.h - 1 - y) * cell, c = cell, m = cell / 2;
            auto tri = [&](int ax, int ay, int bx, int by, int col) {
                s += fmt::format(R"(<polygon points="{},{} {},{} {},{}" fill="{}" stroke="#444" stroke-width="0.5"/>)"
                                 "\n",
                                 X + ax, Y + ay, X + bx, Y + by, X + m, Y + m, palette(col));
            };
            tri(0, 0, c, 0, tile.n);
            tri(c, 0, c, c, tile.e);
            tri(0, c, c, c, tile.s);
            tri(0, 0, 0, c, tile.w);
        }
    return s + "</svg>\n";
}

std::string svg_pattern(const Pattern& p, const Pattern* outline, int cell) {
    Box b = p.bbox();
    if (outline && !outline->empty()) {
        Box o = outline->bbox();
        int x1 = std::max(b.x0 + b.w, o.x0 + o.w), y1 = std::max(b.y0 + b.h, o.y0 + o.h);
        if (p.empty()) b = o;
        b.x0 = std::min(b.x0, o.x0);
        b.y0 = std::min(b.y0, o.y0);
        b.w = x1 - b.x0;
        b.h = y1 - b.y0;
    }
    std::string s = fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}">)"
                                "\n",
                                b.w * cell, b.h * cell);
    auto rect = [&](const Cell& c, const char* stroke, double sw) {
        s += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="{}" stroke-width="{}"/>)"
                         "\n",
                         (c.p.x - b.x0) * cell, (b.y0 + b.h - 1 - c.p.y) * cell, cell, cell, letter_fill(c.a), stroke, sw);
    };
    for (auto& c : p.cells()) rect(c, "#888", 0.5);
    if (outline)
        for (auto& c : outline->cells()) rect(c, "#1f77b4", 2);
    return s + "</svg>\n";
}

std::string svg_arrows(const sparse::LevelAssembly& a, int cell) {
    std::string s = fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}">)"
                                "\n",
                                a.cols * cell, a.rows * cell);
    for (int y = 0; y < a.rows; ++y)
        for (int x = 0; x < a.cols; ++x) {
            int X = x * cell, Y = (a.rows - 1 - y) * cell, m = cell / 2;
            auto& f = a.at(x, y).fields();
            s += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="#999"/>)"
                             "\n",
                             X, Y, cell, cell, f.f5.empty() ? "#ffffff" : "#dddddd");
            for (auto& p : f.f5)
                s += fmt::format(R"(<circle cx="{}" cy="{}" r="2" fill="#000"/>)"
                                 "\n",
                                 X + (p.x + 0.5) * cell / a.N, Y + cell - (p.y + 0.5) * cell / a.N);
            for (auto& e : f.f6) {
                auto info = arrow_decode(e.arrow);
                auto end = [&](int side) {
                    return std::pair{X + m + kDX[side] * m, Y + m - kDY[side] * m};
                };
                auto [x0, y0] = info.in_side >= 0 ? end(info.in_side) : std::pair{X + m, Y + m};
                auto [x1, y1] = info.out_side >= 0 ? end(info.out_side) : std::pair{X + m, Y + m};
                s += fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5"/>)"
                                 "\n",
                                 x0, y0, x1, y1, palette(e.p.x * 7 + e.p.y));
            }
        }
    return s + "</svg>\n";
}

std::string svg_roles(const fix::SimGeometry& g, int cell) {
    std::string s = fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}">)"
                                "\n",
                                g.N * cell, g.N * cell);
    auto fill = [](const fix::CellRole& r) -> std::string {
        using fix::RoleKind;
        switch (r.kind) {
            case RoleKind::carrier: return "#d62728";
            case RoleKind::cable: return r.side == kLeft ? "#1f77b4" : r.side == kUp ? "#2ca02c" : r.side == kRight ? "#9467bd" : "#ff7f0e";
            case RoleKind::i_diagram: return "#c7e9c0";
            case RoleKind::u_diagram: return "#fdd0a2";
            case RoleKind::a_diagram: return "#dadaeb";
            case RoleKind::interface_row: return "#fc9272";
            case RoleKind::literal: return "#636363";
            case RoleKind::block: return "#f7f7f7";
        }
        return "#fff";
    };
    for (int y = 0; y < g.N; ++y)
        for (int x = 0; x < g.N; ++x)
            s += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>)"
                             "\n",
                             x * cell, (g.N - 1 - y) * cell, cell, cell, fill(fix::classify_cell(x, y, g)));
    return s + "</svg>\n";
}

std::string ppm(const SpaceTimeDiagram& d, int num_letters) {
    std::string s = fmt::format("P3\n{} {}\n255\n", d.width(), d.height());
    for (int t = d.height() - 1; t >= 0; --t) {
        for (int x = 0; x < d.width(); ++x) {
            Letter a = d.at(x, t);
            int r = 255, gr = 255, b = 255;
            if (a >= 0 && num_letters > 1) {
                std::string hex = a < 3 ? letter_fill(a) : palette(a);
                r = std::stoi(hex.substr(1, 2), nullptr, 16);
                gr = std::stoi(hex.substr(3, 2), nullptr, 16);
                b = std::stoi(hex.substr(5, 2), nullptr, 16);
            }
            s += fmt::format("{} {} {}{}", r, gr, b, x + 1 < d.width() ? " " : "\n");
        }
    }
    return s;
}

std::string dot(const SuperTileFlowGraph& g, const Flow* f) {
    auto arcs = arcs_of(g);
    auto name = [&](int v) {
        if (v == g.source()) return std::string("s");
        if (v == g.sink()) return std::string("t");
        return fmt::format("v{}_{}", v % g.N, v / g.N);
    };
    std::string s = "digraph flow {\n  node [shape=circle];\n";
    for (int y = 0; y < g.N; ++y)
        for (int x = 0; x < g.N; ++x) s += fmt::format("  {} [pos=\"{},{}!\"];\n", name(g.vid(x, y)), x, y);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        auto& a = arcs[i];
        if (f && f->f[i]) s += fmt::format("  {} -> {} [label=\"{}/{}\", penwidth=2];\n", name(a.from), name(a.to), f->f[i], a.cap);
        else s += fmt::format("  {} -> {} [label=\"{}\"];\n", name(a.from), name(a.to), a.cap);
    }
    return s + "}\n";
}

}  // namespace symdyn::io
