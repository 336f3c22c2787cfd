#include "symdyn/fixpoint.hpp"

#include <bit>
#include <map>
#include <fmt/format.h>

#include "symdyn/flow.hpp"

namespace symdyn::fix {

SimGeometry SimGeometry::standard(int N) {
    if (N < 16 || N % 16) throw SizingError(fmt::format("zoom: N = {} is not a positive multiple of 16", N));
    SimGeometry g;
    g.N = N;
    g.q = N / 16;
    g.l = N - g.q;
    g.hI = 4 * g.q;
    g.hU = g.q;
    g.hA = 8 * g.q;
    g.lit = N - 6 * g.q;
    return g;
}

namespace {

SimGeometry resolved(SimGeometry g) {
    if (g.q == 0) g.q = g.N / 16;
    if (g.l == 0) g.l = g.N - g.q;
    if (g.hI == 0) g.hI = 4 * g.q;
    if (g.hU < 0) g.hU = g.q;
    if (g.hA < 0) g.hA = 8 * g.q;
    if (g.lit == 0) g.lit = g.N - 6 * g.q;
    return g;
}

}  // namespace

void SimGeometry::validate() const {
    if (q < 1) throw SizingError(fmt::format("super-colour width: q = {} < 1", q));
    if (hI < 1 || hU < 0 || hA < 0) throw SizingError("zone bands: heights must be hI >= 1, hU >= 0, hA >= 0");
    if (lit < 0) throw SizingError("literal width: negative");
    if (l < 4 * q + lit) throw SizingError(fmt::format("zone width: l = {} < 4q + literal width = {}", l, 4 * q + lit));
    if (N - l < q) throw SizingError(fmt::format("right cable strip: N - l = {} < q = {}", N - l, q));
    if (N - 2 * q - h() < q) throw SizingError(fmt::format("top cable strip: N - 2q - h = {} < q = {}", N - 2 * q - h(), q));
}

std::vector<std::string> SimGeometry::regime_deviations() const {
    std::vector<std::string> out;
    auto chk = [&](bool ok, std::string what) {
        if (!ok) out.push_back(std::move(what));
    };
    chk(N % 16 == 0, "N not divisible by 16");
    chk(16 * q == N, fmt::format("q = {} != N/16", q));
    chk(l == N - q, fmt::format("l = {} != N - q", l));
    chk(hI == 4 * q, fmt::format("bottom band {} != 4q", hI));
    chk(hU == q, fmt::format("central band {} != q", hU));
    chk(hA == 8 * q, fmt::format("top band {} != 8q", hA));
    chk(lit == N - 6 * q, fmt::format("memory width {} != N - 6q", lit));
    return out;
}

const char* role_name(RoleKind k) {
    switch (k) {
        case RoleKind::carrier: return "carrier";
        case RoleKind::cable: return "cable";
        case RoleKind::i_diagram: return "I";
        case RoleKind::u_diagram: return "U";
        case RoleKind::a_diagram: return "A";
        case RoleKind::interface_row: return "interface";
        case RoleKind::literal: return "literal";
        case RoleKind::block: return "block";
    }
    return "?";
}

const char* cable_name(CableKind k) {
    switch (k) {
        case CableKind::none: return "none";
        case CableKind::horizontal: return "horizontal";
        case CableKind::vertical: return "vertical";
        case CableKind::corner_ne: return "corner_ne";
        case CableKind::corner_nw: return "corner_nw";
        case CableKind::corner_se: return "corner_se";
        case CableKind::corner_sw: return "corner_sw";
    }
    return "?";
}

namespace {

// Waypoints of a cable before removing repeats; every coordinate is affine in k with slope 0 or ±1.
std::vector<Pos> raw_route(const SimGeometry& g, int side, int k) {
    const int N = g.N, q = g.q, l = g.l, h = g.h();
    switch (side) {
        case kLeft:
            return {{0, k}, {q - 1 - k, k}, {q - 1 - k, q + k}, {l - 3 * q - 1 - k, q + k}, {l - 3 * q - 1 - k, 2 * q - 1}};
        case kDown: return {{q + k, 0}, {q + k, q - 1 - k}, {l - 3 * q + k, q - 1 - k}, {l - 3 * q + k, 2 * q - 1}};
        case kRight: return {{N - 1, k}, {l - 2 * q + k, k}, {l - 2 * q + k, 2 * q - 1}};
        default:
            return {{q + k, N - 1},         {q + k, 2 * q + h + k},     {l + k, 2 * q + h + k},
                    {l + k, 2 * q - 1 - k}, {l - 1 - k, 2 * q - 1 - k}, {l - 1 - k, 2 * q - 1}};
    }
}

std::vector<Pos> route(const SimGeometry& g, int side, int k) {
    std::vector<Pos> out;
    for (Pos p : raw_route(g, side, k))
        if (out.empty() || !(out.back() == p)) out.push_back(p);
    return out;
}

int dir_of(Pos a, Pos b) {
    if (b.x > a.x) return kRight;
    if (b.x < a.x) return kLeft;
    return b.y > a.y ? kUp : kDown;
}

bool between(int v, int a, int b) { return v >= std::min(a, b) && v <= std::max(a, b); }

// In/out sides of p on the route, if it lies on it.
std::optional<std::pair<int, int>> locate(const std::vector<Pos>& w, int side, Pos p) {
    if (p == w[0]) return std::pair{side, w.size() > 1 ? dir_of(w[0], w[1]) : static_cast<int>(kUp)};
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        Pos a = w[i], b = w[i + 1];
        bool on = (a.x == b.x && p.x == a.x && between(p.y, a.y, b.y)) || (a.y == b.y && p.y == a.y && between(p.x, a.x, b.x));
        if (!on || p == a) continue;
        int d = dir_of(a, b);
        if (!(p == b)) return std::pair{opposite(d), d};
        return std::pair{opposite(d), i + 2 < w.size() ? dir_of(b, w[i + 2]) : static_cast<int>(kUp)};
    }
    return std::nullopt;
}

CableKind shape(int a, int b) {
    auto has = [&](int s) { return a == s || b == s; };
    if (has(kLeft) && has(kRight)) return CableKind::horizontal;
    if (has(kUp) && has(kDown)) return CableKind::vertical;
    if (has(kUp)) return has(kRight) ? CableKind::corner_ne : CableKind::corner_nw;
    return has(kRight) ? CableKind::corner_se : CableKind::corner_sw;
}

}  // namespace

std::vector<Pos> cable_path(const SimGeometry& g, int side, int index) {
    auto w = route(g, side, index);
    std::vector<Pos> cells{w[0]};
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        int d = dir_of(w[i], w[i + 1]);
        Pos p = w[i];
        while (!(p == w[i + 1])) {
            p = {p.x + kDX[d], p.y + kDY[d]};
            cells.push_back(p);
        }
    }
    return cells;
}

int fed_column(const SimGeometry& g, int side, int index) {
    switch (side) {
        case kLeft: return g.l - 3 * g.q - 1 - index;
        case kDown: return g.l - 3 * g.q + index;
        case kRight: return g.l - 2 * g.q + index;
        default: return g.l - 1 - index;
    }
}

CellRole classify_cell(int i, int j, const SimGeometry& g) {
    if (i < 0 || j < 0 || i >= g.N || j >= g.N) throw std::out_of_range(fmt::format("cell ({}, {}) outside the super-tile", i, j));
    CellRole r;
    const int zt = j - g.y0();
    if (i < g.l && zt >= 0 && zt < g.h()) {
        if (zt == 0) r.kind = i < g.lit ? RoleKind::literal : RoleKind::interface_row;
        else if (zt < g.hI) r.kind = RoleKind::i_diagram;
        else if (zt < g.hI + g.hU) r.kind = RoleKind::u_diagram;
        else r.kind = RoleKind::a_diagram;
        return r;
    }
    const Pos p{i, j};
    for (int side = 0; side < 4; ++side) {
        auto w0 = raw_route(g, side, 0), w1 = raw_route(g, side, 1);
        for (std::size_t s = 0; s + 1 < w0.size(); ++s) {
            // the fixed coordinate of segment s gives the only candidate index
            int a, b, v;
            if (w0[s].y == w0[s + 1].y && w1[s].y == w1[s + 1].y) a = w0[s].y, b = w1[s].y - a, v = j;
            else if (w0[s].x == w0[s + 1].x && w1[s].x == w1[s + 1].x) a = w0[s].x, b = w1[s].x - a, v = i;
            else continue;
            if (b != 1 && b != -1) continue;
            int k = (v - a) * b;
            if (k < 0 || k >= g.q) continue;
            auto io = locate(route(g, side, k), side, p);
            if (!io) continue;
            r.kind = p == route(g, side, k)[0] ? RoleKind::carrier : RoleKind::cable;
            r.side = side;
            r.index = k;
            r.in_side = io->first;
            r.out_side = io->second;
            r.cable = shape(io->first, io->second);
            return r;
        }
    }
    return r;
}

EdgeColor decode_color(int c, int N) {
    EdgeColor e;
    e.payload = c % kPayloads;
    c /= kPayloads;
    e.y = c % N;
    c /= N;
    e.x = c % N;
    e.horizontal = c / N == 1;
    return e;
}

int encode_color(const EdgeColor& e, int N) {
    auto m = [N](int v) { return ((v % N) + N) % N; };
    return (((e.horizontal ? 1 : 0) * N + m(e.x)) * N + m(e.y)) * kPayloads + e.payload;
}

namespace {

int vcol(const SimGeometry& g, int x, int y, int payload) { return encode_color({false, x, y, payload}, g.N); }
int hcol(const SimGeometry& g, int x, int y, int payload) { return encode_color({true, x, y, payload}, g.N); }

WangTile tile_at(const SimGeometry& g, int x, int y, int pw, int pe, int ps, int pn) {
    return {hcol(g, x, y + 1, pn), vcol(g, x + 1, y, pe), hcol(g, x, y, ps), vcol(g, x, y, pw)};
}

WangTile cable_tile(const SimGeometry& g, int x, int y, int in, int out, int bit) {
    int pay[4] = {0, 0, 0, 0};
    pay[in] = pay[out] = 1 + bit;
    return tile_at(g, x, y, pay[kLeft], pay[kRight], pay[kDown], pay[kUp]);
}

bool is_bit(int p) { return p == pZero || p == pOne; }
int word_bit(int w) { return (w - 1) % 2; }
bool is_head(int w) { return w == wH0 || w == wH1; }

int sweep(int s, int p, int w, int wr) {
    if (s == sM) return sM;
    const int base = p == pHash ? sNHash : sN;
    bool comparing = s == sC || (s == sNHash && is_head(w));
    if (!comparing || w == wE) return base;
    bool ok = is_bit(p) && word_bit(w) == p - pZero;
    if (!ok) return base;
    return wr == wE ? sM : sC;
}

struct ZoneOut {
    WangTile t;
    int s_out = sN, a_out = 0;
    bool rejected = false;
};

// Fed cells get their word symbol from the cable bit; all other bottom-row cells start empty.
int initial_word(const SimGeometry& g, int x, int bit) {
    if (x < g.fed0()) return wE;
    return (x == g.fed0() ? wH0 : wB0) + bit;
}

std::optional<ZoneOut> zone_tile(const SimGeometry& g, int p, int x, int zt, int w, int wr, int s_in, int a_in) {
    const int l = g.l, h = g.h();
    if (w < 0 || w > wH1 || wr < 0 || wr > wH1 || s_in < 0 || s_in > sM || a_in < 0 || a_in > 1) return std::nullopt;
    if (x == 0 && s_in != sN) return std::nullopt;
    if (x == l - 1 && wr != wE) return std::nullopt;
    if (x < l - 1 && a_in) return std::nullopt;
    if (zt == 0 && (a_in || (x < g.fed0() && w != wE) || (x >= g.fed0() && (w == wE || w != initial_word(g, x, word_bit(w)))))) return std::nullopt;
    ZoneOut o;
    o.s_out = sweep(s_in, p, w, wr);
    o.a_out = x == l - 1 ? (a_in || o.s_out == sM) : 0;
    o.rejected = zt == h - 1 && x == l - 1 && !o.a_out;
    int ps = zt == 0 ? (x >= g.fed0() ? 1 + word_bit(w) : 0) : 1 + (p * 5 + w) * 2 + a_in;
    int pn = zt == h - 1 ? 0 : 1 + (p * 5 + wr) * 2 + o.a_out;
    int pw = x == 0 ? 0 : 1 + s_in * 5 + w;
    int pe = x == l - 1 ? 0 : 1 + o.s_out * 5 + wr;
    o.t = tile_at(g, x, g.y0() + zt, pw, pe, ps, pn);
    return o;
}

// Decoded zone tile recomputed from its own payloads.
std::optional<ZoneOut> zone_recompute(const SimGeometry& g, int p, int x, int zt, const WangTile& t) {
    const int N = g.N;
    int pw = decode_color(t.w, N).payload, pe = decode_color(t.e, N).payload, ps = decode_color(t.s, N).payload;
    int w, a_in = 0, s_in = sN, wr = wE;
    if (zt == 0) {
        if (x >= g.fed0()) {
            if (ps != 1 && ps != 2) return std::nullopt;
            w = initial_word(g, x, ps - 1);
        } else {
            w = wE;
        }
    } else {
        if (ps < 1) return std::nullopt;
        a_in = (ps - 1) % 2;
        w = ((ps - 1) / 2) % 5;
    }
    if (x > 0) {
        if (pw < 1) return std::nullopt;
        s_in = (pw - 1) / 5;
    }
    if (x < g.l - 1) {
        if (pe < 1) return std::nullopt;
        wr = (pe - 1) % 5;
    }
    return zone_tile(g, p, x, zt, w, wr, s_in, a_in);
}

bool member_impl(const SimGeometry& g, const std::vector<int>& program, const WangTile& t) {
    const int N = g.N;
    const int limit = 2 * N * N * kPayloads;
    for (int c : {t.n, t.e, t.s, t.w})
        if (c < 0 || c >= limit) return false;
    EdgeColor s = decode_color(t.s, N);
    if (!s.horizontal) return false;
    const int x = s.x, y = s.y;
    CellRole r = classify_cell(x, y, g);
    WangTile expect;
    switch (r.kind) {
        case RoleKind::block: expect = tile_at(g, x, y, 0, 0, 0, 0); break;
        case RoleKind::carrier:
        case RoleKind::cable: {
            int pay = 0;
            switch (r.in_side) {
                case kLeft: pay = decode_color(t.w, N).payload; break;
                case kRight: pay = decode_color(t.e, N).payload; break;
                case kDown: pay = s.payload; break;
                default: pay = decode_color(t.n, N).payload;
            }
            if (pay != 1 && pay != 2) return false;
            expect = cable_tile(g, x, y, r.in_side, r.out_side, pay - 1);
            break;
        }
        default: {
            int p = x < static_cast<int>(program.size()) ? program[x] : pBlank;
            auto o = zone_recompute(g, p, x, y - g.y0(), t);
            if (!o || o->rejected) return false;
            expect = o->t;
        }
    }
    return expect == t;
}

int side_colour(const WangTile& t, int side) {
    switch (side) {
        case kLeft: return t.w;
        case kUp: return t.n;
        case kRight: return t.e;
        default: return t.s;
    }
}

// (side, bit index) feeding fed cell f.
std::pair<int, int> fed_source(int q, int f) {
    if (f < q) return {kLeft, q - 1 - f};
    if (f < 2 * q) return {kDown, f - q};
    if (f < 3 * q) return {kRight, f - 2 * q};
    return {kUp, 4 * q - 1 - f};
}

}  // namespace

std::vector<int> Simulation::word_of(const WangTile& t) const {
    std::vector<int> out;
    for (int f = 0; f < 4 * geom.q; ++f) {
        auto [side, k] = fed_source(geom.q, f);
        out.push_back((side_colour(t, side) >> k) & 1);
    }
    return out;
}

bool Simulation::member(const WangTile& t) const { return member_impl(geom, program, t); }

namespace {

std::vector<WangTile> explicit_tiles(const WangTileSet& rho) {
    std::vector<WangTile> out = rho.tiles;
    if (out.empty() && rho.predicate) {
        const long long c = std::max(1, rho.num_colors);
        if (c * c * c * c > 1'000'000) throw SizingError("rho predicate: too many colour quadruples to enumerate");
        for (int n = 0; n < c; ++n)
            for (int e = 0; e < c; ++e)
                for (int so = 0; so < c; ++so)
                    for (int w = 0; w < c; ++w)
                        if (rho.predicate({n, e, so, w})) out.push_back({n, e, so, w});
    }
    if (out.empty()) throw std::invalid_argument("simulate_tileset: rho has no tiles");
    for (auto& t : out)
        for (int c : {t.n, t.e, t.s, t.w})
            if (c < 0 || c >= rho.num_colors) throw std::invalid_argument("simulate_tileset: rho colour out of range");
    return out;
}

int colour_bits(const WangTileSet& rho) {
    return std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(std::max(0, rho.num_colors - 1)))));
}

}  // namespace

SimGeometry smallest_geometry(const WangTileSet& rho) {
    SimGeometry g;
    g.q = colour_bits(rho);
    g.lit = static_cast<int>(explicit_tiles(rho).size()) * (4 * g.q + 1) + 1;
    g.l = 4 * g.q + g.lit;
    g.hI = g.lit;
    g.hU = g.hA = 0;
    g.N = g.l + g.q;
    return g;
}

Simulation simulate_tileset(const WangTileSet& rho, int N, const SimGeometry& geom_in) {
    Simulation s;
    s.geom = geom_in.N == 0 ? SimGeometry::standard(N) : resolved(geom_in);
    const SimGeometry& g = s.geom;
    g.validate();
    s.rho = rho;
    s.rho.tiles = explicit_tiles(rho);
    s.colour_bits = colour_bits(rho);
    if (s.colour_bits > g.q)
        throw SizingError(fmt::format("super-colour width: rho needs {} bits per colour, q = {}", s.colour_bits, g.q));

    s.program = {pHash};
    for (auto& t : s.rho.tiles) {
        for (int b : s.word_of(t)) s.program.push_back(pZero + b);
        s.program.push_back(pHash);
    }
    if (static_cast<int>(s.program.size()) > g.lit)
        throw SizingError(fmt::format("program literal: {} cells > literal width {}", s.program.size(), g.lit));
    if (g.h() < g.fed0())
        throw SizingError(fmt::format("computation time: zone height {} < {} steps needed to reach the first entry", g.h(), g.fed0()));

    auto& tiles = s.tau.tiles;
    for (int y = 0; y < g.N; ++y)
        for (int x = 0; x < g.N; ++x) {
            CellRole r = classify_cell(x, y, g);
            switch (r.kind) {
                case RoleKind::block: tiles.push_back(tile_at(g, x, y, 0, 0, 0, 0)); break;
                case RoleKind::carrier:
                case RoleKind::cable:
                    for (int b = 0; b < 2; ++b) tiles.push_back(cable_tile(g, x, y, r.in_side, r.out_side, b));
                    break;
                default: {
                    const int zt = y - g.y0(), p = s.prog_at(x);
                    for (int w = 0; w <= wH1; ++w)
                        for (int wr = 0; wr <= wH1; ++wr)
                            for (int si = 0; si <= sM; ++si)
                                for (int a = 0; a < 2; ++a) {
                                    auto o = zone_tile(g, p, x, zt, w, wr, si, a);
                                    if (o && !o->rejected) tiles.push_back(o->t);
                                }
                }
            }
        }
    s.tau.num_colors = 2 * g.N * g.N * kPayloads;
    s.tau.predicate = [g, prog = s.program](const WangTile& t) { return member_impl(g, prog, t); };
    return s;
}

namespace {

std::optional<std::vector<WangTile>> assemble_colours(const Simulation& s, const WangTile& sc) {
    const SimGeometry& g = s.geom;
    const int N = g.N;
    std::vector<WangTile> cells(static_cast<std::size_t>(N) * N);
    auto at = [&](int x, int y) -> WangTile& { return cells[static_cast<std::size_t>(y) * N + x]; };
    for (int y = 0; y < N; ++y)
        for (int x = 0; x < N; ++x) at(x, y) = tile_at(g, x, y, 0, 0, 0, 0);
    for (int side = 0; side < 4; ++side)
        for (int k = 0; k < g.q; ++k) {
            int bit = (side_colour(sc, side) >> k) & 1;
            for (Pos p : cable_path(g, side, k)) {
                CellRole r = classify_cell(p.x, p.y, g);
                at(p.x, p.y) = cable_tile(g, p.x, p.y, r.in_side, r.out_side, bit);
            }
        }
    std::vector<int> w(static_cast<std::size_t>(g.l), wE);
    for (int f = 0; f < 4 * g.q; ++f) {
        auto [side, k] = fed_source(g.q, f);
        w[g.fed0() + f] = initial_word(g, g.fed0() + f, (side_colour(sc, side) >> k) & 1);
    }
    int a = 0;
    for (int zt = 0; zt < g.h(); ++zt) {
        int st = sN;
        std::vector<int> next(w.size(), wE);
        for (int x = 0; x < g.l; ++x) {
            int wr = x + 1 < g.l ? w[x + 1] : wE;
            auto o = zone_tile(g, s.prog_at(x), x, zt, w[x], wr, st, x == g.l - 1 ? a : 0);
            if (!o) throw std::logic_error("assemble: inconsistent zone state");
            if (o->rejected) return std::nullopt;
            at(x, g.y0() + zt) = o->t;
            st = o->s_out;
            next[x] = wr;
            if (x == g.l - 1) a = o->a_out;
        }
        w = std::move(next);
    }
    return cells;
}

}  // namespace

std::vector<WangTile> assemble(const Simulation& s, const WangTile& t) {
    auto r = assemble_colours(s, t);
    if (!r) throw std::invalid_argument("assemble: super-colours are not a tile of rho");
    return *r;
}

Tiling to_ids(const Simulation& s, const std::vector<WangTile>& cells) {
    std::map<WangTile, int> id;
    for (int i = 0; i < static_cast<int>(s.tau.tiles.size()); ++i) id.emplace(s.tau.tiles[i], i);
    Tiling t{s.geom.N, s.geom.N, {}};
    for (auto& c : cells) {
        auto it = id.find(c);
        t.t.push_back(it == id.end() ? -1 : it->second);
    }
    return t;
}

Boundary supertile_boundary(const Simulation& s, const WangTile& sc) {
    const SimGeometry& g = s.geom;
    const int N = g.N, q = g.q;
    Boundary b = Boundary::free(N, N);
    auto bit = [&](int side, int k) { return 1 + ((side_colour(sc, side) >> k) & 1); };
    for (int x = 0; x < N; ++x) {
        bool carrier = x >= q && x < 2 * q;
        b.south[x] = {hcol(g, x, 0, carrier ? bit(kDown, x - q) : 0)};
        b.north[x] = {hcol(g, x, N, carrier ? bit(kUp, x - q) : 0)};
    }
    for (int y = 0; y < N; ++y) {
        b.west[y] = {vcol(g, 0, y, y < q ? bit(kLeft, y) : 0)};
        b.east[y] = {vcol(g, N, y, y < q ? bit(kRight, y) : 0)};
    }
    return b;
}

WangTile read_supercolors(const Simulation& s, const std::vector<WangTile>& cells) {
    const SimGeometry& g = s.geom;
    const int N = g.N;
    int col[4] = {0, 0, 0, 0};
    for (int side = 0; side < 4; ++side)
        for (int k = 0; k < g.q && col[side] >= 0; ++k) {
            Pos c = cable_path(g, side, k)[0];
            int pay = decode_color(side_colour(cells[static_cast<std::size_t>(c.y) * N + c.x], side), N).payload;
            if (pay != 1 && pay != 2) col[side] = -1;
            else col[side] |= (pay - 1) << k;
        }
    return {col[kUp], col[kRight], col[kDown], col[kLeft]};
}

std::optional<WangTile> phi(const Simulation& s, const std::vector<WangTile>& cells) {
    WangTile t = read_supercolors(s, cells);
    for (auto& r : s.rho.tiles)
        if (r == t) return t;
    return std::nullopt;
}

SupertileCheck verify_supertile(const Simulation& s, const std::vector<WangTile>& cells) {
    const SimGeometry& g = s.geom;
    const int N = g.N;
    auto fail = [](const char* what, int x, int y) { return SupertileCheck{false, what, {x, y}}; };
    if (cells.size() != static_cast<std::size_t>(N) * N) return fail("coordinates", -1, -1);
    auto at = [&](int x, int y) -> const WangTile& { return cells[static_cast<std::size_t>(y) * N + x]; };
    const int limit = 2 * N * N * kPayloads;
    for (int y = 0; y < N; ++y)
        for (int x = 0; x < N; ++x) {
            const WangTile& t = at(x, y);
            for (int c : {t.n, t.e, t.s, t.w})
                if (c < 0 || c >= limit) return fail("coordinates", x, y);
            auto chk = [&](int c, bool hz, int cx, int cy) {
                EdgeColor e = decode_color(c, N);
                return e.horizontal == hz && e.x == cx % N && e.y == cy % N;
            };
            if (!chk(t.w, false, x, y) || !chk(t.e, false, x + 1, y) || !chk(t.s, true, x, y) || !chk(t.n, true, x, y + 1))
                return fail("coordinates", x, y);
        }
    for (int y = 0; y < N; ++y)
        for (int x = 0; x < N; ++x) {
            if (x + 1 < N && at(x, y).e != at(x + 1, y).w) return fail("matching", x, y);
            if (y + 1 < N && at(x, y).n != at(x, y + 1).s) return fail("matching", x, y);
        }
    for (int y = 0; y < N; ++y)
        for (int x = 0; x < N; ++x) {
            CellRole r = classify_cell(x, y, g);
            const WangTile& t = at(x, y);
            int pay[4] = {decode_color(t.w, N).payload, decode_color(t.n, N).payload, decode_color(t.e, N).payload,
                          decode_color(t.s, N).payload};
            if (r.kind == RoleKind::block) {
                for (int p : pay)
                    if (p) return fail("cable", x, y);
            } else if (r.kind == RoleKind::carrier || r.kind == RoleKind::cable) {
                for (int side = 0; side < 4; ++side) {
                    bool used = side == r.in_side || side == r.out_side;
                    if (used ? (pay[side] != 1 && pay[side] != 2) || pay[side] != pay[r.in_side] : pay[side] != 0)
                        return fail("cable", x, y);
                }
            }
        }
    for (int zt = 0; zt + 1 < g.h(); ++zt)
        for (int x = 0; x < g.l; ++x) {
            int pn = decode_color(at(x, g.y0() + zt).n, N).payload;
            if (pn < 1 || ((pn - 1) / 2) / 5 != s.prog_at(x)) return fail("literal", x, g.y0() + zt);
        }
    for (int zt = 0; zt < g.h(); ++zt)
        for (int x = 0; x < g.l; ++x) {
            const WangTile& t = at(x, g.y0() + zt);
            auto o = zone_recompute(g, s.prog_at(x), x, zt, t);
            if (!o || !(o->t == t)) return fail("diagram", x, g.y0() + zt);
            if (o->rejected) return fail("accept", x, g.y0() + zt);
        }
    return {};
}

SupertileCheck verify_supertile(const Simulation& s, const Tiling& t) {
    if (t.w != s.geom.N || t.h != s.geom.N) return {false, "coordinates", {-1, -1}};
    std::vector<WangTile> cells;
    for (int id : t.t) {
        if (id < 0 || id >= static_cast<int>(s.tau.tiles.size())) return {false, "coordinates", {-1, -1}};
        cells.push_back(s.tau.tiles[id]);
    }
    return verify_supertile(s, cells);
}

std::vector<int> fed_bits(const Simulation& s, const std::vector<WangTile>& cells) {
    const SimGeometry& g = s.geom;
    std::vector<int> out;
    for (int x = g.fed0(); x < g.l; ++x)
        out.push_back(decode_color(cells[static_cast<std::size_t>(g.y0()) * g.N + x].s, g.N).payload - 1);
    return out;
}

std::vector<int> carrier_bits(const Simulation& s, const std::vector<WangTile>& cells) {
    const SimGeometry& g = s.geom;
    std::vector<int> out;
    for (int f = 0; f < 4 * g.q; ++f) {
        auto [side, k] = fed_source(g.q, f);
        Pos c = cable_path(g, side, k)[0];
        out.push_back(decode_color(side_colour(cells[static_cast<std::size_t>(c.y) * g.N + c.x], side), g.N).payload - 1);
    }
    return out;
}

std::vector<int> binary(int k) {
    if (k < 0) throw std::invalid_argument("binary: negative");
    std::vector<int> out;
    for (int b = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(k)))) - 1; b >= 0; --b) out.push_back((k >> b) & 1);
    return out;
}

LevelLayout variable_zoom_schedule(int k, int program_bits) {
    if (k < 0 || k > 25) throw std::invalid_argument("variable_zoom_schedule: rank out of range");
    LevelLayout L;
    L.k = k;
    L.N = 1 << (k + 5);
    L.q = L.N / 16;
    L.program_bits = program_bits;
    L.rank_bits = static_cast<int>(binary(k).size());
    L.coord_bits = k + 5;
    L.payload_bits = 2 * (k + 6);  // position inside the rank k+1 mother
    L.fits = L.payload_bits <= L.q;
    return L;
}

std::vector<int> encode_level_fields(const LevelFields& f) {
    std::vector<int> out;
    for (auto* v : {&f.program, &f.rank, &f.payload}) {
        for (int b : *v) {
            if (b != 0 && b != 1) throw std::invalid_argument("encode_level_fields: non-binary symbol");
            out.insert(out.end(), {1, b});
        }
        out.insert(out.end(), {0, 1});
    }
    return out;
}

LevelFields decode_level_fields(const std::vector<int>& tape) {
    if (tape.size() % 2) throw std::invalid_argument("decode_level_fields: odd length");
    LevelFields f;
    std::vector<int>* dst[3] = {&f.program, &f.rank, &f.payload};
    int field = 0;
    for (std::size_t i = 0; i < tape.size(); i += 2) {
        if (field == 3) throw std::invalid_argument("decode_level_fields: data after the last field");
        int a = tape[i], b = tape[i + 1];
        if (a == 1 && (b == 0 || b == 1)) dst[field]->push_back(b);
        else if (a == 0 && b == 1) ++field;
        else throw std::invalid_argument("decode_level_fields: bad pair");
    }
    if (field != 3) throw std::invalid_argument("decode_level_fields: missing delimiter");
    return f;
}

}  // namespace symdyn::fix
