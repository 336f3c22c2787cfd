#include "symdyn/wang.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace symdyn {

int WangTileSet::add_tile(const WangTile& t) {
    auto it = std::find(tiles.begin(), tiles.end(), t);
    if (it != tiles.end()) return static_cast<int>(it - tiles.begin());
    tiles.push_back(t);
    num_colors = std::max({num_colors, t.n + 1, t.e + 1, t.s + 1, t.w + 1});
    return static_cast<int>(tiles.size()) - 1;
}

void WangTileSet::dedup() {
    std::vector<WangTile> out;
    for (auto& t : tiles)
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    tiles = std::move(out);
}

bool WangTileSet::contains(const WangTile& t) const {
    if (predicate) return predicate(t);
    return std::find(tiles.begin(), tiles.end(), t) != tiles.end();
}

Boundary Boundary::free(int w, int h) {
    Boundary b;
    b.south.resize(w);
    b.north.resize(w);
    b.west.resize(h);
    b.east.resize(h);
    return b;
}

Boundary Boundary::of(const WangTileSet& ts, int w, int h, const std::vector<int>& t) {
    Boundary b = free(w, h);
    for (int x = 0; x < w; ++x) {
        b.south[x] = {ts.tiles[t[x]].s};
        b.north[x] = {ts.tiles[t[static_cast<std::size_t>(h - 1) * w + x]].n};
    }
    for (int y = 0; y < h; ++y) {
        b.west[y] = {ts.tiles[t[static_cast<std::size_t>(y) * w]].w};
        b.east[y] = {ts.tiles[t[static_cast<std::size_t>(y) * w + w - 1]].e};
    }
    return b;
}

namespace {

bool allowed(const std::vector<std::vector<int>>* side, int i, int c) {
    if (!side || side->empty()) return true;
    auto& v = (*side)[i];
    return v.empty() || std::find(v.begin(), v.end(), c) != v.end();
}

struct Index {
    std::unordered_map<long long, std::vector<int>> by_ws;
    std::unordered_map<int, std::vector<int>> by_w, by_s;
    std::vector<int> all;
    explicit Index(const WangTileSet& ts) {
        for (int i = 0; i < static_cast<int>(ts.tiles.size()); ++i) {
            auto& t = ts.tiles[i];
            by_ws[key(t.w, t.s)].push_back(i);
            by_w[t.w].push_back(i);
            by_s[t.s].push_back(i);
            all.push_back(i);
        }
    }
    static long long key(int w, int s) { return (static_cast<long long>(w) << 32) ^ static_cast<unsigned>(s); }
    const std::vector<int>& get(int w, int s) const {
        static const std::vector<int> none;
        if (w >= 0 && s >= 0) {
            auto it = by_ws.find(key(w, s));
            return it == by_ws.end() ? none : it->second;
        }
        if (w >= 0) {
            auto it = by_w.find(w);
            return it == by_w.end() ? none : it->second;
        }
        if (s >= 0) {
            auto it = by_s.find(s);
            return it == by_s.end() ? none : it->second;
        }
        return all;
    }
};

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) h = (h ^ static_cast<std::size_t>(x + 1)) * 1099511628211ull;
        return h;
    }
};

}  // namespace

TileResult tile_rectangle(const WangTileSet& ts, int w, int h, const Boundary* b, TileMode mode,
                          const TileLimits& lim) {
    TileResult res;
    if (w <= 0 || h <= 0) return res;
    if (static_cast<std::uint64_t>(w) * h > lim.max_cells) throw std::invalid_argument("tile_rectangle: window too large");
    Index idx(ts);
    auto fits = [&](int tid, int x, int y) {
        auto& t = ts.tiles[tid];
        if (y == 0 && !allowed(b ? &b->south : nullptr, x, t.s)) return false;
        if (x == 0 && !allowed(b ? &b->west : nullptr, y, t.w)) return false;
        if (y == h - 1 && !allowed(b ? &b->north : nullptr, x, t.n)) return false;
        if (x == w - 1 && !allowed(b ? &b->east : nullptr, y, t.e)) return false;
        return true;
    };

    if (mode == TileMode::count) {
        // broken-profile DP: state = north colours of the frontier (w entries) + east colour of the last tile
        std::unordered_map<std::vector<int>, std::uint64_t, VecHash> cur, nxt;
        cur[std::vector<int>(static_cast<std::size_t>(w) + 1, -1)] = 1;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                nxt.clear();
                for (auto& [st, cnt] : cur) {
                    int wc = x == 0 ? -1 : st[w];
                    int sc = y == 0 ? -1 : st[x];
                    for (int tid : idx.get(wc, sc)) {
                        if (!fits(tid, x, y)) continue;
                        auto ns = st;
                        ns[x] = ts.tiles[tid].n;
                        ns[w] = ts.tiles[tid].e;
                        nxt[ns] += cnt;
                    }
                }
                std::swap(cur, nxt);
                if (cur.empty()) return res;
            }
        for (auto& [st, cnt] : cur) res.count += cnt;
        return res;
    }

    const int n = w * h;
    std::vector<int> cand_pos(static_cast<std::size_t>(n), -1);
    std::vector<const std::vector<int>*> cands(static_cast<std::size_t>(n), nullptr);
    Tiling cur{w, h, std::vector<int>(static_cast<std::size_t>(n), -1)};
    std::uint64_t nodes = 0;
    int i = 0;
    bool entering = true;
    while (i >= 0) {
        if (i == n) {
            ++res.count;
            res.tilings.push_back(cur);
            if (mode == TileMode::first) return res;
            if (res.tilings.size() >= lim.max_results) {
                res.limit_hit = true;
                return res;
            }
            --i;
            entering = false;
            continue;
        }
        int x = i % w, y = i / w;
        if (entering) {
            int wc = x == 0 ? -1 : ts.tiles[cur.t[i - 1]].e;
            int sc = y == 0 ? -1 : ts.tiles[cur.t[i - w]].n;
            cands[i] = &idx.get(wc, sc);
            cand_pos[i] = -1;
        }
        auto& cl = *cands[i];
        bool placed = false;
        while (++cand_pos[i] < static_cast<int>(cl.size())) {
            if (++nodes > lim.node_limit) {
                res.limit_hit = true;
                return res;
            }
            int tid = cl[cand_pos[i]];
            if (fits(tid, x, y)) {
                cur.t[i] = tid;
                placed = true;
                break;
            }
        }
        if (placed) {
            ++i;
            entering = true;
        } else {
            cur.t[i] = -1;
            --i;
            entering = false;
        }
    }
    return res;
}

bool tiling_valid(const WangTileSet& ts, const Tiling& t, const Boundary* b) {
    for (int y = 0; y < t.h; ++y)
        for (int x = 0; x < t.w; ++x) {
            int id = t.at(x, y);
            if (id < 0 || id >= static_cast<int>(ts.tiles.size())) return false;
            auto& c = ts.tiles[id];
            if (x + 1 < t.w && c.e != ts.tiles[t.at(x + 1, y)].w) return false;
            if (y + 1 < t.h && c.n != ts.tiles[t.at(x, y + 1)].s) return false;
            if (b) {
                if (y == 0 && !allowed(&b->south, x, c.s)) return false;
                if (y == t.h - 1 && !allowed(&b->north, x, c.n)) return false;
                if (x == 0 && !allowed(&b->west, y, c.w)) return false;
                if (x == t.w - 1 && !allowed(&b->east, y, c.e)) return false;
            }
        }
    return true;
}

SftToWang sft_to_wang(const ShiftSpec& spec, const SearchLimits& lim) {
    if (!spec.finite_list()) throw std::invalid_argument("sft_to_wang: finite forbidden list required");
    SftToWang out;
    const int c = spec.max_forbidden_side();
    out.c = c;
    // Horizontal edges carry the c×(c+1) overlap of two neighbours, vertical edges the (c+1)×c one.
    std::map<Pattern, int> tall, wide;
    auto id_of = [](std::map<Pattern, int>& m, const Pattern& p) {
        auto it = m.find(p);
        if (it != m.end()) return it->second;
        int id = static_cast<int>(m.size());
        m.emplace(p, id);
        return id;
    };
    auto sub = [](const Grid& g, int x0, int y0, int sw, int sh) {
        std::vector<Letter> v;
        for (int y = 0; y < sh; ++y)
            for (int x = 0; x < sw; ++x) v.push_back(g.at(g.x0 + x0 + x, g.y0 + y0 + y));
        return Pattern::rect(sw, sh, v);
    };
    Grid g(0, 0, c + 1, c + 1);
    enumerate_completions(
        g, spec,
        [&](const Grid& sq) {
            WangTile t;
            t.w = id_of(tall, sub(sq, 0, 0, c, c + 1));
            t.e = id_of(tall, sub(sq, 1, 0, c, c + 1));
            t.s = id_of(wide, sub(sq, 0, 0, c + 1, c));
            t.n = id_of(wide, sub(sq, 0, 1, c + 1, c));
            out.tiles.tiles.push_back(t);
            out.letter_of_tile.push_back(sq.at(0, 0));
            out.tile_square.push_back(sq.to_pattern());
            return true;
        },
        lim);
    out.tiles.num_colors = static_cast<int>(std::max(tall.size(), wide.size()));
    out.empty_shift = out.tiles.tiles.empty();
    return out;
}

ShiftSpec wang_to_sft(const WangTileSet& ts) {
    ShiftSpec s;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < ts.tiles.size(); ++i) names.push_back("t" + std::to_string(i));
    s.alphabet = Alphabet(names);
    s.dim = 2;
    s.name = "wang";
    const int T = static_cast<int>(ts.tiles.size());
    for (int a = 0; a < T; ++a)
        for (int b = 0; b < T; ++b) {
            if (ts.tiles[a].e != ts.tiles[b].w) s.forbidden.push_back(Pattern::rect(2, 1, {a, b}));
            if (ts.tiles[a].n != ts.tiles[b].s) s.forbidden.push_back(Pattern::rect(1, 2, {a, b}));
        }
    s.normalize();
    return s;
}

Pattern project_tiling(const Tiling& t, const std::vector<Letter>& letter_of_tile) {
    std::vector<Letter> v;
    for (int id : t.t) v.push_back(letter_of_tile[id]);
    return Pattern::rect(t.w, t.h, v);
}

}  // namespace symdyn
