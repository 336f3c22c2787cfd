#include "symdyn/flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

namespace symdyn {

SuperTileFlowGraph SuperTileFlowGraph::empty(int N, int rho) {
    SuperTileFlowGraph g;
    g.N = N;
    g.rho = rho;
    g.src_cap.assign(static_cast<std::size_t>(N) * N, 0);
    return g;
}

int SuperTileFlowGraph::F() const {
    int s = 0;
    for (int c : src_cap) s += c;
    return s;
}

std::vector<Arc> arcs_of(const SuperTileFlowGraph& g) {
    std::vector<Arc> a;
    const int N = g.N;
    for (int y = 0; y < N; ++y)
        for (int x = 0; x < N; ++x)
            for (int d = 0; d < 4; ++d) {
                int nx = x + kDX[d], ny = y + kDY[d];
                if (nx < 0 || ny < 0 || nx >= N || ny >= N) continue;
                a.push_back({g.vid(x, y), g.vid(nx, ny), g.rho});
            }
    for (int v = 0; v < N * N; ++v)
        if (g.src_cap[v] > 0) a.push_back({g.source(), v, g.src_cap[v]});
    std::map<int, int> mult;
    for (int v : g.sinks) ++mult[v];
    for (auto [v, m] : mult) a.push_back({v, g.sink(), m});
    return a;
}

ValidationReport validate(const SuperTileFlowGraph& g) {
    ValidationReport r;
    auto bad = [&](Violation v) {
        r.ok = false;
        r.violations.push_back(std::move(v));
    };
    const int N = g.N;
    if (N < 1 || g.rho < 1) {
        bad({"N and rho must be positive"});
        return r;
    }
    if (g.src_cap.size() != static_cast<std::size_t>(N) * N) {
        bad({"source capacity table has wrong size"});
        return r;
    }
    for (int v = 0; v < N * N; ++v)
        if (g.src_cap[v] < 0 || g.src_cap[v] > g.rho)
            bad({"source arc capacity outside [1, rho]", 1, v % N, v / N, g.src_cap[v], g.rho});
    std::vector<long long> snk(static_cast<std::size_t>(N) * N, 0);
    for (int v : g.sinks) {
        if (v < 0 || v >= N * N) {
            bad({"sink arc on a non-grid vertex", 0, 0, 0, v, 0});
            continue;
        }
        ++snk[v];
    }
    if (static_cast<long long>(g.sinks.size()) != g.F())
        bad({"number of sink arcs differs from F", 0, 0, 0, static_cast<long long>(g.sinks.size()), g.F()});
    // 2D prefix sums
    auto prefix = [&](auto val) {
        std::vector<long long> P(static_cast<std::size_t>(N + 1) * (N + 1), 0);
        for (int y = 0; y < N; ++y)
            for (int x = 0; x < N; ++x)
                P[(y + 1) * (N + 1) + x + 1] = val(y * N + x) + P[y * (N + 1) + x + 1] + P[(y + 1) * (N + 1) + x] - P[y * (N + 1) + x];
        return P;
    };
    auto PS = prefix([&](int v) { return static_cast<long long>(g.src_cap[v]); });
    auto PK = prefix([&](int v) { return snk[v]; });
    auto sq = [&](const std::vector<long long>& P, int x, int y, int c) {
        return P[(y + c) * (N + 1) + x + c] - P[y * (N + 1) + x + c] - P[(y + c) * (N + 1) + x] + P[y * (N + 1) + x];
    };
    for (int c = 1; c <= N; ++c)
        for (int y = 0; y + c <= N; ++y)
            for (int x = 0; x + c <= N; ++x) {
                long long bound = static_cast<long long>(g.rho) * c;
                if (auto s = sq(PS, x, y, c); s > bound) bad({"source capacity into square exceeds rho*c", c, x, y, s, bound});
                if (auto s = sq(PK, x, y, c); s > bound) bad({"sink arcs out of square exceed rho*c", c, x, y, s, bound});
            }
    return r;
}

bool flow_valid(const SuperTileFlowGraph& g, const Flow& fl) {
    auto A = arcs_of(g);
    if (fl.f.size() != A.size()) return false;
    std::vector<long long> bal(static_cast<std::size_t>(g.N) * g.N + 2, 0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (fl.f[i] < 0 || fl.f[i] > A[i].cap) return false;
        bal[A[i].from] -= fl.f[i];
        bal[A[i].to] += fl.f[i];
    }
    for (int v = 0; v < g.N * g.N; ++v)
        if (bal[v] != 0) return false;
    return bal[g.sink()] == fl.value && -bal[g.source()] == fl.value;
}

Flow max_flow(const SuperTileFlowGraph& g) {
    if (!validate(g).ok) throw std::invalid_argument("max_flow: graph does not validate");
    auto A = arcs_of(g);
    const int V = g.N * g.N + 2;
    // residual edges: 2i forward, 2i+1 backward
    std::vector<int> cap(2 * A.size());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(V));
    for (std::size_t i = 0; i < A.size(); ++i) {
        cap[2 * i] = A[i].cap;
        cap[2 * i + 1] = 0;
        adj[A[i].from].push_back(static_cast<int>(2 * i));
        adj[A[i].to].push_back(static_cast<int>(2 * i + 1));
    }
    auto head = [&](int e) { return (e & 1) ? A[e / 2].from : A[e / 2].to; };
    Flow fl;
    fl.f.assign(A.size(), 0);
    const int s = g.source(), t = g.sink();
    while (true) {
        std::vector<int> via(static_cast<std::size_t>(V), -1);
        std::vector<char> seen(static_cast<std::size_t>(V), 0);
        std::deque<int> q{s};
        seen[s] = 1;
        while (!q.empty() && !seen[t]) {
            int u = q.front();
            q.pop_front();
            for (int e : adj[u]) {
                int v = head(e);
                if (!seen[v] && cap[e] > 0) {
                    seen[v] = 1;
                    via[v] = e;
                    q.push_back(v);
                }
            }
        }
        if (!seen[t]) break;
        int b = std::numeric_limits<int>::max();
        for (int v = t; v != s; v = head(via[v] ^ 1)) b = std::min(b, cap[via[v]]);
        for (int v = t; v != s; v = head(via[v] ^ 1)) {
            cap[via[v]] -= b;
            cap[via[v] ^ 1] += b;
        }
        fl.value += b;
    }
    for (std::size_t i = 0; i < A.size(); ++i) fl.f[i] = cap[2 * i + 1];
    return fl;
}

long long cut_value(const SuperTileFlowGraph& g, std::uint64_t mask) {
    auto A = arcs_of(g);
    auto side = [&](int v) {
        if (v == g.source()) return true;
        if (v == g.sink()) return false;
        return ((mask >> v) & 1) != 0;
    };
    long long c = 0;
    for (auto& a : A)
        if (side(a.from) && !side(a.to)) c += a.cap;
    return c;
}

CutReport min_cut_check(const SuperTileFlowGraph& g) {
    if (!validate(g).ok) throw std::invalid_argument("min_cut_check: graph does not validate");
    CutReport r;
    r.F = g.F();
    const int V = g.N * g.N;
    r.source_cut = cut_value(g, 0);
    r.sink_cut = cut_value(g, V >= 64 ? ~0ull : ((1ull << V) - 1));
    if (g.N <= 3) {
        long long best = std::numeric_limits<long long>::max();
        for (std::uint64_t m = 0; m < (1ull << V); ++m) {
            best = std::min(best, cut_value(g, m));
            ++r.cuts_checked;
        }
        r.exhaustive_min = best;
    }
    return r;
}

std::vector<std::uint64_t> components(int N, std::uint64_t mask) {
    std::vector<std::uint64_t> out;
    std::uint64_t left = mask;
    while (left) {
        int v0 = __builtin_ctzll(left);
        std::uint64_t comp = 0;
        std::vector<int> st{v0};
        comp |= 1ull << v0;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            int x = v % N, y = v / N;
            for (int d = 0; d < 4; ++d) {
                int nx = x + kDX[d], ny = y + kDY[d];
                if (nx < 0 || ny < 0 || nx >= N || ny >= N) continue;
                int u = ny * N + nx;
                if (((mask >> u) & 1) && !((comp >> u) & 1)) {
                    comp |= 1ull << u;
                    st.push_back(u);
                }
            }
        }
        out.push_back(comp);
        left &= ~comp;
    }
    return out;
}

Decomposition decompose(const SuperTileFlowGraph& g, const Flow& fl) {
    if (!flow_valid(g, fl)) throw std::invalid_argument("decompose: invalid flow");
    auto A = arcs_of(g);
    const int V = g.N * g.N + 2;
    std::vector<std::vector<int>> out(static_cast<std::size_t>(V));
    for (std::size_t i = 0; i < A.size(); ++i) out[A[i].from].push_back(static_cast<int>(i));
    std::vector<int> rem = fl.f;
    Decomposition d;
    auto next_arc = [&](int v) {
        for (int e : out[v])
            if (rem[e] > 0) return e;
        return -1;
    };
    // Walk from start; peel cycles on revisits; returns the final elementary walk.
    auto walk = [&](int start, bool to_sink) {
        std::vector<int> verts{start}, arcs;
        std::vector<int> pos(static_cast<std::size_t>(V), -1);
        pos[start] = 0;
        while (true) {
            int v = verts.back();
            if (to_sink && v == g.sink()) return arcs;
            int e = next_arc(v);
            if (e < 0) throw std::logic_error("decompose: conservation broken");
            int u = A[e].to;
            if (pos[u] >= 0) {
                std::vector<int> cyc(arcs.begin() + pos[u], arcs.end());
                cyc.push_back(e);
                for (int c : cyc) --rem[c];
                d.cycles.push_back(cyc);
                for (std::size_t k = static_cast<std::size_t>(pos[u]) + 1; k < verts.size(); ++k) pos[verts[k]] = -1;
                verts.resize(static_cast<std::size_t>(pos[u]) + 1);
                arcs.resize(static_cast<std::size_t>(pos[u]));
                if (!to_sink) return std::vector<int>{};
                continue;
            }
            pos[u] = static_cast<int>(verts.size());
            verts.push_back(u);
            arcs.push_back(e);
        }
    };
    while (next_arc(g.source()) >= 0) {
        auto p = walk(g.source(), true);
        for (int e : p) --rem[e];
        d.paths.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < A.size(); ++i)
        while (rem[i] > 0) walk(A[i].from, false);
    return d;
}

std::vector<int> reconstruct(const SuperTileFlowGraph& g, const Decomposition& d) {
    std::vector<int> f(arcs_of(g).size(), 0);
    for (auto& p : d.paths)
        for (int e : p) ++f[e];
    for (auto& c : d.cycles)
        for (int e : c) ++f[e];
    return f;
}

bool elementary(const SuperTileFlowGraph& g, const std::vector<int>& p) {
    auto A = arcs_of(g);
    std::vector<char> seen(static_cast<std::size_t>(g.N) * g.N + 2, 0);
    if (p.empty()) return true;
    seen[A[p.front()].from] = 1;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k > 0 && A[p[k]].from != A[p[k - 1]].to) return false;
        int v = A[p[k]].to;
        if (seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

int arrow_out(int side) { return 1 + side; }
int arrow_in(int side) { return 17 + side; }
int arrow_transit(int a, int b) {
    if (a == b) throw std::invalid_argument("transit arrow needs distinct sides");
    return 5 + a * 3 + (b < a ? b : b - 1);
}

ArrowInfo arrow_decode(int id) {
    ArrowInfo r;
    if (id >= 1 && id <= 4) r.out_side = id - 1;
    else if (id >= 5 && id <= 16) {
        int k = id - 5;
        r.in_side = k / 3;
        int b = k % 3;
        r.out_side = b < r.in_side ? b : b + 1;
    } else if (id >= 17 && id <= 20) r.in_side = id - 17;
    else if (id != 0) throw std::invalid_argument("arrow id out of range");
    return r;
}

Routing route_points(int N, int rho, const std::vector<int>& production, const std::vector<int>& slots) {
    Routing r;
    auto g = SuperTileFlowGraph::empty(N, rho);
    g.src_cap = production;
    g.sinks = slots;
    auto rep = validate(g);
    if (!rep.ok) {
        r.error = "infeasible: " + rep.violations.front().what;
        return r;
    }
    auto fl = max_flow(g);
    if (fl.value != g.F()) {
        r.error = "infeasible: max flow below F";
        return r;
    }
    auto A = arcs_of(g);
    auto dec = decompose(g, fl);
    std::vector<std::vector<int>> by_slot(static_cast<std::size_t>(N) * N);
    std::vector<Commodity> paths;
    for (auto& p : dec.paths) {
        Commodity c;
        for (std::size_t k = 1; k < p.size(); ++k) c.vertices.push_back(A[p[k]].from);
        c.producer = c.vertices.front();
        c.slot = c.vertices.back();
        by_slot[c.slot].push_back(static_cast<int>(paths.size()));
        paths.push_back(std::move(c));
    }
    r.tables.assign(static_cast<std::size_t>(N) * N, {});
    std::vector<std::size_t> used(static_cast<std::size_t>(N) * N, 0);
    for (int s : slots) {
        int pi = by_slot[s].at(used[s]++);
        Commodity c = paths[pi];
        int id = static_cast<int>(r.commodities.size());
        auto side_between = [&](int u, int v) {
            for (int d = 0; d < 4; ++d)
                if (u % N + kDX[d] == v % N && u / N + kDY[d] == v / N) return d;
            throw std::logic_error("non-adjacent step");
        };
        const std::size_t L = c.vertices.size();
        for (std::size_t k = 0; k < L; ++k) {
            int v = c.vertices[k];
            int in = k > 0 ? opposite(side_between(c.vertices[k - 1], v)) : -1;
            int out = k + 1 < L ? side_between(v, c.vertices[k + 1]) : -1;
            int arrow = 0;
            if (in < 0 && out >= 0) arrow = arrow_out(out);
            else if (in >= 0 && out >= 0) arrow = arrow_transit(in, out);
            else if (in >= 0) arrow = arrow_in(in);
            r.tables[v].push_back({id, arrow});
        }
        r.commodities.push_back(std::move(c));
    }
    r.ok = true;
    return r;
}

SuperTileFlowGraph random_valid_graph(std::mt19937_64& rng, int N, int rho) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        auto g = SuperTileFlowGraph::empty(N, rho);
        std::uniform_int_distribution<int> Fd(1, rho * N), vd(0, N * N - 1);
        int F = Fd(rng);
        int placed = 0, guard = 0;
        while (placed < F && guard++ < 100 * F) {
            int v = vd(rng);
            if (g.src_cap[v] < rho) {
                ++g.src_cap[v];
                ++placed;
            }
        }
        std::vector<int> cnt(static_cast<std::size_t>(N) * N, 0);
        guard = 0;
        while (static_cast<int>(g.sinks.size()) < placed && guard++ < 100 * F) {
            int v = vd(rng);
            if (cnt[v] < rho) {
                ++cnt[v];
                g.sinks.push_back(v);
            }
        }
        std::sort(g.sinks.begin(), g.sinks.end());
        if (validate(g).ok) return g;
    }
    throw std::runtime_error("random_valid_graph: rejection sampling failed");
}

}  // namespace symdyn
