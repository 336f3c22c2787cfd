#include <gtest/gtest.h>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>
#include <random>
#include <set>

#include "symdyn/flow.hpp"

using namespace symdyn;

namespace {

// Independent max-flow value via Boost push-relabel.
long long boost_max_flow(const SuperTileFlowGraph& g) {
    using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
    using G = boost::adjacency_list<
        boost::vecS, boost::vecS, boost::directedS, boost::no_property,
        boost::property<boost::edge_capacity_t, long,
                        boost::property<boost::edge_residual_capacity_t, long,
                                        boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
    const int V = g.N * g.N + 2;
    G bg(V);
    auto cap = boost::get(boost::edge_capacity, bg);
    auto rev = boost::get(boost::edge_reverse, bg);
    auto add = [&](int u, int v, long c) {
        auto e = boost::add_edge(u, v, bg).first;
        auto r = boost::add_edge(v, u, bg).first;
        cap[e] = c;
        cap[r] = 0;
        rev[e] = r;
        rev[r] = e;
    };
    for (int y = 0; y < g.N; ++y)
        for (int x = 0; x < g.N; ++x) {
            if (x + 1 < g.N) {
                add(g.vid(x, y), g.vid(x + 1, y), g.rho);
                add(g.vid(x + 1, y), g.vid(x, y), g.rho);
            }
            if (y + 1 < g.N) {
                add(g.vid(x, y), g.vid(x, y + 1), g.rho);
                add(g.vid(x, y + 1), g.vid(x, y), g.rho);
            }
            if (g.src_cap[g.vid(x, y)] > 0) add(g.source(), g.vid(x, y), g.src_cap[g.vid(x, y)]);
        }
    for (int v : g.sinks) add(v, g.sink(), 1);
    return boost::push_relabel_max_flow(bg, g.source(), g.sink());
}

SuperTileFlowGraph n2_example() {
    auto g = SuperTileFlowGraph::empty(2, 2);
    g.src_cap[g.vid(0, 0)] = 2;
    g.sinks = {g.vid(1, 1), g.vid(1, 1)};
    return g;
}

int arc_id(const SuperTileFlowGraph& g, int from, int to) {
    auto A = arcs_of(g);
    for (std::size_t i = 0; i < A.size(); ++i)
        if (A[i].from == from && A[i].to == to) return static_cast<int>(i);
    return -1;
}

bool spans_grid(int N, std::uint64_t comp) {
    int x0 = N, x1 = -1, y0 = N, y1 = -1;
    for (int v = 0; v < N * N; ++v)
        if ((comp >> v) & 1) {
            x0 = std::min(x0, v % N);
            x1 = std::max(x1, v % N);
            y0 = std::min(y0, v / N);
            y1 = std::max(y1, v / N);
        }
    return x0 == 0 && y0 == 0 && x1 == N - 1 && y1 == N - 1;
}

}  // namespace

TEST(Validate, Examples) {
    auto g = n2_example();
    EXPECT_TRUE(validate(g).ok);
    auto bad = g;
    bad.src_cap[0] = 3;
    bad.sinks.push_back(bad.vid(0, 1));
    auto r = validate(bad);
    EXPECT_FALSE(r.ok);
    bool saw_square = false;
    for (auto& v : r.violations) saw_square |= v.c == 1 && v.value == 3 && v.bound == 2;
    EXPECT_TRUE(saw_square);
    auto cnt = g;
    cnt.sinks.pop_back();
    EXPECT_FALSE(validate(cnt).ok);
}

TEST(Validate, MatchesDirectSquareScan) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> cd(0, 3);
    for (int it = 0; it < 300; ++it) {
        int N = 1 + it % 4, rho = 1 + it % 3;
        auto g = SuperTileFlowGraph::empty(N, rho);
        for (auto& c : g.src_cap) c = std::min(cd(rng), rho);
        for (int k = 0; k < g.F(); ++k) g.sinks.push_back(static_cast<int>(rng() % (N * N)));
        bool ok = true;
        for (int c = 1; c <= N; ++c)
            for (int y = 0; y + c <= N; ++y)
                for (int x = 0; x + c <= N; ++x) {
                    long long s = 0, k = 0;
                    for (int v = 0; v < N * N; ++v)
                        if (v % N >= x && v % N < x + c && v / N >= y && v / N < y + c) s += g.src_cap[v];
                    for (int v : g.sinks)
                        if (v % N >= x && v % N < x + c && v / N >= y && v / N < y + c) ++k;
                    ok &= s <= rho * c && k <= rho * c;
                }
        EXPECT_EQ(validate(g).ok, ok);
    }
}

TEST(MaxFlow, Examples) {
    auto g = SuperTileFlowGraph::empty(1, 1);
    g.src_cap[0] = 1;
    g.sinks = {0};
    auto f = max_flow(g);
    EXPECT_EQ(f.value, 1);
    auto d = decompose(g, f);
    ASSERT_EQ(d.paths.size(), 1u);
    EXPECT_EQ(d.paths[0].size(), 2u);
    auto g2 = n2_example();
    EXPECT_EQ(max_flow(g2).value, 2);
}

TEST(MaxFlow, RejectsInvalidGraph) {
    auto g = n2_example();
    g.sinks.pop_back();
    EXPECT_THROW(max_flow(g), std::invalid_argument);
}

TEST(MaxFlow, ReachesFAndMatchesBoost) {
    std::mt19937_64 rng(2025);
    for (int it = 0; it < 200; ++it) {
        int N = 1 + it % 8, rho = 1 + it % 4;
        auto g = random_valid_graph(rng, N, rho);
        auto f = max_flow(g);
        ASSERT_TRUE(flow_valid(g, f));
        EXPECT_EQ(f.value, g.F());
        EXPECT_EQ(f.value, boost_max_flow(g));
        auto d = decompose(g, f);
        EXPECT_EQ(static_cast<int>(d.paths.size()), g.F());
        EXPECT_EQ(reconstruct(g, d), f.f);
        auto A = arcs_of(g);
        // splitting each arc into cap unit arcs makes the paths arc-disjoint
        std::vector<int> use(A.size(), 0);
        for (auto& p : d.paths) {
            EXPECT_TRUE(elementary(g, p));
            EXPECT_EQ(A[p.front()].from, g.source());
            EXPECT_EQ(A[p.back()].to, g.sink());
            for (int e : p) ++use[e];
        }
        for (std::size_t i = 0; i < A.size(); ++i) EXPECT_LE(use[i], A[i].cap);
        for (auto& c : d.cycles) EXPECT_EQ(A[c.front()].from, A[c.back()].to);
    }
}

TEST(Decompose, ZeroFlowAndInjectedCycle) {
    auto g = n2_example();
    Flow zero{std::vector<int>(arcs_of(g).size(), 0), 0};
    auto d0 = decompose(g, zero);
    EXPECT_TRUE(d0.paths.empty());
    EXPECT_TRUE(d0.cycles.empty());

    auto f = max_flow(g);
    auto d = decompose(g, f);
    EXPECT_EQ(d.paths.size(), 2u);
    EXPECT_TRUE(d.cycles.empty());
    // a unit 2-cycle on the arc pair (0,0)<->(1,0)
    auto f2 = f;
    ++f2.f[arc_id(g, 0, 1)];
    ++f2.f[arc_id(g, 1, 0)];
    ASSERT_TRUE(flow_valid(g, f2));
    auto d2 = decompose(g, f2);
    EXPECT_EQ(d2.paths.size(), 2u);
    EXPECT_EQ(d2.cycles.size(), 1u);
    EXPECT_EQ(reconstruct(g, d2), f2.f);
    // a unit 4-cycle; the peeling may split it differently but must stay exact
    std::vector<std::pair<int, int>> loop{{0, 1}, {1, 3}, {3, 2}, {2, 0}};
    auto A = arcs_of(g);
    bool fits = true;
    for (auto [u, v] : loop) fits &= f.f[arc_id(g, u, v)] < A[arc_id(g, u, v)].cap;
    if (!fits) loop = {{0, 2}, {2, 3}, {3, 1}, {1, 0}};
    for (auto [u, v] : loop) ++f.f[arc_id(g, u, v)];
    ASSERT_TRUE(flow_valid(g, f));
    auto d4 = decompose(g, f);
    EXPECT_EQ(d4.paths.size(), 2u);
    EXPECT_GE(d4.cycles.size(), 1u);
    for (auto& c : d4.cycles) {
        // closed, and dropping the closing arc leaves a simple path
        EXPECT_EQ(A[c.front()].from, A[c.back()].to);
        EXPECT_TRUE(elementary(g, std::vector<int>(c.begin(), c.end() - 1)));
    }
    EXPECT_EQ(reconstruct(g, d4), f.f);
}

TEST(Decompose, RejectsInvalidFlow) {
    auto g = n2_example();
    auto f = max_flow(g);
    f.f[0] += 1;
    EXPECT_THROW(decompose(g, f), std::invalid_argument);
}

TEST(MinCut, ExhaustiveSmallGraphs) {
    auto g1 = SuperTileFlowGraph::empty(1, 1);
    g1.src_cap[0] = 1;
    g1.sinks = {0};
    EXPECT_EQ(*min_cut_check(g1).exhaustive_min, 1);
    auto r2 = min_cut_check(n2_example());
    EXPECT_EQ(r2.F, 2);
    EXPECT_EQ(*r2.exhaustive_min, 2);
    EXPECT_EQ(r2.cuts_checked, 16u);
    std::mt19937_64 rng(7);
    for (int it = 0; it < 40; ++it) {
        auto g = random_valid_graph(rng, 3, 1 + it % 3);
        auto r = min_cut_check(g);
        EXPECT_EQ(*r.exhaustive_min, g.F());
        EXPECT_EQ(r.source_cut, g.F());
        EXPECT_EQ(r.sink_cut, g.F());
    }
}

TEST(MinCut, MovingNonSpanningComponentNeverIncreasesCut) {
    std::mt19937_64 rng(9);
    for (int it = 0; it < 6; ++it) {
        auto g = random_valid_graph(rng, 3, 1 + it % 2);
        for (std::uint64_t m = 0; m < 512; ++m) {
            long long c = cut_value(g, m);
            for (auto comp : components(3, m)) {
                if (spans_grid(3, comp)) continue;
                EXPECT_LE(cut_value(g, m & ~comp), c) << "mask " << m;
            }
        }
    }
}

TEST(Arrows, CodecCoversTwentyKinds) {
    std::set<int> ids;
    for (int s = 0; s < 4; ++s) {
        ids.insert(arrow_out(s));
        ids.insert(arrow_in(s));
        EXPECT_EQ(arrow_decode(arrow_out(s)).out_side, s);
        EXPECT_EQ(arrow_decode(arrow_in(s)).in_side, s);
        for (int t = 0; t < 4; ++t)
            if (t != s) {
                int id = arrow_transit(s, t);
                ids.insert(id);
                EXPECT_EQ(arrow_decode(id).in_side, s);
                EXPECT_EQ(arrow_decode(id).out_side, t);
            }
    }
    EXPECT_EQ(ids.size(), 20u);
    EXPECT_EQ(*ids.begin(), 1);
    EXPECT_EQ(*ids.rbegin(), 20);
    EXPECT_THROW(arrow_decode(21), std::invalid_argument);
}

TEST(RoutePoints, Examples) {
    // producer (0,0) next to slot (1,0)
    std::vector<int> prod{1, 0, 0, 0};
    auto r = route_points(2, 1, prod, {1});
    ASSERT_TRUE(r.ok) << r.error;
    ASSERT_EQ(r.commodities.size(), 1u);
    ASSERT_EQ(r.tables[0].size(), 1u);
    EXPECT_EQ(r.tables[0][0].arrow, arrow_out(kRight));
    EXPECT_EQ(r.tables[1][0].arrow, arrow_in(kLeft));

    // producer at its own slot
    auto d = route_points(2, 1, prod, {0});
    ASSERT_TRUE(d.ok);
    EXPECT_EQ(d.tables[0][0].arrow, 0);

    // two producers, two slots on the far column of a 3×3 grid
    std::vector<int> p3(9, 0);
    p3[0] = 1;
    p3[3] = 1;
    auto r3 = route_points(3, 1, p3, {2, 5});
    ASSERT_TRUE(r3.ok);
    ASSERT_EQ(r3.commodities.size(), 2u);
    std::set<std::pair<int, int>> arcs;
    for (auto& c : r3.commodities)
        for (std::size_t k = 0; k + 1 < c.vertices.size(); ++k)
            EXPECT_TRUE(arcs.insert({c.vertices[k], c.vertices[k + 1]}).second);
    EXPECT_EQ(r3.commodities[0].slot, 2);
    EXPECT_EQ(r3.commodities[1].slot, 5);

    auto bad = route_points(2, 1, {2, 0, 0, 0}, {1, 2});
    EXPECT_FALSE(bad.ok);
}

TEST(RoutePoints, TablesAreConsistentPaths) {
    std::mt19937_64 rng(44);
    for (int it = 0; it < 50; ++it) {
        int N = 2 + it % 5, rho = 1 + it % 3;
        auto g = random_valid_graph(rng, N, rho);
        auto r = route_points(N, rho, g.src_cap, g.sinks);
        ASSERT_TRUE(r.ok) << r.error;
        ASSERT_EQ(static_cast<int>(r.commodities.size()), g.F());
        std::vector<int> produced(static_cast<std::size_t>(N) * N, 0);
        for (std::size_t id = 0; id < r.commodities.size(); ++id) {
            auto& c = r.commodities[id];
            EXPECT_EQ(c.slot, g.sinks[id]);
            ++produced[c.producer];
            // the tables describe the same walk: follow exits from the producer
            int v = c.producer;
            for (std::size_t k = 0; k < c.vertices.size(); ++k) {
                EXPECT_EQ(v, c.vertices[k]);
                int arrow = -1;
                for (auto& e : r.tables[v])
                    if (e.commodity == static_cast<int>(id)) arrow = e.arrow;
                ASSERT_GE(arrow, 0);
                auto info = arrow_decode(arrow);
                EXPECT_EQ(info.in_side < 0, k == 0);
                if (info.out_side < 0) {
                    EXPECT_EQ(k + 1, c.vertices.size());
                    break;
                }
                v += kDX[info.out_side] + N * kDY[info.out_side];
            }
        }
        EXPECT_EQ(produced, g.src_cap);
        // per-child-side crossings never exceed rho
        std::map<std::pair<int, int>, int> load;
        for (auto& c : r.commodities)
            for (std::size_t k = 0; k + 1 < c.vertices.size(); ++k) ++load[{c.vertices[k], c.vertices[k + 1]}];
        for (auto& [k, n] : load) EXPECT_LE(n, rho);
    }
}
