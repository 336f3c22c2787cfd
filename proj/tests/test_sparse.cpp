#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "symdyn/flow.hpp"
#include "symdyn/sparse.hpp"

using namespace symdyn;
using namespace symdyn::sparse;

namespace {

const DensitySpec kSpec = desk_spec();
constexpr int kW = 128;

// independent listing: sides ascending, blacks ascending, subsets by lexicographic cell list
std::vector<SparsePattern> brute_listing(int max_n) {
    std::vector<SparsePattern> out;
    for (int n = 1; n <= max_n; ++n) {
        const int cells = n * n;
        for (int b = 1; b <= cells; ++b) {
            if (!is_forbidden_density(n, b, kSpec)) continue;
            std::vector<std::vector<int>> subsets;
            for (std::uint32_t m = 0; m < (1u << cells); ++m) {
                if (std::popcount(m) != b) continue;
                std::vector<int> s;
                for (int c = 0; c < cells; ++c)
                    if (m >> c & 1) s.push_back(c);
                subsets.push_back(s);
            }
            std::sort(subsets.begin(), subsets.end());
            for (auto& s : subsets) {
                SparsePattern p{n, {}};
                for (int c : s) p.blacks.push_back({c % n, c / n});
                out.push_back(p);
            }
        }
    }
    return out;
}

std::set<std::pair<int, int>> as_set(const std::vector<Pos>& v) {
    std::set<std::pair<int, int>> s;
    for (auto p : v) s.insert({p.x, p.y});
    return s;
}

bool occurs_in(const SparseConfig& c, const SparsePattern& M, Pos at) {
    auto pts = as_set(c.points);
    for (int j = 0; j < M.n; ++j)
        for (int i = 0; i < M.n; ++i) {
            bool mb = std::count(M.blacks.begin(), M.blacks.end(), Pos{i, j}) > 0;
            if (mb != (pts.count({at.x + i, at.y + j}) > 0)) return false;
        }
    return true;
}

VerifyReport verify_level(const Synthesis& s, int k) { return verify_all(s.levels[k], kSpec, density_enumerator(kSpec)); }

bool all_pass(const Synthesis& s) {
    for (std::size_t k = 0; k < s.levels.size(); ++k)
        if (!verify_level(s, static_cast<int>(k)).ok()) return false;
    return true;
}

}  // namespace

TEST(Density, Thresholds) {
    EXPECT_TRUE(is_forbidden_density(4, 3, kSpec));
    EXPECT_FALSE(is_forbidden_density(9, 3, kSpec));
    EXPECT_FALSE(is_forbidden_density(4, 2, kSpec));
    for (int n = 1; n < 50; ++n) EXPECT_FALSE(is_forbidden_density(n, 0, kSpec));
    DensitySpec s = kSpec;
    s.eps_upper = {{3, 4}, {2, 3}, {1, 2}};
    s.index = 1;
    EXPECT_TRUE(is_forbidden_density(8, 5, s));   // 8^(2/3) = 4
    EXPECT_FALSE(is_forbidden_density(8, 4, s));
    s.index = 7;  // past the end: the last bound stays in force
    EXPECT_FALSE(is_forbidden_density(9, 3, s));
    s.eps_upper = {{1, 2}, {2, 3}};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.eps_upper = {{1, 1}};
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Density, EnumeratorMatchesBruteListing) {
    auto e = density_enumerator(kSpec);
    auto want = brute_listing(3);
    ASSERT_GT(want.size(), 100u);
    for (std::size_t s = 0; s < want.size(); ++s) ASSERT_EQ(e(s), want[s]) << s;
    EXPECT_EQ(e(0)->blacks, (std::vector<Pos>{{0, 0}, {1, 0}}));
    for (std::uint64_t s = 0; s < 200; ++s) EXPECT_TRUE(is_forbidden_density(*e(s), kSpec));
}

TEST(Density, RankLists) {
    auto e = density_enumerator(kSpec);
    EXPECT_EQ(ell(1), 0);
    EXPECT_EQ(ell(16), 4);
    EXPECT_EQ(ell(31), 4);
    EXPECT_TRUE(forbidden_rank(1, e).empty());
    auto r16 = forbidden_rank(16, e);
    ASSERT_EQ(r16.size(), 4u);
    for (int s = 0; s < 4; ++s) EXPECT_EQ(r16[s], *e(s));
    for (int k = 1; k < 300; ++k) {
        auto a = forbidden_rank(k, e), b = forbidden_rank(k + 1, e);
        ASSERT_LE(a.size(), b.size());
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    }
    // side bound: with ℓ = 2 only 2×2 patterns with ≤ 2 blacks qualify
    for (auto& p : forbidden_rank(4, e)) EXPECT_LE(p.n, 2);
}

TEST(Responsibility, Examples) {
    auto e = density_enumerator(kSpec);
    auto list = forbidden_rank(64, e);
    EXPECT_TRUE(check_responsibility({}, 8, list).ok);
    for (std::size_t m = 0; m < list.size(); ++m) {
        std::vector<Pos> pts;
        for (auto q : list[m].blacks) pts.push_back({q.x + 3, q.y + 2});
        auto r = check_responsibility(pts, 8, list);
        ASSERT_FALSE(r.ok);
        ASSERT_TRUE(r.witness);
        const auto& M = list[r.witness->pattern];
        for (auto q : M.blacks) EXPECT_TRUE(as_set(pts).count({q.x + r.witness->offset.x, q.y + r.witness->offset.y}));
        pts.pop_back();
        EXPECT_TRUE(check_responsibility(pts, 8, list).ok);
    }
    // a third point inside the 2×2 box breaks every two-point match there
    EXPECT_TRUE(check_responsibility({{0, 0}, {1, 0}, {0, 1}}, 8, forbidden_rank(16, e)).ok);
    EXPECT_TRUE(check_responsibility({{7, 7}, {8, 7}}, 8, list).ok);  // pattern leaves the zone
}

TEST(Config, AdmissibilityMatchesBruteForce) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        SparseConfig c{8, {}};
        int k = static_cast<int>(rng() % 5);
        std::set<std::pair<int, int>> used;
        while (static_cast<int>(c.points.size()) < k) {
            Pos p{static_cast<int>(rng() % 8), static_cast<int>(rng() % 8)};
            if (used.insert({p.x, p.y}).second) c.points.push_back(p);
        }
        bool brute = true;
        for (int n = 1; n <= 8 && brute; ++n)
            for (int y = 0; y + n <= 8 && brute; ++y)
                for (int x = 0; x + n <= 8 && brute; ++x) {
                    int cnt = 0;
                    for (auto p : c.points) cnt += p.x >= x && p.x < x + n && p.y >= y && p.y < y + n;
                    if (cnt * cnt > n) brute = false;
                }
        EXPECT_EQ(density_admissible(c, kSpec), brute);
    }
    auto r = random_config(kSpec, kW, 1.0, 5);
    EXPECT_TRUE(density_admissible(r, kSpec));
    EXPECT_GE(r.points.size(), 5u);
    EXPECT_EQ(r.points, random_config(kSpec, kW, 1.0, 5).points);
}

TEST(Fields, ZoneAndCoordinates) {
    auto z = field5_zone(3);
    EXPECT_EQ(z, (std::vector<Pos>{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {1, 1}, {1, 0}, {2, 0}, {2, 1}, {2, 2}}));
    EXPECT_EQ(coord_bits(64), 6);
    EXPECT_EQ(coord_bits(2), 1);
    EXPECT_EQ(encode_point({5, 2}, 16), "01010010");
    EXPECT_EQ(decode_point("01010010", 16), (Pos{5, 2}));
}

TEST(Synthesis, AllWhite) {
    auto s = synthesize_fields({kW, {}}, kSpec);
    ASSERT_EQ(s.levels.size(), 3u);
    for (auto& a : s.levels) {
        for (auto& t : a.tiles) {
            EXPECT_TRUE(t.fields().f5.empty());
            EXPECT_TRUE(t.fields().f6.empty());
            EXPECT_TRUE(t.fields().f7.empty());
            EXPECT_TRUE(t.fields().f8.empty());
            EXPECT_EQ(t.f2, kSpec.schedule[a.level].rank);
        }
    }
    EXPECT_EQ(s.levels[0].cols, 32);
    EXPECT_EQ(s.levels[0].at(5, 6).f3, (Pos{1, 2}));
    EXPECT_TRUE(all_pass(s));
}

TEST(Synthesis, SinglePointChain) {
    auto s = synthesize_fields({kW, {{21, 6}}}, kSpec);
    const auto& a0 = s.levels[0];
    // the point sits in tile (5,1), child (1,1) of mother (1,0); it must reach the zone start (0,0) of that mother
    EXPECT_EQ(a0.at(5, 1).fields().f5, (std::vector<Pos>{{1, 2}}));
    EXPECT_EQ(s.levels[1].at(1, 0).fields().f5, (std::vector<Pos>{{5, 6}}));
    EXPECT_EQ(s.levels[2].at(0, 0).fields().f5, (std::vector<Pos>{{21, 6}}));
    const auto& start = a0.at(4, 0).fields();
    ASSERT_EQ(start.f6.size(), 1u);
    EXPECT_GE(start.f6[0].arrow, 17);
    EXPECT_EQ(start.f7, encode_point({5, 6}, 16));
    EXPECT_EQ(a0.at(4, 1).fields().f7, encode_point({5, 6}, 16).substr(6));
    int arrows = 0;
    for (auto& t : a0.tiles) arrows += static_cast<int>(t.fields().f6.size());
    EXPECT_EQ(arrows, 3);  // (1,1) → (0,1) → (0,0) or the other way round
    EXPECT_TRUE(all_pass(s));
    EXPECT_TRUE(info_flow_check(s.levels[0], s.levels[1]).ok);
    EXPECT_TRUE(info_flow_check(s.levels[1], s.levels[2]).ok);
}

TEST(Synthesis, RandomConfigsEndToEnd) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto c = random_config(kSpec, kW, 1.0, seed);
        for (Pos off : {Pos{0, 0}, Pos{13, 40}}) {
            auto s = synthesize_fields(c, kSpec, off);
            for (std::size_t k = 0; k < s.levels.size(); ++k) {
                auto r = verify_level(s, static_cast<int>(k));
                EXPECT_TRUE(r.ok()) << "seed " << seed << " level " << k << ": " << (r.witnesses.empty() ? "" : r.witnesses[0].what);
            }
            for (std::size_t k = 0; k + 1 < s.levels.size(); ++k) EXPECT_TRUE(info_flow_check(s.levels[k], s.levels[k + 1]).ok);
            std::size_t total = 0;
            for (auto& t : s.levels[2].tiles) total += t.fields().f5.size();
            EXPECT_EQ(total, c.points.size());
        }
    }
}

TEST(Synthesis, CoverageLemma) {
    auto s = synthesize_fields({kW, {}}, kSpec);
    std::mt19937_64 rng(9);
    for (auto& a : s.levels)
        for (int trial = 0; trial < 300; ++trial) {
            int side = 1 + static_cast<int>(rng() % a.N);
            Pos o{static_cast<int>(rng() % (a.cols * a.N - side)), static_cast<int>(rng() % (a.rows * a.N - side))};
            auto b = covering_block(a, o, side);
            ASSERT_TRUE(b);
            EXPECT_LE(b->x * a.N, o.x);
            EXPECT_GE((b->x + 2) * a.N, o.x + side);
            EXPECT_LE(b->y * a.N, o.y);
            EXPECT_GE((b->y + 2) * a.N, o.y + side);
        }
    EXPECT_FALSE(covering_block(s.levels[0], {0, 0}, 5));
}

TEST(Verify, DetectsTampering) {
    auto c = random_config(kSpec, kW, 1.0, 4);
    auto s = synthesize_fields(c, kSpec);
    ASSERT_TRUE(all_pass(s));
    auto& a0 = s.levels[0];
    // C: one side copy changed
    {
        auto a = a0;
        a.ref(3, 3).side[2].f7 = "1";
        auto r = verify_all(a, kSpec, density_enumerator(kSpec));
        EXPECT_FALSE(r.C);
        EXPECT_EQ(r.witnesses[0].tile, (Pos{3, 3}));
    }
    // D: flip one arrow on every side copy
    {
        auto a = a0;
        Pos where{-1, -1};
        for (int Y = 0; Y < a.rows && where.x < 0; ++Y)
            for (int X = 0; X < a.cols && where.x < 0; ++X)
                for (auto& en : a.at(X, Y).fields().f6)
                    if (en.arrow >= 5 && en.arrow <= 16) {
                        where = {X, Y};
                        break;
                    }
        ASSERT_GE(where.x, 0);
        for (auto& sd : a.ref(where.x, where.y).side)
            for (auto& en : sd.f6)
                if (en.arrow >= 5 && en.arrow <= 16) {
                    auto ai = arrow_decode(en.arrow);
                    int other = (ai.out_side + 1) % 4 == ai.in_side ? (ai.out_side + 2) % 4 : (ai.out_side + 1) % 4;
                    en.arrow = arrow_transit(ai.in_side, other);
                    break;
                }
        auto r = verify_all(a, kSpec, density_enumerator(kSpec));
        EXPECT_FALSE(r.D);
        EXPECT_TRUE(r.C);
        bool located = false;
        for (auto& w : r.witnesses) located |= w.prop == 'D' && std::abs(w.tile.x - where.x) + std::abs(w.tile.y - where.y) <= 1;
        EXPECT_TRUE(located);
    }
    // E: chain tampering
    {
        auto a = a0;
        for (auto& t : a.tiles)
            if (!t.fields().f7.empty()) {
                for (auto& sd : t.side) sd.f7[0] ^= 1;
                break;
            }
        EXPECT_FALSE(verify_all(a, kSpec, density_enumerator(kSpec)).E);
    }
    // F: a dropped point in the diagonal quadrant is reported one tile up
    {
        auto a = a0;
        Pos T{-1, -1};
        for (int Y = 0; Y + 1 < a.rows && T.x < 0; ++Y)
            for (int X = 0; X + 1 < a.cols && T.x < 0; ++X)
                if (!a.at(X + 1, Y + 1).fields().f5.empty()) T = {X, Y};
        ASSERT_GE(T.x, 0);
        for (auto& sd : a.ref(T.x, T.y).side)
            sd.f8.erase(std::find_if(sd.f8.begin(), sd.f8.end(), [&](Pos p) { return p.x >= a.N && p.y >= a.N; }));
        auto r = verify_all(a, kSpec, density_enumerator(kSpec));
        EXPECT_FALSE(r.F);
        EXPECT_EQ(r.witnesses[0].tile, (Pos{T.x, T.y + 1}));
    }
}

TEST(Verify, InjectedForbiddenPatternFailsG) {
    auto e = density_enumerator(kSpec);
    std::mt19937_64 rng(21);
    for (std::size_t k = 0; k < kSpec.schedule.size(); ++k) {
        auto list = forbidden_rank(kSpec.schedule[k].rank, e);
        ASSERT_FALSE(list.empty());
        for (auto& M : list) {
            auto c = random_config(kSpec, kW, 0.5, 100 + k);
            Pos at{static_cast<int>(rng() % (kW - M.n)), static_cast<int>(rng() % (kW - M.n))};
            std::erase_if(c.points, [&](Pos p) { return p.x >= at.x && p.x < at.x + M.n && p.y >= at.y && p.y < at.y + M.n; });
            for (auto q : M.blacks) c.points.push_back({at.x + q.x, at.y + q.y});
            EXPECT_FALSE(density_admissible(c, kSpec));
            auto s = synthesize_fields(c, kSpec);
            auto r = verify_level(s, static_cast<int>(k));
            EXPECT_FALSE(r.G);
            EXPECT_TRUE(r.C && r.D && r.E && r.F);
            bool genuine = false;
            for (auto& w : r.witnesses)
                if (w.prop == 'G' && w.placement) {
                    const int N = s.levels[k].N;
                    Pos cell{w.tile.x * N + w.placement->offset.x, w.tile.y * N + w.placement->offset.y};
                    genuine |= occurs_in(c, list[w.placement->pattern], cell);
                }
            EXPECT_TRUE(genuine);
        }
    }
}

TEST(Verify, ParasiteLoops) {
    auto c = random_config(kSpec, kW, 1.0, 8);
    auto s = synthesize_fields(c, kSpec);
    auto before = s.levels[1];
    {
        auto a = s.levels[0];
        inject_parasite_loop(a, 1, 1, {3, 3});
        auto r = verify_all(a, kSpec, density_enumerator(kSpec));
        EXPECT_TRUE(r.D);
        EXPECT_TRUE(r.ok());
        EXPECT_TRUE(info_flow_check(a, before).ok);
    }
    {
        auto a = s.levels[0];
        inject_parasite_loop(a, 1, 1, {3, 3}, true);
        EXPECT_FALSE(verify_all(a, kSpec, density_enumerator(kSpec)).D);
    }
    {
        // a loop through tiles that carry a real path, on its own arcs
        auto a = s.levels[0];
        Pos on{-1, -1};
        for (int Y = 0; Y + 1 < a.rows && on.x < 0; ++Y)
            for (int X = 0; X + 1 < a.cols && on.x < 0; ++X)
                if (X % a.n_mother < a.n_mother - 1 && Y % a.n_mother < a.n_mother - 1)
                    for (auto& en : a.at(X, Y).fields().f6)
                        if (en.arrow >= 5 && en.arrow <= 16) on = {X, Y};
        ASSERT_GE(on.x, 0);
        inject_parasite_loop(a, on.x, on.y, {0, 0});
        EXPECT_TRUE(verify_all(a, kSpec, density_enumerator(kSpec)).ok());
        EXPECT_TRUE(info_flow_check(a, before).ok);
    }
}

TEST(Parameters, Inequalities) {
    DensitySpec asym;
    asym.C = 64;
    auto r = parameter_check(asym, 3);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.slack.size(), 3u);
    asym.C = 1;
    r = parameter_check(asym, 3);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.first_failing_level, 1);
    int lo = 1;
    for (int C = 2; C <= 64; ++C) {
        asym.C = C;
        if (parameter_check(asym, 3).ok) {
            lo = C;
            break;
        }
    }
    ASSERT_GT(lo, 2);
    asym.C = lo - 1;
    r = parameter_check(asym, 3);
    EXPECT_FALSE(r.ok);
    EXPECT_GE(r.first_failing_level, 1);
    EXPECT_FALSE(r.failing_inequality.empty());
    // the desk schedule is far from the asymptotic regime
    EXPECT_FALSE(parameter_check(kSpec).ok);
}

TEST(Parameters, MeasuredCapacityConstant) {
    long double worst = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
        worst = std::max(worst, measured_c1(synthesize_fields(random_config(kSpec, kW, 1.0, seed), kSpec), kSpec));
    EXPECT_GT(worst, 0);
    EXPECT_LE(worst, kC1);
}

TEST(Encoding, SideRoundTripAndMarks) {
    auto s = synthesize_fields(random_config(kSpec, kW, 1.0, 2), kSpec);
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
        const auto& a = s.levels[k];
        const int Nm = a.n_mother ? a.N * a.n_mother : 0;
        for (int i = 0; i < static_cast<int>(a.tiles.size()); i += 7) {
            const auto& t = a.tiles[i];
            for (int side = 0; side < 4; ++side) {
                auto enc = encode_side(t, side, a.N, Nm);
                EXPECT_EQ(decode_side(enc, a.N, Nm), t.side[side]);
                auto st = vm::init_marks(enc);
                EXPECT_FALSE(st.error) << st.error_reason;
            }
        }
    }
}
