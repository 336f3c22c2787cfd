#include <gtest/gtest.h>

#include <random>
#include <set>

#include "symdyn/wang.hpp"

using namespace symdyn;

namespace {

WangTileSet random_tileset(std::mt19937_64& rng, int tiles, int colors) {
    std::uniform_int_distribution<int> c(0, colors - 1);
    WangTileSet ts;
    for (int i = 0; i < tiles; ++i) ts.add_tile({c(rng), c(rng), c(rng), c(rng)});
    ts.num_colors = colors;
    return ts;
}

// Brute force over every assignment of tiles.
std::vector<Tiling> all_tilings_oracle(const WangTileSet& ts, int w, int h, const Boundary* b) {
    std::vector<Tiling> out;
    const int T = static_cast<int>(ts.tiles.size()), n = w * h;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    while (true) {
        Tiling t{w, h, cur};
        if (tiling_valid(ts, t, b)) out.push_back(t);
        int k = 0;
        while (k < n && ++cur[k] == T) cur[k++] = 0;
        if (k == n) break;
    }
    return out;
}

std::uint64_t count_local(const ShiftSpec& s, int w, int h) {
    std::uint64_t n = 0;
    enumerate_completions(Grid(0, 0, w, h), s, [&](const Grid&) { ++n; return true; });
    return n;
}

std::set<Pattern> corner_projections(const ShiftSpec& s, int n, int c) {
    std::set<Pattern> out;
    enumerate_completions(Grid(0, 0, n + c, n + c), s, [&](const Grid& g) {
        Pattern p;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) p.set({x, y}, g.at(x, y));
        out.insert(p);
        return true;
    });
    return out;
}

}  // namespace

TEST(SftToWang, OneLetter) {
    auto r = sft_to_wang(full_shift(Alphabet({"a"})));
    EXPECT_EQ(r.tiles.tiles.size(), 1u);
    EXPECT_EQ(r.tiles.num_colors, 1);
}

TEST(SftToWang, EmptyShift) {
    ShiftSpec s = full_shift(Alphabet({"a"}));
    s.add_forbidden(Pattern::word({0}));
    EXPECT_TRUE(sft_to_wang(s).empty_shift);
}

TEST(SftToWang, CountsMatchOnStandardShifts) {
    for (auto s : {rectangle_shift(), s1_shift(2), checkerboard_shift()}) {
        auto r = sft_to_wang(s);
        for (int n = 1; n <= 3; ++n) {
            auto cnt = tile_rectangle(r.tiles, n, n, nullptr, TileMode::count).count;
            EXPECT_EQ(cnt, count_local(s, n + r.c, n + r.c)) << s.name << " n=" << n;
            TileLimits tl;
            tl.max_results = 2'000'000;
            auto all = tile_rectangle(r.tiles, n, n, nullptr, TileMode::enumerate, tl);
            ASSERT_FALSE(all.limit_hit);
            std::set<Pattern> proj;
            for (auto& t : all.tilings) {
                EXPECT_TRUE(locally_admissible(project_tiling(t, r.letter_of_tile), s));
                proj.insert(project_tiling(t, r.letter_of_tile));
            }
            auto want = corner_projections(s, n, r.c);
            EXPECT_EQ(proj.size(), want.size()) << s.name << " n=" << n;
            EXPECT_TRUE(proj == want) << s.name << " n=" << n;
        }
    }
}

TEST(SftToWang, RectangleShiftMatchesBlockComplexity) {
    auto s = rectangle_shift();
    auto r = sft_to_wang(s);
    // every locally admissible pattern of this shift extends, so the oracle is exact
    EXPECT_EQ(tile_rectangle(r.tiles, 3, 3, nullptr, TileMode::count).count, block_complexity(s, 3 + r.c, 0).lo);
    for (int n = 1; n <= 3; ++n)
        EXPECT_EQ(corner_projections(s, n, r.c).size(), block_complexity(s, n, 1).lo);
}

TEST(WangToSft, Examples) {
    WangTileSet one;
    one.add_tile({0, 0, 0, 0});
    EXPECT_TRUE(wang_to_sft(one).forbidden.empty());
    WangTileSet two;
    two.add_tile({0, 0, 0, 0});
    two.add_tile({0, 1, 0, 1});
    auto s = wang_to_sft(two);
    ASSERT_EQ(s.forbidden.size(), 2u);
    for (auto& f : s.forbidden) EXPECT_EQ(f.bbox().w, 2);
}

TEST(WangToSft, RoundTripCounts) {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 20; ++it) {
        auto ts = random_tileset(rng, 3 + it % 3, 2);
        auto s = wang_to_sft(ts);
        EXPECT_EQ(count_local(s, 3, 3), tile_rectangle(ts, 3, 3, nullptr, TileMode::count).count);
        auto back = sft_to_wang(s);
        EXPECT_EQ(tile_rectangle(back.tiles, 1, 1, nullptr, TileMode::count).count, count_local(s, 1 + back.c, 1 + back.c));
        EXPECT_EQ(tile_rectangle(back.tiles, 2, 2, nullptr, TileMode::count).count, count_local(s, 2 + back.c, 2 + back.c));
    }
}

TEST(TileRectangle, Examples) {
    WangTileSet one;
    one.add_tile({0, 0, 0, 0});
    EXPECT_EQ(tile_rectangle(one, 2, 2, nullptr, TileMode::count).count, 1u);
    WangTileSet chk;
    chk.add_tile({0, 0, 1, 1});
    chk.add_tile({1, 1, 0, 0});
    EXPECT_EQ(tile_rectangle(chk, 2, 2, nullptr, TileMode::count).count, 2u);
    EXPECT_EQ(tile_rectangle(chk, 2, 2, nullptr, TileMode::enumerate).tilings.size(), 2u);
}

TEST(TileRectangle, ModesAgreeWithBruteForce) {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 40; ++it) {
        auto ts = random_tileset(rng, 2 + it % 3, 2);
        int w = 1 + it % 3, h = 1 + (it / 3) % 3;
        if (w * h > 6) w = 2;
        Boundary b = Boundary::free(w, h);
        if (it % 2) b.south[0] = {0};
        if (it % 4 == 1) b.east[h - 1] = {1};
        for (const Boundary* bp : {static_cast<const Boundary*>(nullptr), static_cast<const Boundary*>(&b)}) {
            auto oracle = all_tilings_oracle(ts, w, h, bp);
            auto cnt = tile_rectangle(ts, w, h, bp, TileMode::count);
            auto en = tile_rectangle(ts, w, h, bp, TileMode::enumerate);
            auto fi = tile_rectangle(ts, w, h, bp, TileMode::first);
            EXPECT_EQ(cnt.count, oracle.size());
            EXPECT_EQ(en.tilings.size(), oracle.size());
            if (!oracle.empty()) {
                ASSERT_EQ(fi.tilings.size(), 1u);
                // lexicographic order on the row-major tile-id sequence
                auto best = *std::min_element(oracle.begin(), oracle.end(),
                                              [](const Tiling& a, const Tiling& c) { return a.t < c.t; });
                EXPECT_EQ(fi.tilings[0], best);
            } else {
                EXPECT_TRUE(fi.tilings.empty());
            }
        }
        auto free_cnt = tile_rectangle(ts, w, h, nullptr, TileMode::count).count;
        EXPECT_LE(tile_rectangle(ts, w, h, &b, TileMode::count).count, free_cnt);
    }
}

TEST(TileRectangle, ResultCapIsReported) {
    // two tiles with identical colours bypass dedup, so every assignment is a tiling
    WangTileSet two;
    two.tiles = {{0, 0, 0, 0}, {0, 0, 0, 0}};
    two.num_colors = 1;
    EXPECT_EQ(tile_rectangle(two, 2, 2, nullptr, TileMode::count).count, 16u);
    TileLimits tl;
    tl.max_results = 3;
    auto r = tile_rectangle(two, 2, 2, nullptr, TileMode::enumerate, tl);
    EXPECT_TRUE(r.limit_hit);
    EXPECT_EQ(r.tilings.size(), 3u);
}

TEST(TileRectangle, BoundaryFromTilingPinsIt) {
    WangTileSet chk;
    chk.add_tile({0, 0, 1, 1});
    chk.add_tile({1, 1, 0, 0});
    auto t = tile_rectangle(chk, 3, 3, nullptr, TileMode::first).tilings.at(0);
    auto b = Boundary::of(chk, 3, 3, t.t);
    auto r = tile_rectangle(chk, 3, 3, &b, TileMode::enumerate);
    ASSERT_EQ(r.tilings.size(), 1u);
    EXPECT_EQ(r.tilings[0], t);
}
