#include <gtest/gtest.h>

#include <random>
#include <set>

#include "symdyn/core.hpp"

using namespace symdyn;

namespace {

const Letter W = 0, B = 1;

// Independent scanner: tries every offset of the query's bounding box over the host's.
bool occurs_oracle(const Pattern& host, const Pattern& query) {
    if (query.empty()) return true;
    auto hb = host.bbox();
    auto qb = query.bbox();
    for (int dy = hb.y0 - qb.y0 - qb.h; dy <= hb.y0 + hb.h - qb.y0; ++dy)
        for (int dx = hb.x0 - qb.x0 - qb.w; dx <= hb.x0 + hb.w - qb.x0; ++dx) {
            bool ok = true;
            for (auto& c : query.cells()) {
                auto a = host.at({c.p.x + dx, c.p.y + dy});
                if (!a || *a != c.a) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
    return false;
}

bool admissible_oracle(const Pattern& p, const std::vector<Pattern>& forb) {
    for (auto& f : forb)
        if (occurs_oracle(p, f)) return false;
    return true;
}

Pattern random_rect(std::mt19937_64& rng, int w, int h, int A) {
    std::uniform_int_distribution<int> d(0, A - 1);
    std::vector<Letter> v(static_cast<std::size_t>(w) * h);
    for (auto& x : v) x = d(rng);
    return Pattern::rect(w, h, v);
}

// S2 words: between two consecutive blacks the white gap must be even.
bool s2_oracle(const std::vector<int>& w) {
    int last = -1;
    for (int i = 0; i < static_cast<int>(w.size()); ++i)
        if (w[i] == 1) {
            if (last >= 0 && (i - last - 1) % 2 == 1) return false;
            last = i;
        }
    return true;
}

}  // namespace

TEST(Occurs, Examples) {
    auto host = Pattern::constant(3, 3, W);
    EXPECT_TRUE(occurs(host, Pattern::constant(1, 1, W)));
    EXPECT_FALSE(occurs(host, Pattern::constant(1, 1, B)));
    EXPECT_TRUE(occurs(Pattern::word({W, W, B, W, B}), Pattern::word({B, W, B})));
}

TEST(Occurs, AgreesWithScannerAndIsTranslationInvariant) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> sz(1, 4), sh(-7, 7);
    for (int it = 0; it < 400; ++it) {
        auto host = random_rect(rng, sz(rng), sz(rng), 2);
        auto q = random_rect(rng, sz(rng) % 3 + 1, sz(rng) % 2 + 1, 2);
        bool r = occurs(host, q);
        EXPECT_EQ(r, occurs_oracle(host, q));
        EXPECT_EQ(r, occurs(host.translated(sh(rng), sh(rng)), q));
    }
}

TEST(LocallyAdmissible, Examples) {
    auto s1 = s1_shift(1);
    EXPECT_FALSE(locally_admissible(Pattern::word({B, B}), s1));
    EXPECT_TRUE(locally_admissible(Pattern::word({W, W}), s1));
    EXPECT_FALSE(locally_admissible(Pattern::word({B, W, B}), s2_shift()));
    EXPECT_TRUE(locally_admissible(Pattern::word({B, W, W, B}), s2_shift()));
}

TEST(LocallyAdmissible, ExplicitListIgnoresBudget) {
    auto s1 = s1_shift(2);
    EXPECT_FALSE(locally_admissible(Pattern::word({B, B}), s1, 0));
}

TEST(LocallyAdmissible, MonotoneInBudget) {
    std::mt19937_64 rng(5);
    auto s2 = s2_shift();
    for (int it = 0; it < 200; ++it) {
        auto p = random_rect(rng, 12, 1, 2);
        bool prev = true;
        for (std::size_t b = 0; b <= 6; ++b) {
            bool cur = locally_admissible(p, s2, b);
            EXPECT_FALSE(!prev && cur) << "budget " << b;
            prev = cur;
        }
    }
}

TEST(LocallyAdmissible, MatchesOracleOnRandomSpecs) {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 60; ++it) {
        int A = 2 + it % 2;
        ShiftSpec s = full_shift(Alphabet::numbered(A));
        for (int k = 0; k < 3; ++k) s.add_forbidden(random_rect(rng, 1 + k % 2, 1 + (k / 2) % 2, A));
        for (int t = 0; t < 20; ++t) {
            auto p = random_rect(rng, 3, 3, A);
            EXPECT_EQ(locally_admissible(p, s), admissible_oracle(p, s.forbidden));
        }
    }
}

TEST(AdmissibleWithMargin, Examples) {
    auto s1 = s1_shift(2);
    EXPECT_EQ(admissible_with_margin(Pattern::constant(1, 1, B), s1, 2), Verdict::yes);
    for (int m = 0; m < 3; ++m) EXPECT_EQ(admissible_with_margin(Pattern::word({B, B}), s1, m), Verdict::no);
    EXPECT_EQ(admissible_with_margin(Pattern::constant(2, 2, B), rectangle_shift(), 1), Verdict::yes);
}

TEST(AdmissibleWithMargin, NodeLimitGivesInconclusive) {
    SearchLimits lim;
    lim.node_limit = 3;
    EXPECT_EQ(admissible_with_margin(Pattern::constant(1, 1, B), s1_shift(2), 3, lim), Verdict::inconclusive);
}

TEST(AdmissibleWithMargin, AntitoneInMargin) {
    // a pattern extendable at margin 1 but not at margin 2
    ShiftSpec s = full_shift(Alphabet::numbered(3), 1);
    // letter 2 must have letter 2 to its right, except that 2 2 2 is forbidden
    for (Letter a = 0; a < 2; ++a) s.add_forbidden(Pattern::word({2, a}));
    s.add_forbidden(Pattern::word({2, 2, 2}));
    auto p = Pattern::constant(1, 1, 2);
    EXPECT_EQ(admissible_with_margin(p, s, 0), Verdict::yes);
    EXPECT_EQ(admissible_with_margin(p, s, 1), Verdict::yes);
    EXPECT_EQ(admissible_with_margin(p, s, 2), Verdict::no);
    std::mt19937_64 rng(3);
    for (int it = 0; it < 50; ++it) {
        auto q = random_rect(rng, 2, 1, 3);
        bool prev = true;
        for (int m = 0; m < 4; ++m) {
            bool cur = admissible_with_margin(q, s, m) == Verdict::yes;
            EXPECT_FALSE(!prev && cur);
            prev = cur;
        }
    }
}

TEST(BlockComplexity, Examples) {
    auto c = block_complexity(full_shift(binary_alphabet()), 2, 0);
    EXPECT_EQ(c.lo, 16u);
    EXPECT_TRUE(c.exact());
    auto c1 = block_complexity(s1_shift(1), 2, 2);
    EXPECT_EQ(c1.lo, 3u);
}

TEST(BlockComplexity, S2AgainstBruteForce) {
    const int n = 3, m = 4, L = n + 2 * m;
    std::set<std::vector<int>> centers;
    for (int mask = 0; mask < (1 << L); ++mask) {
        std::vector<int> w(L);
        for (int i = 0; i < L; ++i) w[i] = (mask >> i) & 1;
        if (s2_oracle(w)) centers.insert(std::vector<int>(w.begin() + m, w.begin() + m + n));
    }
    SearchLimits lim;
    lim.generator_budget = L;
    auto c = block_complexity(s2_shift(), n, m, lim);
    ASSERT_TRUE(c.exact());
    EXPECT_EQ(c.lo, centers.size());
}

TEST(BlockComplexity, OracleEqualitySmallWindows) {
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 12; ++it) {
        int A = 2 + it % 2;
        ShiftSpec s = full_shift(Alphabet::numbered(A));
        for (int k = 0; k < 2 + it % 3; ++k) s.add_forbidden(random_rect(rng, 1 + k % 2, 1 + (k + it) % 2, A));
        for (int n = 1; n <= (A == 2 ? 3 : 2); ++n) {
            std::uint64_t total = 1;
            for (int i = 0; i < n * n; ++i) total *= A;
            std::uint64_t cnt = 0;
            for (std::uint64_t code = 0; code < total; ++code) {
                std::vector<Letter> v(static_cast<std::size_t>(n) * n);
                auto c = code;
                for (auto& x : v) {
                    x = static_cast<Letter>(c % A);
                    c /= A;
                }
                cnt += admissible_oracle(Pattern::rect(n, n, v), s.forbidden);
            }
            EXPECT_EQ(block_complexity(s, n, 0).lo, cnt);
        }
        // margin 1 against enumeration of every 4×4 extension (binary only)
        if (A == 2) {
            std::set<Pattern> seen;
            for (int code = 0; code < (1 << 16); ++code) {
                std::vector<Letter> v(16);
                for (int i = 0; i < 16; ++i) v[i] = (code >> i) & 1;
                auto big = Pattern::rect(4, 4, v, -1, -1);
                if (!admissible_oracle(big, s.forbidden)) continue;
                std::vector<Letter> c{v[5], v[6], v[9], v[10]};
                seen.insert(Pattern::rect(2, 2, c));
            }
            EXPECT_EQ(block_complexity(s, 2, 1).lo, seen.size());
        }
    }
}

TEST(BlockComplexity, IndependentOfThreads) {
    SearchLimits a, b;
    b.threads = 4;
    auto s = rectangle_shift();
    auto x = block_complexity(s, 3, 1, a), y = block_complexity(s, 3, 1, b);
    EXPECT_EQ(x.lo, y.lo);
    EXPECT_EQ(x.hi, y.hi);
}

TEST(BlockComplexity, InconclusiveWidensInterval) {
    SearchLimits lim;
    lim.node_limit = 40;
    auto c = block_complexity(s1_shift(2), 2, 3, lim);
    EXPECT_LE(c.lo, c.hi);
}

TEST(Pattern, NormalizeAndMerge) {
    auto p = Pattern::word({B, W}).translated(5, -2);
    EXPECT_EQ(p.normalized(), Pattern::word({B, W}));
    auto q = p.merged(Pattern(std::vector<Cell>{{{5, -2}, W}}));
    EXPECT_EQ(*q.at({5, -2}), W);
    EXPECT_TRUE(Pattern::constant(2, 3, W).is_rect());
}

TEST(ShiftSpec, ExplicitListDeduplicatedUpToTranslation) {
    ShiftSpec s = full_shift(binary_alphabet());
    s.add_forbidden(Pattern::word({B, B}));
    s.add_forbidden(Pattern::word({B, B}).translated(3, 4));
    EXPECT_EQ(s.forbidden.size(), 1u);
}
