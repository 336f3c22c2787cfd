#include <gtest/gtest.h>

#include <random>
#include <set>

#include "symdyn/compile.hpp"

using namespace symdyn;

namespace {

struct Config {
    std::vector<int> tape;
    int head = 0, q = 0;
};

// Reference one-head machine run, kept separate from the library simulator.
std::vector<Config> run_oracle(const TMSpec& m, std::vector<int> tape, int head, int steps, bool& fell_off) {
    std::vector<Config> out{{tape, head, m.start}};
    fell_off = false;
    for (int t = 0; t < steps; ++t) {
        Config c = out.back();
        if (c.q != m.halt) {
            const TMRule& r = m.delta[static_cast<std::size_t>(c.q) * m.symbols.size() + c.tape[c.head]];
            c.tape[c.head] = r.write;
            c.head += r.move == Move::L ? -1 : r.move == Move::R ? 1 : 0;
            c.q = r.next;
            if (c.head < 0 || c.head >= static_cast<int>(c.tape.size())) {
                fell_off = true;
                return out;
            }
        }
        out.push_back(c);
    }
    return out;
}

std::vector<Letter> bottom_row(const SpaceTimeDiagram& d) {
    std::vector<Letter> r;
    for (int x = 0; x < d.width(); ++x) r.push_back(d.at(x, 0));
    return r;
}

std::vector<int> random_tape(std::mt19937_64& rng, const TMSpec& m, int w) {
    std::uniform_int_distribution<int> s(0, m.nsym() - 1);
    std::vector<int> t(static_cast<std::size_t>(w));
    for (auto& x : t) x = s(rng);
    return t;
}

// Reachable diagrams of an NCA by exhaustive choice, as a set of flattened grids.
void nca_all(const NCASpec& a, std::vector<std::vector<Letter>>& rows, int steps, std::set<std::vector<Letter>>& out) {
    if (static_cast<int>(rows.size()) == steps + 1) {
        std::vector<Letter> flat;
        for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
        out.insert(flat);
        return;
    }
    const auto prev = rows.back();
    const int w = static_cast<int>(prev.size());
    std::vector<Letter> next(static_cast<std::size_t>(w));
    std::function<void(int)> rec = [&](int x) {
        if (x == w) {
            bool bad = false;
            for (auto v : next) bad |= a.error >= 0 && v == a.error;
            if (bad) return;
            rows.push_back(next);
            nca_all(a, rows, steps, out);
            rows.pop_back();
            return;
        }
        Letter l = x == 0 ? a.boundary : prev[x - 1], r = x == w - 1 ? a.boundary : prev[x + 1];
        for (Letter o : a.options(l, prev[x], r)) {
            next[x] = o;
            rec(x + 1);
        }
    };
    rec(0);
}

}  // namespace

TEST(Compile, BinaryIncrement) {
    auto m = machines::binary_increment();
    // 0 1 1 with the head on the rightmost bit becomes 1 0 0
    auto d = simulate(m, {0, 1, 1}, 2, 4);
    for (int x = 0; x < 3; ++x) EXPECT_EQ(m.sym_of(d.at(x, 3)), std::vector<int>({1, 0, 0})[x]);
    EXPECT_TRUE(verify_spacetime(d, m));
}

TEST(Compile, NoopSftHasOneDiagramPerRow) {
    auto m = machines::noop();
    auto row = tm_input_row(m, {1, 0}, 0);
    auto all = admissible_diagrams(tm_to_sft(m), pad_letter(m), row, 3, 2, 2);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0], simulate(m, {1, 0}, 0, 2));
}

TEST(Compile, SimulatorMatchesReferenceRun) {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 100; ++it) {
        auto m = machines::random_tm(rng, 1 + it % 3, it % 2);
        int w = 2 + it % 5;
        auto tape = random_tape(rng, m, w);
        int head = static_cast<int>(rng() % w);
        bool fell = false;
        auto ref = run_oracle(m, tape, head, 4, fell);
        if (fell) {
            EXPECT_THROW(simulate(m, tape, head, 4), BoundaryError);
            continue;
        }
        auto d = simulate(m, tape, head, 4);
        for (int t = 0; t < 5; ++t)
            for (int x = 0; x < w; ++x) {
                EXPECT_EQ(m.sym_of(d.at(x, t)), ref[t].tape[x]);
                EXPECT_EQ(m.head_of(d.at(x, t)), x == ref[t].head ? ref[t].q : -1);
            }
    }
}

TEST(Compile, TmRoundTripMutationAndUniqueness) {
    std::mt19937_64 rng(5);
    int done = 0;
    for (int it = 0; done < 20 && it < 500; ++it) {
        auto m = machines::random_tm(rng, 2, 0);
        int w = 3 + it % 4;
        auto tape = random_tape(rng, m, w);
        int head = static_cast<int>(rng() % w);
        SpaceTimeDiagram d;
        try {
            d = simulate(m, tape, head, 3);
        } catch (const BoundaryError&) {
            // no admissible diagram exists when the head must cross the padding
            auto all = admissible_diagrams(tm_to_sft(m), pad_letter(m), tm_input_row(m, tape, head), 4, 1, 2);
            EXPECT_TRUE(all.empty());
            continue;
        }
        ++done;
        ASSERT_TRUE(verify_spacetime(d, m));
        for (int t = 0; t < d.height(); ++t)
            for (int x = 0; x < d.width(); ++x)
                for (Letter a = 0; a < m.num_letters(); ++a) {
                    if (a == d.at(x, t)) continue;
                    auto e = d;
                    e.g.ref(x, t) = a;
                    if (t == 0) {
                        // a changed input is a different run; only compare against its own diagrams
                        continue;
                    }
                    EXPECT_FALSE(verify_spacetime(e, m)) << "t=" << t << " x=" << x;
                }
        auto all = admissible_diagrams(tm_to_sft(m), pad_letter(m), bottom_row(d), d.height(), 2, 2);
        ASSERT_EQ(all.size(), 1u);
        EXPECT_EQ(all[0], d);
    }
    EXPECT_EQ(done, 20);
}

TEST(Compile, ForbiddenRectCountIdentity) {
    std::mt19937_64 rng(3);
    for (auto m : {machines::noop(), machines::binary_increment(), machines::random_tm(rng, 1)}) {
        std::uint64_t A = static_cast<std::uint64_t>(m.num_letters());
        // every consistent triple admits exactly one top letter in the centre, free letters at the sides
        EXPECT_EQ(count_forbidden_rects(m), A * A * A * A * A * A - consistent_triples(m) * A * A);
    }
}

TEST(Compile, TwoHeadCopy) {
    auto m = machines::twohead_copy();
    // head 1 writes into cells 0..2 while head 2 reads cells 3..5
    std::vector<int> tape{0, 0, 0, 1, 0, 1, 0};
    auto d = simulate(m, tape, 0, 3, 3);
    ASSERT_TRUE(verify_spacetime(d, m));
    for (int x = 0; x < 3; ++x) EXPECT_EQ(decode_cell(m, d.at(x, 3)).sym, tape[3 + x]);
    auto all = admissible_diagrams(twohead_to_sft(m), pad_letter(m), bottom_row(d), d.height(), 4);
    ASSERT_EQ(all.size(), 1u);
    for (int t = 1; t < d.height(); ++t)
        for (int x = 0; x < d.width(); ++x) {
            auto e = d;
            e.g.ref(x, t) = (d.at(x, t) + 1) % num_letters(m);
            EXPECT_FALSE(verify_spacetime(e, m));
        }
}

TEST(Compile, TwoHeadCellCodecRoundTrips) {
    auto m = machines::twohead_copy();
    for (Letter a = 0; a < num_letters(m); ++a) EXPECT_EQ(encode_cell(m, decode_cell(m, a)), a);
}

TEST(Compile, TwoHeadFallsOffWindow) {
    auto m = machines::twohead_copy();
    EXPECT_THROW(simulate(m, {0, 1, 0, 1}, 0, 3, 3), BoundaryError);
}

TEST(Compile, NcaDiagramsMatchReachability) {
    std::mt19937_64 rng(77);
    for (int it = 0; it < 20; ++it) {
        auto a = machines::random_nca(rng, 2 + it % 2, 0.3);
        if (it % 4 == 3) {
            a.error = static_cast<Letter>(a.size() - 1);
            for (Letter l = 0; l < a.size(); ++l)
                for (Letter r = 0; r < a.size(); ++r)
                    a.f[(static_cast<std::size_t>(l) * a.size() + a.error) * a.size() + r] = {a.error};
        }
        int w = 2 + it % 3, steps = 2;
        std::uniform_int_distribution<int> ld(0, a.size() - 1);
        std::vector<Letter> in(static_cast<std::size_t>(w));
        for (auto& x : in) x = ld(rng);
        if (a.error >= 0)
            for (auto& x : in) x = x == a.error ? 0 : x;
        std::set<std::vector<Letter>> reach;
        std::vector<std::vector<Letter>> rows{in};
        nca_all(a, rows, steps, reach);
        auto all = admissible_diagrams(nca_to_sft(a), pad_letter(a), in, steps + 1, 100000);
        std::set<std::vector<Letter>> got;
        for (auto& d : all) got.insert(d.g.v);
        EXPECT_EQ(got, reach) << "it=" << it;
        for (auto& d : all) EXPECT_TRUE(verify_spacetime(d, a));
        if (reach.empty()) continue;
        // a mutation is rejected exactly when it leaves the reachable set
        auto d = simulate(a, in, steps, [](int, int, int) { return 0; });
        for (std::size_t i = static_cast<std::size_t>(w); i < d.g.v.size(); ++i)
            for (Letter b = 0; b < a.size(); ++b) {
                auto e = d;
                e.g.v[i] = b;
                EXPECT_EQ(verify_spacetime(e, a), reach.count(e.g.v) == 1);
            }
    }
}

TEST(Compile, DeterministicCa) {
    auto a = machines::xor_ca();
    ASSERT_TRUE(a.deterministic());
    auto d = simulate(a, {0, 1, 0, 0}, 3, std::vector<int>{});
    // boundary is 0, so row 1 of 0100 is 1010
    EXPECT_EQ(d.at(0, 1), 1);
    EXPECT_EQ(d.at(1, 1), 0);
    EXPECT_EQ(d.at(2, 1), 1);
    EXPECT_EQ(d.at(3, 1), 0);
    EXPECT_EQ(admissible_diagrams(nca_to_sft(a), pad_letter(a), {0, 1, 0, 0}, 4).size(), 1u);
    EXPECT_FALSE(machines::full_choice_ca().deterministic());
    EXPECT_EQ(admissible_diagrams(nca_to_sft(machines::full_choice_ca()), 0, {0, 1}, 2).size(), 4u);
}
