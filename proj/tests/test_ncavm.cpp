#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "symdyn/ncavm.hpp"

using namespace symdyn::vm;

namespace {

VMState tape_of(const std::vector<int>& bits) {
    VMState s;
    for (int b : bits) s.tape.push_back({b});
    return s;
}

Program mover(int dir) {
    Program p;
    p.control = [dir](int st, const std::vector<VMCell>&) {
        Decision d;
        d.next_state = st;
        d.principal.resize(1);
        d.principal[0].move = dir;
        d.principal[0].leave_as = Activity::inactive;
        return d;
    };
    return p;
}

}  // namespace

TEST(Step, NoopOnInactiveTapeWithNoPrincipalNeeded) {
    VMState s = tape_of({0, 1, 1, 0});
    s.k = 1;
    s.tape[0].act = Activity::principal;
    s.tape[0].pid = 1;
    Program p;
    p.control = [](int st, const std::vector<VMCell>&) { return Decision{st, {}, {}}; };
    VMState t = step(s, p);
    EXPECT_EQ(t.tape, s.tape);
    EXPECT_FALSE(t.error);
}

TEST(Step, PrincipalMovesRightThree) {
    VMState s = tape_of({1, 0, 1, 1, 0, 1});
    s.tape[1].act = Activity::principal;
    s.tape[1].pid = 1;
    auto p = mover(+1);
    for (int i = 0; i < 3; ++i) s = step(s, p);
    ASSERT_FALSE(s.error);
    EXPECT_EQ(principal_positions(s), std::vector<int>{4});
    std::vector<int> bits;
    for (auto& c : s.tape) bits.push_back(c.bit);
    EXPECT_EQ(bits, (std::vector<int>{1, 0, 1, 1, 0, 1}));
    EXPECT_EQ(s.steps, 3);
}

TEST(Step, ContradictorySignalsRaiseAbsorbingError) {
    VMState s = tape_of({0, 0, 0});
    s.tape[0].act = Activity::principal;
    s.tape[0].pid = 1;
    s.tape[1].signal = 1;
    s.tape[2].signal = 2;
    auto p = mover(+1);
    VMState t = step(s, p);
    EXPECT_TRUE(t.error);
    EXPECT_EQ(step(t, p), t);
}

TEST(Step, LeavingTheTapeIsAnError) {
    VMState s = tape_of({0, 0});
    s.tape[1].act = Activity::principal;
    s.tape[1].pid = 1;
    EXPECT_TRUE(step(s, mover(+1)).error);
}

TEST(Jump, Examples) {
    VMState s = tape_of(std::vector<int>(20, 0));
    s.tape[0].act = Activity::principal;
    s.tape[0].pid = 1;
    s.tape[1].act = Activity::secondary;
    VMState a = jump(s, 1, +1);
    ASSERT_FALSE(a.error);
    EXPECT_EQ(principal_positions(a), std::vector<int>{1});
    EXPECT_EQ(a.wire, 1);
    EXPECT_EQ(a.tape[0].act, Activity::secondary);

    s.tape[1].act = Activity::inactive;
    s.tape[17].act = Activity::secondary;
    VMState b = jump(s, 1, +1, Activity::inactive);
    ASSERT_FALSE(b.error);
    EXPECT_EQ(principal_positions(b), std::vector<int>{17});
    EXPECT_EQ(b.steps, 1);
    EXPECT_EQ(b.wire, 17);
    EXPECT_EQ(b.tape[0].act, Activity::inactive);

    s.tape[17].act = Activity::inactive;
    EXPECT_TRUE(jump(s, 1, +1).error);
    EXPECT_THROW(jump(s, 2, +1), std::invalid_argument);
}

TEST(Jump, BlockedByAnotherPrincipal) {
    VMState s = tape_of(std::vector<int>(6, 0));
    s.k = 2;
    s.tape[0].act = Activity::principal;
    s.tape[0].pid = 1;
    s.tape[2].act = Activity::principal;
    s.tape[2].pid = 2;
    s.tape[4].act = Activity::secondary;
    EXPECT_TRUE(jump(s, 1, +1).error);
    EXPECT_FALSE(jump(s, 2, +1).error);
}

TEST(ListSearch, Examples) {
    auto u = list_search({0, 1}, {{{0, 1, 1}, {1, 0, 0}}, {{1, 1, 0}}});
    EXPECT_EQ(u.kind, SearchOutcome::unique);
    EXPECT_EQ(u.l1, 0);
    EXPECT_EQ(u.i1, 0);

    auto p = list_search({1}, {{{1, 0}}, {{1, 1}}});
    ASSERT_EQ(p.kind, SearchOutcome::pair) << p.reason;
    EXPECT_EQ(std::make_pair(p.l1, p.i1), std::make_pair(0, 0));
    EXPECT_EQ(std::make_pair(p.l2, p.i2), std::make_pair(1, 0));

    auto e = list_search({0}, {{{0, 0}, {0, 1}}, {}});
    EXPECT_EQ(e.kind, SearchOutcome::error);
    EXPECT_EQ(e.reason, "two matches in the same list");

    EXPECT_EQ(list_search({1, 1}, {{{0, 0}}}).kind, SearchOutcome::error);
    EXPECT_EQ(list_search({1}, {{{1}}, {{1}}, {{1}}}).reason, "three or more matches");
    EXPECT_THROW(list_search({}, {}), std::invalid_argument);
    EXPECT_THROW(list_search({1, 1}, {{{1}}}), std::invalid_argument);
}

TEST(ListSearch, TraceHasOneRowPerStep) {
    std::vector<std::string> tr;
    auto o = list_search({0, 1}, {{{0, 1, 1}, {1, 0, 0}}, {{1, 1, 0}}}, &tr);
    EXPECT_EQ(static_cast<long long>(tr.size()), o.steps + 1);
    EXPECT_EQ(tr.front()[0], 'O');
}

// Random instances biased so that unique and pair outcomes are common.
TEST(ListSearch, AgreesWithScanOracleAndStepBound) {
    std::mt19937_64 rng(20261019);
    int kinds[3] = {0, 0, 0};
    for (int it = 0; it < 1000; ++it) {
        int q = 1 + static_cast<int>(rng() % 16);
        Bits e(q);
        for (auto& b : e) b = static_cast<int>(rng() % 2);
        int k = 1 + static_cast<int>(rng() % 4);
        std::vector<std::vector<Bits>> lists(k);
        int total = 0;
        for (auto& l : lists) {
            int m = static_cast<int>(rng() % 9);
            for (int i = 0; i < m && total < 32; ++i, ++total) {
                Bits el(q + rng() % 4);
                for (auto& b : el) b = static_cast<int>(rng() % 2);
                if (rng() % 6 == 0) std::copy(e.begin(), e.end(), el.begin());
                l.push_back(el);
            }
        }
        auto got = list_search(e, lists);
        auto want = list_search_oracle(e, lists);
        ASSERT_EQ(got, want) << "instance " << it << " reason " << got.reason;
        EXPECT_LE(got.steps, static_cast<long long>(kListSearchC) * q);
        ++kinds[got.kind];
        EXPECT_EQ(list_search(e, lists), got);
    }
    EXPECT_GT(kinds[SearchOutcome::unique], 50);
    EXPECT_GT(kinds[SearchOutcome::pair], 20);
}

TEST(ListSearch, RunsAreBitIdentical) {
    std::vector<std::string> a, b;
    list_search({1, 0}, {{{1, 0, 1}}, {{0, 0}, {1, 0}}}, &a);
    list_search({1, 0}, {{{1, 0, 1}}, {{0, 0}, {1, 0}}}, &b);
    EXPECT_EQ(a, b);
}

TEST(Marks, CatalogIsBijective) {
    std::set<int> ids;
    int f2[] = {2}, sides[] = {0, 1, 2, 3};
    for (int k = 0; k < 2; ++k) ids.insert(mark_id(f2[0], -1, static_cast<MarkKind>(k)));
    for (int f : {3, 4, 7})
        for (int s : sides)
            for (int k = 0; k < 2; ++k) ids.insert(mark_id(f, s, static_cast<MarkKind>(k)));
    for (int f : {5, 6, 8})
        for (int s : sides)
            for (int k = 0; k < 4; ++k) ids.insert(mark_id(f, s, static_cast<MarkKind>(k)));
    ids.insert(mark_id(5, 0, MarkKind::interior));
    EXPECT_EQ(static_cast<int>(ids.size()), kCatalogSize);
    EXPECT_EQ(*ids.begin(), 1);
    EXPECT_EQ(*ids.rbegin(), kCatalogSize);
    for (int id : ids) {
        auto m = mark_info(id);
        EXPECT_EQ(mark_id(m.field, m.side, m.kind), id);
    }
    EXPECT_THROW(mark_id(5, 1, MarkKind::interior), std::invalid_argument);
    EXPECT_THROW(mark_id(3, 0, MarkKind::elem_start), std::invalid_argument);
    EXPECT_THROW(mark_info(kGlobalStart), std::invalid_argument);
}

namespace {

std::map<int, int> mark_counts(const VMState& s) {
    std::map<int, int> m;
    for (auto& c : s.tape)
        if (c.mark) ++m[c.mark];
    return m;
}

}  // namespace

TEST(InitMarks, EmptyFieldList) {
    VMState s = init_marks(std::vector<FieldInput>{});
    ASSERT_FALSE(s.error) << s.error_reason;
    EXPECT_EQ(mark_counts(s), (std::map<int, int>{{kGlobalStart, 1}, {kGlobalEnd, 1}}));
}

TEST(InitMarks, TwoElementListGetsFourElementMarks) {
    FieldInput f{5, 2, {{1, 0}, {1, 1, 1}}};
    VMState s = init_marks({f});
    ASSERT_FALSE(s.error) << s.error_reason;
    auto m = mark_counts(s);
    EXPECT_EQ(m[mark_id(5, 2, MarkKind::elem_start)], 2);
    EXPECT_EQ(m[mark_id(5, 2, MarkKind::elem_end)], 2);
    EXPECT_EQ(m[mark_id(5, 2, MarkKind::field_start)], 1);
    EXPECT_EQ(m[mark_id(5, 2, MarkKind::field_end)], 1);
    EXPECT_EQ(m.size(), 6u);
    EXPECT_LE(s.steps, 5 * static_cast<long long>(s.tape.size()));
}

TEST(InitMarks, LeftFieldFiveInteriorMark) {
    FieldInput f{5, 0, {{1, 0}}};
    VMState s = init_marks({f});
    ASSERT_FALSE(s.error);
    const int in = mark_id(5, 0, MarkKind::interior);
    // cells strictly inside the field that carry no delimiter mark
    EXPECT_EQ(mark_counts(s)[in], static_cast<int>(s.tape.size()) - 2 - 4);
    FieldInput g{5, 1, {{1, 0}}};
    EXPECT_EQ(mark_counts(init_marks({g})).count(in), 0u);
}

TEST(InitMarks, MixedScheduleAndMalformedInput) {
    std::vector<FieldInput> fs{{2, -1, {{1, 1, 0}}}, {3, 1, {{0, 1}}}, {6, 3, {}}, {8, 0, {{1}, {0}, {1, 1}}}};
    VMState s = init_marks(fs);
    ASSERT_FALSE(s.error) << s.error_reason;
    auto m = mark_counts(s);
    EXPECT_EQ(m[mark_id(8, 0, MarkKind::elem_start)], 3);
    EXPECT_EQ(m[mark_id(6, 3, MarkKind::field_start)], 1);
    EXPECT_EQ(m.count(mark_id(6, 3, MarkKind::elem_start)), 0u);
    EXPECT_EQ(principal_positions(s), std::vector<int>{static_cast<int>(s.tape.size()) - 1});

    std::vector<FieldSlot> sched;
    for (auto& f : fs) sched.push_back({f.field, f.side});
    Bits raw = encode_fields(fs);
    Bits bad = raw;
    bad[1] = 1;  // opening pair of the first field
    EXPECT_TRUE(init_marks(bad, sched).error);
    // separator inside the single-element field 3
    std::vector<FieldInput> sep{{3, 0, {{1}}}};
    Bits r2 = encode_fields(sep);
    r2.insert(r2.begin() + 5, {0, 0, 1, 1});
    EXPECT_TRUE(init_marks(r2, {{3, 0}}).error);
    EXPECT_TRUE(init_marks(Bits(raw.begin(), raw.end() - 1), sched).error);
}

TEST(InitMarks, PrincipalCountConserved) {
    std::vector<FieldInput> fs{{5, 0, {{1, 0, 1}, {0}}}};
    VMState s = init_marks(fs);
    EXPECT_EQ(principal_positions(s).size(), 1u);
    std::vector<std::string> tr;
    list_search({1, 0}, {{{1, 0, 1}}, {{0, 0}, {1, 0}}}, &tr);
    for (auto& row : tr) {
        int p = 0;
        for (char c : row.substr(0, row.find(' ')))
            if (c == 'O' || c == 'I') ++p;
        EXPECT_EQ(p, 1) << row;
    }
}
