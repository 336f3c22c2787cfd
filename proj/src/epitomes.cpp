#include "symdyn/epitomes.hpp"

#include <algorithm>
#include <stdexcept>

namespace symdyn::epi {

Alphabet wbr_alphabet() { return Alphabet({"white", "black", "red"}); }

namespace {

// Shared by mirror and semi-mirror. below_ok(lower, upper) says whether a symmetric pair is allowed.
bool mirror_violation(const Grid& g, bool semi) {
    int red_row = kUnset;
    bool have_red = false;
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < g.w; ++x)
            if (g.v[static_cast<std::size_t>(y) * g.w + x] == kRed) {
                if (have_red && red_row != y) return true;
                have_red = true;
                red_row = y;
            }
    if (!have_red) return false;
    const int r = red_row;
    for (int x = 0; x < g.w; ++x) {
        Letter a = g.v[static_cast<std::size_t>(r) * g.w + x];
        if (a != kUnset && a != kRed) return true;
    }
    for (int d = 1; r - d >= 0 && r + d < g.h; ++d)
        for (int x = 0; x < g.w; ++x) {
            Letter lo = g.v[static_cast<std::size_t>(r - d) * g.w + x];
            Letter hi = g.v[static_cast<std::size_t>(r + d) * g.w + x];
            if (lo == kUnset || hi == kUnset) continue;
            if (semi ? (lo == kBlack && hi != kBlack) : lo != hi) return true;
        }
    return false;
}

}  // namespace

ShiftSpec mirror_shift() {
    ShiftSpec s;
    s.alphabet = wbr_alphabet();
    s.name = "mirror";
    s.violates = [](const Grid& g) { return mirror_violation(g, false); };
    return s;
}

ShiftSpec semi_mirror_shift() {
    ShiftSpec s;
    s.alphabet = wbr_alphabet();
    s.name = "semi-mirror";
    s.violates = [](const Grid& g) { return mirror_violation(g, true); };
    return s;
}

ShiftSpec km_shift() {
    ShiftSpec s;
    s.alphabet = wbr_alphabet();
    s.name = "hidden-square";
    s.violates = [](const Grid& g) { return find_hidden_square(g).has_value(); };
    return s;
}

std::optional<Box> find_hidden_square(const Grid& g) {
    // run[c][i]: length of the run of letter c starting at cell i and going right
    std::vector<int> red(g.v.size()), black(g.v.size());
    for (int y = 0; y < g.h; ++y)
        for (int x = g.w - 1; x >= 0; --x) {
            std::size_t i = static_cast<std::size_t>(y) * g.w + x;
            bool last = x == g.w - 1;
            red[i] = g.v[i] == kRed ? 1 + (last ? 0 : red[i + 1]) : 0;
            black[i] = g.v[i] == kBlack ? 1 + (last ? 0 : black[i + 1]) : 0;
        }
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < g.w; ++x) {
            int b = black[static_cast<std::size_t>(y) * g.w + x];
            for (int k = 2; k <= b && y + k - 1 < g.h; ++k)
                if (red[static_cast<std::size_t>(y + k - 1) * g.w + x] >= k) return Box{g.x0 + x, g.y0 + y, k, k};
        }
    return std::nullopt;
}

bool hidden_square_free(const Pattern& p) {
    if (p.empty()) return true;
    return !find_hidden_square(Grid::from_pattern(p)).has_value();
}

std::optional<Value> square_letters(const Pattern& p, int n) {
    if (p.size() != static_cast<std::size_t>(n) * n) return std::nullopt;
    auto b = p.bbox();
    if (b.x0 != 0 || b.y0 != 0 || b.w != n || b.h != n) return std::nullopt;
    return p.letters();
}

namespace {

std::optional<Value> red_free(const Pattern& p, int n) {
    auto v = square_letters(p, n);
    if (!v || std::count(v->begin(), v->end(), kRed)) return std::nullopt;
    return v;
}

}  // namespace

EpitomeFamily mirror_epitome(int n) {
    EpitomeFamily f;
    f.name = "mirror";
    f.n = n;
    f.evaluate = [n](const Pattern& p) { return red_free(p, n); };
    f.in_domain = [n](const Pattern& p) { return red_free(p, n).has_value(); };
    f.time_class = TimeClass::exp_time;
    return f;
}

Order semi_mirror_order(int n) {
    const std::size_t len = static_cast<std::size_t>(n) * n;
    return [len](const Value& a, const Value& b) {
        if (a.size() != len || b.size() != len) return false;
        for (std::size_t i = 0; i < len; ++i)
            if (a[i] == kBlack && b[i] != kBlack) return false;
        return true;
    };
}

EpitomeFamily semi_mirror_epitome(int n) {
    EpitomeFamily f = mirror_epitome(n);
    f.name = "semi-mirror";
    f.leq = semi_mirror_order(n);
    return f;
}

std::optional<Profile> km_profile(const Pattern& p) {
    const int n = p.bbox().w;
    auto v = red_free(p, n);
    if (!v) return std::nullopt;
    Profile k(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) {
        int x = 0;
        while (x < n && (*v)[static_cast<std::size_t>(y) * n + x] == kBlack) ++x;
        k[y] = x;
        for (; x < n; ++x)
            if ((*v)[static_cast<std::size_t>(y) * n + x] != kWhite) return std::nullopt;
    }
    return k;
}

Pattern simple_pattern(const Profile& k) {
    const int n = static_cast<int>(k.size());
    std::vector<Letter> v;
    for (int y = 0; y < n; ++y) {
        if (k[y] < 0 || k[y] > n) throw std::invalid_argument("simple_pattern: profile entry out of range");
        for (int x = 0; x < n; ++x) v.push_back(x < k[y] ? kBlack : kWhite);
    }
    return Pattern::rect(n, n, v);
}

bool profile_leq(const Profile& a, const Profile& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

EpitomeFamily km_epitome(int n) {
    EpitomeFamily f;
    f.name = "hidden-square";
    f.n = n;
    f.evaluate = [n](const Pattern& p) -> std::optional<Value> {
        if (p.bbox().w != n) return std::nullopt;
        return km_profile(p);
    };
    f.in_domain = [f](const Pattern& p) { return f.evaluate(p).has_value(); };
    f.leq = profile_leq;
    return f;
}

namespace {

int side_of(const Pattern& p) {
    auto b = p.bbox();
    if (b.x0 != 0 || b.y0 != 0 || b.w != b.h || !p.is_rect()) throw std::invalid_argument("expected an n×n pattern at the origin");
    return b.w;
}

Pattern window_minus(const Grid& g, const Pattern& p) {
    Pattern r = g.to_pattern();
    for (auto& c : p.cells()) r.erase(c.p);
    return r;
}

}  // namespace

Pattern mirror_enforcer(const Pattern& p, int margin) {
    const int n = side_of(p);
    if (!red_free(p, n)) throw std::invalid_argument("mirror_enforcer: pattern has red cells");
    Grid g(-margin, -margin, n + 2 * margin, 2 * n + 1 + 2 * margin, kWhite);
    for (int x = g.x0; x < g.x0 + g.w; ++x) g.ref(x, n) = kRed;
    for (auto& c : p.cells())
        if (c.a == kBlack) g.ref(c.p.x, 2 * n - c.p.y) = kBlack;
    return window_minus(g, p);
}

Pattern km_enforcer(const Pattern& p, int margin) {
    const int n = side_of(p);
    auto k = km_profile(p);
    if (!k) throw std::invalid_argument("km_enforcer: pattern is not simple");
    Grid g(-3 * n - margin, -margin, 4 * n + 2 * margin, 3 * n + 2 * margin, kWhite);
    for (int i = 1; i <= n; ++i) {
        const int ki = (*k)[i - 1];
        const int left = ki - (3 * n - 2 * i + 1);
        for (int x = left; x < ki; ++x) g.ref(x, i - 1) = kBlack;
        const int red_len = 3 * n - 2 * i + 2;
        for (int x = left; x < left + red_len; ++x) g.ref(x, 3 * n - i) = kRed;
    }
    return window_minus(g, p);
}

std::vector<Pattern> source_patterns(int n, const PatternSource& src) {
    if (n < 1 || src.letters.empty()) throw std::invalid_argument("source_patterns: bad source");
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    std::vector<std::size_t> digit(cells, 0);
    std::vector<Pattern> out;
    for (;;) {
        std::vector<Letter> v(cells);
        for (std::size_t i = 0; i < cells; ++i) v[i] = src.letters[digit[i]];
        Pattern p = Pattern::rect(n, n, v);
        if (!src.spec || admissible_with_margin(p, *src.spec, src.margin, src.limits) == Verdict::yes) out.push_back(p);
        std::size_t i = cells;
        while (i > 0 && ++digit[i - 1] == src.letters.size()) digit[--i] = 0;
        if (i == 0) break;
    }
    return out;
}

ValueTable collect_values(const EpitomeFamily& f, const PatternSource& src) {
    std::map<Value, Pattern> seen;
    for (auto& p : source_patterns(f.n, src))
        if (auto v = f.evaluate(p)) seen.emplace(*v, p);
    ValueTable t;
    for (auto& [v, p] : seen) {
        t.values.push_back(v);
        t.witness.push_back(p);
    }
    return t;
}

std::size_t count_values(const EpitomeFamily& f, const PatternSource& src) { return collect_values(f, src).values.size(); }

std::vector<ChainLink> chain_from_epitomes(const EpitomeFamily& f, const PatternSource& src) {
    ValueTable t = collect_values(f, src);
    std::vector<ChainLink> out;
    std::vector<char> used(t.values.size(), 0);
    auto leq = [&](const Value& a, const Value& b) { return f.leq ? f.leq(a, b) : a == b; };
    for (std::size_t step = 0; step < t.values.size(); ++step) {
        std::size_t pick = t.values.size();
        for (std::size_t i = 0; i < t.values.size() && pick == t.values.size(); ++i) {
            if (used[i]) continue;
            bool maximal = true;
            for (std::size_t j = 0; j < t.values.size() && maximal; ++j)
                if (!used[j] && j != i && leq(t.values[i], t.values[j])) maximal = false;
            if (maximal) pick = i;
        }
        if (pick == t.values.size()) throw std::logic_error("chain_from_epitomes: order has a cycle");
        used[pick] = 1;
        out.push_back({t.witness[pick], t.values[pick]});
    }
    return out;
}

ExtensionSet extension_set_bounded(const Pattern& p, const ShiftSpec& spec, int margin, const SearchLimits& lim) {
    ExtensionSet e;
    Grid g = Grid::around(p, margin, spec.dim == 1 ? 0 : margin);
    for (int y = g.y0; y < g.y0 + g.h; ++y)
        for (int x = g.x0; x < g.x0 + g.w; ++x)
            if (g.at(x, y) == kUnset) e.ring.push_back({x, y});
    auto st = enumerate_completions(
        g, spec,
        [&](const Grid& c) {
            std::vector<Letter> r;
            r.reserve(e.ring.size());
            for (auto q : e.ring) r.push_back(c.at(q.x, q.y));
            e.colorings.insert(std::move(r));
            return true;
        },
        lim);
    e.complete = st != SearchStatus::limit;
    return e;
}

int first_union_failure(const std::vector<ExtensionSet>& sets) {
    std::set<std::vector<Letter>> acc;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (i && sets[i].ring != sets[0].ring) throw std::invalid_argument("extension sets over different rings");
        bool grows = std::any_of(sets[i].colorings.begin(), sets[i].colorings.end(),
                                 [&](const auto& c) { return !acc.count(c); });
        if (!grows) return static_cast<int>(i);
        acc.insert(sets[i].colorings.begin(), sets[i].colorings.end());
    }
    return -1;
}

}  // namespace symdyn::epi
