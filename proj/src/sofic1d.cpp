#include "symdyn/sofic1d.hpp"

#include <map>
#include <stdexcept>

namespace symdyn::sofic1d {

namespace {

void require_1d(const ShiftSpec& s) {
    if (s.dim != 1) throw std::invalid_argument("follower sets need a one-dimensional shift");
}

Word row_of(const Grid& g) { return g.v; }

}  // namespace

std::vector<Word> admissible_words(const ShiftSpec& spec, int length, const SearchLimits& lim) {
    require_1d(spec);
    if (length == 0) return {Word{}};
    std::vector<Word> out;
    enumerate_completions(Grid(0, 0, length, 1), spec, [&](const Grid& g) { out.push_back(row_of(g)); return true; }, lim);
    return out;
}

std::vector<Word> followers(const ShiftSpec& spec, const Word& w, int d, const SearchLimits& lim) {
    require_1d(spec);
    const int n = static_cast<int>(w.size());
    Grid g(0, 0, n + d, 1);
    for (int i = 0; i < n; ++i) g.ref(i, 0) = w[i];
    std::vector<Word> out;
    if (n + d == 0) return {Word{}};
    enumerate_completions(g, spec, [&](const Grid& c) { out.emplace_back(c.v.begin() + n, c.v.end()); return true; }, lim);
    return out;
}

FollowerTable follower_classes(const ShiftSpec& spec, const std::vector<Word>& words, int d, const SearchLimits& lim) {
    FollowerTable t;
    t.d = d;
    std::map<std::vector<Word>, int> ids;
    for (auto& w : words) {
        auto f = followers(spec, w, d, lim);
        auto [it, fresh] = ids.emplace(std::move(f), static_cast<int>(t.representatives.size()));
        if (fresh) t.representatives.push_back(w);
        t.words.push_back(w);
        t.class_of.push_back(it->second);
    }
    return t;
}

FollowerTable follower_classes(const ShiftSpec& spec, int L, int d, const SearchLimits& lim) {
    std::vector<Word> all;
    for (int len = 0; len <= L; ++len)
        for (auto& w : admissible_words(spec, len, lim)) all.push_back(w);
    return follower_classes(spec, all, d, lim);
}

std::vector<std::size_t> class_growth(const ShiftSpec& spec, int lo, int hi, int d, const SearchLimits& lim) {
    std::vector<std::size_t> out;
    for (int L = lo; L <= hi; ++L) out.push_back(follower_classes(spec, admissible_words(spec, L, lim), d, lim).classes());
    return out;
}

Stabilization stabilization(const ShiftSpec& spec, int L, int d, const SearchLimits& lim) {
    Stabilization s;
    for (int k = d; k <= d + 2; ++k) s.counts.push_back(follower_classes(spec, L, k, lim).classes());
    s.stable = s.counts[0] == s.counts[1] && s.counts[1] == s.counts[2];
    return s;
}

ShiftSpec mirror_1d_shift() {
    ShiftSpec s;
    s.alphabet = Alphabet({"white", "black", "red"});
    s.dim = 1;
    s.name = "mirror-1d";
    s.violates = [](const Grid& g) {
        int red = -1;
        for (int i = 0; i < g.w; ++i)
            if (g.v[i] == 2) {
                if (red >= 0) return true;
                red = i;
            }
        if (red < 0) return false;
        for (int k = 1; red - k >= 0 && red + k < g.w; ++k) {
            Letter a = g.v[red - k], b = g.v[red + k];
            if (a != kUnset && b != kUnset && a != b) return true;
        }
        return false;
    };
    return s;
}

std::vector<Word> red_suffixed_words(int n) {
    std::vector<Word> out;
    for (int m = 0; m < (1 << n); ++m) {
        Word w;
        for (int i = n - 1; i >= 0; --i) w.push_back((m >> i) & 1);
        w.push_back(2);
        out.push_back(w);
    }
    return out;
}

}  // namespace symdyn::sofic1d
