#pragma once
#include <vector>

#include "symdyn/core.hpp"

namespace symdyn::sofic1d {

using Word = std::vector<Letter>;

// Words grouped by their depth-d follower sets (admissible right extensions of length d).
struct FollowerTable {
    int d = 0;
    std::vector<Word> words;
    std::vector<int> class_of;        // per word
    std::vector<Word> representatives;  // first word of each class
    std::size_t classes() const { return representatives.size(); }
};

std::vector<Word> admissible_words(const ShiftSpec& spec, int length, const SearchLimits& lim = {});
std::vector<Word> followers(const ShiftSpec& spec, const Word& w, int d, const SearchLimits& lim = {});

// All admissible words of length 0..L.
FollowerTable follower_classes(const ShiftSpec& spec, int L, int d, const SearchLimits& lim = {});
FollowerTable follower_classes(const ShiftSpec& spec, const std::vector<Word>& words, int d, const SearchLimits& lim = {});

// Class counts among admissible words of each exact length L in [lo, hi].
std::vector<std::size_t> class_growth(const ShiftSpec& spec, int lo, int hi, int d, const SearchLimits& lim = {});

// Counts at depths d, d+1, d+2; stable when all three agree. Evidence only.
struct Stabilization {
    std::vector<std::size_t> counts;
    bool stable = false;
};
Stabilization stabilization(const ShiftSpec& spec, int L, int d, const SearchLimits& lim = {});

// One-dimensional mirror shift over white/black/red: at most one red cell, mirror symmetric around it.
ShiftSpec mirror_1d_shift();
std::vector<Word> red_suffixed_words(int n);  // the 2^n words prefix·red

}  // namespace symdyn::sofic1d
