#pragma once
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symdyn/core.hpp"

namespace symdyn::epi {

// Three-letter shifts use white 0, black 1, red 2.
inline constexpr Letter kWhite = 0, kBlack = 1, kRed = 2;
Alphabet wbr_alphabet();

ShiftSpec mirror_shift();
ShiftSpec semi_mirror_shift();  // below the red line, blacks only where the mirror image above is black
ShiftSpec km_shift();           // no hidden square: red top row over black bottom row

using Value = std::vector<int>;
using Order = std::function<bool(const Value&, const Value&)>;  // a ≼ b
enum class TimeClass { computable, exp_time, oracle };

struct EpitomeFamily {
    std::string name;
    int n = 1;
    std::function<std::optional<Value>(const Pattern&)> evaluate;
    Order leq;                                     // empty for plain families
    std::function<bool(const Pattern&)> in_domain;  // empty when the domain is not decidable
    TimeClass time_class = TimeClass::computable;
    bool ordered() const { return static_cast<bool>(leq); }
};

// n×n patterns with support [0,n)², values in row-major order
std::optional<Value> square_letters(const Pattern& p, int n);

EpitomeFamily mirror_epitome(int n);
Order semi_mirror_order(int n);
EpitomeFamily semi_mirror_epitome(int n);

using Profile = std::vector<int>;  // k_i for rows y = 0..n-1
std::optional<Profile> km_profile(const Pattern& p);
Pattern simple_pattern(const Profile& k);
bool profile_leq(const Profile& a, const Profile& b);
EpitomeFamily km_epitome(int n);

// Enforcing neighbourhoods on a finite window around [0,n)²; the result excludes p's support.
Pattern mirror_enforcer(const Pattern& p, int margin = 1);
Pattern km_enforcer(const Pattern& p, int margin = 1);

std::optional<Box> find_hidden_square(const Grid& g);  // Box.w is the side
bool hidden_square_free(const Pattern& p);

struct PatternSource {
    std::vector<Letter> letters{kWhite, kBlack};
    const ShiftSpec* spec = nullptr;  // when set, keep only patterns admissible with margin
    int margin = 0;
    SearchLimits limits{};
};
std::vector<Pattern> source_patterns(int n, const PatternSource& src);

struct ValueTable {
    std::vector<Value> values;      // sorted, distinct
    std::vector<Pattern> witness;   // first pattern (in enumeration order) reaching each value
};
ValueTable collect_values(const EpitomeFamily& f, const PatternSource& src);
std::size_t count_values(const EpitomeFamily& f, const PatternSource& src);

struct ChainLink {
    Pattern p;
    Value v;
};
// Maximal-first linear extension: no later value dominates an earlier one. Ties go to the smaller value.
std::vector<ChainLink> chain_from_epitomes(const EpitomeFamily& f, const PatternSource& src);

struct ExtensionSet {
    std::vector<Pos> ring;                  // margin cells, row-major
    std::set<std::vector<Letter>> colorings;
    bool complete = true;                   // false when the search hit its node limit
    friend bool operator==(const ExtensionSet& a, const ExtensionSet& b) {
        return a.ring == b.ring && a.colorings == b.colorings && a.complete == b.complete;
    }
};
ExtensionSet extension_set_bounded(const Pattern& p, const ShiftSpec& spec, int margin, const SearchLimits& lim = {});

// Index of the first set contained in the union of its predecessors, or -1 for an increasing-union chain.
int first_union_failure(const std::vector<ExtensionSet>& sets);

}  // namespace symdyn::epi
