#pragma once
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "symdyn/core.hpp"

namespace symdyn {

enum class Move : int { L = -1, S = 0, R = 1 };

struct BoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TMRule {
    int next = 0, write = 0;
    Move move = Move::S;
};

struct TMSpec {
    std::vector<std::string> symbols{"0", "1", "End"};
    int num_states = 1, start = 0, halt = 0;
    std::vector<TMRule> delta;  // [state * |symbols| + sym]

    int nsym() const { return static_cast<int>(symbols.size()); }
    int end_symbol() const;
    const TMRule& rule(int q, int s) const { return delta.at(static_cast<std::size_t>(q) * nsym() + s); }
    // composite letter: sym·(|Q|+1) + h, h = 0 for no head, 1+q for head in state q
    Letter letter(int sym, int head_state) const { return sym * (num_states + 1) + head_state + 1; }
    int sym_of(Letter a) const { return a / (num_states + 1); }
    int head_of(Letter a) const { return a % (num_states + 1) - 1; }
    int num_letters() const { return nsym() * (num_states + 1); }
    void validate() const;
};

struct TwoHeadRule {
    int next = 0, write1 = 0, write2 = 0;
    Move m1 = Move::S, m2 = Move::S;
};

struct TwoHeadTMSpec {
    std::vector<std::string> symbols{"0", "1", "End"};
    int num_states = 1, start = 0, halt = 0;
    std::vector<TwoHeadRule> delta;  // [(q·G + s1)·G + s2]

    int nsym() const { return static_cast<int>(symbols.size()); }
    int end_symbol() const;
    const TwoHeadRule& rule(int q, int s1, int s2) const {
        return delta.at((static_cast<std::size_t>(q) * nsym() + s1) * nsym() + s2);
    }
    void validate() const;
};

// Composite two-head cell. The frame letter pads the sides of a diagram.
struct TwoHeadCell {
    bool frame = false;
    int sym = 0;
    bool h1 = false, h2 = false;
    int q = 0, s1 = 0, s2 = 0;  // row-wide shared knowledge
};

Letter encode_cell(const TwoHeadTMSpec& m, const TwoHeadCell& c);
TwoHeadCell decode_cell(const TwoHeadTMSpec& m, Letter a);
int num_letters(const TwoHeadTMSpec& m);

struct NCASpec {
    std::vector<std::string> letters;
    std::vector<std::vector<Letter>> f;  // [(l·A + m)·A + r] -> sorted non-empty set
    Letter error = -1;                    // -1: no error letter
    Letter boundary = 0;                  // virtual letter beyond the window

    int size() const { return static_cast<int>(letters.size()); }
    const std::vector<Letter>& options(Letter l, Letter m, Letter r) const {
        return f.at((static_cast<std::size_t>(l) * size() + m) * size() + r);
    }
    bool deterministic() const;
    void validate() const;
};

struct SpaceTimeDiagram {
    Grid g;  // row y = time y; bottom row is the input
    int width() const { return g.w; }
    int height() const { return g.h; }
    Letter at(int x, int t) const { return g.at(x, t); }
    friend bool operator==(const SpaceTimeDiagram& a, const SpaceTimeDiagram& b) { return a.g.v == b.g.v && a.g.w == b.g.w; }
};

ShiftSpec tm_to_sft(const TMSpec& m);
ShiftSpec twohead_to_sft(const TwoHeadTMSpec& m);
ShiftSpec nca_to_sft(const NCASpec& a);

// Number of forbidden 3×2 rectangles of a compiled TM, counted by direct enumeration.
std::uint64_t count_forbidden_rects(const TMSpec& m);
std::uint64_t consistent_triples(const TMSpec& m);

std::vector<Letter> tm_input_row(const TMSpec& m, const std::vector<int>& tape, int head);
std::vector<Letter> twohead_input_row(const TwoHeadTMSpec& m, const std::vector<int>& tape, int h1, int h2);

SpaceTimeDiagram simulate(const TMSpec& m, const std::vector<int>& tape, int head, int steps);
SpaceTimeDiagram simulate(const TwoHeadTMSpec& m, const std::vector<int>& tape, int h1, int h2, int steps);
using ChoiceOracle = std::function<int(int t, int x, int options)>;
SpaceTimeDiagram simulate(const NCASpec& a, const std::vector<Letter>& input, int steps, const ChoiceOracle& choose);
SpaceTimeDiagram simulate(const NCASpec& a, const std::vector<Letter>& input, int steps, const std::vector<int>& choices);

// Pads constant boundary columns on each side and checks local admissibility for the compiled SFT.
// The one-head encoding needs two columns so that a head stepping into the padding is caught.
bool verify_spacetime(const SpaceTimeDiagram& d, const TMSpec& m);
bool verify_spacetime(const SpaceTimeDiagram& d, const TwoHeadTMSpec& m);
bool verify_spacetime(const SpaceTimeDiagram& d, const NCASpec& a);

// All admissible diagrams of the given height sharing the bottom row (padding as in verify).
std::vector<SpaceTimeDiagram> admissible_diagrams(const ShiftSpec& sft, Letter pad, const std::vector<Letter>& bottom,
                                                  int height, std::size_t max_results = 1000, int pad_width = 1);
Letter pad_letter(const TMSpec& m);
Letter pad_letter(const TwoHeadTMSpec& m);
Letter pad_letter(const NCASpec& a);
inline int pad_width(const TMSpec&) { return 2; }
inline int pad_width(const TwoHeadTMSpec&) { return 1; }
inline int pad_width(const NCASpec&) { return 1; }

namespace machines {
TMSpec noop();
TMSpec unary_successor();  // appends a 1 to a block of 1s
TMSpec binary_increment();  // head starts on the least significant (rightmost) bit
TMSpec random_tm(std::mt19937_64& rng, int states, int extra_symbols = 0);
TwoHeadTMSpec twohead_stationary();
// Head 2 reads a 3-bit block and head 1 writes it into its own zone, both moving right.
TwoHeadTMSpec twohead_copy();
NCASpec identity_ca();
NCASpec full_choice_ca();
NCASpec xor_ca();  // rule 90 style: new = left xor right
NCASpec random_nca(std::mt19937_64& rng, int letters, double branch_prob);
}  // namespace machines

}  // namespace symdyn
