#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symdyn/core.hpp"

namespace symdyn::kolm {

// Bit strings are std::string over '0'/'1'.
using Bits = std::string;

// Toy decompressor. A program is a prefix-free bit string: a sequence of instructions ending with
// HALT at nesting depth 0. Numbers k ≥ 1 are Elias-gamma coded.
//
//   00            EMIT0        append 0
//   01            EMIT1        append 1
//   100           HALT
//   101 γ(k)      COPY k       append the last k output bits
//   1100 γ(n)     LOOP n       run the body up to the matching END n times
//   1101          END
//   11100 γ(k)    INV k        append the inversion of the last k bits
//   11101 γ(k)    REV k        append the last k bits reversed
//   11110 γ(s)    SAMPLE s     output is a square of side m; keep cells with x, y ≡ 0 mod s
//   111110        NOT          invert the whole output
//   1111110 γ(n)  ZEROS n      append n zeros
//   1111111 γ(n)  ONES n       append n ones
//
// Cost: one step per executed instruction (END counts on every pass) plus one per output bit
// written; SAMPLE and NOT also pay one step per cell of the current output.
// Run-time errors (COPY past the start, SAMPLE of a non-square) make the program fail.
enum class Op : std::uint8_t { emit0, emit1, halt, copy, loop, end, inv, rev, sample, bnot, zeros, ones };

struct Instr {
    Op op;
    int arg = 0;
    int match = -1;  // LOOP ↔ END partner
};

struct Program {
    std::vector<Instr> code;
    int bits = 0;  // encoded length
};

Bits gamma_code(int k);
Bits encode(const std::vector<Instr>& code);
// Parses a complete program; nullopt when bits is not exactly one program.
std::optional<Program> parse(const Bits& bits);

struct RunResult {
    enum Status { halted, timeout, failed } status = failed;
    Bits out;
    std::uint64_t steps = 0;
};
// stop_unless_prefix: abort as soon as the output stops being a prefix of this string
// (only sound for programs without SAMPLE/NOT; callers check).
RunResult run(const Program& p, std::uint64_t max_steps, const Bits* stop_unless_prefix = nullptr);
RunResult run(const Bits& program, std::uint64_t max_steps);

inline constexpr int kEmptyStringComplexity = 3;  // the lone HALT
inline constexpr int kMaxEnumerationBits = 32;

// Every program of length ≤ max_len (or exactly max_len), in lexicographic order of bits.
void enumerate_programs(int max_len, bool exact, const std::function<void(const Bits&, const Program&)>& visit);

struct KResult {
    std::optional<int> length;  // nullopt: no program of length ≤ max_len
    Bits program;
};
KResult time_bounded_K(const Bits& x, std::uint64_t t, int max_len);

struct BitMatrix {
    int w = 0, h = 0;
    std::vector<std::uint8_t> v;  // row-major, row 0 first
    BitMatrix() = default;
    BitMatrix(int w_, int h_, std::uint8_t fill = 0) : w(w_), h(h_), v(static_cast<std::size_t>(w_) * h_, fill) {}
    std::uint8_t at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
    std::uint8_t& ref(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
    Bits bits() const;
    static BitMatrix from_bits(const Bits& b, int w);
    BitMatrix inverted() const;
    BitMatrix crop(int x0, int y0, int cw, int ch) const;
    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;
};

// Distinct outputs of exactly out_len bits produced by programs shorter than max_bits within t steps.
std::vector<Bits> short_outputs(int out_len, std::uint64_t t, int max_bits);
// Lexicographically first n×n matrix (row-major bits) with C^t ≥ theta.
BitMatrix first_incompressible_matrix(int n, std::uint64_t t, int theta);

struct HierarchyParams {
    int n0 = 2;
    int c = 3;
    int levels = 1;
    std::vector<int> theta;          // per level i ≥ 1; empty entries default to n_i²
    std::uint64_t t_prime = 600;     // budget for the Q-level check
    int n(int i) const;              // n_i
    int N(int i) const;              // N_i = n_0·…·n_i
    int theta_of(int i) const;
    std::uint64_t recovery_cost(int i) const;  // steps of SAMPLE + NOT on a level-i pattern
    std::uint64_t t(int i) const;    // 4·(t' + recovery)
};

struct StandardPatternFamily {
    HierarchyParams params;
    std::vector<BitMatrix> R;                   // R[i] for i ≥ 1; R[0] unused
    std::vector<std::array<BitMatrix, 2>> Q;    // Q[i][j]
};
StandardPatternFamily build_family(const HierarchyParams& params);
StandardPatternFamily build_family(const HierarchyParams& params, const std::vector<BitMatrix>& R);

// Bits of the wrapper that turns a program for Q_i^j into one for R_i: SAMPLE N_{i-1}, plus NOT for j = 1.
int recovery_overhead(const HierarchyParams& p, int i, int j);
Bits recovery_suffix(const HierarchyParams& p, int i, int j);  // inserted before the final HALT

// Whether every 2×2 block appears in m.
bool contains_all_2x2(const BitMatrix& m);

struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Window of side N_i cut at offset from the 2N_i×2N_i block with quadrants (bottom-left,
// bottom-right, top-left, top-right) = Q_i^{ids[k]}.
BitMatrix cut_window(const StandardPatternFamily& f, int i, int ox, int oy, const std::array<int, 4>& ids);
BitMatrix reconstruct_standard(const StandardPatternFamily& f, int i, const BitMatrix& window, int ox, int oy,
                               const std::array<int, 4>& ids);
bool is_standard_structure(const StandardPatternFamily& f, int i, const BitMatrix& m);

// Distinct n×n windows of all 2×2 arrangements of level-i standard patterns.
std::uint64_t closure_block_count(const StandardPatternFamily& f, int i, int n);
struct Envelope {
    double A = 0, B = 0;
    bool fits = false;
};
// Least-squares log-log fit over n ≥ 2, A raised until every point fits.
Envelope fit_polynomial_envelope(const std::vector<std::uint64_t>& counts);

// Deterministic coloring of a (2^k+1)-square given its border; sft must have nearest-neighbour
// constraints only. Border lists the boundary cells counter-clockwise from (0,0).
struct ColoringError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
std::vector<Pos> border_cells(int side);
Pattern recursive_coloring(const ShiftSpec& sft, int k, const std::vector<Letter>& border, const SearchLimits& lim = {});
std::vector<Letter> border_of(const Pattern& square, int x0, int y0, int side);
// Border letters picked cell by cell in a seeded random order of letters, keeping the square completable.
std::vector<Letter> random_extendable_border(const ShiftSpec& sft, int k, std::uint64_t seed, const SearchLimits& lim = {});
// Re-derives every n×n sub-square from its ≤ 4 covering standard squares; returns the number checked
// or throws on mismatch.
std::uint64_t verify_description(const ShiftSpec& sft, const Pattern& coloring, int k, int n, const SearchLimits& lim = {});

struct BusyBeaver {
    std::optional<Bits> program;
    std::uint64_t steps = 0;
};
BusyBeaver busy_beaver_program(int m, std::uint64_t t_max);

}  // namespace symdyn::kolm
