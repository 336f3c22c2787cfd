#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "symdyn/core.hpp"
#include "symdyn/ncavm.hpp"

namespace symdyn::sparse {

struct Rational {
    long long num = 1, den = 2;
    long double value() const { return static_cast<long double>(num) / den; }
};

struct Level {
    int N = 1;     // tile side in cells
    int rank = 1;  // rank of the forbidden patterns checked at this level
};

struct DensitySpec {
    std::vector<Rational> eps_upper{{1, 2}};  // non-increasing upper bounds of ε
    int index = 0;                            // which bound is in force
    long double C = 64;                       // asymptotic schedule N_k = 2^{C^k}
    std::vector<Level> schedule;              // explicit desk schedule; overrides the asymptotic one
    int chunk_bits = 6;                       // field-4 bits a child carries for its mother's field 5

    Rational eps() const;
    void validate() const;
};
DensitySpec desk_spec();  // ε = 1/2; N = 4, 16, 64; ranks 16, 32, 64

struct SparsePattern {
    int n = 0;
    std::vector<Pos> blacks;  // sorted by (y, x), inside [0,n)²
    friend bool operator==(const SparsePattern&, const SparsePattern&) = default;
};
bool is_forbidden_density(const SparsePattern& p, const DensitySpec& spec);
bool is_forbidden_density(int n, int blacks, const DensitySpec& spec);

// Step s ↦ s-th forbidden pattern: sides ascending, black counts ascending from ⌊n^ε̂⌋+1,
// black sets in lexicographic order of row-major cell indices.
using Enumerator = std::function<std::optional<SparsePattern>(std::uint64_t step)>;
Enumerator density_enumerator(const DensitySpec& spec);

int ell(int k);  // ⌊log₂ k⌋, 0 for k ≤ 1
std::vector<SparsePattern> forbidden_rank(int k, const Enumerator& e);

struct Placement {
    int pattern = -1;  // index into the rank list
    Pos offset;        // where M's (0,0) lands in zone coordinates
};
struct ResponsibilityResult {
    bool ok = true;
    std::optional<Placement> witness;
};
ResponsibilityResult check_responsibility(const std::vector<Pos>& points, int zone, const std::vector<SparsePattern>& rank_list);

struct SparseConfig {
    int W = 0;  // window [0,W)²; cells outside are white
    std::vector<Pos> points;
    void validate() const;
};
// Every n×n window of the config (n ≤ W) passes the density test.
bool density_admissible(const SparseConfig& c, const DensitySpec& spec);
SparseConfig random_config(const DensitySpec& spec, int W, double fill, std::uint64_t seed);

struct FlowEntry {
    Pos p;  // mother coordinates
    int arrow = 0;
    friend bool operator==(const FlowEntry&, const FlowEntry&) = default;
};

// Fields carried by every side's super-color.
struct SideFields {
    std::vector<Pos> f5;         // own black points, tile coordinates
    std::vector<FlowEntry> f6;   // flow entries
    std::string f7;              // residual bit chain
    std::vector<Pos> f8;         // black points of the 2×2 responsibility block
    friend bool operator==(const SideFields&, const SideFields&) = default;
};

struct SuperTileFields {
    std::string f1 = "sparse";  // program code, opaque
    int f2 = 0;                 // rank
    Pos f3;                     // position in the mother
    std::string f4;             // chunk of the mother's field 5
    std::array<SideFields, 4> side;
    const SideFields& fields() const { return side[0]; }
};

struct LevelAssembly {
    int level = 0;
    int N = 1;            // tile side in cells
    int n_mother = 0;     // children per mother side; 0 at the top level
    int chunk_bits = 6;
    int cols = 0, rows = 0;
    std::vector<SuperTileFields> tiles;  // row-major
    const SuperTileFields& at(int x, int y) const { return tiles[static_cast<std::size_t>(y) * cols + x]; }
    SuperTileFields& ref(int x, int y) { return tiles[static_cast<std::size_t>(y) * cols + x]; }
    bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < cols && y < rows; }
};

// Serpentine by columns: column 0 upward, column 1 downward, ...; the first n cells form the left edge.
std::vector<Pos> field5_zone(int n);
int coord_bits(int N);  // bits per coordinate in [0, N-1]
std::string encode_point(Pos p, int N);
Pos decode_point(const std::string& bits, int N);

struct Synthesis {
    Pos offset;  // grid origin sits at -offset in config coordinates
    std::vector<LevelAssembly> levels;
};
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
Synthesis synthesize_fields(const SparseConfig& c, const DensitySpec& spec, Pos offset = {0, 0});

struct Witness {
    char prop = '?';  // 'C', 'D', 'E', 'F', 'G'
    std::string what;
    Pos tile{-1, -1};
    std::optional<Placement> placement;
};
struct VerifyReport {
    bool C = true, D = true, E = true, F = true, G = true;
    std::vector<Witness> witnesses;
    bool ok() const { return C && D && E && F && G; }
};
VerifyReport verify_all(const LevelAssembly& a, const DensitySpec& spec, const Enumerator& e);

// Mother field 5 (decoded from the children's chunks) against the children's own points.
struct InfoFlowReport {
    bool ok = true;
    std::string what;
};
InfoFlowReport info_flow_check(const LevelAssembly& children, const LevelAssembly& mothers);
// 2×2 block of level-k tiles (bottom-left tile) covering the window; nullopt if the side exceeds N.
std::optional<Pos> covering_block(const LevelAssembly& a, Pos window_origin, int side);

// Closed transit loop around the square of children with bottom-left (x, y); returns the tiles touched.
std::vector<Pos> inject_parasite_loop(LevelAssembly& a, int x, int y, Pos fake_point, bool with_initial = false);

struct ParameterReport {
    bool ok = true;
    int first_failing_level = -1;
    std::string failing_inequality;
    std::vector<std::array<long double, 3>> slack;  // log₂ LHS − log₂ RHS per level and inequality
};
inline constexpr long double kC1 = 16, kC2 = 64;  // measured super-color bits per point entry, responsibility-check steps
ParameterReport parameter_check(const DensitySpec& spec, int levels = 3);
// Largest bits of fields 5-8 on one side divided by N_k^ε·log₂ N_{k+1}, over a synthesis.
long double measured_c1(const Synthesis& s, const DensitySpec& spec);

// Literal tape encoding of one side's fields (delimited) and back.
std::vector<vm::FieldInput> encode_side(const SuperTileFields& t, int side, int N, int N_mother);
SideFields decode_side(const std::vector<vm::FieldInput>& f, int N, int N_mother);

}  // namespace symdyn::sparse
