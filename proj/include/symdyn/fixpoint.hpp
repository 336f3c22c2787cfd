#pragma once
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symdyn/core.hpp"
#include "symdyn/wang.hpp"

namespace symdyn::fix {

struct SizingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Layout of one N×N super-tile. The computation zone occupies x ∈ [0, l), y ∈ [2q, 2q + h);
// its bottom row holds the program literal in [0, lit) and the 4q cable-fed cells in [l - 4q, l).
// Cables use the bottom strip (2q rows), the top strip and the right strip (N - l columns).
struct SimGeometry {
    int N = 0, q = 0;
    int l = 0;                    // zone width, default N - q
    int hI = 0, hU = -1, hA = -1; // band heights, default 4q, q, 8q
    int lit = 0;                  // literal (memory) width, default N - 6q

    static SimGeometry standard(int N);  // requires N % 16 == 0
    int h() const { return hI + hU + hA; }
    int y0() const { return 2 * q; }
    int fed0() const { return l - 4 * q; }
    void validate() const;                         // throws SizingError naming the violated budget
    std::vector<std::string> regime_deviations() const;  // ratios that differ from the standard layout
};

enum class RoleKind { carrier, cable, i_diagram, u_diagram, a_diagram, interface_row, literal, block };
enum class CableKind { none, horizontal, vertical, corner_ne, corner_nw, corner_se, corner_sw };
const char* role_name(RoleKind k);
const char* cable_name(CableKind k);

struct CellRole {
    RoleKind kind = RoleKind::block;
    int side = -1, index = -1;  // carriers and cables: super-color side (flow side ids) and bit index
    CableKind cable = CableKind::none;
    int in_side = -1, out_side = -1;  // carriers and cables: where the bit enters and leaves
    friend bool operator==(const CellRole&, const CellRole&) = default;
};
// Closed form; (i, j) = (column, row) with row 0 at the bottom.
CellRole classify_cell(int i, int j, const SimGeometry& g);

// Cells of the cable carrying bit `index` of side `side`, carrier first, last cell feeding the zone.
std::vector<Pos> cable_path(const SimGeometry& g, int side, int index);
int fed_column(const SimGeometry& g, int side, int index);

// Zone alphabets.
enum Prog : int { pBlank = 0, pHash = 1, pZero = 2, pOne = 3 };
enum Word : int { wE = 0, wB0 = 1, wB1 = 2, wH0 = 3, wH1 = 4 };
enum Sweep : int { sN = 0, sNHash = 1, sC = 2, sM = 3 };

// Colour ids: ((dir·N + x)·N + y)·kPayloads + payload, dir 0 for vertical edges, 1 for horizontal.
inline constexpr int kPayloads = 41;
struct EdgeColor {
    bool horizontal = false;
    int x = 0, y = 0, payload = 0;
};
EdgeColor decode_color(int c, int N);
int encode_color(const EdgeColor& e, int N);

struct Simulation {
    SimGeometry geom;
    WangTileSet rho;               // explicit tiles
    int colour_bits = 1;           // q′: bits per ρ colour
    std::vector<int> program;      // Prog symbols: # w(t0) # w(t1) # ...
    WangTileSet tau;               // explicit list plus decoding membership predicate

    int prog_at(int x) const { return x < static_cast<int>(program.size()) ? program[x] : pBlank; }
    // 4q-bit word of a ρ tile in fed-cell order.
    std::vector<int> word_of(const WangTile& t) const;
    bool member(const WangTile& t) const;  // decodes the quadruple, no table lookup
};

// Tightest layout that still hosts ρ: q = colour bits, literal = program, zone height = time to the first entry.
SimGeometry smallest_geometry(const WangTileSet& rho);

// geom.N == 0 picks SimGeometry::standard(N).
Simulation simulate_tileset(const WangTileSet& rho, int N, const SimGeometry& geom = {});

// Reference assembly of the super-tile for ρ tile `t`: N×N tile quadruples, row-major from the bottom.
std::vector<WangTile> assemble(const Simulation& s, const WangTile& t);
Tiling to_ids(const Simulation& s, const std::vector<WangTile>& cells);
// Boundary of a super-tile whose sides carry the given ρ colours (any q-bit values).
Boundary supertile_boundary(const Simulation& s, const WangTile& supercolors);

// φ: super-colours read off the carriers; nullopt if they are not a ρ tile.
WangTile read_supercolors(const Simulation& s, const std::vector<WangTile>& cells);
std::optional<WangTile> phi(const Simulation& s, const std::vector<WangTile>& cells);

struct SupertileCheck {
    bool ok = true;
    std::string failed;  // coordinates, matching, cable, literal, diagram, accept
    Pos where{-1, -1};
};
SupertileCheck verify_supertile(const Simulation& s, const std::vector<WangTile>& cells);
SupertileCheck verify_supertile(const Simulation& s, const Tiling& t);

// Bits of all cable-fed cells (their south payloads) and of all carriers, in fed order.
std::vector<int> fed_bits(const Simulation& s, const std::vector<WangTile>& cells);
std::vector<int> carrier_bits(const Simulation& s, const std::vector<WangTile>& cells);

// Variable zoom: N_k = 2^(k+5), q_k = N_k / 16.
struct LevelLayout {
    int k = 0, N = 0, q = 0;
    int program_bits = 0, rank_bits = 0, coord_bits = 0, payload_bits = 0;
    bool fits = false;  // payload fits in q_k bits per side
};
LevelLayout variable_zoom_schedule(int k, int program_bits);
struct LevelFields {
    std::vector<int> program, rank, payload;
    friend bool operator==(const LevelFields&, const LevelFields&) = default;
};
// Pairs (1, b) for data, (0, 1) closing each field.
std::vector<int> encode_level_fields(const LevelFields& f);
LevelFields decode_level_fields(const std::vector<int>& tape);  // throws std::invalid_argument
std::vector<int> binary(int k);  // most significant bit first, "0" for k = 0

}  // namespace symdyn::fix
