#pragma once
#include <string>

#include "json.hpp"
#include "symdyn/compile.hpp"
#include "symdyn/core.hpp"
#include "symdyn/fixpoint.hpp"
#include "symdyn/flow.hpp"
#include "symdyn/hierarchy.hpp"
#include "symdyn/sparse.hpp"
#include "symdyn/wang.hpp"

namespace symdyn::io {

using json = nlohmann::json;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Patterns are lists of [x, y, letter-name].
json to_json(const Pattern& p, const Alphabet& a);
Pattern pattern_from_json(const json& j, const Alphabet& a);

// {"name", "dim", "alphabet": [names], "forbidden": [pattern...]} or {"builtin": name}.
// Shifts given by rules or generators serialize only under their builtin name.
ShiftSpec builtin_shift(const std::string& name);
std::vector<std::string> builtin_shift_names();
json to_json(const ShiftSpec& s);
ShiftSpec shift_from_json(const json& j);
// Compiled shifts keep their source: {"name", "dim", "alphabet", "compiled_from": {"kind", "machine"}}.
json compiled_shift(const TMSpec& m);
json compiled_shift(const TwoHeadTMSpec& m);
json compiled_shift(const NCASpec& a);
// Rectangle rules written out as forbidden windows; throws FormatError past max_windows candidates.
json expanded_shift(const ShiftSpec& s, std::uint64_t max_windows = 1u << 22);

// {"num_colors", "colors": [names]?, "tiles": [[n, e, s, w], ...]}
json to_json(const WangTileSet& ts);
WangTileSet tileset_from_json(const json& j);
json to_json(const Tiling& t);  // {"w", "h", "tiles": rows bottom first}

// {"N", "rho", "src_cap": [N² entries], "sinks": [vertex ids]}
json to_json(const SuperTileFlowGraph& g);
SuperTileFlowGraph graph_from_json(const json& j);
json to_json(const SuperTileFlowGraph& g, const Flow& f);
json to_json(const Decomposition& d);
json to_json(const Routing& r);

// TM: {"symbols", "num_states", "start", "halt", "delta": [[next, write, move], ...]}, move in {-1, 0, 1}.
json to_json(const TMSpec& m);
TMSpec tm_from_json(const json& j);
// Two-head: delta entries [next, write1, write2, move1, move2].
json to_json(const TwoHeadTMSpec& m);
TwoHeadTMSpec twohead_from_json(const json& j);
// NCA: {"letters", "f": [[options...], ...], "error", "boundary"}
json to_json(const NCASpec& a);
NCASpec nca_from_json(const json& j);

json to_json(const sparse::SparseConfig& c);
sparse::SparseConfig sparse_config_from_json(const json& j);
json to_json(const sparse::LevelAssembly& a);
json to_json(const sparse::VerifyReport& r);

json to_json(const kolm::BitMatrix& m);  // rows as "0101" strings, row 0 first

json to_json(const fix::SimGeometry& g);

// Renderers.
std::string svg_tiling(const WangTileSet& ts, const Tiling& t, int cell = 24);
// Letters 0/1/2 drawn white/black/red, others from a fixed palette; `outline` cells get a blue frame.
std::string svg_pattern(const Pattern& p, const Pattern* outline = nullptr, int cell = 16);
std::string svg_arrows(const sparse::LevelAssembly& a, int cell = 48);
std::string svg_roles(const fix::SimGeometry& g, int cell = 8);
std::string ppm(const SpaceTimeDiagram& d, int num_letters);  // P3, latest time step on top
std::string dot(const SuperTileFlowGraph& g, const Flow* f = nullptr);

}  // namespace symdyn::io
