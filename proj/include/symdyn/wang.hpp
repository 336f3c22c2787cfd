#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/core.hpp"

namespace symdyn {

struct WangTile {
    int n = 0, e = 0, s = 0, w = 0;
    friend auto operator<=>(const WangTile&, const WangTile&) = default;
};

struct WangTileSet {
    int num_colors = 0;
    std::vector<std::string> color_names;          // optional
    std::vector<std::vector<int>> color_payloads;  // optional bit strings, indexed by color id
    std::vector<WangTile> tiles;
    std::function<bool(const WangTile&)> predicate;  // optional membership oracle

    int add_tile(const WangTile& t);  // returns id, deduplicating
    void dedup();
    bool contains(const WangTile& t) const;
};

// Allowed colours per boundary edge; an empty list leaves that edge free.
struct Boundary {
    std::vector<std::vector<int>> south, north;  // size w
    std::vector<std::vector<int>> west, east;    // size h
    static Boundary free(int w, int h);
    static Boundary of(const WangTileSet& ts, int w, int h, const std::vector<int>& tiling);
};

struct Tiling {
    int w = 0, h = 0;
    std::vector<int> t;  // tile ids, bottom row first
    int at(int x, int y) const { return t[static_cast<std::size_t>(y) * w + x]; }
    friend bool operator==(const Tiling&, const Tiling&) = default;
};

enum class TileMode { first, count, enumerate };

struct TileResult {
    std::vector<Tiling> tilings;
    std::uint64_t count = 0;
    bool limit_hit = false;
};

struct TileLimits {
    std::uint64_t max_cells = 1'000'000;
    std::uint64_t node_limit = 200'000'000;
    std::size_t max_results = 1'000'000;
};

TileResult tile_rectangle(const WangTileSet& ts, int w, int h, const Boundary* boundary, TileMode mode,
                          const TileLimits& lim = {});

bool tiling_valid(const WangTileSet& ts, const Tiling& t, const Boundary* boundary = nullptr);

struct SftToWang {
    bool empty_shift = false;
    int c = 1;
    WangTileSet tiles;
    std::vector<Letter> letter_of_tile;  // bottom-left letter
    std::vector<Pattern> tile_square;    // the (c+1)×(c+1) square behind each tile
};

SftToWang sft_to_wang(const ShiftSpec& spec, const SearchLimits& lim = {});
ShiftSpec wang_to_sft(const WangTileSet& ts);

Pattern project_tiling(const Tiling& t, const std::vector<Letter>& letter_of_tile);

}  // namespace symdyn
