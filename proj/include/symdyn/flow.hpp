#pragma once
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace symdyn {

// Sides of a grid vertex / child tile. U is +y.
enum Side : int { kLeft = 0, kUp = 1, kRight = 2, kDown = 3 };
inline int opposite(int side) { return (side + 2) % 4; }
inline constexpr int kDX[4] = {-1, 0, 1, 0};
inline constexpr int kDY[4] = {0, 1, 0, -1};

struct SuperTileFlowGraph {
    int N = 1, rho = 1;
    std::vector<int> src_cap;  // per vertex y·N+x, 0 = no source arc
    std::vector<int> sinks;    // multiset of vertices, one unit arc each

    static SuperTileFlowGraph empty(int N, int rho);
    int F() const;
    int source() const { return N * N; }
    int sink() const { return N * N + 1; }
    int vid(int x, int y) const { return y * N + x; }
};

struct Arc {
    int from = 0, to = 0, cap = 0;
};

// Deterministic arc list: grid arcs (per vertex, sides L,U,R,D), then source arcs, then sink arcs
// aggregated per vertex.
std::vector<Arc> arcs_of(const SuperTileFlowGraph& g);

struct Violation {
    std::string what;
    int c = 0, x = 0, y = 0;
    long long value = 0, bound = 0;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

ValidationReport validate(const SuperTileFlowGraph& g);

struct Flow {
    std::vector<int> f;  // per arc of arcs_of(g)
    int value = 0;
};

bool flow_valid(const SuperTileFlowGraph& g, const Flow& f);
Flow max_flow(const SuperTileFlowGraph& g);  // shortest augmenting paths

struct CutReport {
    int F = 0;
    long long source_cut = 0, sink_cut = 0;
    std::optional<long long> exhaustive_min;  // N <= 3
    std::uint64_t cuts_checked = 0;
};

// Cut value for source side {s} ∪ X, X given as a bitmask over grid vertices (N ≤ 5).
long long cut_value(const SuperTileFlowGraph& g, std::uint64_t mask);
CutReport min_cut_check(const SuperTileFlowGraph& g);
// 4-connected components of a vertex mask
std::vector<std::uint64_t> components(int N, std::uint64_t mask);

struct Decomposition {
    std::vector<std::vector<int>> paths;   // arc ids, s to p
    std::vector<std::vector<int>> cycles;  // arc ids
};

Decomposition decompose(const SuperTileFlowGraph& g, const Flow& f);
std::vector<int> reconstruct(const SuperTileFlowGraph& g, const Decomposition& d);
bool elementary(const SuperTileFlowGraph& g, const std::vector<int>& arc_path);

// Field-6 arrow ids: 1..4 leave via L,U,R,D; 5..16 transit (in, out); 17..20 arrive via L,U,R,D;
// 0 marks a commodity produced at its own slot.
int arrow_out(int side);
int arrow_in(int side);
int arrow_transit(int in_side, int out_side);
struct ArrowInfo {
    int in_side = -1, out_side = -1;
};
ArrowInfo arrow_decode(int id);

struct RouteEntry {
    int commodity = 0;
    int arrow = 0;
};

struct Commodity {
    int producer = 0, slot = 0;
    std::vector<int> vertices;  // producer ... slot
};

struct Routing {
    bool ok = false;
    std::string error;
    std::vector<Commodity> commodities;           // one per produced unit, in slot order
    std::vector<std::vector<RouteEntry>> tables;  // per child vertex
};

Routing route_points(int N, int rho, const std::vector<int>& production, const std::vector<int>& slots);

SuperTileFlowGraph random_valid_graph(std::mt19937_64& rng, int N, int rho);

}  // namespace symdyn
