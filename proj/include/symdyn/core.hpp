#pragma once
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace symdyn {

using Letter = int;
inline constexpr Letter kUnset = -1;

struct Pos {
    int x = 0, y = 0;
    // row-major order: y first, then x
    friend auto operator<=>(const Pos& a, const Pos& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
    friend bool operator==(const Pos&, const Pos&) = default;
};

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);
    static Alphabet numbered(int n);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(Letter a) const { return names_.at(a); }
    Letter id(const std::string& name) const;
    std::optional<Letter> find(const std::string& name) const;
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, Letter> ids_;
};

struct Cell {
    Pos p;
    Letter a;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell& l, const Cell& r) {
        if (auto c = l.p <=> r.p; c != 0) return c;
        return l.a <=> r.a;
    }
};

struct Box {
    int x0 = 0, y0 = 0, w = 0, h = 0;
    bool contains(Pos p) const { return p.x >= x0 && p.y >= y0 && p.x < x0 + w && p.y < y0 + h; }
};

// Finite partial map position -> letter, stored sorted in row-major order.
class Pattern {
public:
    Pattern() = default;
    explicit Pattern(std::vector<Cell> cells);
    // rows listed bottom row first; each row left to right
    static Pattern rect(int w, int h, const std::vector<Letter>& rowmajor, int x0 = 0, int y0 = 0);
    static Pattern word(const std::vector<Letter>& w) { return rect(static_cast<int>(w.size()), 1, w); }
    static Pattern constant(int w, int h, Letter a);

    void set(Pos p, Letter a);
    void erase(Pos p);
    std::optional<Letter> at(Pos p) const;
    bool has(Pos p) const { return at(p).has_value(); }

    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    Box bbox() const;
    bool is_rect() const;

    Pattern translated(int dx, int dy) const;
    Pattern normalized() const;  // bbox corner moved to (0,0)
    Pattern merged(const Pattern& other) const;  // other wins on overlap
    std::vector<Letter> letters() const;

    friend bool operator==(const Pattern&, const Pattern&) = default;
    friend auto operator<=>(const Pattern& a, const Pattern& b) { return a.cells_ <=> b.cells_; }

private:
    std::vector<Cell> cells_;
};

// Dense rectangular carrier; kUnset marks free cells. Coordinates absolute.
struct Grid {
    int x0 = 0, y0 = 0, w = 0, h = 0;
    std::vector<Letter> v;

    Grid() = default;
    Grid(int x0_, int y0_, int w_, int h_, Letter fill = kUnset)
        : x0(x0_), y0(y0_), w(w_), h(h_), v(static_cast<std::size_t>(w_) * h_, fill) {}
    static Grid from_pattern(const Pattern& p);
    static Grid around(const Pattern& p, int mx, int my);

    bool inside(int x, int y) const { return x >= x0 && y >= y0 && x < x0 + w && y < y0 + h; }
    Letter at(int x, int y) const { return inside(x, y) ? v[idx(x, y)] : kUnset; }
    Letter& ref(int x, int y) { return v[idx(x, y)]; }
    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y - y0) * w + (x - x0); }
    Pattern to_pattern() const;
    bool complete() const;
    void paste(const Pattern& p);
};

using Window = Grid;

// Forbids every placement of a w×h rectangle whose letters satisfy the predicate.
// Cells are passed bottom row first.
struct RectRule {
    int w = 1, h = 1;
    std::function<bool(const Letter*)> forbidden;
    std::string label;
};

struct ShiftSpec {
    Alphabet alphabet;
    int dim = 2;
    std::vector<Pattern> forbidden;  // normalized and deduplicated
    std::vector<RectRule> rules;
    std::function<std::optional<Pattern>(std::size_t)> generator;
    // Membership oracle for effective shifts: true when the assigned cells already contain a
    // forbidden pattern. Must be monotone under adding assignments.
    std::function<bool(const Grid&)> violates;
    std::string name;

    void add_forbidden(const Pattern& p);
    void normalize();
    bool finite_list() const { return !generator && !violates && rules.empty(); }
    int max_forbidden_side() const;
};

enum class Verdict { no, yes, inconclusive };
const char* to_string(Verdict v);

struct SearchLimits {
    std::size_t generator_budget = 64;
    std::uint64_t node_limit = 20'000'000;
    int threads = 1;
};

bool occurs(const Pattern& host, const Pattern& query);
std::vector<Pos> occurrences(const Pattern& host, const Pattern& query);

// Collects generator output (budget-bounded) together with the explicit list.
std::vector<Pattern> forbidden_list(const ShiftSpec& spec, std::size_t generator_budget);

bool locally_admissible(const Pattern& p, const ShiftSpec& spec, std::size_t generator_budget = 64);
bool locally_admissible(const Grid& g, const ShiftSpec& spec, std::size_t generator_budget = 64);

// Incremental checker used by every backtracking search in the library.
class Checker {
public:
    Checker(const ShiftSpec& spec, std::size_t generator_budget);
    // Violation among assigned cells whose row-major-last cell is (x,y).
    bool violation_at(const Grid& g, int x, int y) const;
    bool any_violation(const Grid& g) const;
    const ShiftSpec& spec() const { return *spec_; }

private:
    struct Compiled {
        std::vector<Pos> rel;  // offsets relative to the anchor (row-major-last cell)
        std::vector<Letter> letters;
    };
    const ShiftSpec* spec_;
    std::vector<Compiled> pats_;
};

enum class SearchStatus { done, stopped, limit };

// Fills every kUnset cell of g in row-major order, letters ascending; calls visit on each
// locally admissible completion. visit returns false to stop.
SearchStatus enumerate_completions(Grid g, const ShiftSpec& spec, const std::function<bool(const Grid&)>& visit,
                                   const SearchLimits& lim = {});

Verdict admissible_with_margin(const Pattern& p, const ShiftSpec& spec, int margin, const SearchLimits& lim = {});

struct CountInterval {
    std::uint64_t lo = 0, hi = 0;
    bool exact() const { return lo == hi; }
};

// Distinct n×n (or length-n in 1D) patterns that extend by margin.
CountInterval block_complexity(const ShiftSpec& spec, int n, int margin, const SearchLimits& lim = {});

// Standard examples
Alphabet binary_alphabet();  // 0 "white", 1 "black"
ShiftSpec full_shift(const Alphabet& a, int dim = 2);
ShiftSpec s1_shift(int dim);       // no two horizontally adjacent blacks
ShiftSpec s2_shift();  // 1D: blacks separated by an odd number of whites forbidden
ShiftSpec rectangle_shift();       // black rectangles on white; the four 3-black 2×2 corners forbidden
ShiftSpec checkerboard_shift();    // equal horizontal or vertical neighbours forbidden

}  // namespace symdyn
