#include "symdyn/core.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace symdyn {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw std::invalid_argument("alphabet must be non-empty");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!ids_.emplace(names_[i], static_cast<Letter>(i)).second)
            throw std::invalid_argument("duplicate letter name: " + names_[i]);
    }
}

Alphabet Alphabet::numbered(int n) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(std::to_string(i));
    return Alphabet(std::move(v));
}

Letter Alphabet::id(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) throw std::out_of_range("unknown letter: " + name);
    return it->second;
}

std::optional<Letter> Alphabet::find(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

Pattern::Pattern(std::vector<Cell> cells) : cells_(std::move(cells)) {
    std::stable_sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) { return a.p < b.p; });
    // keep the last assignment for repeated positions
    std::vector<Cell> out;
    for (auto& c : cells_) {
        if (!out.empty() && out.back().p == c.p) out.back() = c;
        else out.push_back(c);
    }
    cells_ = std::move(out);
}

Pattern Pattern::rect(int w, int h, const std::vector<Letter>& rowmajor, int x0, int y0) {
    if (rowmajor.size() != static_cast<std::size_t>(w) * h) throw std::invalid_argument("rect: size mismatch");
    std::vector<Cell> c;
    c.reserve(rowmajor.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) c.push_back({{x0 + x, y0 + y}, rowmajor[static_cast<std::size_t>(y) * w + x]});
    Pattern p;
    p.cells_ = std::move(c);
    return p;
}

Pattern Pattern::constant(int w, int h, Letter a) {
    return rect(w, h, std::vector<Letter>(static_cast<std::size_t>(w) * h, a));
}

void Pattern::set(Pos p, Letter a) {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), p, [](const Cell& c, Pos q) { return c.p < q; });
    if (it != cells_.end() && it->p == p) it->a = a;
    else cells_.insert(it, Cell{p, a});
}

void Pattern::erase(Pos p) {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), p, [](const Cell& c, Pos q) { return c.p < q; });
    if (it != cells_.end() && it->p == p) cells_.erase(it);
}

std::optional<Letter> Pattern::at(Pos p) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), p, [](const Cell& c, Pos q) { return c.p < q; });
    if (it != cells_.end() && it->p == p) return it->a;
    return std::nullopt;
}

Box Pattern::bbox() const {
    if (cells_.empty()) return {};
    int x0 = cells_[0].p.x, x1 = x0, y0 = cells_.front().p.y, y1 = cells_.back().p.y;
    for (auto& c : cells_) {
        x0 = std::min(x0, c.p.x);
        x1 = std::max(x1, c.p.x);
    }
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

bool Pattern::is_rect() const {
    auto b = bbox();
    return static_cast<std::size_t>(b.w) * b.h == cells_.size();
}

Pattern Pattern::translated(int dx, int dy) const {
    Pattern p = *this;
    for (auto& c : p.cells_) c.p = {c.p.x + dx, c.p.y + dy};
    return p;
}

Pattern Pattern::normalized() const {
    auto b = bbox();
    return translated(-b.x0, -b.y0);
}

Pattern Pattern::merged(const Pattern& other) const {
    std::vector<Cell> c = cells_;
    c.insert(c.end(), other.cells_.begin(), other.cells_.end());
    return Pattern(std::move(c));
}

std::vector<Letter> Pattern::letters() const {
    std::vector<Letter> v;
    for (auto& c : cells_) v.push_back(c.a);
    return v;
}

Grid Grid::from_pattern(const Pattern& p) {
    auto b = p.bbox();
    Grid g(b.x0, b.y0, b.w, b.h);
    g.paste(p);
    return g;
}

Grid Grid::around(const Pattern& p, int mx, int my) {
    auto b = p.bbox();
    Grid g(b.x0 - mx, b.y0 - my, b.w + 2 * mx, b.h + 2 * my);
    g.paste(p);
    return g;
}

Pattern Grid::to_pattern() const {
    std::vector<Cell> c;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            Letter a = v[static_cast<std::size_t>(y) * w + x];
            if (a != kUnset) c.push_back({{x0 + x, y0 + y}, a});
        }
    return Pattern(std::move(c));
}

bool Grid::complete() const {
    return std::none_of(v.begin(), v.end(), [](Letter a) { return a == kUnset; });
}

void Grid::paste(const Pattern& p) {
    for (auto& c : p.cells())
        if (inside(c.p.x, c.p.y)) ref(c.p.x, c.p.y) = c.a;
}

void ShiftSpec::add_forbidden(const Pattern& p) {
    auto n = p.normalized();
    if (std::find(forbidden.begin(), forbidden.end(), n) == forbidden.end()) forbidden.push_back(n);
}

void ShiftSpec::normalize() {
    for (auto& f : forbidden) f = f.normalized();
    std::sort(forbidden.begin(), forbidden.end());
    forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
}

int ShiftSpec::max_forbidden_side() const {
    int c = 1;
    for (auto& f : forbidden) {
        auto b = f.bbox();
        c = std::max({c, b.w, b.h});
    }
    for (auto& r : rules) c = std::max({c, r.w, r.h});
    return c;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::no: return "no";
        case Verdict::yes: return "yes";
        default: return "inconclusive";
    }
}

std::vector<Pos> occurrences(const Pattern& host, const Pattern& query) {
    std::vector<Pos> out;
    if (query.empty()) return out;
    const Cell& q0 = query.cells().front();
    for (auto& h : host.cells()) {
        if (h.a != q0.a) continue;
        int dx = h.p.x - q0.p.x, dy = h.p.y - q0.p.y;
        bool ok = true;
        for (auto& q : query.cells()) {
            auto a = host.at({q.p.x + dx, q.p.y + dy});
            if (!a || *a != q.a) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back({dx, dy});
    }
    return out;
}

bool occurs(const Pattern& host, const Pattern& query) {
    if (query.empty()) return true;
    return !occurrences(host, query).empty();
}

std::vector<Pattern> forbidden_list(const ShiftSpec& spec, std::size_t budget) {
    std::vector<Pattern> v = spec.forbidden;
    if (spec.generator) {
        for (std::size_t i = 0; i < budget; ++i) {
            auto p = spec.generator(i);
            if (!p) break;
            v.push_back(p->normalized());
        }
    }
    return v;
}

Checker::Checker(const ShiftSpec& spec, std::size_t budget) : spec_(&spec) {
    for (auto& f : forbidden_list(spec, budget)) {
        if (f.empty()) continue;
        Compiled c;
        Pos anchor = f.cells().back().p;
        for (auto& cell : f.cells()) {
            c.rel.push_back({cell.p.x - anchor.x, cell.p.y - anchor.y});
            c.letters.push_back(cell.a);
        }
        pats_.push_back(std::move(c));
    }
}

bool Checker::violation_at(const Grid& g, int x, int y) const {
    for (auto& c : pats_) {
        bool hit = true;
        for (std::size_t k = 0; k < c.rel.size(); ++k) {
            if (g.at(x + c.rel[k].x, y + c.rel[k].y) != c.letters[k]) {
                hit = false;
                break;
            }
        }
        if (hit) return true;
    }
    if (!spec_->rules.empty()) {
        std::vector<Letter> buf;
        for (auto& r : spec_->rules) {
            int bx = x - r.w + 1, by = y - r.h + 1;
            if (bx < g.x0 || by < g.y0) continue;
            buf.assign(static_cast<std::size_t>(r.w) * r.h, kUnset);
            bool full = true;
            for (int j = 0; j < r.h && full; ++j)
                for (int i = 0; i < r.w; ++i) {
                    Letter a = g.at(bx + i, by + j);
                    if (a == kUnset) {
                        full = false;
                        break;
                    }
                    buf[static_cast<std::size_t>(j) * r.w + i] = a;
                }
            if (full && r.forbidden(buf.data())) return true;
        }
    }
    if (spec_->violates && spec_->violates(g)) return true;
    return false;
}

bool Checker::any_violation(const Grid& g) const {
    for (int y = g.y0; y < g.y0 + g.h; ++y)
        for (int x = g.x0; x < g.x0 + g.w; ++x)
            if (g.at(x, y) != kUnset) {
                for (auto& c : pats_) {
                    bool hit = true;
                    for (std::size_t k = 0; k < c.rel.size(); ++k)
                        if (g.at(x + c.rel[k].x, y + c.rel[k].y) != c.letters[k]) {
                            hit = false;
                            break;
                        }
                    if (hit) return true;
                }
            }
    if (!spec_->rules.empty()) {
        std::vector<Letter> buf;
        for (auto& r : spec_->rules)
            for (int by = g.y0; by + r.h <= g.y0 + g.h; ++by)
                for (int bx = g.x0; bx + r.w <= g.x0 + g.w; ++bx) {
                    buf.assign(static_cast<std::size_t>(r.w) * r.h, kUnset);
                    bool full = true;
                    for (int j = 0; j < r.h && full; ++j)
                        for (int i = 0; i < r.w; ++i) {
                            Letter a = g.at(bx + i, by + j);
                            if (a == kUnset) {
                                full = false;
                                break;
                            }
                            buf[static_cast<std::size_t>(j) * r.w + i] = a;
                        }
                    if (full && r.forbidden(buf.data())) return true;
                }
    }
    return spec_->violates && spec_->violates(g);
}

bool locally_admissible(const Grid& g, const ShiftSpec& spec, std::size_t budget) {
    return !Checker(spec, budget).any_violation(g);
}

bool locally_admissible(const Pattern& p, const ShiftSpec& spec, std::size_t budget) {
    if (p.empty()) return true;
    return locally_admissible(Grid::from_pattern(p), spec, budget);
}

SearchStatus enumerate_completions(Grid g, const ShiftSpec& spec, const std::function<bool(const Grid&)>& visit,
                                   const SearchLimits& lim) {
    Checker chk(spec, lim.generator_budget);
    const int A = spec.alphabet.size();
    const int n = g.w * g.h;
    std::vector<char> fixed(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) fixed[k] = g.v[k] != kUnset;
    auto viol = [&](int k) { return chk.violation_at(g, g.x0 + k % g.w, g.y0 + k / g.w); };
    std::uint64_t nodes = 0;
    int i = 0;
    bool entering = true;
    while (i >= 0) {
        if (i == n) {
            if (!visit(g)) return SearchStatus::stopped;
            --i;
            entering = false;
            continue;
        }
        if (fixed[i]) {
            if (entering && !viol(i)) ++i;
            else {
                --i;
                entering = false;
            }
            continue;
        }
        Letter& c = g.v[i];
        if (entering) c = kUnset;
        bool placed = false;
        while (++c < A) {
            if (++nodes > lim.node_limit) return SearchStatus::limit;
            if (!viol(i)) {
                placed = true;
                break;
            }
        }
        if (placed) {
            ++i;
            entering = true;
        } else {
            c = kUnset;
            --i;
            entering = false;
        }
    }
    return SearchStatus::done;
}

Verdict admissible_with_margin(const Pattern& p, const ShiftSpec& spec, int margin, const SearchLimits& lim) {
    if (p.empty()) return Verdict::yes;
    Grid g = Grid::around(p, margin, spec.dim == 1 ? 0 : margin);
    bool found = false;
    auto st = enumerate_completions(g, spec, [&](const Grid&) { found = true; return false; }, lim);
    if (found) return Verdict::yes;
    return st == SearchStatus::limit ? Verdict::inconclusive : Verdict::no;
}

CountInterval block_complexity(const ShiftSpec& spec, int n, int margin, const SearchLimits& lim) {
    if (n < 1) throw std::invalid_argument("block_complexity: n >= 1");
    Grid g(0, 0, n, spec.dim == 1 ? 1 : n);
    std::vector<Pattern> cands;
    enumerate_completions(g, spec, [&](const Grid& c) { cands.push_back(c.to_pattern()); return true; }, lim);
    const int T = std::max(1, lim.threads);
    std::vector<CountInterval> part(static_cast<std::size_t>(T));
    auto work = [&](int t) {
        for (std::size_t k = static_cast<std::size_t>(t); k < cands.size(); k += static_cast<std::size_t>(T)) {
            auto v = admissible_with_margin(cands[k], spec, margin, lim);
            if (v == Verdict::yes) ++part[t].lo;
            if (v != Verdict::no) ++part[t].hi;
        }
    };
    if (T == 1) work(0);
    else {
        std::vector<std::thread> th;
        for (int t = 0; t < T; ++t) th.emplace_back(work, t);
        for (auto& x : th) x.join();
    }
    CountInterval r;
    for (auto& p : part) {
        r.lo += p.lo;
        r.hi += p.hi;
    }
    return r;
}

Alphabet binary_alphabet() { return Alphabet({"white", "black"}); }

ShiftSpec full_shift(const Alphabet& a, int dim) {
    ShiftSpec s;
    s.alphabet = a;
    s.dim = dim;
    s.name = "full";
    return s;
}

ShiftSpec s1_shift(int dim) {
    ShiftSpec s = full_shift(binary_alphabet(), dim);
    s.name = "S1";
    s.add_forbidden(Pattern::word({1, 1}));
    return s;
}

ShiftSpec s2_shift() {
    ShiftSpec s = full_shift(binary_alphabet(), 1);
    s.name = "S2";
    s.generator = [](std::size_t i) -> std::optional<Pattern> {
        std::vector<Letter> w(2 * i + 3, 0);
        w.front() = w.back() = 1;
        return Pattern::word(w);
    };
    return s;
}

ShiftSpec rectangle_shift() {
    ShiftSpec s = full_shift(binary_alphabet(), 2);
    s.name = "rectangles";
    for (int hole = 0; hole < 4; ++hole) {
        std::vector<Letter> v(4, 1);
        v[hole] = 0;
        s.add_forbidden(Pattern::rect(2, 2, v));
    }
    s.normalize();
    return s;
}

ShiftSpec checkerboard_shift() {
    ShiftSpec s = full_shift(binary_alphabet(), 2);
    s.name = "checkerboard";
    for (Letter a = 0; a < 2; ++a) {
        s.add_forbidden(Pattern::rect(2, 1, {a, a}));
        s.add_forbidden(Pattern::rect(1, 2, {a, a}));
    }
    s.normalize();
    return s;
}

}  // namespace symdyn
