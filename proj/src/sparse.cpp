#include "symdyn/sparse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "symdyn/flow.hpp"

namespace symdyn::sparse {

namespace {

constexpr std::uint64_t kSat = std::uint64_t{1} << 62;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a && b > kSat / a) return kSat;
    return std::min(a * b, kSat);
}

std::uint64_t sat_pow(std::uint64_t b, long long e) {
    std::uint64_t r = 1;
    for (long long i = 0; i < e && r < kSat; ++i) r = sat_mul(r, b);
    return r;
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r·(n-k+i)/i stays integral; saturate once past the cap
        if (r >= kSat / static_cast<std::uint64_t>(n)) return kSat;
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

bool by_yx(Pos a, Pos b) { return a.y != b.y ? a.y < b.y : a.x < b.x; }

void sort_points(std::vector<Pos>& v) { std::sort(v.begin(), v.end(), by_yx); }

std::string bits_of(long long v, int width) {
    std::string s;
    for (int i = width - 1; i >= 0; --i) s += static_cast<char>('0' + (v >> i & 1));
    return s;
}

long long value_of(const std::string& s) {
    long long v = 0;
    for (char c : s) v = v * 2 + (c - '0');
    return v;
}

}  // namespace

Rational DensitySpec::eps() const {
    if (eps_upper.empty()) throw std::invalid_argument("DensitySpec: no ε bound");
    return eps_upper[static_cast<std::size_t>(std::clamp(index, 0, static_cast<int>(eps_upper.size()) - 1))];
}

void DensitySpec::validate() const {
    if (eps_upper.empty()) throw std::invalid_argument("DensitySpec: no ε bound");
    for (std::size_t i = 0; i < eps_upper.size(); ++i) {
        const auto& r = eps_upper[i];
        if (r.den <= 0 || r.num < 0 || r.num >= r.den) throw std::invalid_argument("DensitySpec: ε bounds must lie in [0,1)");
        if (i && r.value() > eps_upper[i - 1].value()) throw std::invalid_argument("DensitySpec: ε bounds must not increase");
    }
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (schedule[k].N < 1 || schedule[k].rank < 1) throw std::invalid_argument("DensitySpec: bad level");
        if (k && (schedule[k].N <= schedule[k - 1].N || schedule[k].N % schedule[k - 1].N))
            throw std::invalid_argument("DensitySpec: level sides must grow by integer factors");
    }
    if (chunk_bits < 1) throw std::invalid_argument("DensitySpec: chunk_bits >= 1");
}

DensitySpec desk_spec() {
    DensitySpec s;
    s.schedule = {{4, 16}, {16, 32}, {64, 64}};
    return s;
}

bool is_forbidden_density(int n, int blacks, const DensitySpec& spec) {
    // blacks > n^(p/q)  ⇔  blacks^q > n^p
    const Rational e = spec.eps();
    if (blacks <= 0) return false;
    std::uint64_t lhs = sat_pow(static_cast<std::uint64_t>(blacks), e.den);
    std::uint64_t rhs = sat_pow(static_cast<std::uint64_t>(n), e.num);
    if (lhs < kSat && rhs < kSat) return lhs > rhs;
    return e.den * std::log(static_cast<long double>(blacks)) > e.num * std::log(static_cast<long double>(n));
}

bool is_forbidden_density(const SparsePattern& p, const DensitySpec& spec) {
    return is_forbidden_density(p.n, static_cast<int>(p.blacks.size()), spec);
}

Enumerator density_enumerator(const DensitySpec& spec) {
    return [spec](std::uint64_t step) -> std::optional<SparsePattern> {
        for (int n = 1; n <= 64; ++n) {
            const int cells = n * n;
            for (int b = 1; b <= cells; ++b) {
                if (!is_forbidden_density(n, b, spec)) continue;
                std::uint64_t cnt = binom(cells, b);
                if (step >= cnt) {
                    step -= cnt;
                    continue;
                }
                // unrank the step-th b-subset of [0, cells) in lexicographic order
                SparsePattern p;
                p.n = n;
                int next = 0;
                for (int left = b; left > 0; --left)
                    for (int c = next;; ++c) {
                        std::uint64_t with = binom(cells - c - 1, left - 1);
                        if (step < with) {
                            p.blacks.push_back({c % n, c / n});
                            next = c + 1;
                            break;
                        }
                        step -= with;
                    }
                sort_points(p.blacks);
                return p;
            }
        }
        return std::nullopt;
    };
}

int ell(int k) { return k <= 1 ? 0 : std::bit_width(static_cast<unsigned>(k)) - 1; }

std::vector<SparsePattern> forbidden_rank(int k, const Enumerator& e) {
    const int L = ell(k);
    std::vector<SparsePattern> out;
    for (int s = 0; s < L; ++s)
        if (auto p = e(static_cast<std::uint64_t>(s)); p && p->n <= L && static_cast<int>(p->blacks.size()) <= L) out.push_back(*p);
    return out;
}

ResponsibilityResult check_responsibility(const std::vector<Pos>& points, int zone, const std::vector<SparsePattern>& rank_list) {
    std::set<std::pair<int, int>> have;
    for (auto p : points) have.insert({p.x, p.y});
    auto black = [&](int x, int y) { return have.count({x, y}) > 0; };
    for (std::size_t m = 0; m < rank_list.size(); ++m) {
        const auto& M = rank_list[m];
        std::set<std::pair<int, int>> mb;
        for (auto q : M.blacks) mb.insert({q.x, q.y});
        for (auto p : points)
            for (auto a : M.blacks) {
                Pos off{p.x - a.x, p.y - a.y};
                if (off.x < 0 || off.y < 0 || off.x + M.n > zone || off.y + M.n > zone) continue;
                bool all = true;
                for (int j = 0; j < M.n && all; ++j)
                    for (int i = 0; i < M.n && all; ++i)
                        // clause (1): M black where the list has none; clause (2): the list has a point where M is white
                        if (mb.count({i, j}) != black(off.x + i, off.y + j)) all = false;
                if (all) return {false, Placement{static_cast<int>(m), off}};
            }
    }
    return {};
}

void SparseConfig::validate() const {
    if (W < 1) throw std::invalid_argument("SparseConfig: W >= 1");
    std::set<std::pair<int, int>> seen;
    for (auto p : points) {
        if (p.x < 0 || p.y < 0 || p.x >= W || p.y >= W) throw std::invalid_argument("SparseConfig: point outside the window");
        if (!seen.insert({p.x, p.y}).second) throw std::invalid_argument("SparseConfig: repeated point");
    }
}

bool density_admissible(const SparseConfig& c, const DensitySpec& spec) {
    const int W = c.W;
    std::vector<int> P(static_cast<std::size_t>(W + 1) * (W + 1), 0);
    auto idx = [W](int x, int y) { return static_cast<std::size_t>(y) * (W + 1) + x; };
    for (auto p : c.points) ++P[idx(p.x + 1, p.y + 1)];
    for (int y = 1; y <= W; ++y)
        for (int x = 1; x <= W; ++x) P[idx(x, y)] += P[idx(x - 1, y)] + P[idx(x, y - 1)] - P[idx(x - 1, y - 1)];
    if (is_forbidden_density(W, static_cast<int>(c.points.size()), spec)) return false;
    for (int n = 1; n <= W; ++n) {
        int allowed = 0;
        while (!is_forbidden_density(n, allowed + 1, spec)) ++allowed;
        if (allowed >= static_cast<int>(c.points.size())) continue;
        for (int y = 0; y + n <= W; ++y)
            for (int x = 0; x + n <= W; ++x)
                if (P[idx(x + n, y + n)] - P[idx(x, y + n)] - P[idx(x + n, y)] + P[idx(x, y)] > allowed) return false;
    }
    return true;
}

SparseConfig random_config(const DensitySpec& spec, int W, double fill, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SparseConfig c{W, {}};
    const int target = std::max(1, static_cast<int>(std::floor(fill * std::pow(static_cast<double>(W), static_cast<double>(spec.eps().value())))));
    std::uniform_int_distribution<int> d(0, W - 1);
    for (int attempt = 0; attempt < 200 * target && static_cast<int>(c.points.size()) < target; ++attempt) {
        Pos p{d(rng), d(rng)};
        if (std::any_of(c.points.begin(), c.points.end(), [&](Pos q) { return q == p; })) continue;
        c.points.push_back(p);
        if (!density_admissible(c, spec)) c.points.pop_back();
    }
    sort_points(c.points);
    return c;
}

std::vector<Pos> field5_zone(int n) {
    std::vector<Pos> z;
    for (int x = 0; x < n; ++x)
        for (int k = 0; k < n; ++k) z.push_back({x, x % 2 ? n - 1 - k : k});
    return z;
}

int coord_bits(int N) { return std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(std::max(N - 1, 1))))); }

std::string encode_point(Pos p, int N) { return bits_of(p.x, coord_bits(N)) + bits_of(p.y, coord_bits(N)); }

Pos decode_point(const std::string& bits, int N) {
    const int w = coord_bits(N);
    if (static_cast<int>(bits.size()) != 2 * w) throw std::invalid_argument("decode_point: wrong length");
    return {static_cast<int>(value_of(bits.substr(0, w))), static_cast<int>(value_of(bits.substr(w)))};
}

namespace {

int element_children(int N_mother, int B) { return (2 * coord_bits(N_mother) + B - 1) / B; }

void fill_f8(LevelAssembly& a) {
    for (int Y = 0; Y < a.rows; ++Y)
        for (int X = 0; X < a.cols; ++X) {
            std::vector<Pos> u;
            for (int q = 0; q < 4; ++q) {
                int dx = q & 1, dy = q >> 1;
                if (!a.inside(X + dx, Y + dy)) continue;
                for (auto p : a.at(X + dx, Y + dy).side[0].f5) u.push_back({p.x + dx * a.N, p.y + dy * a.N});
            }
            sort_points(u);
            a.ref(X, Y).side[0].f8 = u;
        }
}

}  // namespace

Synthesis synthesize_fields(const SparseConfig& c, const DensitySpec& spec, Pos offset) {
    spec.validate();
    c.validate();
    if (spec.schedule.empty()) throw std::invalid_argument("synthesize_fields: needs an explicit level schedule");
    const auto& sch = spec.schedule;
    const int top = static_cast<int>(sch.size()) - 1;
    const int Ntop = sch[top].N;
    if (offset.x < 0 || offset.y < 0 || offset.x >= Ntop || offset.y >= Ntop) throw std::invalid_argument("synthesize_fields: offset in [0, N_top)");
    const int T = (c.W + std::max(offset.x, offset.y) + Ntop - 1) / Ntop;

    Synthesis s;
    s.offset = offset;
    s.levels.resize(sch.size());
    for (int k = 0; k <= top; ++k) {
        auto& a = s.levels[k];
        a.level = k;
        a.N = sch[k].N;
        a.n_mother = k < top ? sch[k + 1].N / sch[k].N : 0;
        a.chunk_bits = spec.chunk_bits;
        a.cols = a.rows = T * (Ntop / a.N);
        a.tiles.assign(static_cast<std::size_t>(a.cols) * a.rows, {});
        for (int Y = 0; Y < a.rows; ++Y)
            for (int X = 0; X < a.cols; ++X) {
                auto& t = a.ref(X, Y);
                t.f2 = sch[k].rank;
                t.f3 = a.n_mother ? Pos{X % a.n_mother, Y % a.n_mother} : Pos{X, Y};
            }
    }
    // level 0 takes the black points directly
    for (auto p : c.points) {
        Pos g{p.x + offset.x, p.y + offset.y};
        auto& a = s.levels[0];
        a.ref(g.x / a.N, g.y / a.N).side[0].f5.push_back({g.x % a.N, g.y % a.N});
    }
    for (auto& t : s.levels[0].tiles) sort_points(t.side[0].f5);

    for (int k = 0; k < top; ++k) {
        auto& lo = s.levels[k];
        auto& hi = s.levels[k + 1];
        const int n = lo.n_mother, B = spec.chunk_bits, Nm = hi.N;
        const int l = element_children(Nm, B);
        const auto zone = field5_zone(n);
        for (int MY = 0; MY < hi.rows; ++MY)
            for (int MX = 0; MX < hi.cols; ++MX) {
                std::vector<int> production(static_cast<std::size_t>(n) * n, 0);
                std::vector<std::vector<Pos>> pts(production.size());
                int F = 0;
                for (int j = 0; j < n; ++j)
                    for (int i = 0; i < n; ++i) {
                        const auto& ch = lo.at(MX * n + i, MY * n + j);
                        for (auto p : ch.side[0].f5) pts[j * n + i].push_back({i * lo.N + p.x, j * lo.N + p.y});
                        production[j * n + i] = static_cast<int>(ch.side[0].f5.size());
                        F += production[j * n + i];
                    }
                if (F * l > n * n) throw ConstructionError("synthesize_fields: mother field 5 does not fit its zone");
                std::vector<int> slots;
                for (int e = 0; e < F; ++e) slots.push_back(zone[e * l].y * n + zone[e * l].x);
                auto routing = route_points(n, lo.N, production, slots);
                if (!routing.ok) throw ConstructionError("synthesize_fields: routing failed: " + routing.error);
                std::vector<std::size_t> used(production.size(), 0);
                std::vector<Pos> mother_f5;
                for (auto& cm : routing.commodities) mother_f5.push_back(pts[cm.producer][used[cm.producer]++]);
                for (int v = 0; v < n * n; ++v) {
                    auto& ch = lo.ref(MX * n + v % n, MY * n + v / n);
                    for (auto& re : routing.tables[v]) ch.side[0].f6.push_back({mother_f5[re.commodity], re.arrow});
                }
                std::string chain;
                for (int z = 0; z < n * n; ++z) {
                    if (z % l == 0 && z / l < F) chain = encode_point(mother_f5[z / l], Nm);
                    else chain.erase(0, std::min<std::size_t>(B, chain.size()));
                    auto& ch = lo.ref(MX * n + zone[z].x, MY * n + zone[z].y);
                    ch.side[0].f7 = chain;
                    ch.f4 = chain.substr(0, std::min<std::size_t>(B, chain.size()));
                }
                hi.ref(MX, MY).side[0].f5 = mother_f5;
            }
    }
    for (auto& a : s.levels) {
        fill_f8(a);
        for (auto& t : a.tiles) t.side[1] = t.side[2] = t.side[3] = t.side[0];
    }
    return s;
}

namespace {

bool valid_arrow(int arrow) { return arrow >= 0 && arrow <= 20; }

bool arrival(int arrow) {
    if (!valid_arrow(arrow)) return false;
    auto ai = arrow_decode(arrow);
    return arrow == 0 || (ai.in_side >= 0 && ai.out_side < 0);
}

int arrival_count(const SideFields& f) {
    return static_cast<int>(std::count_if(f.f6.begin(), f.f6.end(), [](const FlowEntry& e) { return arrival(e.arrow); }));
}

std::optional<Pos> arrival_point(const SideFields& f) {
    for (auto& e : f.f6)
        if (arrival(e.arrow)) return e.p;
    return std::nullopt;
}

bool initial(int arrow) {
    if (!valid_arrow(arrow)) return false;
    auto ai = arrow_decode(arrow);
    return arrow == 0 || (ai.in_side < 0 && ai.out_side >= 0);
}

}  // namespace

VerifyReport verify_all(const LevelAssembly& a, const DensitySpec& spec, const Enumerator& e) {
    VerifyReport r;
    auto fail = [&](char prop, std::string what, Pos tile, std::optional<Placement> pl = std::nullopt) {
        (prop == 'C' ? r.C : prop == 'D' ? r.D : prop == 'E' ? r.E : prop == 'F' ? r.F : r.G) = false;
        r.witnesses.push_back({prop, std::move(what), tile, pl});
    };
    const int N = a.N;
    auto f = [&](int X, int Y) -> const SideFields& { return a.at(X, Y).side[0]; };
    static const SideFields kEmpty;
    auto f_or_empty = [&](int X, int Y) -> const SideFields& { return a.inside(X, Y) ? f(X, Y) : kEmpty; };

    // C: the four side copies agree; field sizes within bounds
    for (int Y = 0; Y < a.rows; ++Y)
        for (int X = 0; X < a.cols; ++X) {
            const auto& t = a.at(X, Y);
            for (int s = 1; s < 4; ++s)
                if (!(t.side[s] == t.side[0])) fail('C', "side " + std::to_string(s) + " copy differs from side 0", {X, Y});
            if (is_forbidden_density(N, static_cast<int>(t.side[0].f5.size()), spec)) fail('C', "field 5 over N^eps entries", {X, Y});
            if (is_forbidden_density(2 * N, static_cast<int>(t.side[0].f8.size()), spec)) fail('C', "field 8 over (2N)^eps entries", {X, Y});
        }

    if (a.n_mother > 0) {
        const int n = a.n_mother, B = a.chunk_bits, Nm = N * n;
        const int l = element_children(Nm, B);
        const auto zone = field5_zone(n);
        for (int MY = 0; MY * n < a.rows; ++MY)
            for (int MX = 0; MX * n < a.cols; ++MX) {
                auto in_mother = [&](int X, int Y) { return X >= MX * n && X < MX * n + n && Y >= MY * n && Y < MY * n + n; };
                for (int Y = MY * n; Y < MY * n + n; ++Y)
                    for (int X = MX * n; X < MX * n + n; ++X) {
                        const auto& t = f(X, Y);
                        const Pos base{(X - MX * n) * N, (Y - MY * n) * N};
                        // D1: own points leave exactly once; every initial entry is an own point
                        std::multiset<std::pair<int, int>> own, starts;
                        for (auto p : t.f5) own.insert({base.x + p.x, base.y + p.y});
                        for (auto& en : t.f6) {
                            if (!valid_arrow(en.arrow)) fail('D', "arrow id out of range", {X, Y});
                            else if (initial(en.arrow)) starts.insert({en.p.x, en.p.y});
                        }
                        if (own != starts) fail('D', "field 5 points and initial arrows differ", {X, Y});
                        // D2: every outgoing arrow meets a matching incoming arrow next door
                        for (int d = 0; d < 4; ++d) {
                            std::multiset<std::pair<int, int>> out, in;
                            for (auto& en : t.f6)
                                if (valid_arrow(en.arrow) && arrow_decode(en.arrow).out_side == d) out.insert({en.p.x, en.p.y});
                            int nx = X + kDX[d], ny = Y + kDY[d];
                            if (in_mother(nx, ny))
                                for (auto& en : f(nx, ny).f6)
                                    if (valid_arrow(en.arrow) && arrow_decode(en.arrow).in_side == opposite(d)) in.insert({en.p.x, en.p.y});
                            if (out != in) fail('D', "flow not conserved across side " + std::to_string(d), {X, Y});
                            if (!in_mother(nx, ny))
                                for (auto& en : t.f6)
                                    if (valid_arrow(en.arrow) && arrow_decode(en.arrow).in_side == d) fail('D', "arrow enters from outside the mother", {X, Y});
                        }
                    }
                // D3 and E along the zone
                std::string expect;
                for (int z = 0; z < n * n; ++z) {
                    const int X = MX * n + zone[z].x, Y = MY * n + zone[z].y;
                    const auto& t = f(X, Y);
                    const int arrivals = arrival_count(t);
                    const bool prev_last = z > 0 && !expect.empty() && static_cast<int>(expect.size()) <= B;
                    if (arrivals > 1) fail('D', "several arrivals in one tile", {X, Y});
                    if (arrivals && !(z == 0 || prev_last)) fail('D', "arrival neither at the zone start nor after a last bit", {X, Y});
                    if (arrivals && z % l) fail('D', "arrival off an element boundary", {X, Y});
                    if (auto p = arrival_point(t)) expect = encode_point(*p, Nm);
                    else expect.erase(0, std::min<std::size_t>(B, expect.size()));
                    if (t.f7 != expect) fail('E', "field 7 is not the predecessor's chain minus its head", {X, Y});
                    if (a.at(X, Y).f4 != t.f7.substr(0, std::min<std::size_t>(B, t.f7.size()))) fail('E', "field 4 differs from the chain head", {X, Y});
                    if (static_cast<int>(t.f7.size()) > 2 * coord_bits(Nm)) fail('E', "field 7 too long", {X, Y});
                }
            }
    }

    // F: field 8 is the union of the block's field 5 lists; the diagonal quadrant is checked one tile up
    for (int Y = 0; Y < a.rows; ++Y)
        for (int X = 0; X < a.cols; ++X) {
            std::array<std::vector<Pos>, 4> quad;
            for (auto p : f(X, Y).f8) {
                if (p.x < 0 || p.y < 0 || p.x >= 2 * N || p.y >= 2 * N) {
                    fail('F', "field 8 point outside the block", {X, Y});
                    continue;
                }
                quad[(p.x >= N) + 2 * (p.y >= N)].push_back({p.x % N, p.y % N});
            }
            for (int q = 0; q < 4; ++q) {
                auto want = f_or_empty(X + (q & 1), Y + (q >> 1)).f5;
                auto got = quad[q];
                sort_points(want);
                sort_points(got);
                if (want != got) {
                    Pos at = q == 3 && a.inside(X, Y + 1) ? Pos{X, Y + 1} : Pos{X, Y};
                    fail('F', "field 8 quadrant " + std::to_string(q) + " differs from the neighbour's field 5", at);
                }
            }
        }

    // G: no forbidden pattern of the tile's rank inside its block
    std::map<int, std::vector<SparsePattern>> lists;
    for (int Y = 0; Y < a.rows; ++Y)
        for (int X = 0; X < a.cols; ++X) {
            const int rank = a.at(X, Y).f2;
            if (!lists.count(rank)) lists[rank] = forbidden_rank(rank, e);
            auto res = check_responsibility(f(X, Y).f8, 2 * N, lists[rank]);
            if (!res.ok) fail('G', "forbidden pattern of rank " + std::to_string(rank), {X, Y}, res.witness);
        }
    return r;
}

InfoFlowReport info_flow_check(const LevelAssembly& lo, const LevelAssembly& hi) {
    if (lo.n_mother == 0 || hi.N != lo.N * lo.n_mother) throw std::invalid_argument("info_flow_check: levels do not nest");
    const int n = lo.n_mother, B = lo.chunk_bits, Nm = hi.N;
    const int l = element_children(Nm, B), w2 = 2 * coord_bits(Nm);
    const auto zone = field5_zone(n);
    for (int MY = 0; MY < hi.rows; ++MY)
        for (int MX = 0; MX < hi.cols; ++MX) {
            auto tag = [&](const std::string& s) { return InfoFlowReport{false, s + " in mother (" + std::to_string(MX) + "," + std::to_string(MY) + ")"}; };
            std::multiset<std::pair<int, int>> children, decoded, mother;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    for (auto p : lo.at(MX * n + i, MY * n + j).fields().f5) children.insert({i * lo.N + p.x, j * lo.N + p.y});
            for (int z = 0; z < n * n; ++z) {
                const auto& t = lo.at(MX * n + zone[z].x, MY * n + zone[z].y);
                if (!arrival_count(t.fields())) continue;
                std::string bits;
                for (int s = z; s < std::min(z + l, n * n); ++s) bits += lo.at(MX * n + zone[s].x, MY * n + zone[s].y).f4;
                if (static_cast<int>(bits.size()) < w2) return tag("truncated element");
                Pos p = decode_point(bits.substr(0, w2), Nm);
                decoded.insert({p.x, p.y});
            }
            for (auto p : hi.at(MX, MY).fields().f5) mother.insert({p.x, p.y});
            if (children != mother) return tag("children's points differ from field 5");
            if (decoded != mother) return tag("decoded chunks differ from field 5");
        }
    return {};
}

std::optional<Pos> covering_block(const LevelAssembly& a, Pos o, int side) {
    if (side > a.N || side < 1) return std::nullopt;
    Pos b{o.x / a.N, o.y / a.N};
    if (o.x < 0 || o.y < 0) return std::nullopt;
    if (o.x + side > (b.x + 2) * a.N || o.y + side > (b.y + 2) * a.N) throw std::logic_error("covering_block: window escapes the block");
    return b;
}

std::vector<Pos> inject_parasite_loop(LevelAssembly& a, int x, int y, Pos fake, bool with_initial) {
    const std::array<Pos, 4> cyc{Pos{x, y}, Pos{x + 1, y}, Pos{x + 1, y + 1}, Pos{x, y + 1}};
    for (auto c : cyc)
        if (!a.inside(c.x, c.y)) throw std::invalid_argument("inject_parasite_loop: loop leaves the level");
    auto side_to = [](Pos u, Pos v) {
        for (int d = 0; d < 4; ++d)
            if (u.x + kDX[d] == v.x && u.y + kDY[d] == v.y) return d;
        throw std::logic_error("not adjacent");
    };
    for (int i = 0; i < 4; ++i) {
        Pos c = cyc[i], nxt = cyc[(i + 1) % 4], prv = cyc[(i + 3) % 4];
        int out = side_to(c, nxt), in = side_to(c, prv);
        int arrow = with_initial && i == 0 ? arrow_out(out) : arrow_transit(in, out);
        for (auto& s : a.ref(c.x, c.y).side) s.f6.push_back({fake, arrow});
    }
    return {cyc.begin(), cyc.end()};
}

namespace {

// log₂ N_k for the schedule in force
std::vector<long double> log_sides(const DensitySpec& spec, int levels) {
    std::vector<long double> L;
    if (!spec.schedule.empty())
        for (auto& lv : spec.schedule) L.push_back(std::log2(static_cast<long double>(lv.N)));
    else
        for (int k = 0; k <= levels + 1; ++k) L.push_back(std::pow(spec.C, static_cast<long double>(k)));
    return L;
}

}  // namespace

ParameterReport parameter_check(const DensitySpec& spec, int levels) {
    ParameterReport r;
    const long double eps = spec.eps().value();
    auto L = log_sides(spec, levels);
    const int last = std::min<int>(static_cast<int>(L.size()) - 2, spec.schedule.empty() ? levels : static_cast<int>(L.size()) - 2);
    for (int k = 1; k <= last; ++k) {
        const long double log_n = L[k] - L[k - 1];
        const long double logN = L[k], logNext = L[k + 1];
        const long double lg_logNext = std::log2(std::max<long double>(logNext, 1));
        // cable width n/16 against c₁·N^ε·log N_{k+1}; central zone n/16 against 4(log N_{k+1})²; top zone n/4 against c₂·N^ε·log N_{k+1}
        std::array<long double, 3> s{
            (log_n - 4) - (std::log2(kC1) + eps * logN + lg_logNext),
            (log_n - 4) - (2 + 2 * lg_logNext),
            (log_n - 2) - (std::log2(kC2) + eps * logN + lg_logNext),
        };
        r.slack.push_back(s);
        for (int i = 0; i < 3 && r.ok; ++i)
            if (s[i] < 0) {
                r.ok = false;
                r.first_failing_level = k;
                r.failing_inequality = i == 0 ? "cable width" : i == 1 ? "central zone" : "top zone";
            }
    }
    return r;
}

long double measured_c1(const Synthesis& s, const DensitySpec& spec) {
    const long double eps = spec.eps().value();
    long double worst = 0;
    for (auto& a : s.levels) {
        const int Nm = a.n_mother ? a.N * a.n_mother : 2 * a.N;
        for (auto& t : a.tiles) {
            const auto& f = t.fields();
            long double bits = f.f5.size() * 2.0L * coord_bits(a.N) + f.f6.size() * (2.0L * coord_bits(Nm) + 5) +
                               f.f7.size() + f.f8.size() * 2.0L * coord_bits(2 * a.N);
            long double denom = std::pow(static_cast<long double>(a.N), eps) * std::log2(static_cast<long double>(Nm));
            worst = std::max(worst, bits / denom);
        }
    }
    return worst;
}

namespace {

vm::Bits to_vm(const std::string& s) {
    vm::Bits b;
    for (char c : s) b.push_back(c - '0');
    return b;
}

std::string from_vm(const vm::Bits& b) {
    std::string s;
    for (int v : b) s += static_cast<char>('0' + v);
    return s;
}

}  // namespace

std::vector<vm::FieldInput> encode_side(const SuperTileFields& t, int side, int N, int N_mother) {
    const auto& f = t.side.at(static_cast<std::size_t>(side));
    const int w3 = N_mother ? coord_bits(N_mother / N) : 16;
    const int Nm = N_mother ? N_mother : 2 * N;
    std::vector<vm::FieldInput> out;
    out.push_back({2, -1, {to_vm(bits_of(t.f2, std::bit_width(static_cast<unsigned>(std::max(t.f2, 1)))))}});
    out.push_back({3, side, {to_vm(bits_of(t.f3.x, w3) + bits_of(t.f3.y, w3))}});
    out.push_back({4, side, {to_vm("1" + t.f4)}});  // leading 1 keeps empty chunks non-empty
    vm::FieldInput f5{5, side, {}}, f6{6, side, {}}, f8{8, side, {}};
    for (auto p : f.f5) f5.elements.push_back(to_vm(encode_point(p, N)));
    for (auto& e : f.f6) f6.elements.push_back(to_vm(encode_point(e.p, Nm) + bits_of(e.arrow, 5)));
    for (auto p : f.f8) f8.elements.push_back(to_vm(encode_point(p, 2 * N)));
    out.push_back(f5);
    out.push_back(f6);
    out.push_back({7, side, {to_vm("1" + f.f7)}});
    out.push_back(f8);
    return out;
}

SideFields decode_side(const std::vector<vm::FieldInput>& in, int N, int N_mother) {
    const int Nm = N_mother ? N_mother : 2 * N;
    SideFields f;
    for (auto& fi : in) {
        switch (fi.field) {
            case 5:
                for (auto& e : fi.elements) f.f5.push_back(decode_point(from_vm(e), N));
                break;
            case 6:
                for (auto& e : fi.elements) {
                    auto s = from_vm(e);
                    if (s.size() < 5) throw std::invalid_argument("decode_side: short flow entry");
                    f.f6.push_back({decode_point(s.substr(0, s.size() - 5), Nm), static_cast<int>(value_of(s.substr(s.size() - 5)))});
                }
                break;
            case 7:
                f.f7 = from_vm(fi.elements.at(0)).substr(1);
                break;
            case 8:
                for (auto& e : fi.elements) f.f8.push_back(decode_point(from_vm(e), 2 * N));
                break;
            default:
                break;
        }
    }
    return f;
}

}  // namespace symdyn::sparse
