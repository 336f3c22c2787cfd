#include "symdyn/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_set>

namespace symdyn::kolm {

// ---- decompressor ----

namespace {

struct OpInfo {
    Op op;
    const char* code;
    bool has_arg;
};

constexpr OpInfo kOps[] = {
    {Op::emit0, "00", false},     {Op::emit1, "01", false},       {Op::halt, "100", false},
    {Op::copy, "101", true},      {Op::loop, "1100", true},       {Op::end, "1101", false},
    {Op::inv, "11100", true},     {Op::rev, "11101", true},       {Op::sample, "11110", true},
    {Op::bnot, "111110", false},  {Op::zeros, "1111110", true},   {Op::ones, "1111111", true},
};

const OpInfo& info(Op op) {
    for (auto& o : kOps)
        if (o.op == op) return o;
    throw std::logic_error("unknown op");
}

int gamma_len(int k) {
    int b = 0;
    while ((k >> (b + 1)) > 0) ++b;
    return 2 * b + 1;
}

bool global_op(Op op) { return op == Op::sample || op == Op::bnot; }

}  // namespace

Bits gamma_code(int k) {
    if (k < 1) throw std::invalid_argument("gamma_code: k >= 1");
    Bits bin;
    for (int v = k; v > 0; v >>= 1) bin.insert(bin.begin(), static_cast<char>('0' + (v & 1)));
    return Bits(bin.size() - 1, '0') + bin;
}

Bits encode(const std::vector<Instr>& code) {
    Bits b;
    for (auto& in : code) {
        const auto& o = info(in.op);
        b += o.code;
        if (o.has_arg) b += gamma_code(in.arg);
    }
    return b;
}

std::optional<Program> parse(const Bits& bits) {
    Program p;
    std::vector<int> stack;
    std::size_t i = 0;
    while (i < bits.size()) {
        const OpInfo* hit = nullptr;
        for (auto& o : kOps) {
            std::size_t len = std::char_traits<char>::length(o.code);
            if (bits.compare(i, len, o.code) == 0) {
                hit = &o;
                i += len;
                break;
            }
        }
        if (!hit) return std::nullopt;
        Instr in{hit->op};
        if (hit->has_arg) {
            int zeros = 0;
            while (i < bits.size() && bits[i] == '0') ++zeros, ++i;
            if (i + static_cast<std::size_t>(zeros) >= bits.size()) return std::nullopt;
            if (zeros > 30) return std::nullopt;
            int v = 0;
            for (int k = 0; k <= zeros; ++k) v = v * 2 + (bits[i++] - '0');
            in.arg = v;
        }
        if (in.op == Op::loop) stack.push_back(static_cast<int>(p.code.size()));
        if (in.op == Op::end) {
            if (stack.empty()) return std::nullopt;
            in.match = stack.back();
            p.code[stack.back()].match = static_cast<int>(p.code.size());
            stack.pop_back();
        }
        p.code.push_back(in);
        if (in.op == Op::halt) {
            if (!stack.empty() || i != bits.size()) return std::nullopt;
            p.bits = static_cast<int>(bits.size());
            return p;
        }
    }
    return std::nullopt;
}

RunResult run(const Program& p, std::uint64_t max_steps, const Bits* prefix) {
    RunResult r;
    std::vector<int> counters;
    std::size_t checked = 0;
    auto charge = [&](std::uint64_t s) {
        r.steps += s;
        return r.steps <= max_steps;
    };
    auto prefix_ok = [&] {
        if (!prefix) return true;
        if (r.out.size() > prefix->size()) return false;
        for (; checked < r.out.size(); ++checked)
            if (r.out[checked] != (*prefix)[checked]) return false;
        return true;
    };
    auto append = [&](const Bits& b) {
        if (!charge(b.size())) return false;
        r.out += b;
        return true;
    };
    for (std::size_t pc = 0; pc < p.code.size();) {
        const Instr& in = p.code[pc];
        if (!charge(1)) {
            r.status = RunResult::timeout;
            return r;
        }
        bool ok = true;
        switch (in.op) {
            case Op::emit0: ok = append("0"); break;
            case Op::emit1: ok = append("1"); break;
            case Op::halt: r.status = RunResult::halted; return r;
            case Op::copy:
            case Op::inv:
            case Op::rev: {
                if (static_cast<std::size_t>(in.arg) > r.out.size()) {
                    r.status = RunResult::failed;
                    return r;
                }
                Bits tail = r.out.substr(r.out.size() - in.arg);
                if (in.op == Op::inv)
                    for (auto& ch : tail) ch = ch == '0' ? '1' : '0';
                if (in.op == Op::rev) std::reverse(tail.begin(), tail.end());
                ok = append(tail);
                break;
            }
            case Op::zeros: ok = append(Bits(static_cast<std::size_t>(in.arg), '0')); break;
            case Op::ones: ok = append(Bits(static_cast<std::size_t>(in.arg), '1')); break;
            case Op::loop:
                counters.push_back(in.arg);
                break;
            case Op::end:
                if (--counters.back() > 0) {
                    pc = static_cast<std::size_t>(in.match) + 1;
                    continue;
                }
                counters.pop_back();
                break;
            case Op::sample: {
                std::size_t len = r.out.size();
                std::size_t m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(len))));
                if (m * m != len) {
                    r.status = RunResult::failed;
                    return r;
                }
                if (!charge(len)) break;
                Bits s;
                for (std::size_t y = 0; y < m; y += in.arg)
                    for (std::size_t x = 0; x < m; x += in.arg) s += r.out[y * m + x];
                r.out = s;
                checked = 0;
                break;
            }
            case Op::bnot:
                if (!charge(r.out.size())) break;
                for (auto& ch : r.out) ch = ch == '0' ? '1' : '0';
                checked = 0;
                break;
        }
        if (!ok || r.steps > max_steps) {
            r.status = RunResult::timeout;
            return r;
        }
        if (!prefix_ok()) {
            r.status = RunResult::failed;
            return r;
        }
        ++pc;
    }
    r.status = RunResult::failed;
    return r;
}

RunResult run(const Bits& program, std::uint64_t max_steps) {
    auto p = parse(program);
    if (!p) return {};
    return run(*p, max_steps);
}

namespace {

struct Enumerator {
    int max_len;
    bool exact;
    const std::function<void(const Bits&, const Program&)>& visit;
    Bits bits;
    Program prog;
    std::vector<int> stack;

    void rec() {
        const int used = static_cast<int>(bits.size());
        const int depth = static_cast<int>(stack.size());
        for (auto& o : kOps) {
            const int clen = static_cast<int>(std::char_traits<char>::length(o.code));
            if (o.op == Op::halt) {
                if (depth != 0 || used + clen > max_len || (exact && used + clen != max_len)) continue;
                push(o, 0, clen);
                visit(bits, prog);
                pop(clen, o.op);
                continue;
            }
            if (o.op == Op::end && depth == 0) continue;
            // whatever follows needs at least the pending ENDs and a HALT
            int depth_after = depth + (o.op == Op::loop) - (o.op == Op::end);
            int tail = 3 + 4 * depth_after;
            if (!o.has_arg) {
                if (used + clen + tail > max_len) continue;
                push(o, 0, clen);
                rec();
                pop(clen, o.op);
                continue;
            }
            for (int k = 1;; ++k) {
                int glen = gamma_len(k);
                if (used + clen + glen + tail > max_len) break;
                push(o, k, clen + glen);
                rec();
                pop(clen + glen, o.op);
            }
        }
    }
    void push(const OpInfo& o, int arg, int) {
        bits += o.code;
        if (o.has_arg) bits += gamma_code(arg);
        Instr in{o.op, arg};
        if (o.op == Op::loop) stack.push_back(static_cast<int>(prog.code.size()));
        if (o.op == Op::end) {
            in.match = stack.back();
            prog.code[stack.back()].match = static_cast<int>(prog.code.size());
            stack.pop_back();
        }
        prog.code.push_back(in);
        prog.bits = static_cast<int>(bits.size());
    }
    void pop(int len, Op op) {
        bits.resize(bits.size() - len);
        Instr in = prog.code.back();
        prog.code.pop_back();
        if (op == Op::end) {
            stack.push_back(in.match);
            prog.code[in.match].match = -1;
        }
        if (op == Op::loop) stack.pop_back();
        prog.bits = static_cast<int>(bits.size());
    }
};

bool has_global(const Program& p) {
    return std::any_of(p.code.begin(), p.code.end(), [](const Instr& i) { return global_op(i.op); });
}

}  // namespace

void enumerate_programs(int max_len, bool exact, const std::function<void(const Bits&, const Program&)>& visit) {
    Enumerator e{max_len, exact, visit, {}, {}, {}};
    e.rec();
}

KResult time_bounded_K(const Bits& x, std::uint64_t t, int max_len) {
    if (max_len > kMaxEnumerationBits) throw std::invalid_argument("time_bounded_K: max_len above the enumeration bound");
    KResult res;
    for (int L = 0; L <= max_len && !res.length; ++L) {
        Bits best;
        enumerate_programs(L, true, [&](const Bits& b, const Program& p) {
            RunResult r = run(p, t, has_global(p) ? nullptr : &x);
            if (r.status == RunResult::halted && r.out == x && (best.empty() || b < best)) best = b;
        });
        if (!best.empty()) {
            res.length = L;
            res.program = best;
        }
    }
    return res;
}

// ---- matrices ----

Bits BitMatrix::bits() const {
    Bits b;
    for (auto c : v) b += static_cast<char>('0' + c);
    return b;
}

BitMatrix BitMatrix::from_bits(const Bits& b, int w) {
    if (w <= 0 || b.size() % static_cast<std::size_t>(w)) throw std::invalid_argument("from_bits: bad width");
    BitMatrix m(w, static_cast<int>(b.size()) / w);
    for (std::size_t i = 0; i < b.size(); ++i) m.v[i] = static_cast<std::uint8_t>(b[i] - '0');
    return m;
}

BitMatrix BitMatrix::inverted() const {
    BitMatrix m = *this;
    for (auto& c : m.v) c ^= 1;
    return m;
}

BitMatrix BitMatrix::crop(int x0, int y0, int cw, int ch) const {
    BitMatrix m(cw, ch);
    for (int y = 0; y < ch; ++y)
        for (int x = 0; x < cw; ++x) m.ref(x, y) = at(x0 + x, y0 + y);
    return m;
}

std::vector<Bits> short_outputs(int out_len, std::uint64_t t, int max_bits) {
    if (max_bits > kMaxEnumerationBits + 1) throw std::invalid_argument("short_outputs: max_bits above the enumeration bound");
    std::unordered_set<Bits> seen;
    enumerate_programs(max_bits - 1, false, [&](const Bits&, const Program& p) {
        RunResult r = run(p, t);
        if (r.status == RunResult::halted && static_cast<int>(r.out.size()) == out_len) seen.insert(r.out);
    });
    std::vector<Bits> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

BitMatrix first_incompressible_matrix(int n, std::uint64_t t, int theta) {
    const int len = n * n;
    Bits cand(static_cast<std::size_t>(len), '0');
    if (theta > 0) {
        auto S = short_outputs(len, t, theta);
        for (auto& s : S) {
            if (s != cand) break;
            int i = len - 1;
            while (i >= 0 && cand[i] == '1') cand[i--] = '0';
            if (i < 0) throw std::logic_error("first_incompressible_matrix: every matrix is compressible");
            cand[i] = '1';
        }
    }
    return BitMatrix::from_bits(cand, n);
}

// ---- hierarchy ----

int HierarchyParams::n(int i) const {
    if (i == 0) return n0;
    long long v = 1;
    for (int k = 0; k < c; ++k) v *= N(i - 1);
    if (v > (1 << 20)) throw std::overflow_error("HierarchyParams: level too large");
    return static_cast<int>(v);
}

int HierarchyParams::N(int i) const {
    long long v = 1;
    for (int k = 0; k <= i; ++k) {
        v *= n(k);
        if (v > (1 << 20)) throw std::overflow_error("HierarchyParams: level too large");
    }
    return static_cast<int>(v);
}

int HierarchyParams::theta_of(int i) const {
    if (i >= 1 && static_cast<std::size_t>(i - 1) < theta.size() && theta[i - 1] >= 0) return theta[i - 1];
    return n(i) * n(i);
}

std::uint64_t HierarchyParams::recovery_cost(int i) const {
    std::uint64_t Ni = static_cast<std::uint64_t>(N(i)), ni = static_cast<std::uint64_t>(n(i));
    return (1 + Ni * Ni) + (1 + ni * ni);
}

std::uint64_t HierarchyParams::t(int i) const { return 4 * (t_prime + recovery_cost(i)); }

namespace {

BitMatrix substitute(const BitMatrix& R, const std::array<BitMatrix, 2>& q) {
    const int s = q[0].w;
    BitMatrix m(R.w * s, R.h * s);
    for (int y = 0; y < m.h; ++y)
        for (int x = 0; x < m.w; ++x) m.ref(x, y) = q[R.at(x / s, y / s)].at(x % s, y % s);
    return m;
}

}  // namespace

StandardPatternFamily build_family(const HierarchyParams& params, const std::vector<BitMatrix>& R) {
    if (params.c < 3) throw std::invalid_argument("build_family: c >= 3");
    StandardPatternFamily f;
    f.params = params;
    f.R.resize(static_cast<std::size_t>(params.levels) + 1);
    f.Q.resize(static_cast<std::size_t>(params.levels) + 1);
    const int n0 = params.n0;
    f.Q[0] = {BitMatrix(n0, n0, 0), BitMatrix(n0, n0, 1)};
    for (int i = 1; i <= params.levels; ++i) {
        const BitMatrix& r = R.at(static_cast<std::size_t>(i));
        if (r.w != params.n(i) || r.h != params.n(i)) throw std::invalid_argument("build_family: R has the wrong side");
        f.R[i] = r;
        f.Q[i][0] = substitute(r, f.Q[i - 1]);
        f.Q[i][1] = f.Q[i][0].inverted();
    }
    return f;
}

StandardPatternFamily build_family(const HierarchyParams& params) {
    std::vector<BitMatrix> R(static_cast<std::size_t>(params.levels) + 1);
    for (int i = 1; i <= params.levels; ++i)
        R[i] = first_incompressible_matrix(params.n(i), params.t(i), params.theta_of(i));
    return build_family(params, R);
}

Bits recovery_suffix(const HierarchyParams& p, int i, int j) {
    Bits b = Bits("11110") + gamma_code(p.N(i - 1));
    if (j) b += "111110";
    return b;
}

int recovery_overhead(const HierarchyParams& p, int i, int j) { return static_cast<int>(recovery_suffix(p, i, j).size()); }

bool contains_all_2x2(const BitMatrix& m) {
    std::array<bool, 16> seen{};
    for (int y = 0; y + 1 < m.h; ++y)
        for (int x = 0; x + 1 < m.w; ++x) seen[m.at(x, y) | m.at(x + 1, y) << 1 | m.at(x, y + 1) << 2 | m.at(x + 1, y + 1) << 3] = true;
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

namespace {

BitMatrix block2x2(const StandardPatternFamily& f, int i, const std::array<int, 4>& ids) {
    const int N = f.Q[i][0].w;
    BitMatrix b(2 * N, 2 * N);
    for (int q = 0; q < 4; ++q) {
        const BitMatrix& src = f.Q[i][ids[q] & 1];
        for (int y = 0; y < N; ++y)
            for (int x = 0; x < N; ++x) b.ref(x + (q & 1) * N, y + (q >> 1) * N) = src.at(x, y);
    }
    return b;
}

}  // namespace

BitMatrix cut_window(const StandardPatternFamily& f, int i, int ox, int oy, const std::array<int, 4>& ids) {
    const int N = f.Q.at(static_cast<std::size_t>(i))[0].w;
    if (ox < 0 || oy < 0 || ox > N || oy > N) throw std::invalid_argument("cut_window: offset outside the block");
    return block2x2(f, i, ids).crop(ox, oy, N, N);
}

bool is_standard_structure(const StandardPatternFamily& f, int i, const BitMatrix& m) {
    if (i == 0) return m == f.Q[0][0] || m == f.Q[0][1];
    const int s = f.Q[i - 1][0].w;
    if (m.w != f.Q[i][0].w || m.h != m.w) return false;
    for (int by = 0; by < m.h; by += s)
        for (int bx = 0; bx < m.w; bx += s)
            if (!is_standard_structure(f, i - 1, m.crop(bx, by, s, s))) return false;
    return true;
}

BitMatrix reconstruct_standard(const StandardPatternFamily& f, int i, const BitMatrix& window, int ox, int oy,
                               const std::array<int, 4>& ids) {
    const int N = f.Q.at(static_cast<std::size_t>(i))[0].w;
    if (window.w != N || window.h != N) throw std::invalid_argument("reconstruct_standard: window side");
    BitMatrix q(N, N);
    for (int v = 0; v < N; ++v)
        for (int u = 0; u < N; ++u) {
            int qx = u >= ox ? 0 : 1, qy = v >= oy ? 0 : 1;
            q.ref(u, v) = window.at(u + qx * N - ox, v + qy * N - oy) ^ static_cast<std::uint8_t>(ids[qy * 2 + qx] & 1);
        }
    if (!is_standard_structure(f, i, q)) throw IntegrityError("reconstructed corners are not a standard pattern");
    if (q != f.Q[i][0]) throw IntegrityError("reconstructed corners differ from the level's standard pattern");
    return q;
}

std::uint64_t closure_block_count(const StandardPatternFamily& f, int i, int n) {
    const int N = f.Q.at(static_cast<std::size_t>(i))[0].w;
    if (n < 1 || n > 2 * N) throw std::invalid_argument("closure_block_count: 1 <= n <= 2N");
    std::unordered_set<Bits> seen;
    for (int id = 0; id < 16; ++id) {
        BitMatrix b = block2x2(f, i, {id & 1, id >> 1 & 1, id >> 2 & 1, id >> 3 & 1});
        for (int oy = 0; oy + n <= 2 * N; ++oy)
            for (int ox = 0; ox + n <= 2 * N; ++ox) seen.insert(b.crop(ox, oy, n, n).bits());
    }
    return seen.size();
}

Envelope fit_polynomial_envelope(const std::vector<std::uint64_t>& counts) {
    Envelope e;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        double x = std::log(static_cast<double>(k + 1)), y = std::log(static_cast<double>(counts[k]));
        sx += x, sy += y, sxx += x * x, sxy += x * y, ++m;
    }
    if (m < 2) return e;
    e.B = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    for (std::size_t k = 0; k < counts.size(); ++k)
        e.A = std::max(e.A, static_cast<double>(counts[k]) / std::pow(static_cast<double>(k + 1), e.B));
    e.fits = true;
    return e;
}

// ---- recursive coloring ----

std::vector<Pos> border_cells(int side) {
    std::vector<Pos> b;
    if (side == 1) return {{0, 0}};
    for (int x = 0; x < side; ++x) b.push_back({x, 0});
    for (int y = 1; y < side; ++y) b.push_back({side - 1, y});
    for (int x = side - 2; x >= 0; --x) b.push_back({x, side - 1});
    for (int y = side - 2; y >= 1; --y) b.push_back({0, y});
    return b;
}

std::vector<Letter> border_of(const Pattern& square, int x0, int y0, int side) {
    std::vector<Letter> out;
    for (auto p : border_cells(side)) {
        auto a = square.at({x0 + p.x, y0 + p.y});
        if (!a) throw std::invalid_argument("border_of: cell missing");
        out.push_back(*a);
    }
    return out;
}

namespace {

void require_pairwise(const ShiftSpec& s) {
    if (!s.finite_list() || s.dim != 2) throw std::invalid_argument("recursive_coloring: needs an explicit 2D forbidden list");
    for (auto& f : s.forbidden) {
        auto b = f.bbox();
        if (f.size() > 2 || b.w * b.h > 2) throw std::invalid_argument("recursive_coloring: forbidden patterns must be dominoes");
    }
}

struct Pairwise {
    int A = 0;
    std::vector<char> unary, h, v;  // forbidden letter / horizontal pair (a left of b) / vertical pair (a below b)
    explicit Pairwise(const ShiftSpec& s) : A(s.alphabet.size()), unary(A, 0), h(A * A, 0), v(A * A, 0) {
        for (auto& f : s.forbidden) {
            auto n = f.normalized();
            const auto& c = n.cells();
            if (c.size() == 1) unary[c[0].a] = 1;
            else if (n.bbox().w == 2) h[*n.at({0, 0}) * A + *n.at({1, 0})] = 1;
            else v[*n.at({0, 0}) * A + *n.at({0, 1})] = 1;
        }
    }
};

// Frontier DP over the last w cells in row-major order; exact for nearest-neighbour constraints.
bool completable(const Grid& g, int x0, int y0, int s, const ShiftSpec& sft, const SearchLimits& lim) {
    const Pairwise pw(sft);
    const int A = pw.A;
    std::vector<std::uint64_t> pow(static_cast<std::size_t>(s) + 1, 1);
    for (int i = 1; i <= s; ++i) pow[i] = pow[i - 1] * static_cast<std::uint64_t>(A);
    // state digit x holds the most recent letter in column x
    std::unordered_set<std::uint64_t> cur{0}, next;
    for (int y = 0; y < s; ++y)
        for (int x = 0; x < s; ++x) {
            next.clear();
            const Letter fixed = g.at(x0 + x, y0 + y);
            for (auto st : cur) {
                const int up = y ? static_cast<int>(st / pow[x] % A) : -1;
                const int left = x ? static_cast<int>(st / pow[x - 1] % A) : -1;
                for (int a = 0; a < A; ++a) {
                    if ((fixed != kUnset && a != fixed) || pw.unary[a]) continue;
                    if (up >= 0 && pw.v[up * A + a]) continue;
                    if (left >= 0 && pw.h[left * A + a]) continue;
                    next.insert(st + (static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(up < 0 ? 0 : up)) * pow[x]);
                }
            }
            if (next.size() > lim.node_limit) throw ColoringError("completion search hit its node limit");
            std::swap(cur, next);
            if (cur.empty()) return false;
        }
    return true;
}

void fill(Grid& g, int x0, int y0, int s, const ShiftSpec& sft, const SearchLimits& lim) {
    if (s <= 2) return;
    const int h = (s - 1) / 2, mx = x0 + h, my = y0 + h;
    std::vector<Pos> cross;
    for (int x = x0 + 1; x < x0 + s - 1; ++x) cross.push_back({x, my});
    for (int y = y0 + 1; y < y0 + s - 1; ++y)
        if (y != my) cross.push_back({mx, y});
    const int A = sft.alphabet.size();
    for (auto p : cross) {
        bool placed = false;
        for (Letter a = 0; a < A && !placed; ++a) {
            g.ref(p.x, p.y) = a;
            placed = completable(g, x0, y0, s, sft, lim);
        }
        if (!placed) throw std::logic_error("recursive_coloring: completable square lost its completion");
    }
    fill(g, x0, y0, h + 1, sft, lim);
    fill(g, mx, y0, h + 1, sft, lim);
    fill(g, x0, my, h + 1, sft, lim);
    fill(g, mx, my, h + 1, sft, lim);
}

}  // namespace

Pattern recursive_coloring(const ShiftSpec& sft, int k, const std::vector<Letter>& border, const SearchLimits& lim) {
    require_pairwise(sft);
    if (k < 0 || k > 8) throw std::invalid_argument("recursive_coloring: 0 <= k <= 8");
    const int side = (1 << k) + 1;
    auto cells = border_cells(side);
    if (border.size() != cells.size()) throw std::invalid_argument("recursive_coloring: border length");
    Grid g(0, 0, side, side);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (border[i] < 0 || border[i] >= sft.alphabet.size()) throw std::invalid_argument("recursive_coloring: bad letter");
        g.ref(cells[i].x, cells[i].y) = border[i];
    }
    if (!completable(g, 0, 0, side, sft, lim)) throw ColoringError("border does not extend to an admissible square");
    fill(g, 0, 0, side, sft, lim);
    return g.to_pattern();
}

std::vector<Letter> random_extendable_border(const ShiftSpec& sft, int k, std::uint64_t seed, const SearchLimits& lim) {
    require_pairwise(sft);
    const int side = (1 << k) + 1;
    std::mt19937_64 rng(seed);
    Grid g(0, 0, side, side);
    if (!completable(g, 0, 0, side, sft, lim)) throw ColoringError("no admissible square of this side");
    std::vector<Letter> out;
    for (auto p : border_cells(side)) {
        std::vector<Letter> order(static_cast<std::size_t>(sft.alphabet.size()));
        for (std::size_t a = 0; a < order.size(); ++a) order[a] = static_cast<Letter>(a);
        std::shuffle(order.begin(), order.end(), rng);
        bool placed = false;
        for (Letter a : order) {
            g.ref(p.x, p.y) = a;
            if ((placed = completable(g, 0, 0, side, sft, lim))) {
                out.push_back(a);
                break;
            }
        }
        if (!placed) throw std::logic_error("random_extendable_border: completion lost");
    }
    return out;
}

std::uint64_t verify_description(const ShiftSpec& sft, const Pattern& coloring, int k, int n, const SearchLimits& lim) {
    const int side = (1 << k) + 1;
    if (n < 1 || n > side) throw std::invalid_argument("verify_description: 1 <= n <= side");
    int j = 0;
    while ((1 << j) < n - 1) ++j;
    const int step = 1 << j;
    std::map<std::pair<int, int>, Pattern> derived;
    auto standard = [&](int sx, int sy) -> const Pattern& {
        auto key = std::make_pair(sx, sy);
        auto it = derived.find(key);
        if (it != derived.end()) return it->second;
        Pattern p = recursive_coloring(sft, j, border_of(coloring, sx, sy, step + 1), lim).translated(sx, sy);
        for (auto& c : p.cells())
            if (coloring.at(c.p) != c.a) throw std::runtime_error("standard square does not re-derive");
        return derived.emplace(key, std::move(p)).first->second;
    };
    std::uint64_t checked = 0;
    for (int y = 0; y + n <= side; ++y)
        for (int x = 0; x + n <= side; ++x) {
            int sx0 = std::min(x / step * step, side - 1 - step), sy0 = std::min(y / step * step, side - 1 - step);
            std::vector<const Pattern*> cover;
            for (int sy = sy0; sy <= std::min(sy0 + step, side - 1 - step); sy += step)
                for (int sx = sx0; sx <= std::min(sx0 + step, side - 1 - step); sx += step) cover.push_back(&standard(sx, sy));
            if (cover.size() > 4) throw std::logic_error("more than four covering squares");
            for (int v = y; v < y + n; ++v)
                for (int u = x; u < x + n; ++u) {
                    std::optional<Letter> got;
                    for (auto* c : cover)
                        if ((got = c->at({u, v}))) break;
                    if (!got || got != coloring.at({u, v})) throw std::runtime_error("sub-square not covered by standard squares");
                }
            ++checked;
        }
    return checked;
}

// ---- busy beaver ----

BusyBeaver busy_beaver_program(int m, std::uint64_t t_max) {
    if (m > kMaxEnumerationBits + 1) throw std::invalid_argument("busy_beaver_program: m above the enumeration bound");
    BusyBeaver bb;
    enumerate_programs(m - 1, false, [&](const Bits& b, const Program& p) {
        RunResult r = run(p, t_max);
        if (r.status != RunResult::halted) return;
        if (!bb.program || r.steps > bb.steps || (r.steps == bb.steps && b < *bb.program)) {
            bb.program = b;
            bb.steps = r.steps;
        }
    });
    return bb;
}

}  // namespace symdyn::kolm
