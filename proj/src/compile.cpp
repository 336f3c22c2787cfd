#include "symdyn/compile.hpp"

#include <algorithm>
#include <optional>

namespace symdyn {

namespace {

int find_symbol(const std::vector<std::string>& syms, const std::string& s) {
    auto it = std::find(syms.begin(), syms.end(), s);
    return it == syms.end() ? -1 : static_cast<int>(it - syms.begin());
}

void check_symbols(const std::vector<std::string>& syms) {
    for (const char* s : {"0", "1", "End"})
        if (find_symbol(syms, s) < 0) throw std::invalid_argument(std::string("tape alphabet lacks ") + s);
}

std::optional<Letter> tm_next(const TMSpec& m, Letter l, Letter c, Letter r) {
    int hl = m.head_of(l), hc = m.head_of(c), hr = m.head_of(r);
    if ((hl >= 0) + (hc >= 0) + (hr >= 0) > 1) return std::nullopt;
    int sc = m.sym_of(c);
    if (hc >= 0) {
        if (hc == m.halt) return c;
        auto& ru = m.rule(hc, sc);
        return m.letter(ru.write, ru.move == Move::S ? ru.next : -1);
    }
    if (hl >= 0 && hl != m.halt) {
        auto& ru = m.rule(hl, m.sym_of(l));
        if (ru.move == Move::R) return m.letter(sc, ru.next);
    }
    if (hr >= 0 && hr != m.halt) {
        auto& ru = m.rule(hr, m.sym_of(r));
        if (ru.move == Move::L) return m.letter(sc, ru.next);
    }
    return m.letter(sc, -1);
}

bool same_shared(const TwoHeadCell& a, const TwoHeadCell& b) { return a.q == b.q && a.s1 == b.s1 && a.s2 == b.s2; }

bool twohead_ok(const TwoHeadTMSpec& m, const TwoHeadCell* b, const TwoHeadCell* t) {
    const TwoHeadCell& M = b[1];
    const TwoHeadCell& Mt = t[1];
    if (M.frame != Mt.frame) return false;
    if (M.frame) return true;
    int n1 = 0, n2 = 0;
    for (int i = 0; i < 3; ++i) {
        for (const TwoHeadCell* row : {b, t}) {
            const TwoHeadCell& c = row[i];
            if (c.frame) continue;
            if (!same_shared(c, row[1])) return false;
            if (c.h1 && c.sym != c.s1) return false;
            if (c.h2 && c.sym != c.s2) return false;
        }
        n1 += !b[i].frame && b[i].h1;
        n2 += !b[i].frame && b[i].h2;
    }
    if (n1 > 1 || n2 > 1) return false;
    if (M.q == m.halt) return Mt.sym == M.sym && Mt.h1 == M.h1 && Mt.h2 == M.h2 && same_shared(Mt, M);
    auto& ru = m.rule(M.q, M.s1, M.s2);
    if (Mt.q != ru.next) return false;
    auto into_frame = [&](bool h, Move mv) {
        return h && ((mv == Move::R && b[2].frame) || (mv == Move::L && b[0].frame));
    };
    if (into_frame(M.h1, ru.m1) || into_frame(M.h2, ru.m2)) return false;
    int sym = M.sym;
    if (M.h1 && M.h2) {
        if (ru.write1 != ru.write2) return false;
        sym = ru.write1;
    } else if (M.h1) sym = ru.write1;
    else if (M.h2) sym = ru.write2;
    auto arrives = [&](bool TwoHeadCell::*h, Move mv) {
        return (M.*h && mv == Move::S) || (!b[0].frame && b[0].*h && mv == Move::R) ||
               (!b[2].frame && b[2].*h && mv == Move::L);
    };
    return Mt.sym == sym && Mt.h1 == arrives(&TwoHeadCell::h1, ru.m1) && Mt.h2 == arrives(&TwoHeadCell::h2, ru.m2);
}

SpaceTimeDiagram rows_to_diagram(const std::vector<std::vector<Letter>>& rows) {
    SpaceTimeDiagram d;
    int w = static_cast<int>(rows.front().size()), h = static_cast<int>(rows.size());
    d.g = Grid(0, 0, w, h);
    for (int t = 0; t < h; ++t)
        for (int x = 0; x < w; ++x) d.g.ref(x, t) = rows[t][x];
    return d;
}

bool verify_padded(const SpaceTimeDiagram& d, const ShiftSpec& sft, Letter pad, int pw) {
    Grid g(-pw, 0, d.width() + 2 * pw, d.height());
    for (int t = 0; t < d.height(); ++t) {
        for (int k = 1; k <= pw; ++k) {
            g.ref(-k, t) = pad;
            g.ref(d.width() - 1 + k, t) = pad;
        }
        for (int x = 0; x < d.width(); ++x) g.ref(x, t) = d.at(x, t);
    }
    if (!g.complete()) return false;
    return locally_admissible(g, sft);
}

}  // namespace

int TMSpec::end_symbol() const { return find_symbol(symbols, "End"); }

void TMSpec::validate() const {
    check_symbols(symbols);
    if (start < 0 || start >= num_states || halt < 0 || halt >= num_states) throw std::invalid_argument("bad states");
    if (delta.size() != static_cast<std::size_t>(num_states) * nsym()) throw std::invalid_argument("delta size");
    for (int q = 0; q < num_states; ++q) {
        if (q == halt) continue;
        for (int s = 0; s < nsym(); ++s) {
            auto& r = rule(q, s);
            if (r.next < 0 || r.next >= num_states || r.write < 0 || r.write >= nsym())
                throw std::invalid_argument("delta entry out of range");
        }
    }
}

int TwoHeadTMSpec::end_symbol() const { return find_symbol(symbols, "End"); }

void TwoHeadTMSpec::validate() const {
    check_symbols(symbols);
    if (start < 0 || start >= num_states || halt < 0 || halt >= num_states) throw std::invalid_argument("bad states");
    if (delta.size() != static_cast<std::size_t>(num_states) * nsym() * nsym())
        throw std::invalid_argument("delta size");
}

int num_letters(const TwoHeadTMSpec& m) { return 1 + m.nsym() * 4 * m.num_states * m.nsym() * m.nsym(); }

Letter encode_cell(const TwoHeadTMSpec& m, const TwoHeadCell& c) {
    if (c.frame) return 0;
    const int G = m.nsym();
    return 1 + ((((c.sym * 2 + c.h1) * 2 + c.h2) * m.num_states + c.q) * G + c.s1) * G + c.s2;
}

TwoHeadCell decode_cell(const TwoHeadTMSpec& m, Letter a) {
    TwoHeadCell c;
    if (a == 0) {
        c.frame = true;
        return c;
    }
    const int G = m.nsym();
    int v = a - 1;
    c.s2 = v % G;
    v /= G;
    c.s1 = v % G;
    v /= G;
    c.q = v % m.num_states;
    v /= m.num_states;
    c.h2 = v % 2;
    v /= 2;
    c.h1 = v % 2;
    c.sym = v / 2;
    return c;
}

bool NCASpec::deterministic() const {
    return std::all_of(f.begin(), f.end(), [](const std::vector<Letter>& s) { return s.size() == 1; });
}

void NCASpec::validate() const {
    const int A = size();
    if (f.size() != static_cast<std::size_t>(A) * A * A) throw std::invalid_argument("relation size");
    for (auto& s : f)
        if (s.empty()) throw std::invalid_argument("relation must be non-empty");
    if (error >= 0)
        for (int l = 0; l < A; ++l)
            for (int r = 0; r < A; ++r)
                if (options(l, error, r) != std::vector<Letter>{error}) throw std::invalid_argument("error letter must be absorbing");
}

ShiftSpec tm_to_sft(const TMSpec& m) {
    m.validate();
    ShiftSpec s;
    std::vector<std::string> names;
    for (Letter a = 0; a < m.num_letters(); ++a) {
        int h = m.head_of(a);
        names.push_back(m.symbols[m.sym_of(a)] + (h >= 0 ? "@" + std::to_string(h) : ""));
    }
    s.alphabet = Alphabet(names);
    s.name = "tm";
    s.rules.push_back({3, 2,
                       [m](const Letter* c) {
                           auto nx = tm_next(m, c[0], c[1], c[2]);
                           return !nx || *nx != c[4];
                       },
                       "transition"});
    return s;
}

std::uint64_t consistent_triples(const TMSpec& m) {
    const int A = m.num_letters();
    std::uint64_t n = 0;
    for (int l = 0; l < A; ++l)
        for (int c = 0; c < A; ++c)
            for (int r = 0; r < A; ++r) n += tm_next(m, l, c, r).has_value();
    return n;
}

std::uint64_t count_forbidden_rects(const TMSpec& m) {
    auto s = tm_to_sft(m);
    const int A = m.num_letters();
    auto& rule = s.rules.front().forbidden;
    std::uint64_t n = 0;
    Letter c[6];
    std::uint64_t total = 1;
    for (int i = 0; i < 6; ++i) total *= static_cast<std::uint64_t>(A);
    for (std::uint64_t k = 0; k < total; ++k) {
        std::uint64_t v = k;
        for (int i = 0; i < 6; ++i) {
            c[i] = static_cast<Letter>(v % A);
            v /= A;
        }
        n += rule(c);
    }
    return n;
}

ShiftSpec twohead_to_sft(const TwoHeadTMSpec& m) {
    m.validate();
    ShiftSpec s;
    std::vector<std::string> names;
    const int L = num_letters(m);
    for (Letter a = 0; a < L; ++a) names.push_back("c" + std::to_string(a));
    s.alphabet = Alphabet(names);
    s.name = "twohead";
    s.rules.push_back({3, 2,
                       [m](const Letter* c) {
                           TwoHeadCell b[3], t[3];
                           for (int i = 0; i < 3; ++i) {
                               b[i] = decode_cell(m, c[i]);
                               t[i] = decode_cell(m, c[3 + i]);
                           }
                           return !twohead_ok(m, b, t);
                       },
                       "transition"});
    return s;
}

ShiftSpec nca_to_sft(const NCASpec& a) {
    a.validate();
    ShiftSpec s;
    s.alphabet = Alphabet(a.letters);
    s.name = "nca";
    s.rules.push_back({3, 2,
                       [a](const Letter* c) {
                           auto& o = a.options(c[0], c[1], c[2]);
                           return !std::binary_search(o.begin(), o.end(), c[4]);
                       },
                       "relation"});
    if (a.error >= 0) s.rules.push_back({1, 1, [e = a.error](const Letter* c) { return c[0] == e; }, "error"});
    return s;
}

std::vector<Letter> tm_input_row(const TMSpec& m, const std::vector<int>& tape, int head) {
    std::vector<Letter> row;
    for (int x = 0; x < static_cast<int>(tape.size()); ++x) row.push_back(m.letter(tape[x], x == head ? m.start : -1));
    return row;
}

std::vector<Letter> twohead_input_row(const TwoHeadTMSpec& m, const std::vector<int>& tape, int h1, int h2) {
    std::vector<Letter> row;
    for (int x = 0; x < static_cast<int>(tape.size()); ++x) {
        TwoHeadCell c;
        c.sym = tape[x];
        c.h1 = x == h1;
        c.h2 = x == h2;
        c.q = m.start;
        c.s1 = tape[h1];
        c.s2 = tape[h2];
        row.push_back(encode_cell(m, c));
    }
    return row;
}

SpaceTimeDiagram simulate(const TMSpec& m, const std::vector<int>& tape_in, int head, int steps) {
    m.validate();
    const int w = static_cast<int>(tape_in.size());
    if (head < 0 || head >= w) throw BoundaryError("head outside window");
    std::vector<int> tape = tape_in;
    int q = m.start;
    std::vector<std::vector<Letter>> rows;
    auto snap = [&] {
        std::vector<Letter> r;
        for (int x = 0; x < w; ++x) r.push_back(m.letter(tape[x], x == head ? q : -1));
        rows.push_back(std::move(r));
    };
    snap();
    for (int t = 0; t < steps; ++t) {
        if (q != m.halt) {
            auto& ru = m.rule(q, tape[head]);
            tape[head] = ru.write;
            head += static_cast<int>(ru.move);
            q = ru.next;
            if (head < 0 || head >= w) throw BoundaryError("head left the window at step " + std::to_string(t + 1));
        }
        snap();
    }
    return rows_to_diagram(rows);
}

SpaceTimeDiagram simulate(const TwoHeadTMSpec& m, const std::vector<int>& tape_in, int p1, int p2, int steps) {
    m.validate();
    const int w = static_cast<int>(tape_in.size());
    if (p1 < 0 || p1 >= w || p2 < 0 || p2 >= w) throw BoundaryError("head outside window");
    std::vector<int> tape = tape_in;
    int q = m.start;
    std::vector<std::vector<Letter>> rows;
    auto snap = [&] {
        std::vector<Letter> r;
        for (int x = 0; x < w; ++x) {
            TwoHeadCell c;
            c.sym = tape[x];
            c.h1 = x == p1;
            c.h2 = x == p2;
            c.q = q;
            c.s1 = tape[p1];
            c.s2 = tape[p2];
            r.push_back(encode_cell(m, c));
        }
        rows.push_back(std::move(r));
    };
    snap();
    for (int t = 0; t < steps; ++t) {
        if (q != m.halt) {
            auto& ru = m.rule(q, tape[p1], tape[p2]);
            if (p1 == p2 && ru.write1 != ru.write2) throw std::runtime_error("heads co-located with conflicting writes");
            tape[p1] = ru.write1;
            tape[p2] = ru.write2;
            p1 += static_cast<int>(ru.m1);
            p2 += static_cast<int>(ru.m2);
            q = ru.next;
            if (p1 < 0 || p1 >= w || p2 < 0 || p2 >= w)
                throw BoundaryError("head left the window at step " + std::to_string(t + 1));
        }
        snap();
    }
    return rows_to_diagram(rows);
}

SpaceTimeDiagram simulate(const NCASpec& a, const std::vector<Letter>& input, int steps, const ChoiceOracle& choose) {
    a.validate();
    const int w = static_cast<int>(input.size());
    std::vector<std::vector<Letter>> rows{input};
    for (int t = 0; t < steps; ++t) {
        auto& cur = rows.back();
        std::vector<Letter> nx(static_cast<std::size_t>(w));
        for (int x = 0; x < w; ++x) {
            Letter l = x > 0 ? cur[x - 1] : a.boundary;
            Letter r = x + 1 < w ? cur[x + 1] : a.boundary;
            auto& o = a.options(l, cur[x], r);
            int k = choose(t, x, static_cast<int>(o.size()));
            nx[x] = o[static_cast<std::size_t>(k) % o.size()];
        }
        rows.push_back(std::move(nx));
    }
    return rows_to_diagram(rows);
}

SpaceTimeDiagram simulate(const NCASpec& a, const std::vector<Letter>& input, int steps, const std::vector<int>& choices) {
    const int w = static_cast<int>(input.size());
    return simulate(a, input, steps, [&](int t, int x, int) {
        if (choices.empty()) return 0;
        return choices[(static_cast<std::size_t>(t) * w + x) % choices.size()];
    });
}

Letter pad_letter(const TMSpec& m) { return m.letter(m.end_symbol(), -1); }
Letter pad_letter(const TwoHeadTMSpec&) { return 0; }
Letter pad_letter(const NCASpec& a) { return a.boundary; }

bool verify_spacetime(const SpaceTimeDiagram& d, const TMSpec& m) {
    return verify_padded(d, tm_to_sft(m), pad_letter(m), pad_width(m));
}
bool verify_spacetime(const SpaceTimeDiagram& d, const TwoHeadTMSpec& m) {
    for (Letter a : d.g.v)
        if (a < 0 || a >= num_letters(m)) return false;
    return verify_padded(d, twohead_to_sft(m), pad_letter(m), pad_width(m));
}
bool verify_spacetime(const SpaceTimeDiagram& d, const NCASpec& a) {
    return verify_padded(d, nca_to_sft(a), pad_letter(a), pad_width(a));
}

std::vector<SpaceTimeDiagram> admissible_diagrams(const ShiftSpec& sft, Letter pad, const std::vector<Letter>& bottom,
                                                  int height, std::size_t max_results, int pw) {
    const int w = static_cast<int>(bottom.size());
    Grid g(-pw, 0, w + 2 * pw, height);
    for (int t = 0; t < height; ++t)
        for (int k = 1; k <= pw; ++k) {
            g.ref(-k, t) = pad;
            g.ref(w - 1 + k, t) = pad;
        }
    for (int x = 0; x < w; ++x) g.ref(x, 0) = bottom[x];
    std::vector<SpaceTimeDiagram> out;
    enumerate_completions(g, sft, [&](const Grid& c) {
        SpaceTimeDiagram d;
        d.g = Grid(0, 0, w, height);
        for (int t = 0; t < height; ++t)
            for (int x = 0; x < w; ++x) d.g.ref(x, t) = c.at(x, t);
        out.push_back(std::move(d));
        return out.size() < max_results;
    });
    return out;
}

namespace machines {

namespace {
TMSpec blank_tm(int states) {
    TMSpec m;
    m.num_states = states;
    m.delta.assign(static_cast<std::size_t>(states) * m.nsym(), TMRule{});
    return m;
}
TMRule& at(TMSpec& m, int q, const std::string& s) {
    return m.delta[static_cast<std::size_t>(q) * m.nsym() + find_symbol(m.symbols, s)];
}
}  // namespace

TMSpec noop() { return blank_tm(1); }

TMSpec unary_successor() {
    TMSpec m = blank_tm(2);
    m.start = 0;
    m.halt = 1;
    at(m, 0, "1") = {0, 1, Move::R};
    at(m, 0, "0") = {1, 1, Move::S};
    at(m, 0, "End") = {1, m.end_symbol(), Move::S};
    return m;
}

TMSpec binary_increment() {
    TMSpec m = blank_tm(2);
    m.start = 0;
    m.halt = 1;
    at(m, 0, "1") = {0, 0, Move::L};
    at(m, 0, "0") = {1, 1, Move::S};
    at(m, 0, "End") = {1, 1, Move::S};
    return m;
}

TMSpec random_tm(std::mt19937_64& rng, int states, int extra_symbols) {
    TMSpec m;
    for (int i = 0; i < extra_symbols; ++i) m.symbols.push_back("x" + std::to_string(i));
    m.num_states = states + 1;
    m.start = 0;
    m.halt = states;
    m.delta.resize(static_cast<std::size_t>(m.num_states) * m.nsym());
    std::uniform_int_distribution<int> qd(0, states), sd(0, m.nsym() - 1), md(-1, 1);
    for (int q = 0; q < states; ++q)
        for (int s = 0; s < m.nsym(); ++s) at(m, q, m.symbols[s]) = {qd(rng), sd(rng), static_cast<Move>(md(rng))};
    return m;
}

TwoHeadTMSpec twohead_stationary() {
    TwoHeadTMSpec m;
    m.num_states = 1;
    m.delta.assign(static_cast<std::size_t>(m.nsym()) * m.nsym(), TwoHeadRule{});
    return m;
}

TwoHeadTMSpec twohead_copy() {
    TwoHeadTMSpec m;
    m.num_states = 4;
    m.start = 0;
    m.halt = 3;
    const int G = m.nsym();
    m.delta.assign(static_cast<std::size_t>(m.num_states) * G * G, TwoHeadRule{});
    for (int q = 0; q < 3; ++q)
        for (int s1 = 0; s1 < G; ++s1)
            for (int s2 = 0; s2 < G; ++s2)
                m.delta[(static_cast<std::size_t>(q) * G + s1) * G + s2] = {q + 1, s2, s2, Move::R, Move::R};
    return m;
}

namespace {
NCASpec binary_ca(const std::function<std::vector<Letter>(Letter, Letter, Letter)>& f) {
    NCASpec a;
    a.letters = {"0", "1"};
    for (Letter l = 0; l < 2; ++l)
        for (Letter m = 0; m < 2; ++m)
            for (Letter r = 0; r < 2; ++r) a.f.push_back(f(l, m, r));
    return a;
}
}  // namespace

NCASpec identity_ca() { return binary_ca([](Letter, Letter m, Letter) { return std::vector<Letter>{m}; }); }
NCASpec full_choice_ca() { return binary_ca([](Letter, Letter, Letter) { return std::vector<Letter>{0, 1}; }); }
NCASpec xor_ca() { return binary_ca([](Letter l, Letter, Letter r) { return std::vector<Letter>{l ^ r}; }); }

NCASpec random_nca(std::mt19937_64& rng, int letters, double branch_prob) {
    NCASpec a;
    for (int i = 0; i < letters; ++i) a.letters.push_back(std::to_string(i));
    std::uniform_int_distribution<int> ld(0, letters - 1);
    std::bernoulli_distribution br(branch_prob);
    for (int k = 0; k < letters * letters * letters; ++k) {
        std::vector<Letter> s{ld(rng)};
        if (br(rng)) s.push_back(ld(rng));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        a.f.push_back(s);
    }
    return a;
}

}  // namespace machines

}  // namespace symdyn
