#include "symdyn/ncavm.hpp"

#include <stdexcept>

namespace symdyn::vm {

std::vector<int> principal_positions(const VMState& s) {
    std::vector<int> pos(static_cast<std::size_t>(s.k), -1);
    for (int i = 0; i < static_cast<int>(s.tape.size()); ++i) {
        const auto& c = s.tape[i];
        if (c.act != Activity::principal) continue;
        if (c.pid < 1 || c.pid > s.k || pos[c.pid - 1] >= 0) return {};
        pos[c.pid - 1] = i;
    }
    for (int p : pos)
        if (p < 0) return {};
    return pos;
}

namespace {

VMState fail(VMState s, const std::string& why) {
    s.error = true;
    s.error_reason = why;
    return s;
}

}  // namespace

VMState step(const VMState& s0, const Program& prog) {
    if (s0.error) return s0;
    VMState s = s0;
    const int n = static_cast<int>(s.tape.size());
    for (int i = 0; i + 1 < n; ++i) {
        const auto &a = s.tape[i], &b = s.tape[i + 1];
        if (a.act == Activity::inactive && b.act == Activity::inactive && a.signal && b.signal && a.signal != b.signal)
            return fail(s, "neighbouring inactive cells carry different signals");
    }
    auto pos = principal_positions(s);
    if (pos.empty()) return fail(s, "principal cells are not exactly 1..k");
    std::vector<VMCell> pcs;
    for (int p : pos) pcs.push_back(s.tape[p]);
    Decision dec = prog.control(s.state, pcs);
    const int old_state = s.state, new_state = dec.next_state;

    // Secondary and waking cells first; principals act on the result.
    std::vector<VMCell>& T = s.tape;
    const std::vector<VMCell> old = s0.tape;
    struct Place {
        int at;
        SecondaryUpdate u;
    };
    std::vector<Place> places;
    for (int i = 0; i < n; ++i) {
        const auto& c = old[i];
        if (c.act == Activity::secondary) {
            SecondaryUpdate u{Activity::secondary, c.aux, 0};
            if (prog.secondary) u = prog.secondary(c, old_state, new_state, pcs);
            places.push_back({i + u.move, u});
        } else if (c.act == Activity::inactive && old_state != new_state && prog.inactive) {
            if (auto u = prog.inactive(c, old_state, new_state)) places.push_back({i + u->move, *u});
        }
    }
    for (int i = 0; i < n; ++i)
        if (old[i].act == Activity::secondary) {
            T[i].act = Activity::inactive;
            T[i].aux = 0;
        }
    for (auto& p : places) {
        if (p.at < 0 || p.at >= n) return fail(s, "secondary cell left the tape");
        if (old[p.at].act == Activity::principal) return fail(s, "secondary cell ran into a principal cell");
        if (p.u.act == Activity::inactive) {
            if (T[p.at].act != Activity::secondary) T[p.at].aux = p.u.aux;
            continue;
        }
        T[p.at].act = p.u.act;
        T[p.at].aux = p.u.aux;
    }

    for (int id = 1; id <= s.k; ++id) {
        if (static_cast<std::size_t>(id - 1) >= dec.principal.size()) continue;
        const Directive& d = dec.principal[id - 1];
        int at = -1;
        for (int i = 0; i < n; ++i)
            if (T[i].act == Activity::principal && T[i].pid == id) at = i;
        if (d.write_bit >= 0) T[at].bit = d.write_bit;
        if (d.write_mark >= 0) T[at].mark = d.write_mark;
        int target = at;
        if (d.jump != 0) {
            target = -1;
            for (int i = at + d.jump; i >= 0 && i < n; i += d.jump) {
                if (T[i].act == Activity::principal) return fail(s, "jump blocked by a principal cell");
                if (T[i].act == Activity::secondary) {
                    target = i;
                    break;
                }
            }
            if (target < 0) return fail(s, "jump found no secondary cell");
            s.wire += target > at ? target - at : at - target;
        } else if (d.move != 0) {
            target = at + d.move;
            if (target < 0 || target >= n) return fail(s, "principal cell left the tape");
            if (T[target].act == Activity::principal) return fail(s, "principal cells collide");
        }
        if (target != at) {
            T[target].act = Activity::principal;
            T[target].pid = id;
            T[at].act = d.leave_as;
            T[at].pid = 0;
            if (d.leave_as == Activity::inactive) T[at].aux = 0;
        }
    }
    s.state = new_state;
    ++s.steps;
    if (!dec.error.empty()) return fail(s, dec.error);
    if (principal_positions(s).empty()) return fail(s, "principal count not conserved");
    return s;
}

VMState jump(const VMState& s, int pid, int direction, Activity leave_as) {
    if (pid < 1 || pid > s.k) throw std::invalid_argument("jump: unknown principal id");
    Program p;
    p.control = [&](int st, const std::vector<VMCell>&) {
        Decision d;
        d.next_state = st;
        d.principal.resize(static_cast<std::size_t>(pid));
        d.principal[pid - 1].jump = direction;
        d.principal[pid - 1].leave_as = leave_as;
        return d;
    };
    return step(s, p);
}

std::string trace_row(const VMState& s) {
    std::string r;
    for (auto& c : s.tape) {
        char ch = static_cast<char>('0' + c.bit);
        if (c.act == Activity::secondary) ch = c.bit ? 'i' : 'o';
        if (c.act == Activity::principal) ch = c.bit ? 'I' : 'O';
        r += ch;
    }
    if (s.error) r += "  !" + s.error_reason;
    return r;
}

// ---- list search ----

namespace {

enum : int { kMarkEEnd = 1, kMarkElemStart = 2, kMarkListFirst = 3, kMarkElemEnd = 4, kMarkF = 5 };
enum : int { kAuxRunner = 1, kAuxListFirst = 2, kAuxF = 3 };
enum : int { sCmp, sJ1, sJ2, sChk, sJ3, sJ4, sBackU, sBack2, sBack1, sDone };

struct Layout {
    VMState init;
    std::vector<std::vector<int>> start;  // per list, per element: first cell
    std::vector<std::vector<int>> len;
};

Layout build(const Bits& e, const std::vector<std::vector<Bits>>& lists) {
    const int q = static_cast<int>(e.size());
    if (q < 1) throw std::invalid_argument("list_search: empty prefix");
    Layout L;
    auto& t = L.init.tape;
    for (int j = 0; j < q; ++j) t.push_back({e[j], j == q - 1 ? kMarkEEnd : 0});
    t[0].act = Activity::principal;
    t[0].pid = 1;
    for (auto& list : lists) {
        L.start.emplace_back();
        L.len.emplace_back();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Bits& el = list[i];
            if (static_cast<int>(el.size()) < q) throw std::invalid_argument("list_search: element shorter than prefix");
            L.start.back().push_back(static_cast<int>(t.size()));
            L.len.back().push_back(static_cast<int>(el.size()));
            for (std::size_t j = 0; j < el.size(); ++j) {
                VMCell c{el[j], 0};
                if (j == 0) {
                    c.mark = i == 0 ? kMarkListFirst : kMarkElemStart;
                    c.act = Activity::secondary;
                    c.aux = kAuxRunner;
                } else if (j + 1 == el.size()) {
                    c.mark = kMarkElemEnd;
                }
                t.push_back(c);
            }
        }
    }
    VMCell f{0, kMarkF, Activity::secondary, 0, kAuxF};
    t.push_back(f);
    L.init.k = 1;
    L.init.state = sCmp;
    return L;
}

bool is_start(const VMCell& c) { return c.mark == kMarkElemStart || c.mark == kMarkListFirst; }

Program search_program() {
    Program p;
    p.control = [](int st, const std::vector<VMCell>& pc) {
        const VMCell& c = pc[0];
        Decision d;
        d.principal.resize(1);
        Directive& a = d.principal[0];
        d.next_state = st;
        auto jump_to = [&](int dir, Activity leave, int next) {
            a.jump = dir;
            a.leave_as = leave;
            d.next_state = next;
        };
        switch (st) {
            case sCmp:
                if (c.mark == kMarkEEnd) jump_to(+1, Activity::inactive, sJ1);
                else {
                    a.move = +1;
                    a.leave_as = Activity::inactive;
                }
                break;
            case sJ1:
                if (c.aux == kAuxF) d.error = "no element has the prefix";
                else jump_to(+1, Activity::secondary, sJ2);
                break;
            case sJ2:
                if (c.aux == kAuxF) jump_to(-1, Activity::secondary, sBackU);
                // a match sitting on its list's first cell cannot share that list with the earlier one
                else if (c.mark == kMarkListFirst) jump_to(+1, Activity::secondary, sJ4);
                else jump_to(-1, Activity::secondary, sChk);
                break;
            case sChk:
                if (c.aux == kAuxRunner) d.error = "two matches in the same list";
                else jump_to(+1, Activity::inactive, sJ3);
                break;
            case sJ3:
                jump_to(+1, Activity::secondary, sJ4);
                break;
            case sJ4:
                if (c.aux != kAuxF) d.error = "three or more matches";
                else jump_to(-1, Activity::secondary, sBack2);
                break;
            case sBack2:
            case sBack1:
            case sBackU:
                if (is_start(c)) {
                    if (st == sBack2) jump_to(-1, Activity::secondary, sBack1);
                    else d.next_state = sDone;
                } else {
                    a.move = -1;
                    a.leave_as = Activity::inactive;
                }
                break;
            default:
                break;
        }
        return d;
    };
    p.secondary = [](const VMCell& self, int old_st, int new_st, const std::vector<VMCell>& pc) {
        SecondaryUpdate u{Activity::secondary, self.aux, 0};
        if (old_st == sCmp && self.aux == kAuxRunner) {
            if (self.bit != pc[0].bit) return SecondaryUpdate{Activity::inactive, 0, 0};
            if (pc[0].mark != kMarkEEnd) u.move = +1;
        }
        if (old_st == sChk && new_st == sJ3 && self.aux == kAuxListFirst) return SecondaryUpdate{Activity::inactive, 0, 0};
        return u;
    };
    p.inactive = [](const VMCell& self, int old_st, int new_st) -> std::optional<SecondaryUpdate> {
        if (old_st == sJ2 && new_st == sChk && self.mark == kMarkListFirst)
            return SecondaryUpdate{Activity::secondary, kAuxListFirst, 0};
        return std::nullopt;
    };
    return p;
}

std::pair<int, int> locate(const Layout& L, int pos) {
    for (std::size_t l = 0; l < L.start.size(); ++l)
        for (std::size_t i = 0; i < L.start[l].size(); ++i)
            if (pos >= L.start[l][i] && pos < L.start[l][i] + L.len[l][i]) return {static_cast<int>(l), static_cast<int>(i)};
    return {-1, -1};
}

}  // namespace

SearchOutcome list_search(const Bits& e, const std::vector<std::vector<Bits>>& lists, std::vector<std::string>* trace) {
    Layout L = build(e, lists);
    Program prog = search_program();
    VMState s = L.init;
    const long long cap = 100LL * static_cast<long long>(e.size()) + 100;
    int e2 = -1;
    if (trace) trace->push_back(trace_row(s));
    while (!s.error && s.state != sDone && s.steps < cap) {
        if (s.state == sBack2) {
            int p = principal_positions(s)[0];
            if (is_start(s.tape[p])) e2 = p;
        }
        s = step(s, prog);
        if (trace) trace->push_back(trace_row(s));
    }
    SearchOutcome out;
    out.steps = s.steps;
    out.wire = s.wire;
    if (s.error || s.state != sDone) {
        out.kind = SearchOutcome::error;
        out.reason = s.error ? s.error_reason : "step cap reached";
        return out;
    }
    auto [l, i] = locate(L, principal_positions(s)[0]);
    out.l1 = l;
    out.i1 = i;
    if (e2 < 0) {
        out.kind = SearchOutcome::unique;
    } else {
        out.kind = SearchOutcome::pair;
        std::tie(out.l2, out.i2) = locate(L, e2);
    }
    return out;
}

SearchOutcome list_search_oracle(const Bits& e, const std::vector<std::vector<Bits>>& lists) {
    std::vector<std::pair<int, int>> hits;
    for (std::size_t l = 0; l < lists.size(); ++l)
        for (std::size_t i = 0; i < lists[l].size(); ++i) {
            const Bits& el = lists[l][i];
            if (el.size() >= e.size() && std::equal(e.begin(), e.end(), el.begin()))
                hits.push_back({static_cast<int>(l), static_cast<int>(i)});
        }
    SearchOutcome o;
    if (hits.size() == 1) {
        o.kind = SearchOutcome::unique;
        std::tie(o.l1, o.i1) = hits[0];
    } else if (hits.size() == 2 && hits[0].first != hits[1].first) {
        o.kind = SearchOutcome::pair;
        std::tie(o.l1, o.i1) = hits[0];
        std::tie(o.l2, o.i2) = hits[1];
    }
    return o;
}

// ---- special marks ----

bool is_list_field(int field) { return field == 5 || field == 6 || field == 8; }

int mark_id(int field, int side, MarkKind kind) {
    auto bad = [] { throw std::invalid_argument("mark not in catalog"); };
    int k = static_cast<int>(kind);
    if (field == 2) {
        if (side != -1 || k > 1) bad();
        return 1 + k;
    }
    if (side < 0 || side > 3) bad();
    switch (field) {
        case 3:
        case 4:
            if (k > 1) bad();
            return 3 + (field - 3) * 8 + side * 2 + k;
        case 5:
            if (kind == MarkKind::interior) {
                if (side != 0) bad();
                return 35;
            }
            return 19 + side * 4 + k;
        case 6:
            if (k > 3) bad();
            return 36 + side * 4 + k;
        case 7:
            if (k > 1) bad();
            return 52 + side * 2 + k;
        case 8:
            if (k > 3) bad();
            return 60 + side * 4 + k;
        default:
            bad();
    }
    return 0;
}

MarkInfo mark_info(int id) {
    for (int f = 2; f <= 8; ++f)
        for (int s = (f == 2 ? -1 : 0); s <= (f == 2 ? -1 : 3); ++s)
            for (int k = 0; k <= 4; ++k) {
                try {
                    if (mark_id(f, s, static_cast<MarkKind>(k)) == id) return {f, s, static_cast<MarkKind>(k)};
                } catch (const std::invalid_argument&) {
                }
            }
    throw std::invalid_argument("unknown mark id");
}

Bits encode_fields(const std::vector<FieldInput>& fields) {
    Bits raw{1};
    for (auto& f : fields) {
        if (!is_list_field(f.field) && f.elements.size() != 1) throw std::invalid_argument("non-list field needs one element");
        raw.insert(raw.end(), {0, 1});
        for (std::size_t i = 0; i < f.elements.size(); ++i) {
            if (f.elements[i].empty()) throw std::invalid_argument("empty element");
            if (i) raw.insert(raw.end(), {0, 0});
            for (int b : f.elements[i]) raw.insert(raw.end(), {1, b});
        }
        raw.insert(raw.end(), {0, 1});
    }
    raw.push_back(1);
    return raw;
}

namespace {

enum : int { wG0, wOut, wOpen, wIn, wData, wDelim, wG1, wDone };

struct InitState {
    int fi = 0, where = wG0;
    bool prevdata = false, after_sep = false;
    int pack() const { return ((fi * 8 + where) * 2 + prevdata) * 2 + after_sep; }
    static InitState unpack(int v) {
        InitState s;
        s.after_sep = v & 1;
        s.prevdata = (v >> 1) & 1;
        s.where = (v >> 2) % 8;
        s.fi = (v >> 2) / 8;
        return s;
    }
};

}  // namespace

VMState init_marks(const Bits& raw, const std::vector<FieldSlot>& schedule) {
    VMState s;
    for (int b : raw) s.tape.push_back({b});
    if (s.tape.empty()) return fail(s, "empty input");
    s.tape[0].act = Activity::principal;
    s.tape[0].pid = 1;
    s.state = InitState{}.pack();
    const int nf = static_cast<int>(schedule.size());
    Program p;
    p.control = [&](int st, const std::vector<VMCell>& pc) {
        InitState in = InitState::unpack(st), nx = in;
        const int bit = pc[0].bit;
        Decision d;
        d.principal.resize(1);
        Directive& a = d.principal[0];
        a.leave_as = Activity::inactive;
        a.move = +1;
        FieldSlot slot = in.fi < nf ? schedule[in.fi] : FieldSlot{};
        const bool list = is_list_field(slot.field);
        const int interior = slot.field == 5 && slot.side == 0 ? mark_id(5, 0, MarkKind::interior) : -1;
        auto mk = [&](MarkKind k) { return mark_id(slot.field, slot.side, k); };
        switch (in.where) {
            case wG0:
                a.write_mark = kGlobalStart;
                nx.where = nf == 0 ? wG1 : wOut;
                break;
            case wOut:
                if (bit != 0) d.error = "malformed field opening";
                a.write_mark = mk(MarkKind::field_start);
                nx.where = wOpen;
                break;
            case wOpen:
                if (bit != 1) d.error = "malformed field opening";
                a.write_mark = interior;
                nx.where = wIn;
                nx.prevdata = nx.after_sep = false;
                break;
            case wIn:
                if (bit == 1) {
                    a.write_mark = list && !in.prevdata ? mk(MarkKind::elem_start) : interior;
                    nx.where = wData;
                } else {
                    a.write_mark = list && in.prevdata ? mk(MarkKind::elem_end) : interior;
                    nx.where = wDelim;
                }
                break;
            case wData:
                a.write_mark = interior;
                nx.where = wIn;
                nx.prevdata = true;
                nx.after_sep = false;
                break;
            case wDelim:
                if (bit == 0) {
                    if (!list || !in.prevdata) d.error = "misplaced element separator";
                    a.write_mark = interior;
                    nx.where = wIn;
                    nx.prevdata = false;
                    nx.after_sep = true;
                } else {
                    if (in.after_sep) d.error = "separator before field end";
                    a.write_mark = mk(MarkKind::field_end);
                    nx.fi = in.fi + 1;
                    nx.where = nx.fi == nf ? wG1 : wOut;
                    nx.prevdata = nx.after_sep = false;
                }
                break;
            case wG1:
                if (bit != 1) d.error = "malformed end cell";
                a.write_mark = kGlobalEnd;
                a.move = 0;
                nx.where = wDone;
                break;
            default:
                a.move = 0;
                break;
        }
        if (a.write_mark < 0) a.write_mark = -1;
        d.next_state = nx.pack();
        return d;
    };
    while (!s.error && InitState::unpack(s.state).where != wDone) {
        s = step(s, p);
        if (s.steps > 5 * static_cast<long long>(raw.size()) + 5) return fail(s, "sweep did not terminate");
    }
    if (!s.error) {
        int at = principal_positions(s)[0];
        if (at + 1 != static_cast<int>(s.tape.size())) return fail(s, "trailing cells after the end cell");
    }
    return s;
}

VMState init_marks(const std::vector<FieldInput>& fields) {
    std::vector<FieldSlot> sched;
    for (auto& f : fields) sched.push_back({f.field, f.side});
    return init_marks(encode_fields(fields), sched);
}

}  // namespace symdyn::vm
