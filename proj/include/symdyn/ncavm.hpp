#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace symdyn::vm {

enum class Activity : std::uint8_t { inactive, secondary, principal };

struct VMCell {
    int bit = 0;
    int mark = 0;    // 0 = none
    Activity act = Activity::inactive;
    int pid = 0;     // principal id 1..k
    int aux = 0;     // small per-cell register
    int signal = 0;  // wire content carried by inactive cells, 0 = none
    friend bool operator==(const VMCell&, const VMCell&) = default;
};

struct VMState {
    std::vector<VMCell> tape;
    int k = 1;
    int state = 0;
    bool error = false;
    std::string error_reason;
    long long steps = 0;
    long long wire = 0;  // total jump distance, diagnostics only
    friend bool operator==(const VMState&, const VMState&) = default;
};

struct Directive {
    int write_bit = -1, write_mark = -1;  // -1 keeps
    int move = 0;                         // -1, 0, +1
    int jump = 0;                         // -1 or +1 jumps to the nearest secondary cell
    Activity leave_as = Activity::secondary;
};

struct Decision {
    int next_state = 0;
    std::vector<Directive> principal;  // indexed by pid-1; missing entries stay put
    std::string error;                 // non-empty raises the error flag
};

struct SecondaryUpdate {
    Activity act = Activity::secondary;
    int aux = 0;
    int move = 0;  // the activity and register travel to the neighbour; data bits stay
};

struct Program {
    std::function<Decision(int state, const std::vector<VMCell>& principals)> control;
    // secondary cells see only their own cell, both internal states and the principal cells
    std::function<SecondaryUpdate(const VMCell& self, int old_state, int new_state, const std::vector<VMCell>& principals)>
        secondary;
    // inactive cells may wake up when the internal state changes
    std::function<std::optional<SecondaryUpdate>(const VMCell& self, int old_state, int new_state)> inactive;
};

std::vector<int> principal_positions(const VMState& s);  // by pid-1, -1 when missing
VMState step(const VMState& s, const Program& p);
VMState jump(const VMState& s, int pid, int direction, Activity leave_as = Activity::secondary);

std::string trace_row(const VMState& s);

// Lists search of a prefix e. Outcome positions refer to (list, element) indices.
struct SearchOutcome {
    enum Kind { unique, pair, error } kind = error;
    int l1 = -1, i1 = -1, l2 = -1, i2 = -1;
    std::string reason;
    long long steps = 0, wire = 0;
    friend bool operator==(const SearchOutcome& a, const SearchOutcome& b) {
        return a.kind == b.kind && a.l1 == b.l1 && a.i1 == b.i1 && a.l2 == b.l2 && a.i2 == b.i2;
    }
};

using Bits = std::vector<int>;
// Published step constant: list_search never exceeds kListSearchC * q VM steps.
inline constexpr int kListSearchC = 10;
SearchOutcome list_search(const Bits& e, const std::vector<std::vector<Bits>>& lists, std::vector<std::string>* trace = nullptr);
SearchOutcome list_search_oracle(const Bits& e, const std::vector<std::vector<Bits>>& lists);

// Special-mark catalog for super-tile input fields. Fields 2..8, sides 0..3 (L, U, R, D).
enum class MarkKind { field_start, field_end, elem_start, elem_end, interior };
inline constexpr int kCatalogSize = 75;
inline constexpr int kGlobalStart = 76, kGlobalEnd = 77;
int mark_id(int field, int side, MarkKind kind);  // throws when the combination is not in the catalog
struct MarkInfo {
    int field = 0, side = -1;
    MarkKind kind = MarkKind::field_start;
};
MarkInfo mark_info(int id);

struct FieldInput {
    int field = 2;
    int side = -1;               // -1 for field 2
    std::vector<Bits> elements;  // non-list fields hold exactly one element
};
bool is_list_field(int field);

// Raw tape: a start cell, each field as pairs (1,b) for data, (0,0) between elements, (0,1) opening
// and closing the field, then an end cell.
Bits encode_fields(const std::vector<FieldInput>& fields);
struct FieldSlot {
    int field = 2, side = -1;
};
VMState init_marks(const Bits& raw, const std::vector<FieldSlot>& schedule);
VMState init_marks(const std::vector<FieldInput>& fields);

}  // namespace symdyn::vm
