#include "latentplan/worlds.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "latentplan/error.hpp"

namespace latentplan::worlds {

namespace {

constexpr int kGridSide = 3;  // box manipulation: 3x3 grid
constexpr int kTableSlots = 4;
constexpr int kShelfSlots = 4;
constexpr int kColumns = 3;    // box stacking
constexpr int kMaxHeight = 3;  // box stacking

bool grid_adjacent(int a, int b) {
  const int ra = a / kGridSide, ca = a % kGridSide;
  const int rb = b / kGridSide, cb = b % kGridSide;
  return std::abs(ra - rb) + std::abs(ca - cb) == 1;
}

bool occupied(WorldState s, int slot) { return (s.mask >> slot) & 1u; }

// Box stacking: slot = column * kMaxHeight + level, level 0 at the bottom.
int column_height(WorldState s, int col) {
  int h = 0;
  while (h < kMaxHeight && occupied(s, col * kMaxHeight + h)) ++h;
  return h;
}

}  // namespace

WorldSpec::WorldSpec(WorldKind kind) : kind_(kind) {
  switch (kind) {
    case WorldKind::kBoxManipulation:
      n_slots_ = kGridSide * kGridSide;
      n_objects_ = 4;
      break;
    case WorldKind::kShelfArrangement:
      n_slots_ = kTableSlots + kShelfSlots;
      n_objects_ = 4;
      break;
    case WorldKind::kBoxStacking:
      n_slots_ = kColumns * kMaxHeight;
      n_objects_ = 4;
      break;
  }
}

WorldSpec WorldSpec::make(WorldKind kind) { return WorldSpec(kind); }

WorldSpec WorldSpec::from_name(std::string_view name) {
  if (name == "box_manipulation") return make(WorldKind::kBoxManipulation);
  if (name == "shelf_arrangement") return make(WorldKind::kShelfArrangement);
  if (name == "box_stacking") return make(WorldKind::kBoxStacking);
  throw UnknownWorldError("unknown world: " + std::string(name));
}

std::string_view WorldSpec::name() const {
  switch (kind_) {
    case WorldKind::kBoxManipulation: return "box_manipulation";
    case WorldKind::kShelfArrangement: return "shelf_arrangement";
    case WorldKind::kBoxStacking: return "box_stacking";
  }
  return "";
}

bool WorldSpec::is_valid(WorldState s) const {
  if (s.mask >> n_slots_) return false;
  if (std::popcount(s.mask) != n_objects_) return false;
  if (kind_ == WorldKind::kBoxStacking) {
    // Gravity: within a column the occupied levels form a prefix.
    for (int col = 0; col < kColumns; ++col) {
      bool gap = false;
      for (int lvl = 0; lvl < kMaxHeight; ++lvl) {
        const bool occ = occupied(s, col * kMaxHeight + lvl);
        if (occ && gap) return false;
        if (!occ) gap = true;
      }
    }
  }
  return true;
}

std::vector<WorldState> WorldSpec::enumerate_states() const {
  std::vector<WorldState> out;
  for (std::uint32_t mask = 0; mask < (1u << n_slots_); ++mask) {
    const WorldState s{mask};
    if (is_valid(s)) out.push_back(s);
  }
  return out;
}

int WorldSpec::state_index(WorldState s) const {
  if (!is_valid(s)) {
    throw InvalidStateError("state_index: invalid state mask " +
                            std::to_string(s.mask));
  }
  // States enumerate in increasing mask order, so count valid masks below s.
  int idx = 0;
  for (std::uint32_t mask = 0; mask < s.mask; ++mask) {
    if (is_valid(WorldState{mask})) ++idx;
  }
  return idx;
}

std::vector<Action> WorldSpec::legal_actions(WorldState s) const {
  if (!is_valid(s)) {
    throw InvalidStateError("legal_actions: invalid state mask " +
                            std::to_string(s.mask));
  }
  std::vector<Action> out;
  switch (kind_) {
    case WorldKind::kBoxManipulation:
      for (int from = 0; from < n_slots_; ++from) {
        if (!occupied(s, from)) continue;
        for (int to = 0; to < n_slots_; ++to) {
          if (!occupied(s, to) && grid_adjacent(from, to)) {
            out.push_back({from, to});
          }
        }
      }
      break;
    case WorldKind::kShelfArrangement:
      for (int from = 0; from < n_slots_; ++from) {
        if (!occupied(s, from)) continue;
        const bool from_table = from < kTableSlots;
        for (int to = 0; to < n_slots_; ++to) {
          const bool to_table = to < kTableSlots;
          if (!occupied(s, to) && from_table != to_table) {
            out.push_back({from, to});
          }
        }
      }
      break;
    case WorldKind::kBoxStacking:
      for (int ci = 0; ci < kColumns; ++ci) {
        const int hi = column_height(s, ci);
        if (hi == 0) continue;
        for (int cj = 0; cj < kColumns; ++cj) {
          if (cj == ci) continue;
          const int hj = column_height(s, cj);
          if (hj < kMaxHeight) {
            out.push_back({ci * kMaxHeight + (hi - 1), cj * kMaxHeight + hj});
          }
        }
      }
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

WorldState WorldSpec::apply_action(WorldState s, Action a) const {
  const auto legal = legal_actions(s);  // validates s
  if (!std::binary_search(legal.begin(), legal.end(), a)) {
    throw IllegalActionError("apply_action: move " +
                             std::to_string(a.from_slot) + " -> " +
                             std::to_string(a.to_slot) +
                             " not applicable in state mask " +
                             std::to_string(s.mask));
  }
  WorldState next = s;
  next.mask &= ~(1u << a.from_slot);
  next.mask |= 1u << a.to_slot;
  return next;
}

std::vector<Transition> WorldSpec::legal_transitions() const {
  std::vector<Transition> out;
  for (const WorldState s : enumerate_states()) {
    for (const Action a : legal_actions(s)) {
      const WorldState t = apply_action(s, a);
      // Every move is reversible, so each unordered pair shows up from both
      // endpoints; keep it only from the lower-mask side.
      if (s.mask < t.mask) out.push_back({s, t});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool WorldSpec::is_legal_transition(WorldState a, WorldState b) const {
  if (!is_valid(a) || !is_valid(b)) {
    throw InvalidStateError("is_legal_transition: invalid state");
  }
  if (a == b) return false;
  for (const Action act : legal_actions(a)) {
    if (apply_action(a, act) == b) return true;
  }
  return false;
}

}  // namespace latentplan::worlds
