#pragma once

#include <compare>
#include <cstdint>
#include <string_view>
#include <vector>

namespace latentplan::worlds {

// The three simulated manipulation domains. Each one is a finite family of
// slot-occupancy states: a fixed number of identical objects distributed
// over a fixed set of slots, with a world-specific move rule.
enum class WorldKind {
  // 3x3 grid, 4 boxes. A move slides one box to an empty 4-neighbour cell.
  kBoxManipulation,
  // 4 table slots + 4 shelf slots, 4 objects. A move carries one object
  // from a table slot to an empty shelf slot or back; no rearrangement
  // within the same furniture piece.
  kShelfArrangement,
  // 3 columns of height up to 3, 4 boxes, gravity (no floating boxes).
  // A move takes the top box of one column and drops it on another.
  kBoxStacking,
};

// Occupancy bitmask over the world's slots; bit i set <=> slot i holds an
// object. The mask alone identifies the state because objects are identical.
struct WorldState {
  std::uint32_t mask = 0;
  friend auto operator<=>(const WorldState&, const WorldState&) = default;
};

// Move one object between two slots.
struct Action {
  int from_slot = -1;
  int to_slot = -1;
  friend auto operator<=>(const Action&, const Action&) = default;
};

// Unordered pair of states one legal action apart, stored with
// a.mask < b.mask so each pair appears exactly once.
struct Transition {
  WorldState a, b;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

class WorldSpec {
 public:
  static WorldSpec make(WorldKind kind);
  // Accepts "box_manipulation", "shelf_arrangement", "box_stacking";
  // throws UnknownWorldError otherwise.
  static WorldSpec from_name(std::string_view name);

  WorldKind kind() const { return kind_; }
  std::string_view name() const;
  int n_slots() const { return n_slots_; }
  int n_objects() const { return n_objects_; }

  // True iff the mask uses only valid slots, has exactly n_objects bits set
  // and satisfies the world's structural invariant (gravity for stacking).
  bool is_valid(WorldState s) const;

  // All valid states in increasing mask order.
  std::vector<WorldState> enumerate_states() const;

  // Index of s within enumerate_states(); throws InvalidStateError.
  int state_index(WorldState s) const;

  // Every action applicable in s, ordered by (from_slot, to_slot).
  // Throws InvalidStateError if s is invalid.
  std::vector<Action> legal_actions(WorldState s) const;

  // Successor state; throws IllegalActionError if a is not applicable in s
  // (and InvalidStateError if s itself is invalid).
  WorldState apply_action(WorldState s, Action a) const;

  // Every unordered pair of states one action apart, ordered by (a, b).
  // The move rules are reversible, so the transition relation is symmetric
  // and the unordered pair is the natural unit; the directed count is
  // exactly twice the size of this list.
  std::vector<Transition> legal_transitions() const;

  // Symmetric adjacency test: is there a legal action mapping a to b or
  // b to a? False for a == b. Throws InvalidStateError on invalid input.
  bool is_legal_transition(WorldState a, WorldState b) const;

 private:
  explicit WorldSpec(WorldKind kind);

  WorldKind kind_;
  int n_slots_ = 0;
  int n_objects_ = 0;
};

}  // namespace latentplan::worlds
