#pragma once

// STRIPS-style environment model over interned ground atoms.
//
// A ground atom (e.g. On(Coffee,Table)) is interned to an AtomId. A signed
// literal is encoded as `atom * 2 + negated`, so sorting literals groups each
// atom with its complement. States use the closed-world reading: an atom not
// in the state is false.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "optbt/cost.hpp"
#include "optbt/logic.hpp"

namespace optbt::world {

using AtomId = std::uint32_t;
using ActionId = std::uint32_t;

class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(AtomId atom, bool negated) : code_(atom * 2 + (negated ? 1U : 0U)) {}
  static constexpr Lit pos(AtomId atom) { return Lit(atom, false); }
  static constexpr Lit neg(AtomId atom) { return Lit(atom, true); }
  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr AtomId atom() const { return code_ >> 1; }
  constexpr bool negated() const { return (code_ & 1U) != 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr Lit complement() const { return from_code(code_ ^ 1U); }

  friend constexpr auto operator<=>(Lit, Lit) = default;
  friend constexpr bool operator==(Lit, Lit) = default;

 private:
  std::uint32_t code_ = 0;
};

/// Sorted, duplicate-free set of signed literals. May be inconsistent
/// (contain l and !l); callers that need consistency check consistent().
class ConditionSet {
 public:
  ConditionSet() = default;
  ConditionSet(std::initializer_list<Lit> lits);
  explicit ConditionSet(std::vector<Lit> lits);

  std::span<const Lit> lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  bool contains(Lit l) const;
  bool consistent() const;
  bool subset_of(const ConditionSet& other) const;
  bool intersects(const ConditionSet& other) const;

  ConditionSet unite(const ConditionSet& other) const;
  ConditionSet minus(const ConditionSet& other) const;
  ConditionSet intersect(const ConditionSet& other) const;

  friend bool operator==(const ConditionSet&, const ConditionSet&) = default;
  friend auto operator<=>(const ConditionSet&, const ConditionSet&) = default;

 private:
  std::vector<Lit> lits_;
};

/// Set of true atoms.
class WorldState {
 public:
  WorldState() = default;
  WorldState(std::initializer_list<AtomId> atoms);
  explicit WorldState(std::vector<AtomId> atoms);

  std::span<const AtomId> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool contains(AtomId atom) const;
  bool holds(Lit l) const { return contains(l.atom()) != l.negated(); }

  friend bool operator==(const WorldState&, const WorldState&) = default;
  friend auto operator<=>(const WorldState&, const WorldState&) = default;

 private:
  std::vector<AtomId> atoms_;
};

struct GroundAction {
  std::string name;
  ConditionSet pre;
  std::vector<AtomId> add;  // sorted
  std::vector<AtomId> del;  // sorted, disjoint from add
  Cost cost;
};

/// Effects in signed form: after executing the action every literal of
/// `add` is true and every literal of `del` is false.
struct SignedEffects {
  ConditionSet add;
  ConditionSet del;
};

class PreconditionViolated : public std::runtime_error {
 public:
  explicit PreconditionViolated(const std::string& action)
      : std::runtime_error("precondition of '" + action + "' does not hold") {}
};

/// True iff every literal of `c` holds in `s`.
bool holds(const ConditionSet& c, const WorldState& s);

/// s ∪ add(a) \ del(a). Throws PreconditionViolated if pre(a) does not hold.
WorldState apply(const GroundAction& a, const WorldState& s);

/// add ∪ {¬l : l ∈ del}  and  del ∪ {¬l : l ∈ add}.
SignedEffects signed_effects(const GroundAction& a);

/// Interning table for ground atoms of condition predicates.
class AtomTable {
 public:
  AtomId intern(const logic::Atom& atom);
  /// Throws std::out_of_range if unknown.
  AtomId id(const logic::Atom& atom) const;
  const AtomId* find(const logic::Atom& atom) const;
  const logic::Atom& atom(AtomId id) const { return atoms_.at(id); }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::vector<logic::Atom> atoms_;
  std::unordered_map<std::string, AtomId> index_;
};

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fully grounded planning domain: vocabulary, the universe of ground
/// condition literals, and ground actions. Immutable once built.
class Domain {
 public:
  /// `atoms` must contain every atom the actions mention. Throws
  /// GroundingError on add/del overlap or a negative cost.
  Domain(logic::Vocabulary vocab, AtomTable atoms, std::vector<GroundAction> actions);

  /// Grounds every condition predicate over all category-compatible object
  /// tuples and interns the result, in predicate then tuple order.
  static AtomTable ground_atoms(const logic::Vocabulary& vocab);

  const logic::Vocabulary& vocabulary() const { return vocab_; }
  const AtomTable& atoms() const { return atoms_; }
  std::span<const GroundAction> actions() const { return actions_; }
  const GroundAction& action(ActionId id) const { return actions_.at(id); }
  const SignedEffects& effects(ActionId id) const { return effects_.at(id); }
  std::size_t literal_count() const { return atoms_.size(); }

  /// Actions whose precondition or signed add-effects contain `l`.
  std::span<const ActionId> touching(Lit l) const;

  /// Throws std::out_of_range naming the literal if it is not in the universe.
  Lit literal(const logic::SignedLiteral& lit) const;
  ConditionSet condition(const logic::Clause& clause) const;
  /// State containing exactly the given (positive) literals.
  WorldState state(const std::vector<logic::Atom>& atoms) const;

  std::string literal_name(Lit l) const;
  std::string condition_name(const ConditionSet& c) const;  // "A & !B", "true" when empty
  std::vector<std::string> state_names(const WorldState& s) const;

 private:
  logic::Vocabulary vocab_;
  AtomTable atoms_;
  std::vector<GroundAction> actions_;
  std::vector<SignedEffects> effects_;
  std::vector<std::vector<ActionId>> touching_;  // by literal code
};

// ---- domain files -----------------------------------------------------------

class DomainParseError : public std::runtime_error {
 public:
  DomainParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the sectioned domain format ([objects], [predicates], [actions],
/// optional [costs]) and grounds every action schema. Throws DomainParseError
/// or GroundingError.
Domain parse_domain(std::string_view text);
Domain load_domain(const std::filesystem::path& path);

/// Initial-state file: literals separated by newlines or '&', '#' comments.
/// Only positive literals are allowed. Throws DomainParseError.
WorldState parse_state(std::string_view text, const Domain& domain);
WorldState load_state(const std::filesystem::path& path, const Domain& domain);

struct ConditionSetHash {
  std::size_t operator()(const ConditionSet& c) const noexcept;
};
struct WorldStateHash {
  std::size_t operator()(const WorldState& s) const noexcept;
};

}  // namespace optbt::world
