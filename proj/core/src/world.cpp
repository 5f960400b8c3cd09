#include <algorithm>

#include "optbt/world.hpp"

#include "cartesian.hpp"

namespace optbt::world {

namespace {

template <class T>
void normalize(std::vector<T>& v) {
  if (std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end()) return;  // already strictly sorted
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

// ---- ConditionSet -------------------------------------------------------------

ConditionSet::ConditionSet(std::initializer_list<Lit> lits) : lits_(lits) { normalize(lits_); }

ConditionSet::ConditionSet(std::vector<Lit> lits) : lits_(std::move(lits)) { normalize(lits_); }

bool ConditionSet::contains(Lit l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

bool ConditionSet::consistent() const {
  for (std::size_t i = 1; i < lits_.size(); ++i) {
    if (lits_[i].atom() == lits_[i - 1].atom()) return false;
  }
  return true;
}

bool ConditionSet::subset_of(const ConditionSet& other) const {
  return size() <= other.size() && std::includes(other.begin(), other.end(), begin(), end());
}

bool ConditionSet::intersects(const ConditionSet& other) const {
  auto a = begin(), b = other.begin();
  while (a != end() && b != other.end()) {
    if (*a < *b) ++a;
    else if (*b < *a) ++b;
    else return true;
  }
  return false;
}

ConditionSet ConditionSet::unite(const ConditionSet& other) const {
  ConditionSet out;
  out.lits_.reserve(size() + other.size());
  std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(out.lits_));
  return out;
}

ConditionSet ConditionSet::minus(const ConditionSet& other) const {
  ConditionSet out;
  out.lits_.reserve(size());
  std::set_difference(begin(), end(), other.begin(), other.end(), std::back_inserter(out.lits_));
  return out;
}

ConditionSet ConditionSet::intersect(const ConditionSet& other) const {
  ConditionSet out;
  std::set_intersection(begin(), end(), other.begin(), other.end(), std::back_inserter(out.lits_));
  return out;
}

// ---- WorldState -----------------------------------------------------------------

WorldState::WorldState(std::initializer_list<AtomId> atoms) : atoms_(atoms) { normalize(atoms_); }

WorldState::WorldState(std::vector<AtomId> atoms) : atoms_(std::move(atoms)) { normalize(atoms_); }

bool WorldState::contains(AtomId atom) const { return std::binary_search(atoms_.begin(), atoms_.end(), atom); }

bool holds(const ConditionSet& c, const WorldState& s) {
  return std::all_of(c.begin(), c.end(), [&](Lit l) { return s.holds(l); });
}

WorldState apply(const GroundAction& a, const WorldState& s) {
  if (!holds(a.pre, s)) throw PreconditionViolated(a.name);
  std::vector<AtomId> grown;
  grown.reserve(s.size() + a.add.size());
  std::set_union(s.atoms().begin(), s.atoms().end(), a.add.begin(), a.add.end(), std::back_inserter(grown));
  std::vector<AtomId> next;
  next.reserve(grown.size());
  std::set_difference(grown.begin(), grown.end(), a.del.begin(), a.del.end(), std::back_inserter(next));
  return WorldState(std::move(next));
}

SignedEffects signed_effects(const GroundAction& a) {
  std::vector<Lit> add, del;
  for (AtomId x : a.add) {
    add.push_back(Lit::pos(x));
    del.push_back(Lit::neg(x));
  }
  for (AtomId x : a.del) {
    del.push_back(Lit::pos(x));
    add.push_back(Lit::neg(x));
  }
  return {ConditionSet(std::move(add)), ConditionSet(std::move(del))};
}

std::size_t ConditionSetHash::operator()(const ConditionSet& c) const noexcept {
  std::size_t h = c.size();
  for (Lit l : c) h = mix(h, l.code());
  return h;
}

std::size_t WorldStateHash::operator()(const WorldState& s) const noexcept {
  std::size_t h = s.size();
  for (AtomId a : s.atoms()) h = mix(h, a);
  return h;
}

// ---- AtomTable --------------------------------------------------------------------

AtomId AtomTable::intern(const logic::Atom& atom) {
  auto [it, inserted] = index_.emplace(atom.str(), static_cast<AtomId>(atoms_.size()));
  if (inserted) atoms_.push_back(atom);
  return it->second;
}

const AtomId* AtomTable::find(const logic::Atom& atom) const {
  auto it = index_.find(atom.str());
  return it == index_.end() ? nullptr : &it->second;
}

AtomId AtomTable::id(const logic::Atom& atom) const {
  if (const AtomId* found = find(atom)) return *found;
  throw std::out_of_range("literal '" + atom.str() + "' is not in the ground literal universe");
}

// ---- Domain -----------------------------------------------------------------------

Domain::Domain(logic::Vocabulary vocab, AtomTable atoms, std::vector<GroundAction> actions)
    : vocab_(std::move(vocab)), atoms_(std::move(atoms)), actions_(std::move(actions)) {
  touching_.resize(atoms_.size() * 2);
  effects_.reserve(actions_.size());
  for (ActionId id = 0; id < actions_.size(); ++id) {
    GroundAction& a = actions_[id];
    normalize(a.add);
    normalize(a.del);
    if (a.cost < Cost{}) throw GroundingError("action '" + a.name + "' has a negative cost");
    std::vector<AtomId> overlap;
    std::set_intersection(a.add.begin(), a.add.end(), a.del.begin(), a.del.end(), std::back_inserter(overlap));
    if (!overlap.empty()) throw GroundingError("action '" + a.name + "' adds and deletes the same literal");
    auto check = [&](AtomId x) {
      if (x >= atoms_.size()) throw GroundingError("action '" + a.name + "' mentions an unknown atom");
    };
    for (Lit l : a.pre) check(l.atom());
    for (AtomId x : a.add) check(x);
    for (AtomId x : a.del) check(x);

    effects_.push_back(signed_effects(a));
    ConditionSet touched = a.pre.unite(effects_.back().add);
    for (Lit l : touched) touching_[l.code()].push_back(id);
  }
}

AtomTable Domain::ground_atoms(const logic::Vocabulary& vocab) {
  AtomTable table;
  for (const auto& pred : vocab.condition_predicates()) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& cat : pred.params) domains.push_back(vocab.objects_of(cat));
    detail::for_each_tuple(domains, [&](const std::vector<std::string>& args) {
      table.intern(logic::Atom{pred.name, args});
    });
  }
  return table;
}

std::span<const ActionId> Domain::touching(Lit l) const {
  if (l.code() >= touching_.size()) return {};
  return touching_[l.code()];
}

Lit Domain::literal(const logic::SignedLiteral& lit) const { return Lit(atoms_.id(lit.atom), lit.negated); }

ConditionSet Domain::condition(const logic::Clause& clause) const {
  std::vector<Lit> lits;
  lits.reserve(clause.size());
  for (const auto& l : clause) lits.push_back(literal(l));
  return ConditionSet(std::move(lits));
}

WorldState Domain::state(const std::vector<logic::Atom>& atoms) const {
  std::vector<AtomId> ids;
  for (const auto& a : atoms) ids.push_back(atoms_.id(a));
  return WorldState(std::move(ids));
}

std::string Domain::literal_name(Lit l) const { return (l.negated() ? "!" : "") + atoms_.atom(l.atom()).str(); }

std::string Domain::condition_name(const ConditionSet& c) const {
  if (c.empty()) return "true";
  std::string out;
  for (Lit l : c) {
    if (!out.empty()) out += " & ";
    out += literal_name(l);
  }
  return out;
}

std::vector<std::string> Domain::state_names(const WorldState& s) const {
  std::vector<std::string> out;
  for (AtomId a : s.atoms()) out.push_back(atoms_.atom(a).str());
  return out;
}

}  // namespace optbt::world
