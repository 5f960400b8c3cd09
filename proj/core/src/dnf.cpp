#include <algorithm>
#include <cstdint>

#include "optbt/logic.hpp"

namespace optbt::logic {

namespace {

using Clauses = std::vector<Clause>;

// Sorted merge; returns false if the union would contain l and !l.
bool merge(const Clause& a, const Clause& b, Clause& out) {
  out.clear();
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].atom == out[i - 1].atom) return false;  // equal literals were merged by set_union
  }
  return true;
}

void dedupe(Clauses& clauses) {
  Clauses kept;
  kept.reserve(clauses.size());
  for (auto& c : clauses) {
    if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(std::move(c));
  }
  clauses = std::move(kept);
}

Clauses product(const Clauses& lhs, const Clauses& rhs) {
  Clauses out;
  Clause merged;
  for (const auto& a : lhs) {
    for (const auto& b : rhs) {
      if (merge(a, b, merged)) out.push_back(merged);
    }
  }
  dedupe(out);
  return out;
}

Clauses concat(Clauses lhs, const Clauses& rhs) {
  lhs.insert(lhs.end(), rhs.begin(), rhs.end());
  dedupe(lhs);
  return lhs;
}

// Negation is pushed down on the way in rather than materializing an NNF tree.
Clauses distribute(const Wff& wff, bool negate) {
  switch (wff.kind()) {
    case Wff::Kind::Literal: {
      SignedLiteral lit = wff.lit();
      lit.negated = lit.negated != negate;
      return {Clause{std::move(lit)}};
    }
    case Wff::Kind::Not:
      return distribute(wff.operand(), !negate);
    case Wff::Kind::And:
    case Wff::Kind::Or: {
      const bool conjunctive = (wff.kind() == Wff::Kind::And) != negate;
      Clauses lhs = distribute(wff.lhs(), negate);
      Clauses rhs = distribute(wff.rhs(), negate);
      return conjunctive ? product(lhs, rhs) : concat(std::move(lhs), rhs);
    }
  }
  return {};
}

bool proper_subset(const Clause& small, const Clause& big) {
  return small.size() < big.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Wff conjunction_of(const Clause& clause) {
  auto leaf = [](const SignedLiteral& l) {
    Wff atom = Wff::literal(SignedLiteral{l.atom, false});
    return l.negated ? Wff::negation(atom) : atom;
  };
  Wff acc = leaf(clause.front());
  for (std::size_t i = 1; i < clause.size(); ++i) acc = Wff::conjunction(acc, leaf(clause[i]));
  return acc;
}

}  // namespace

Dnf to_dnf(const Wff& wff) {
  Clauses clauses = distribute(wff, false);
  Clauses minimal;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    bool subsumed = std::any_of(clauses.begin(), clauses.end(),
                                [&](const Clause& other) { return proper_subset(other, clauses[i]); });
    if (!subsumed) minimal.push_back(clauses[i]);
  }
  if (minimal.empty()) throw EmptyGoal();
  return Dnf{std::move(minimal)};
}

Wff dnf_to_wff(const Dnf& dnf) {
  if (dnf.clauses.empty() || std::any_of(dnf.clauses.begin(), dnf.clauses.end(),
                                         [](const Clause& c) { return c.empty(); })) {
    throw std::invalid_argument("dnf_to_wff: empty DNF or empty clause has no formula");
  }
  Wff acc = conjunction_of(dnf.clauses.front());
  for (std::size_t i = 1; i < dnf.clauses.size(); ++i) acc = Wff::disjunction(acc, conjunction_of(dnf.clauses[i]));
  return acc;
}

std::string clause_str(const Clause& clause) {
  std::string out;
  for (std::size_t i = 0; i < clause.size(); ++i) {
    if (i) out += " & ";
    out += clause[i].str();
  }
  return out;
}

std::string Dnf::str() const {
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) out += " | ";
    const bool parens = clauses.size() > 1 && clauses[i].size() > 1;
    out += parens ? "(" + clause_str(clauses[i]) + ")" : clause_str(clauses[i]);
  }
  return out;
}

TooManyAtoms::TooManyAtoms(std::size_t count)
    : std::runtime_error("equivalence check over " + std::to_string(count) + " atoms exceeds the limit of " +
                         std::to_string(kMaxEquivalenceAtoms)) {}

namespace {

// Formula compiled against a fixed atom numbering so each assignment is a bitmask.
struct Compiled {
  struct Op {
    Wff::Kind kind;
    std::uint32_t atom = 0;
    bool negated = false;
    std::uint32_t lhs = 0, rhs = 0;
  };
  std::vector<Op> ops;

  std::uint32_t add(const Wff& w, const std::vector<Atom>& atoms) {
    Op op{w.kind()};
    switch (w.kind()) {
      case Wff::Kind::Literal: {
        auto it = std::lower_bound(atoms.begin(), atoms.end(), w.lit().atom);
        op.atom = static_cast<std::uint32_t>(it - atoms.begin());
        op.negated = w.lit().negated;
        break;
      }
      case Wff::Kind::Not:
        op.lhs = add(w.operand(), atoms);
        break;
      default:
        op.lhs = add(w.lhs(), atoms);
        op.rhs = add(w.rhs(), atoms);
    }
    ops.push_back(op);
    return static_cast<std::uint32_t>(ops.size() - 1);
  }

  bool eval(std::uint32_t assignment) const {
    std::vector<char> value(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const Op& op = ops[i];
      switch (op.kind) {
        case Wff::Kind::Literal:
          value[i] = (((assignment >> op.atom) & 1U) != 0) != op.negated;
          break;
        case Wff::Kind::Not:
          value[i] = !value[op.lhs];
          break;
        case Wff::Kind::And:
          value[i] = value[op.lhs] && value[op.rhs];
          break;
        case Wff::Kind::Or:
          value[i] = value[op.lhs] || value[op.rhs];
          break;
      }
    }
    return value.back();
  }
};

}  // namespace

bool wff_equivalent(const Wff& a, const Wff& b) {
  std::vector<Atom> atoms = atoms_of(a);
  auto more = atoms_of(b);
  atoms.insert(atoms.end(), more.begin(), more.end());
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  if (atoms.size() > kMaxEquivalenceAtoms) throw TooManyAtoms(atoms.size());

  Compiled ca, cb;
  ca.add(a, atoms);
  cb.add(b, atoms);
  const std::uint32_t n = 1U << atoms.size();
  for (std::uint32_t m = 0; m < n; ++m) {
    if (ca.eval(m) != cb.eval(m)) return false;
  }
  return true;
}

}  // namespace optbt::logic
