#include <algorithm>
#include <cassert>

#include "optbt/logic.hpp"

namespace optbt::logic {

struct Wff::Node {
  Kind kind;
  SignedLiteral lit;
  std::vector<Wff> children;
};

Wff Wff::literal(SignedLiteral lit) {
  return Wff(std::make_shared<const Node>(Node{Kind::Literal, std::move(lit), {}}));
}

Wff Wff::literal(std::string predicate, std::vector<std::string> args) {
  return literal(SignedLiteral{Atom{std::move(predicate), std::move(args)}, false});
}

Wff Wff::negation(Wff operand) {
  return Wff(std::make_shared<const Node>(Node{Kind::Not, {}, {std::move(operand)}}));
}

Wff Wff::conjunction(Wff lhs, Wff rhs) {
  return Wff(std::make_shared<const Node>(Node{Kind::And, {}, {std::move(lhs), std::move(rhs)}}));
}

Wff Wff::disjunction(Wff lhs, Wff rhs) {
  return Wff(std::make_shared<const Node>(Node{Kind::Or, {}, {std::move(lhs), std::move(rhs)}}));
}

Wff::Kind Wff::kind() const { return node_->kind; }

const SignedLiteral& Wff::lit() const {
  assert(kind() == Kind::Literal);
  return node_->lit;
}

const Wff& Wff::operand() const {
  assert(kind() == Kind::Not);
  return node_->children[0];
}

const Wff& Wff::lhs() const {
  assert(node_->children.size() == 2);
  return node_->children[0];
}

const Wff& Wff::rhs() const {
  assert(node_->children.size() == 2);
  return node_->children[1];
}

bool operator==(const Wff& a, const Wff& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Wff::Kind::Literal) return a.lit() == b.lit();
  return a.node_->children == b.node_->children;
}

std::string Atom::str() const {
  if (args.empty()) return predicate;
  std::string out = predicate + '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  return out + ')';
}

std::string SignedLiteral::str() const { return (negated ? "!" : "") + atom.str(); }

namespace {

int precedence(Wff::Kind kind) {
  switch (kind) {
    case Wff::Kind::Or:
      return 1;
    case Wff::Kind::And:
      return 2;
    default:
      return 3;
  }
}

void print_into(const Wff& wff, std::string& out) {
  auto child = [&out](const Wff& c, bool parens) {
    if (parens) out += '(';
    print_into(c, out);
    if (parens) out += ')';
  };
  switch (wff.kind()) {
    case Wff::Kind::Literal:
      out += wff.lit().str();
      return;
    case Wff::Kind::Not:
      out += '!';
      child(wff.operand(), precedence(wff.operand().kind()) < 3);
      return;
    case Wff::Kind::And:
    case Wff::Kind::Or: {
      const int p = precedence(wff.kind());
      child(wff.lhs(), precedence(wff.lhs().kind()) < p);
      out += wff.kind() == Wff::Kind::And ? " & " : " | ";
      child(wff.rhs(), precedence(wff.rhs().kind()) <= p);
      return;
    }
  }
}

void collect_atoms(const Wff& wff, std::vector<Atom>& out) {
  switch (wff.kind()) {
    case Wff::Kind::Literal:
      out.push_back(wff.lit().atom);
      return;
    case Wff::Kind::Not:
      collect_atoms(wff.operand(), out);
      return;
    default:
      collect_atoms(wff.lhs(), out);
      collect_atoms(wff.rhs(), out);
  }
}

}  // namespace

std::string print(const Wff& wff) {
  std::string out;
  print_into(wff, out);
  return out;
}

std::vector<Atom> atoms_of(const Wff& wff) {
  std::vector<Atom> out;
  collect_atoms(wff, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool evaluate(const Wff& wff, const std::vector<Atom>& true_atoms) {
  switch (wff.kind()) {
    case Wff::Kind::Literal: {
      bool present = std::find(true_atoms.begin(), true_atoms.end(), wff.lit().atom) != true_atoms.end();
      return present != wff.lit().negated;
    }
    case Wff::Kind::Not:
      return !evaluate(wff.operand(), true_atoms);
    case Wff::Kind::And:
      return evaluate(wff.lhs(), true_atoms) && evaluate(wff.rhs(), true_atoms);
    case Wff::Kind::Or:
      return evaluate(wff.lhs(), true_atoms) || evaluate(wff.rhs(), true_atoms);
  }
  return false;
}

}  // namespace optbt::logic
