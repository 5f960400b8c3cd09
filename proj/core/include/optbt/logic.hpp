#pragma once

// Goal formulas over a first-order vocabulary: objects, condition predicates
// and action predicates, ground literals, well-formed formulas built from
// negation/conjunction/disjunction, the textual goal grammar, semantic
// validation, normalization to DNF and truth-table equivalence.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace optbt::logic {

struct ObjectDecl {
  std::string name;
  std::string category;
};

/// A predicate signature: a name plus the category of each parameter.
struct PredicateDecl {
  std::string name;
  std::vector<std::string> params;

  std::string str() const;  // "On(<food>,<place>)"
};

class VocabularyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The triple of objects, condition predicates and action predicates that
/// goals and domains are written against. Categories are flat.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws VocabularyError on duplicate names or on a parameter category
  /// that no object belongs to.
  Vocabulary(std::vector<ObjectDecl> objects, std::vector<PredicateDecl> condition_predicates,
             std::vector<PredicateDecl> action_predicates);

  const std::vector<ObjectDecl>& objects() const { return objects_; }
  const std::vector<PredicateDecl>& condition_predicates() const { return conditions_; }
  const std::vector<PredicateDecl>& action_predicates() const { return actions_; }

  const ObjectDecl* find_object(std::string_view name) const;
  const PredicateDecl* find_condition(std::string_view name) const;
  const PredicateDecl* find_action(std::string_view name) const;

  /// Categories in order of first appearance among the objects.
  const std::vector<std::string>& categories() const { return categories_; }
  /// Object names of one category, in declaration order.
  std::vector<std::string> objects_of(std::string_view category) const;

 private:
  std::vector<ObjectDecl> objects_;
  std::vector<PredicateDecl> conditions_;
  std::vector<PredicateDecl> actions_;
  std::vector<std::string> categories_;
  std::map<std::string, std::size_t, std::less<>> object_index_;
  std::map<std::string, std::size_t, std::less<>> condition_index_;
  std::map<std::string, std::size_t, std::less<>> action_index_;
};

/// Ground predicate instance p(o1,...,ok).
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  std::string str() const;  // "On(Coffee,Table)" or "Raining" when 0-ary
  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct SignedLiteral {
  Atom atom;
  bool negated = false;

  SignedLiteral complement() const { return {atom, !negated}; }
  std::string str() const;  // "!Dirty(Table)"
  friend auto operator<=>(const SignedLiteral&, const SignedLiteral&) = default;
  friend bool operator==(const SignedLiteral&, const SignedLiteral&) = default;
};

/// Immutable formula tree. Copies share structure.
class Wff {
 public:
  enum class Kind { Literal, Not, And, Or };

  static Wff literal(SignedLiteral lit);
  static Wff literal(std::string predicate, std::vector<std::string> args = {});
  static Wff negation(Wff operand);
  static Wff conjunction(Wff lhs, Wff rhs);
  static Wff disjunction(Wff lhs, Wff rhs);

  Kind kind() const;
  /// Precondition: kind() == Literal.
  const SignedLiteral& lit() const;
  /// Precondition: kind() == Not.
  const Wff& operand() const;
  /// Precondition: kind() is And or Or.
  const Wff& lhs() const;
  const Wff& rhs() const;

  friend bool operator==(const Wff& a, const Wff& b);

 private:
  struct Node;
  explicit Wff(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Canonical ASCII spelling with minimal parentheses: "!Dirty(Table) & (On(Coffee,Table) | On(Tea,Table))".
std::string print(const Wff& wff);

/// Every distinct atom in the formula, sorted.
std::vector<Atom> atoms_of(const Wff& wff);

/// Truth value under the closed-world assignment "exactly these atoms are true".
bool evaluate(const Wff& wff, const std::vector<Atom>& true_atoms);

// ---- goal grammar -------------------------------------------------------

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t position, std::string expected, std::string found);

  /// Zero-based code point offset into the goal text.
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t position_;
  std::string expected_;
  std::string found_;
};

struct SemanticError {
  enum class Kind { UnknownPredicate, UnknownObject, ArityMismatch, CategoryMismatch };

  Kind kind;
  /// The offending predicate or object name.
  std::string token;
  /// The literal the error was found in, as printed.
  std::string literal;
  /// Argument position for UnknownObject / CategoryMismatch.
  std::size_t arg_index = 0;

  std::string message() const;
  friend bool operator==(const SemanticError&, const SemanticError&) = default;
};

class SemanticErrors : public std::runtime_error {
 public:
  explicit SemanticErrors(std::vector<SemanticError> errors);
  const std::vector<SemanticError>& errors() const { return errors_; }

 private:
  std::vector<SemanticError> errors_;
};

/// Parses the goal grammar without consulting a vocabulary.
///
///   goal    := or
///   or      := and ('|' and)*
///   and     := unary ('&' unary)*
///   unary   := '!' unary | '(' or ')' | literal
///   literal := IDENT '(' IDENT (',' IDENT)* ')' | IDENT
///
/// '¬', '∧' and '∨' are accepted as spellings of '!', '&' and '|'.
/// Binary operators are left-associative. Throws SyntaxError.
Wff parse_wff(std::string_view text);

/// parse_wff followed by validate; throws SemanticErrors if validation fails.
Wff parse_goal(std::string_view text, const Vocabulary& vocab);

/// Empty iff every literal names a known condition predicate with the right
/// arity and category-compatible known objects.
std::vector<SemanticError> validate(const Wff& wff, const Vocabulary& vocab);
std::vector<SemanticError> validate(const SignedLiteral& lit, const Vocabulary& vocab);

// ---- normal form ---------------------------------------------------------

/// Conjunction of literals, sorted and duplicate free.
using Clause = std::vector<SignedLiteral>;

struct Dnf {
  std::vector<Clause> clauses;

  std::string str() const;  // "(a & b) | c"
  friend bool operator==(const Dnf&, const Dnf&) = default;
};

class EmptyGoal : public std::runtime_error {
 public:
  EmptyGoal() : std::runtime_error("goal is unsatisfiable: every DNF clause is contradictory") {}
};

class TooManyAtoms : public std::runtime_error {
 public:
  explicit TooManyAtoms(std::size_t count);
};

/// Negations pushed to the leaves, conjunction distributed over disjunction,
/// contradictory, duplicate and subsumed clauses removed. Clause order is the
/// order of first appearance during distribution. Throws EmptyGoal.
Dnf to_dnf(const Wff& wff);

/// Left-folded disjunction of left-folded conjunctions; negative literals
/// come back as Not(positive literal), the shape parse_wff produces.
Wff dnf_to_wff(const Dnf& dnf);

std::string clause_str(const Clause& clause);  // "!Dirty(Table) & On(Coffee,Table)"

inline constexpr std::size_t kMaxEquivalenceAtoms = 20;

/// Exhaustive comparison over all assignments to the union of atoms.
/// Throws TooManyAtoms above kMaxEquivalenceAtoms distinct atoms.
bool wff_equivalent(const Wff& a, const Wff& b);

}  // namespace optbt::logic
