#include <algorithm>
#include <set>

#include "optbt/logic.hpp"

namespace optbt::logic {

namespace {

void index_unique(const std::vector<PredicateDecl>& preds, std::string_view what,
                  std::map<std::string, std::size_t, std::less<>>& index) {
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!index.emplace(preds[i].name, i).second) {
      throw VocabularyError("duplicate " + std::string(what) + " predicate '" + preds[i].name + "'");
    }
  }
}

}  // namespace

std::string PredicateDecl::str() const {
  std::string out = name;
  if (params.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += '<' + params[i] + '>';
  }
  return out + ')';
}

Vocabulary::Vocabulary(std::vector<ObjectDecl> objects, std::vector<PredicateDecl> condition_predicates,
                       std::vector<PredicateDecl> action_predicates)
    : objects_(std::move(objects)),
      conditions_(std::move(condition_predicates)),
      actions_(std::move(action_predicates)) {
  std::set<std::string, std::less<>> seen_categories;
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (!object_index_.emplace(objects_[i].name, i).second) {
      throw VocabularyError("duplicate object '" + objects_[i].name + "'");
    }
    if (seen_categories.insert(objects_[i].category).second) categories_.push_back(objects_[i].category);
  }
  index_unique(conditions_, "condition", condition_index_);
  index_unique(actions_, "action", action_index_);

  for (const auto* preds : {&conditions_, &actions_}) {
    for (const auto& p : *preds) {
      for (const auto& cat : p.params) {
        if (!seen_categories.contains(cat)) {
          throw VocabularyError("predicate '" + p.name + "' uses category '" + cat + "' which has no objects");
        }
      }
    }
  }
}

const ObjectDecl* Vocabulary::find_object(std::string_view name) const {
  auto it = object_index_.find(name);
  return it == object_index_.end() ? nullptr : &objects_[it->second];
}

const PredicateDecl* Vocabulary::find_condition(std::string_view name) const {
  auto it = condition_index_.find(name);
  return it == condition_index_.end() ? nullptr : &conditions_[it->second];
}

const PredicateDecl* Vocabulary::find_action(std::string_view name) const {
  auto it = action_index_.find(name);
  return it == action_index_.end() ? nullptr : &actions_[it->second];
}

std::vector<std::string> Vocabulary::objects_of(std::string_view category) const {
  std::vector<std::string> out;
  for (const auto& o : objects_) {
    if (o.category == category) out.push_back(o.name);
  }
  return out;
}

// ---- semantic validation ---------------------------------------------------

std::string SemanticError::message() const {
  switch (kind) {
    case Kind::UnknownPredicate:
      return "unknown condition predicate '" + token + "' in " + literal;
    case Kind::UnknownObject:
      return "unknown object '" + token + "' at argument " + std::to_string(arg_index + 1) + " of " + literal;
    case Kind::ArityMismatch:
      return "wrong number of arguments for '" + token + "' in " + literal;
    case Kind::CategoryMismatch:
      return "object '" + token + "' has the wrong category for argument " + std::to_string(arg_index + 1) +
             " of " + literal;
  }
  return {};
}

namespace {

std::string join_messages(const std::vector<SemanticError>& errors) {
  std::string out = "semantic errors:";
  for (const auto& e : errors) out += "\n  " + e.message();
  return out;
}

void validate_into(const Wff& wff, const Vocabulary& vocab, std::vector<SemanticError>& out) {
  switch (wff.kind()) {
    case Wff::Kind::Literal: {
      auto errs = validate(wff.lit(), vocab);
      out.insert(out.end(), errs.begin(), errs.end());
      return;
    }
    case Wff::Kind::Not:
      validate_into(wff.operand(), vocab, out);
      return;
    case Wff::Kind::And:
    case Wff::Kind::Or:
      validate_into(wff.lhs(), vocab, out);
      validate_into(wff.rhs(), vocab, out);
      return;
  }
}

}  // namespace

SemanticErrors::SemanticErrors(std::vector<SemanticError> errors)
    : std::runtime_error(join_messages(errors)), errors_(std::move(errors)) {}

std::vector<SemanticError> validate(const SignedLiteral& lit, const Vocabulary& vocab) {
  using K = SemanticError::Kind;
  std::vector<SemanticError> out;
  const std::string shown = lit.atom.str();
  const PredicateDecl* pred = vocab.find_condition(lit.atom.predicate);
  if (!pred) out.push_back({K::UnknownPredicate, lit.atom.predicate, shown, 0});
  if (pred && pred->params.size() != lit.atom.args.size()) {
    out.push_back({K::ArityMismatch, lit.atom.predicate, shown, 0});
  }
  for (std::size_t i = 0; i < lit.atom.args.size(); ++i) {
    const auto& arg = lit.atom.args[i];
    const ObjectDecl* obj = vocab.find_object(arg);
    if (!obj) {
      out.push_back({K::UnknownObject, arg, shown, i});
    } else if (pred && i < pred->params.size() && pred->params[i] != obj->category) {
      out.push_back({K::CategoryMismatch, arg, shown, i});
    }
  }
  return out;
}

std::vector<SemanticError> validate(const Wff& wff, const Vocabulary& vocab) {
  std::vector<SemanticError> out;
  validate_into(wff, vocab, out);
  return out;
}

Wff parse_goal(std::string_view text, const Vocabulary& vocab) {
  Wff wff = parse_wff(text);
  auto errors = validate(wff, vocab);
  if (!errors.empty()) throw SemanticErrors(std::move(errors));
  return wff;
}

}  // namespace optbt::logic
