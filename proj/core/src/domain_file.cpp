// Reader for the sectioned domain format.
//
//   [objects]      Name : category          (several names may share a line: "A, B : cat")
//   [predicates]   Name(cat1, cat2)         (angle brackets around categories are optional)
//   [actions]      Name(v1: cat1, Const)    header line, then indented properties:
//                    pre: <conjunction, '!' allowed>
//                    add: <conjunction>
//                    del: <conjunction, '_' matches every object of the slot's category>
//                    cost: <decimal>
//   [costs]        Name(Obj1,Obj2) : <decimal>   per-grounding override
//
// '#' starts a comment. Header arguments are typed variables or object
// constants, so one action predicate may be declared by several blocks.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "cartesian.hpp"
#include "optbt/world.hpp"

namespace optbt::world {

namespace {

constexpr std::string_view kWildcard = "_";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// "Name(a, b)" -> {"Name", {"a", "b"}}; "Name" -> {"Name", {}}.
std::pair<std::string, std::vector<std::string>> split_call(std::string_view text, std::size_t line) {
  text = trim(text);
  auto open = text.find('(');
  if (open == std::string_view::npos) {
    if (!is_ident(text)) throw DomainParseError(line, "expected a name, got '" + std::string(text) + "'");
    return {std::string(text), {}};
  }
  if (text.back() != ')') throw DomainParseError(line, "missing ')' in '" + std::string(text) + "'");
  std::string name(trim(text.substr(0, open)));
  if (!is_ident(name)) throw DomainParseError(line, "invalid name '" + name + "'");
  auto inner = text.substr(open + 1, text.size() - open - 2);
  if (trim(inner).empty()) return {name, {}};
  return {name, split(inner, ',')};
}

void flatten(const logic::Wff& w, bool allow_negation, std::size_t line, std::vector<logic::SignedLiteral>& out) {
  using K = logic::Wff::Kind;
  switch (w.kind()) {
    case K::Literal:
      out.push_back(w.lit());
      return;
    case K::And:
      flatten(w.lhs(), allow_negation, line, out);
      flatten(w.rhs(), allow_negation, line, out);
      return;
    case K::Not:
      if (allow_negation && w.operand().kind() == K::Literal) {
        out.push_back(w.operand().lit().complement());
        return;
      }
      break;
    case K::Or:
      break;
  }
  throw DomainParseError(line, allow_negation ? "expected a conjunction of literals or negated literals"
                                              : "expected a conjunction of positive literals");
}

std::vector<logic::SignedLiteral> parse_conjunction(std::string_view text, bool allow_negation, std::size_t line) {
  if (trim(text).empty()) return {};
  try {
    std::vector<logic::SignedLiteral> out;
    flatten(logic::parse_wff(text), allow_negation, line, out);
    return out;
  } catch (const logic::SyntaxError& e) {
    throw DomainParseError(line, e.what());
  }
}

struct Param {
  std::string name;      // variable name, or the constant itself
  std::string category;
  bool constant = false;
};

struct Schema {
  std::size_t line = 0;
  std::string name;
  std::vector<Param> params;
  std::vector<logic::SignedLiteral> pre, add, del;
  std::optional<Cost> cost;
};

struct Parsed {
  std::vector<logic::ObjectDecl> objects;
  std::vector<logic::PredicateDecl> predicates;
  std::vector<Schema> schemas;
  std::vector<std::tuple<std::size_t, std::string, Cost>> overrides;  // line, ground name, cost
};

Cost parse_cost(std::string_view text, std::size_t line) {
  try {
    return Cost::parse(trim(text));
  } catch (const std::invalid_argument& e) {
    throw DomainParseError(line, e.what());
  }
}

Parsed parse_sections(std::string_view text) {
  Parsed out;
  enum class Section { None, Objects, Predicates, Actions, Costs } section = Section::None;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  std::map<std::string, std::size_t, std::less<>> object_lines;

  while (std::getline(in, raw)) {
    ++line;
    std::string_view content = strip_comment(raw);
    const bool indented = !content.empty() && std::isspace(static_cast<unsigned char>(content.front()));
    content = trim(content);
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content == "[objects]") section = Section::Objects;
      else if (content == "[predicates]") section = Section::Predicates;
      else if (content == "[actions]") section = Section::Actions;
      else if (content == "[costs]") section = Section::Costs;
      else throw DomainParseError(line, "unknown section " + std::string(content));
      continue;
    }

    switch (section) {
      case Section::None:
        throw DomainParseError(line, "content before the first section header");

      case Section::Objects: {
        auto colon = content.find(':');
        if (colon == std::string_view::npos) throw DomainParseError(line, "expected 'Name : category'");
        std::string category(trim(content.substr(colon + 1)));
        if (!is_ident(category)) throw DomainParseError(line, "invalid category '" + category + "'");
        for (auto& name : split(content.substr(0, colon), ',')) {
          if (!is_ident(name) || name == kWildcard) throw DomainParseError(line, "invalid object name '" + name + "'");
          out.objects.push_back({name, category});
        }
        break;
      }

      case Section::Predicates: {
        auto [name, params] = split_call(content, line);
        for (auto& p : params) {
          if (p.size() >= 2 && p.front() == '<' && p.back() == '>') p = p.substr(1, p.size() - 2);
          if (!is_ident(p)) throw DomainParseError(line, "invalid category '" + p + "'");
        }
        out.predicates.push_back({name, params});
        break;
      }

      case Section::Actions: {
        if (!indented) {
          auto [name, args] = split_call(content, line);
          Schema s;
          s.line = line;
          s.name = name;
          for (const auto& arg : args) {
            auto colon = arg.find(':');
            if (colon == std::string::npos) {
              if (!is_ident(arg)) throw DomainParseError(line, "invalid action argument '" + arg + "'");
              s.params.push_back({arg, "", true});
            } else {
              std::string var(trim(std::string_view(arg).substr(0, colon)));
              std::string cat(trim(std::string_view(arg).substr(colon + 1)));
              if (!is_ident(var) || !is_ident(cat)) throw DomainParseError(line, "expected 'var: category'");
              s.params.push_back({var, cat, false});
            }
          }
          out.schemas.push_back(std::move(s));
          break;
        }
        if (out.schemas.empty()) throw DomainParseError(line, "action property outside an action block");
        Schema& s = out.schemas.back();
        auto colon = content.find(':');
        if (colon == std::string_view::npos) throw DomainParseError(line, "expected 'pre:', 'add:', 'del:' or 'cost:'");
        std::string_view key = trim(content.substr(0, colon));
        std::string_view value = content.substr(colon + 1);
        if (key == "pre") s.pre = parse_conjunction(value, true, line);
        else if (key == "add") s.add = parse_conjunction(value, false, line);
        else if (key == "del") s.del = parse_conjunction(value, false, line);
        else if (key == "cost") s.cost = parse_cost(value, line);
        else throw DomainParseError(line, "unknown action property '" + std::string(key) + "'");
        break;
      }

      case Section::Costs: {
        auto colon = content.rfind(':');
        if (colon == std::string_view::npos) throw DomainParseError(line, "expected 'Action(args) : cost'");
        auto [name, args] = split_call(content.substr(0, colon), line);
        out.overrides.emplace_back(line, logic::Atom{name, args}.str(), parse_cost(content.substr(colon + 1), line));
        break;
      }
    }
  }
  for (const auto& s : out.schemas) {
    if (!s.cost) throw DomainParseError(s.line, "action '" + s.name + "' has no cost");
  }
  return out;
}

class Grounder {
 public:
  Grounder(const logic::Vocabulary& vocab, AtomTable& atoms) : vocab_(vocab), atoms_(atoms) {}

  void ground(const Schema& schema, std::vector<GroundAction>& out, std::map<std::string, ActionId>& names) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& p : schema.params) {
      if (p.constant) {
        domains.push_back({p.name});
      } else {
        auto objs = vocab_.objects_of(p.category);
        if (objs.empty()) fail(schema, "unknown category '" + p.category + "'");
        domains.push_back(std::move(objs));
      }
    }
    detail::for_each_tuple(domains, [&](const std::vector<std::string>& values) {
      std::map<std::string, std::string, std::less<>> binding;
      for (std::size_t i = 0; i < schema.params.size(); ++i) {
        if (!schema.params[i].constant) binding[schema.params[i].name] = values[i];
      }
      GroundAction a;
      a.name = logic::Atom{schema.name, values}.str();
      a.cost = *schema.cost;
      std::vector<Lit> pre;
      for (const auto& l : schema.pre) {
        for (const auto& atom : expand(schema, l.atom, binding, false)) pre.push_back(Lit(atom, l.negated));
      }
      a.pre = ConditionSet(std::move(pre));
      for (const auto& l : schema.add) {
        for (AtomId x : expand(schema, l.atom, binding, false)) a.add.push_back(x);
      }
      std::sort(a.add.begin(), a.add.end());
      for (const auto& l : schema.del) {
        for (AtomId x : expand(schema, l.atom, binding, true)) {
          if (!std::binary_search(a.add.begin(), a.add.end(), x)) a.del.push_back(x);
        }
      }
      if (!a.pre.consistent()) fail(schema, "precondition of " + a.name + " is contradictory");
      if (!names.emplace(a.name, static_cast<ActionId>(out.size())).second) {
        fail(schema, "ground action " + a.name + " is declared twice");
      }
      out.push_back(std::move(a));
    });
  }

 private:
  [[noreturn]] static void fail(const Schema& s, const std::string& msg) {
    throw GroundingError("action block '" + s.name + "' (line " + std::to_string(s.line) + "): " + msg);
  }

  std::vector<AtomId> expand(const Schema& schema, const logic::Atom& templ,
                             const std::map<std::string, std::string, std::less<>>& binding, bool allow_wildcard) {
    const logic::PredicateDecl* pred = vocab_.find_condition(templ.predicate);
    if (!pred) fail(schema, "unknown condition predicate '" + templ.predicate + "'");
    if (pred->params.size() != templ.args.size()) fail(schema, "wrong arity for '" + templ.predicate + "'");
    std::vector<std::vector<std::string>> domains;
    for (std::size_t i = 0; i < templ.args.size(); ++i) {
      const auto& arg = templ.args[i];
      if (arg == kWildcard) {
        if (!allow_wildcard) fail(schema, "'_' is only allowed in del:");
        domains.push_back(vocab_.objects_of(pred->params[i]));
      } else if (auto it = binding.find(arg); it != binding.end()) {
        domains.push_back({it->second});
      } else if (vocab_.find_object(arg)) {
        domains.push_back({arg});
      } else {
        fail(schema, "'" + arg + "' is neither a parameter nor an object");
      }
    }
    std::vector<AtomId> out;
    detail::for_each_tuple(domains, [&](const std::vector<std::string>& args) {
      logic::SignedLiteral lit{logic::Atom{templ.predicate, args}, false};
      auto errors = logic::validate(lit, vocab_);
      if (!errors.empty()) fail(schema, errors.front().message());
      out.push_back(atoms_.id(lit.atom));
    });
    return out;
  }

  const logic::Vocabulary& vocab_;
  AtomTable& atoms_;
};

}  // namespace

Domain parse_domain(std::string_view text) {
  Parsed parsed = parse_sections(text);

  // Action predicate signatures come from the block headers.
  std::vector<logic::PredicateDecl> action_preds;
  std::map<std::string, std::size_t, std::less<>> action_index;
  std::map<std::string, std::string, std::less<>> object_category;
  for (const auto& o : parsed.objects) object_category.emplace(o.name, o.category);
  for (auto& s : parsed.schemas) {
    std::vector<std::string> cats;
    for (auto& p : s.params) {
      if (p.constant) {
        auto it = object_category.find(p.name);
        if (it == object_category.end()) {
          throw GroundingError("action block '" + s.name + "' (line " + std::to_string(s.line) +
                               "): unknown object '" + p.name + "'");
        }
        p.category = it->second;
      }
      cats.push_back(p.category);
    }
    auto [it, inserted] = action_index.emplace(s.name, action_preds.size());
    if (inserted) {
      action_preds.push_back({s.name, cats});
    } else if (action_preds[it->second].params != cats) {
      throw GroundingError("action block '" + s.name + "' (line " + std::to_string(s.line) +
                           "): signature differs from an earlier block of the same action");
    }
  }

  logic::Vocabulary vocab;
  try {
    vocab = logic::Vocabulary(parsed.objects, parsed.predicates, action_preds);
  } catch (const logic::VocabularyError& e) {
    throw GroundingError(e.what());
  }
  AtomTable atoms = Domain::ground_atoms(vocab);

  std::vector<GroundAction> actions;
  std::map<std::string, ActionId> names;
  Grounder grounder(vocab, atoms);
  for (const auto& s : parsed.schemas) grounder.ground(s, actions, names);

  for (const auto& [line, name, cost] : parsed.overrides) {
    auto it = names.find(name);
    if (it == names.end()) throw GroundingError("line " + std::to_string(line) + ": no ground action " + name);
    actions[it->second].cost = cost;
  }
  return Domain(std::move(vocab), std::move(atoms), std::move(actions));
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Domain load_domain(const std::filesystem::path& path) { return parse_domain(read_file(path)); }

WorldState parse_state(std::string_view text, const Domain& domain) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  std::vector<AtomId> atoms;
  while (std::getline(in, raw)) {
    ++line;
    for (const auto& lit : parse_conjunction(strip_comment(raw), false, line)) {
      auto errors = logic::validate(lit, domain.vocabulary());
      if (!errors.empty()) throw DomainParseError(line, errors.front().message());
      atoms.push_back(domain.atoms().id(lit.atom));
    }
  }
  return WorldState(std::move(atoms));
}

WorldState load_state(const std::filesystem::path& path, const Domain& domain) {
  return parse_state(read_file(path), domain);
}

}  // namespace optbt::world
