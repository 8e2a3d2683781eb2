#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "qvl/errors.hpp"

namespace qvl {

// ---------------------------------------------------------------------------
// Names and terms
// ---------------------------------------------------------------------------

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

/// Qualified identifier `ns:local`.
struct Name {
  std::string ns;
  std::string local;

  friend auto operator<=>(const Name&, const Name&) = default;
};

inline std::string qualified(const Name& n) { return n.ns.empty() ? n.local : n.ns + ":" + n.local; }

struct Individual {
  Name name;
  friend auto operator<=>(const Individual&, const Individual&) = default;
};

struct Variable {
  std::string symbol;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

/// A literal: 64-bit float or string. Construct numbers through `number()` so -0.0 folds into 0.0.
struct DataValue {
  std::variant<double, std::string> value;

  bool is_number() const { return std::holds_alternative<double>(value); }
  double as_number() const { return std::get<double>(value); }
  const std::string& as_string() const { return std::get<std::string>(value); }

  friend bool operator==(const DataValue&, const DataValue&) = default;
  friend bool operator<(const DataValue& a, const DataValue& b) {
    if (a.value.index() != b.value.index()) return a.value.index() < b.value.index();
    if (a.is_number()) return a.as_number() < b.as_number();
    return a.as_string() < b.as_string();
  }
};

inline DataValue number(double v) { return DataValue{v == 0.0 ? 0.0 : v}; }
inline DataValue string_value(std::string s) { return DataValue{std::move(s)}; }

using Term = std::variant<Individual, Variable, DataValue>;

inline Term ind(Name n) { return Individual{std::move(n)}; }
inline Term var(std::string s) { return Variable{std::move(s)}; }
inline Term lit(double v) { return number(v); }
inline Term lit(std::string s) { return string_value(std::move(s)); }

inline bool is_variable(const Term& t) { return std::holds_alternative<Variable>(t); }
inline bool is_literal(const Term& t) { return std::holds_alternative<DataValue>(t); }
inline bool is_individual(const Term& t) { return std::holds_alternative<Individual>(t); }

// ---------------------------------------------------------------------------
// Atoms
// ---------------------------------------------------------------------------

enum class AtomKind { Concept, Property, Builtin };
enum class BuiltinOp { Eq, Lt, Le, Gt, Ge };

inline std::string_view builtin_name(BuiltinOp op) {
  switch (op) {
    case BuiltinOp::Eq: return "eq";
    case BuiltinOp::Lt: return "lt";
    case BuiltinOp::Le: return "le";
    case BuiltinOp::Gt: return "gt";
    case BuiltinOp::Ge: return "ge";
  }
  return "eq";
}

inline std::optional<BuiltinOp> builtin_from_name(std::string_view s) {
  if (s == "eq") return BuiltinOp::Eq;
  if (s == "lt") return BuiltinOp::Lt;
  if (s == "le") return BuiltinOp::Le;
  if (s == "gt") return BuiltinOp::Gt;
  if (s == "ge") return BuiltinOp::Ge;
  return std::nullopt;
}

/// Concept membership `C(s)`, property assertion `P(s, o)` or builtin comparison `op(l, r)`.
///
/// Role and data atoms share the Property kind; an atom is a data atom when its object is a
/// literal. Builtins leave `predicate` empty.
struct Atom {
  AtomKind kind = AtomKind::Concept;
  Name predicate;
  BuiltinOp op = BuiltinOp::Eq;
  std::vector<Term> args;

  const Term& subject() const { return args.at(0); }
  const Term& object() const { return args.at(1); }

  friend bool operator==(const Atom&, const Atom&) = default;
};

inline Atom concept_atom(Name c, Term s) { return Atom{AtomKind::Concept, std::move(c), BuiltinOp::Eq, {std::move(s)}}; }
inline Atom role_atom(Name p, Term s, Term o) {
  return Atom{AtomKind::Property, std::move(p), BuiltinOp::Eq, {std::move(s), std::move(o)}};
}
inline Atom data_atom(Name p, Term s, DataValue v) { return role_atom(std::move(p), std::move(s), std::move(v)); }
inline Atom builtin_atom(BuiltinOp op, Term l, Term r) {
  return Atom{AtomKind::Builtin, {}, op, {std::move(l), std::move(r)}};
}

inline bool is_ground(const Atom& a) { return std::none_of(a.args.begin(), a.args.end(), is_variable); }
inline bool is_data_atom(const Atom& a) { return a.kind == AtomKind::Property && is_literal(a.args.at(1)); }
inline bool is_role_atom(const Atom& a) { return a.kind == AtomKind::Property && !is_literal(a.args.at(1)); }

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

inline void hash_combine(std::size_t& seed, std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); }

struct NameHash {
  std::size_t operator()(const Name& n) const {
    std::size_t h = std::hash<std::string>{}(n.ns);
    hash_combine(h, std::hash<std::string>{}(n.local));
    return h;
  }
};

struct TermHash {
  std::size_t operator()(const Term& t) const {
    std::size_t h = t.index();
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Individual>) {
            hash_combine(h, NameHash{}(v.name));
          } else if constexpr (std::is_same_v<T, Variable>) {
            hash_combine(h, std::hash<std::string>{}(v.symbol));
          } else {
            if (v.is_number())
              hash_combine(h, std::hash<double>{}(v.as_number()));
            else
              hash_combine(h, std::hash<std::string>{}(v.as_string()));
          }
        },
        t);
    return h;
  }
};

struct AtomHash {
  std::size_t operator()(const Atom& a) const {
    std::size_t h = static_cast<std::size_t>(a.kind);
    hash_combine(h, NameHash{}(a.predicate));
    hash_combine(h, static_cast<std::size_t>(a.op));
    for (const auto& t : a.args) hash_combine(h, TermHash{}(t));
    return h;
  }
};

// ---------------------------------------------------------------------------
// Axioms, rules, modules
// ---------------------------------------------------------------------------

namespace axiom {
struct SubClassOf { Name sub, sup; friend bool operator==(const SubClassOf&, const SubClassOf&) = default; };
struct SubPropertyOf { Name sub, sup; friend bool operator==(const SubPropertyOf&, const SubPropertyOf&) = default; };
/// chain[0] o chain[1] o ... is contained in sup.
struct SubPropertyChain {
  std::vector<Name> chain;
  Name sup;
  friend bool operator==(const SubPropertyChain&, const SubPropertyChain&) = default;
};
struct InverseProperties { Name p, q; friend bool operator==(const InverseProperties&, const InverseProperties&) = default; };
struct Symmetric { Name p; friend bool operator==(const Symmetric&, const Symmetric&) = default; };
struct Transitive { Name p; friend bool operator==(const Transitive&, const Transitive&) = default; };
struct Domain { Name p, c; friend bool operator==(const Domain&, const Domain&) = default; };
struct Range { Name p, c; friend bool operator==(const Range&, const Range&) = default; };
}  // namespace axiom

using Axiom = std::variant<axiom::SubClassOf, axiom::SubPropertyOf, axiom::SubPropertyChain, axiom::InverseProperties,
                           axiom::Symmetric, axiom::Transitive, axiom::Domain, axiom::Range>;

/// Names an axiom mentions, in field order.
inline std::vector<Name> names_of(const Axiom& ax) {
  return std::visit(
      [](const auto& a) -> std::vector<Name> {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, axiom::SubClassOf> || std::is_same_v<T, axiom::SubPropertyOf>) {
          return {a.sub, a.sup};
        } else if constexpr (std::is_same_v<T, axiom::SubPropertyChain>) {
          auto out = a.chain;
          out.push_back(a.sup);
          return out;
        } else if constexpr (std::is_same_v<T, axiom::InverseProperties>) {
          return {a.p, a.q};
        } else if constexpr (std::is_same_v<T, axiom::Symmetric> || std::is_same_v<T, axiom::Transitive>) {
          return {a.p};
        } else {
          return {a.p, a.c};
        }
      },
      ax);
}

struct Declaration {
  enum class Kind { Class, ObjectProperty, DataProperty, Individual };
  Kind kind;
  Name name;
  friend bool operator==(const Declaration&, const Declaration&) = default;
};

struct HornRule {
  Name id;
  std::vector<Atom> body;
  Atom head;
  friend bool operator==(const HornRule&, const HornRule&) = default;
};

struct KnowledgeBase {
  Name name;
  std::vector<Name> imports;
  std::vector<Declaration> declarations;
  std::vector<Axiom> axioms;
  std::vector<HornRule> rules;
  std::vector<Atom> assertions;
  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

/// How names are rendered: unqualified when in `default_ns`, or always bare with `local_only`.
struct NameStyle {
  std::string default_ns;
  bool local_only = false;
  /// Locals that must stay qualified even in the default namespace (reserved words).
  const std::set<std::string, std::less<>>* reserved = nullptr;

  std::string operator()(const Name& n) const {
    if (local_only) return n.local;
    bool clash = reserved && reserved->count(n.local) > 0;
    if (n.ns == default_ns && !clash) return n.local;
    return n.ns + ":" + n.local;
  }
};

inline std::string to_string(const Term& t, const NameStyle& style = {}) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Individual>) {
          return style(v.name);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return "?" + v.symbol;
        } else {
          return v.is_number() ? format_number(v.as_number()) : quote(v.as_string());
        }
      },
      t);
}

inline std::string to_string(const Atom& a, const NameStyle& style = {}) {
  std::string out = a.kind == AtomKind::Builtin ? std::string(builtin_name(a.op)) : style(a.predicate);
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += to_string(a.args[i], style);
  }
  out += ')';
  return out;
}

/// Report rendering: local names only.
inline std::string display(const Atom& a) { return to_string(a, NameStyle{"", true}); }

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Validates Datalog safety: every head and builtin variable occurs in a non-builtin body atom.
inline const HornRule& check_rule_safety(const HornRule& rule) {
  const std::string id = qualified(rule.id);
  if (rule.body.empty()) throw MalformedRule(id + " (empty body)");
  if (rule.head.kind == AtomKind::Builtin) throw MalformedRule(id + " (builtin head)");

  std::unordered_set<std::string> bound;
  for (const auto& atom : rule.body) {
    if (atom.kind == AtomKind::Builtin) continue;
    for (const auto& t : atom.args)
      if (auto* v = std::get_if<Variable>(&t)) bound.insert(v->symbol);
  }
  auto require_bound = [&](const Atom& atom) {
    for (const auto& t : atom.args) {
      if (auto* v = std::get_if<Variable>(&t); v && !bound.count(v->symbol)) throw UnsafeVariable(id, v->symbol);
    }
  };
  for (const auto& atom : rule.body) {
    if (atom.kind != AtomKind::Builtin) continue;
    for (const auto& t : atom.args)
      if (is_individual(t)) throw MalformedRule(id + " (builtin over individual)");
    require_bound(atom);
  }
  require_bound(rule.head);
  return rule;
}

namespace detail {

inline void visit_imports(const std::map<Name, const KnowledgeBase*>& by_name, const Name& current,
                          std::vector<Name>& stack, std::set<Name>& done) {
  if (done.count(current)) return;
  if (auto it = std::find(stack.begin(), stack.end(), current); it != stack.end()) {
    std::vector<std::string> path;
    for (; it != stack.end(); ++it) path.push_back(qualified(*it));
    path.push_back(qualified(current));
    throw ImportCycle(std::move(path));
  }
  auto found = by_name.find(current);
  if (found == by_name.end()) throw UnknownImport(qualified(current));
  stack.push_back(current);
  for (const auto& imp : found->second->imports) visit_imports(by_name, imp, stack, done);
  stack.pop_back();
  done.insert(current);
}

template <class T>
void append_unique(std::vector<T>& out, const T& item) {
  if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
}

}  // namespace detail

/// Flattens `root` and its transitive imports into one module.
///
/// Contents are concatenated in module-list order, then declaration order, with duplicates
/// removed. The result has no imports, so merging it again is the identity.
inline KnowledgeBase merge_modules(const std::vector<KnowledgeBase>& modules, const Name& root) {
  std::map<Name, const KnowledgeBase*> by_name;
  for (const auto& m : modules) {
    if (!by_name.emplace(m.name, &m).second) throw DuplicateSpec(qualified(m.name));
  }
  std::vector<Name> stack;
  std::set<Name> closure;
  detail::visit_imports(by_name, root, stack, closure);

  KnowledgeBase out;
  out.name = root;
  std::unordered_set<Atom, AtomHash> seen_assertions;
  std::map<Name, const HornRule*> rule_ids;
  for (const auto& m : modules) {
    if (!closure.count(m.name)) continue;
    for (const auto& d : m.declarations) detail::append_unique(out.declarations, d);
    for (const auto& ax : m.axioms) detail::append_unique(out.axioms, ax);
    for (const auto& r : m.rules) {
      auto [it, fresh] = rule_ids.emplace(r.id, &r);
      if (fresh) {
        out.rules.push_back(r);
      } else if (!(*it->second == r)) {
        throw DuplicateRuleId(qualified(r.id));
      }
    }
    for (const auto& a : m.assertions)
      if (seen_assertions.insert(a).second) out.assertions.push_back(a);
  }

  std::set<Name> declared;
  for (const auto& d : out.declarations) declared.insert(d.name);
  for (const auto& ax : out.axioms)
    for (const auto& n : names_of(ax))
      if (!declared.count(n)) throw UndeclaredName(qualified(n));
  return out;
}

}  // namespace qvl
