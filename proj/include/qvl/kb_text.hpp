#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qvl/errors.hpp"
#include "qvl/kb.hpp"
#include "qvl/lexer.hpp"

namespace qvl {

inline const text::Keywords& kb_keywords() {
  static const text::Keywords words{"spec",  "class", "sub",        "prop",  "domain", "range", "inverse", "symmetric",
                                    "transitive", "chain", "data", "rule", "individual", "types", "facts", "and",
                                    "o",     "eq",    "lt",         "le",    "gt",     "ge"};
  return words;
}

/// Default namespaces for the two name positions of an atom.
struct AtomNamespaces {
  std::string predicate;
  std::string individual;
};

namespace text {

inline Term parse_term(Cursor& cur, const std::string& individual_ns) {
  if (cur.accept_punct("?")) {
    if (cur.peek().kind != Tok::Ident) cur.fail("variable name");
    return Variable{cur.next().text};
  }
  if (cur.peek().kind == Tok::Number) return number(cur.next().number);
  if (cur.peek().kind == Tok::String) return string_value(cur.next().text);
  if (!cur.at_qname()) cur.fail("term");
  return Individual{cur.qname(individual_ns, "term")};
}

/// atom := QNAME "(" term { "," term } ")" | builtin "(" term "," term ")"
inline Atom parse_atom(Cursor& cur, const AtomNamespaces& ns) {
  const auto& t = cur.peek();
  if (t.kind == Tok::Ident && !cur.is_punct(":", 1)) {
    if (auto op = builtin_from_name(t.text)) {
      cur.next();
      cur.expect_punct("(");
      Term l = parse_term(cur, ns.individual);
      cur.expect_punct(",");
      Term r = parse_term(cur, ns.individual);
      cur.expect_punct(")");
      return builtin_atom(*op, std::move(l), std::move(r));
    }
  }
  if (!cur.at_qname()) cur.fail("atom");
  Name pred = cur.qname(ns.predicate, "atom");
  cur.expect_punct("(");
  std::vector<Term> args;
  args.push_back(parse_term(cur, ns.individual));
  while (cur.accept_punct(",")) {
    if (args.size() == 2) cur.fail("')'");
    args.push_back(parse_term(cur, ns.individual));
  }
  cur.expect_punct(")");
  if (args.size() == 1) return concept_atom(std::move(pred), std::move(args[0]));
  return role_atom(std::move(pred), std::move(args[0]), std::move(args[1]));
}

class KbParser {
public:
  KbParser(std::string_view src, std::string default_ns, const std::string& file)
      : cur_(src, file, &kb_keywords()), ns_(std::move(default_ns)) {}

  std::vector<KnowledgeBase> file() {
    std::vector<KnowledgeBase> out;
    std::set<Name> names;
    while (!cur_.at_end()) {
      cur_.expect_keyword("spec");
      KnowledgeBase kb = spec_body();
      if (!names.insert(kb.name).second) throw DuplicateSpec(qualified(kb.name));
      out.push_back(std::move(kb));
    }
    return out;
  }

private:
  KnowledgeBase spec_body() {
    KnowledgeBase kb;
    kb.name = cur_.qname(ns_, "spec name");
    if (cur_.accept_punct("=")) {
      kb.imports.push_back(cur_.qname(ns_, "imported spec"));
      while (cur_.accept_keyword("and")) kb.imports.push_back(cur_.qname(ns_, "imported spec"));
    }
    cur_.expect_punct("{");
    while (!cur_.accept_punct("}")) item(kb);
    return kb;
  }

  void declare(KnowledgeBase& kb, Declaration::Kind kind, const Name& n) {
    Declaration d{kind, n};
    if (std::find(kb.declarations.begin(), kb.declarations.end(), d) == kb.declarations.end())
      kb.declarations.push_back(std::move(d));
  }

  void item(KnowledgeBase& kb) {
    if (cur_.accept_keyword("class")) {
      Name c = cur_.qname(ns_, "class name");
      declare(kb, Declaration::Kind::Class, c);
      while (cur_.accept_keyword("sub")) kb.axioms.push_back(axiom::SubClassOf{c, cur_.qname(ns_, "class name")});
    } else if (cur_.accept_keyword("prop")) {
      Name p = cur_.qname(ns_, "property name");
      declare(kb, Declaration::Kind::ObjectProperty, p);
      prop_clauses(kb, p);
    } else if (cur_.accept_keyword("data")) {
      Name p = cur_.qname(ns_, "data property name");
      declare(kb, Declaration::Kind::DataProperty, p);
      if (cur_.accept_keyword("domain")) kb.axioms.push_back(axiom::Domain{p, cur_.qname(ns_, "class name")});
    } else if (cur_.accept_keyword("rule")) {
      rule(kb);
    } else if (cur_.accept_keyword("individual")) {
      individual(kb);
    } else {
      cur_.fail("'class', 'prop', 'data', 'rule', 'individual' or '}'");
    }
  }

  void prop_clauses(KnowledgeBase& kb, const Name& p) {
    for (;;) {
      if (cur_.accept_keyword("domain")) {
        kb.axioms.push_back(axiom::Domain{p, cur_.qname(ns_, "class name")});
      } else if (cur_.accept_keyword("range")) {
        kb.axioms.push_back(axiom::Range{p, cur_.qname(ns_, "class name")});
      } else if (cur_.accept_keyword("inverse")) {
        kb.axioms.push_back(axiom::InverseProperties{p, cur_.qname(ns_, "property name")});
      } else if (cur_.accept_keyword("sub")) {
        kb.axioms.push_back(axiom::SubPropertyOf{p, cur_.qname(ns_, "property name")});
      } else if (cur_.accept_keyword("symmetric")) {
        kb.axioms.push_back(axiom::Symmetric{p});
      } else if (cur_.accept_keyword("transitive")) {
        kb.axioms.push_back(axiom::Transitive{p});
      } else if (cur_.accept_keyword("chain")) {
        axiom::SubPropertyChain ax{{cur_.qname(ns_, "property name")}, p};
        cur_.expect_keyword("o");
        ax.chain.push_back(cur_.qname(ns_, "property name"));
        while (cur_.accept_keyword("o")) ax.chain.push_back(cur_.qname(ns_, "property name"));
        kb.axioms.push_back(std::move(ax));
      } else {
        return;
      }
    }
  }

  void rule(KnowledgeBase& kb) {
    HornRule r;
    r.id = Name{ns_, cur_.expect_ident("rule id").text};
    cur_.expect_punct(":");
    r.body.push_back(parse_atom(cur_, {ns_, ns_}));
    while (cur_.accept_punct(",")) r.body.push_back(parse_atom(cur_, {ns_, ns_}));
    cur_.expect_punct("=>");
    if (cur_.peek().kind == Tok::Ident && builtin_from_name(cur_.peek().text) && !cur_.is_punct(":", 1))
      cur_.fail("concept or property atom");
    r.head = parse_atom(cur_, {ns_, ns_});
    kb.rules.push_back(std::move(r));
  }

  void individual(KnowledgeBase& kb) {
    Name who = cur_.qname(ns_, "individual name");
    declare(kb, Declaration::Kind::Individual, who);
    if (cur_.accept_keyword("types")) {
      do {
        kb.assertions.push_back(concept_atom(cur_.qname(ns_, "class name"), Individual{who}));
      } while (cur_.accept_punct(","));
    }
    if (cur_.accept_keyword("facts")) {
      do {
        Name p = cur_.qname(ns_, "property name");
        Term object;
        if (cur_.peek().kind == Tok::Number)
          object = number(cur_.next().number);
        else if (cur_.peek().kind == Tok::String)
          object = string_value(cur_.next().text);
        else
          object = Individual{cur_.qname(ns_, "individual, number or string")};
        kb.assertions.push_back(role_atom(std::move(p), Individual{who}, std::move(object)));
      } while (cur_.accept_punct(","));
    }
  }

  text::Cursor cur_;
  std::string ns_;
};

}  // namespace text

/// Parses every `spec` block in `source`. Unqualified names land in `default_namespace`.
inline std::vector<KnowledgeBase> parse_kb(std::string_view source, const std::string& default_namespace,
                                           const std::string& file = "<input>") {
  return text::KbParser(source, default_namespace, file).file();
}

/// Parses a single atom (e.g. a query given on the command line).
inline Atom parse_atom(std::string_view source, const AtomNamespaces& ns, const std::string& file = "<input>") {
  text::Cursor cur(source, file, &kb_keywords());
  Atom a = text::parse_atom(cur, ns);
  if (!cur.at_end()) cur.fail("end of input");
  return a;
}

namespace detail {

inline const Name& axiom_subject(const Axiom& ax) {
  return std::visit(
      [](const auto& a) -> const Name& {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, axiom::SubClassOf> || std::is_same_v<T, axiom::SubPropertyOf>)
          return a.sub;
        else if constexpr (std::is_same_v<T, axiom::SubPropertyChain>)
          return a.sup;
        else
          return a.p;
      },
      ax);
}

}  // namespace detail

/// Canonical text for `kb`: bare declarations first, then axioms grouped by subject, rules,
/// and assertions grouped by individual. `parse_kb(print_kb(kb), kb.name.ns)` yields `kb`.
inline std::string print_kb(const KnowledgeBase& kb) {
  const NameStyle style{kb.name.ns, false, &kb_keywords()};
  std::string out = "spec " + style(kb.name);
  for (std::size_t i = 0; i < kb.imports.size(); ++i) out += (i ? " and " : " = ") + style(kb.imports[i]);
  out += " {\n";

  auto declared_as = [&](const Name& n, Declaration::Kind k) {
    return std::find(kb.declarations.begin(), kb.declarations.end(), Declaration{k, n}) != kb.declarations.end();
  };

  for (const auto& d : kb.declarations) {
    switch (d.kind) {
      case Declaration::Kind::Class: out += "  class "; break;
      case Declaration::Kind::ObjectProperty: out += "  prop "; break;
      case Declaration::Kind::DataProperty: out += "  data "; break;
      case Declaration::Kind::Individual: out += "  individual "; break;
    }
    out += style(d.name) + "\n";
  }

  // Axioms: consecutive axioms sharing subject and item keyword share one line.
  std::string open_key;
  auto close = [&] {
    if (!open_key.empty()) out += "\n";
    open_key.clear();
  };
  for (const auto& ax : kb.axioms) {
    const Name& subject = detail::axiom_subject(ax);
    std::string keyword;
    std::string clause;
    bool single = false;
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, axiom::SubClassOf>) {
            keyword = "class";
            clause = "sub " + style(a.sup);
          } else if constexpr (std::is_same_v<T, axiom::SubPropertyOf>) {
            keyword = "prop";
            clause = "sub " + style(a.sup);
          } else if constexpr (std::is_same_v<T, axiom::SubPropertyChain>) {
            keyword = "prop";
            clause = "chain";
            for (std::size_t i = 0; i < a.chain.size(); ++i) clause += (i ? " o " : " ") + style(a.chain[i]);
          } else if constexpr (std::is_same_v<T, axiom::InverseProperties>) {
            keyword = "prop";
            clause = "inverse " + style(a.q);
          } else if constexpr (std::is_same_v<T, axiom::Symmetric>) {
            keyword = "prop";
            clause = "symmetric";
          } else if constexpr (std::is_same_v<T, axiom::Transitive>) {
            keyword = "prop";
            clause = "transitive";
          } else if constexpr (std::is_same_v<T, axiom::Domain>) {
            bool data_only = declared_as(a.p, Declaration::Kind::DataProperty) &&
                             !declared_as(a.p, Declaration::Kind::ObjectProperty);
            keyword = data_only ? "data" : "prop";
            single = data_only;
            clause = "domain " + style(a.c);
          } else {
            keyword = "prop";
            clause = "range " + style(a.c);
          }
        },
        ax);
    std::string key = keyword + " " + style(subject);
    if (key != open_key || single) {
      close();
      out += "  " + key;
      open_key = single ? "" : key;
      out += " " + clause;
      if (single) out += "\n";
    } else {
      out += " " + clause;
    }
  }
  close();

  for (const auto& r : kb.rules) {
    out += "  rule " + r.id.local + ":";
    for (std::size_t i = 0; i < r.body.size(); ++i) out += (i ? ", " : " ") + to_string(r.body[i], style);
    out += " => " + to_string(r.head, style) + "\n";
  }

  std::size_t i = 0;
  while (i < kb.assertions.size()) {
    const Term subject = kb.assertions[i].subject();
    out += "  individual " + to_string(subject, style);
    bool in_types = false, in_facts = false;
    while (i < kb.assertions.size() && kb.assertions[i].subject() == subject) {
      const Atom& a = kb.assertions[i];
      if (a.kind == AtomKind::Concept) {
        if (in_facts) break;
        out += in_types ? ", " : " types ";
        in_types = true;
        out += style(a.predicate);
      } else {
        out += in_facts ? ", " : " facts ";
        in_facts = true;
        out += style(a.predicate) + " " + to_string(a.object(), style);
      }
      ++i;
    }
    out += "\n";
  }
  out += "}\n";
  return out;
}

}  // namespace qvl
