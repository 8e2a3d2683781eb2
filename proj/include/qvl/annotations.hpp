#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "qvl/assembly.hpp"
#include "qvl/errors.hpp"
#include "qvl/kb.hpp"
#include "qvl/kb_text.hpp"
#include "qvl/lexer.hpp"

namespace qvl {

/// Named rectangle of the principle-solution sketch bound to an individual.
struct SketchRegion {
  std::string name;
  double x, y, width, height;  // pixels
  Name individual;
  friend bool operator==(const SketchRegion&, const SketchRegion&) = default;
};

struct PrincipleSolutionDoc {
  std::string sketch;
  std::vector<SketchRegion> regions;
  std::vector<Name> individuals;  // declaration order
  std::vector<Atom> typings;      // ground concept atoms from `types`
  std::vector<Atom> requirements;
  std::vector<std::string> warnings;
};

/// Unqualified individuals default to `design`, unqualified classes and predicates to `geom`.
inline PrincipleSolutionDoc parse_annotations(std::string_view source, const std::string& file = "<input>",
                                              const AtomNamespaces& ns = {vocab::kGeometry, vocab::kDesign}) {
  text::Cursor cur(source, file, nullptr);
  PrincipleSolutionDoc doc;
  cur.expect_keyword("sketch");
  doc.sketch = cur.expect_string().text;

  while (!cur.at_end()) {
    if (cur.accept_keyword("region")) {
      SketchRegion r;
      r.name = cur.expect_ident("region name").text;
      cur.expect_keyword("at");
      cur.expect_punct("(");
      double* fields[] = {&r.x, &r.y, &r.width, &r.height};
      for (std::size_t i = 0; i < 4; ++i) {
        if (i) cur.expect_punct(",");
        const auto num = cur.expect_number();
        if (i >= 2 && num.number <= 0) throw ParseError(num.span, "positive region size", num.text);
        *fields[i] = num.number;
      }
      cur.expect_punct(")");
      cur.expect_keyword("denotes");
      r.individual = cur.qname(ns.individual, "individual");
      doc.regions.push_back(std::move(r));
    } else if (cur.accept_keyword("individual")) {
      Name who = cur.qname(ns.individual, "individual");
      if (std::find(doc.individuals.begin(), doc.individuals.end(), who) == doc.individuals.end())
        doc.individuals.push_back(who);
      if (cur.accept_keyword("types")) {
        do {
          doc.typings.push_back(concept_atom(cur.qname(ns.predicate, "class name"), Individual{who}));
        } while (cur.accept_punct(","));
      }
    } else if (cur.accept_keyword("require")) {
      const SourceSpan at = cur.peek().span;
      Atom a = text::parse_atom(cur, ns);
      if (a.kind == AtomKind::Builtin) throw ParseError(at, "concept or property atom", display(a));
      if (!is_ground(a)) throw ParseError(at, "ground atom", display(a));
      doc.requirements.push_back(std::move(a));
    } else {
      cur.fail("'region', 'individual' or 'require'");
    }
  }

  std::set<Name> declared(doc.individuals.begin(), doc.individuals.end());
  for (const auto& r : doc.regions)
    if (!declared.count(r.individual)) throw UndeclaredIndividual(qualified(r.individual));

  std::set<Name> known = declared;
  for (const auto& r : doc.regions) known.insert(r.individual);
  for (const auto& req : doc.requirements)
    for (const auto& t : req.args)
      if (auto* i = std::get_if<Individual>(&t); i && !known.count(i->name))
        doc.warnings.push_back("requirement " + display(req) + " mentions undeclared individual " + qualified(i->name));
  return doc;
}

/// Proof obligations: requirements with duplicates removed, first occurrence order.
inline std::vector<Atom> requirements_of(const PrincipleSolutionDoc& doc) {
  std::vector<Atom> out;
  std::unordered_set<Atom, AtomHash> seen;
  for (const auto& r : doc.requirements)
    if (seen.insert(r).second) out.push_back(r);
  return out;
}

}  // namespace qvl
