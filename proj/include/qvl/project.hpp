#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qvl/errors.hpp"
#include "qvl/kb.hpp"
#include "qvl/lexer.hpp"

namespace qvl {

struct ProjectDocument {
  std::string id;
  int stage;  // 1..6 (S1..S6)
  std::string kind;
  std::string file;
};

struct ProjectFragment {
  std::string id;  // "<doc>#<local>"
  std::string document;
};

/// `later` refines `earlier`.
struct Refinement {
  std::string later;
  std::string earlier;
};

struct Illustration {
  std::string fragment;
  Name concept_name;
};

enum class TraceDirection { Up, Down };

/// Design documents of one project, their fragments, the refinement relation between
/// fragments, and links from fragments to the ontology concepts they depict.
class ProjectGraph {
public:
  std::string name;
  std::vector<ProjectDocument> documents;
  std::vector<ProjectFragment> fragments;
  std::vector<Refinement> refines;
  std::vector<Illustration> illustrates;

  bool has_fragment(std::string_view id) const {
    return std::any_of(fragments.begin(), fragments.end(), [&](const auto& f) { return f.id == id; });
  }

  void add_illustration(std::string fragment, Name concept_name) {
    if (!has_fragment(fragment)) throw UnknownFragment(fragment);
    illustrates.push_back({std::move(fragment), std::move(concept_name)});
  }

  /// Throws RefinementCycle if the refines edges contain a cycle.
  void check_acyclic() const {
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    auto visit = [&](auto& self, const std::string& f) -> void {
      int& s = state[f];
      if (s == 2) return;
      if (s == 1) throw RefinementCycle(f);
      s = 1;
      for (const auto& e : refines)
        if (e.later == f) self(self, e.earlier);
      state[f] = 2;
    };
    for (const auto& f : fragments) visit(visit, f.id);
  }
};

namespace detail {

inline std::string fragment_id(text::Cursor& cur) {
  std::string doc = cur.expect_ident("document id").text;
  cur.expect_punct("#");
  return doc + "#" + cur.expect_ident("fragment id").text;
}

}  // namespace detail

/// Parses a `.proj` project description. Unqualified concepts land in `default_namespace`.
inline ProjectGraph parse_project(std::string_view source, const std::string& file = "<input>",
                                  const std::string& default_namespace = "onto") {
  text::Cursor cur(source, file, nullptr);
  ProjectGraph g;
  cur.expect_keyword("project");
  g.name = cur.expect_ident("project name").text;

  std::set<std::string> doc_ids;
  std::vector<std::string> edge_ends;
  while (!cur.at_end()) {
    const SourceSpan at = cur.peek().span;
    if (cur.accept_keyword("document")) {
      ProjectDocument d;
      d.id = cur.expect_ident("document id").text;
      if (!doc_ids.insert(d.id).second) throw ParseError(at, "unique document id", "'" + d.id + "'");
      cur.expect_keyword("stage");
      const auto st = cur.expect_ident("stage S1..S6");
      if (st.text.size() != 2 || st.text[0] != 'S' || st.text[1] < '1' || st.text[1] > '6')
        throw ParseError(st.span, "stage S1..S6", "'" + st.text + "'");
      d.stage = st.text[1] - '0';
      cur.expect_keyword("kind");
      d.kind = cur.expect_ident("document kind").text;
      cur.expect_keyword("file");
      d.file = cur.expect_string().text;
      g.documents.push_back(std::move(d));
    } else if (cur.accept_keyword("fragment")) {
      const SourceSpan fat = cur.peek().span;
      std::string id = detail::fragment_id(cur);
      if (g.has_fragment(id)) throw ParseError(fat, "unique fragment id", "'" + id + "'");
      std::string doc = id.substr(0, id.find('#'));
      if (!doc_ids.count(doc)) throw ParseError(fat, "fragment of a declared document", "'" + id + "'");
      g.fragments.push_back({std::move(id), std::move(doc)});
    } else if (cur.accept_keyword("refines")) {
      const SourceSpan fat = cur.peek().span;
      std::string later = detail::fragment_id(cur);
      cur.expect_keyword("of");
      std::string earlier = detail::fragment_id(cur);
      if (later.substr(0, later.find('#')) == earlier.substr(0, earlier.find('#')))
        throw ParseError(fat, "fragments of distinct documents", "'" + later + "' and '" + earlier + "'");
      edge_ends.push_back(later);
      edge_ends.push_back(earlier);
      g.refines.push_back({std::move(later), std::move(earlier)});
    } else if (cur.accept_keyword("illustrates")) {
      std::string frag = detail::fragment_id(cur);
      cur.expect_keyword("concept");
      edge_ends.push_back(frag);
      g.illustrates.push_back({std::move(frag), cur.qname(default_namespace, "concept")});
    } else {
      cur.fail("'document', 'fragment', 'refines' or 'illustrates'");
    }
  }
  for (const auto& frag : edge_ends)
    if (!g.has_fragment(frag)) throw UnknownFragment(frag);
  g.check_acyclic();
  return g;
}

/// Transitive refinement closure from `fragment`, breadth-first, without duplicates.
/// Up follows refines edges toward earlier stages, Down toward later stages.
inline std::vector<std::string> trace(const ProjectGraph& g, const std::string& fragment, TraceDirection dir) {
  if (!g.has_fragment(fragment)) throw UnknownFragment(fragment);
  std::vector<std::string> out;
  std::set<std::string> seen{fragment};
  std::deque<std::string> queue{fragment};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    for (const auto& e : g.refines) {
      const std::string& from = dir == TraceDirection::Up ? e.later : e.earlier;
      const std::string& to = dir == TraceDirection::Up ? e.earlier : e.later;
      if (from == cur && seen.insert(to).second) {
        out.push_back(to);
        queue.push_back(to);
      }
    }
  }
  return out;
}

/// Fragments illustrating `concept_name`, in document then fragment declaration order.
inline std::vector<std::string> fragments_of_concept(const ProjectGraph& g, const Name& concept_name) {
  std::vector<std::string> out;
  for (const auto& d : g.documents)
    for (const auto& f : g.fragments) {
      if (f.document != d.id) continue;
      bool hit = std::any_of(g.illustrates.begin(), g.illustrates.end(),
                             [&](const auto& i) { return i.fragment == f.id && i.concept_name == concept_name; });
      if (hit) out.push_back(f.id);
    }
  return out;
}

}  // namespace qvl
