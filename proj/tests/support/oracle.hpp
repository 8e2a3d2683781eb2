#pragma once

// Reference implementations kept deliberately dumb: every check here is a direct reading of
// the definition, with no indexing and no delta tracking.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qvl/qvl.hpp"

namespace oracle {

using qvl::Atom;
using qvl::HornRule;
using qvl::Term;

inline std::string data(const std::string& file) { return std::string(QVL_DATA_DIR) + "/" + file; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string atom_key(const Atom& a) { return qvl::to_string(a); }

/// Every substitution grounding all relational body atoms against `facts`, found by nested
/// loops over the whole fact list in body order.
inline void all_matches(const HornRule& r, const std::vector<Atom>& facts, std::size_t k,
                        qvl::detail::Substitution& sub, std::vector<qvl::detail::Substitution>& out) {
  if (k == r.body.size()) {
    out.push_back(sub);
    return;
  }
  const Atom& pattern = r.body[k];
  if (pattern.kind == qvl::AtomKind::Builtin) {
    all_matches(r, facts, k + 1, sub, out);  // evaluated once everything is bound
    return;
  }
  for (const auto& f : facts) {
    if (f.kind != pattern.kind || f.predicate != pattern.predicate) continue;
    auto saved = sub;
    if (qvl::detail::unify(pattern, f, sub)) all_matches(r, facts, k + 1, sub, out);
    sub = saved;
  }
}

/// Naive fixpoint: apply every rule to the full fact set until nothing changes.
inline std::set<std::string> naive_closure(const std::vector<HornRule>& rules, const std::vector<Atom>& input) {
  std::vector<Atom> facts;
  std::set<std::string> keys;
  for (const auto& f : input)
    if (keys.insert(atom_key(f)).second) facts.push_back(f);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : rules) {
      std::vector<qvl::detail::Substitution> subs;
      qvl::detail::Substitution sub;
      all_matches(r, facts, 0, sub, subs);
      for (const auto& s : subs) {
        bool ok = true;
        for (const auto& b : r.body)
          if (b.kind == qvl::AtomKind::Builtin) {
            Atom g = qvl::detail::instantiate(b, s);
            ok = ok && qvl::eval_builtin(g.op, g.args[0], g.args[1]);
          }
        if (!ok) continue;
        Atom head = qvl::detail::instantiate(r.head, s);
        if (qvl::is_literal(head.args[0])) continue;
        if (keys.insert(atom_key(head)).second) {
          facts.push_back(head);
          changed = true;
        }
      }
    }
  }
  return keys;
}

inline std::set<std::string> keys_of(const qvl::FactStore& store) {
  std::set<std::string> out;
  for (const auto& f : store.facts()) out.insert(atom_key(f));
  return out;
}

/// Herbrand bound computed straight from the definition, over every predicate mentioned in
/// the rules or facts.
inline std::size_t herbrand_bound(const std::vector<HornRule>& rules, const std::vector<Atom>& facts) {
  std::set<std::string> individuals, literals, concepts, roles, data_props;
  auto see = [&](const Atom& a) {
    for (const auto& t : a.args) {
      if (qvl::is_individual(t)) individuals.insert(qvl::to_string(t));
      if (qvl::is_literal(t)) literals.insert(qvl::to_string(t));
    }
    if (a.kind == qvl::AtomKind::Concept) concepts.insert(qvl::qualified(a.predicate));
    if (a.kind == qvl::AtomKind::Property) {
      // a variable object may end up either way
      if (!qvl::is_literal(a.args[1])) roles.insert(qvl::qualified(a.predicate));
      if (!qvl::is_individual(a.args[1])) data_props.insert(qvl::qualified(a.predicate));
    }
  };
  for (const auto& f : facts) see(f);
  for (const auto& r : rules) {
    for (const auto& a : r.body) see(a);
    see(r.head);
  }
  const std::size_t i = individuals.size(), v = literals.size();
  return concepts.size() * i + roles.size() * i * i + data_props.size() * i * v;
}

/// Every fact in the store is asserted or the head of a rule instance over earlier facts.
inline bool justifications_replay(const qvl::FactStore& store, const std::vector<HornRule>& rules) {
  std::map<qvl::Name, const HornRule*> by_id;
  for (const auto& r : rules) by_id.emplace(r.id, &r);
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& j = store.justification(i);
    if (j.asserted()) continue;
    auto it = by_id.find(*j.rule);
    if (it == by_id.end()) return false;
    const HornRule& r = *it->second;
    qvl::detail::Substitution sub;
    if (!qvl::detail::unify(r.head, store.fact(i), sub)) return false;
    std::size_t p = 0;
    for (const auto& b : r.body) {
      if (b.kind == qvl::AtomKind::Builtin) continue;
      if (p >= j.premises.size() || !qvl::detail::unify(b, j.premises[p], sub)) return false;
      auto at = store.index_of(j.premises[p]);
      if (!at || *at >= i) return false;
      ++p;
    }
    for (const auto& b : r.body) {
      if (b.kind != qvl::AtomKind::Builtin) continue;
      Atom g = qvl::detail::instantiate(b, sub);
      if (!qvl::is_ground(g) || !qvl::eval_builtin(g.op, g.args[0], g.args[1])) return false;
    }
  }
  return true;
}

}  // namespace oracle
