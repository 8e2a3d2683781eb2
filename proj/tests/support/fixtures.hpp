#pragma once

#include <string>
#include <vector>

#include "qvl/qvl.hpp"
#include "support/oracle.hpp"

namespace fixtures {

/// Merged background from the shipped `.kb` files; the last one names the root.
inline qvl::KnowledgeBase background(const std::vector<std::string>& stems = {"geom", "feat", "rules"}) {
  std::vector<qvl::KnowledgeBase> modules;
  for (const auto& s : stems)
    for (auto& kb : qvl::parse_kb(oracle::slurp(oracle::data(s + ".kb")), s)) modules.push_back(std::move(kb));
  return qvl::merge_modules(modules, modules.back().name);
}

inline std::vector<qvl::Atom> design(const std::string& asm_file) {
  return qvl::assembly_to_abox(qvl::parse_assembly(oracle::slurp(oracle::data(asm_file)), asm_file));
}

inline std::vector<qvl::Atom> requirements(const std::string& psa_file) {
  return qvl::requirements_of(qvl::parse_annotations(oracle::slurp(oracle::data(psa_file)), psa_file));
}

struct Closure {
  std::vector<qvl::HornRule> rules;
  std::vector<qvl::Atom> facts;
  qvl::FactStore store;
};

inline Closure closure(const qvl::KnowledgeBase& bg, std::vector<qvl::Atom> abox) {
  Closure c;
  c.rules = qvl::compile_axioms(bg);
  c.facts = std::move(abox);
  c.facts.insert(c.facts.end(), bg.assertions.begin(), bg.assertions.end());
  c.store = qvl::materialize(c.rules, c.facts);
  return c;
}

inline qvl::Atom d(const std::string& pred_ns, const std::string& pred, const std::string& s, const std::string& o) {
  return qvl::role_atom({pred_ns, pred}, qvl::ind({"design", s}), qvl::ind({"design", o}));
}

}  // namespace fixtures
