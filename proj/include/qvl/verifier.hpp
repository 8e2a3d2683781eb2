#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qvl/kb.hpp"
#include "qvl/reasoner.hpp"

namespace qvl {

struct Obligation {
  Atom goal;
  std::variant<ProofTree, MissingPremiseReport> verdict;

  bool satisfied() const { return std::holds_alternative<ProofTree>(verdict); }
  const ProofTree& proof() const { return std::get<ProofTree>(verdict); }
  const MissingPremiseReport& diagnosis() const { return std::get<MissingPremiseReport>(verdict); }
};

struct InputDigest {
  std::string role;
  std::string path;
  std::string digest;
};

struct VerificationReport {
  std::vector<Obligation> obligations;
  std::size_t satisfied = 0;
  std::size_t violated = 0;
  std::vector<InputDigest> inputs;

  bool all_satisfied() const { return violated == 0; }
};

/// `fnv1a64:<hex>` over the bytes; identifies inputs in reports.
inline std::string fnv1a64_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) out += hex[(h >> shift) & 0xf];
  return out;
}

/// Checks every requirement atom against the least model of the design ABox under the merged
/// background knowledge base.
inline VerificationReport verify_view(const std::vector<Atom>& requirements, const std::vector<Atom>& design_abox,
                                      const KnowledgeBase& background) {
  const std::vector<HornRule> rules = compile_axioms(background);
  std::vector<Atom> facts = design_abox;
  facts.insert(facts.end(), background.assertions.begin(), background.assertions.end());
  const FactStore store = materialize(rules, facts);

  VerificationReport report;
  for (const auto& goal : requirements) {
    if (!is_ground(goal)) throw PreconditionViolation("non-ground requirement " + display(goal));
    if (entails(store, goal)) {
      ProofTree proof = explain(store, goal);
      if (!validate_proof(proof, rules, store).ok()) throw std::logic_error("invalid proof for " + display(goal));
      report.obligations.push_back({goal, std::move(proof)});
      ++report.satisfied;
    } else {
      report.obligations.push_back({goal, diagnose(rules, store, goal)});
      ++report.violated;
    }
  }
  return report;
}

enum class ReportFormat { Text, Machine };

struct RenderOptions {
  bool proofs = true;  // text format only
};

namespace detail {

inline void render_proof(const ProofTree& node, std::size_t indent, std::string& out) {
  out += std::string(indent, ' ') + display(node.fact);
  out += node.rule ? "  <= " + node.rule->local : "  (asserted)";
  out += '\n';
  for (const auto& p : node.premises) render_proof(p, indent + 2, out);
}

inline std::string join_atoms(const std::vector<Atom>& atoms, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += sep;
    out += display(atoms[i]);
  }
  return out;
}

/// Candidate closest to firing: fewest missing atoms, earliest rule on ties.
inline const DiagnosisCandidate* best_candidate(const MissingPremiseReport& r) {
  const DiagnosisCandidate* best = nullptr;
  for (const auto& c : r.candidates)
    if (!best || c.missing.size() < best->missing.size()) best = &c;
  return best;
}

}  // namespace detail

inline std::string render_report(const VerificationReport& report, ReportFormat format, RenderOptions options = {}) {
  std::string out;
  if (format == ReportFormat::Machine) {
    for (const auto& ob : report.obligations) {
      if (ob.satisfied()) {
        out += "SATISFIED\t" + display(ob.goal) + "\tproof-depth=" + std::to_string(ob.proof().depth()) + "\n";
      } else if (const auto* c = detail::best_candidate(ob.diagnosis())) {
        out += "VIOLATED\t" + display(ob.goal) + "\trule=" + c->rule.local +
               ";missing=" + detail::join_atoms(c->missing, ";") + "\n";
      } else {
        out += "VIOLATED\t" + display(ob.goal) + "\tno-rule\n";
      }
    }
    out += "SUMMARY\tobligations=" + std::to_string(report.obligations.size()) +
           "\tsatisfied=" + std::to_string(report.satisfied) + "\tviolated=" + std::to_string(report.violated) + "\n";
    return out;
  }

  out += "verification report\n";
  for (const auto& in : report.inputs) out += "  " + in.role + " " + in.path + " " + in.digest + "\n";
  out += "obligations: " + std::to_string(report.obligations.size()) + ", satisfied: " +
         std::to_string(report.satisfied) + ", violated: " + std::to_string(report.violated) + "\n";
  for (const auto& ob : report.obligations) {
    out += "\n";
    if (ob.satisfied()) {
      out += "[SATISFIED] " + display(ob.goal) + "\n";
      if (options.proofs) detail::render_proof(ob.proof(), 2, out);
      continue;
    }
    out += "[VIOLATED] " + display(ob.goal) + "\n";
    const auto& diag = ob.diagnosis();
    if (diag.candidates.empty()) out += "  no rule concludes this atom\n";
    for (const auto& c : diag.candidates) {
      out += "  via " + c.rule.local + ":\n";
      if (!c.satisfied.empty()) out += "    satisfied: " + detail::join_atoms(c.satisfied, ", ") + "\n";
      out += "    missing: " + detail::join_atoms(c.missing, ", ") + "\n";
    }
  }
  out += "\nverdict: ";
  out += report.all_satisfied() ? "SATISFIED\n" : "VIOLATED\n";
  return out;
}

}  // namespace qvl
