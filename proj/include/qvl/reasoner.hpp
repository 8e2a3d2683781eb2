#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qvl/errors.hpp"
#include "qvl/kb.hpp"

namespace qvl {

// ---------------------------------------------------------------------------
// Axiom compilation
// ---------------------------------------------------------------------------

/// `kb.rules` followed by one Horn rule per axiom (two for inverse pairs), ids `ax1`, `ax2`, ...
inline std::vector<HornRule> compile_axioms(const KnowledgeBase& kb) {
  std::vector<HornRule> out = kb.rules;
  std::set<Name> taken;
  for (const auto& r : kb.rules) taken.insert(r.id);
  std::size_t counter = 0;
  auto emit = [&](std::vector<Atom> body, Atom head) {
    Name id{kb.name.ns, "ax" + std::to_string(++counter)};
    if (taken.count(id)) throw DuplicateRuleId(qualified(id));
    out.push_back(HornRule{std::move(id), std::move(body), std::move(head)});
  };
  const Term x = var("x"), y = var("y"), z = var("z");

  for (const auto& ax : kb.axioms) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, axiom::SubClassOf>) {
            emit({concept_atom(a.sub, x)}, concept_atom(a.sup, x));
          } else if constexpr (std::is_same_v<T, axiom::SubPropertyOf>) {
            emit({role_atom(a.sub, x, y)}, role_atom(a.sup, x, y));
          } else if constexpr (std::is_same_v<T, axiom::SubPropertyChain>) {
            std::vector<Atom> body;
            for (std::size_t i = 0; i < a.chain.size(); ++i)
              body.push_back(role_atom(a.chain[i], var("x" + std::to_string(i)), var("x" + std::to_string(i + 1))));
            emit(std::move(body), role_atom(a.sup, var("x0"), var("x" + std::to_string(a.chain.size()))));
          } else if constexpr (std::is_same_v<T, axiom::InverseProperties>) {
            emit({role_atom(a.p, x, y)}, role_atom(a.q, y, x));
            emit({role_atom(a.q, x, y)}, role_atom(a.p, y, x));
          } else if constexpr (std::is_same_v<T, axiom::Symmetric>) {
            emit({role_atom(a.p, x, y)}, role_atom(a.p, y, x));
          } else if constexpr (std::is_same_v<T, axiom::Transitive>) {
            emit({role_atom(a.p, x, y), role_atom(a.p, y, z)}, role_atom(a.p, x, z));
          } else if constexpr (std::is_same_v<T, axiom::Domain>) {
            emit({role_atom(a.p, x, y)}, concept_atom(a.c, x));
          } else {
            emit({role_atom(a.p, x, y)}, concept_atom(a.c, y));
          }
        },
        ax);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fact store
// ---------------------------------------------------------------------------

/// Why a fact holds: asserted (no rule) or derived by `rule` from `premises`.
struct Justification {
  std::optional<Name> rule;
  std::vector<Atom> premises;

  bool asserted() const { return !rule.has_value(); }
};

class FactStore {
public:
  std::size_t size() const { return facts_.size(); }
  const std::vector<Atom>& facts() const { return facts_; }
  const Atom& fact(std::size_t i) const { return facts_.at(i); }

  bool contains(const Atom& a) const { return index_.count(a) > 0; }

  std::optional<std::size_t> index_of(const Atom& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Justification& justification(std::size_t i) const { return justifications_.at(i); }
  const Justification* justification(const Atom& a) const {
    auto i = index_of(a);
    return i ? &justifications_[*i] : nullptr;
  }

  /// Appends `a` unless present. Returns whether it was new.
  bool add(Atom a, Justification j) {
    assert(is_ground(a) && a.kind != AtomKind::Builtin);
    if (index_.count(a)) return false;
    const std::size_t i = facts_.size();
    PredKey key{a.kind, a.predicate};
    by_predicate_[key].push_back(i);
    by_subject_[SubjectKey{key, a.subject()}].push_back(i);
    index_.emplace(a, i);
    facts_.push_back(std::move(a));
    justifications_.push_back(std::move(j));
    return true;
  }

  /// Ascending indices of facts with the given predicate.
  const std::vector<std::size_t>& with_predicate(AtomKind kind, const Name& pred) const {
    auto it = by_predicate_.find(PredKey{kind, pred});
    return it == by_predicate_.end() ? empty_ : it->second;
  }

  /// Ascending indices of facts with the given predicate and subject.
  const std::vector<std::size_t>& with_subject(AtomKind kind, const Name& pred, const Term& subject) const {
    auto it = by_subject_.find(SubjectKey{PredKey{kind, pred}, subject});
    return it == by_subject_.end() ? empty_ : it->second;
  }

private:
  struct PredKey {
    AtomKind kind;
    Name name;
    friend bool operator==(const PredKey&, const PredKey&) = default;
  };
  struct PredKeyHash {
    std::size_t operator()(const PredKey& k) const {
      std::size_t h = NameHash{}(k.name);
      hash_combine(h, static_cast<std::size_t>(k.kind));
      return h;
    }
  };
  struct SubjectKey {
    PredKey pred;
    Term subject;
    friend bool operator==(const SubjectKey&, const SubjectKey&) = default;
  };
  struct SubjectKeyHash {
    std::size_t operator()(const SubjectKey& k) const {
      std::size_t h = PredKeyHash{}(k.pred);
      hash_combine(h, TermHash{}(k.subject));
      return h;
    }
  };

  std::vector<Atom> facts_;
  std::vector<Justification> justifications_;
  std::unordered_map<Atom, std::size_t, AtomHash> index_;
  std::unordered_map<PredKey, std::vector<std::size_t>, PredKeyHash> by_predicate_;
  std::unordered_map<SubjectKey, std::vector<std::size_t>, SubjectKeyHash> by_subject_;
  std::vector<std::size_t> empty_;
};

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

/// Evaluates a builtin over two ground literals. Strings order lexicographically; mixing a
/// string with a number, or passing an individual, raises BuiltinTypeError.
inline bool eval_builtin(BuiltinOp op, const Term& left, const Term& right) {
  auto describe = [&] {
    return std::string(builtin_name(op)) + "(" + to_string(left) + "," + to_string(right) + ")";
  };
  const auto* l = std::get_if<DataValue>(&left);
  const auto* r = std::get_if<DataValue>(&right);
  if (!l || !r || l->value.index() != r->value.index()) throw BuiltinTypeError(describe());
  int cmp;
  if (l->is_number()) {
    cmp = l->as_number() < r->as_number() ? -1 : (l->as_number() > r->as_number() ? 1 : 0);
  } else {
    int c = l->as_string().compare(r->as_string());
    cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  switch (op) {
    case BuiltinOp::Eq: return cmp == 0;
    case BuiltinOp::Lt: return cmp < 0;
    case BuiltinOp::Le: return cmp <= 0;
    case BuiltinOp::Gt: return cmp > 0;
    case BuiltinOp::Ge: return cmp >= 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Semi-naive materialization
// ---------------------------------------------------------------------------

namespace detail {

/// Rule with variables numbered 0..n-1 for array-indexed bindings.
struct CompiledRule {
  struct Slot {
    int var = -1;  // >= 0: variable index, else `constant`
    Term constant;
  };
  struct Pattern {
    const Atom* source;
    std::vector<Slot> args;
  };

  const HornRule* rule;
  std::vector<Pattern> body;
  Pattern head;
  std::size_t variables = 0;
  std::vector<std::size_t> relational;  // body positions of non-builtin atoms
  std::vector<std::size_t> builtins;

  explicit CompiledRule(const HornRule& r) : rule(&r), head{&r.head, {}} {
    std::map<std::string, int> ids;
    auto compile = [&](const Atom& a) {
      Pattern p{&a, {}};
      for (const auto& t : a.args) {
        if (auto* v = std::get_if<Variable>(&t)) {
          auto [it, fresh] = ids.emplace(v->symbol, static_cast<int>(ids.size()));
          p.args.push_back(Slot{it->second, {}});
        } else {
          p.args.push_back(Slot{-1, t});
        }
      }
      return p;
    };
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      body.push_back(compile(r.body[i]));
      (r.body[i].kind == AtomKind::Builtin ? builtins : relational).push_back(i);
    }
    head = compile(r.head);
    variables = ids.size();
  }
};

class Joiner {
public:
  using Bindings = std::vector<const Term*>;

  Joiner(const CompiledRule& rule, const FactStore& store) : rule_(rule), store_(store) {}

  struct Step {
    std::size_t position;
    std::size_t lo, hi;
  };

  /// Enumerates every body instantiation where relational atom `order[k]` ranges over facts
  /// with index in [lo, hi). Calls `emit(bindings, premise_indices_by_body_position)`.
  template <class Emit>
  void run(std::vector<Step> order, Emit&& emit) {
    order_ = std::move(order);
    bindings_.assign(rule_.variables, nullptr);
    premises_.assign(rule_.body.size(), 0);
    schedule_builtins();
    if (!builtins_ok(before_)) return;
    step(0, emit);
  }

  const Term& value(const CompiledRule::Slot& s) const { return s.var >= 0 ? *bindings_[s.var] : s.constant; }

private:
  void schedule_builtins() {
    std::vector<bool> bound(rule_.variables, false);
    after_.assign(order_.size(), {});
    before_.clear();
    std::vector<bool> placed(rule_.body.size(), false);
    auto ready = [&](std::size_t b) {
      for (const auto& s : rule_.body[b].args)
        if (s.var >= 0 && !bound[s.var]) return false;
      return true;
    };
    for (auto b : rule_.builtins)
      if (ready(b)) {
        before_.push_back(b);
        placed[b] = true;
      }
    for (std::size_t k = 0; k < order_.size(); ++k) {
      for (const auto& s : rule_.body[order_[k].position].args)
        if (s.var >= 0) bound[s.var] = true;
      for (auto b : rule_.builtins)
        if (!placed[b] && ready(b)) {
          after_[k].push_back(b);
          placed[b] = true;
        }
    }
  }

  bool builtins_ok(const std::vector<std::size_t>& which) const {
    for (auto b : which) {
      const auto& p = rule_.body[b];
      if (!eval_builtin(p.source->op, value(p.args[0]), value(p.args[1]))) return false;
    }
    return true;
  }

  template <class Emit>
  void step(std::size_t k, Emit& emit) {
    if (k == order_.size()) {
      emit(bindings_, premises_);
      return;
    }
    const Step& s = order_[k];
    const auto& pat = rule_.body[s.position];
    const Atom& src = *pat.source;
    const auto& first = pat.args[0];
    const bool subject_known = first.var < 0 || bindings_[first.var] != nullptr;
    const auto& candidates = subject_known ? store_.with_subject(src.kind, src.predicate, value(first))
                                           : store_.with_predicate(src.kind, src.predicate);
    auto it = std::lower_bound(candidates.begin(), candidates.end(), s.lo);
    std::vector<int> trail;
    for (; it != candidates.end() && *it < s.hi; ++it) {
      const Atom& fact = store_.fact(*it);
      trail.clear();
      bool ok = true;
      for (std::size_t a = 0; a < pat.args.size() && ok; ++a) {
        const auto& slot = pat.args[a];
        if (slot.var < 0) {
          ok = slot.constant == fact.args[a];
        } else if (bindings_[slot.var]) {
          ok = *bindings_[slot.var] == fact.args[a];
        } else {
          bindings_[slot.var] = &fact.args[a];
          trail.push_back(slot.var);
        }
      }
      if (ok) {
        premises_[s.position] = *it;
        if (builtins_ok(after_[k])) step(k + 1, emit);
      }
      for (int v : trail) bindings_[v] = nullptr;
    }
  }

  const CompiledRule& rule_;
  const FactStore& store_;
  std::vector<Step> order_;
  Bindings bindings_;
  std::vector<std::size_t> premises_;
  std::vector<std::size_t> before_;
  std::vector<std::vector<std::size_t>> after_;
};

/// Delta atom first, then greedily the relational atom with most bound arguments.
inline std::vector<Joiner::Step> join_order(const CompiledRule& rule, std::size_t delta_pos, std::size_t lo,
                                            std::size_t hi) {
  std::vector<Joiner::Step> order{{delta_pos, lo, hi}};
  std::vector<bool> bound(rule.variables, false);
  auto bind = [&](std::size_t pos) {
    for (const auto& s : rule.body[pos].args)
      if (s.var >= 0) bound[s.var] = true;
  };
  bind(delta_pos);
  std::vector<std::size_t> rest;
  for (auto p : rule.relational)
    if (p != delta_pos) rest.push_back(p);
  while (!rest.empty()) {
    std::size_t best = 0;
    int best_score = -1;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      int score = 0;
      for (const auto& s : rule.body[rest[i]].args)
        if (s.var < 0 || bound[s.var]) ++score;
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    const std::size_t p = rest[best];
    // Atoms before the delta position see only older facts so each combination is joined once.
    order.push_back({p, 0, p < delta_pos ? lo : hi});
    bind(p);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return order;
}

}  // namespace detail

/// Least fixpoint of `rules` over `facts`, computed semi-naively. Each fact keeps the first
/// justification found; derivation order is deterministic in rule and fact order.
inline FactStore materialize(const std::vector<HornRule>& rules, const std::vector<Atom>& facts) {
  FactStore store;
  for (const auto& f : facts) {
    if (!is_ground(f) || f.kind == AtomKind::Builtin) throw MalformedRule("non-ground or builtin fact " + to_string(f));
    store.add(f, Justification{});
  }
  std::vector<detail::CompiledRule> compiled;
  compiled.reserve(rules.size());
  for (const auto& r : rules) compiled.emplace_back(check_rule_safety(r));

  std::size_t lo = 0, hi = store.size();
  bool first_round = true;
  for (;;) {
    for (const auto& rule : compiled) {
      std::vector<std::pair<Atom, Justification>> pending;
      std::unordered_set<Atom, AtomHash> pending_seen;
      detail::Joiner joiner(rule, store);
      auto emit = [&](const detail::Joiner::Bindings&, const std::vector<std::size_t>& premises) {
        Atom head{rule.head.source->kind, rule.head.source->predicate, BuiltinOp::Eq, {}};
        for (const auto& s : rule.head.args) head.args.push_back(joiner.value(s));
        // A literal cannot be the subject of an assertion.
        if (is_literal(head.args[0])) return;
        if (store.contains(head) || !pending_seen.insert(head).second) return;
        Justification j{rule.rule->id, {}};
        for (auto p : rule.relational) j.premises.push_back(store.fact(premises[p]));
        pending.emplace_back(std::move(head), std::move(j));
      };
      if (rule.relational.empty()) {
        if (first_round) joiner.run({}, emit);
      } else {
        for (auto d : rule.relational) {
          if (lo == hi) break;
          joiner.run(detail::join_order(rule, d, lo, hi), emit);
        }
      }
      for (auto& [atom, just] : pending) store.add(std::move(atom), std::move(just));
    }
    if (store.size() == hi) break;
    lo = hi;
    hi = store.size();
    first_round = false;
  }
  return store;
}

inline bool entails(const FactStore& store, const Atom& goal) { return store.contains(goal); }

/// Upper bound on the closure size: |concepts|*|I| + sum over properties of |I|^2 (individual
/// objects) and |I|*|V| (literal objects), with I and V the individuals and literals of the input.
inline std::size_t herbrand_bound(const std::vector<HornRule>& rules, const std::vector<Atom>& facts,
                                  const FactStore& store) {
  std::unordered_set<Term, TermHash> individuals, literals;
  auto collect = [&](const Atom& a) {
    for (const auto& t : a.args) {
      if (is_individual(t)) individuals.insert(t);
      if (is_literal(t)) literals.insert(t);
    }
  };
  for (const auto& f : facts) collect(f);
  for (const auto& r : rules) {
    for (const auto& a : r.body) collect(a);
    collect(r.head);
  }
  std::set<Name> concepts, role_props, data_props;
  for (const auto& f : store.facts()) {
    if (f.kind == AtomKind::Concept)
      concepts.insert(f.predicate);
    else if (is_data_atom(f))
      data_props.insert(f.predicate);
    else
      role_props.insert(f.predicate);
  }
  const std::size_t ni = individuals.size(), nv = literals.size();
  return concepts.size() * ni + role_props.size() * ni * ni + data_props.size() * ni * nv;
}

// ---------------------------------------------------------------------------
// Proofs
// ---------------------------------------------------------------------------

struct ProofTree {
  Atom fact;
  std::optional<Name> rule;  // nullopt: asserted leaf
  std::vector<ProofTree> premises;

  /// Edges on the longest root-to-leaf path.
  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& p : premises) d = std::max(d, p.depth() + 1);
    return d;
  }
  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.node_count();
    return n;
  }
};

/// Proof of `goal` following the recorded first justifications.
inline ProofTree explain(const FactStore& store, const Atom& goal) {
  auto i = store.index_of(goal);
  if (!i) throw NotDerived(display(goal));
  const Justification& j = store.justification(*i);
  ProofTree tree{goal, j.rule, {}};
  for (const auto& p : j.premises) {
    assert(store.index_of(p).value() < *i);
    tree.premises.push_back(explain(store, p));
  }
  return tree;
}

namespace detail {

using Substitution = std::map<std::string, Term>;

/// Extends `sub` so that `pattern` instantiates to the ground `fact`.
inline bool unify(const Atom& pattern, const Atom& fact, Substitution& sub) {
  if (pattern.kind != fact.kind || pattern.predicate != fact.predicate || pattern.op != fact.op ||
      pattern.args.size() != fact.args.size())
    return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    if (auto* v = std::get_if<Variable>(&pattern.args[i])) {
      auto [it, fresh] = sub.emplace(v->symbol, fact.args[i]);
      if (!fresh && !(it->second == fact.args[i])) return false;
    } else if (!(pattern.args[i] == fact.args[i])) {
      return false;
    }
  }
  return true;
}

inline Atom instantiate(const Atom& pattern, const Substitution& sub) {
  Atom out = pattern;
  for (auto& t : out.args)
    if (auto* v = std::get_if<Variable>(&t))
      if (auto it = sub.find(v->symbol); it != sub.end()) t = it->second;
  return out;
}

}  // namespace detail

struct ProofCheck {
  std::size_t nodes = 0;
  std::size_t valid = 0;
  std::vector<std::string> problems;

  bool ok() const { return nodes == valid; }
};

/// Replays a proof: each internal node must be an instance of its rule under one substitution
/// (head = node, relational body atoms = children in order, builtins true) and each leaf an
/// asserted fact of `store`.
inline ProofCheck validate_proof(const ProofTree& tree, const std::vector<HornRule>& rules, const FactStore& store) {
  ProofCheck check;
  std::map<Name, const HornRule*> by_id;
  for (const auto& r : rules) by_id.emplace(r.id, &r);

  auto visit = [&](auto& self, const ProofTree& node) -> void {
    ++check.nodes;
    auto fail = [&](const std::string& why) { check.problems.push_back(display(node.fact) + ": " + why); };
    for (const auto& p : node.premises) self(self, p);

    const Justification* j = store.justification(node.fact);
    if (!j) return fail("not in store");
    if (!node.rule) {
      if (!node.premises.empty()) return fail("leaf with premises");
      if (!j->asserted()) return fail("leaf is not asserted");
      ++check.valid;
      return;
    }
    auto it = by_id.find(*node.rule);
    if (it == by_id.end()) return fail("unknown rule " + qualified(*node.rule));
    const HornRule& rule = *it->second;
    detail::Substitution sub;
    if (!detail::unify(rule.head, node.fact, sub)) return fail("head does not match");
    std::size_t child = 0;
    for (const auto& atom : rule.body) {
      if (atom.kind == AtomKind::Builtin) continue;
      if (child >= node.premises.size() || !detail::unify(atom, node.premises[child].fact, sub))
        return fail("premise " + std::to_string(child) + " does not match");
      ++child;
    }
    if (child != node.premises.size()) return fail("extra premises");
    for (const auto& atom : rule.body) {
      if (atom.kind != AtomKind::Builtin) continue;
      Atom b = detail::instantiate(atom, sub);
      if (!is_ground(b) || !eval_builtin(b.op, b.args[0], b.args[1])) return fail("builtin " + display(b) + " fails");
    }
    ++check.valid;
  };
  visit(visit, tree);
  return check;
}

// ---------------------------------------------------------------------------
// Why-not diagnostics
// ---------------------------------------------------------------------------

struct DiagnosisCandidate {
  Name rule;
  std::vector<std::pair<std::string, Term>> substitution;  // variable -> value, first-appearance order
  std::vector<Atom> satisfied;                            // body order
  std::vector<Atom> missing;                              // body order; unbound variables stay variables
};

struct MissingPremiseReport {
  Atom goal;
  std::vector<DiagnosisCandidate> candidates;
};

namespace detail {

class BestInstantiation {
public:
  BestInstantiation(const HornRule& rule, const FactStore& store, Substitution seed)
      : rule_(rule), store_(store), current_(std::move(seed)) {
    std::vector<std::size_t> relational;
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      if (rule.body[i].kind == AtomKind::Builtin)
        builtins_.push_back(i);
      else
        relational.push_back(i);
    }
    // Atoms anchored by the goal first, stable in body order.
    auto anchored = [&](std::size_t i) {
      int n = 0;
      for (const auto& t : rule.body[i].args)
        if (!is_variable(t) || current_.count(std::get<Variable>(t).symbol)) ++n;
      return n;
    };
    std::stable_sort(relational.begin(), relational.end(),
                     [&](std::size_t a, std::size_t b) { return anchored(a) > anchored(b); });
    order_ = std::move(relational);
    matched_.assign(rule.body.size(), false);
  }

  void search() { dfs(0, 0); }

  Substitution best;
  std::vector<bool> best_matched;
  int best_score = -1;

private:
  static constexpr std::size_t kNodeBudget = 500000;

  int score_builtins(std::vector<bool>& matched) const {
    int n = 0;
    for (auto b : builtins_) {
      Atom inst = instantiate(rule_.body[b], current_);
      bool ok = false;
      if (is_ground(inst)) {
        try {
          ok = eval_builtin(inst.op, inst.args[0], inst.args[1]);
        } catch (const BuiltinTypeError&) {
          ok = false;
        }
      }
      matched[b] = ok;
      n += ok ? 1 : 0;
    }
    return n;
  }

  void dfs(std::size_t k, int satisfied) {
    if (++nodes_ > kNodeBudget) return;
    const int remaining = static_cast<int>(order_.size() - k + builtins_.size());
    if (satisfied + remaining <= best_score) return;
    if (k == order_.size()) {
      auto matched = matched_;
      int total = satisfied + score_builtins(matched);
      if (total > best_score) {
        best_score = total;
        best = current_;
        best_matched = std::move(matched);
      }
      return;
    }
    const Atom& pattern = rule_.body[order_[k]];
    const Atom partial = instantiate(pattern, current_);
    const auto& candidates = is_variable(partial.args[0])
                                 ? store_.with_predicate(pattern.kind, pattern.predicate)
                                 : store_.with_subject(pattern.kind, pattern.predicate, partial.args[0]);
    for (auto idx : candidates) {
      Substitution saved = current_;
      if (unify(pattern, store_.fact(idx), current_)) {
        matched_[order_[k]] = true;
        dfs(k + 1, satisfied + 1);
        matched_[order_[k]] = false;
      }
      current_ = std::move(saved);
    }
    dfs(k + 1, satisfied);
  }

  const HornRule& rule_;
  const FactStore& store_;
  Substitution current_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> builtins_;
  std::vector<bool> matched_;
  std::size_t nodes_ = 0;
};

}  // namespace detail

/// One-level why-not analysis for a goal that is not entailed. For each rule whose head
/// unifies with the goal, reports the body instantiation satisfying the most atoms.
inline MissingPremiseReport diagnose(const std::vector<HornRule>& rules, const FactStore& store, const Atom& goal) {
  if (entails(store, goal)) throw PreconditionViolation("diagnose on entailed goal " + display(goal));
  MissingPremiseReport report{goal, {}};
  for (const auto& rule : rules) {
    detail::Substitution seed;
    if (!detail::unify(rule.head, goal, seed)) continue;
    detail::BestInstantiation search(rule, store, seed);
    search.search();
    search.best_matched.resize(rule.body.size(), false);

    DiagnosisCandidate cand{rule.id, {}, {}, {}};
    std::vector<std::string> seen;
    auto note_vars = [&](const Atom& a) {
      for (const auto& t : a.args)
        if (auto* v = std::get_if<Variable>(&t))
          if (std::find(seen.begin(), seen.end(), v->symbol) == seen.end()) seen.push_back(v->symbol);
    };
    note_vars(rule.head);
    for (const auto& a : rule.body) note_vars(a);
    for (const auto& v : seen)
      if (auto it = search.best.find(v); it != search.best.end()) cand.substitution.emplace_back(v, it->second);
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      Atom inst = detail::instantiate(rule.body[i], search.best);
      (search.best_matched[i] ? cand.satisfied : cand.missing).push_back(std::move(inst));
    }
    assert(!cand.missing.empty());
    report.candidates.push_back(std::move(cand));
  }
  return report;
}

}  // namespace qvl
