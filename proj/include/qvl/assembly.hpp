#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qvl/errors.hpp"
#include "qvl/kb.hpp"
#include "qvl/lexer.hpp"

namespace qvl {

/// Namespaces shared by the ingest front ends.
namespace vocab {
inline const std::string kDesign = "design";  // individuals of both ABoxes
inline const std::string kFeatures = "feat";  // CAD feature vocabulary
inline const std::string kGeometry = "geom";  // default for requirement predicates

inline Name feat(std::string local) { return Name{kFeatures, std::move(local)}; }
inline Name design(std::string local) { return Name{kDesign, std::move(local)}; }
}  // namespace vocab

struct AxisRef {
  Name part;
  Name axis;
  friend bool operator==(const AxisRef&, const AxisRef&) = default;
};

struct PartDecl {
  struct Position {
    Name axis;
    std::string datum;
    double millimeters;
    friend bool operator==(const Position&, const Position&) = default;
  };
  struct Dimension {
    std::string name;
    double millimeters;
    friend bool operator==(const Dimension&, const Dimension&) = default;
  };

  Name name;
  std::vector<Name> axes;
  std::vector<Position> positions;
  std::vector<Dimension> dimensions;
  friend bool operator==(const PartDecl&, const PartDecl&) = default;
};

struct AngleConstraintDecl {
  Name name;
  AxisRef first, second;
  double degrees;  // normalized into [0, 360)
  friend bool operator==(const AngleConstraintDecl&, const AngleConstraintDecl&) = default;
};

struct DistanceConstraintDecl {
  Name name;
  AxisRef first, second;
  double millimeters;
  friend bool operator==(const DistanceConstraintDecl&, const DistanceConstraintDecl&) = default;
};

using ConstraintDecl = std::variant<AngleConstraintDecl, DistanceConstraintDecl>;

enum class BoltKind { ThroughHole, BlindHole };

inline std::string_view to_string(BoltKind k) { return k == BoltKind::ThroughHole ? "through-hole" : "blind-hole"; }

struct WeldDecl {
  Name name;
  Name first, second;
  friend bool operator==(const WeldDecl&, const WeldDecl&) = default;
};

struct BoltDecl {
  Name name;
  Name first, second;
  BoltKind kind = BoltKind::ThroughHole;
  friend bool operator==(const BoltDecl&, const BoltDecl&) = default;
};

using FeatureDecl = std::variant<WeldDecl, BoltDecl>;

/// Construction history of a CAD assembly: parts with reference axes, assembly constraints
/// between axes, and joining features.
struct AssemblyModel {
  Name name;
  std::vector<PartDecl> parts;
  std::vector<ConstraintDecl> constraints;
  std::vector<FeatureDecl> features;
  friend bool operator==(const AssemblyModel&, const AssemblyModel&) = default;
};

inline double normalize_degrees(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0) d += 360.0;
  if (d >= 360.0) d = 0.0;
  return d == 0.0 ? 0.0 : d;
}

namespace detail {

class AssemblyParser {
public:
  AssemblyParser(std::string_view src, const std::string& file) : cur_(src, file, nullptr) {}

  AssemblyModel parse() {
    AssemblyModel m;
    cur_.expect_keyword("assembly");
    m.name = vocab::design(cur_.expect_ident("assembly name").text);
    cur_.expect_punct("{");
    while (!cur_.accept_punct("}")) {
      if (cur_.accept_keyword("part")) {
        m.parts.push_back(part());
      } else if (cur_.accept_keyword("constraint")) {
        m.constraints.push_back(constraint());
      } else if (cur_.is_keyword("weld") || cur_.is_keyword("bolt")) {
        m.features.push_back(feature());
      } else {
        cur_.fail("'part', 'constraint', 'weld', 'bolt' or '}'");
      }
    }
    if (!cur_.at_end()) cur_.fail("end of input");
    return m;
  }

private:
  Name individual() { return vocab::design(cur_.expect_ident("name").text); }

  void unique(const text::Token& tok, const std::string& name) {
    if (!names_.insert(name).second) throw ParseError(tok.span, "unique name", "'" + name + "' (already used)");
  }

  PartDecl part() {
    const auto tok = cur_.peek();
    PartDecl p{individual(), {}, {}, {}};
    if (seen_parts_.count(p.name.local)) throw DuplicatePart(p.name.local);
    seen_parts_.insert(p.name.local);
    unique(tok, p.name.local);
    cur_.expect_punct("{");
    while (!cur_.accept_punct("}")) {
      if (cur_.accept_keyword("axis")) {
        Name axis = individual();
        if (std::find(p.axes.begin(), p.axes.end(), axis) != p.axes.end() || !names_.insert(axis.local).second)
          throw DuplicateAxis(p.name.local + "." + axis.local);
        p.axes.push_back(std::move(axis));
      } else if (cur_.accept_keyword("position")) {
        Name axis = individual();
        cur_.expect_keyword("on");
        std::string datum = cur_.expect_ident("datum").text;
        p.positions.push_back({std::move(axis), std::move(datum), cur_.expect_number().number});
      } else if (cur_.accept_keyword("dim")) {
        std::string dim = cur_.expect_ident("dimension name").text;
        p.dimensions.push_back({std::move(dim), cur_.expect_number().number});
      } else {
        cur_.fail("'axis', 'position', 'dim' or '}'");
      }
    }
    if (p.axes.empty()) throw ParseError(tok.span, "at least one axis in part " + p.name.local, "none");
    for (const auto& pos : p.positions)
      if (std::find(p.axes.begin(), p.axes.end(), pos.axis) == p.axes.end())
        throw UnknownPartRef(p.name.local + "." + pos.axis.local);
    return p;
  }

  AxisRef ref() {
    AxisRef r;
    r.part = individual();
    cur_.expect_punct(".");
    r.axis = individual();
    refs_.push_back(r);
    return r;
  }

  ConstraintDecl constraint() {
    const bool angle = cur_.is_keyword("angle");
    if (!angle && !cur_.is_keyword("distance")) cur_.fail("'angle' or 'distance'");
    cur_.next();
    const auto tok = cur_.peek();
    Name name = individual();
    unique(tok, name.local);
    if (angle) unique(tok, name.local + "_ang");
    cur_.expect_punct("{");
    cur_.expect_keyword("first");
    AxisRef first = ref();
    cur_.expect_punct(";");
    cur_.expect_keyword("second");
    AxisRef second = ref();
    cur_.expect_punct(";");
    cur_.expect_keyword(angle ? "degrees" : "mm");
    const auto num = cur_.expect_number();
    cur_.expect_punct(";");
    cur_.expect_punct("}");
    if (angle) return AngleConstraintDecl{std::move(name), std::move(first), std::move(second), normalize_degrees(num.number)};
    if (num.number < 0) throw ParseError(num.span, "non-negative millimeters", num.text);
    return DistanceConstraintDecl{std::move(name), std::move(first), std::move(second), num.number};
  }

  FeatureDecl feature() {
    const bool weld = cur_.next().text == "weld";
    const auto tok = cur_.peek();
    Name name = individual();
    unique(tok, name.local);
    cur_.expect_punct("{");
    cur_.expect_keyword("joins");
    Name a = individual();
    cur_.expect_punct(",");
    Name b = individual();
    cur_.expect_punct(";");
    joined_.push_back(a);
    joined_.push_back(b);
    BoltKind kind = BoltKind::ThroughHole;
    if (cur_.is_keyword("kind")) {
      if (weld) cur_.fail("'}' (kind applies to bolts only)");
      cur_.next();
      const auto first = cur_.expect_ident("hole kind");
      cur_.expect_punct("-");
      const auto second = cur_.expect_ident("hole kind");
      const std::string k = first.text + "-" + second.text;
      if (k == "through-hole")
        kind = BoltKind::ThroughHole;
      else if (k == "blind-hole")
        kind = BoltKind::BlindHole;
      else
        throw ParseError(first.span, "'through-hole' or 'blind-hole'", "'" + k + "'");
      cur_.expect_punct(";");
    }
    cur_.expect_punct("}");
    if (weld) return WeldDecl{std::move(name), std::move(a), std::move(b)};
    return BoltDecl{std::move(name), std::move(a), std::move(b), kind};
  }

public:
  void check_references(const AssemblyModel& m) const {
    std::map<Name, const PartDecl*> parts;
    for (const auto& p : m.parts) parts.emplace(p.name, &p);
    for (const auto& r : refs_) {
      auto it = parts.find(r.part);
      if (it == parts.end()) throw UnknownPartRef(r.part.local + "." + r.axis.local);
      const auto& axes = it->second->axes;
      if (std::find(axes.begin(), axes.end(), r.axis) == axes.end())
        throw UnknownPartRef(r.part.local + "." + r.axis.local);
    }
    for (const auto& j : joined_)
      if (!parts.count(j)) throw UnknownPartRef(j.local);
  }

private:
  text::Cursor cur_;
  std::set<std::string> names_;
  std::set<std::string> seen_parts_;
  std::vector<AxisRef> refs_;
  std::vector<Name> joined_;
};

}  // namespace detail

/// Parses an `.asm` assembly description. Individuals land in the `design` namespace.
inline AssemblyModel parse_assembly(std::string_view source, const std::string& file = "<input>") {
  detail::AssemblyParser p(source, file);
  AssemblyModel m = p.parse();
  p.check_references(m);
  return m;
}

/// Design ABox for `model` over the `feat` vocabulary: Line typings for every axis, then
/// parts with their axes, dimensions and positions, then reified constraints, then features.
inline std::vector<Atom> assembly_to_abox(const AssemblyModel& model) {
  using vocab::feat;
  std::vector<Atom> out;
  for (const auto& p : model.parts)
    for (const auto& a : p.axes) out.push_back(concept_atom(feat("Line"), Individual{a}));
  for (const auto& p : model.parts) {
    const Term part = Individual{p.name};
    out.push_back(concept_atom(feat("Part"), part));
    for (const auto& a : p.axes) out.push_back(role_atom(feat("hasAxis"), part, Individual{a}));
    for (const auto& d : p.dimensions) out.push_back(data_atom(feat(d.name), part, number(d.millimeters)));
    for (const auto& pos : p.positions) out.push_back(data_atom(feat("positionOnAxis"), part, number(pos.millimeters)));
  }
  for (const auto& c : model.constraints) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          const Term self = Individual{k.name};
          if constexpr (std::is_same_v<T, AngleConstraintDecl>) {
            const Term angle = Individual{vocab::design(k.name.local + "_ang")};
            out.push_back(concept_atom(feat("AngleConstraint"), self));
            out.push_back(role_atom(feat("fstLine"), self, Individual{k.first.axis}));
            out.push_back(role_atom(feat("sndLine"), self, Individual{k.second.axis}));
            out.push_back(concept_atom(feat("Angle"), angle));
            out.push_back(role_atom(feat("angle"), self, angle));
            out.push_back(data_atom(feat("valueOf"), angle, number(normalize_degrees(k.degrees))));
          } else {
            out.push_back(concept_atom(feat("DistanceConstraint"), self));
            out.push_back(role_atom(feat("fstLine"), self, Individual{k.first.axis}));
            out.push_back(role_atom(feat("sndLine"), self, Individual{k.second.axis}));
            out.push_back(data_atom(feat("distanceValue"), self, number(k.millimeters)));
          }
        },
        c);
  }
  for (const auto& f : model.features) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, WeldDecl>) {
            out.push_back(role_atom(feat("weldedTo"), Individual{k.first}, Individual{k.second}));
          } else {
            out.push_back(role_atom(feat("boltedTo"), Individual{k.first}, Individual{k.second}));
            out.push_back(data_atom(feat("boltKind"), Individual{k.name}, string_value(std::string(to_string(k.kind)))));
          }
        },
        f);
  }
  return out;
}

}  // namespace qvl
