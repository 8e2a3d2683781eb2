#include <gtest/gtest.h>

#include "qvl/qvl.hpp"
#include "support/oracle.hpp"

using namespace qvl;

TEST(ParseAnnotations, CraneFixture) {
  auto doc = parse_annotations(oracle::slurp(oracle::data("crane.psa")), "crane.psa");
  EXPECT_EQ(doc.sketch, "crane-principle-solution.png");
  ASSERT_EQ(doc.regions.size(), 2u);
  EXPECT_EQ(doc.regions[0].individual, (Name{"design", "leg1"}));
  EXPECT_EQ(doc.regions[1].width, 36.0);
  auto reqs = requirements_of(doc);
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0], role_atom({"geom", "isParallelWith"}, ind({"design", "leg1"}), ind({"design", "leg2"})));
  EXPECT_EQ(doc.typings, (std::vector<Atom>{concept_atom({"feat", "Part"}, ind({"design", "leg1"}))}));
  EXPECT_TRUE(doc.warnings.empty());
}

TEST(ParseAnnotations, SketchOnly) {
  auto doc = parse_annotations("sketch \"s.png\"");
  EXPECT_TRUE(doc.requirements.empty());
  EXPECT_TRUE(requirements_of(doc).empty());
}

TEST(ParseAnnotations, RegionNeedsDeclaredIndividual) {
  EXPECT_THROW(parse_annotations("sketch \"s\" region r at (0, 0, 5, 5) denotes ghost"), UndeclaredIndividual);
}

TEST(ParseAnnotations, Errors) {
  EXPECT_THROW(parse_annotations("sketch \"s\" individual a region r at (0, 0, 0, 5) denotes a"), ParseError);
  EXPECT_THROW(parse_annotations("sketch \"s\" individual a region r at (0, 0, 5) denotes a"), ParseError);
  EXPECT_THROW(parse_annotations("sketch \"s\" require isParallelWith(?x, b)"), ParseError);
  EXPECT_THROW(parse_annotations("sketch \"s\" require lt(1, 2)"), ParseError);
  EXPECT_THROW(parse_annotations("region r at (0,0,1,1) denotes a"), ParseError);
  try {
    parse_annotations("sketch \"s\"\nindividual a\nrequire p(a,\n", "x.psa");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().file, "x.psa");
    EXPECT_EQ(e.span().line, 3u);
  }
}

TEST(ParseAnnotations, UndeclaredRequirementIndividualWarns) {
  auto doc = parse_annotations("sketch \"s\" individual leg1 require isParallelWith(leg1, leg2)");
  ASSERT_EQ(doc.warnings.size(), 1u);
  EXPECT_NE(doc.warnings[0].find("design:leg2"), std::string::npos);
  EXPECT_EQ(doc.requirements.size(), 1u);
}

TEST(RequirementsOf, DuplicatesCollapseInOrder) {
  auto doc = parse_annotations(
      "sketch \"s\" individual a individual b require p(a, b) require C(a) require p(a, b) require feat:q(b, 3)");
  auto reqs = requirements_of(doc);
  ASSERT_EQ(reqs.size(), 3u);
  EXPECT_EQ(display(reqs[0]), "p(a,b)");
  EXPECT_EQ(display(reqs[1]), "C(a)");
  EXPECT_EQ(to_string(reqs[2]), "feat:q(design:b,3)");
}

TEST(RequirementsOf, StableAcrossParses) {
  const std::string text = oracle::slurp(oracle::data("winch.psa"));
  auto a = requirements_of(parse_annotations(text));
  auto b = requirements_of(parse_annotations(text));
  EXPECT_EQ(a, b);
  auto doc = parse_annotations(text);
  doc.requirements = a;
  EXPECT_EQ(requirements_of(doc), a);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(to_string(a[0]), "rules:closerToMotorThan(design:locatingBearing,design:nonLocatingBearing)");
  EXPECT_EQ(to_string(a[1]), "winch:WithinHeightLimit(design:frame)");
  EXPECT_EQ(to_string(a[2]), "feat:weldedTo(design:frame,design:locatingBearing)");
}
