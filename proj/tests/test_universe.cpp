#include <gtest/gtest.h>

#include <fstream>

#include "cstrict/cstrict.hpp"

using namespace cstrict;

namespace {

StrictifyJob job(const std::string& name) {
  std::ifstream in(std::string(CSTRICT_SOURCE_DIR) + "/jobs/" + name);
  return job_from_json(json::parse(in));
}

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST(StandardUniverseTest, UnitHasOneTypeAndOneTermEverywhere) {
  auto p = make_pipeline(job("unit_copy.json"));
  const auto& u = p->generated->universe();
  for (std::size_t x = 0; x < u.site->object_count(); ++x) {
    EXPECT_EQ(u.U->size(x), 1u);
    EXPECT_EQ(u.Ut->size(x), 1u);
  }
}

TEST(StandardUniverseTest, OneTypeTermsAreVariables) {
  auto p = make_pipeline(job("onetype_copy.json"));
  const auto& u = p->generated->universe();
  const auto& base = *p->cs;
  for (std::size_t x = 0; x < u.site->object_count(); ++x) {
    const auto n = p->image->length(u.site->object(x).id);
    // Counted in the base system: extensions of n by one type, and sections of their projections.
    std::size_t types = 0, terms = 0;
    for (const auto& y : base.objects_up_to(n + 1))
      if (base.length(y) == n + 1 && base.ft(y) == std::to_string(n)) {
        ++types;
        for (const auto& s : base.hom(std::to_string(n), y)) terms += base.compose(s, base.proj(y)) == base.identity(std::to_string(n));
      }
    EXPECT_EQ(u.U->size(x), types);
    EXPECT_EQ(u.Ut->size(x), terms) << "at " << u.site->object(x).id;
  }
  EXPECT_EQ(u.Ut->size(*u.site->find_object("M:2")), 2u);
}

TEST(StandardUniverseTest, ProjectionIsNatural) {
  for (const auto& name : {"unit_copy.json", "onetype_copy.json"}) {
    auto p = make_pipeline(job(name));
    const auto& u = p->generated->universe();
    EXPECT_TRUE(validate_presheaf(*u.U).passed());
    EXPECT_TRUE(validate_presheaf(*u.Ut).passed());
    EXPECT_TRUE(validate_naturality(u.p, 100).passed()) << name;
  }
}

TEST(GeneratedTest, ObjectsAndHomSetsMatchTheBase) {
  for (const auto& name : {"unit_copy.json", "onetype_copy.json"}) {
    auto p = make_pipeline(job(name));
    const auto& g = *p->generated;
    // One type per context: one generated object per length.
    auto objs = g.objects_up_to(3);
    ASSERT_EQ(objs.size(), 4u) << name;
    const bool unit = p->job.csystem == "unit";
    for (const auto& A : objs)
      for (const auto& B : objs) {
        const std::size_t expected = unit ? 1 : power(A->length, B->length);
        EXPECT_EQ(g.hom(A, B).size(), expected) << A->label << " -> " << B->label;
      }
  }
}

TEST(GeneratedTest, GeneratedSystemOverUnitIsACSystem) {
  auto p = make_pipeline(job("unit_copy.json"));
  auto r = validate_csystem(*p->generated, 3);
  EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
}

TEST(GeneratedTest, ExtendRequiresAClassifyingMap) {
  auto p = make_pipeline(job("unit_copy.json"));
  const auto& g = *p->generated;
  auto A = g.pt();
  EXPECT_EQ(g.length(A), 0u);
  EXPECT_EQ(g.ft(A), A);
  auto one = g.objects_up_to(1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(g.ft(one[1]), A);
  EXPECT_EQ(g.compose(g.proj(one[1]), g.identity(A)), g.proj(one[1]));
}

class PsiTest : public ::testing::TestWithParam<std::string> {};

TEST_P(PsiTest, YonedaEmbeddingFactorsThroughTheGeneratedSystem) {
  auto p = make_pipeline(job(GetParam()));
  for (const auto& x : p->image->objects_up_to(3)) {
    const auto& e = p->psi->at(x);
    EXPECT_TRUE(e.report.passed()) << x << ": " << e.report.to_json().dump();
    EXPECT_EQ(compose(e.psi, e.psi_inv), identity_morphism(e.psi.source));
    EXPECT_EQ(e.image->length, p->image->length(x));
  }
  EXPECT_TRUE(validate_homomorphism(p->psi->hom(), 3).passed());
  EXPECT_TRUE(p->psi->full_faithful(3).passed());
}

TEST_P(PsiTest, LanHomIsAHomomorphismWithIsoComparisons) {
  auto p = make_pipeline(job(GetParam()));
  for (const auto& A : p->generated->objects_up_to(3)) {
    const auto& e = p->H->at(A);
    EXPECT_TRUE(e.report.passed()) << A->label << ": " << e.report.to_json().dump();
    EXPECT_EQ(compose(e.psi_inv, e.psi), identity_morphism(e.lan->presheaf));
  }
  auto r = validate_homomorphism(p->H->hom(), 3);
  EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
}

TEST_P(PsiTest, LanIsAUniverseMorphism) {
  auto p = make_pipeline(job(GetParam()));
  auto r = validate_universe_morphism(*p->kan, p->generated->universe(), p->lan_generated->universe(),
                                      p->generated->objects_up_to(3));
  EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
  for (const auto& name : {"terminal", "canonical_squares", "universe_compatibility"})
    EXPECT_NE(r.child(name), nullptr) << name;
}

INSTANTIATE_TEST_SUITE_P(ShippedJobs, PsiTest, ::testing::Values("unit_copy.json", "onetype_copy.json"),
                         [](const auto& info) { return info.param.substr(0, info.param.find('_')); });

TEST(UniverseMorphismTest, DisconnectedPatchFailsAtTerminal) {
  auto p = make_pipeline(job("unit_disconnected.json"), false);
  auto r = validate_universe_morphism(*p->kan, p->generated->universe(), p->lan_generated->universe(),
                                      p->generated->objects_up_to(3));
  ASSERT_EQ(r.verdict, Verdict::fail);
  EXPECT_FALSE(r.child("terminal")->passed());
  EXPECT_NE(r.witness->find("object d"), std::string::npos) << *r.witness;
}

TEST(UniverseMorphismTest, WrongTargetUniverseIsRejected) {
  // Offering the identity on Lan Ut as the target universe breaks compatibility.
  auto p = make_pipeline(job("onetype_copy.json"));
  const auto& target = p->lan_generated->universe();
  UniverseCategory wrong{target.site, target.Ut, target.Ut, identity_morphism(target.Ut), target.terminal};
  auto r = validate_universe_morphism(*p->kan, p->generated->universe(), wrong, p->generated->objects_up_to(2));
  EXPECT_FALSE(r.child("universe_compatibility")->passed());
}
