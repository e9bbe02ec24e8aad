#include <gtest/gtest.h>

#include "cstrict/cstrict.hpp"

using namespace cstrict;

namespace {

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

Site onetype_site(std::size_t bound) {
  return std::make_shared<const FiniteCategory>(probe_fragment(OneTypeCSystem{}, bound));
}

std::size_t obj(const Site& s, const std::string& id) { return *s->find_object(id); }

}  // namespace

TEST(PresheafTest, YonedaSizesAreHomSetSizes) {
  auto s = onetype_site(3);
  for (std::size_t x = 0; x <= 3; ++x) {
    auto Y = yoneda(s, obj(s, std::to_string(x)));
    EXPECT_TRUE(validate_presheaf(*Y).passed());
    for (std::size_t c = 0; c <= 3; ++c) EXPECT_EQ(Y->size(obj(s, std::to_string(c))), power(c, x)) << x << "," << c;
  }
}

TEST(PresheafTest, TerminalHasOneElementEverywhere) {
  auto s = onetype_site(2);
  auto T = terminal_presheaf(s);
  for (std::size_t c = 0; c < s->object_count(); ++c) EXPECT_EQ(T->size(c), 1u);
  EXPECT_TRUE(validate_presheaf(*T).passed());
}

TEST(PresheafTest, YonedaLemmaCountsAndRoundTrip) {
  auto s = onetype_site(2);
  for (std::size_t x = 0; x <= 2; ++x)
    for (std::size_t z = 0; z <= 2; ++z) {
      auto Yx = yoneda(s, obj(s, std::to_string(x)));
      auto Yz = yoneda(s, obj(s, std::to_string(z)));
      auto all = enumerate_morphisms(Yx, Yz);
      EXPECT_EQ(all.size(), power(x, z)) << x << "->" << z;  // |Yz(x)| = |Hom(x, z)|
      const auto xi = obj(s, std::to_string(x));
      for (std::size_t a = 0; a < Yz->size(xi); ++a) {
        auto m = yoneda_from_element(Yx, Yz, xi, a);
        EXPECT_TRUE(validate_naturality(m, 10).passed());
        EXPECT_EQ(yoneda_to_element(m, xi), a);
      }
    }
}

TEST(PresheafTest, YonedaMorphismIsPostComposition) {
  auto s = onetype_site(2);
  auto Y1 = yoneda(s, obj(s, "1"));
  auto Y2 = yoneda(s, obj(s, "2"));
  for (auto f : s->hom_indices(obj(s, "1"), obj(s, "2"))) {
    auto m = yoneda_morphism(Y1, Y2, f);
    for (std::size_t c = 0; c < s->object_count(); ++c)
      for (std::size_t k = 0; k < Y1->size(c); ++k) {
        auto g = *s->find_morphism(Y1->at(c)[k].text());
        auto expected = s->morphism(s->composite(g, f)).id;
        EXPECT_EQ(Y2->at(c)[m.apply(c, k)].text(), expected);
      }
  }
}

TEST(PresheafTest, CanonicalPullbackSizesMatchPairCount) {
  auto s = onetype_site(2);
  auto Y1 = yoneda(s, obj(s, "1"));
  auto Y2 = yoneda(s, obj(s, "2"));
  for (auto f : s->hom_indices(obj(s, "1"), obj(s, "2"))) {
    auto fm = yoneda_morphism(Y1, Y2, f);
    auto pm = identity_morphism(Y2);
    auto pb = canonical_pullback(fm, pm);
    for (std::size_t c = 0; c < s->object_count(); ++c) {
      std::size_t pairs = 0;
      for (std::size_t a = 0; a < Y1->size(c); ++a)
        for (std::size_t b = 0; b < Y2->size(c); ++b) pairs += fm.apply(c, a) == pm.apply(c, b);
      EXPECT_EQ(pb.object->size(c), pairs);
    }
    EXPECT_TRUE(validate_presheaf(*pb.object).passed());
    EXPECT_TRUE(validate_naturality(pb.first, 10).passed());
    EXPECT_TRUE(validate_naturality(pb.second, 10).passed());
  }
  // Over the terminal object the pullback is the product.
  auto T = terminal_presheaf(s);
  auto pb = canonical_pullback(to_terminal(Y1, T), to_terminal(Y2, T));
  for (std::size_t c = 0; c <= 2; ++c) EXPECT_EQ(pb.object->size(obj(s, std::to_string(c))), c * c * c);
}

TEST(PresheafTest, PullbackPairingIsTheUniqueFactorization) {
  auto s = onetype_site(2);
  auto Y1 = yoneda(s, obj(s, "1"));
  auto Y2 = yoneda(s, obj(s, "2"));
  auto T = terminal_presheaf(s);
  auto pb = canonical_pullback(to_terminal(Y1, T), to_terminal(Y2, T));
  auto m1 = identity_morphism(Y1);
  auto m2 = yoneda_from_element(Y1, Y2, obj(s, "1"), 0);
  auto u = pullback_pairing(pb, m1, m2);
  EXPECT_EQ(compose(u, pb.first), m1);
  EXPECT_EQ(compose(u, pb.second), m2);
}

TEST(PresheafTest, CorruptedComponentBreaksNaturality) {
  auto s = onetype_site(2);
  auto Y2 = yoneda(s, obj(s, "2"));
  auto m = identity_morphism(Y2);
  const auto c = obj(s, "2");
  ASSERT_GE(Y2->size(c), 2u);
  std::swap(m.components[c][0], m.components[c][1]);
  auto r = validate_naturality(m, 10);
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_TRUE(r.witness.has_value());
}

TEST(PresheafTest, IsoCheck) {
  auto s = onetype_site(2);
  auto Y2 = yoneda(s, obj(s, "2"));
  auto id = pointwise_iso_check(identity_morphism(Y2), 10);
  ASSERT_TRUE(id.iso.has_value());
  EXPECT_EQ(compose(id.iso->forward, id.iso->inverse), identity_morphism(Y2));
  auto bang = pointwise_iso_check(to_terminal(Y2, terminal_presheaf(s)), 10);
  EXPECT_FALSE(bang.report.passed());
  EXPECT_FALSE(bang.iso.has_value());
  EXPECT_THROW(invert(to_terminal(Y2, terminal_presheaf(s)), "bang"), ContractViolation);
}

TEST(PresheafTest, JsonRoundTripAndMalformedInput) {
  auto s = onetype_site(1);
  auto Y1 = yoneda(s, obj(s, "1"));
  auto back = presheaf_from_json(s, to_json(*Y1));
  EXPECT_EQ(to_json(*back), to_json(*Y1));
  json missing = to_json(*Y1);
  missing.erase("1");
  EXPECT_THROW(presheaf_from_json(s, missing), MalformedInput);
  json extra = to_json(*Y1);
  extra["nowhere"] = json::array();
  EXPECT_THROW(presheaf_from_json(s, extra), MalformedInput);
}

TEST(PresheafTest, EnumerationIntoTerminalAndFromEmpty) {
  auto s = onetype_site(2);
  auto T = terminal_presheaf(s);
  auto Y2 = yoneda(s, obj(s, "2"));
  EXPECT_EQ(enumerate_morphisms(Y2, T).size(), 1u);
  // Global elements of Y2 are |Hom(0, 2)| = 0^2 = 0.
  EXPECT_EQ(enumerate_morphisms(T, Y2).size(), 0u);
  auto Y0 = yoneda(s, obj(s, "0"));
  EXPECT_EQ(enumerate_morphisms(T, Y0).size(), 1u);
}
