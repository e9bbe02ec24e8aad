#include <gtest/gtest.h>

#include <fstream>

#include "cstrict/cstrict.hpp"

using namespace cstrict;

namespace {

json job_patch(const std::string& job) {
  std::ifstream in(std::string(CSTRICT_SOURCE_DIR) + "/jobs/" + job);
  return json::parse(in)["ambient_patch"];
}

}  // namespace

TEST(AmbientTest, CopiesHaveTheHomSetsOfTheirOriginals) {
  auto cs = builtin_csystem("onetype");
  auto amb = ambient_from_json(cs, job_patch("onetype_copy.json"));
  ASSERT_TRUE(validate_finite_category(probe_fragment(*amb, 3)).passed());
  // e copies 1: Hom(e, y) and Hom(y, e) have the sizes of Hom(1, y) and Hom(y, 1) in the base.
  for (const auto& y : cs->objects_up_to(3)) {
    EXPECT_EQ(amb->hom("e", y).size(), cs->hom("1", y).size()) << y;
    EXPECT_EQ(amb->hom(y, "e").size(), cs->hom(y, "1").size()) << y;
  }
  EXPECT_EQ(amb->hom("e", "e").size(), 1u);
}

TEST(AmbientTest, BadPatchesAreMalformed) {
  auto cs = builtin_csystem("unit");
  EXPECT_THROW(ambient_from_json(cs, json::parse(R"({"objects":[{"id":"2","grade":1}]})")), MalformedInput);
  EXPECT_THROW(ambient_from_json(cs, json::parse(R"({"objects":[{"id":"e","grade":1,"copy_of":"x"}]})")),
               MalformedInput);
  EXPECT_THROW(ambient_from_json(cs, json::parse(R"({"objects":"e"})")), MalformedInput);
}

TEST(GateTest, InjectivityAndFinality) {
  auto cs = builtin_csystem("unit");
  auto amb = ambient_from_json(cs, job_patch("unit_copy.json"));
  EXPECT_TRUE(check_injective_on_morphisms(carrier_inclusion(cs, amb), 3).passed());
  EXPECT_TRUE(check_final(carrier_inclusion(cs, amb), cs->pt(), 3).passed());

  auto collapse = check_injective_on_morphisms(constant_pt_functor(cs, amb), 3);
  ASSERT_EQ(collapse.verdict, Verdict::fail);
  EXPECT_NE(collapse.witness->find("both map to"), std::string::npos);

  auto dis = ambient_from_json(cs, job_patch("unit_disconnected.json"));
  auto fin = check_final(carrier_inclusion(cs, dis), cs->pt(), 3);
  ASSERT_EQ(fin.verdict, Verdict::fail);
  EXPECT_NE(fin.witness->find("object d"), std::string::npos);
}

TEST(GateTest, ImageConstructorThrowsNamedGate) {
  auto cs = builtin_csystem("unit");
  auto amb = ambient_from_json(cs, json::object());
  try {
    image_csystem(cs, constant_pt_functor(cs, amb));
    FAIL() << "constant functor accepted";
  } catch (const GateError& e) {
    EXPECT_EQ(e.gate(), "injective_on_morphisms");
  }
  auto dis = ambient_from_json(cs, job_patch("unit_disconnected.json"));
  try {
    image_csystem(cs, carrier_inclusion(cs, dis));
    FAIL() << "non-final point accepted";
  } catch (const GateError& e) {
    EXPECT_EQ(e.gate(), "final_object");
  }
  EXPECT_NO_THROW(image_csystem(cs, carrier_inclusion(cs, dis), {3, 3, false}));
}

class ImageTest : public ::testing::TestWithParam<std::string> {};

TEST_P(ImageTest, TransportedStructureIsACSystem) {
  const auto& job = GetParam();
  auto cs = builtin_csystem(job.substr(0, job.find('_')));
  auto amb = ambient_from_json(cs, job_patch(job));
  auto image = image_csystem(cs, carrier_inclusion(cs, amb));

  auto v = validate_csystem(*image, 3);
  EXPECT_TRUE(v.passed()) << v.to_json().dump(2);
  auto t = validate_transport(*image, 3);
  EXPECT_TRUE(t.passed()) << t.to_json().dump(2);
  for (const auto& name : {"length", "ft", "proj", "star", "q", "section", "subcategory"})
    EXPECT_NE(t.child(name), nullptr) << name;
  auto h = validate_homomorphism(restricted_hom(image), 3);
  EXPECT_TRUE(h.passed()) << h.to_json().dump(2);
  EXPECT_TRUE(check_factorization(*image, 3).passed());
  EXPECT_TRUE(validate_functor(inclusion_functor(image), 3).passed());

  // Hom-sets of CC' are in bijection with those of CC.
  for (const auto& a : cs->objects_up_to(3))
    for (const auto& b : cs->objects_up_to(3))
      EXPECT_EQ(image->hom(ImageCSystem::tag(a), ImageCSystem::tag(b)).size(), cs->hom(a, b).size());
}

INSTANTIATE_TEST_SUITE_P(ShippedJobs, ImageTest, ::testing::Values("unit_copy.json", "onetype_copy.json"),
                         [](const auto& info) { return info.param.substr(0, info.param.find('_')); });

TEST(TagTest, RoundTrip) {
  EXPECT_EQ(ImageCSystem::untag(ImageCSystem::tag(ObjectId("3"))), "3");
  Morphism f{"2>1:2", "2", "1"};
  EXPECT_EQ(ImageCSystem::untag(ImageCSystem::tag(f)).id, f.id);
  EXPECT_THROW(ImageCSystem::untag(ObjectId("3")), ContractViolation);
}
