#include <gtest/gtest.h>

#include <fstream>

#include "cstrict/cstrict.hpp"

using namespace cstrict;

namespace {

json load(const std::string& rel) {
  std::ifstream in(std::string(CSTRICT_SOURCE_DIR) + "/" + rel);
  return json::parse(in);
}

StrictifyJob job(const std::string& name) { return job_from_json(load("jobs/" + name)); }

const json& gate(const json& report, const std::string& name) {
  for (const auto& g : report["gates"])
    if (g["name"] == name) return g;
  throw std::runtime_error("no gate " + name);
}

std::map<ObjectId, TauComponents> all_taus(const Pipeline& p) {
  std::map<ObjectId, TauComponents> taus;
  for (const auto& x : p.cs->objects_up_to(p.job.bound)) taus.emplace(x, tau_components(p, x));
  return taus;
}

// Sum over a, b <= L of |Hom(a, b)|: 1 in UNIT, b-tuples over [a] in onetype.
std::size_t square_count(const std::string& cs, std::size_t L) {
  std::size_t n = 0;
  for (std::size_t a = 0; a <= L; ++a)
    for (std::size_t b = 0; b <= L; ++b) {
      std::size_t h = 1;
      if (cs == "onetype")
        for (std::size_t k = 0; k < b; ++k) h *= a;
      n += h;
    }
  return n;
}

}  // namespace

TEST(JobTest, ParsesDefaultsAndRejectsBadJobs) {
  auto j = job_from_json(json::parse(R"({"csystem":"unit","bound":2})"));
  EXPECT_EQ(j.probe_bound, 2u);
  EXPECT_EQ(j.truncation, 2u);
  EXPECT_EQ(j.functor, "inclusion");
  EXPECT_THROW(job_from_json(load("tests/fixtures/job_unknown_field.json")), MalformedInput);
  EXPECT_THROW(job_from_json(load("tests/fixtures/job_bad_bounds.json")), MalformedInput);
  EXPECT_THROW(job_from_json(json::parse(R"({"bound":2})")), MalformedInput);
  EXPECT_THROW(job_from_json(json::parse(R"({"csystem":"unit","bound":0})")), MalformedInput);
  EXPECT_THROW(job_from_json(json::parse(R"({"csystem":"unit","bound":2,"functor":"swap"})")), MalformedInput);
  EXPECT_THROW(job_from_json(json::parse(R"({"csystem":"unit","bound":"two"})")), MalformedInput);
  EXPECT_THROW(verify_theorem(job_from_json(json::parse(R"({"csystem":"nat","bound":1})"))), MalformedInput);
}

class TheoremTest : public ::testing::TestWithParam<std::string> {};

TEST_P(TheoremTest, EveryGatePasses) {
  auto jb = job(GetParam());
  auto out = verify_theorem(jb);
  EXPECT_TRUE(out.passed) << out.report.dump(2);
  for (const auto& g : out.report["gates"]) EXPECT_EQ(g["verdict"], "pass") << g.dump();
  EXPECT_EQ(out.report["theorem"]["objects_checked"], jb.csystem == "point" ? 1u : jb.bound + 1);
  if (jb.csystem != "point") {
    EXPECT_EQ(out.report["theorem"]["squares_checked"], square_count(jb.csystem, jb.bound));
  }
  EXPECT_GT(gate(out.report, "stabilization")["checked"].get<std::size_t>(), 0u);
}

INSTANTIATE_TEST_SUITE_P(PassingJobs, TheoremTest, ::testing::Values("unit_copy.json", "onetype_copy.json", "point.json"),
                         [](const auto& info) { return info.param.substr(0, info.param.find('.')); });

TEST(DiagnosisTest, DisconnectedPatchIsDiagnosed) {
  auto out = verify_theorem(job("unit_disconnected.json"));
  EXPECT_FALSE(out.passed);
  const auto& fin = gate(out.report, "final_object");
  EXPECT_EQ(fin["verdict"], "fail");
  EXPECT_NE(fin["witness"].get<std::string>().find("object d"), std::string::npos);
  const auto& um = gate(out.report, "universe_morphism");
  EXPECT_EQ(um["verdict"], "fail");
  EXPECT_NE(um["witness"].get<std::string>().find("object d"), std::string::npos);
  EXPECT_EQ(gate(out.report, "final_iso")["verdict"], "skipped");
  EXPECT_EQ(gate(out.report, "csystem")["verdict"], "pass");
}

TEST(DiagnosisTest, ConstantFunctorStopsAtInjectivity) {
  auto out = verify_theorem(job_from_json(load("tests/fixtures/job_constant.json")));
  EXPECT_FALSE(out.passed);
  EXPECT_EQ(gate(out.report, "injective_on_morphisms")["verdict"], "fail");
  EXPECT_EQ(gate(out.report, "strictify")["verdict"], "skipped");
  EXPECT_EQ(out.report["theorem"]["verdict"], "fail");
}

TEST(DiagnosisTest, ReportIsDeterministic) {
  auto a = verify_theorem(job("unit_copy.json")).report.dump();
  auto b = verify_theorem(job("unit_copy.json")).report.dump();
  EXPECT_EQ(a, b);
}

TEST(StrictifyTest, ProducesAHomomorphismOrNamesTheGate) {
  auto res = strictify(job("unit_copy.json"));
  EXPECT_TRUE(res.report.passed()) << res.report.to_json().dump(2);
  ASSERT_NE(res.pipeline, nullptr);
  auto mp = res.pipeline->m_prime();
  // M' sends lengths to lengths.
  for (const auto& x : res.pipeline->cs->objects_up_to(3)) EXPECT_EQ(mp.on_object(x)->length, res.pipeline->cs->length(x));
  try {
    strictify(job("unit_disconnected.json"));
    FAIL() << "disconnected job strictified";
  } catch (const GateError& e) {
    EXPECT_EQ(e.gate(), "final_object");
  }
}

TEST(IsoChainTest, TauFamiliesAreNaturalIsomorphisms) {
  auto p = make_pipeline(job("onetype_copy.json"));
  auto taus = all_taus(*p);
  auto r = tau_isos(*p, taus);
  EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
  ASSERT_NE(r.child("tau''_naturality"), nullptr);
  ASSERT_NE(r.child("rho_naturality"), nullptr);
}

TEST(IsoChainTest, TamperedSigmaIsCaught) {
  auto p = make_pipeline(job("onetype_copy.json"));
  auto taus = all_taus(*p);
  EXPECT_TRUE(final_iso(*p, taus).report.passed());
  // Swap two values of sigma_2 at the probe object 2; the component stays bijective.
  const auto c = *p->kan->probe_site()->find_object("2");
  auto tampered = all_taus(*p);
  auto res = final_iso(*p, tampered, [&](const ObjectId& x, PresheafMorphism& s) {
    if (x == "2" && s.components[c].size() >= 2) std::swap(s.components[c][0], s.components[c][1]);
  });
  EXPECT_TRUE(res.report.child("sigma_bijective")->passed());
  const auto* nat = res.report.child("sigma_naturality");
  ASSERT_FALSE(nat->passed());
  EXPECT_NE(nat->witness->find("fails at probe object"), std::string::npos) << *nat->witness;
}

TEST(IsoChainTest, CollapsedSigmaIsNotBijective) {
  auto p = make_pipeline(job("onetype_copy.json"));
  auto taus = all_taus(*p);
  const auto c = *p->kan->probe_site()->find_object("3");
  auto res = final_iso(*p, taus, [&](const ObjectId& x, PresheafMorphism& s) {
    if (x == "3")
      for (auto& v : s.components[c]) v = 0;
  });
  EXPECT_FALSE(res.report.child("sigma_bijective")->passed());
}
