// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cstrict/cstrict.hpp"
#include "oracles.hpp"

using namespace cstrict;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json load(const std::string& rel) {
  std::ifstream in(std::string(CSTRICT_SOURCE_DIR) + "/" + rel);
  return json::parse(in);
}

StrictifyJob job(const std::string& name) { return job_from_json(load("jobs/" + name)); }

std::size_t total_checked(const Report& r) {
  std::size_t n = r.checked;
  for (const auto& c : r.children) n += total_checked(c);
  return n;
}

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail.str("");
      detail << what;
    }
  }
};

Outcome criterion_1() {
  Outcome o;
  for (const auto& name : {"unit", "onetype"}) {
    auto t0 = Clock::now();
    auto r = validate_csystem(*builtin_csystem(name), 4);
    const double dt = seconds_since(t0);
    o.require(r.passed(), std::string(name) + " fails at L=4: " + r.witness.value_or(""));
    o.require(dt < 30.0, std::string(name) + " took " + std::to_string(dt) + " s");
    o.detail << name << " L=4 " << total_checked(r) << " checks in " << dt << " s; ";
  }
  std::size_t caught = 0, total = 0;
  for (const auto& base : {"unit", "onetype"}) {
    std::vector<std::string> names = mutation_names();
    if (std::string(base) == "onetype") names.push_back("section_constant");
    for (const auto& m : names) {
      ++total;
      auto r = validate_csystem(*make_mutant(builtin_csystem(base), m), 4);
      if (r.verdict == Verdict::fail && r.witness && !r.witness->empty()) ++caught;
      else o.require(false, std::string(base) + "/" + m + " was not caught");
    }
  }
  o.require(caught >= 10, "only " + std::to_string(caught) + " mutants caught");
  o.detail << caught << "/" << total << " mutants fail with a witness";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  for (const auto& name : {"unit_copy.json", "onetype_copy.json"}) {
    auto jb = job(name);
    auto cs = builtin_csystem(jb.csystem);
    auto image = image_csystem(cs, carrier_inclusion(cs, ambient_from_json(cs, jb.ambient_patch)));
    auto v = validate_csystem(*image, 3);
    auto t = validate_transport(*image, 3);
    auto h = validate_homomorphism(restricted_hom(image), 3);
    o.require(v.passed(), std::string(name) + ": image C-system: " + v.witness.value_or(""));
    o.require(t.passed(), std::string(name) + ": transport: " + t.witness.value_or(""));
    o.require(h.passed(), std::string(name) + ": restricted hom: " + h.witness.value_or(""));
    o.detail << jb.csystem << ": " << total_checked(t) << " transported equations; ";
  }
  return o;
}

Outcome criterion_3() {
  Outcome o;
  std::mt19937 rng(20261018);
  std::size_t cells = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    auto d = oracle::random_diagram(rng, n, rng() % 13);
    auto p = set_colimit(d);
    std::set<std::set<std::pair<std::size_t, std::size_t>>> got;
    for (const auto& cls : p.classes) {
      got.insert({cls.begin(), cls.end()});
      cells += cls.size();
    }
    o.require(got == oracle::zigzag_components(d), "diagram " + std::to_string(trial) + " differs from the zigzag oracle");
  }
  o.detail << "100 diagrams, " << cells << " cells, partitions equal";
  return o;
}

Outcome criterion_4() {
  Outcome o;
  for (const auto& name : {"unit_copy.json", "onetype_copy.json"}) {
    auto p = make_pipeline(job(name));
    const auto& kan = *p->kan;
    const auto& S = *kan.source_site();
    std::size_t n = 0;
    for (std::size_t x = 0; x < S.object_count(); ++x) {
      if (S.object(x).grade > 3) continue;
      auto r = rho_representable(kan, x);
      o.require(r.report.passed(), std::string(name) + ": rho " + S.object(x).id + ": " + r.report.witness.value_or(""));
      ++n;
    }
    o.require(kan.probe_bound() <= 3, std::string(name) + ": probe bound above 3");
    o.detail << p->job.csystem << ": " << n << " rho components; ";
  }
  auto j = load("tests/fixtures/kan_toy.json");
  auto S = std::make_shared<const FiniteCategory>(finite_category_from_json(j["source"]));
  auto C = std::make_shared<const FiniteCategory>(finite_category_from_json(j["target"]));
  KanExtension toy(S, C, C, {*C->find_object("0")}, {*C->find_morphism("i0")}, 0);
  auto P = presheaf_from_json(S, j["presheaf"]);
  auto L = toy.extend(P);
  o.require(L->presheaf->size(*C->find_object("0")) == P->size(0), "toy: Lan(0) != S");
  o.require(L->presheaf->size(*C->find_object("1")) == 0, "toy: Lan(1) is not empty");
  o.detail << "toy Lan(0)=" << L->presheaf->size(0) << " elements, Lan(1)=" << L->presheaf->size(1);
  return o;
}

Outcome criterion_5() {
  Outcome o;
  for (const auto& name : {"unit_copy.json", "onetype_copy.json", "point.json"}) {
    auto p = make_pipeline(job(name));
    auto r = validate_universe_morphism(*p->kan, p->generated->universe(), p->lan_generated->universe(),
                                        p->generated->objects_up_to(p->job.bound));
    o.require(r.passed(), std::string(name) + ": " + r.witness.value_or(""));
  }
  auto p = make_pipeline(job("unit_disconnected.json"), false);
  auto r = validate_universe_morphism(*p->kan, p->generated->universe(), p->lan_generated->universe(),
                                      p->generated->objects_up_to(p->job.bound));
  o.require(r.verdict == Verdict::fail && r.witness, "disconnected job was not rejected");
  if (r.witness) o.require(r.witness->find("object d") != std::string::npos, "witness does not name d: " + *r.witness);
  o.detail << "3 passing jobs; disconnected: " << r.witness.value_or("");
  return o;
}

json theorem_report;
double theorem_seconds = 0;

Outcome criterion_6() {
  Outcome o;
  auto jb = job("unit_copy.json");
  o.require(jb.bound == 3 && jb.truncation == 3, "job bounds are not L=3, T=3");
  auto t0 = Clock::now();
  auto first = verify_theorem(jb);
  theorem_seconds = seconds_since(t0);
  auto second = verify_theorem(jb);
  theorem_report = first.report;
  for (const auto& g : first.report["gates"])
    o.require(g["verdict"] == "pass", "gate " + g["name"].get<std::string>() + ": " + g.value("witness", ""));
  for (const auto& g : first.report["gates"])
    if (g["name"] == "final_iso")
      for (const auto& c : g["checks"]) o.require(c["verdict"] == "pass", c["name"].get<std::string>() + " failed");
  o.require(theorem_seconds < 120.0, "took " + std::to_string(theorem_seconds) + " s");
  o.require(first.report.dump() == second.report.dump(), "reports differ between runs");
  o.detail << first.report["theorem"]["objects_checked"] << " sigma components, "
           << first.report["theorem"]["squares_checked"] << " squares, " << theorem_seconds
           << " s, byte-identical";
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const json* stab = nullptr;
  for (const auto& g : theorem_report["gates"])
    if (g["name"] == "stabilization") stab = &g;
  o.require(stab != nullptr, "no stabilization gate");
  if (!stab) return o;
  o.require((*stab)["verdict"] == "pass", "uncertified Lan value: " + stab->value("witness", ""));
  const auto n = stab->value("checked", std::size_t{0});
  o.require(n > 0, "no Lan values recorded");
  o.detail << n << " Lan values certified";
  return o;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* what;
    Outcome (*run)();
  };
  const Entry entries[] = {
      {1, "builtin C-systems validate at L=4; mutants fail with witnesses", criterion_1},
      {2, "image C-system, transported equations and restricted homomorphism", criterion_2},
      {3, "set_colimit matches the zigzag oracle on 100 random diagrams", criterion_3},
      {4, "rho is a certified natural iso on shipped images; toy extension", criterion_4},
      {5, "preservation report passes on passing jobs and rejects the disconnected one", criterion_5},
      {6, "verify_theorem on the UNIT job: gates, sigma, squares, time, determinism", criterion_6},
      {7, "every Lan value of criterion 6 carries a stabilization certificate", criterion_7},
  };
  int failed = 0;
  for (const auto& e : entries) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.ok = false;
      o.detail.str(std::string("exception: ") + ex.what());
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << e.id << " (" << seconds_since(t0) << " s): " << e.what
              << " | " << o.detail.str() << std::endl;
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}
