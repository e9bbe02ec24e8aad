// Command-line front end. Every subcommand prints one JSON report on
// standard output and exits 0 (all checks pass), 1 (a check failed) or
// 2 (the input could not be interpreted).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cstrict/cstrict.hpp"

namespace {

using namespace cstrict;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kMalformed = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

int emit(const json& j, int code) {
  std::cout << j.dump(2) << '\n';
  return code;
}

int emit(const Report& r) {
  const int code = r.verdict == Verdict::malformed ? kMalformed : r.passed() ? kPass : kFail;
  return emit(r.to_json(), code);
}

int check_category(const std::string& file) {
  return emit(validate_finite_category(finite_category_from_json(read_json(file))));
}

int check_csystem(const std::string& name, std::size_t bound, const std::string& mutant) {
  auto cs = builtin_csystem(name);
  if (!mutant.empty()) cs = make_mutant(cs, mutant);
  auto r = validate_csystem(*cs, bound);
  r.notes.push_back("system " + cs->name() + ", bound " + std::to_string(bound));
  return emit(r);
}

int image(const std::string& name, const std::string& file, std::size_t bound, std::size_t probe_bound) {
  auto cs = builtin_csystem(name);
  auto j = read_json(file);
  auto ambient = ambient_from_json(cs, j.contains("ambient_patch") ? j["ambient_patch"] : j);
  auto M = carrier_inclusion(cs, ambient);
  Report r("image");
  r.add(check_injective_on_morphisms(M, bound));
  r.add(check_final(M, cs->pt(), probe_bound));
  if (!r.passed()) return emit(r);
  auto img = image_csystem(cs, M, {bound, probe_bound, true});
  r.add(validate_csystem(*img, bound));
  r.add(validate_transport(*img, bound));
  r.add(validate_homomorphism(restricted_hom(img), bound));
  r.add(check_factorization(*img, bound));
  return emit(r);
}

// {"source": category, "target": category,
//  "functor": {"objects": {x: y}, "morphisms": {f: g}}, "presheaf": table}
int kan(const std::string& file, std::size_t truncation) {
  auto j = read_json(file);
  for (const char* field : {"source", "target", "functor", "presheaf"})
    if (!j.contains(field)) throw MalformedInput(std::string("kan input is missing \"") + field + "\"");
  auto source = std::make_shared<const FiniteCategory>(finite_category_from_json(j["source"]));
  auto target = std::make_shared<const FiniteCategory>(finite_category_from_json(j["target"]));
  for (const auto* c : {source.get(), target.get()}) {
    auto r = validate_finite_category(*c);
    if (!r.passed()) return emit(r);
  }
  const auto& fj = j["functor"];
  std::vector<std::size_t> objs, mors;
  try {
    for (std::size_t y = 0; y < source->object_count(); ++y) {
      auto k = target->find_object(fj.at("objects").at(source->object(y).id).get<std::string>());
      if (!k) throw MalformedInput("functor sends " + source->object(y).id + " outside the target");
      objs.push_back(*k);
    }
    for (std::size_t h = 0; h < source->morphism_count(); ++h) {
      const auto& id = source->morphism(h).id;
      std::optional<std::size_t> k;
      if (fj.contains("morphisms") && fj["morphisms"].contains(id)) k = target->find_morphism(fj["morphisms"][id].get<std::string>());
      else if (source->identity_of(source->dom(h)) == h) k = target->identity_of(objs[source->dom(h)]);
      if (!k) throw MalformedInput("functor has no image for morphism " + id);
      mors.push_back(*k);
    }
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("functor: ") + e.what());
  }
  FunctorData F{source, target,
                [&](const ObjectId& x) { return target->object(objs[*source->find_object(x)]).id; },
                [&](const Morphism& f) { return target->morphism(mors[*source->find_morphism(f.id)]); }};
  auto fr = validate_functor(F, std::numeric_limits<std::size_t>::max());
  if (!fr.passed()) return emit(fr);
  auto P = presheaf_from_json(source, j["presheaf"]);
  auto pr = validate_presheaf(*P);
  if (!pr.passed()) return emit(pr);

  KanExtension ext(source, target, target, objs, mors, truncation);
  auto L = ext.extend(P);
  json out;
  out["lan"] = to_json(*L->presheaf);
  out["stabilization"] = L->certificate.to_json();
  out["verdict"] = L->certificate.passed() ? "pass" : "fail";
  return emit(out, L->certificate.passed() ? kPass : kFail);
}

int verify(const std::string& file) {
  auto result = verify_theorem(job_from_json(read_json(file)));
  return emit(result.report, result.passed ? kPass : kFail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify C-system constructions and the strictification theorem on bounded fragments"};
  app.require_subcommand(1);

  std::string file, name, mutant, ambient;
  std::size_t bound = 3, probe_bound = 3, truncation = 3;

  auto* cat = app.add_subcommand("check-category", "Check the laws of a finite category given as JSON");
  cat->add_option("FILE", file)->required();

  auto* cs = app.add_subcommand("check-csystem", "Check a built-in C-system on its fragment");
  cs->add_option("NAME", name, "unit, onetype or point")->required();
  cs->add_option("--bound", bound, "largest object length checked");
  cs->add_option("--mutant", mutant, "apply a named structure mutant first");

  auto* img = app.add_subcommand("image", "Build and check the image C-system in a patched ambient");
  img->add_option("NAME", name)->required();
  img->add_option("--ambient", ambient, "ambient patch (or job file)")->required();
  img->add_option("--bound", bound);
  img->add_option("--probe-bound", probe_bound);

  auto* kn = app.add_subcommand("kan", "Left Kan extension of a finite presheaf");
  kn->add_option("FILE", file)->required();
  kn->add_option("--truncation", truncation);

  auto* vt = app.add_subcommand("verify-theorem", "Run every gate of the strictification pipeline on a job");
  vt->add_option("JOBFILE", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kMalformed;
  }

  try {
    if (*cat) return check_category(file);
    if (*cs) return check_csystem(name, bound, mutant);
    if (*img) return image(name, ambient, bound, probe_bound);
    if (*kn) return kan(file, truncation);
    if (*vt) return verify(file);
  } catch (const MalformedInput& e) {
    return emit(json{{"verdict", "malformed"}, {"witness", e.what()}}, kMalformed);
  } catch (const GateError& e) {
    return emit(json{{"verdict", "fail"}, {"gate", e.gate()}, {"witness", e.witness()}}, kFail);
  } catch (const ContractViolation& e) {
    return emit(json{{"verdict", "fail"}, {"witness", e.what()}}, kFail);
  }
  return kMalformed;
}
