#pragma once

// The end-to-end pipeline: job files, the lifted homomorphism
// M' = M| ; H' ; H, the isomorphism chain tau, tau', tau'', rho and sigma,
// and the theorem verifier that runs every gate and reports verdicts.

#include "cstrict/image.hpp"
#include "cstrict/universe.hpp"

namespace cstrict {

struct StrictifyJob {
  std::string csystem = "unit";
  std::size_t bound = 3;
  std::size_t probe_bound = 3;
  std::size_t truncation = 3;
  json ambient_patch = json::object();
  std::string functor = "inclusion";  // or "constant_pt"
};

inline StrictifyJob job_from_json(const json& j) {
  if (!j.is_object()) throw MalformedInput("job must be a JSON object");
  static const std::set<std::string> known = {"csystem", "bound",   "probe_bound", "truncation",
                                              "ambient_patch", "functor", "description"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw MalformedInput("job has unknown field \"" + k + "\"");
  StrictifyJob job;
  try {
    job.csystem = j.at("csystem").get<std::string>();
    job.bound = j.at("bound").get<std::size_t>();
    job.probe_bound = j.value("probe_bound", job.bound);
    job.truncation = j.value("truncation", std::max(job.bound, job.probe_bound));
    job.ambient_patch = j.value("ambient_patch", json::object());
    job.functor = j.value("functor", std::string("inclusion"));
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("job: ") + e.what());
  }
  if (job.bound == 0 || job.probe_bound == 0 || job.truncation == 0) throw MalformedInput("job bounds must be positive");
  if (job.bound > job.truncation) throw MalformedInput("job bound exceeds the truncation");
  if (job.probe_bound > job.truncation) throw MalformedInput("job probe_bound exceeds the truncation");
  if (job.functor != "inclusion" && job.functor != "constant_pt")
    throw MalformedInput("job functor must be \"inclusion\" or \"constant_pt\"");
  return job;
}

/// Every stage of the construction, built lazily by the verifier.
struct Pipeline {
  StrictifyJob job;
  CSystemPtr cs;
  AmbientPtr ambient;
  FunctorData M;
  ImagePtr image;
  Site source_site;  // CC' fragment at truncation + 1
  std::unique_ptr<KanExtension> kan;
  std::unique_ptr<GeneratedCSystem> generated;      // CC(PreShv(CC'), d)
  std::unique_ptr<GeneratedCSystem> lan_generated;  // CC(PreShv(C), Lan d)
  std::unique_ptr<PsiChain> psi;
  std::unique_ptr<LanHom> H;

  std::size_t site_object(const ObjectId& x) const {
    auto k = source_site->find_object(x);
    if (!k) throw ContractViolation("object " + x + " is not on the site");
    return *k;
  }
  std::size_t site_morphism(const Morphism& f) const {
    auto k = source_site->find_morphism(f.id);
    if (!k) throw ContractViolation("morphism " + f.id + " is not on the site");
    return *k;
  }

  /// M' = M| ; H' ; H.
  CSystemHom<CSystem, GeneratedCSystem> m_prime() const {
    return {cs.get(), lan_generated.get(),
            [this](const ObjectId& x) { return H->at(psi->at(ImageCSystem::tag(x)).image).image; },
            [this](const Morphism& f) { return H->on_morphism(psi->on_morphism(ImageCSystem::tag(f))); }};
  }
};

/// Builds C, M and, when the gates allow, CC' and both generated systems.
/// require_final = false keeps going past a non-final M(pt) so preservation
/// can be diagnosed.
inline std::unique_ptr<Pipeline> make_pipeline(const StrictifyJob& job, bool require_final = true) {
  auto p = std::make_unique<Pipeline>();
  p->job = job;
  p->cs = builtin_csystem(job.csystem);
  p->ambient = ambient_from_json(p->cs, job.ambient_patch);
  p->M = job.functor == "constant_pt" ? constant_pt_functor(p->cs, p->ambient) : carrier_inclusion(p->cs, p->ambient);
  p->image = image_csystem(p->cs, p->M, {job.bound, job.probe_bound, require_final});
  p->source_site = std::make_shared<const FiniteCategory>(probe_fragment(*p->image, job.truncation + 1));
  p->kan = std::unique_ptr<KanExtension>(
      new KanExtension(KanExtension::from_functor(inclusion_functor(p->image), p->source_site, job.probe_bound, job.truncation)));
  p->generated = std::make_unique<GeneratedCSystem>(standard_universe(*p->image, p->source_site));
  p->lan_generated = std::make_unique<GeneratedCSystem>(lan_universe(*p->kan, p->generated->universe()));
  p->psi = std::make_unique<PsiChain>(*p->image, *p->generated);
  p->H = std::make_unique<LanHom>(*p->kan, *p->generated, *p->lan_generated);
  return p;
}

/// The target C-system and M', with the homomorphism check at the job bound.
/// Throws GateError naming the first failed precondition.
struct StrictifyResult {
  std::unique_ptr<Pipeline> pipeline;
  Report report{"strictify"};
};

inline StrictifyResult strictify(const StrictifyJob& job) {
  StrictifyResult out;
  out.pipeline = make_pipeline(job);
  auto& p = *out.pipeline;
  auto um = validate_universe_morphism(*p.kan, p.generated->universe(), p.lan_generated->universe(),
                                       p.generated->objects_up_to(job.bound));
  if (!um.passed()) throw GateError("universe_morphism", um.witness.value_or(""));
  out.report = validate_homomorphism(p.m_prime(), job.bound);
  out.report.name = "strictify";
  return out;
}

// ---------------------------------------------------------------------------
// The isomorphism chain

struct TauComponents {
  ObjectId object;                // x in CC
  PresheafMorphism tau;           // int'(M'x) -> Lan(int(H'x))
  PresheafMorphism tau1;          // int(H'x) -> Y(x)
  PresheafMorphism tau2;          // int'(M'x) -> Lan(Y(x))
  PresheafMorphism tau2_inv;
  RhoComponent rho;               // Y_C(M x) -> Lan(Y(x))
  PresheafMorphism sigma;         // Y_C(M x) -> int'(M'x)
  std::shared_ptr<const LanValue> lan_yoneda;
};

/// tau_x = psi^_{H'x}, tau'_x = psi_x, tau''_x = tau_x ; Lan(tau'_x),
/// rho_{M x}, and sigma_x = rho_{M x} ; tau''_x^-1.
inline TauComponents tau_components(const Pipeline& p, const ObjectId& x) {
  TauComponents t;
  t.object = x;
  const auto tx = ImageCSystem::tag(x);
  const auto& e1 = p.psi->at(tx);
  const auto& e0 = p.H->at(e1.image);
  t.tau = e0.psi;
  t.tau1 = e1.psi;
  t.lan_yoneda = p.kan->extend(e1.yoneda);
  t.tau2 = compose(t.tau, p.kan->extend(t.tau1, *e0.lan, *t.lan_yoneda));
  t.tau2_inv = invert(t.tau2, "tau'' at " + x);
  t.rho = rho_representable(*p.kan, p.site_object(tx), e1.yoneda);
  t.sigma = compose(t.rho.forward, t.tau2_inv);
  return t;
}

namespace detail {

inline Report iso_and_natural(const std::string& name, const PresheafMorphism& m) {
  Report r(name);
  const auto all = std::numeric_limits<std::size_t>::max();
  r.add(validate_naturality(m, all));
  r.add(pointwise_iso_check(m, all).report);
  return r;
}

inline bool same_components(const PresheafMorphism& a, const PresheafMorphism& b) { return a.components == b.components; }

}  // namespace detail

/// Naturality and pointwise bijectivity of every family, plus the tau''
/// squares M'(f) ; tau''_z = tau''_x ; Lan(Y f) over the fragment.
inline Report tau_isos(const Pipeline& p, const std::map<ObjectId, TauComponents>& taus) {
  Report r("tau_isos");
  for (const auto& [x, t] : taus) {
    Report rx("object " + x);
    rx.add(detail::iso_and_natural("tau", t.tau));
    rx.add(detail::iso_and_natural("tau'", t.tau1));
    rx.add(detail::iso_and_natural("tau''", t.tau2));
    rx.add(t.rho.report);
    r.checked += 4;
    r.add(std::move(rx));
  }
  Report squares("tau''_naturality");
  const auto objs = p.cs->objects_up_to(p.job.bound);
  const auto mp = p.m_prime();
  for (const auto& a : objs)
    for (const auto& b : objs)
      for (const auto& f : p.cs->hom(a, b)) {
        ++squares.checked;
        const auto& ta = taus.at(a);
        const auto& tb = taus.at(b);
        const auto tf = ImageCSystem::tag(f);
        auto Yf = yoneda_morphism(p.psi->at(tf.dom).yoneda, p.psi->at(tf.cod).yoneda, p.site_morphism(tf));
        auto left = compose(mp.on_morphism(f).map, tb.tau2);
        auto right = compose(ta.tau2, p.kan->extend(Yf, *ta.lan_yoneda, *tb.lan_yoneda));
        if (!detail::same_components(left, right)) squares.fail("square for " + f.id);
      }
  r.add(std::move(squares));
  Report rho_sq("rho_naturality");
  for (const auto& a : objs)
    for (const auto& b : objs)
      for (const auto& f : p.cs->hom(a, b)) {
        rho_sq.checked++;
        auto sq = rho_naturality(*p.kan, taus.at(a).rho, taus.at(b).rho, p.site_morphism(ImageCSystem::tag(f)));
        if (!sq.passed()) rho_sq.fail(*sq.witness);
      }
  r.add(std::move(rho_sq));
  return r;
}

/// sigma is bijective at every probe object and every square
/// Y_C(M f) ; sigma_z = sigma_x ; M'(f) commutes. tamper, when set, may
/// alter sigma before the checks (used to demonstrate detection).
struct FinalIsoResult {
  Report report{"final_iso"};
  std::size_t objects_checked = 0;
  std::size_t squares_checked = 0;
};

inline FinalIsoResult final_iso(const Pipeline& p, std::map<ObjectId, TauComponents>& taus,
                                const std::function<void(const ObjectId&, PresheafMorphism&)>& tamper = {}) {
  FinalIsoResult out;
  if (tamper)
    for (auto& [x, t] : taus) tamper(x, t.sigma);
  const auto all = std::numeric_limits<std::size_t>::max();
  Report bij("sigma_bijective");
  for (const auto& [x, t] : taus) {
    ++out.objects_checked;
    ++bij.checked;
    auto chk = pointwise_iso_check(t.sigma, all);
    if (!chk.report.passed()) bij.fail("sigma_" + x + ": " + *chk.report.witness);
  }
  out.report.add(std::move(bij));
  Report nat("sigma_naturality");
  const auto objs = p.cs->objects_up_to(p.job.bound);
  const auto mp = p.m_prime();
  const auto& B = *p.kan->ambient_site();
  for (const auto& a : objs)
    for (const auto& b : objs)
      for (const auto& f : p.cs->hom(a, b)) {
        ++out.squares_checked;
        ++nat.checked;
        const auto& ta = taus.at(a);
        const auto& tb = taus.at(b);
        auto Mf = B.find_morphism(p.M.on_morphism(f).id);
        if (!Mf) {
          nat.fail("M(" + f.id + ") is not in the ambient fragment");
          continue;
        }
        auto YMf = representable_morphism(B, ta.rho.ambient_representable, tb.rho.ambient_representable, *Mf);
        auto left = compose(YMf, tb.sigma);
        auto right = compose(ta.sigma, mp.on_morphism(f).map);
        for (std::size_t c = 0; c < left.components.size(); ++c)
          if (left.components[c] != right.components[c]) {
            nat.fail("square for " + describe(f) + " fails at probe object " + p.kan->probe_site()->object(c).id);
            break;
          }
      }
  out.report.add(std::move(nat));
  return out;
}

// ---------------------------------------------------------------------------
// The verifier

namespace detail {

inline json gate_json(const Report& r) {
  json g;
  g["name"] = r.name;
  g["verdict"] = std::string(to_string(r.verdict));
  if (r.witness) g["witness"] = *r.witness;
  std::function<std::size_t(const Report&)> total = [&](const Report& x) {
    std::size_t n = x.checked;
    for (const auto& c : x.children) n += total(c);
    return n;
  };
  if (auto n = total(r)) g["checked"] = n;
  if (!r.notes.empty()) g["notes"] = r.notes;
  if (!r.children.empty()) {
    g["checks"] = json::array();
    for (const auto& c : r.children) {
      json k = {{"name", c.name}, {"verdict", std::string(to_string(c.verdict))}};
      if (c.witness) k["witness"] = *c.witness;
      if (!c.notes.empty()) k["notes"] = c.notes;
      g["checks"].push_back(std::move(k));
    }
  }
  return g;
}

// Runs a gate body, turning pipeline exceptions into verdicts.
template <class Fn>
Report run_gate(const std::string& name, Fn&& body) {
  try {
    Report r = body();
    r.name = name;
    return r;
  } catch (const GateError& e) {
    Report r(name);
    r.fail(e.gate() == name ? e.witness() : e.gate() + ": " + e.witness());
    return r;
  } catch (const ContractViolation& e) {
    Report r(name);
    r.fail(e.what());
    return r;
  }
}

}  // namespace detail

struct TheoremReport {
  json report;
  bool passed = false;
};

/// Runs every gate in order. Failures are verdicts; gates that depend on a
/// failed one are reported as skipped.
inline TheoremReport verify_theorem(const StrictifyJob& job) {
  std::vector<Report> gates;
  json diagnostics = json::object();
  bool blocked = false;
  auto gate = [&](const std::string& name, auto&& body) -> const Report& {
    if (blocked) {
      Report r(name);
      r.verdict = Verdict::skipped;
      gates.push_back(std::move(r));
    } else {
      gates.push_back(detail::run_gate(name, body));
    }
    return gates.back();
  };

  auto cs = builtin_csystem(job.csystem);
  auto ambient = ambient_from_json(cs, job.ambient_patch);
  FunctorData M = job.functor == "constant_pt" ? constant_pt_functor(cs, ambient) : carrier_inclusion(cs, ambient);

  gate("csystem", [&] { return validate_csystem(*cs, job.bound); });
  gate("functor", [&] { return validate_functor(M, job.bound); });
  if (!gate("injective_on_morphisms", [&] { return check_injective_on_morphisms(M, job.bound); }).passed()) blocked = true;
  const bool final_ok = gate("final_object", [&] { return check_final(M, cs->pt(), job.probe_bound); }).passed();

  std::unique_ptr<Pipeline> p;
  if (!blocked) {
    try {
      p = make_pipeline(job, final_ok);
    } catch (const GateError& e) {
      Report r(e.gate());
      r.fail(e.witness());
      gates.push_back(std::move(r));
      blocked = true;
    }
  }

  if (!final_ok) {
    // Only preservation is diagnosed past a non-final M(pt).
    for (const auto* name : {"image_csystem", "restricted_hom", "universe_naturality", "psi_chain"}) {
      Report r(name);
      r.verdict = Verdict::skipped;
      gates.push_back(std::move(r));
    }
    gate("universe_morphism", [&] {
      return validate_universe_morphism(*p->kan, p->generated->universe(), p->lan_generated->universe(),
                                        p->generated->objects_up_to(job.bound));
    });
    blocked = true;
  } else {
    gate("image_csystem", [&] {
      Report r;
      r.add(validate_csystem(*p->image, job.bound));
      r.add(validate_transport(*p->image, job.bound));
      return r;
    });
    gate("restricted_hom", [&] {
      Report r;
      r.add(validate_homomorphism(restricted_hom(p->image), job.bound));
      r.add(check_factorization(*p->image, job.bound));
      return r;
    });
    gate("universe_naturality", [&] {
      Report r;
      const auto& u = p->generated->universe();
      auto U = validate_presheaf(*u.U);
      U.name = "Ob1";
      auto Ut = validate_presheaf(*u.Ut);
      Ut.name = "Ob1~";
      r.add(std::move(U));
      r.add(std::move(Ut));
      r.add(validate_naturality(u.p, std::numeric_limits<std::size_t>::max()));
      return r;
    });
    if (!gate("psi_chain", [&] {
          Report r;
          for (const auto& x : p->image->objects_up_to(job.bound)) r.add(p->psi->at(x).report);
          r.add(validate_homomorphism(p->psi->hom(), job.bound));
          r.add(p->psi->full_faithful(job.bound));
          return r;
        }).passed())
      blocked = true;
    if (!gate("universe_morphism", [&] {
          return validate_universe_morphism(*p->kan, p->generated->universe(), p->lan_generated->universe(),
                                            p->generated->objects_up_to(job.bound));
        }).passed())
      blocked = true;
  }

  gate("hom_from_universe_morphism", [&] {
    Report r;
    for (const auto& A : p->generated->objects_up_to(job.bound)) r.add(p->H->at(A).report);
    r.add(validate_homomorphism(p->H->hom(), job.bound));
    return r;
  });
  gate("strictify", [&] { return validate_homomorphism(p->m_prime(), job.bound); });

  std::map<ObjectId, TauComponents> taus;
  gate("tau_isos", [&] {
    for (const auto& x : p->cs->objects_up_to(job.bound)) taus.emplace(x, tau_components(*p, x));
    return tau_isos(*p, taus);
  });
  FinalIsoResult fin;
  gate("final_iso", [&] {
    fin = final_iso(*p, taus);
    return fin.report;
  });

  if (p) {
    // Every Lan value computed by any gate above carries its certificate.
    Report stab("stabilization");
    for (const auto& v : p->kan->history()) {
      ++stab.checked;
      if (!v->certificate.passed()) stab.fail(*v->certificate.witness);
    }
    gates.push_back(std::move(stab));

    json filtered = json::array();
    const auto i = inclusion_functor(p->image);
    for (const auto& c : p->ambient->objects_up_to(job.probe_bound)) {
      auto r = is_filtered(comma_category(i, c, job.truncation).category);
      json e = {{"object", c}, {"verdict", std::string(to_string(r.verdict))}};
      if (r.witness) e["witness"] = *r.witness;
      filtered.push_back(std::move(e));
    }
    diagnostics["filteredness"] = std::move(filtered);
    json stab_list = json::array();
    for (const auto& v : p->kan->history())
      for (const auto& w : v->warnings) stab_list.push_back(w);
    diagnostics["stabilization_warnings"] = std::move(stab_list);
  }

  TheoremReport out;
  out.passed = std::all_of(gates.begin(), gates.end(), [](const Report& r) { return r.passed(); });
  json gs = json::array();
  for (const auto& g : gates) gs.push_back(detail::gate_json(g));
  out.report["gates"] = std::move(gs);
  out.report["theorem"] = {{"objects_checked", fin.objects_checked},
                           {"squares_checked", fin.squares_checked},
                           {"verdict", out.passed ? "pass" : "fail"}};
  out.report["bounds"] = {{"bound", job.bound},
                          {"probe_bound", job.probe_bound},
                          {"truncation", job.truncation},
                          {"source_site_bound", job.truncation + 1}};
  out.report["job"] = {{"csystem", job.csystem}, {"functor", job.functor}};
  out.report["diagnostics"] = std::move(diagnostics);
  return out;
}

}  // namespace cstrict
