#pragma once

// The image C-system CC' of an injective-on-morphisms functor M: CC -> C
// whose value at pt is final, the inclusion i: CC' -> C, and the corestricted
// homomorphism M|: CC -> CC'. Also the patched ambient categories
// "carrier of CC plus a finite patch" used as C by the pipeline.

#include "cstrict/csystem.hpp"

namespace cstrict {

// ---------------------------------------------------------------------------
// Patched ambient categories

/// The carrier of a C-system (ids unchanged) extended by patch objects.
/// A patch object either copies a carrier object (it is then isomorphic to
/// it, with morphisms "dom~cod~shadow") or is isolated, with morphisms only
/// among isolated objects as listed in the patch.
class AmbientCategory final : public ComputableCategory {
 public:
  struct PatchObject {
    ObjectId id;
    std::size_t grade = 0;
    std::optional<ObjectId> copy_of;
  };

  AmbientCategory(CSystemPtr base, std::vector<PatchObject> patch, FiniteCategory isolated)
      : base_(std::move(base)), patch_(std::move(patch)), isolated_(std::move(isolated)) {
    for (std::size_t k = 0; k < patch_.size(); ++k) index_.emplace(patch_[k].id, k);
  }

  const CSystemPtr& base() const { return base_; }
  const std::vector<PatchObject>& patch() const { return patch_; }
  const FiniteCategory& isolated() const { return isolated_; }

  std::size_t grade(const ObjectId& x) const override {
    auto p = find(x);
    return p ? p->grade : base_->length(x);
  }

  std::vector<ObjectId> objects_up_to(std::size_t bound) const override {
    auto out = base_->objects_up_to(bound);
    for (const auto& p : patch_)
      if (p.grade <= bound) out.push_back(p.id);
    return out;
  }

  std::vector<Morphism> hom(const ObjectId& a, const ObjectId& b) const override {
    const bool ia = is_isolated(a), ib = is_isolated(b);
    if (ia || ib) return ia && ib ? isolated_.hom(a, b) : std::vector<Morphism>{};
    auto hs = base_->hom(shadow(a), shadow(b));
    if (!find(a) && !find(b)) return hs;
    for (auto& h : hs) h = wrap(a, b, h);
    return hs;
  }

  Morphism identity(const ObjectId& x) const override {
    if (is_isolated(x)) return isolated_.identity(x);
    auto e = base_->identity(shadow(x));
    return find(x) ? wrap(x, x, e) : e;
  }

  Morphism compose(const Morphism& f, const Morphism& g) const override {
    if (f.cod != g.dom) throw ContractViolation("compose: " + describe(f) + " and " + describe(g) + " are not composable");
    if (is_isolated(f.dom)) return isolated_.compose(f, g);
    auto h = base_->compose(unwrap(f), unwrap(g));
    return find(f.dom) || find(g.cod) ? wrap(f.dom, g.cod, h) : h;
  }

 private:
  const PatchObject* find(const ObjectId& x) const {
    auto it = index_.find(x);
    return it == index_.end() ? nullptr : &patch_[it->second];
  }
  bool is_isolated(const ObjectId& x) const {
    auto p = find(x);
    return p && !p->copy_of;
  }
  ObjectId shadow(const ObjectId& x) const {
    auto p = find(x);
    return p ? *p->copy_of : x;
  }
  static Morphism wrap(const ObjectId& a, const ObjectId& b, const Morphism& h) { return {a + "~" + b + "~" + h.id, a, b}; }
  Morphism unwrap(const Morphism& m) const {
    if (!find(m.dom) && !find(m.cod)) return m;
    const auto prefix = m.dom + "~" + m.cod + "~";
    if (m.id.compare(0, prefix.size(), prefix) != 0) throw ContractViolation("not a morphism of the ambient: " + m.id);
    return {m.id.substr(prefix.size()), shadow(m.dom), shadow(m.cod)};
  }

  CSystemPtr base_;
  std::vector<PatchObject> patch_;
  std::unordered_map<ObjectId, std::size_t> index_;
  FiniteCategory isolated_;
};

using AmbientPtr = std::shared_ptr<const AmbientCategory>;

/// Parses {"objects":[{"id","grade","copy_of"?}], "morphisms":[...],
/// "identities"?:{...}, "composition"?:[...]}. Isolated objects without a
/// listed identity get one named "1_<id>".
inline AmbientPtr ambient_from_json(const CSystemPtr& base, const json& j) {
  if (!j.is_object()) throw MalformedInput("ambient patch must be a JSON object");
  std::vector<AmbientCategory::PatchObject> patch;
  json iso = {{"objects", json::array()}, {"morphisms", j.value("morphisms", json::array())},
              {"identities", j.value("identities", json::object())}, {"grades", json::object()}};
  if (j.contains("composition")) iso["composition"] = j["composition"];
  try {
    for (const auto& o : j.value("objects", json::array())) {
      AmbientCategory::PatchObject p;
      p.id = o.at("id").get<std::string>();
      p.grade = o.value("grade", std::size_t{0});
      bool collides = true;
      try {
        base->length(p.id);
      } catch (const ContractViolation&) {
        collides = false;
      }
      if (collides) throw MalformedInput("patch object " + p.id + " collides with an object of " + base->name());
      if (o.contains("copy_of")) {
        p.copy_of = o["copy_of"].get<std::string>();
        try {
          base->length(*p.copy_of);
        } catch (const ContractViolation&) {
          throw MalformedInput("patch object " + p.id + " copies unknown object " + *p.copy_of);
        }
      } else {
        iso["objects"].push_back(p.id);
        iso["grades"][p.id] = p.grade;
        if (!iso["identities"].contains(p.id)) {
          iso["morphisms"].push_back({{"id", "1_" + p.id}, {"dom", p.id}, {"cod", p.id}});
          iso["identities"][p.id] = "1_" + p.id;
        }
      }
      patch.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("ambient patch: ") + e.what());
  }
  auto isolated = finite_category_from_json(iso);
  auto rep = validate_finite_category(isolated);
  if (!rep.passed()) throw MalformedInput("ambient patch: " + rep.witness.value_or("invalid isolated part"));
  return std::make_shared<AmbientCategory>(base, std::move(patch), std::move(isolated));
}

/// The inclusion of a C-system's carrier into a patched ambient.
inline FunctorData carrier_inclusion(const CSystemPtr& cs, const AmbientPtr& ambient) {
  return {cs, ambient, [](const ObjectId& x) { return x; }, [](const Morphism& f) { return f; }};
}

/// Sends everything to pt; used to exercise the injectivity gate.
inline FunctorData constant_pt_functor(const CSystemPtr& cs, const std::shared_ptr<const ComputableCategory>& target) {
  const auto p = cs->pt();
  return {cs, target, [p](const ObjectId&) { return p; },
          [cs, p](const Morphism&) { return cs->identity(p); }};
}

// ---------------------------------------------------------------------------
// Gates

/// The morphism map (hence the object map) is injective on the fragment.
inline Report check_injective_on_morphisms(const FunctorData& M, std::size_t bound) {
  Report r("injective_on_morphisms");
  const auto objs = M.source->objects_up_to(bound);
  std::map<ObjectId, ObjectId> seen_objects;
  for (const auto& x : objs) {
    ++r.checked;
    auto [it, fresh] = seen_objects.emplace(M.on_object(x), x);
    if (!fresh) {
      r.fail("objects " + it->second + " and " + x + " both map to " + it->first);
      return r;
    }
  }
  std::map<std::string, Morphism> seen;
  for (const auto& a : objs)
    for (const auto& b : objs)
      for (const auto& f : M.source->hom(a, b)) {
        ++r.checked;
        auto [it, fresh] = seen.emplace(M.on_morphism(f).id, f);
        if (!fresh) {
          r.fail("morphisms " + it->second.id + " and " + f.id + " both map to " + it->first);
          return r;
        }
      }
  return r;
}

/// |Hom_C(c, M(pt))| = 1 for every c of grade <= bound.
inline Report check_final(const FunctorData& M, const ObjectId& pt, std::size_t bound) {
  Report r("final_object");
  const auto mpt = M.on_object(pt);
  for (const auto& c : M.target->objects_up_to(bound)) {
    ++r.checked;
    auto n = M.target->hom(c, mpt).size();
    if (n != 1) {
      r.fail("object " + c + " has " + std::to_string(n) + " morphisms to M(pt) = " + mpt);
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// The image C-system

/// Objects and morphisms of CC' are tagged preimages "M:x"; the structure is
/// transported from CC. The inclusion sends "M:x" to M(x).
class ImageCSystem final : public CSystem {
 public:
  struct Options {
    std::size_t bound = 3;        // source fragment checked for injectivity
    std::size_t probe_bound = 3;  // ambient fragment checked for finality of M(pt)
    bool require_final = true;
  };

  ImageCSystem(CSystemPtr source, FunctorData M, Options opt) : source_(std::move(source)), M_(std::move(M)) {
    auto inj = check_injective_on_morphisms(M_, opt.bound);
    if (!inj.passed()) throw GateError("injective_on_morphisms", *inj.witness);
    if (opt.require_final) {
      auto fin = check_final(M_, source_->pt(), opt.probe_bound);
      if (!fin.passed()) throw GateError("final_object", *fin.witness);
    }
  }

  static std::string tag(const ObjectId& x) { return "M:" + x; }
  static Morphism tag(const Morphism& f) { return {"M:" + f.id, tag(f.dom), tag(f.cod)}; }
  static ObjectId untag(const ObjectId& x) {
    if (x.rfind("M:", 0) != 0) throw ContractViolation("not an object of the image: " + x);
    return x.substr(2);
  }
  static Morphism untag(const Morphism& f) {
    if (f.id.rfind("M:", 0) != 0) throw ContractViolation("not a morphism of the image: " + f.id);
    return {f.id.substr(2), untag(f.dom), untag(f.cod)};
  }

  const CSystemPtr& source() const { return source_; }
  const FunctorData& functor() const { return M_; }

  std::string name() const override { return "image(" + source_->name() + ")"; }
  std::size_t length(const ObjectId& x) const override { return source_->length(untag(x)); }
  std::vector<ObjectId> objects_up_to(std::size_t bound) const override {
    auto xs = source_->objects_up_to(bound);
    for (auto& x : xs) x = tag(x);
    return xs;
  }
  std::vector<Morphism> hom(const ObjectId& a, const ObjectId& b) const override {
    auto hs = source_->hom(untag(a), untag(b));
    for (auto& h : hs) h = tag(h);
    return hs;
  }
  Morphism identity(const ObjectId& x) const override { return tag(source_->identity(untag(x))); }
  Morphism compose(const Morphism& f, const Morphism& g) const override {
    return tag(source_->compose(untag(f), untag(g)));
  }
  ObjectId pt() const override { return tag(source_->pt()); }
  ObjectId ft(const ObjectId& x) const override { return tag(source_->ft(untag(x))); }
  Morphism proj(const ObjectId& x) const override { return tag(source_->proj(untag(x))); }
  ObjectId star(const Morphism& f, const ObjectId& x) const override {
    return tag(source_->star(untag(f), untag(x)));
  }
  Morphism q(const Morphism& f, const ObjectId& x) const override { return tag(source_->q(untag(f), untag(x))); }
  Morphism section(const Morphism& f) const override { return tag(source_->section(untag(f))); }

  ObjectId include(const ObjectId& x) const { return M_.on_object(untag(x)); }
  Morphism include(const Morphism& f) const { return M_.on_morphism(untag(f)); }

 private:
  CSystemPtr source_;
  FunctorData M_;
};

using ImagePtr = std::shared_ptr<const ImageCSystem>;

inline ImagePtr image_csystem(const CSystemPtr& cs, const FunctorData& M, ImageCSystem::Options opt = {}) {
  return std::make_shared<ImageCSystem>(cs, M, opt);
}

/// The inclusion i: CC' -> C.
inline FunctorData inclusion_functor(const ImagePtr& image) {
  return {image, image->functor().target, [image](const ObjectId& x) { return image->include(x); },
          [image](const Morphism& f) { return image->include(f); }};
}

/// Every transported equation, evaluated in C against M: lengths, ft, p,
/// f*X, q, s, identities and composition of the subcategory, and membership
/// of each M(f) in the ambient hom-set.
inline Report validate_transport(const ImageCSystem& image, std::size_t bound) {
  Report r("transport");
  const auto& cs = *image.source();
  const auto& M = image.functor();
  const auto objs = cs.objects_up_to(bound);
  auto check = [&](Report& rep, const std::string& where, auto&& ok) {
    detail::guarded(rep, where, [&] {
      ++rep.checked;
      if (!ok()) rep.fail(where);
    });
  };
  Report len("length"), ft("ft"), proj("proj"), star("star"), q("q"), sec("section"), sub("subcategory");
  for (const auto& x : objs) {
    const auto tx = ImageCSystem::tag(x);
    check(len, "l(M(" + x + ")) != l(" + x + ")", [&] { return image.length(tx) == cs.length(x); });
    check(ft, "ft(M(" + x + ")) != M(ft(" + x + "))", [&] { return image.include(image.ft(tx)) == M.on_object(cs.ft(x)); });
    check(proj, "p_{M(" + x + ")} != M(p_" + x + ")", [&] { return image.include(image.proj(tx)) == M.on_morphism(cs.proj(x)); });
    check(sub, "identity of M(" + x + ")", [&] {
      return image.include(image.identity(tx)) == M.target->identity(M.on_object(x));
    });
  }
  for (const auto& a : objs)
    for (const auto& b : objs) {
      const auto ambient_hom = M.target->hom(M.on_object(a), M.on_object(b));
      for (const auto& f : cs.hom(a, b)) {
        const auto tf = ImageCSystem::tag(f);
        check(sub, "M(" + f.id + ") is not in the ambient hom-set", [&] {
          return std::find(ambient_hom.begin(), ambient_hom.end(), image.include(tf)) != ambient_hom.end();
        });
        for (const auto& c : objs)
          for (const auto& g : cs.hom(b, c))
            check(sub, "composition of M(" + f.id + ") and M(" + g.id + ")", [&] {
              return image.include(image.compose(tf, ImageCSystem::tag(g))) ==
                     M.target->compose(M.on_morphism(f), M.on_morphism(g));
            });
        if (cs.length(b) > 0)
          check(sec, "s_{M(" + f.id + ")} != M(s_" + f.id + ")", [&] {
            return image.include(image.section(tf)) == M.on_morphism(cs.section(f));
          });
        for (const auto& x : objs) {
          if (cs.length(x) == 0 || cs.ft(x) != b) continue;
          const auto tx = ImageCSystem::tag(x);
          check(star, "M(" + f.id + ")*M(" + x + ") != M(" + f.id + "*" + x + ")", [&] {
            return image.include(image.star(tf, tx)) == M.on_object(cs.star(f, x));
          });
          check(q, "q(M(" + f.id + "),M(" + x + ")) != M(q(" + f.id + "," + x + "))", [&] {
            return image.include(image.q(tf, tx)) == M.on_morphism(cs.q(f, x));
          });
        }
      }
    }
  for (auto* c : {&len, &ft, &proj, &star, &q, &sec, &sub}) r.add(std::move(*c));
  return r;
}

/// M|: CC -> CC', x |-> M:x.
inline CSystemHom<CSystem, CSystem> restricted_hom(const ImagePtr& image) {
  return {image->source().get(), image.get(), [](const ObjectId& x) { return ImageCSystem::tag(x); },
          [](const Morphism& f) { return ImageCSystem::tag(f); }};
}

/// M|;i = M on the fragment, objects and morphisms.
inline Report check_factorization(const ImageCSystem& image, std::size_t bound) {
  Report r("factorization");
  const auto& cs = *image.source();
  const auto& M = image.functor();
  const auto objs = cs.objects_up_to(bound);
  for (const auto& a : objs) {
    ++r.checked;
    if (image.include(ImageCSystem::tag(a)) != M.on_object(a)) r.fail("object " + a);
    for (const auto& b : objs)
      for (const auto& f : cs.hom(a, b)) {
        ++r.checked;
        if (!(image.include(ImageCSystem::tag(f)) == M.on_morphism(f))) r.fail("morphism " + f.id);
      }
  }
  return r;
}

}  // namespace cstrict
