#pragma once

// Computable and finite pre-categories, functors, comma categories and the
// structural validators over them. Composition is diagrammatic throughout:
// compose(f, g) is "f then g".

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <vector>

#include "cstrict/core.hpp"

namespace cstrict {

/// A pre-category with graded, enumerable objects and finite hom-sets.
/// Object and morphism equality is id equality.
class ComputableCategory {
 public:
  virtual ~ComputableCategory() = default;

  virtual std::size_t grade(const ObjectId& x) const = 0;
  /// Every object of grade <= bound, in a fixed order. Monotone in bound.
  virtual std::vector<ObjectId> objects_up_to(std::size_t bound) const = 0;
  virtual std::vector<Morphism> hom(const ObjectId& a, const ObjectId& b) const = 0;
  virtual Morphism identity(const ObjectId& x) const = 0;
  /// f;g. Contract: f.cod == g.dom.
  virtual Morphism compose(const Morphism& f, const Morphism& g) const = 0;
};

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// A finite pre-category stored as explicit tables. Building never throws on
/// inconsistent input; structural problems (dangling ids, duplicates, missing
/// identities) are recorded and surface as a "malformed" verdict.
class FiniteCategory final : public ComputableCategory {
 public:
  struct Object {
    ObjectId id;
    std::size_t grade = 0;
  };

  std::size_t add_object(const ObjectId& id, std::size_t grade = 0) {
    if (obj_index_.count(id)) {
      problems_.push_back("duplicate object id " + id);
      return obj_index_.at(id);
    }
    std::size_t k = objects_.size();
    objects_.push_back({id, grade});
    obj_index_.emplace(id, k);
    identity_.push_back(npos);
    rebuild_hom();
    return k;
  }

  std::size_t add_morphism(const std::string& id, const ObjectId& dom, const ObjectId& cod) {
    if (mor_index_.count(id)) {
      problems_.push_back("duplicate morphism id " + id);
      return mor_index_.at(id);
    }
    auto d = find_object(dom);
    auto c = find_object(cod);
    if (!d || !c) {
      problems_.push_back("morphism " + id + " has dangling endpoint");
      return npos;
    }
    std::size_t k = morphisms_.size();
    morphisms_.push_back({id, dom, cod});
    dom_.push_back(*d);
    cod_.push_back(*c);
    mor_index_.emplace(id, k);
    hom_[*d * objects_.size() + *c].push_back(k);
    dense_valid_ = false;
    return k;
  }

  void set_identity(const ObjectId& x, const std::string& mor) {
    auto o = find_object(x);
    auto m = find_morphism(mor);
    if (!o || !m) {
      problems_.push_back("identity entry " + x + " -> " + mor + " is dangling");
      return;
    }
    identity_[*o] = *m;
  }

  /// Records f;g = fg. Conflicting entries are a structural problem.
  void set_composite(const std::string& f, const std::string& g, const std::string& fg) {
    auto a = find_morphism(f);
    auto b = find_morphism(g);
    auto c = find_morphism(fg);
    if (!a || !b || !c) {
      problems_.push_back("composition entry [" + f + "," + g + "," + fg + "] is dangling");
      return;
    }
    set_composite(*a, *b, *c);
  }

  void set_composite(std::size_t f, std::size_t g, std::size_t fg) {
    auto [it, fresh] = composition_.emplace(key(f, g), fg);
    if (!fresh && it->second != fg)
      problems_.push_back("conflicting composites for (" + morphisms_[f].id + "," + morphisms_[g].id + ")");
    dense_valid_ = false;
  }

  /// Marks a composable pair whose composite lies outside this fragment.
  void mark_external(std::size_t f, std::size_t g) { external_.emplace(f, g); }

  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return morphisms_.size(); }
  const Object& object(std::size_t k) const { return objects_[k]; }
  const Morphism& morphism(std::size_t k) const { return morphisms_[k]; }
  std::size_t dom(std::size_t m) const { return dom_[m]; }
  std::size_t cod(std::size_t m) const { return cod_[m]; }
  std::size_t identity_of(std::size_t x) const { return identity_[x]; }
  const std::vector<std::string>& problems() const { return problems_; }
  const std::set<std::pair<std::size_t, std::size_t>>& external() const { return external_; }

  std::optional<std::size_t> find_object(const ObjectId& id) const {
    auto it = obj_index_.find(id);
    if (it == obj_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> find_morphism(const std::string& id) const {
    auto it = mor_index_.find(id);
    if (it == mor_index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::size_t>& hom_indices(std::size_t a, std::size_t b) const {
    return hom_[a * objects_.size() + b];
  }

  /// Index of f;g, or npos when the table has no entry.
  std::size_t composite(std::size_t f, std::size_t g) const {
    if (morphisms_.size() <= kDenseLimit) {
      if (!dense_valid_) build_dense();
      return dense_[f * morphisms_.size() + g];
    }
    auto it = composition_.find(key(f, g));
    return it == composition_.end() ? npos : it->second;
  }

  bool has_composite_entry(std::size_t f, std::size_t g) const { return composition_.count(key(f, g)) > 0; }

  std::size_t composition_size() const { return composition_.size(); }

  template <class Fn>
  void for_each_composite(Fn&& fn) const {
    for (const auto& [k, v] : composition_) fn(static_cast<std::size_t>(k >> 32), static_cast<std::size_t>(k & 0xffffffffu), v);
  }

  /// Objects of grade <= bound, in insertion order.
  std::vector<std::size_t> object_indices_up_to(std::size_t bound) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < objects_.size(); ++k)
      if (objects_[k].grade <= bound) out.push_back(k);
    return out;
  }

  FiniteCategory opposite() const {
    FiniteCategory op;
    for (const auto& o : objects_) op.add_object(o.id, o.grade);
    for (std::size_t m = 0; m < morphisms_.size(); ++m)
      op.add_morphism(morphisms_[m].id, morphisms_[m].cod, morphisms_[m].dom);
    for (std::size_t x = 0; x < objects_.size(); ++x)
      if (identity_[x] != npos) op.identity_[x] = identity_[x];
    for (const auto& [k, v] : composition_)
      op.set_composite(static_cast<std::size_t>(k & 0xffffffffu), static_cast<std::size_t>(k >> 32), v);
    return op;
  }

  // ComputableCategory

  std::size_t grade(const ObjectId& x) const override { return objects_.at(require_object(x)).grade; }

  std::vector<ObjectId> objects_up_to(std::size_t bound) const override {
    std::vector<ObjectId> out;
    for (const auto& o : objects_)
      if (o.grade <= bound) out.push_back(o.id);
    return out;
  }

  std::vector<Morphism> hom(const ObjectId& a, const ObjectId& b) const override {
    std::vector<Morphism> out;
    for (auto m : hom_indices(require_object(a), require_object(b))) out.push_back(morphisms_[m]);
    return out;
  }

  Morphism identity(const ObjectId& x) const override {
    auto m = identity_[require_object(x)];
    if (m == npos) throw ContractViolation("no identity for " + x);
    return morphisms_[m];
  }

  Morphism compose(const Morphism& f, const Morphism& g) const override {
    auto a = find_morphism(f.id);
    auto b = find_morphism(g.id);
    if (!a || !b) throw ContractViolation("compose: unknown morphism " + (a ? g.id : f.id));
    if (cod_[*a] != dom_[*b]) throw ContractViolation("compose: " + f.id + " and " + g.id + " are not composable");
    auto c = composite(*a, *b);
    if (c == npos) throw ContractViolation("compose: no composite for (" + f.id + "," + g.id + ")");
    return morphisms_[c];
  }

 private:
  static constexpr std::size_t kDenseLimit = 2048;

  static std::uint64_t key(std::size_t f, std::size_t g) {
    return (static_cast<std::uint64_t>(f) << 32) | static_cast<std::uint64_t>(g);
  }

  std::size_t require_object(const ObjectId& x) const {
    auto o = find_object(x);
    if (!o) throw ContractViolation("unknown object " + x);
    return *o;
  }

  void rebuild_hom() {
    hom_.assign(objects_.size() * objects_.size(), {});
    for (std::size_t m = 0; m < morphisms_.size(); ++m) hom_[dom_[m] * objects_.size() + cod_[m]].push_back(m);
  }

  void build_dense() const {
    const std::size_t n = morphisms_.size();
    dense_.assign(n * n, npos);
    for (const auto& [k, v] : composition_) dense_[(k >> 32) * n + (k & 0xffffffffu)] = v;
    dense_valid_ = true;
  }

  std::vector<Object> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<std::size_t> dom_, cod_, identity_;
  std::unordered_map<ObjectId, std::size_t> obj_index_;
  std::unordered_map<std::string, std::size_t> mor_index_;
  std::vector<std::vector<std::size_t>> hom_;
  std::unordered_map<std::uint64_t, std::size_t> composition_;
  std::set<std::pair<std::size_t, std::size_t>> external_;
  std::vector<std::string> problems_;
  mutable std::vector<std::size_t> dense_;
  mutable bool dense_valid_ = false;
};

// ---------------------------------------------------------------------------
// JSON

/// Parses {"objects":[...], "morphisms":[{"id","dom","cod"}],
/// "identities":{obj:mor}, "composition":[[f,g,fg],...], "grades":{obj:n}}.
/// Composites involving an identity may be omitted and are filled in with
/// the lawful value; explicit entries always take precedence.
inline FiniteCategory finite_category_from_json(const json& j) {
  if (!j.is_object()) throw MalformedInput("category must be a JSON object");
  for (const char* field : {"objects", "morphisms", "identities"})
    if (!j.contains(field)) throw MalformedInput(std::string("category is missing \"") + field + "\"");
  if (!j["objects"].is_array() || !j["morphisms"].is_array() || !j["identities"].is_object())
    throw MalformedInput("category fields have the wrong JSON type");

  FiniteCategory cat;
  const json grades = j.value("grades", json::object());
  try {
    for (const auto& o : j["objects"]) {
      const auto id = o.get<std::string>();
      std::size_t g = grades.contains(id) ? grades[id].get<std::size_t>() : 0;
      cat.add_object(id, g);
    }
    for (const auto& m : j["morphisms"])
      cat.add_morphism(m.at("id").get<std::string>(), m.at("dom").get<std::string>(), m.at("cod").get<std::string>());
    for (const auto& [x, m] : j["identities"].items()) cat.set_identity(x, m.get<std::string>());
    if (j.contains("composition")) {
      if (!j["composition"].is_array()) throw MalformedInput("\"composition\" must be an array");
      for (const auto& t : j["composition"]) {
        if (!t.is_array() || t.size() != 3) throw MalformedInput("composition entries are [f,g,fg] triples");
        cat.set_composite(t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("category JSON: ") + e.what());
  }
  for (std::size_t x = 0; x < cat.object_count(); ++x) {
    if (cat.identity_of(x) == npos) continue;
    const auto e = cat.identity_of(x);
    for (std::size_t m = 0; m < cat.morphism_count(); ++m) {
      if (cat.cod(m) == x && !cat.has_composite_entry(m, e)) cat.set_composite(m, e, m);
      if (cat.dom(m) == x && !cat.has_composite_entry(e, m)) cat.set_composite(e, m, m);
    }
  }
  return cat;
}

inline json to_json(const FiniteCategory& cat) {
  json j;
  j["objects"] = json::array();
  j["grades"] = json::object();
  for (std::size_t k = 0; k < cat.object_count(); ++k) {
    j["objects"].push_back(cat.object(k).id);
    j["grades"][cat.object(k).id] = cat.object(k).grade;
  }
  j["morphisms"] = json::array();
  for (std::size_t m = 0; m < cat.morphism_count(); ++m)
    j["morphisms"].push_back({{"id", cat.morphism(m).id}, {"dom", cat.morphism(m).dom}, {"cod", cat.morphism(m).cod}});
  j["identities"] = json::object();
  for (std::size_t k = 0; k < cat.object_count(); ++k)
    if (cat.identity_of(k) != npos) j["identities"][cat.object(k).id] = cat.morphism(cat.identity_of(k)).id;
  std::vector<std::array<std::string, 3>> triples;
  cat.for_each_composite([&](std::size_t f, std::size_t g, std::size_t fg) {
    triples.push_back({cat.morphism(f).id, cat.morphism(g).id, cat.morphism(fg).id});
  });
  std::sort(triples.begin(), triples.end());
  j["composition"] = triples;
  return j;
}

// ---------------------------------------------------------------------------
// Validators

/// Identity, composability and associativity laws, checked exhaustively.
/// Pairs marked external are treated as absent.
inline Report validate_finite_category(const FiniteCategory& cat) {
  Report r("finite_category");
  if (!cat.problems().empty()) {
    r.malformed(cat.problems().front());
    return r;
  }
  for (std::size_t x = 0; x < cat.object_count(); ++x)
    if (cat.identity_of(x) == npos) {
      r.malformed("object " + cat.object(x).id + " has no identity");
      return r;
    }

  auto pair_name = [&](std::size_t f, std::size_t g) {
    return "(" + cat.morphism(f).id + "," + cat.morphism(g).id + ")";
  };

  Report typing("composition_typing");
  cat.for_each_composite([&](std::size_t f, std::size_t g, std::size_t fg) {
    ++typing.checked;
    if (cat.cod(f) != cat.dom(g))
      typing.fail(pair_name(f, g) + " is not composable but has a composite");
    else if (cat.dom(fg) != cat.dom(f) || cat.cod(fg) != cat.cod(g))
      typing.fail(pair_name(f, g) + " composes to " + describe(cat.morphism(fg)));
  });
  // Deterministic witness: rescan in index order when something failed.
  if (!typing.passed()) {
    typing.witness.reset();
    for (std::size_t f = 0; f < cat.morphism_count() && !typing.witness; ++f)
      for (std::size_t g = 0; g < cat.morphism_count() && !typing.witness; ++g) {
        if (!cat.has_composite_entry(f, g)) continue;
        auto fg = cat.composite(f, g);
        if (cat.cod(f) != cat.dom(g)) typing.witness = pair_name(f, g) + " is not composable but has a composite";
        else if (cat.dom(fg) != cat.dom(f) || cat.cod(fg) != cat.cod(g))
          typing.witness = pair_name(f, g) + " composes to " + describe(cat.morphism(fg));
      }
  }
  r.add(std::move(typing));

  Report total("composition_total");
  for (std::size_t f = 0; f < cat.morphism_count(); ++f)
    for (std::size_t b = 0; b < cat.object_count(); ++b)
      for (std::size_t g : cat.hom_indices(cat.cod(f), b)) {
        ++total.checked;
        if (cat.composite(f, g) == npos && !cat.external().count({f, g}))
          total.fail(pair_name(f, g) + " has no composite");
      }
  r.add(std::move(total));
  if (!r.passed()) return r;

  Report ids("identity_laws");
  for (std::size_t x = 0; x < cat.object_count(); ++x) {
    auto e = cat.identity_of(x);
    ++ids.checked;
    if (cat.dom(e) != x || cat.cod(e) != x) ids.fail("identity of " + cat.object(x).id + " is " + describe(cat.morphism(e)));
  }
  for (std::size_t f = 0; f < cat.morphism_count(); ++f) {
    auto l = cat.identity_of(cat.dom(f));
    auto rr = cat.identity_of(cat.cod(f));
    ids.checked += 2;
    auto a = cat.composite(l, f);
    auto b = cat.composite(f, rr);
    if (a != npos && a != f) ids.fail(pair_name(l, f) + " is not " + cat.morphism(f).id);
    if (b != npos && b != f) ids.fail(pair_name(f, rr) + " is not " + cat.morphism(f).id);
  }
  r.add(std::move(ids));

  Report assoc("associativity");
  for (std::size_t f = 0; f < cat.morphism_count(); ++f)
    for (std::size_t b = 0; b < cat.object_count(); ++b)
      for (std::size_t g : cat.hom_indices(cat.cod(f), b)) {
        auto fg = cat.composite(f, g);
        if (fg == npos) continue;
        for (std::size_t c = 0; c < cat.object_count(); ++c)
          for (std::size_t h : cat.hom_indices(b, c)) {
            auto gh = cat.composite(g, h);
            if (gh == npos) continue;
            auto left = cat.composite(fg, h);
            auto right = cat.composite(f, gh);
            if (left == npos || right == npos) continue;
            ++assoc.checked;
            if (left != right)
              assoc.fail("(" + cat.morphism(f).id + "," + cat.morphism(g).id + "," + cat.morphism(h).id + ")");
          }
      }
  r.add(std::move(assoc));
  return r;
}

/// Materializes the full sub-pre-category on objects of grade <= bound.
/// Composites whose result is not a morphism of the fragment are marked
/// external rather than dropped.
inline FiniteCategory probe_fragment(const ComputableCategory& cat, std::size_t bound) {
  FiniteCategory frag;
  const auto objs = cat.objects_up_to(bound);
  for (const auto& x : objs) frag.add_object(x, cat.grade(x));
  for (const auto& a : objs)
    for (const auto& b : objs)
      for (const auto& m : cat.hom(a, b)) frag.add_morphism(m.id, m.dom, m.cod);
  for (std::size_t x = 0; x < frag.object_count(); ++x) frag.set_identity(frag.object(x).id, cat.identity(frag.object(x).id).id);
  for (std::size_t f = 0; f < frag.morphism_count(); ++f)
    for (std::size_t c = 0; c < frag.object_count(); ++c)
      for (std::size_t g : frag.hom_indices(frag.cod(f), c)) {
        auto fg = cat.compose(frag.morphism(f), frag.morphism(g));
        auto k = frag.find_morphism(fg.id);
        if (k) frag.set_composite(f, g, *k);
        else frag.mark_external(f, g);
      }
  return frag;
}

// ---------------------------------------------------------------------------
// Functors

struct FunctorData {
  std::shared_ptr<const ComputableCategory> source;
  std::shared_ptr<const ComputableCategory> target;
  std::function<ObjectId(const ObjectId&)> on_object;
  std::function<Morphism(const Morphism&)> on_morphism;
};

inline FunctorData identity_functor(std::shared_ptr<const ComputableCategory> cat) {
  return {cat, cat, [](const ObjectId& x) { return x; }, [](const Morphism& f) { return f; }};
}

/// Preservation of dom/cod, identities and composition on the grade-<=bound
/// fragment of the source.
inline Report validate_functor(const FunctorData& F, std::size_t bound) {
  Report r("functor");
  const auto objs = F.source->objects_up_to(bound);
  std::vector<Morphism> ordinary, identities;
  for (const auto& a : objs)
    for (const auto& b : objs)
      for (const auto& m : F.source->hom(a, b)) (m == F.source->identity(a) ? identities : ordinary).push_back(m);

  Report typing("dom_cod");
  auto check_typing = [&](const Morphism& m) {
    ++typing.checked;
    try {
      auto fm = F.on_morphism(m);
      auto fa = F.on_object(m.dom), fb = F.on_object(m.cod);
      if (fm.dom != fa || fm.cod != fb) {
        typing.fail(describe(m));
        return;
      }
      auto hs = F.target->hom(fa, fb);
      if (std::find(hs.begin(), hs.end(), fm) == hs.end()) typing.fail(describe(m) + " maps outside the target hom-set");
    } catch (const std::logic_error& e) {
      typing.fail(describe(m) + ": " + e.what());
    }
  };
  for (const auto& m : ordinary) check_typing(m);
  for (const auto& m : identities) check_typing(m);
  r.add(std::move(typing));

  Report ids("identities");
  for (const auto& a : objs) {
    ++ids.checked;
    try {
      if (!(F.on_morphism(F.source->identity(a)) == F.target->identity(F.on_object(a)))) ids.fail("identity of " + a);
    } catch (const std::logic_error& e) {
      ids.fail("identity of " + a + ": " + e.what());
    }
  }
  r.add(std::move(ids));

  Report comp("composition");
  for (const auto& a : objs)
    for (const auto& b : objs)
      for (const auto& f : F.source->hom(a, b))
        for (const auto& c : objs)
          for (const auto& g : F.source->hom(b, c)) {
            ++comp.checked;
            try {
              auto lhs = F.on_morphism(F.source->compose(f, g));
              auto rhs = F.target->compose(F.on_morphism(f), F.on_morphism(g));
              if (!(lhs == rhs)) comp.fail("(" + f.id + "," + g.id + ")");
            } catch (const std::logic_error& e) {
              comp.fail("(" + f.id + "," + g.id + "): " + e.what());
            }
          }
  r.add(std::move(comp));
  return r;
}

// ---------------------------------------------------------------------------
// Comma categories

/// The fragment of the comma category c/i whose objects are pairs
/// (y, f: c -> i(y)) and whose morphisms (y,f) -> (y',f') are h: y -> y'
/// with f;i(h) = f'.
struct CommaCategory {
  ObjectId base;
  std::vector<std::pair<ObjectId, Morphism>> pairs;  // aligned with category objects
  std::vector<Morphism> arrows;                      // underlying source morphism, aligned with category morphisms
  FiniteCategory category;
};

inline std::string comma_object_id(const ObjectId& y, const Morphism& f) {
  return Elem::pair(Elem::atom(y), Elem::atom(f.id)).repr();
}

inline CommaCategory comma_category(const FunctorData& i, const ObjectId& c, std::size_t truncation) {
  CommaCategory cc;
  cc.base = c;
  for (const auto& y : i.source->objects_up_to(truncation))
    for (const auto& f : i.target->hom(c, i.on_object(y))) {
      cc.pairs.emplace_back(y, f);
      cc.category.add_object(comma_object_id(y, f), i.source->grade(y));
    }
  const std::size_t n = cc.pairs.size();
  // out[k] lists (morphism index, target object index)
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(n);
  std::map<std::pair<ObjectId, std::string>, std::size_t> lookup;
  for (std::size_t k = 0; k < n; ++k) lookup[{cc.pairs[k].first, cc.pairs[k].second.id}] = k;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& [y, f] = cc.pairs[k];
    for (std::size_t t = 0; t < n; ++t) {
      const auto& y2 = cc.pairs[t].first;
      if (t > 0 && y2 == cc.pairs[t - 1].first) continue;  // one pass per distinct y'
      for (const auto& h : i.source->hom(y, y2)) {
        auto fh = i.target->compose(f, i.on_morphism(h));
        auto it = lookup.find({y2, fh.id});
        if (it == lookup.end()) continue;
        const auto id = Elem::pair(Elem::atom(h.id), Elem::atom(cc.category.object(k).id)).repr();
        auto m = cc.category.add_morphism(id, cc.category.object(k).id, cc.category.object(it->second).id);
        cc.arrows.push_back(h);
        out[k].emplace_back(m, it->second);
        if (h == i.source->identity(y)) cc.category.set_identity(cc.category.object(k).id, id);
      }
    }
  }
  // Composition is inherited from the source.
  for (std::size_t m = 0; m < cc.category.morphism_count(); ++m) {
    auto mid = cc.category.cod(m);
    for (auto [m2, tgt] : out[mid]) {
      auto h = i.source->compose(cc.arrows[m], cc.arrows[m2]);
      for (auto [m3, tgt3] : out[cc.category.dom(m)])
        if (tgt3 == tgt && cc.arrows[m3] == h) {
          cc.category.set_composite(m, m2, m3);
          break;
        }
    }
  }
  return cc;
}

/// Nonempty; every pair of objects has a cocone; every parallel pair is
/// coequalized by some arrow.
inline Report is_filtered(const FiniteCategory& cat) {
  Report r("filtered");
  const std::size_t n = cat.object_count();
  if (n == 0) {
    r.fail("empty category");
    return r;
  }
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t w = 0; w < n; ++w) reach[a][w] = !cat.hom_indices(a, w).empty();
  for (std::size_t a = 0; a < n && r.passed(); ++a)
    for (std::size_t b = a + 1; b < n && r.passed(); ++b) {
      ++r.checked;
      bool ok = false;
      for (std::size_t w = 0; w < n && !ok; ++w) ok = reach[a][w] && reach[b][w];
      if (!ok) r.fail("objects " + cat.object(a).id + " and " + cat.object(b).id + " have no cocone");
    }
  for (std::size_t a = 0; a < n && r.passed(); ++a)
    for (std::size_t b = 0; b < n && r.passed(); ++b) {
      const auto& hs = cat.hom_indices(a, b);
      for (std::size_t i = 0; i < hs.size() && r.passed(); ++i)
        for (std::size_t j = i + 1; j < hs.size() && r.passed(); ++j) {
          ++r.checked;
          bool ok = false;
          for (std::size_t w = 0; w < n && !ok; ++w)
            for (auto h : cat.hom_indices(b, w)) {
              auto x = cat.composite(hs[i], h);
              if (x != npos && x == cat.composite(hs[j], h)) {
                ok = true;
                break;
              }
            }
          if (!ok) r.fail("parallel pair " + cat.morphism(hs[i]).id + ", " + cat.morphism(hs[j]).id + " is not coequalized");
        }
    }
  return r;
}

}  // namespace cstrict
