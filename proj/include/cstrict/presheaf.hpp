#pragma once

// Finite-set-valued presheaves over finite sites (probe fragments of
// computable categories), their morphisms, Yoneda, canonical pullbacks and
// the naturality / bijectivity certifiers.
//
// A presheaf is stored as tables: for every site object the list of its
// elements, for every site morphism g: a -> b the restriction P(b) -> P(a)
// as a vector of element indices.

#include <memory>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cstrict/category.hpp"

namespace cstrict {

using Site = std::shared_ptr<const FiniteCategory>;

class Presheaf {
 public:
  /// values(obj) lists the elements at a site object; restrict(mor, e) is
  /// the image of e in P(cod mor) under restriction to P(dom mor).
  template <class ValueFn, class RestrictFn>
  static Presheaf build(Site site, ValueFn&& values, RestrictFn&& restrict) {
    std::vector<std::vector<Elem>> vals(site->object_count());
    for (std::size_t x = 0; x < site->object_count(); ++x) vals[x] = values(x);
    Presheaf p(std::move(site), std::move(vals));
    p.restrict_.resize(p.site_->morphism_count());
    for (std::size_t m = 0; m < p.site_->morphism_count(); ++m) {
      const auto a = p.site_->dom(m), b = p.site_->cod(m);
      auto& row = p.restrict_[m];
      row.reserve(p.values_[b].size());
      for (const auto& e : p.values_[b]) {
        Elem r = restrict(m, e);
        auto k = p.index_of(a, r);
        if (!k)
          throw ContractViolation("restriction along " + p.site_->morphism(m).id + " sends " + e.repr() +
                                  " outside the value at " + p.site_->object(a).id);
        row.push_back(*k);
      }
    }
    return p;
  }

  static Presheaf from_tables(Site site, std::vector<std::vector<Elem>> values,
                              std::vector<std::vector<std::size_t>> restrictions) {
    Presheaf p(std::move(site), std::move(values));
    p.restrict_ = std::move(restrictions);
    return p;
  }

  const Site& site() const { return site_; }
  const std::vector<Elem>& at(std::size_t x) const { return values_[x]; }
  std::size_t size(std::size_t x) const { return values_[x].size(); }
  /// P(g) applied to the element with index k of P(cod g).
  std::size_t restrict(std::size_t g, std::size_t k) const { return restrict_[g][k]; }
  const std::vector<std::size_t>& restriction(std::size_t g) const { return restrict_[g]; }

  std::optional<std::size_t> index_of(std::size_t x, const Elem& e) const {
    const auto& ix = index_[x];
    auto it = ix.find(e);
    if (it == ix.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Presheaf& a, const Presheaf& b) {
    return a.site_ == b.site_ && a.values_ == b.values_ && a.restrict_ == b.restrict_;
  }

 private:
  Presheaf(Site site, std::vector<std::vector<Elem>> values) : site_(std::move(site)), values_(std::move(values)) {
    index_.resize(values_.size());
    for (std::size_t x = 0; x < values_.size(); ++x)
      for (std::size_t k = 0; k < values_[x].size(); ++k)
        if (!index_[x].emplace(values_[x][k], k).second)
          throw ContractViolation("duplicate element " + values_[x][k].repr() + " at " + site_->object(x).id);
  }

  Site site_;
  std::vector<std::vector<Elem>> values_;
  std::vector<std::vector<std::size_t>> restrict_;
  std::vector<std::unordered_map<Elem, std::size_t, ElemHash>> index_;
};

using PresheafPtr = std::shared_ptr<const Presheaf>;

inline bool same_presheaf(const PresheafPtr& a, const PresheafPtr& b) { return a == b || *a == *b; }

struct PresheafMorphism {
  PresheafPtr source;
  PresheafPtr target;
  std::vector<std::vector<std::size_t>> components;  // per object: source index -> target index

  std::size_t apply(std::size_t x, std::size_t k) const { return components[x][k]; }

  /// Same endpoints (structurally) and same components.
  friend bool operator==(const PresheafMorphism& a, const PresheafMorphism& b) {
    return a.components == b.components && same_presheaf(a.source, b.source) && same_presheaf(a.target, b.target);
  }
};

/// Functor laws of a presheaf on its site: identities and composites.
inline Report validate_presheaf(const Presheaf& P) {
  Report r("presheaf");
  const auto& s = *P.site();
  for (std::size_t x = 0; x < s.object_count(); ++x) {
    auto e = s.identity_of(x);
    ++r.checked;
    for (std::size_t k = 0; k < P.size(x); ++k)
      if (P.restrict(e, k) != k) {
        r.fail("restriction along identity of " + s.object(x).id + " moves " + P.at(x)[k].repr());
        break;
      }
  }
  s.for_each_composite([&](std::size_t f, std::size_t g, std::size_t fg) {
    ++r.checked;
    for (std::size_t k = 0; k < P.size(s.cod(g)); ++k)
      if (P.restrict(fg, k) != P.restrict(f, P.restrict(g, k))) {
        r.fail("restriction is not functorial on (" + s.morphism(f).id + "," + s.morphism(g).id + ")");
        break;
      }
  });
  return r;
}

template <class Fn>
PresheafMorphism make_morphism(PresheafPtr source, PresheafPtr target, Fn&& fn) {
  PresheafMorphism m{std::move(source), std::move(target), {}};
  const auto& s = *m.source->site();
  m.components.resize(s.object_count());
  for (std::size_t x = 0; x < s.object_count(); ++x) {
    m.components[x].reserve(m.source->size(x));
    for (std::size_t k = 0; k < m.source->size(x); ++k) m.components[x].push_back(fn(x, k));
  }
  return m;
}

inline PresheafMorphism identity_morphism(const PresheafPtr& P) {
  return make_morphism(P, P, [](std::size_t, std::size_t k) { return k; });
}

/// m;n. Contract: m.target and n.source are the same presheaf.
inline PresheafMorphism compose(const PresheafMorphism& m, const PresheafMorphism& n) {
  if (!same_presheaf(m.target, n.source)) throw ContractViolation("presheaf morphisms are not composable");
  return make_morphism(m.source, n.target, [&](std::size_t x, std::size_t k) { return n.apply(x, m.apply(x, k)); });
}

struct NaturalIso {
  PresheafMorphism forward;
  PresheafMorphism inverse;
  std::size_t bound = 0;
};

// ---------------------------------------------------------------------------
// Constructions

inline PresheafPtr terminal_presheaf(const Site& site) {
  return std::make_shared<const Presheaf>(Presheaf::build(
      site, [](std::size_t) { return std::vector<Elem>{Elem::atom("*")}; },
      [](std::size_t, const Elem& e) { return e; }));
}

inline PresheafMorphism to_terminal(const PresheafPtr& P, const PresheafPtr& terminal) {
  return make_morphism(P, terminal, [](std::size_t, std::size_t) { return std::size_t{0}; });
}

struct Pullback {
  PresheafPtr object;
  PresheafMorphism first;
  PresheafMorphism second;
};

/// The pointwise pullback of p along f. The value at c lists the ordered
/// pairs (a,b) with f(a) = p(b), a-major in the orders of the two values;
/// the element encoding is the pair (a,b).
inline Pullback canonical_pullback(const PresheafMorphism& f, const PresheafMorphism& p) {
  if (!same_presheaf(f.target, p.target)) throw ContractViolation("canonical_pullback: morphisms do not share a target");
  const auto& P = *f.source;
  const auto& Ut = *p.source;
  const auto& s = *P.site();
  const std::size_t n = s.object_count();

  std::vector<std::vector<Elem>> values(n);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> parts(n);
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> where(n);
  for (std::size_t c = 0; c < n; ++c) {
    // bucket Ut elements by their image in U
    std::unordered_map<std::size_t, std::vector<std::size_t>> fibre;
    for (std::size_t b = 0; b < Ut.size(c); ++b) fibre[p.apply(c, b)].push_back(b);
    for (std::size_t a = 0; a < P.size(c); ++a) {
      auto it = fibre.find(f.apply(c, a));
      if (it == fibre.end()) continue;
      for (auto b : it->second) {
        where[c].emplace((static_cast<std::uint64_t>(a) << 32) | b, values[c].size());
        parts[c].emplace_back(a, b);
        values[c].push_back(Elem::pair(P.at(c)[a], Ut.at(c)[b]));
      }
    }
  }
  std::vector<std::vector<std::size_t>> restr(s.morphism_count());
  for (std::size_t g = 0; g < s.morphism_count(); ++g) {
    const auto a = s.dom(g), b = s.cod(g);
    restr[g].reserve(parts[b].size());
    for (auto [x, y] : parts[b]) {
      auto key = (static_cast<std::uint64_t>(P.restrict(g, x)) << 32) | Ut.restrict(g, y);
      restr[g].push_back(where[a].at(key));
    }
  }
  auto obj = std::make_shared<const Presheaf>(Presheaf::from_tables(P.site(), std::move(values), std::move(restr)));
  auto first = make_morphism(obj, f.source, [&](std::size_t c, std::size_t k) { return parts[c][k].first; });
  auto second = make_morphism(obj, p.source, [&](std::size_t c, std::size_t k) { return parts[c][k].second; });
  return {obj, std::move(first), std::move(second)};
}

/// The map X -> pullback induced by a cone (m1: X -> P, m2: X -> Ut).
inline PresheafMorphism pullback_pairing(const Pullback& pb, const PresheafMorphism& m1, const PresheafMorphism& m2) {
  return make_morphism(m1.source, pb.object, [&](std::size_t c, std::size_t k) {
    auto e = Elem::pair(pb.first.target->at(c)[m1.apply(c, k)], pb.second.target->at(c)[m2.apply(c, k)]);
    auto idx = pb.object->index_of(c, e);
    if (!idx) throw ContractViolation("cone does not land in the pullback at " + pb.object->site()->object(c).id);
    return *idx;
  });
}

/// Hom_ambient(-, x) restricted along a full embedding site -> ambient
/// (given on objects and morphisms). Elements are morphism ids; the order
/// at c is the ambient hom order.
inline PresheafPtr representable(const FiniteCategory& ambient, std::size_t x, const Site& site,
                                 const std::vector<std::size_t>& obj_embed, const std::vector<std::size_t>& mor_embed) {
  std::vector<std::vector<Elem>> values(site->object_count());
  for (std::size_t c = 0; c < site->object_count(); ++c)
    for (auto h : ambient.hom_indices(obj_embed[c], x)) values[c].push_back(Elem::atom(ambient.morphism(h).id));
  std::vector<std::vector<std::size_t>> restr(site->morphism_count());
  for (std::size_t g = 0; g < site->morphism_count(); ++g) {
    const auto a = obj_embed[site->dom(g)], b = obj_embed[site->cod(g)];
    const auto& src = ambient.hom_indices(a, x);
    std::unordered_map<std::size_t, std::size_t> pos;
    for (std::size_t k = 0; k < src.size(); ++k) pos.emplace(src[k], k);
    for (auto h : ambient.hom_indices(b, x)) {
      auto gh = ambient.composite(mor_embed[g], h);
      if (gh == npos) throw ContractViolation("representable: missing composite in ambient fragment");
      restr[g].push_back(pos.at(gh));
    }
  }
  return std::make_shared<const Presheaf>(Presheaf::from_tables(site, std::move(values), std::move(restr)));
}

inline std::vector<std::size_t> iota_vector(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

/// Y(x) = Hom(-, x) on the site; restriction along g is precomposition g;-.
inline PresheafPtr yoneda(const Site& site, std::size_t x) {
  return representable(*site, x, site, iota_vector(site->object_count()), iota_vector(site->morphism_count()));
}

/// Y(f): Y(x) -> Y(z) for f: x -> z, sending h to h;f. The presheaves must
/// be the representables of dom f and cod f on the same site.
inline PresheafMorphism yoneda_morphism(const PresheafPtr& Yx, const PresheafPtr& Yz, std::size_t f);

/// The same for representables taken in an ambient fragment (see
/// representable); f is a morphism of the ambient.
inline PresheafMorphism representable_morphism(const FiniteCategory& ambient, const PresheafPtr& Yx,
                                               const PresheafPtr& Yz, std::size_t f) {
  return make_morphism(Yx, Yz, [&](std::size_t c, std::size_t k) {
    auto h = ambient.find_morphism(Yx->at(c)[k].text());
    auto hf = h ? ambient.composite(*h, f) : npos;
    if (hf == npos) throw ContractViolation("representable_morphism: missing composite");
    auto idx = Yz->index_of(c, Elem::atom(ambient.morphism(hf).id));
    if (!idx) throw ContractViolation("representable_morphism: composite outside Y(cod)");
    return *idx;
  });
}

inline PresheafMorphism yoneda_morphism(const PresheafPtr& Yx, const PresheafPtr& Yz, std::size_t f) {
  return representable_morphism(*Yx->site(), Yx, Yz, f);
}

/// Hom(Y(x), P) -> P(x): the value of the morphism at id_x.
inline std::size_t yoneda_to_element(const PresheafMorphism& m, std::size_t x) {
  const auto& s = *m.source->site();
  auto k = m.source->index_of(x, Elem::atom(s.morphism(s.identity_of(x)).id));
  if (!k) throw ContractViolation("yoneda_to_element: source is not representable at " + s.object(x).id);
  return m.apply(x, *k);
}

/// P(x) -> Hom(Y(x), P): the element a induces h |-> P(h)(a).
inline PresheafMorphism yoneda_from_element(const PresheafPtr& Yx, const PresheafPtr& P, std::size_t x, std::size_t a) {
  const auto& s = *Yx->site();
  if (!Yx->index_of(x, Elem::atom(s.morphism(s.identity_of(x)).id)))
    throw ContractViolation("yoneda_from_element: source is not representable at " + s.object(x).id);
  return make_morphism(Yx, P, [&](std::size_t c, std::size_t k) {
    // elements of Y(x) at c are morphisms h: c -> x
    auto h = s.find_morphism(Yx->at(c)[k].text());
    return P->restrict(*h, a);
  });
}

// ---------------------------------------------------------------------------
// Certifiers

/// Every naturality square for site morphisms between objects of grade <= bound.
inline Report validate_naturality(const PresheafMorphism& m, std::size_t bound) {
  Report r("naturality");
  const auto& s = *m.source->site();
  for (std::size_t g = 0; g < s.morphism_count(); ++g) {
    const auto a = s.dom(g), b = s.cod(g);
    if (s.object(a).grade > bound || s.object(b).grade > bound) continue;
    ++r.checked;
    for (std::size_t k = 0; k < m.source->size(b); ++k) {
      if (m.apply(a, m.source->restrict(g, k)) != m.target->restrict(g, m.apply(b, k))) {
        r.fail("square at " + describe(s.morphism(g)) + " on element " + m.source->at(b)[k].repr());
        return r;
      }
    }
  }
  return r;
}

struct IsoCheck {
  Report report;
  std::optional<NaturalIso> iso;
};

/// Certifies each component with grade <= bound bijective and returns the
/// inverse family. Components above the bound are inverted when bijective.
inline IsoCheck pointwise_iso_check(const PresheafMorphism& m, std::size_t bound) {
  IsoCheck out{Report("pointwise_iso"), std::nullopt};
  const auto& s = *m.source->site();
  std::vector<std::vector<std::size_t>> inv(s.object_count());
  for (std::size_t c = 0; c < s.object_count(); ++c) {
    const bool probed = s.object(c).grade <= bound;
    if (probed) ++out.report.checked;
    const auto n = m.source->size(c);
    bool ok = n == m.target->size(c);
    std::vector<std::size_t> back(m.target->size(c), npos);
    for (std::size_t k = 0; ok && k < n; ++k) {
      auto t = m.apply(c, k);
      if (back[t] != npos) ok = false;
      else back[t] = k;
    }
    if (!ok) {
      if (probed) {
        out.report.fail("component at " + s.object(c).id + " is not a bijection (" + std::to_string(n) + " -> " +
                        std::to_string(m.target->size(c)) + ")");
        return out;
      }
      back.clear();
    }
    inv[c] = std::move(back);
  }
  PresheafMorphism inverse{m.target, m.source, std::move(inv)};
  out.iso = NaturalIso{m, std::move(inverse), bound};
  return out;
}

/// Inverts a morphism that must be an isomorphism; throws with the failing
/// object otherwise.
inline PresheafMorphism invert(const PresheafMorphism& m, const std::string& what) {
  auto chk = pointwise_iso_check(m, std::numeric_limits<std::size_t>::max());
  if (!chk.iso) throw ContractViolation(what + ": " + chk.report.witness.value_or("not invertible"));
  return chk.iso->inverse;
}

/// All natural transformations P -> Q, found by backtracking over elements
/// in descending grade order with forward propagation along restrictions.
inline std::vector<PresheafMorphism> enumerate_morphisms(const PresheafPtr& P, const PresheafPtr& Q,
                                                         std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  const auto& s = *P->site();
  const std::size_t n = s.object_count();
  std::vector<std::size_t> order = iota_vector(n);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s.object(a).grade > s.object(b).grade; });

  std::vector<std::vector<std::size_t>> val(n);
  for (std::size_t c = 0; c < n; ++c) val[c].assign(P->size(c), npos);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (auto c : order)
    for (std::size_t k = 0; k < P->size(c); ++k) cells.emplace_back(c, k);
  // morphisms into each object
  std::vector<std::vector<std::size_t>> into(n);
  for (std::size_t g = 0; g < s.morphism_count(); ++g) into[s.cod(g)].push_back(g);

  std::vector<PresheafMorphism> out;
  std::vector<std::pair<std::size_t, std::size_t>> trail;

  auto assign = [&](std::size_t c, std::size_t k, std::size_t v) -> bool {
    for (auto g : into[c]) {
      const auto a = s.dom(g);
      const auto ka = P->restrict(g, k);
      const auto va = Q->restrict(g, v);
      if (val[a][ka] == npos) {
        val[a][ka] = va;
        trail.emplace_back(a, ka);
      } else if (val[a][ka] != va) {
        return false;
      }
    }
    return true;
  };

  std::function<void(std::size_t)> go = [&](std::size_t pos) {
    if (out.size() >= limit) return;
    while (pos < cells.size() && val[cells[pos].first][cells[pos].second] != npos) ++pos;
    if (pos == cells.size()) {
      out.push_back(PresheafMorphism{P, Q, val});
      return;
    }
    const auto [c, k] = cells[pos];
    for (std::size_t v = 0; v < Q->size(c); ++v) {
      const auto mark = trail.size();
      val[c][k] = v;
      trail.emplace_back(c, k);
      if (assign(c, k, v)) go(pos + 1);
      while (trail.size() > mark) {
        auto [a, ka] = trail.back();
        val[a][ka] = npos;
        trail.pop_back();
      }
    }
  };
  go(0);
  return out;
}

// ---------------------------------------------------------------------------
// JSON: {obj: [elements], morId: {elem: elem}} over a finite site.

inline std::string elem_text(const Elem& e) { return e.is_pair() ? e.repr() : e.text(); }

inline json to_json(const Presheaf& P) {
  json j = json::object();
  const auto& s = *P.site();
  for (std::size_t x = 0; x < s.object_count(); ++x) {
    j[s.object(x).id] = json::array();
    for (const auto& e : P.at(x)) j[s.object(x).id].push_back(elem_text(e));
  }
  for (std::size_t g = 0; g < s.morphism_count(); ++g) {
    if (s.identity_of(s.dom(g)) == g) continue;
    json row = json::object();
    for (std::size_t k = 0; k < P.size(s.cod(g)); ++k)
      row[elem_text(P.at(s.cod(g))[k])] = elem_text(P.at(s.dom(g))[P.restrict(g, k)]);
    j[s.morphism(g).id] = row;
  }
  return j;
}

/// Restrictions along identities may be omitted; every other morphism needs
/// a complete table.
inline PresheafPtr presheaf_from_json(const Site& site, const json& j) {
  if (!j.is_object()) throw MalformedInput("presheaf must be a JSON object");
  const auto& s = *site;
  std::vector<std::vector<Elem>> values(s.object_count());
  for (std::size_t x = 0; x < s.object_count(); ++x) {
    const auto& id = s.object(x).id;
    if (!j.contains(id) || !j[id].is_array()) throw MalformedInput("presheaf has no value list for object " + id);
    for (const auto& e : j[id]) {
      if (!e.is_string()) throw MalformedInput("presheaf elements must be strings");
      values[x].push_back(Elem::atom(e.get<std::string>()));
    }
  }
  for (const auto& [k, v] : j.items()) {
    if (s.find_object(k) && v.is_array()) continue;
    if (s.find_morphism(k) && v.is_object()) continue;
    throw MalformedInput("presheaf entry " + k + " names no object or morphism of the site");
  }
  try {
    return std::make_shared<const Presheaf>(Presheaf::build(
        site, [&](std::size_t x) { return values[x]; },
        [&](std::size_t g, const Elem& e) {
          const auto& id = s.morphism(g).id;
          if (!j.contains(id)) {
            if (s.identity_of(s.dom(g)) == g) return e;
            throw MalformedInput("presheaf has no restriction table for " + id);
          }
          const auto& row = j[id];
          const auto key = e.text();
          if (!row.contains(key) || !row[key].is_string())
            throw MalformedInput("restriction table for " + id + " misses element " + key);
          return Elem::atom(row[key].get<std::string>());
        }));
  } catch (const ContractViolation& e) {
    throw MalformedInput(e.what());
  }
}

}  // namespace cstrict
