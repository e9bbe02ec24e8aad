#pragma once

// Universe categories in presheaf worlds, the C-system they generate, the
// comparison H': CC' -> CC(PreShv(CC'), d) with its isomorphisms psi, and
// the homomorphism H induced by the universe morphism (Lan_i, Id, Id).

#include <cstdio>

#include "cstrict/csystem.hpp"
#include "cstrict/kan.hpp"

namespace cstrict {

/// A presheaf world on a finite site with a distinguished p: Ut -> U and a
/// chosen terminal object. Chosen pullbacks are canonical_pullback.
struct UniverseCategory {
  Site site;
  PresheafPtr U;
  PresheafPtr Ut;
  PresheafMorphism p;
  PresheafPtr terminal;
};

/// Ob1(x) = {y : l(y) = l(x) + 1, ft(y) = x} with Ob1(f)(y) = f*y;
/// Ob1~(x) = sections s: x -> y of p_y with Ob1~(f)(s) = s_{f;s};
/// d(s) = cod(s). Values are computed from the structure maps, so they are
/// exact at every site object.
inline UniverseCategory standard_universe(const CSystem& ccp, const Site& site) {
  const auto& s = *site;
  std::unordered_map<std::string, Morphism> sections;
  auto over = [&](std::size_t x) {
    const auto& id = s.object(x).id;
    const auto l = ccp.length(id);
    std::vector<ObjectId> ys;
    for (const auto& y : ccp.objects_up_to(l + 1))
      if (ccp.length(y) == l + 1 && ccp.ft(y) == id) ys.push_back(y);
    return ys;
  };
  auto U = std::make_shared<const Presheaf>(Presheaf::build(
      site,
      [&](std::size_t x) {
        std::vector<Elem> v;
        for (const auto& y : over(x)) v.push_back(Elem::atom(y));
        return v;
      },
      [&](std::size_t g, const Elem& y) { return Elem::atom(ccp.star(s.morphism(g), y.text())); }));
  auto Ut = std::make_shared<const Presheaf>(Presheaf::build(
      site,
      [&](std::size_t x) {
        std::vector<Elem> v;
        const auto& id = s.object(x).id;
        const auto e = ccp.identity(id);
        for (const auto& y : over(x))
          for (const auto& m : ccp.hom(id, y))
            if (ccp.compose(m, ccp.proj(y)) == e) {
              sections.emplace(m.id, m);
              v.push_back(Elem::atom(m.id));
            }
        return v;
      },
      [&](std::size_t g, const Elem& e) {
        return Elem::atom(ccp.section(ccp.compose(s.morphism(g), sections.at(e.text()))).id);
      }));
  auto p = make_morphism(Ut, U, [&](std::size_t x, std::size_t k) {
    return *U->index_of(x, Elem::atom(sections.at(Ut->at(x)[k].text()).cod));
  });
  return {site, U, Ut, std::move(p), terminal_presheaf(site)};
}

// ---------------------------------------------------------------------------
// The generated C-system

/// A length-n object (F1, ..., Fn) stored as a chain of nodes; each node
/// caches int(A) as the chosen pullback of p along F and its projections.
struct GeneratedNode {
  std::shared_ptr<const GeneratedNode> parent;
  std::optional<PresheafMorphism> F;
  PresheafPtr interior;
  std::optional<PresheafMorphism> first;   // int(A) -> int(ft A)
  std::optional<PresheafMorphism> second;  // int(A) -> Ut
  std::size_t length = 0;
  std::string label;
};

namespace detail {

inline std::string digest(const PresheafMorphism& m) {
  std::string s;
  for (const auto& c : m.components) {
    for (auto v : c) s += std::to_string(v) + ',';
    s += ';';
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%08zx", std::hash<std::string>{}(s) & 0xffffffffu);
  return buf;
}

}  // namespace detail

/// Equality compares the F chains componentwise.
struct GeneratedObject {
  std::shared_ptr<const GeneratedNode> node;

  const GeneratedNode* operator->() const { return node.get(); }

  friend bool operator==(const GeneratedObject& a, const GeneratedObject& b) {
    const GeneratedNode* x = a.node.get();
    const GeneratedNode* y = b.node.get();
    if (x->length != y->length) return false;
    while (x != y) {
      if (x->F->components != y->F->components) return false;
      x = x->parent.get();
      y = y->parent.get();
    }
    return true;
  }
};

inline std::string describe(const GeneratedObject& a) { return a->label; }

struct GeneratedMorphism {
  GeneratedObject dom;
  GeneratedObject cod;
  PresheafMorphism map;

  friend bool operator==(const GeneratedMorphism& a, const GeneratedMorphism& b) {
    return a.map.components == b.map.components && a.dom == b.dom && a.cod == b.cod;
  }
};

inline std::string describe(const GeneratedMorphism& f) {
  return "[" + detail::digest(f.map) + "]: " + f.dom->label + " -> " + f.cod->label;
}

/// CC(world, p): objects are sequences of classifying maps, morphisms are
/// presheaf morphisms int(A) -> int(B). Hom-sets are enumerated on the
/// finite site, so equalities are certified on that site.
class GeneratedCSystem {
 public:
  using object_type = GeneratedObject;
  using morphism_type = GeneratedMorphism;

  explicit GeneratedCSystem(UniverseCategory u) : u_(std::move(u)) {
    auto root = std::make_shared<GeneratedNode>();
    root->interior = u_.terminal;
    root->label = "()";
    root_ = {root};
  }

  const UniverseCategory& universe() const { return u_; }

  GeneratedObject extend(const GeneratedObject& A, const PresheafMorphism& F) const {
    if (!same_presheaf(F.source, A->interior)) throw ContractViolation("extend: F does not start at int(" + A->label + ")");
    if (!same_presheaf(F.target, u_.U)) throw ContractViolation("extend: F does not classify into U");
    auto pb = canonical_pullback(F, u_.p);
    auto node = std::make_shared<GeneratedNode>();
    node->parent = A.node;
    node->F = F;
    node->interior = pb.object;
    node->first = std::move(pb.first);
    node->second = std::move(pb.second);
    node->length = A->length + 1;
    node->label = (A->length ? A->label : std::string()) + "<" + detail::digest(F) + ">";
    return {node};
  }

  std::size_t length(const GeneratedObject& A) const { return A->length; }
  GeneratedObject pt() const { return root_; }
  GeneratedObject ft(const GeneratedObject& A) const { return A->length ? GeneratedObject{A->parent} : A; }
  GeneratedMorphism proj(const GeneratedObject& A) const {
    if (!A->length) return identity(A);
    return {A, ft(A), *A->first};
  }
  GeneratedObject star(const GeneratedMorphism& f, const GeneratedObject& A) const {
    if (!A->length) throw ContractViolation("f*A needs l(A) > 0");
    if (!(f.cod == ft(A))) throw ContractViolation("f*A needs f: B -> ft(A); got " + describe(f));
    return extend(f.dom, compose_maps(f.map, *A->F));
  }
  GeneratedMorphism q(const GeneratedMorphism& f, const GeneratedObject& A) const {
    auto B = star(f, A);
    Pullback pb{A->interior, *A->first, *A->second};
    return {B, A, pullback_pairing(pb, compose_maps(*B->first, f.map), *B->second)};
  }
  GeneratedMorphism section(const GeneratedMorphism& f) const {
    const auto& A = f.cod;
    if (!A->length) throw ContractViolation("s_f needs l(cod f) > 0: " + describe(f));
    auto base = star(compose(f, proj(A)), A);
    Pullback pb{base->interior, *base->first, *base->second};
    return {f.dom, base, pullback_pairing(pb, identity_morphism(f.dom->interior), compose_maps(f.map, *A->second))};
  }

  std::vector<GeneratedObject> objects_up_to(std::size_t bound) const {
    std::lock_guard lock(mutex_);
    if (levels_.empty()) levels_.push_back({root_});
    while (levels_.size() <= bound) {
      std::vector<GeneratedObject> next;
      for (const auto& A : levels_.back())
        for (const auto& F : enumerate_morphisms(A->interior, u_.U)) next.push_back(extend(A, F));
      levels_.push_back(std::move(next));
    }
    std::vector<GeneratedObject> out;
    for (std::size_t l = 0; l <= bound; ++l) out.insert(out.end(), levels_[l].begin(), levels_[l].end());
    return out;
  }
  std::vector<GeneratedMorphism> hom(const GeneratedObject& A, const GeneratedObject& B) const {
    std::vector<GeneratedMorphism> out;
    for (auto& m : enumerate_morphisms(A->interior, B->interior)) out.push_back({A, B, std::move(m)});
    return out;
  }
  GeneratedMorphism identity(const GeneratedObject& A) const { return {A, A, identity_morphism(A->interior)}; }
  GeneratedMorphism compose(const GeneratedMorphism& f, const GeneratedMorphism& g) const {
    if (!(f.cod == g.dom)) throw ContractViolation("compose: " + describe(f) + " and " + describe(g) + " are not composable");
    return {f.dom, g.cod, compose_maps(f.map, g.map)};
  }
  GeneratedObject dom(const GeneratedMorphism& f) const { return f.dom; }
  GeneratedObject cod(const GeneratedMorphism& f) const { return f.cod; }

 private:
  // Composition of maps whose middle presheaves agree structurally.
  static PresheafMorphism compose_maps(const PresheafMorphism& m, const PresheafMorphism& n) {
    return make_morphism(m.source, n.target, [&](std::size_t x, std::size_t k) { return n.apply(x, m.apply(x, k)); });
  }

  UniverseCategory u_;
  GeneratedObject root_;
  mutable std::mutex mutex_;
  mutable std::vector<std::vector<GeneratedObject>> levels_;
};

// ---------------------------------------------------------------------------
// H' and psi

/// H': CC' -> CC(PreShv(CC'), d) with psi_x: int(H'x) -> Y(x). Objects and
/// morphisms must lie on the universe's site.
class PsiChain {
 public:
  struct Entry {
    GeneratedObject image;
    PresheafPtr yoneda;
    PresheafMorphism psi;      // int(H'x) -> Y(x)
    PresheafMorphism psi_inv;  // Y(x) -> int(H'x)
    Report report{"psi"};
  };

  PsiChain(const CSystem& ccp, const GeneratedCSystem& gen) : ccp_(ccp), gen_(gen) {}

  const GeneratedCSystem& generated() const { return gen_; }

  const Entry& at(const ObjectId& x) const {
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(x);
      if (it != cache_.end()) return *it->second;
    }
    auto e = std::make_unique<Entry>(compute(x));
    std::lock_guard lock(mutex_);
    return *cache_.emplace(x, std::move(e)).first->second;
  }

  GeneratedMorphism on_morphism(const Morphism& f) const {
    const auto& s = *gen_.universe().site;
    const auto& a = at(f.dom);
    const auto& b = at(f.cod);
    auto k = s.find_morphism(f.id);
    if (!k) throw ContractViolation("H': " + f.id + " is not on the site");
    auto m = compose(compose(a.psi, yoneda_morphism(a.yoneda, b.yoneda, *k)), b.psi_inv);
    return {a.image, b.image, std::move(m)};
  }

  CSystemHom<CSystem, GeneratedCSystem> hom() const {
    return {&ccp_, &gen_, [this](const ObjectId& x) { return at(x).image; },
            [this](const Morphism& f) { return on_morphism(f); }};
  }

  /// Fullness and faithfulness on the fragment: H' is a bijection between
  /// Hom(x, y) and Hom(H'x, H'y).
  Report full_faithful(std::size_t bound) const {
    Report r("full_faithful");
    const auto objs = ccp_.objects_up_to(bound);
    for (const auto& x : objs)
      for (const auto& y : objs) {
        ++r.checked;
        const auto src = ccp_.hom(x, y);
        const auto tgt = gen_.hom(at(x).image, at(y).image);
        if (src.size() != tgt.size()) {
          r.fail("|Hom(" + x + "," + y + ")| = " + std::to_string(src.size()) + " but the generated hom-set has " +
                 std::to_string(tgt.size()));
          return r;
        }
        std::vector<bool> hit(tgt.size(), false);
        for (const auto& f : src) {
          auto hf = on_morphism(f);
          auto it = std::find(tgt.begin(), tgt.end(), hf);
          if (it == tgt.end() || hit[it - tgt.begin()]) {
            r.fail("H' is not bijective on Hom(" + x + "," + y + ") at " + f.id);
            return r;
          }
          hit[it - tgt.begin()] = true;
        }
      }
    return r;
  }

 private:
  std::size_t site_index(const ObjectId& x) const {
    auto k = gen_.universe().site->find_object(x);
    if (!k) throw ContractViolation("psi: object " + x + " is not on the site");
    return *k;
  }

  Entry compute(const ObjectId& x) const {
    const auto& u = gen_.universe();
    const auto& s = *u.site;
    const auto xi = site_index(x);
    Entry e;
    e.report.name = "psi " + x;
    e.yoneda = yoneda(u.site, xi);
    if (ccp_.length(x) == 0) {
      e.image = gen_.pt();
      e.psi = make_morphism(e.image->interior, e.yoneda, [](std::size_t, std::size_t) { return std::size_t{0}; });
      e.psi_inv = to_terminal(e.yoneda, e.image->interior);
    } else {
      const auto& prev = at(ccp_.ft(x));
      const auto fx = site_index(ccp_.ft(x));
      auto xk = u.U->index_of(fx, Elem::atom(x));
      if (!xk) throw ContractViolation("psi: " + x + " is not in Ob1(ft " + x + ")");
      auto chi = yoneda_from_element(prev.yoneda, u.U, fx, *xk);
      e.image = gen_.extend(prev.image, compose(prev.psi, chi));
      const auto px = ccp_.proj(x);
      const auto& interior = *e.image->interior;
      // kappa: g |-> (psi^-1(g;p_x), s_g)
      auto kappa = make_morphism(e.yoneda, e.image->interior, [&](std::size_t c, std::size_t k) {
        const auto& g = s.morphism(*s.find_morphism(e.yoneda->at(c)[k].text()));
        auto a = prev.psi_inv.apply(c, *prev.yoneda->index_of(c, Elem::atom(ccp_.compose(g, px).id)));
        auto b = u.Ut->index_of(c, Elem::atom(ccp_.section(g).id));
        if (!b) throw ContractViolation("psi: s_g for g = " + g.id + " is not in Ob1~");
        auto idx = interior.index_of(c, Elem::pair(prev.image->interior->at(c)[a], u.Ut->at(c)[*b]));
        if (!idx) throw ContractViolation("psi: cone for g = " + g.id + " misses the pullback");
        return *idx;
      });
      e.report.add(validate_naturality(kappa, std::numeric_limits<std::size_t>::max()));
      auto iso = pointwise_iso_check(kappa, std::numeric_limits<std::size_t>::max());
      e.report.add(iso.report);
      if (!iso.iso) throw GateError("psi_chain", "comparison for " + x + ": " + iso.report.witness.value_or(""));
      e.psi = iso.iso->inverse;
      e.psi_inv = std::move(kappa);
    }
    auto iso = pointwise_iso_check(e.psi, std::numeric_limits<std::size_t>::max());
    if (!iso.iso) throw GateError("psi_chain", "psi_" + x + ": " + iso.report.witness.value_or(""));
    return e;
  }

  const CSystem& ccp_;
  const GeneratedCSystem& gen_;
  mutable std::mutex mutex_;
  mutable std::map<ObjectId, std::unique_ptr<Entry>> cache_;
};

// ---------------------------------------------------------------------------
// The universe morphism (Lan_i, Id, Id) and H

/// The world on the probe site of C with U' = Lan U, Ut' = Lan Ut and
/// d' = Lan d.
inline UniverseCategory lan_universe(const KanExtension& kan, const UniverseCategory& u) {
  auto dp = kan.extend(u.p);
  return {kan.probe_site(), dp.target, dp.source, dp, terminal_presheaf(kan.probe_site())};
}

/// Conditions 1-3 for (Lan_i, Id, Id), with the canonical squares of the
/// supplied generated objects as tests.
inline Report validate_universe_morphism(const KanExtension& kan, const UniverseCategory& u,
                                         const UniverseCategory& target, const std::vector<GeneratedObject>& tests) {
  std::vector<PresheafMorphism> maps;
  std::vector<Pullback> squares;
  for (const auto& A : tests)
    if (A->length) {
      maps.push_back(*A->F);
      squares.push_back({A->interior, *A->first, *A->second});
    }
  return preservation_report(kan, u.p, maps, &target.p, &squares);
}

/// H: CC(PreShv(CC'), d) -> CC(PreShv(C), d') with
/// psi^_A: int'(H A) -> Lan(int A).
class LanHom {
 public:
  struct Entry {
    GeneratedObject image;
    std::shared_ptr<const LanValue> lan;
    PresheafMorphism psi;      // int'(HA) -> Lan(int A)
    PresheafMorphism psi_inv;  // Lan(int A) -> int'(HA)
    Report report{"psi_hat"};
  };

  LanHom(const KanExtension& kan, const GeneratedCSystem& source, const GeneratedCSystem& target)
      : kan_(kan), src_(source), tgt_(target) {}

  const Entry& at(const GeneratedObject& A) const {
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(A.node.get());
      if (it != cache_.end()) return *it->second.second;
    }
    auto e = std::make_unique<Entry>(compute(A));
    std::lock_guard lock(mutex_);
    return *cache_.emplace(A.node.get(), std::make_pair(A.node, std::move(e))).first->second.second;
  }

  GeneratedMorphism on_morphism(const GeneratedMorphism& r) const {
    const auto& a = at(r.dom);
    const auto& b = at(r.cod);
    auto m = compose(compose(a.psi, kan_.extend(r.map, *a.lan, *b.lan)), b.psi_inv);
    return {a.image, b.image, std::move(m)};
  }

  CSystemHom<GeneratedCSystem, GeneratedCSystem> hom() const {
    return {&src_, &tgt_, [this](const GeneratedObject& A) { return at(A).image; },
            [this](const GeneratedMorphism& r) { return on_morphism(r); }};
  }

 private:
  Entry compute(const GeneratedObject& A) const {
    Entry e;
    e.report.name = "psi_hat " + A->label;
    e.lan = kan_.extend(A->interior);
    if (!A->length) {
      e.image = tgt_.pt();
      auto comparison = to_terminal(e.lan->presheaf, e.image->interior);
      auto iso = pointwise_iso_check(comparison, std::numeric_limits<std::size_t>::max());
      e.report.add(iso.report);
      if (!iso.iso) throw GateError("universe_morphism", "Lan of the terminal presheaf: " + iso.report.witness.value_or(""));
      e.psi = iso.iso->inverse;
      e.psi_inv = std::move(comparison);
      return e;
    }
    const auto& prev = at(GeneratedObject{A->parent});
    const auto& u = src_.universe();
    auto LU = kan_.extend(u.U);
    auto LUt = kan_.extend(u.Ut);
    auto G = compose(prev.psi, kan_.extend(*A->F, *prev.lan, *LU));
    e.image = tgt_.extend(prev.image, G);
    Pullback pb{e.image->interior, *e.image->first, *e.image->second};
    auto first = compose(kan_.extend(*A->first, *e.lan, *prev.lan), prev.psi_inv);
    auto second = kan_.extend(*A->second, *e.lan, *LUt);
    PresheafMorphism comparison;
    try {
      comparison = pullback_pairing(pb, first, second);
    } catch (const ContractViolation& ex) {
      throw GateError("universe_morphism", A->label + ": " + ex.what());
    }
    auto iso = pointwise_iso_check(comparison, std::numeric_limits<std::size_t>::max());
    e.report.add(iso.report);
    if (!iso.iso)
      throw GateError("universe_morphism", "pullback comparison for " + A->label + ": " + iso.report.witness.value_or(""));
    e.psi = iso.iso->inverse;
    e.psi_inv = std::move(comparison);
    return e;
  }

  const KanExtension& kan_;
  const GeneratedCSystem& src_;
  const GeneratedCSystem& tgt_;
  mutable std::mutex mutex_;
  mutable std::map<const GeneratedNode*, std::pair<std::shared_ptr<const GeneratedNode>, std::unique_ptr<Entry>>> cache_;
};

}  // namespace cstrict
