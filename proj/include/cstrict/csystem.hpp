#pragma once

// C0-systems and C-systems: the structure interface, the built-in instances,
// a mutation suite, and exhaustive fragment validators.
//
// The validators are templates over any type offering
//
//   object_type, morphism_type
//   length(X) pt() ft(X) proj(X) star(f, X) q(f, X) section(f)
//   objects_up_to(L) hom(A, B) identity(X) compose(f, g) dom(f) cod(f)
//
// with operator== on objects and morphisms and describe() found by lookup.
// Structure maps signal out-of-domain calls with ContractViolation; the
// validators turn those into failures with the offending input as witness.

#include <charconv>
#include <sstream>
#include <type_traits>

#include "cstrict/category.hpp"

namespace cstrict {

/// A C-system presented lazily over string ids. grade() is the length.
class CSystem : public ComputableCategory {
 public:
  using object_type = ObjectId;
  using morphism_type = Morphism;

  virtual std::string name() const = 0;
  virtual std::size_t length(const ObjectId& x) const = 0;
  virtual ObjectId pt() const = 0;
  virtual ObjectId ft(const ObjectId& x) const = 0;
  /// p_X: X -> ft(X).
  virtual Morphism proj(const ObjectId& x) const = 0;
  /// f*X for f: Y -> ft(X). Contract: l(X) > 0.
  virtual ObjectId star(const Morphism& f, const ObjectId& x) const = 0;
  /// q(f, X): f*X -> X.
  virtual Morphism q(const Morphism& f, const ObjectId& x) const = 0;
  /// s_f: Y -> (f;p_X)*X for f: Y -> X. Contract: l(X) > 0.
  virtual Morphism section(const Morphism& f) const = 0;

  std::size_t grade(const ObjectId& x) const override { return length(x); }
  ObjectId dom(const Morphism& f) const { return f.dom; }
  ObjectId cod(const Morphism& f) const { return f.cod; }
};

using CSystemPtr = std::shared_ptr<const CSystem>;

namespace detail {

inline std::size_t parse_natural(std::string_view s, std::string_view what) {
  std::size_t n = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size())
    throw ContractViolation("not a " + std::string(what) + ": " + std::string(s));
  return n;
}

inline void require_composable(const Morphism& f, const Morphism& g) {
  if (f.cod != g.dom) throw ContractViolation("compose: " + describe(f) + " and " + describe(g) + " are not composable");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Built-ins

/// Objects 0, 1, 2, ... with exactly one morphism m>n between any two.
class UnitCSystem final : public CSystem {
 public:
  std::string name() const override { return "unit"; }
  std::size_t length(const ObjectId& x) const override { return detail::parse_natural(x, "UNIT object"); }
  std::vector<ObjectId> objects_up_to(std::size_t bound) const override {
    std::vector<ObjectId> out;
    for (std::size_t n = 0; n <= bound; ++n) out.push_back(std::to_string(n));
    return out;
  }
  std::vector<Morphism> hom(const ObjectId& a, const ObjectId& b) const override {
    return {arrow(length(a), length(b))};
  }
  Morphism identity(const ObjectId& x) const override { return arrow(length(x), length(x)); }
  Morphism compose(const Morphism& f, const Morphism& g) const override {
    detail::require_composable(f, g);
    return arrow(length(f.dom), length(g.cod));
  }
  ObjectId pt() const override { return "0"; }
  ObjectId ft(const ObjectId& x) const override {
    auto n = length(x);
    return std::to_string(n == 0 ? 0 : n - 1);
  }
  Morphism proj(const ObjectId& x) const override { return arrow(length(x), length(ft(x))); }
  ObjectId star(const Morphism& f, const ObjectId& x) const override {
    check_base(f, x);
    return std::to_string(length(f.dom) + 1);
  }
  Morphism q(const Morphism& f, const ObjectId& x) const override {
    return arrow(length(star(f, x)), length(x));
  }
  Morphism section(const Morphism& f) const override {
    if (length(f.cod) == 0) throw ContractViolation("s_f needs l(cod f) > 0: " + describe(f));
    auto m = length(f.dom);
    return arrow(m, m + 1);
  }

  static Morphism arrow(std::size_t m, std::size_t n) {
    return {std::to_string(m) + ">" + std::to_string(n), std::to_string(m), std::to_string(n)};
  }

 private:
  void check_base(const Morphism& f, const ObjectId& x) const {
    if (length(x) == 0) throw ContractViolation("f*X needs l(X) > 0, X = " + x);
    if (f.cod != ft(x)) throw ContractViolation("f*X needs f: Y -> ft(X); got " + describe(f) + ", X = " + x);
  }
};

/// The C-system of the theory with one closed type: objects are natural
/// numbers (contexts of n variables) and Hom(m, n) is the set of functions
/// [n] -> [m], [k] = {1..k}. A morphism m>n:F1.F2...Fn lists F(1..n).
class OneTypeCSystem final : public CSystem {
 public:
  using Table = std::vector<std::size_t>;

  std::string name() const override { return "onetype"; }
  std::size_t length(const ObjectId& x) const override { return detail::parse_natural(x, "onetype object"); }
  std::vector<ObjectId> objects_up_to(std::size_t bound) const override {
    std::vector<ObjectId> out;
    for (std::size_t n = 0; n <= bound; ++n) out.push_back(std::to_string(n));
    return out;
  }
  std::vector<Morphism> hom(const ObjectId& a, const ObjectId& b) const override {
    const auto m = length(a), n = length(b);
    std::vector<Morphism> out;
    if (m == 0 && n > 0) return out;
    Table F(n, 1);
    for (;;) {
      out.push_back(arrow(m, n, F));
      std::size_t k = n;
      while (k > 0 && F[k - 1] == m) F[--k] = 1;
      if (k == 0) break;
      ++F[k - 1];
    }
    return out;
  }
  Morphism identity(const ObjectId& x) const override {
    const auto n = length(x);
    Table F(n);
    for (std::size_t i = 0; i < n; ++i) F[i] = i + 1;
    return arrow(n, n, F);
  }
  Morphism compose(const Morphism& f, const Morphism& g) const override {
    detail::require_composable(f, g);
    auto F = table(f), G = table(g);
    Table H(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) H[i] = F[G[i] - 1];
    return arrow(length(f.dom), length(g.cod), H);
  }
  ObjectId pt() const override { return "0"; }
  ObjectId ft(const ObjectId& x) const override {
    auto n = length(x);
    return std::to_string(n == 0 ? 0 : n - 1);
  }
  Morphism proj(const ObjectId& x) const override {
    const auto n = length(x);
    if (n == 0) return identity(x);
    Table F(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) F[i] = i + 1;
    return arrow(n, n - 1, F);
  }
  ObjectId star(const Morphism& f, const ObjectId& x) const override {
    check_base(f, x);
    return std::to_string(length(f.dom) + 1);
  }
  /// Q(i) = F(i) for i < n, Q(n) = m + 1.
  Morphism q(const Morphism& f, const ObjectId& x) const override {
    check_base(f, x);
    const auto m = length(f.dom), n = length(x);
    Table Q = table(f);
    Q.push_back(m + 1);
    return arrow(m + 1, n, Q);
  }
  /// S(i) = i for i <= m, S(m + 1) = F(n).
  Morphism section(const Morphism& f) const override {
    const auto m = length(f.dom), n = length(f.cod);
    if (n == 0) throw ContractViolation("s_f needs l(cod f) > 0: " + describe(f));
    auto F = table(f);
    Table S(m + 1);
    for (std::size_t i = 0; i < m; ++i) S[i] = i + 1;
    S[m] = F[n - 1];
    return arrow(m, m + 1, S);
  }

  static Morphism arrow(std::size_t m, std::size_t n, const Table& F) {
    std::string id = std::to_string(m) + ">" + std::to_string(n) + ":";
    for (std::size_t i = 0; i < F.size(); ++i) {
      if (i) id += '.';
      id += std::to_string(F[i]);
    }
    return {std::move(id), std::to_string(m), std::to_string(n)};
  }

  /// Parses and range-checks the function table of a morphism.
  Table table(const Morphism& f) const {
    const auto m = length(f.dom), n = length(f.cod);
    const auto colon = f.id.find(':');
    if (colon == std::string::npos) throw ContractViolation("not a onetype morphism: " + f.id);
    Table F;
    std::string_view rest(f.id);
    rest.remove_prefix(colon + 1);
    while (!rest.empty()) {
      auto dot = rest.find('.');
      F.push_back(detail::parse_natural(rest.substr(0, dot), "function value"));
      if (dot == std::string_view::npos) break;
      rest.remove_prefix(dot + 1);
    }
    if (F.size() != n) throw ContractViolation("morphism " + f.id + " does not have " + std::to_string(n) + " values");
    for (auto v : F)
      if (v < 1 || v > m) throw ContractViolation("morphism " + f.id + " has a value outside [" + std::to_string(m) + "]");
    return F;
  }

 private:
  void check_base(const Morphism& f, const ObjectId& x) const {
    if (length(x) == 0) throw ContractViolation("f*X needs l(X) > 0, X = " + x);
    if (f.cod != ft(x)) throw ContractViolation("f*X needs f: Y -> ft(X); got " + describe(f) + ", X = " + x);
  }
};

/// The C-system with the single object pt.
class PointCSystem final : public CSystem {
 public:
  std::string name() const override { return "point"; }
  std::size_t length(const ObjectId& x) const override {
    if (x != "0") throw ContractViolation("unknown object " + x);
    return 0;
  }
  std::vector<ObjectId> objects_up_to(std::size_t) const override { return {"0"}; }
  std::vector<Morphism> hom(const ObjectId& a, const ObjectId& b) const override {
    length(a);
    length(b);
    return {identity(a)};
  }
  Morphism identity(const ObjectId&) const override { return {"0>0", "0", "0"}; }
  Morphism compose(const Morphism& f, const Morphism& g) const override {
    detail::require_composable(f, g);
    return identity("0");
  }
  ObjectId pt() const override { return "0"; }
  ObjectId ft(const ObjectId&) const override { return "0"; }
  Morphism proj(const ObjectId& x) const override { return identity(x); }
  ObjectId star(const Morphism&, const ObjectId& x) const override {
    throw ContractViolation("f*X needs l(X) > 0, X = " + x);
  }
  Morphism q(const Morphism&, const ObjectId& x) const override {
    throw ContractViolation("q(f,X) needs l(X) > 0, X = " + x);
  }
  Morphism section(const Morphism& f) const override {
    throw ContractViolation("s_f needs l(cod f) > 0: " + describe(f));
  }
};

/// "unit", "onetype" (alias "th1") or "point".
inline CSystemPtr builtin_csystem(const std::string& name) {
  if (name == "unit") return std::make_shared<UnitCSystem>();
  if (name == "onetype" || name == "th1") return std::make_shared<OneTypeCSystem>();
  if (name == "point") return std::make_shared<PointCSystem>();
  throw MalformedInput("unknown built-in C-system \"" + name + "\" (expected unit, onetype or point)");
}

// ---------------------------------------------------------------------------
// Mutants

/// A C-system that forwards to a base system except for overridden fields.
class MutantCSystem final : public CSystem {
 public:
  struct Overrides {
    std::function<std::size_t(const ObjectId&)> length;
    std::function<ObjectId()> pt;
    std::function<ObjectId(const ObjectId&)> ft;
    std::function<Morphism(const ObjectId&)> proj;
    std::function<ObjectId(const Morphism&, const ObjectId&)> star;
    std::function<Morphism(const Morphism&, const ObjectId&)> q;
    std::function<Morphism(const Morphism&)> section;
    std::function<std::vector<Morphism>(const ObjectId&, const ObjectId&)> hom;
  };

  MutantCSystem(CSystemPtr base, std::string label, Overrides o)
      : base_(std::move(base)), label_(std::move(label)), o_(std::move(o)) {}

  std::string name() const override { return base_->name() + "/" + label_; }
  std::size_t length(const ObjectId& x) const override { return o_.length ? o_.length(x) : base_->length(x); }
  std::vector<ObjectId> objects_up_to(std::size_t bound) const override { return base_->objects_up_to(bound); }
  std::vector<Morphism> hom(const ObjectId& a, const ObjectId& b) const override {
    return o_.hom ? o_.hom(a, b) : base_->hom(a, b);
  }
  Morphism identity(const ObjectId& x) const override { return base_->identity(x); }
  Morphism compose(const Morphism& f, const Morphism& g) const override { return base_->compose(f, g); }
  ObjectId pt() const override { return o_.pt ? o_.pt() : base_->pt(); }
  ObjectId ft(const ObjectId& x) const override { return o_.ft ? o_.ft(x) : base_->ft(x); }
  Morphism proj(const ObjectId& x) const override { return o_.proj ? o_.proj(x) : base_->proj(x); }
  ObjectId star(const Morphism& f, const ObjectId& x) const override {
    return o_.star ? o_.star(f, x) : base_->star(f, x);
  }
  Morphism q(const Morphism& f, const ObjectId& x) const override { return o_.q ? o_.q(f, x) : base_->q(f, x); }
  Morphism section(const Morphism& f) const override { return o_.section ? o_.section(f) : base_->section(f); }

 private:
  CSystemPtr base_;
  std::string label_;
  Overrides o_;
};

/// Names of the single-field mutants that break every non-trivial C-system.
inline std::vector<std::string> mutation_names() {
  return {"ft_fixed_at_2", "pt_shifted",     "ft_pt_nonzero",   "length_offset",        "proj_identity", "star_drops_base",
          "star_too_long", "q_to_ft",        "section_identity", "hom_to_pt_doubled",   "ft_skips",      "star_ignores_identity"};
}

/// A mutant of base. "section_constant" additionally exists for onetype: it
/// sends every s_f to the non-section with constant value 1.
inline CSystemPtr make_mutant(const CSystemPtr& base, const std::string& name) {
  MutantCSystem::Overrides o;
  const CSystem& b = *base;
  if (name == "ft_fixed_at_2") {
    o.ft = [&b](const ObjectId& x) { return b.length(x) == 2 ? x : b.ft(x); };
  } else if (name == "pt_shifted") {
    o.pt = [&b] { return b.objects_up_to(1).back(); };
  } else if (name == "ft_pt_nonzero") {
    o.ft = [&b](const ObjectId& x) { return b.length(x) == 0 ? b.objects_up_to(1).back() : b.ft(x); };
  } else if (name == "length_offset") {
    o.length = [&b](const ObjectId& x) { return b.length(x) + 1; };
  } else if (name == "proj_identity") {
    o.proj = [&b](const ObjectId& x) { return b.identity(x); };
  } else if (name == "star_drops_base") {
    o.star = [](const Morphism&, const ObjectId& x) { return x; };
  } else if (name == "star_too_long") {
    o.star = [&b](const Morphism& f, const ObjectId& x) {
      auto z = b.star(f, x);
      return b.star(b.proj(z), z);
    };
  } else if (name == "q_to_ft") {
    o.q = [&b](const Morphism& f, const ObjectId& x) { return b.compose(b.q(f, x), b.proj(x)); };
  } else if (name == "section_identity") {
    o.section = [&b](const Morphism& f) { return b.identity(f.dom); };
  } else if (name == "hom_to_pt_doubled") {
    o.hom = [&b](const ObjectId& x, const ObjectId& y) {
      auto hs = b.hom(x, y);
      if (y == b.pt() && !hs.empty()) hs.push_back({hs.front().id + "'", x, y});
      return hs;
    };
  } else if (name == "ft_skips") {
    o.ft = [&b](const ObjectId& x) { return b.length(x) >= 2 ? b.ft(b.ft(x)) : b.ft(x); };
  } else if (name == "star_ignores_identity") {
    o.star = [&b](const Morphism& f, const ObjectId& x) {
      return f == b.identity(b.ft(x)) ? b.star(b.proj(x), x) : b.star(f, x);
    };
  } else if (name == "section_constant") {
    auto th = std::dynamic_pointer_cast<const OneTypeCSystem>(base);
    if (!th) throw MalformedInput("mutant section_constant is defined for onetype only");
    o.section = [th](const Morphism& f) {
      const auto m = th->length(f.dom);
      if (th->length(f.cod) == 0) throw ContractViolation("s_f needs l(cod f) > 0: " + describe(f));
      return OneTypeCSystem::arrow(m, m + 1, OneTypeCSystem::Table(m + 1, 1));
    };
  } else {
    throw MalformedInput("unknown mutant \"" + name + "\"");
  }
  return std::make_shared<MutantCSystem>(base, name, std::move(o));
}

// ---------------------------------------------------------------------------
// Validators

namespace detail {

// Runs body, converting contract violations into failures of r.
template <class Fn>
void guarded(Report& r, const std::string& where, Fn&& body) {
  try {
    body();
  } catch (const ContractViolation& e) {
    r.fail(where + ": " + e.what());
  }
}

template <class CS>
std::vector<typename CS::object_type> positive(const CS& cs, std::size_t bound) {
  std::vector<typename CS::object_type> out;
  for (const auto& x : cs.objects_up_to(bound))
    if (cs.length(x) > 0) out.push_back(x);
  return out;
}

}  // namespace detail

/// Conditions 1-7 of a C0-system on the objects of length <= bound and the
/// morphisms among them. Children are named condition_1 .. condition_7, then
/// typing (structure maps have the declared endpoints).
template <class CS>
Report validate_c0(const CS& cs, std::size_t bound) {
  using std::to_string;
  Report r("c0");
  const auto objs = cs.objects_up_to(bound);
  const auto pos = detail::positive(cs, bound);

  Report c1("condition_1");
  detail::guarded(c1, "pt", [&] {
    const auto p = cs.pt();
    ++c1.checked;
    if (cs.length(p) != 0) c1.fail("l(pt) = " + to_string(cs.length(p)));
    bool listed = false;
    for (const auto& x : objs) {
      ++c1.checked;
      if (x == p) listed = true;
      else if (cs.length(x) == 0) c1.fail("X = " + describe(x) + " has length 0 but is not pt");
    }
    if (!listed) c1.fail("pt = " + describe(p) + " is not among the objects of length <= " + to_string(bound));
  });
  r.add(std::move(c1));

  Report c2("condition_2");
  for (const auto& x : pos)
    detail::guarded(c2, "X = " + describe(x), [&] {
      ++c2.checked;
      const auto l = cs.length(x), lf = cs.length(cs.ft(x));
      if (lf + 1 != l) c2.fail("X = " + describe(x) + ": l(ft X) = " + to_string(lf) + ", l(X) = " + to_string(l));
    });
  r.add(std::move(c2));

  Report c3("condition_3");
  detail::guarded(c3, "ft(pt)", [&] {
    ++c3.checked;
    if (!(cs.ft(cs.pt()) == cs.pt())) c3.fail("ft(pt) = " + describe(cs.ft(cs.pt())));
  });
  r.add(std::move(c3));

  Report c4("condition_4");
  for (const auto& x : objs)
    detail::guarded(c4, "X = " + describe(x), [&] {
      ++c4.checked;
      auto n = cs.hom(x, cs.pt()).size();
      if (n != 1) c4.fail("|Hom(" + describe(x) + ", pt)| = " + to_string(n));
    });
  r.add(std::move(c4));

  Report c5("condition_5"), c6("condition_6"), c7("condition_7");
  for (const auto& x : pos) {
    detail::guarded(c6, "X = " + describe(x), [&] {
      const auto id = cs.identity(cs.ft(x));
      ++c6.checked;
      if (!(cs.star(id, x) == x)) c6.fail("X = " + describe(x) + ": id*X = " + describe(cs.star(id, x)));
      else if (!(cs.q(id, x) == cs.identity(x))) c6.fail("X = " + describe(x) + ": q(id, X) = " + describe(cs.q(id, x)));
    });
    for (const auto& y : objs) {
      std::vector<typename CS::morphism_type> fs;
      detail::guarded(c5, "X = " + describe(x) + ", Y = " + describe(y), [&] { fs = cs.hom(y, cs.ft(x)); });
      for (const auto& f : fs) {
        const auto where = "X = " + describe(x) + ", f = " + describe(f);
        detail::guarded(c5, where, [&] {
          ++c5.checked;
          const auto fx = cs.star(f, x);
          const auto qf = cs.q(f, x);
          if (cs.length(fx) == 0) c5.fail(where + ": l(f*X) = 0");
          else if (!(cs.ft(fx) == y)) c5.fail(where + ": ft(f*X) = " + describe(cs.ft(fx)));
          else if (!(cs.dom(qf) == fx) || !(cs.cod(qf) == x)) c5.fail(where + ": q(f,X) is " + describe(qf));
          else if (!(cs.compose(qf, cs.proj(x)) == cs.compose(cs.proj(fx), f)))
            c5.fail(where + ": canonical square does not commute");
        });
        if (!c5.passed()) continue;
        for (const auto& z : objs) {
          std::vector<typename CS::morphism_type> gs;
          detail::guarded(c7, where, [&] { gs = cs.hom(z, y); });
          for (const auto& g : gs)
            detail::guarded(c7, where + ", g = " + describe(g), [&] {
              ++c7.checked;
              const auto gf = cs.compose(g, f);
              const auto fx = cs.star(f, x);
              if (!(cs.star(gf, x) == cs.star(g, fx)))
                c7.fail(where + ", g = " + describe(g) + ": (g;f)*X != g*(f*X)");
              else if (!(cs.q(gf, x) == cs.compose(cs.q(g, fx), cs.q(f, x))))
                c7.fail(where + ", g = " + describe(g) + ": q(g;f,X) != q(g,f*X);q(f,X)");
            });
        }
      }
    }
  }
  r.add(std::move(c5));
  r.add(std::move(c6));
  r.add(std::move(c7));

  Report typing("typing");
  for (const auto& x : objs)
    detail::guarded(typing, "X = " + describe(x), [&] {
      ++typing.checked;
      const auto p = cs.proj(x);
      if (!(cs.dom(p) == x) || !(cs.cod(p) == cs.ft(x))) typing.fail("p_X for X = " + describe(x) + " is " + describe(p));
    });
  r.add(std::move(typing));
  return r;
}

/// Identity and associativity laws on the fragment, for carriers that are
/// not string-based computable categories.
template <class CS>
Report validate_carrier_generic(const CS& cs, std::size_t bound) {
  Report r("carrier");
  const auto objs = cs.objects_up_to(bound);
  std::vector<std::vector<std::vector<typename CS::morphism_type>>> homs(objs.size());
  for (std::size_t a = 0; a < objs.size(); ++a)
    for (std::size_t b = 0; b < objs.size(); ++b) homs[a].push_back(cs.hom(objs[a], objs[b]));
  for (std::size_t a = 0; a < objs.size(); ++a)
    for (std::size_t b = 0; b < objs.size(); ++b)
      for (const auto& f : homs[a][b]) {
        r.checked += 2;
        if (!(cs.compose(cs.identity(objs[a]), f) == f) || !(cs.compose(f, cs.identity(objs[b])) == f))
          r.fail("identity law fails for " + describe(f));
        for (std::size_t c = 0; c < objs.size(); ++c)
          for (const auto& g : homs[b][c]) {
            const auto fg = cs.compose(f, g);
            for (std::size_t d = 0; d < objs.size(); ++d)
              for (const auto& h : homs[c][d]) {
                ++r.checked;
                if (!(cs.compose(fg, h) == cs.compose(f, cs.compose(g, h))))
                  r.fail("associativity fails for (" + describe(f) + ", " + describe(g) + ", " + describe(h) + ")");
              }
          }
      }
  return r;
}

/// Carrier laws, the C0 conditions and conditions 1-4 of the section
/// operation. Condition 4 ranges over the presentations X = g*U visible in
/// the fragment.
template <class CS>
Report validate_csystem(const CS& cs, std::size_t bound) {
  Report r("csystem");
  if constexpr (std::is_base_of_v<ComputableCategory, CS>) {
    Report carrier("carrier");
    detail::guarded(carrier, "fragment", [&] {
      auto rep = validate_finite_category(probe_fragment(cs, bound));
      rep.name = "carrier";
      carrier = std::move(rep);
    });
    r.add(std::move(carrier));
  } else {
    r.add(validate_carrier_generic(cs, bound));
  }
  r.add(validate_c0(cs, bound));
  if (!r.passed()) return r;

  const auto objs = cs.objects_up_to(bound);
  const auto pos = detail::positive(cs, bound);
  Report s1("section_1"), s2("section_2"), s3("section_3"), s4("section_4");
  for (const auto& x : pos)
    for (const auto& y : objs)
      for (const auto& f : cs.hom(y, x)) {
        const auto where = "f = " + describe(f);
        detail::guarded(s1, where, [&] {
          ++s1.checked;
          const auto ftf = cs.compose(f, cs.proj(x));
          const auto base = cs.star(ftf, x);
          const auto s = cs.section(f);
          if (!(cs.dom(s) == y) || !(cs.cod(s) == base)) {
            s1.fail(where + ": s_f is " + describe(s) + ", expected codomain " + describe(base));
            return;
          }
          ++s2.checked;
          if (!(cs.compose(s, cs.proj(base)) == cs.identity(y))) s2.fail(where + ": s_f;p is not the identity");
          ++s3.checked;
          if (!(cs.compose(s, cs.q(ftf, x)) == f)) s3.fail(where + ": s_f;q(ft f, X) != f");
        });
      }
  s4.notes.push_back("checked over fragment presentations");
  if (s1.passed())
    for (const auto& x : pos)
      for (const auto& u : pos) {
        if (cs.length(u) != cs.length(x)) continue;
        std::vector<typename CS::morphism_type> gs;
        detail::guarded(s4, "X = " + describe(x), [&] { gs = cs.hom(cs.ft(x), cs.ft(u)); });
        for (const auto& g : gs) {
          bool presents = false;
          detail::guarded(s4, "g = " + describe(g), [&] { presents = cs.star(g, u) == x; });
          if (!presents) continue;
          for (const auto& y : objs)
            for (const auto& f : cs.hom(y, x)) {
              const auto where = "X = g*U with g = " + describe(g) + ", f = " + describe(f);
              detail::guarded(s4, where, [&] {
                ++s4.checked;
                if (!(cs.section(f) == cs.section(cs.compose(f, cs.q(g, u))))) s4.fail(where + ": s_f != s_{f;q(g,U)}");
              });
            }
        }
      }
  r.add(std::move(s1));
  r.add(std::move(s2));
  r.add(std::move(s3));
  r.add(std::move(s4));
  return r;
}

/// A homomorphism given by its object and morphism maps.
template <class Src, class Dst>
struct CSystemHom {
  const Src* source = nullptr;
  const Dst* target = nullptr;
  std::function<typename Dst::object_type(const typename Src::object_type&)> on_object;
  std::function<typename Dst::morphism_type(const typename Src::morphism_type&)> on_morphism;
};

/// The homomorphism equations and functoriality on the source fragment.
template <class Src, class Dst>
Report validate_homomorphism(const CSystemHom<Src, Dst>& h, std::size_t bound) {
  const auto& S = *h.source;
  const auto& T = *h.target;
  Report r("homomorphism");
  const auto objs = S.objects_up_to(bound);

  Report len("length"), ft("ft"), pt("pt"), proj("proj"), star("star"), q("q"), sec("section"), fun("functor");
  detail::guarded(pt, "pt", [&] {
    ++pt.checked;
    if (!(h.on_object(S.pt()) == T.pt())) pt.fail("h(pt) = " + describe(h.on_object(S.pt())));
  });
  for (const auto& x : objs) {
    const auto where = "X = " + describe(x);
    detail::guarded(len, where, [&] {
      ++len.checked;
      if (T.length(h.on_object(x)) != S.length(x))
        len.fail(where + ": l(h X) = " + std::to_string(T.length(h.on_object(x))) + ", l(X) = " + std::to_string(S.length(x)));
    });
    detail::guarded(ft, where, [&] {
      ++ft.checked;
      if (!(h.on_object(S.ft(x)) == T.ft(h.on_object(x)))) ft.fail(where + ": h(ft X) != ft(h X)");
    });
    detail::guarded(proj, where, [&] {
      ++proj.checked;
      if (!(h.on_morphism(S.proj(x)) == T.proj(h.on_object(x)))) proj.fail(where + ": h(p_X) != p_{hX}");
    });
    detail::guarded(fun, where, [&] {
      ++fun.checked;
      if (!(h.on_morphism(S.identity(x)) == T.identity(h.on_object(x)))) fun.fail(where + ": identity not preserved");
    });
  }
  for (const auto& a : objs)
    for (const auto& b : objs)
      for (const auto& f : S.hom(a, b)) {
        const auto where = "f = " + describe(f);
        detail::guarded(fun, where, [&] {
          ++fun.checked;
          const auto hf = h.on_morphism(f);
          if (!(T.dom(hf) == h.on_object(a)) || !(T.cod(hf) == h.on_object(b))) fun.fail(where + ": endpoints not preserved");
        });
        if (S.length(b) > 0)
          detail::guarded(sec, where, [&] {
            ++sec.checked;
            if (!(h.on_morphism(S.section(f)) == T.section(h.on_morphism(f)))) sec.fail(where + ": h(s_f) != s_{hf}");
          });
        for (const auto& c : objs)
          for (const auto& g : S.hom(b, c))
            detail::guarded(fun, where + ", g = " + describe(g), [&] {
              ++fun.checked;
              if (!(h.on_morphism(S.compose(f, g)) == T.compose(h.on_morphism(f), h.on_morphism(g))))
                fun.fail(where + ", g = " + describe(g) + ": composition not preserved");
            });
        for (const auto& x : objs) {
          if (S.length(x) == 0 || !(S.ft(x) == b)) continue;
          const auto wx = where + ", X = " + describe(x);
          detail::guarded(star, wx, [&] {
            ++star.checked;
            if (!(h.on_object(S.star(f, x)) == T.star(h.on_morphism(f), h.on_object(x)))) star.fail(wx + ": h(f*X) != h(f)*h(X)");
          });
          detail::guarded(q, wx, [&] {
            ++q.checked;
            if (!(h.on_morphism(S.q(f, x)) == T.q(h.on_morphism(f), h.on_object(x)))) q.fail(wx + ": h(q(f,X)) != q(hf,hX)");
          });
        }
      }
  for (auto* c : {&len, &ft, &pt, &proj, &star, &q, &sec, &fun}) r.add(std::move(*c));
  return r;
}

/// The identity homomorphism of a C-system.
template <class CS>
CSystemHom<CS, CS> identity_hom(const CS& cs) {
  return {&cs, &cs, [](const auto& x) { return x; }, [](const auto& f) { return f; }};
}

}  // namespace cstrict
