#pragma once

// Shared vocabulary: identifiers, morphism records, error types, verification
// reports and the canonical element encoding used by every finite set value.

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace cstrict {

using json = nlohmann::json;
using ObjectId = std::string;

/// A morphism of a computable category. Equality is id equality; dom/cod are
/// carried so that structure maps can be typed without consulting the owner.
struct Morphism {
  std::string id;
  ObjectId dom;
  ObjectId cod;

  friend bool operator==(const Morphism& a, const Morphism& b) { return a.id == b.id; }
  friend auto operator<=>(const Morphism& a, const Morphism& b) { return a.id <=> b.id; }
};

inline std::string describe(const ObjectId& x) { return x; }
inline std::string describe(const Morphism& f) { return f.id + ": " + f.dom + " -> " + f.cod; }

/// Input that cannot be interpreted at all (dangling ids, bad JSON shape).
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structure map was called outside its domain (e.g. f*X with l(X) = 0).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A pipeline precondition failed; names the gate and a witness.
class GateError : public std::runtime_error {
 public:
  GateError(std::string gate, std::string witness)
      : std::runtime_error(gate + ": " + witness), gate_(std::move(gate)), witness_(std::move(witness)) {}
  const std::string& gate() const noexcept { return gate_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string gate_;
  std::string witness_;
};

enum class Verdict { pass, fail, malformed, skipped };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::malformed: return "malformed";
    case Verdict::skipped: return "skipped";
  }
  return "fail";
}

/// Machine-readable verdict of a check, with an optional witness and nested
/// sub-checks. A report fails as soon as one child fails.
struct Report {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::optional<std::string> witness;
  std::size_t checked = 0;
  std::vector<std::string> notes;
  std::vector<Report> children;

  Report() = default;
  explicit Report(std::string n) : name(std::move(n)) {}

  bool passed() const { return verdict == Verdict::pass; }

  /// Records a failure; the first witness wins.
  void fail(std::string w) {
    if (verdict == Verdict::pass) verdict = Verdict::fail;
    if (!witness) witness = std::move(w);
  }

  void malformed(std::string w) {
    verdict = Verdict::malformed;
    witness = std::move(w);
  }

  void add(Report child) {
    if (child.verdict == Verdict::malformed) {
      verdict = Verdict::malformed;
      if (!witness && child.witness) witness = child.name + ": " + *child.witness;
    } else if (child.verdict == Verdict::fail) {
      if (verdict == Verdict::pass || verdict == Verdict::skipped) verdict = Verdict::fail;
      if (!witness && child.witness) witness = child.name + ": " + *child.witness;
    }
    children.push_back(std::move(child));
  }

  /// Finds a direct child by name.
  const Report* child(std::string_view n) const {
    for (const auto& c : children)
      if (c.name == n) return &c;
    return nullptr;
  }

  json to_json() const {
    json j;
    j["name"] = name;
    j["verdict"] = std::string(to_string(verdict));
    if (witness) j["witness"] = *witness;
    if (checked) j["checked"] = checked;
    if (!notes.empty()) j["notes"] = notes;
    if (!children.empty()) {
      j["checks"] = json::array();
      for (const auto& c : children) j["checks"].push_back(c.to_json());
    }
    return j;
  }
};

/// An element of a finite set value. Atoms are arbitrary strings; pairs are
/// ordered pairs of elements. The encoding is canonical: "(a,b)" with
/// backslash escapes for the reserved characters inside atoms, so two
/// elements are equal iff their encodings are equal.
class Elem {
 public:
  Elem() = default;

  static Elem atom(std::string_view s) {
    Elem e;
    e.repr_.reserve(s.size());
    for (char c : s) {
      if (c == '(' || c == ')' || c == ',' || c == '\\') e.repr_.push_back('\\');
      e.repr_.push_back(c);
    }
    return e;
  }

  static Elem pair(const Elem& a, const Elem& b) {
    Elem e;
    e.repr_.reserve(a.repr_.size() + b.repr_.size() + 3);
    e.repr_ += '(';
    e.repr_ += a.repr_;
    e.repr_ += ',';
    e.repr_ += b.repr_;
    e.repr_ += ')';
    return e;
  }

  bool is_pair() const { return !repr_.empty() && repr_.front() == '('; }

  Elem first() const { return Elem::raw(repr_.substr(1, split() - 1)); }
  Elem second() const {
    auto k = split();
    return Elem::raw(repr_.substr(k + 1, repr_.size() - k - 2));
  }

  /// The atom's original text (unescaped). Contract: !is_pair().
  std::string text() const {
    if (is_pair()) throw ContractViolation("Elem::text on a pair " + repr_);
    std::string out;
    for (std::size_t i = 0; i < repr_.size(); ++i) {
      if (repr_[i] == '\\' && i + 1 < repr_.size()) ++i;
      out.push_back(repr_[i]);
    }
    return out;
  }

  const std::string& repr() const { return repr_; }

  friend bool operator==(const Elem&, const Elem&) = default;
  friend auto operator<=>(const Elem&, const Elem&) = default;

 private:
  static Elem raw(std::string s) {
    Elem e;
    e.repr_ = std::move(s);
    return e;
  }

  // Position of the depth-1 comma of a pair.
  std::size_t split() const {
    if (!is_pair()) throw ContractViolation("Elem projection on an atom " + repr_);
    int depth = 0;
    for (std::size_t i = 0; i < repr_.size(); ++i) {
      char c = repr_[i];
      if (c == '\\') {
        ++i;
      } else if (c == '(') {
        ++depth;
      } else if (c == ')') {
        --depth;
      } else if (c == ',' && depth == 1) {
        return i;
      }
    }
    throw ContractViolation("unbalanced element " + repr_);
  }

  std::string repr_;
};

struct ElemHash {
  std::size_t operator()(const Elem& e) const noexcept { return std::hash<std::string>{}(e.repr()); }
};

}  // namespace cstrict
