#pragma once

// Reference implementations used to cross-check the library in tests.

#include <map>
#include <queue>
#include <random>
#include <set>

#include "cstrict/cstrict.hpp"

namespace oracle {

using namespace cstrict;

// Free diagram: identities plus `edges` generating arrows with random
// transition functions. Values are atoms "o.k".
inline SetDiagram random_diagram(std::mt19937& rng, std::size_t n, std::size_t edges) {
  SetDiagram d;
  std::vector<std::size_t> size(n);
  for (std::size_t o = 0; o < n; ++o) {
    size[o] = rng() % 5;
    d.shape.add_object("o" + std::to_string(o));
    d.values.emplace_back();
    for (std::size_t k = 0; k < size[o]; ++k) d.values.back().push_back(Elem::atom(std::to_string(o) + "." + std::to_string(k)));
  }
  for (std::size_t o = 0; o < n; ++o) {
    auto id = "id" + std::to_string(o);
    d.shape.add_morphism(id, "o" + std::to_string(o), "o" + std::to_string(o));
    d.shape.set_identity("o" + std::to_string(o), id);
    d.transitions.push_back(iota_vector(size[o]));
  }
  std::size_t made = 0;
  while (made < edges) {
    auto a = rng() % n, b = rng() % n;
    if (size[a] > 0 && size[b] == 0) continue;
    d.shape.add_morphism("g" + std::to_string(made), "o" + std::to_string(a), "o" + std::to_string(b));
    std::vector<std::size_t> t(size[a]);
    for (auto& v : t) v = rng() % size[b];
    d.transitions.push_back(std::move(t));
    ++made;
  }
  return d;
}

// Connected components of the zigzag graph on cells, by breadth-first search.
inline std::set<std::set<std::pair<std::size_t, std::size_t>>> zigzag_components(const SetDiagram& d) {
  using Cell = std::pair<std::size_t, std::size_t>;
  std::map<Cell, std::vector<Cell>> adj;
  for (std::size_t o = 0; o < d.values.size(); ++o)
    for (std::size_t k = 0; k < d.values[o].size(); ++k) adj[{o, k}];
  for (std::size_t g = 0; g < d.shape.morphism_count(); ++g)
    for (std::size_t k = 0; k < d.transitions[g].size(); ++k) {
      Cell a{d.shape.dom(g), k}, b{d.shape.cod(g), d.transitions[g][k]};
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  std::set<Cell> seen;
  std::set<std::set<Cell>> out;
  for (const auto& [start, _] : adj) {
    if (seen.count(start)) continue;
    std::set<Cell> comp;
    std::queue<Cell> q;
    q.push(start);
    seen.insert(start);
    while (!q.empty()) {
      auto c = q.front();
      q.pop();
      comp.insert(c);
      for (const auto& nb : adj[c])
        if (seen.insert(nb).second) q.push(nb);
    }
    out.insert(std::move(comp));
  }
  return out;
}

}  // namespace oracle
