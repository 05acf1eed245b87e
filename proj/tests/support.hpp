#pragma once

// Fixtures, the random corpus and brute-force oracles shared by the unit
// tests and the acceptance runner. The oracles work from definitions:
// they never call the delay automaton, the equivalence table or the
// Smith decomposition.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hrg/io.hpp"
#include "hrg/kgraph.hpp"
#include "hrg/lattice.hpp"
#include "hrg/periodicity.hpp"
#include "hrg/transforms.hpp"

namespace hrg::testing {

inline KGraph example_graph(std::string const& name) { return KGraph(parse_kgraph(example_text(name))); }

inline QGraph example_qgraph(std::string const& name) { return parse_qgraph(example_text(name)); }

inline std::vector<std::string> kgraph_examples() {
  return {"sims", "E", "two-loops", "two-cycle", "commuting", "disjoint", "tail"};
}

inline Path path_of(KGraph const& g, std::vector<std::string> const& names, std::string const& at) {
  std::vector<EdgeId> ids;
  for (auto const& n : names) ids.push_back(*g.skeleton().find_edge(n));
  return g.normalize(ids, *g.skeleton().find_vertex(at));
}

inline std::int64_t total(Degree const& d) { return std::accumulate(d.begin(), d.end(), std::int64_t{0}); }

// ---------------------------------------------------------------------------
// Random single-vertex 2-graphs
// ---------------------------------------------------------------------------

struct CorpusEntry {
  std::vector<int> sizes;
  std::vector<std::vector<int>> squares;
  Skeleton skeleton;
};

inline CorpusEntry random_single_vertex(std::mt19937& rng, int max_size = 3) {
  std::uniform_int_distribution<int> size(1, max_size);
  std::vector<int> sizes{size(rng), size(rng)};
  std::vector<int> perm(static_cast<std::size_t>(sizes[0] * sizes[1]));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<int>> squares{perm};
  return {sizes, squares, single_vertex_fixture(2, sizes, squares)};
}

inline std::vector<CorpusEntry> corpus(std::size_t n, std::uint32_t seed = 20240611u) {
  std::mt19937 rng(seed);
  std::vector<CorpusEntry> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_single_vertex(rng));
  return out;
}

// ---------------------------------------------------------------------------
// Path oracles
// ---------------------------------------------------------------------------

/// Every edge word equivalent to `word` under the squares read in both
/// directions.
inline std::set<std::vector<EdgeId>> word_class(Skeleton const& s, std::vector<EdgeId> const& word) {
  std::map<std::pair<EdgeId, EdgeId>, std::pair<EdgeId, EdgeId>> swap;
  for (auto const& sq : s.squares) {
    swap[{sq.a, sq.b}] = {sq.b_prime, sq.a_prime};
    swap[{sq.b_prime, sq.a_prime}] = {sq.a, sq.b};
  }
  std::set<std::vector<EdgeId>> seen{word};
  std::vector<std::vector<EdgeId>> todo{word};
  while (!todo.empty()) {
    auto w = todo.back();
    todo.pop_back();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      auto it = swap.find({w[i], w[i + 1]});
      if (it == swap.end()) continue;
      auto next = w;
      next[i] = it->second.first;
      next[i + 1] = it->second.second;
      if (seen.insert(next).second) todo.push_back(next);
    }
  }
  return seen;
}

/// The colour-sorted member of the word's class.
inline std::optional<std::vector<EdgeId>> sorted_member(Skeleton const& s, std::vector<EdgeId> const& word) {
  for (auto const& w : word_class(s, word)) {
    bool sorted = true;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) sorted = sorted && s.edges[w[i]].color <= s.edges[w[i + 1]].color;
    if (sorted) return w;
  }
  return std::nullopt;
}

/// Colour-sorted composable words of degree n with range v, by plain
/// recursion over edges.
inline std::size_t brute_path_count(Skeleton const& s, Degree const& n, VertexId v) {
  std::vector<int> colors;
  for (std::size_t i = 0; i < n.size(); ++i) colors.insert(colors.end(), static_cast<std::size_t>(n[i]), static_cast<int>(i + 1));
  std::size_t count = 0;
  auto rec = [&](auto&& self, std::size_t pos, VertexId at) -> void {
    if (pos == colors.size()) {
      ++count;
      return;
    }
    for (auto const& e : s.edges) {
      if (e.color == colors[pos] && e.range == at) self(self, pos + 1, e.source);
    }
  };
  rec(rec, 0, v);
  return count;
}

// ---------------------------------------------------------------------------
// Equivalence oracle
// ---------------------------------------------------------------------------

/// Largest uniform depth (d, ..., d) <= target whose path count at every
/// vertex stays within budget.
inline Degree oracle_depth(KGraph const& g, std::int64_t target, std::size_t budget) {
  std::size_t const k = static_cast<std::size_t>(g.rank());
  for (std::int64_t d = target; d > 1; --d) {
    Degree const D(k, d);
    bool ok = true;
    for (std::size_t v = 0; v < g.vertex_count() && ok; ++v) ok = g.count_paths(D, static_cast<VertexId>(v)) <= budget;
    if (ok) return D;
  }
  return Degree(k, 1);
}

/// mu ~ nu tested on every lambda of degree D straight from the definition:
/// (mu lambda)(0, w + D) = (nu lambda)(0, w + D) with w = d(mu) ∧ d(nu).
/// Signatures are cached per (path, w).
class BruteEquivalence {
 public:
  BruteEquivalence(KGraph const& g, Degree depth) : g_(g), depth_(std::move(depth)) {}

  Degree const& depth() const { return depth_; }

  bool operator()(Path const& mu, Path const& nu) {
    if (mu.source != nu.source || mu.range != nu.range) return false;
    Degree const w = meet(mu.degree, nu.degree);
    return signature(mu, w) == signature(nu, w);
  }

 private:
  std::vector<Path> const& signature(Path const& mu, Degree const& w) {
    auto key = std::make_pair(mu, w);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Path> sig;
    Degree const zero(depth_.size(), 0);
    g_.for_each_path(depth_, mu.source, [&](Path const& lambda) {
      sig.push_back(g_.segment(g_.compose(mu, lambda), zero, w + depth_));
    });
    return cache_.emplace(key, std::move(sig)).first->second;
  }

  KGraph const& g_;
  Degree depth_;
  std::map<std::pair<Path, Degree>, std::vector<Path>> cache_;
};

/// sigma^m x = sigma^n x tested on every lambda of degree (m ∨ n) + D at v:
/// lambda(m, m + D) = lambda(n, n + D).
inline bool direct_shift_equal(KGraph const& g, VertexId v, Degree const& m, Degree const& n, Degree const& depth) {
  bool ok = true;
  g.for_each_path(join(m, n) + depth, v, [&](Path const& lambda) {
    if (ok && g.segment(lambda, m, m + depth) != g.segment(lambda, n, n + depth)) ok = false;
  });
  return ok;
}

// ---------------------------------------------------------------------------
// Lattice oracles
// ---------------------------------------------------------------------------

/// |Z^k / H| for H spanned by the columns of a (k x g), by closing the
/// generators inside (Z/M)^k where M Z^k ⊆ H. M is |det| of the first
/// nonsingular k x k column minor found. nullopt when H has infinite
/// index or M^k exceeds the limit.
inline std::optional<std::int64_t> brute_quotient_order(std::vector<std::vector<std::int64_t>> const& a,
                                                        std::int64_t limit = 3'000'000) {
  std::size_t const k = a.size();
  std::size_t const g = k ? a[0].size() : 0;
  if (g < k) return std::nullopt;
  auto det = [&](std::vector<std::size_t> const& cols) {
    // plain Laplace expansion over long double-free integers
    std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) m[r][c] = a[r][cols[c]];
    }
    auto rec = [&](auto&& self, std::vector<std::size_t> const& rows, std::vector<std::size_t> const& cs) -> std::int64_t {
      if (rows.size() == 1) return m[rows[0]][cs[0]];
      std::int64_t sum = 0;
      for (std::size_t j = 0; j < cs.size(); ++j) {
        std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
        std::vector<std::size_t> sub_cols = cs;
        sub_cols.erase(sub_cols.begin() + static_cast<std::ptrdiff_t>(j));
        std::int64_t const term = m[rows[0]][cs[j]] * self(self, sub_rows, sub_cols);
        sum += (j % 2 == 0) ? term : -term;
      }
      return sum;
    };
    std::vector<std::size_t> rows(k), cs(k);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cs.begin(), cs.end(), 0);
    return rec(rec, rows, cs);
  };
  std::int64_t modulus = 0;
  std::vector<std::size_t> cols(k);
  std::vector<bool> pick(g, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::size_t j = 0;
    for (std::size_t c = 0; c < g; ++c) {
      if (pick[c]) cols[j++] = c;
    }
    std::int64_t const d = det(cols);
    if (d != 0) {
      modulus = d < 0 ? -d : d;
      break;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  if (modulus == 0) return std::nullopt;
  std::int64_t space = 1;
  for (std::size_t i = 0; i < k; ++i) {
    space *= modulus;
    if (space > limit) return std::nullopt;
  }
  auto encode = [&](std::vector<std::int64_t> const& v) {
    std::int64_t code = 0;
    for (auto x : v) code = code * modulus + x;
    return code;
  };
  std::vector<char> seen(static_cast<std::size_t>(space), 0);
  std::vector<std::vector<std::int64_t>> todo{std::vector<std::int64_t>(k, 0)};
  seen[0] = 1;
  std::int64_t members = 1;
  while (!todo.empty()) {
    auto v = todo.back();
    todo.pop_back();
    for (std::size_t c = 0; c < g; ++c) {
      auto next = v;
      for (std::size_t r = 0; r < k; ++r) next[r] = ((next[r] + a[r][c]) % modulus + modulus) % modulus;
      auto const code = encode(next);
      if (!seen[static_cast<std::size_t>(code)]) {
        seen[static_cast<std::size_t>(code)] = 1;
        ++members;
        todo.push_back(next);
      }
    }
  }
  return space / members;
}

/// Elements of H (generated by gens) with every coordinate in [-radius,
/// radius], found by walking with steps ±gens inside a box of `walk`.
inline std::set<GDegree> box_members(std::size_t k, std::vector<GDegree> const& gens, std::int64_t radius,
                                     std::int64_t walk) {
  std::set<GDegree> seen{GDegree(k, 0)};
  std::vector<GDegree> todo{GDegree(k, 0)};
  while (!todo.empty()) {
    GDegree v = todo.back();
    todo.pop_back();
    for (auto const& h : gens) {
      for (int sign : {1, -1}) {
        GDegree next = v;
        bool inside = true;
        for (std::size_t i = 0; i < k; ++i) {
          next[i] += sign * h[i];
          inside = inside && next[i] >= -walk && next[i] <= walk;
        }
        if (inside && seen.insert(next).second) todo.push_back(next);
      }
    }
  }
  std::set<GDegree> out;
  for (auto const& v : seen) {
    if (std::all_of(v.begin(), v.end(), [&](std::int64_t x) { return x >= -radius && x <= radius; })) out.insert(v);
  }
  return out;
}

}  // namespace hrg::testing
