#include <doctest.h>

#include "support.hpp"

using namespace hrg;
using namespace hrg::testing;

namespace {

std::vector<KGraph> fixtures() {
  std::vector<KGraph> out;
  for (auto const& name : kgraph_examples()) out.push_back(example_graph(name));
  for (auto const& entry : corpus(12, 99)) out.emplace_back(entry.skeleton);
  return out;
}

/// Every composable edge word of the given length.
std::vector<std::vector<EdgeId>> words(KGraph const& g, std::size_t length) {
  std::vector<std::vector<EdgeId>> out;
  std::vector<EdgeId> w;
  auto rec = [&](auto&& self) -> void {
    if (w.size() == length) {
      out.push_back(w);
      return;
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (!w.empty() && g.edge(w.back()).source != g.edge(static_cast<EdgeId>(e)).range) continue;
      w.push_back(static_cast<EdgeId>(e));
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  return out;
}

std::vector<Path> paths_up_to(KGraph const& g, Degree const& bound) {
  std::vector<Path> out;
  for (auto const& d : degrees_up_to(bound)) {
    auto ps = g.paths_of_degree(d);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

}  // namespace

TEST_CASE("validation accepts the commuting single-vertex 2-graph") {
  Skeleton const s = single_vertex_fixture(2, {1, 1}, commuting_squares({1, 1}));
  CHECK(check_skeleton(s).ok());
  CHECK_NOTHROW(validate_kgraph(s));
}

TEST_CASE("validation reports a missing square") {
  Skeleton s = single_vertex_fixture(2, {1, 1}, commuting_squares({1, 1}));
  s.squares.clear();
  auto const report = check_skeleton(s);
  CHECK(report.has(IssueKind::MissingSquare));
  CHECK_THROWS_AS(validate_kgraph(s), ValidationError);
}

TEST_CASE("validation reports structural faults") {
  SUBCASE("duplicate square") {
    Skeleton s = single_vertex_fixture(2, {2, 1}, commuting_squares({2, 1}));
    s.squares[1] = s.squares[0];
    auto const r = check_skeleton(s);
    CHECK((r.has(IssueKind::NonBijectiveSquares) || r.has(IssueKind::MissingSquare)));
  }
  SUBCASE("endpoint mismatch") {
    Skeleton s = parse_kgraph(example_text("sims"));
    // e.a = d.f  replaced by e.a = c.f: c ends at v, not at u
    s.squares[0].b_prime = *s.find_edge("c");
    CHECK(check_skeleton(s).has(IssueKind::EndpointMismatch));
  }
  SUBCASE("source violation") {
    Skeleton s;
    s.k = 2;
    auto v = s.add_vertex("v");
    s.add_edge("e", 1, v, v);
    auto const r = check_skeleton(s);
    CHECK(r.has(IssueKind::SourceViolation));
  }
}

TEST_CASE("associativity violation found by search over k=3 families") {
  // sizes (2,2,2): one permutation of 4 pairs per colour pair
  std::vector<int> perm{0, 1, 2, 3};
  std::vector<std::vector<int>> all;
  do {
    all.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::optional<Skeleton> bad;
  std::optional<Skeleton> good;
  for (std::size_t i = 0; i < all.size() && !(bad && good); ++i) {
    for (std::size_t j = 0; j < all.size() && !(bad && good); ++j) {
      for (std::size_t l = 0; l < all.size() && !(bad && good); ++l) {
        Skeleton s = single_vertex_fixture(3, {2, 2, 2}, {all[i], all[j], all[l]});
        auto const r = check_skeleton(s);
        if (r.ok() && !good) good = s;
        if (!r.ok() && !bad) {
          CHECK(r.issues.size() >= 1);
          CHECK(std::all_of(r.issues.begin(), r.issues.end(),
                            [](ValidationIssue const& x) { return x.kind == IssueKind::AssociativityViolation; }));
          bad = s;
        }
      }
    }
  }
  REQUIRE(bad);
  REQUIRE(good);

  // independent confirmation: in a k-graph every colour order of a
  // three-colour word occurs exactly once in its square class
  auto orders_unique = [](Skeleton const& s) {
    for (std::size_t a = 0; a < s.edges.size(); ++a) {
      for (std::size_t b = 0; b < s.edges.size(); ++b) {
        for (std::size_t c = 0; c < s.edges.size(); ++c) {
          if (s.edges[a].color != 1 || s.edges[b].color != 2 || s.edges[c].color != 3) continue;
          std::map<std::vector<int>, int> seen;
          for (auto const& w : word_class(s, {static_cast<EdgeId>(a), static_cast<EdgeId>(b), static_cast<EdgeId>(c)})) {
            ++seen[{s.edges[w[0]].color, s.edges[w[1]].color, s.edges[w[2]].color}];
          }
          if (seen.size() != 6) return false;
          for (auto const& [order, n] : seen) {
            if (n != 1) return false;
          }
        }
      }
    }
    return true;
  };
  CHECK_FALSE(orders_unique(*bad));
  CHECK(orders_unique(*good));
}

TEST_CASE("single_vertex_fixture") {
  Skeleton const e = single_vertex_fixture(1, {1}, {});
  CHECK(e.vertices.size() == 1);
  CHECK(e.edges.size() == 1);
  KGraph const g(e);
  CHECK(g.count_paths({5}, 0) == 1);
  CHECK_THROWS_AS(single_vertex_fixture(2, {1}, {}), Error);
  CHECK_THROWS_AS(single_vertex_fixture(2, {1, 1}, {}), Error);

  // identity pairing a_i b_j = b_i a_j against the commuting pairing
  Skeleton const flip = single_vertex_fixture(2, {2, 2}, {{0, 1, 2, 3}});
  Skeleton const comm = single_vertex_fixture(2, {2, 2}, commuting_squares({2, 2}));
  CHECK_FALSE(flip == comm);
  KGraph const gf(flip);
  KGraph const gc(comm);
  auto const pf = periodicity_group(gf, {2, 2});
  auto const pc = periodicity_group(gc, {2, 2});
  EquivalenceTable const tf(gf, {2, 2});
  EquivalenceTable const tc(gc, {2, 2});
  bool const differ = !pf.group.same_as(pc.group) || tf.class_count() != tc.class_count();
  CHECK(differ);
}

TEST_CASE("normalize against the square-class oracle") {
  for (auto const& g : fixtures()) {
    for (std::size_t len = 0; len <= 4; ++len) {
      for (auto const& w : words(g, len)) {
        if (w.empty()) continue;
        Path const p = g.normalize(w);
        auto const expected = sorted_member(g.skeleton(), w);
        REQUIRE(expected);
        CHECK(p.edges == *expected);
        CHECK(g.normalize(p.edges) == p);
        CHECK(p.range == g.edge(w.front()).range);
        CHECK(p.source == g.edge(w.back()).source);
      }
    }
  }
}

TEST_CASE("normalize basics") {
  KGraph const g = example_graph("sims");
  EdgeId const e = *g.skeleton().find_edge("e");
  EdgeId const a = *g.skeleton().find_edge("a");
  EdgeId const d = *g.skeleton().find_edge("d");
  EdgeId const f = *g.skeleton().find_edge("f");
  CHECK(g.normalize({e}).edges == std::vector<EdgeId>{e});
  Path const v = g.normalize({}, 1);
  CHECK(v.is_vertex());
  CHECK(v.range == 1);
  CHECK(is_zero(v.degree));
  // d.f is colour 2 then colour 1; the square e a = d f gives e.a
  CHECK(g.normalize({d, f}).edges == std::vector<EdgeId>{e, a});
  try {
    g.normalize({e, f});
    FAIL("expected NotComposable");
  } catch (PathError const& err) {
    CHECK(err.kind() == PathErrorKind::NotComposable);
    // index of the left edge of the broken pair
    CHECK(err.position() == 0);
  }
}

TEST_CASE("composition laws") {
  for (auto const& g : fixtures()) {
    auto const paths = paths_up_to(g, Degree(static_cast<std::size_t>(g.rank()), 1));
    for (auto const& l : paths) {
      CHECK(g.compose(l, g.vertex_path(l.source)) == l);
      CHECK(g.compose(g.vertex_path(l.range), l) == l);
      for (auto const& m : paths) {
        if (l.source != m.range) {
          CHECK_THROWS_AS(g.compose(l, m), PathError);
          continue;
        }
        Path const lm = g.compose(l, m);
        CHECK(lm.degree == l.degree + m.degree);
        for (auto const& n : paths) {
          if (m.source != n.range) continue;
          CHECK(g.compose(lm, n) == g.compose(l, g.compose(m, n)));
        }
      }
    }
  }
}

TEST_CASE("segments and unique factorization") {
  for (auto const& g : fixtures()) {
    std::size_t const k = static_cast<std::size_t>(g.rank());
    Degree const two(k, 2);
    for (auto const& lambda : paths_up_to(g, two)) {
      Degree const zero(k, 0);
      CHECK(g.segment(lambda, zero, lambda.degree) == lambda);
      for (auto const& p : degrees_up_to(lambda.degree)) {
        Path const pp = g.segment(lambda, p, p);
        CHECK(pp.is_vertex());
        Path const head = g.segment(lambda, zero, p);
        Path const tail = g.segment(lambda, p, lambda.degree);
        CHECK(g.compose(head, tail) == lambda);
        CHECK(g.split(lambda, p) == std::make_pair(head, tail));
        for (auto const& q : degrees_up_to(lambda.degree)) {
          if (!leq(p, q)) continue;
          Path const mid = g.segment(lambda, p, q);
          CHECK(g.compose(g.compose(head, mid), g.segment(lambda, q, lambda.degree)) == lambda);
        }
        // exactly one (eta, zeta) with d(eta) = p
        std::size_t found = 0;
        for (auto const& eta : g.paths_of_degree(p, lambda.range)) {
          for (auto const& zeta : g.paths_of_degree(lambda.degree - p, eta.source)) {
            if (zeta.source == lambda.source && g.compose(eta, zeta) == lambda) ++found;
          }
        }
        CHECK(found == 1);
      }
      Degree beyond = lambda.degree;
      beyond[0] += 1;
      CHECK_THROWS_AS(g.segment(lambda, zero, beyond), PathError);
    }
  }
}

TEST_CASE("path counts") {
  for (auto const& g : fixtures()) {
    std::size_t const k = static_cast<std::size_t>(g.rank());
    auto const zero_paths = g.paths_of_degree(Degree(k, 0));
    CHECK(zero_paths.size() == g.vertex_count());
    for (auto const& n : degrees_up_to(Degree(k, 2))) {
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        auto const at = static_cast<VertexId>(v);
        auto const ps = g.paths_of_degree(n, at);
        CHECK(ps.size() == brute_path_count(g.skeleton(), n, at));
        CHECK(ps.size() == g.count_paths(n, at));
        CHECK(!ps.empty());
        for (auto const& p : degrees_up_to(n)) {
          std::size_t sum = 0;
          for (auto const& mu : g.paths_of_degree(p, at)) sum += g.count_paths(n - p, mu.source);
          CHECK(sum == ps.size());
        }
      }
    }
  }
  Skeleton const loops = single_vertex_fixture(2, {3, 1}, commuting_squares({3, 1}));
  KGraph const g(loops);
  CHECK(g.count_paths({4, 0}, 0) == 81);
}

TEST_CASE("skeleton equality ignores square order") {
  Skeleton a = parse_kgraph(example_text("sims"));
  Skeleton b = a;
  std::reverse(b.squares.begin(), b.squares.end());
  CHECK(a == b);
  b.edges[0].name = "x";
  CHECK_FALSE(a == b);
}
