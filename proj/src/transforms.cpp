#include "hrg/transforms.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

namespace hrg {

char const* transform_error_name(TransformErrorKind kind) {
  switch (kind) {
    case TransformErrorKind::PropertyWViolation: return "PropertyWViolation";
    case TransformErrorKind::VerticesPerIncomplete: return "VerticesPerIncomplete";
    case TransformErrorKind::BoundInsufficient: return "BoundInsufficient";
    case TransformErrorKind::DegreeMismatch: return "DegreeMismatch";
    case TransformErrorKind::FactorizationFailure: return "FactorizationFailure";
    case TransformErrorKind::TrivialSubgroup: return "TrivialSubgroup";
  }
  return "?";
}

TransformError::TransformError(TransformErrorKind kind, std::string const& message)
    : Error(std::string(transform_error_name(kind)) + ": " + message), kind_(kind) {}

// ---------------------------------------------------------------------------
// QGraph
// ---------------------------------------------------------------------------

std::vector<QElem> QGraph::generator_values() const {
  std::vector<QElem> out;
  for (int c = 1; c <= static_cast<int>(rank()); ++c) {
    QElem p = generator_degree(c);
    if (!p.is_zero() && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  }
  return out;
}

std::optional<VertexId> QGraph::find_vertex(std::string_view name) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] == name) return static_cast<VertexId>(i);
  }
  return std::nullopt;
}

std::optional<std::int32_t> QGraph::find_morphism(std::string_view name) const {
  for (std::size_t i = 0; i < morphisms.size(); ++i) {
    if (morphisms[i].name == name) return static_cast<std::int32_t>(i);
  }
  return std::nullopt;
}

QElem QGraph::degree_of(MorphismRef m) const { return m.is_vertex ? quotient.zero() : morphisms.at(m.index).degree; }

VertexId QGraph::range_of(MorphismRef m) const { return m.is_vertex ? m.index : morphisms.at(m.index).range; }

VertexId QGraph::source_of(MorphismRef m) const { return m.is_vertex ? m.index : morphisms.at(m.index).source; }

std::string QGraph::name_of(MorphismRef m) const {
  return m.is_vertex ? vertices.at(m.index) : morphisms.at(m.index).name;
}

std::optional<MorphismRef> QGraph::compose(MorphismRef lhs, MorphismRef rhs) const {
  if (source_of(lhs) != range_of(rhs)) return std::nullopt;
  if (lhs.is_vertex) return rhs;
  if (rhs.is_vertex) return lhs;
  for (auto const& c : compositions) {
    if (c.lhs == lhs.index && c.rhs == rhs.index) return c.result;
  }
  return std::nullopt;
}

std::vector<MorphismRef> QGraph::of_degree(QElem const& x) const {
  std::vector<MorphismRef> out;
  if (x.is_zero()) {
    for (std::size_t v = 0; v < vertices.size(); ++v) out.push_back(MorphismRef::vertex(static_cast<VertexId>(v)));
    return out;
  }
  for (std::size_t m = 0; m < morphisms.size(); ++m) {
    if (morphisms[m].degree == x) out.push_back(MorphismRef::morphism(static_cast<std::int32_t>(m)));
  }
  return out;
}

namespace {

/// All (l, r) with d(l) = p, d(r) = p' and l.r = x.
std::vector<std::pair<MorphismRef, MorphismRef>> factors(QGraph const& g, MorphismRef x, QElem const& p,
                                                         QElem const& p2) {
  std::vector<std::pair<MorphismRef, MorphismRef>> out;
  for (auto l : g.of_degree(p)) {
    if (g.range_of(l) != g.range_of(x)) continue;
    for (auto r : g.of_degree(p2)) {
      if (g.source_of(r) != g.source_of(x)) continue;
      auto c = g.compose(l, r);
      if (c && *c == x) out.emplace_back(l, r);
    }
  }
  return out;
}

std::string qname(QGraph const& g, MorphismRef m) { return g.name_of(m); }

void check_triples(QGraph const& g, std::vector<std::int32_t> const& gens, ValidationReport& report) {
  using Triple = std::array<MorphismRef, 3>;
  std::set<Triple> visited;
  auto deg = [&](MorphismRef m) { return g.degree_of(m); };
  auto value_of = [&](Triple const& t) {
    std::vector<MorphismRef> values;
    auto ab = g.compose(t[0], t[1]);
    if (ab && ab->is_vertex) values.push_back(t[2]);
    if (ab && !ab->is_vertex && std::find(gens.begin(), gens.end(), ab->index) != gens.end()) {
      if (auto v = g.compose(*ab, t[2])) values.push_back(*v);
    }
    auto bc = g.compose(t[1], t[2]);
    if (bc && bc->is_vertex) values.push_back(t[0]);
    if (bc && !bc->is_vertex && std::find(gens.begin(), gens.end(), bc->index) != gens.end()) {
      if (auto v = g.compose(t[0], *bc)) values.push_back(*v);
    }
    return values;
  };

  for (auto a : gens) {
    for (auto b : gens) {
      for (auto c : gens) {
        Triple start{MorphismRef::morphism(a), MorphismRef::morphism(b), MorphismRef::morphism(c)};
        if (g.source_of(start[0]) != g.range_of(start[1]) || g.source_of(start[1]) != g.range_of(start[2])) continue;
        if (visited.count(start)) continue;
        std::vector<Triple> cls{start};
        visited.insert(start);
        for (std::size_t i = 0; i < cls.size(); ++i) {
          for (int pos = 0; pos < 2; ++pos) {
            Triple const t = cls[i];
            auto x = g.compose(t[pos], t[pos + 1]);
            if (!x) continue;
            auto fs = factors(g, *x, deg(t[pos + 1]), deg(t[pos]));
            if (fs.size() != 1) continue;
            Triple next = t;
            next[pos] = fs[0].first;
            next[pos + 1] = fs[0].second;
            if (visited.insert(next).second) cls.push_back(next);
          }
        }
        std::map<std::vector<QElem>, int> orders;
        std::set<MorphismRef> values;
        for (auto const& t : cls) {
          ++orders[{deg(t[0]), deg(t[1]), deg(t[2])}];
          for (auto v : value_of(t)) values.insert(v);
        }
        std::vector<QElem> multiset{deg(start[0]), deg(start[1]), deg(start[2])};
        std::sort(multiset.begin(), multiset.end());
        std::size_t perms = 0;
        do {
          ++perms;
        } while (std::next_permutation(multiset.begin(), multiset.end()));
        bool const orders_ok = orders.size() == perms &&
                               std::all_of(orders.begin(), orders.end(), [](auto const& o) { return o.second == 1; });
        std::string const label = qname(g, start[0]) + "." + qname(g, start[1]) + "." + qname(g, start[2]);
        if (!orders_ok) {
          report.add(IssueKind::AssociativityViolation,
                     "triple " + label + " does not factor uniquely in every order");
        }
        if (values.size() > 1) {
          report.add(IssueKind::AssociativityViolation, "triple " + label + " composes to different morphisms");
        }
      }
    }
  }
}

}  // namespace

ValidationReport verify_qgraph(QGraph const& g) {
  ValidationReport report;
  std::set<std::string> names;
  for (auto const& v : g.vertices) {
    if (!names.insert(v).second) report.add(IssueKind::Malformed, "duplicate name " + v);
  }
  for (auto const& m : g.morphisms) {
    if (!names.insert(m.name).second) report.add(IssueKind::Malformed, "duplicate name " + m.name);
    if (!g.quotient.valid(m.degree)) {
      report.add(IssueKind::Malformed, "morphism " + m.name + " has an invalid degree " + to_string(m.degree));
    } else if (m.degree.is_zero()) {
      report.add(IssueKind::Malformed, "morphism " + m.name + " has degree 0; vertices are listed separately");
    }
    if (m.range < 0 || m.source < 0 || static_cast<std::size_t>(m.range) >= g.vertices.size() ||
        static_cast<std::size_t>(m.source) >= g.vertices.size()) {
      report.add(IssueKind::Malformed, "morphism " + m.name + " has an unknown endpoint");
    }
  }
  if (!report.ok()) return report;

  auto const values = g.generator_values();
  auto is_gen = [&](QElem const& x) { return std::find(values.begin(), values.end(), x) != values.end(); };
  std::vector<QElem> sums;
  for (auto const& p : values) {
    for (auto const& p2 : values) sums.push_back(g.quotient.add(p, p2));
  }
  std::vector<std::int32_t> gens;
  for (std::size_t m = 0; m < g.morphisms.size(); ++m) {
    auto const& d = g.morphisms[m].degree;
    if (is_gen(d)) {
      gens.push_back(static_cast<std::int32_t>(m));
    } else if (std::find(sums.begin(), sums.end(), d) == sums.end()) {
      report.add(IssueKind::DegreeMismatch, "morphism " + g.morphisms[m].name + " has degree " + to_string(d) +
                                                " which is neither a generator degree nor a sum of two");
    }
  }

  std::map<std::pair<std::int32_t, std::int32_t>, MorphismRef> table;
  auto const nm = static_cast<std::int32_t>(g.morphisms.size());
  auto const nv = static_cast<std::int32_t>(g.vertices.size());
  for (auto const& c : g.compositions) {
    if (c.lhs < 0 || c.lhs >= nm || c.rhs < 0 || c.rhs >= nm ||
        (c.result.is_vertex ? c.result.index >= nv : c.result.index >= nm) || c.result.index < 0) {
      report.add(IssueKind::Malformed, "composition refers to an unknown morphism");
      continue;
    }
    auto const& l = g.morphisms[c.lhs];
    auto const& r = g.morphisms[c.rhs];
    std::string const label = l.name + " " + r.name + " = " + g.name_of(c.result);
    if (!is_gen(l.degree) || !is_gen(r.degree)) {
      report.add(IssueKind::Malformed, "composition " + label + " is not between generator-degree morphisms");
      continue;
    }
    if (l.source != r.range) {
      report.add(IssueKind::EndpointMismatch, "composition " + label + ": s(" + l.name + ") != r(" + r.name + ")");
      continue;
    }
    QElem const sum = g.quotient.add(l.degree, r.degree);
    if (c.result.is_vertex) {
      if (!sum.is_zero()) {
        report.add(IssueKind::DegreeMismatch, "composition " + label + " has degree " + to_string(sum));
      } else if (c.result.index != l.range || c.result.index != r.source) {
        report.add(IssueKind::TorsionCollapseViolation,
                   "composition " + label + " of degree 0 must be the vertex " + g.vertices[l.range]);
      }
    } else {
      auto const& x = g.morphisms[c.result.index];
      if (sum.is_zero()) {
        report.add(IssueKind::TorsionCollapseViolation,
                   "composition " + label + " has degree 0 but is not a vertex");
      } else if (x.degree != sum) {
        report.add(IssueKind::DegreeMismatch, "composition " + label + " should have degree " + to_string(sum));
      } else if (x.range != l.range || x.source != r.source) {
        report.add(IssueKind::EndpointMismatch, "composition " + label + " has the wrong endpoints");
      }
    }
    if (!table.emplace(std::make_pair(c.lhs, c.rhs), c.result).second) {
      report.add(IssueKind::NonBijectiveSquares, "composition " + l.name + " " + r.name + " given twice");
    }
  }
  if (!report.ok()) return report;

  for (auto a : gens) {
    for (auto b : gens) {
      if (g.morphisms[a].source == g.morphisms[b].range && !table.count({a, b})) {
        report.add(IssueKind::MissingSquare,
                   "no composition for " + g.morphisms[a].name + " " + g.morphisms[b].name);
      }
    }
  }
  if (!report.ok()) return report;

  for (auto const& p : values) {
    for (auto const& p2 : values) {
      QElem const t = g.quotient.add(p, p2);
      for (auto x : g.of_degree(t)) {
        auto const fs = factors(g, x, p, p2);
        if (fs.empty()) {
          report.add(IssueKind::MissingSquare, g.name_of(x) + " has no factorization of degrees " + to_string(p) +
                                                   " + " + to_string(p2));
        } else if (fs.size() > 1) {
          report.add(IssueKind::NonBijectiveSquares, g.name_of(x) + " has " + std::to_string(fs.size()) +
                                                         " factorizations of degrees " + to_string(p) + " + " +
                                                         to_string(p2));
        }
      }
    }
  }

  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    for (auto const& p : values) {
      bool const hit = std::any_of(gens.begin(), gens.end(), [&](std::int32_t m) {
        return g.morphisms[m].degree == p && g.morphisms[m].range == static_cast<VertexId>(v);
      });
      if (!hit) {
        report.add(IssueKind::SourceViolation,
                   "vertex " + g.vertices[v] + " receives no morphism of degree " + to_string(p));
      }
    }
  }
  if (!report.ok()) return report;

  check_triples(g, gens, report);
  return report;
}

// ---------------------------------------------------------------------------
// Pushout
// ---------------------------------------------------------------------------

Skeleton restrict_to(KGraph const& g, std::vector<VertexId> const& keep) {
  Skeleton const& s = g.skeleton();
  Skeleton out;
  out.k = s.k;
  std::vector<VertexId> vmap(s.vertices.size(), -1);
  std::vector<VertexId> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  for (VertexId v : sorted) vmap[v] = out.add_vertex(s.vertices[v]);
  std::vector<EdgeId> emap(s.edges.size(), -1);
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    auto const& rec = s.edges[e];
    if (vmap[rec.range] < 0) continue;
    if (vmap[rec.source] < 0) {
      throw TransformError(TransformErrorKind::VerticesPerIncomplete,
                           "vertex set is not hereditary: edge " + rec.name + " leaves it");
    }
    emap[e] = out.add_edge(rec.name, rec.color, vmap[rec.range], vmap[rec.source]);
  }
  for (auto const& sq : s.squares) {
    if (emap[sq.a] < 0) continue;
    out.add_square(emap[sq.a], emap[sq.b], emap[sq.b_prime], emap[sq.a_prime]);
  }
  return out;
}

namespace {

PushoutResult build_pushout(KGraph const& g, PeriodicityReport const& report, bool restricted) {
  auto const k = static_cast<std::size_t>(g.rank());
  QGraph out(quotient_structure(Subgroup(k, report.group.canonical_generators())));
  QuotientMonoid const& q = out.quotient;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out.vertices.push_back(g.vertex_name(static_cast<VertexId>(v)));

  EquivalenceTable const table(g, report.bound + Degree(k, 1));
  std::map<std::size_t, MorphismRef> by_class;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    by_class[table.class_of(g.vertex_path(static_cast<VertexId>(v)))] = MorphismRef::vertex(static_cast<VertexId>(v));
  }

  auto add = [&](Path const& defining, QElem const& degree, std::string name) {
    std::size_t const cls = table.class_of(defining);
    auto const ref = MorphismRef::morphism(static_cast<std::int32_t>(out.morphisms.size()));
    if (!by_class.emplace(cls, ref).second) {
      throw TransformError(TransformErrorKind::BoundInsufficient,
                           g.describe(defining) + " is equivalent to an earlier class representative");
    }
    QMorphism m{std::move(name), degree, defining.range, defining.source, {defining}};
    for (std::size_t i : table.members(cls)) {
      if (table.paths()[i] != defining) m.representatives.push_back(table.paths()[i]);
    }
    out.morphisms.push_back(std::move(m));
  };

  std::vector<QElem> const values = out.generator_values();
  std::vector<int> chosen_color;
  for (auto const& p : values) {
    int c = 1;
    while (out.generator_degree(c) != p) ++c;
    chosen_color.push_back(c);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (g.color(static_cast<EdgeId>(e)) == c) add(g.edge_path(static_cast<EdgeId>(e)), p, g.edge(e).name);
    }
  }
  std::vector<QElem> composite;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      QElem const t = q.add(out.generator_degree(static_cast<int>(a + 1)), out.generator_degree(static_cast<int>(b + 1)));
      if (t.is_zero() || std::find(values.begin(), values.end(), t) != values.end() ||
          std::find(composite.begin(), composite.end(), t) != composite.end()) {
        continue;
      }
      composite.push_back(t);
      Degree d(k, 0);
      ++d[a];
      ++d[b];
      for (auto const& path : g.paths_of_degree(d)) add(path, t, g.describe(path));
    }
  }

  // every path of a stored degree must land in a stored class
  auto stored = [&](QElem const& t) {
    return t.is_zero() || std::find(values.begin(), values.end(), t) != values.end() ||
           std::find(composite.begin(), composite.end(), t) != composite.end();
  };
  for (std::size_t i = 0; i < table.paths().size(); ++i) {
    Path const& p = table.paths()[i];
    QElem const t = q.q(p.degree);
    if (!stored(t)) continue;
    auto it = by_class.find(table.class_of_index(i));
    if (it == by_class.end() || out.degree_of(it->second) != t) {
      throw TransformError(TransformErrorKind::BoundInsufficient,
                           "path " + g.describe(p) + " of degree " + to_string(t) + " is equivalent to no class");
    }
  }

  std::vector<std::int32_t> gens;
  for (std::size_t m = 0; m < out.morphisms.size(); ++m) {
    if (std::find(values.begin(), values.end(), out.morphisms[m].degree) != values.end()) {
      gens.push_back(static_cast<std::int32_t>(m));
    }
  }
  for (auto a : gens) {
    for (auto b : gens) {
      auto const& ma = out.morphisms[a];
      auto const& mb = out.morphisms[b];
      if (ma.source != mb.range) continue;
      Path const ab = g.compose(ma.representatives.front(), mb.representatives.front());
      out.compositions.push_back({a, b, by_class.at(table.class_of(ab))});
    }
  }

  if (restricted) {
    std::string note = "restricted to the vertices";
    for (auto const& v : out.vertices) note += " " + v;
    out.notes.push_back(note);
  }
  return PushoutResult{std::move(out), g, restricted, report};
}

}  // namespace

PushoutResult pushout(KGraph const& g, PeriodicityReport const& report) {
  if (!has_property_w(g)) {
    throw TransformError(TransformErrorKind::PropertyWViolation, "some pair of vertices has no common descendant");
  }
  if (report.vertices_per.size() == g.vertex_count()) return build_pushout(g, report, false);
  if (report.vertices_per.empty()) {
    throw TransformError(TransformErrorKind::VerticesPerIncomplete, "Lambda^0_Per is empty");
  }
  KGraph const h(restrict_to(g, report.vertices_per));
  PeriodicityReport const again = periodicity_group(h, report.bound);
  if (again.vertices_per.size() != h.vertex_count()) {
    throw TransformError(TransformErrorKind::VerticesPerIncomplete,
                         "the restriction to Lambda^0_Per still has vertices outside Lambda^0_Per");
  }
  return build_pushout(h, again, true);
}

// ---------------------------------------------------------------------------
// Pullback
// ---------------------------------------------------------------------------

PullbackResult pullback(QGraph const& gamma) {
  ValidationReport const report = verify_qgraph(gamma);
  if (!report.ok()) throw ValidationError(report);

  int const k = static_cast<int>(gamma.rank());
  Skeleton s;
  s.k = k;
  for (auto const& v : gamma.vertices) s.add_vertex(v);

  std::vector<QElem> degrees;
  for (int c = 1; c <= k; ++c) degrees.push_back(gamma.generator_degree(c));
  std::vector<MorphismRef> origin;
  std::map<std::pair<MorphismRef, int>, EdgeId> edge_of;
  for (int c = 1; c <= k; ++c) {
    QElem const& p = degrees[c - 1];
    auto const shared = std::count(degrees.begin(), degrees.end(), p) > 1;
    for (auto x : gamma.of_degree(p)) {
      std::string name = gamma.name_of(x);
      if (p.is_zero() || shared) name += "@" + std::to_string(c);
      EdgeId const e = s.add_edge(name, c, gamma.range_of(x), gamma.source_of(x));
      edge_of[{x, c}] = e;
      origin.push_back(x);
    }
  }
  for (std::size_t v = 0; v < gamma.vertices.size(); ++v) {
    for (int c = 1; c <= k; ++c) {
      bool const hit = std::any_of(s.edges.begin(), s.edges.end(), [&](EdgeRecord const& r) {
        return r.color == c && r.range == static_cast<VertexId>(v);
      });
      if (!hit) {
        throw TransformError(TransformErrorKind::DegreeMismatch,
                             "vertex " + gamma.vertices[v] + " receives no morphism of degree " +
                                 to_string(degrees[c - 1]));
      }
    }
  }

  for (std::size_t a = 0; a < s.edges.size(); ++a) {
    for (std::size_t b = 0; b < s.edges.size(); ++b) {
      int const i = s.edges[a].color;
      int const j = s.edges[b].color;
      if (i >= j || s.edges[a].source != s.edges[b].range) continue;
      auto const x = gamma.compose(origin[a], origin[b]);
      if (!x) {
        throw TransformError(TransformErrorKind::FactorizationFailure,
                             "no composition for " + s.edges[a].name + " " + s.edges[b].name);
      }
      auto const fs = factors(gamma, *x, degrees[j - 1], degrees[i - 1]);
      if (fs.size() != 1) {
        throw TransformError(TransformErrorKind::FactorizationFailure,
                             gamma.name_of(*x) + " has " + std::to_string(fs.size()) + " factorizations of degrees " +
                                 to_string(degrees[j - 1]) + " + " + to_string(degrees[i - 1]));
      }
      s.add_square(static_cast<EdgeId>(a), static_cast<EdgeId>(b), edge_of.at({fs[0].first, j}),
                   edge_of.at({fs[0].second, i}));
    }
  }
  return PullbackResult{validate_kgraph(std::move(s)), std::move(origin)};
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

namespace {

std::optional<MorphismRef> image(QGraph const& gamma, PullbackResult const& pb, Path const& p) {
  MorphismRef acc = MorphismRef::vertex(p.range);
  for (EdgeId e : p.edges) {
    auto next = gamma.compose(acc, pb.origin[e]);
    if (!next) return std::nullopt;
    acc = *next;
  }
  return acc;
}

}  // namespace

IsoCertificate canonical_iso_check(KGraph const& g, QGraph const& gamma) {
  IsoCertificate cert;
  PullbackResult const pb = pullback(gamma);
  KGraph const& p = pb.graph;
  auto fail = [&](IsoFailureKind kind, std::string msg) { cert.failures.push_back({kind, std::move(msg)}); };

  std::vector<VertexId> vmap(g.vertex_count(), -1);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    auto const w = gamma.find_vertex(g.vertex_name(static_cast<VertexId>(v)));
    if (!w) {
      fail(IsoFailureKind::NotBijective, "vertex " + g.vertex_name(static_cast<VertexId>(v)) + " has no image");
    } else {
      vmap[v] = *w;
    }
  }
  if (g.vertex_count() != gamma.vertices.size()) {
    fail(IsoFailureKind::NotBijective, "vertex counts differ");
  }
  if (!cert.ok()) return cert;

  std::map<std::pair<MorphismRef, int>, EdgeId> pb_edge;
  for (std::size_t e = 0; e < p.edge_count(); ++e) {
    pb_edge[{pb.origin[e], p.color(static_cast<EdgeId>(e))}] = static_cast<EdgeId>(e);
  }

  cert.edge_map.assign(g.edge_count(), -1);
  std::vector<int> hits(p.edge_count(), 0);
  for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
    auto const e = static_cast<EdgeId>(ei);
    int const c = g.color(e);
    Path const path = g.edge_path(e);
    QElem const deg = gamma.generator_degree(c);
    std::vector<MorphismRef> matches;
    for (auto x : gamma.of_degree(deg)) {
      if (x.is_vertex) {
        if (vmap[g.edge(e).range] == x.index && equivalent(g, path, g.vertex_path(g.edge(e).range)).equivalent) {
          matches.push_back(x);
        }
        continue;
      }
      auto const& reps = gamma.morphisms[x.index].representatives;
      if (reps.empty()) continue;
      if (std::find(reps.begin(), reps.end(), path) != reps.end() || equivalent(g, path, reps.front()).equivalent) {
        matches.push_back(x);
      }
    }
    if (matches.size() != 1) {
      fail(IsoFailureKind::NotBijective,
           "edge " + g.edge(e).name + " matches " + std::to_string(matches.size()) + " classes");
      continue;
    }
    auto it = pb_edge.find({matches[0], c});
    if (it == pb_edge.end()) {
      fail(IsoFailureKind::NotBijective, "edge " + g.edge(e).name + " has no image of colour " + std::to_string(c));
      continue;
    }
    EdgeId const img = it->second;
    cert.edge_map[ei] = img;
    ++hits[img];
    if (p.edge(img).range != vmap[g.edge(e).range] || p.edge(img).source != vmap[g.edge(e).source]) {
      fail(IsoFailureKind::NotBijective, "edge " + g.edge(e).name + " maps to " + p.edge(img).name +
                                             " with different endpoints");
    }
  }
  for (std::size_t e = 0; e < p.edge_count(); ++e) {
    if (hits[e] != 1) {
      fail(IsoFailureKind::NotBijective,
           "pullback edge " + p.edge(static_cast<EdgeId>(e)).name + " is hit " + std::to_string(hits[e]) + " times");
    }
  }
  if (!cert.ok()) return cert;

  for (auto const& sq : g.skeleton().squares) {
    ++cert.squares_checked;
    auto const [b2, a2] = p.exchange(cert.edge_map[sq.a], cert.edge_map[sq.b]);
    if (b2 != cert.edge_map[sq.b_prime] || a2 != cert.edge_map[sq.a_prime]) {
      auto const& sk = g.skeleton();
      fail(IsoFailureKind::SquareMismatch, "square " + sk.edges[sq.a].name + "." + sk.edges[sq.b].name + " = " +
                                               sk.edges[sq.b_prime].name + "." + sk.edges[sq.a_prime].name +
                                               " is not preserved");
    }
  }
  return cert;
}

PullbackPeriodicity verify_pullback_periodic(QGraph const& gamma, std::optional<Degree> bound) {
  Subgroup const& h = gamma.quotient.subgroup();
  if (h.is_trivial()) throw TransformError(TransformErrorKind::TrivialSubgroup, "H = 0");
  PullbackResult const pb = pullback(gamma);
  Degree b(gamma.rank(), 1);
  for (auto const& gen : h.canonical_generators()) {
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::max(b[i], gen[i] < 0 ? -gen[i] : gen[i]);
  }
  if (bound) b = join(b, *bound);
  PeriodicityReport const report = periodicity_group(pb.graph, b);
  PullbackPeriodicity out{h, report.group, false, false, report.complete};
  out.contained = report.group.contains_subgroup(h);
  out.strict = out.contained && !h.contains_subgroup(report.group);
  return out;
}

PushoutAperiodicity verify_pushout_aperiodic(KGraph const& g, QGraph const& gamma) {
  PushoutAperiodicity out;
  PullbackResult const pb = pullback(gamma);
  KGraph const& p = pb.graph;
  auto const k = static_cast<std::size_t>(gamma.rank());

  // lift each stored morphism to q*Gamma at the degree the pushout used
  auto lift_degree = [&](QElem const& t) -> Degree {
    Degree d(k, 0);
    if (t.is_zero()) return d;
    for (std::size_t a = 0; a < k; ++a) {
      if (gamma.generator_degree(static_cast<int>(a + 1)) == t) {
        d[a] = 1;
        return d;
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a; b < k; ++b) {
        if (gamma.quotient.add(gamma.generator_degree(static_cast<int>(a + 1)),
                               gamma.generator_degree(static_cast<int>(b + 1))) == t) {
          ++d[a];
          ++d[b];
          return d;
        }
      }
    }
    throw Error("degree " + to_string(t) + " is not stored");
  };

  struct Lifted {
    MorphismRef ref;
    Path lift;
    std::optional<Path> rep;
  };
  std::vector<Lifted> all;
  for (std::size_t v = 0; v < gamma.vertices.size(); ++v) {
    auto const ref = MorphismRef::vertex(static_cast<VertexId>(v));
    std::optional<Path> rep;
    if (auto w = g.skeleton().find_vertex(gamma.vertices[v])) rep = g.vertex_path(*w);
    all.push_back({ref, p.vertex_path(static_cast<VertexId>(v)), rep});
  }
  for (std::size_t m = 0; m < gamma.morphisms.size(); ++m) {
    auto const ref = MorphismRef::morphism(static_cast<std::int32_t>(m));
    auto const& mor = gamma.morphisms[m];
    std::optional<Path> lift;
    for (auto const& cand : p.paths_of_degree(lift_degree(mor.degree), mor.range)) {
      if (image(gamma, pb, cand) == std::optional<MorphismRef>(ref)) {
        lift = cand;
        break;
      }
    }
    if (!lift) {
      out.aperiodic = false;
      out.failures.push_back("morphism " + mor.name + " has no lift to the pullback");
      continue;
    }
    std::optional<Path> rep;
    if (!mor.representatives.empty()) rep = mor.representatives.front();
    all.push_back({ref, *lift, rep});
  }

  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (gamma.source_of(all[i].ref) != gamma.source_of(all[j].ref)) continue;
      ++out.pairs_checked;
      bool const lifted = equivalent(p, all[i].lift, all[j].lift).equivalent;
      bool const direct = all[i].rep && all[j].rep && equivalent(g, *all[i].rep, *all[j].rep).equivalent;
      if (lifted || direct) {
        out.aperiodic = false;
        out.failures.push_back(gamma.name_of(all[i].ref) + " ~ " + gamma.name_of(all[j].ref));
      }
    }
  }
  return out;
}

bool induced_path_map_check(KGraph const& g, QGraph const& gamma, Degree const& depth) {
  QuotientMonoid const& q = gamma.quotient;
  if (q.ambient_rank() != static_cast<std::size_t>(g.rank())) throw Error("rank mismatch");
  std::vector<Degree> const degrees = degrees_up_to(depth);
  EquivalenceTable const table(g, depth);
  auto const paths = g.paths_of_degree(depth);
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    for (std::size_t j = i + 1; j < degrees.size(); ++j) {
      if (q.q(degrees[i]) != q.q(degrees[j])) continue;
      for (auto const& lambda : paths) {
        Degree const zero(depth.size(), 0);
        if (!table.equivalent(g.segment(lambda, zero, degrees[i]), g.segment(lambda, zero, degrees[j]))) {
          return false;
        }
      }
    }
  }
  return true;
}

ExchangeCheck exchange_identity_check(QGraph const& gamma, PullbackResult const& pb) {
  ExchangeCheck out;
  KGraph const& p = pb.graph;
  auto const k = static_cast<std::size_t>(p.rank());
  QuotientMonoid const& q = gamma.quotient;
  std::vector<Degree> small;
  for (auto const& d : degrees_up_to(Degree(k, 2))) {
    if (std::accumulate(d.begin(), d.end(), std::int64_t{0}) <= 2) small.push_back(d);
  }
  auto find_with_image = [&](Degree const& d, VertexId range, VertexId source,
                             MorphismRef target) -> std::optional<Path> {
    for (auto const& cand : p.paths_of_degree(d, range)) {
      if (cand.source == source && image(gamma, pb, cand) == std::optional<MorphismRef>(target)) return cand;
    }
    return std::nullopt;
  };
  Degree const ones(k, 1);
  for (auto const& m : small) {
    for (auto const& n : small) {
      if (m == n || q.q(m) != q.q(n)) continue;
      for (auto const& w : degrees_up_to(ones)) {
        for (auto const& lambda : p.paths_of_degree(m + w + n)) {
          Path const l1 = p.segment(lambda, Degree(k, 0), m);
          Path const l2 = p.segment(lambda, m, m + w);
          Path const l3 = p.segment(lambda, m + w, lambda.degree);
          auto const mu = image(gamma, pb, l1);
          auto const nu = image(gamma, pb, l3);
          if (!mu || !nu) {
            out.failure = "no image for a segment of " + p.describe(lambda);
            return out;
          }
          auto const l1s = find_with_image(n, l1.range, l1.source, *mu);
          auto const l3s = find_with_image(m, l3.range, l3.source, *nu);
          if (!l1s || !l3s) {
            out.failure = "no exchanged segment for " + p.describe(lambda);
            return out;
          }
          if (p.compose(p.compose(*l1s, l2), *l3s) != lambda) {
            out.failure = "exchange fails on " + p.describe(lambda) + " with m = " + to_string(m) +
                          ", n = " + to_string(n);
            return out;
          }
          ++out.checked;
        }
      }
    }
  }
  return out;
}

}  // namespace hrg
