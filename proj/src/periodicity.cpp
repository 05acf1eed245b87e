#include "hrg/periodicity.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

namespace hrg {

namespace {

std::int64_t total(Degree const& d) { return std::accumulate(d.begin(), d.end(), std::int64_t{0}); }

bool degree_order(Degree const& a, Degree const& b) {
  auto const ta = total(a), tb = total(b);
  if (ta != tb) return ta < tb;
  return a < b;
}

struct PairHash {
  std::size_t operator()(std::pair<Path, Path> const& p) const noexcept {
    PathHash h;
    return h(p.first) * 1315423911u ^ h(p.second);
  }
};

}  // namespace

PrefixSplit strip_common_prefix(KGraph const& g, Path const& mu, Path const& nu) {
  if (mu.range != nu.range) throw PrefixMismatch("paths have different ranges");
  Degree const w = meet(mu.degree, nu.degree);
  auto [mu_head, mu_tail] = g.split(mu, w);
  auto [nu_head, nu_tail] = g.split(nu, w);
  if (mu_head != nu_head) {
    throw PrefixMismatch("prefixes " + g.describe(mu_head) + " and " + g.describe(nu_head) + " differ");
  }
  return PrefixSplit{std::move(mu_head), std::move(mu_tail), std::move(nu_tail)};
}

EquivalenceWitness equivalent(KGraph const& g, Path const& mu, Path const& nu) {
  EquivalenceWitness out{mu, nu, false, std::nullopt};
  if (mu.source != nu.source) return out;
  Path const start = g.vertex_path(mu.source);
  if (mu.range != nu.range) {
    out.counterexample = DistinguishingExtension{start, Degree(mu.degree.size(), 0)};
    return out;
  }
  PrefixSplit split;
  try {
    split = strip_common_prefix(g, mu, nu);
  } catch (PrefixMismatch const&) {
    out.counterexample = DistinguishingExtension{start, meet(mu.degree, nu.degree)};
    return out;
  }

  struct Node {
    std::pair<Path, Path> state;
    std::size_t parent;
    EdgeId input;
  };
  std::vector<Node> nodes;
  std::unordered_set<std::pair<Path, Path>, PairHash> seen;
  nodes.push_back({{split.mu_rest, split.nu_rest}, 0, -1});
  seen.insert(nodes.back().state);
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    Path const alpha = nodes[head].state.first;
    Path const beta = nodes[head].state.second;
    for (EdgeId e : g.edges_into(alpha.source)) {
      auto [a, alpha_next] = g.shift_through(alpha, e);
      auto [b, beta_next] = g.shift_through(beta, e);
      if (a != b) {
        std::vector<EdgeId> word{e};
        for (std::size_t i = head; i != 0; i = nodes[i].parent) word.push_back(nodes[i].input);
        std::reverse(word.begin(), word.end());
        Path lambda = g.normalize(word, mu.source);
        Degree at = split.common.degree + lambda.degree;
        out.counterexample = DistinguishingExtension{std::move(lambda), std::move(at)};
        return out;
      }
      std::pair<Path, Path> next{std::move(alpha_next), std::move(beta_next)};
      if (seen.insert(next).second) nodes.push_back({std::move(next), head, e});
    }
  }
  out.equivalent = true;
  return out;
}

// ---------------------------------------------------------------------------
// EquivalenceTable
// ---------------------------------------------------------------------------

EquivalenceTable::EquivalenceTable(KGraph const& g, Degree bound) : graph_(&g), bound_(std::move(bound)) {
  if (bound_.size() != static_cast<std::size_t>(g.rank()) || !is_nonnegative(bound_)) {
    throw Error("bound must be a nonnegative degree of rank k");
  }
  std::vector<Degree> degrees = degrees_up_to(bound_);
  std::stable_sort(degrees.begin(), degrees.end(), degree_order);
  for (auto const& d : degrees) {
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      g.for_each_path(d, static_cast<VertexId>(v), [this](Path const& p) { paths_.push_back(p); });
    }
  }
  index_.reserve(paths_.size());
  for (std::size_t i = 0; i < paths_.size(); ++i) index_.emplace(paths_[i], i);

  // transitions: for each input edge e at s(path), (output edge, next tail)
  std::vector<std::vector<std::pair<EdgeId, std::size_t>>> trans(paths_.size());
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    for (EdgeId e : g.edges_into(paths_[i].source)) {
      auto [a, rest] = g.shift_through(paths_[i], e);
      trans[i].emplace_back(a, index_.at(rest));
    }
  }

  std::map<std::pair<VertexId, VertexId>, std::size_t> initial;
  class_.resize(paths_.size());
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    auto key = std::make_pair(paths_[i].range, paths_[i].source);
    class_[i] = initial.emplace(key, initial.size()).first->second;
  }
  std::size_t count = initial.size();
  for (;;) {
    std::map<std::vector<std::int64_t>, std::size_t> ids;
    std::vector<std::size_t> next(paths_.size());
    std::vector<std::int64_t> sig;
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      sig.clear();
      sig.push_back(static_cast<std::int64_t>(class_[i]));
      for (auto const& [a, j] : trans[i]) {
        sig.push_back(a);
        sig.push_back(static_cast<std::int64_t>(class_[j]));
      }
      next[i] = ids.emplace(sig, ids.size()).first->second;
    }
    class_ = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }

  // renumber classes by first member
  std::vector<std::size_t> renumber(count, SIZE_MAX);
  std::size_t fresh = 0;
  for (auto& c : class_) {
    if (renumber[c] == SIZE_MAX) renumber[c] = fresh++;
    c = renumber[c];
  }
  members_.assign(fresh, {});
  for (std::size_t i = 0; i < paths_.size(); ++i) members_[class_[i]].push_back(i);
}

bool EquivalenceTable::covers(Degree const& d) const {
  return d.size() == bound_.size() && is_nonnegative(d) && leq(d, bound_);
}

std::size_t EquivalenceTable::index_of(Path const& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) throw Error("path " + graph_->describe(p) + " is not in the table");
  return it->second;
}

bool EquivalenceTable::equivalent(Path const& mu, Path const& nu) const {
  if (covers(mu.degree) && covers(nu.degree)) return class_of(mu) == class_of(nu);
  return hrg::equivalent(*graph_, mu, nu).equivalent;
}

// ---------------------------------------------------------------------------
// Local periodicity
// ---------------------------------------------------------------------------

namespace {

template <typename Eq>
bool sigma_contains_with(KGraph const& g, VertexId v, Degree const& m, Degree const& n, Eq&& eq) {
  Degree const top = m + n;
  bool ok = true;
  g.for_each_path(top, v, [&](Path const& lambda) {
    if (!ok) return;
    Path const tail_n = g.segment(lambda, m, top);
    Path const tail_m = g.segment(lambda, n, top);
    if (!eq(tail_n, tail_m)) ok = false;
  });
  return ok;
}

}  // namespace

bool sigma_contains(KGraph const& g, VertexId v, Degree const& m, Degree const& n) {
  return sigma_contains_with(g, v, m, n, [&](Path const& a, Path const& b) {
    return equivalent(g, a, b).equivalent;
  });
}

bool sigma_contains(EquivalenceTable const& table, VertexId v, Degree const& m, Degree const& n) {
  return sigma_contains_with(table.graph(), v, m, n,
                             [&](Path const& a, Path const& b) { return table.equivalent(a, b); });
}

std::optional<EquivalentPair> PeriodicityReport::first_witness() const {
  if (witnesses.empty()) return std::nullopt;
  return witnesses.front();
}

Degree default_bound(KGraph const& g, std::int64_t cap) {
  std::size_t max_color = 0;
  for (int c = 1; c <= g.rank(); ++c) {
    std::size_t n = 0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) n += g.color(static_cast<EdgeId>(e)) == c ? 1 : 0;
    max_color = std::max(max_color, n);
  }
  auto const formula = static_cast<std::int64_t>(2 * g.vertex_count() * max_color);
  return Degree(static_cast<std::size_t>(g.rank()), std::max<std::int64_t>(1, std::min(formula, cap)));
}

std::vector<VertexId> vertices_per(EquivalenceTable const& table, Subgroup const& per) {
  KGraph const& g = table.graph();
  auto const& paths = table.paths();
  std::vector<Degree> const degrees = degrees_up_to(table.bound());

  // degrees present in each class
  std::vector<std::set<Degree>> class_degrees(table.class_count());
  for (std::size_t i = 0; i < paths.size(); ++i) class_degrees[table.class_of_index(i)].insert(paths[i].degree);

  std::vector<bool> raw_ok(g.vertex_count(), true);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    auto const& xi = paths[i];
    if (!raw_ok[xi.range]) continue;
    auto const& present = class_degrees[table.class_of_index(i)];
    for (auto const& p : degrees) {
      if (per.contains(xi.degree - p) && !present.count(p)) {
        raw_ok[xi.range] = false;
        break;
      }
    }
  }

  std::vector<VertexId> out;
  for (std::size_t vi = 0; vi < g.vertex_count(); ++vi) {
    auto const v = static_cast<VertexId>(vi);
    if (!raw_ok[vi]) continue;
    bool ok = true;
    for (auto const& h : per.canonical_generators()) {
      Degree const plus = positive_part(h);
      Degree const minus = negative_part(h);
      for (auto const& [from, to] : {std::pair{plus, minus}, std::pair{minus, plus}}) {
        if (!ok) break;
        auto const targets = g.paths_of_degree(to, v);
        for (auto const& xi : g.paths_of_degree(from, v)) {
          bool const matched = std::any_of(targets.begin(), targets.end(),
                                           [&](Path const& eta) { return table.equivalent(xi, eta); });
          if (!matched) {
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> vertices_per(KGraph const& g, PeriodicityReport const& report) {
  EquivalenceTable table(g, report.bound);
  return vertices_per(table, report.group);
}

namespace {

// Exact test of g in Per via Sigma_Lambda; nullopt when the path count
// needed exceeds the budget.
std::optional<bool> in_sigma_lambda(EquivalenceTable const& table, GDegree const& g, std::size_t budget) {
  KGraph const& graph = table.graph();
  Degree const m = positive_part(g);
  Degree const n = negative_part(g);
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    if (graph.count_paths(m + n, static_cast<VertexId>(v)) > budget) return std::nullopt;
  }
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    if (sigma_contains(table, static_cast<VertexId>(v), m, n)) return true;
  }
  return false;
}

void certify(EquivalenceTable const& table, PeriodicityReport& report) {
  Subgroup const& h = report.group;
  std::size_t const k = h.ambient_rank();
  if (h.torsion_rank() < k) {
    report.complete = false;
    return;
  }
  Integer const index = h.index();
  if (index > 4096) {
    report.warnings.push_back("quotient too large to certify completeness");
    return;
  }
  std::vector<std::int64_t> torsion;
  for (auto const& d : h.invariant_factors()) torsion.push_back(d.convert_to<std::int64_t>());
  std::vector<std::int64_t> t(k, 0);
  for (;;) {
    std::size_t i = 0;
    while (i < k && ++t[i] == torsion[i]) t[i++] = 0;
    if (i == k) break;
    GDegree g(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
      GDegree f = h.basis_vector(j);
      for (std::size_t c = 0; c < k; ++c) g[c] += t[j] * f[c];
    }
    auto verdict = in_sigma_lambda(table, g, 200000);
    if (!verdict) {
      report.warnings.push_back("coset " + to_string(g) + " could not be decided within budget");
      return;
    }
    if (*verdict) {
      report.warnings.push_back("difference " + to_string(g) + " is periodic but was not found within the bound");
      return;
    }
  }
  report.complete = true;
}

}  // namespace

PeriodicityReport periodicity_group(KGraph const& g, Degree const& bound) {
  auto const k = static_cast<std::size_t>(g.rank());
  PeriodicityReport report(k);
  report.bound = bound;
  Degree const ones(k, 1);
  if (!leq(ones, bound)) report.warnings.push_back("BoundTooSmall: bound below (1,...,1)");

  EquivalenceTable table(g, bound);
  auto const& paths = table.paths();

  std::map<GDegree, std::size_t> seen_diff;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    auto const& cls = table.members(table.class_of_index(i));
    for (std::size_t j : cls) {
      if (j >= i) break;
      if (paths[j].degree == paths[i].degree) continue;
      GDegree const diff = paths[i].degree - paths[j].degree;
      if (seen_diff.emplace(diff, report.raw_differences.size()).second) {
        report.raw_differences.push_back(diff);
        report.witnesses.push_back({paths[i], paths[j]});
      }
    }
  }
  report.group = group_generated(k, report.raw_differences);
  report.aperiodic = report.group.is_trivial();

  // local periodicity on pairs with m + n <= bound
  std::vector<std::pair<Degree, Degree>> pairs;
  std::vector<Degree> const degrees = degrees_up_to(bound);
  for (auto const& m : degrees) {
    for (auto const& n : degrees) {
      if (m != n && leq(m + n, bound)) pairs.emplace_back(m, n);
    }
  }
  std::set<std::pair<Degree, Degree>> global;
  std::vector<std::set<std::pair<Degree, Degree>>> local(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexPeriodicity vp{static_cast<VertexId>(v), {}, Subgroup(k), false, false};
    std::vector<GDegree> diffs;
    for (auto const& [m, n] : pairs) {
      if (sigma_contains(table, static_cast<VertexId>(v), m, n)) {
        vp.sigma.emplace_back(m, n);
        diffs.push_back(m - n);
        local[v].emplace(m, n);
        global.emplace(m, n);
      }
    }
    vp.per_v = group_generated(k, diffs);
    report.vertices.push_back(std::move(vp));
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    report.vertices[v].sigma_matches_global = local[v] == global;
    if (report.vertices[v].sigma_matches_global) report.sigma_global_vertices.push_back(static_cast<VertexId>(v));
  }

  report.vertices_per = vertices_per(table, report.group);
  for (VertexId v : report.vertices_per) report.vertices[static_cast<std::size_t>(v)].in_vertices_per = true;
  if (report.vertices_per != report.sigma_global_vertices) {
    report.warnings.push_back("vertices_per differs from {v : Sigma_v = Sigma_Lambda} on the tested range");
  }

  certify(table, report);
  return report;
}

AperiodicityVerdict is_aperiodic(KGraph const& g, Degree const& bound) {
  PeriodicityReport report = periodicity_group(g, bound);
  return AperiodicityVerdict{report.aperiodic, report.first_witness(), report.complete};
}

// ---------------------------------------------------------------------------
// Reachability predicates
// ---------------------------------------------------------------------------

std::vector<std::vector<bool>> reachability(KGraph const& g) {
  std::size_t const n = g.vertex_count();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    std::deque<VertexId> queue{static_cast<VertexId>(u)};
    reach[u][u] = true;
    while (!queue.empty()) {
      VertexId x = queue.front();
      queue.pop_front();
      for (EdgeId e : g.edges_into(x)) {
        VertexId const s = g.edge(e).source;
        if (!reach[u][s]) {
          reach[u][s] = true;
          queue.push_back(s);
        }
      }
    }
  }
  return reach;
}

bool has_property_w(KGraph const& g) {
  auto const reach = reachability(g);
  std::size_t const n = g.vertex_count();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      bool common = false;
      for (std::size_t w = 0; w < n && !common; ++w) common = reach[u][w] && reach[v][w];
      if (!common) return false;
    }
  }
  return true;
}

bool is_cofinal(KGraph const& g) {
  auto const reach = reachability(g);
  std::size_t const n = g.vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    // greatest subset of unreached vertices in which every vertex receives
    // an edge of every colour from inside the subset
    std::vector<bool> in(n);
    for (std::size_t w = 0; w < n; ++w) in[w] = !reach[v][w];
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t w = 0; w < n; ++w) {
        if (!in[w]) continue;
        for (int c = 1; c <= g.rank(); ++c) {
          auto const& es = g.edges_into(static_cast<VertexId>(w), c);
          bool const stays = std::any_of(es.begin(), es.end(), [&](EdgeId e) { return in[g.edge(e).source]; });
          if (!stays) {
            in[w] = false;
            changed = true;
            break;
          }
        }
      }
    }
    if (std::find(in.begin(), in.end(), true) != in.end()) return false;
  }
  return true;
}

bool is_sink_free(KGraph const& g) {
  std::size_t const n = g.vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    for (int c = 1; c <= g.rank(); ++c) {
      bool emits = false;
      for (std::size_t e = 0; e < g.edge_count() && !emits; ++e) {
        auto const& rec = g.edge(static_cast<EdgeId>(e));
        emits = rec.source == static_cast<VertexId>(v) && rec.color == c;
      }
      if (!emits) return false;
    }
  }
  return true;
}

}  // namespace hrg
