#pragma once

// Property checks shared by the unit tests and the acceptance runner. Each
// check tallies how many instances it looked at and keeps the first
// failure for the log.

#include <functional>
#include <memory>
#include <sstream>

#include "support.hpp"

namespace hrg::testing {

struct Tally {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::string first_failure;

  void add(bool ok, std::function<std::string()> const& what) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) first_failure = what();
  }
  bool ok() const { return failed == 0; }
  void merge(Tally const& o) {
    if (failed == 0 && o.failed > 0) first_failure = o.first_failure;
    checked += o.checked;
    failed += o.failed;
    skipped += o.skipped;
  }
};

inline std::string show(Degree const& d) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < d.size(); ++i) out << (i ? "," : "") << d[i];
  out << ')';
  return out.str();
}

/// A graph together with its table and report at a fixed bound.
struct Subject {
  Subject(std::string n, KGraph graph, Degree b)
      : name(std::move(n)), g(std::move(graph)), bound(std::move(b)), table(g, bound), report(periodicity_group(g, bound)) {}
  Subject(Subject const&) = delete;
  Subject& operator=(Subject const&) = delete;

  std::string name;
  KGraph g;
  Degree bound;
  EquivalenceTable table;
  PeriodicityReport report;

  std::size_t k() const { return static_cast<std::size_t>(g.rank()); }
};

using SubjectPtr = std::unique_ptr<Subject>;

inline std::vector<SubjectPtr> fixture_subjects(Degree const& bound2) {
  std::vector<SubjectPtr> out;
  for (auto const& name : kgraph_examples()) {
    KGraph g = example_graph(name);
    Degree b = g.rank() == 2 ? bound2 : Degree(static_cast<std::size_t>(g.rank()), 4);
    out.push_back(std::make_unique<Subject>(name, std::move(g), std::move(b)));
  }
  return out;
}

inline std::vector<SubjectPtr> corpus_subjects(std::size_t n, Degree const& bound, std::uint32_t seed = 20240611u) {
  std::vector<SubjectPtr> out;
  std::size_t i = 0;
  for (auto& entry : corpus(n, seed)) {
    std::ostringstream name;
    name << "corpus#" << i++ << " sizes=(" << entry.sizes[0] << ',' << entry.sizes[1] << ")";
    out.push_back(std::make_unique<Subject>(name.str(), KGraph(entry.skeleton), bound));
  }
  return out;
}

/// Every (m, n) with m + n <= bound.
inline std::vector<std::pair<Degree, Degree>> sum_bounded_pairs(Degree const& bound) {
  std::vector<std::pair<Degree, Degree>> out;
  for (auto const& m : degrees_up_to(bound)) {
    for (auto const& n : degrees_up_to(bound - m)) out.emplace_back(m, n);
  }
  return out;
}

inline bool sigma_lambda(Subject const& s, Degree const& m, Degree const& n) {
  for (std::size_t v = 0; v < s.g.vertex_count(); ++v) {
    if (sigma_contains(s.table, static_cast<VertexId>(v), m, n)) return true;
  }
  return false;
}

inline std::vector<Path> paths_within(KGraph const& g, Degree const& bound) {
  std::vector<Path> out;
  for (auto const& d : degrees_up_to(bound)) {
    auto ps = g.paths_of_degree(d);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

/// Largest uniform pair degree (d,...,d) <= cap with at most `limit` paths.
inline Degree pair_bound(KGraph const& g, std::int64_t cap, std::size_t limit) {
  std::size_t const k = static_cast<std::size_t>(g.rank());
  for (std::int64_t d = cap; d > 1; --d) {
    std::size_t count = 0;
    for (auto const& n : degrees_up_to(Degree(k, d))) {
      for (std::size_t v = 0; v < g.vertex_count(); ++v) count += g.count_paths(n, static_cast<VertexId>(v));
    }
    if (count <= limit) return Degree(k, d);
  }
  return Degree(k, 1);
}

// ---------------------------------------------------------------------------
// Equivalence
// ---------------------------------------------------------------------------

/// Delay automaton and table against the definition, on all pairs of
/// degree <= pairs with matching endpoints.
inline Tally automaton_vs_oracle(Subject const& s, Degree const& pairs, Degree const& depth) {
  Tally t;
  BruteEquivalence brute(s.g, depth);
  auto const ps = paths_within(s.g, pairs);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i; j < ps.size(); ++j) {
      Path const& mu = ps[i];
      Path const& nu = ps[j];
      if (mu.range != nu.range || mu.source != nu.source) continue;
      bool const fast = equivalent(s.g, mu, nu).equivalent;
      bool const slow = brute(mu, nu);
      bool const table = s.table.equivalent(mu, nu);
      t.add(fast == slow && table == slow, [&] {
        return s.name + ": " + s.g.describe(mu) + " vs " + s.g.describe(nu) + " automaton=" + std::to_string(fast) +
               " table=" + std::to_string(table) + " oracle=" + std::to_string(slow);
      });
    }
  }
  return t;
}

/// No two distinct equivalent paths of equal degree.
inline Tally uniqueness(Subject const& s) {
  Tally t;
  for (std::size_t c = 0; c < s.table.class_count(); ++c) {
    auto const& members = s.table.members(c);
    std::set<Degree> degrees;
    bool ok = true;
    for (auto i : members) ok = degrees.insert(s.table.paths()[i].degree).second && ok;
    t.add(ok, [&] { return s.name + ": class " + std::to_string(c) + " repeats a degree"; });
  }
  return t;
}

/// Reported witnesses are equivalent by the definition.
inline Tally witnesses_sound(Subject const& s, Degree const& depth) {
  Tally t;
  BruteEquivalence brute(s.g, depth);
  for (auto const& w : s.report.witnesses) {
    t.add(w.xi != w.eta && brute(w.xi, w.eta),
          [&] { return s.name + ": witness " + s.g.describe(w.xi) + " ~ " + s.g.describe(w.eta) + " fails"; });
  }
  return t;
}

// ---------------------------------------------------------------------------
// Local periodicity
// ---------------------------------------------------------------------------

/// (m, n) in Sigma_Lambda iff m - n in Per.
inline Tally sh_lambda(Subject const& s) {
  Tally t;
  for (auto const& [m, n] : sum_bounded_pairs(s.bound)) {
    bool const sigma = sigma_lambda(s, m, n);
    bool const per = s.report.group.contains(m - n);
    t.add(sigma == per, [&] {
      return s.name + ": m=" + show(m) + " n=" + show(n) + " sigma=" + std::to_string(sigma) +
             " per=" + std::to_string(per);
    });
  }
  return t;
}

/// (m, n) in Sigma_Lambda iff (m - p, n - p) in Sigma_Lambda.
inline Tally congruence(Subject const& s) {
  Tally t;
  for (auto const& [m, n] : sum_bounded_pairs(s.bound)) {
    bool const here = sigma_lambda(s, m, n);
    for (auto const& p : degrees_up_to(meet(m, n))) {
      if (is_zero(p)) continue;
      bool const there = sigma_lambda(s, m - p, n - p);
      t.add(here == there,
            [&] { return s.name + ": m=" + show(m) + " n=" + show(n) + " p=" + show(p) + " disagree"; });
    }
  }
  return t;
}

/// Per is generated by the union of the Per_v.
inline Tally per_is_union(Subject const& s) {
  Tally t;
  std::vector<GDegree> gens;
  for (auto const& vp : s.report.vertices) {
    for (auto const& h : vp.per_v.canonical_generators()) gens.push_back(h);
  }
  t.add(group_generated(s.k(), gens).same_as(s.report.group), [&] { return s.name + ": Per differs from <Per_v>"; });
  return t;
}

/// Sigma_v = Sigma_Lambda on the tested range for v in Lambda^0_Per, and
/// the sink-free converse.
inline Tally lambda0(Subject const& s) {
  Tally t;
  auto const pairs = sum_bounded_pairs(s.bound);
  std::vector<bool> matches(s.g.vertex_count(), true);
  for (auto const& [m, n] : pairs) {
    bool const global = sigma_lambda(s, m, n);
    for (std::size_t v = 0; v < s.g.vertex_count(); ++v) {
      if (sigma_contains(s.table, static_cast<VertexId>(v), m, n) != global) matches[v] = false;
    }
  }
  for (auto v : s.report.vertices_per) {
    t.add(matches[v], [&] { return s.name + ": " + s.g.vertex_name(v) + " in Lambda0_Per but Sigma_v != Sigma"; });
  }
  if (is_sink_free(s.g) && std::all_of(matches.begin(), matches.end(), [](bool b) { return b; })) {
    t.add(s.report.vertices_per.size() == s.g.vertex_count(),
          [&] { return s.name + ": sink-free with Sigma_v = Sigma everywhere but Lambda0_Per is not all of Lambda0"; });
  }
  return t;
}

/// sigma_contains against shifting paths of degree (m v n) + depth.
inline Tally sigma_vs_direct(Subject const& s, Degree const& range, std::size_t budget) {
  Tally t;
  for (auto const& [m, n] : sum_bounded_pairs(range)) {
    for (std::size_t v = 0; v < s.g.vertex_count(); ++v) {
      auto const at = static_cast<VertexId>(v);
      Degree depth = s.bound;
      while (total(depth) > 0 && s.g.count_paths(join(m, n) + depth, at) > budget) {
        auto it = std::max_element(depth.begin(), depth.end());
        --*it;
      }
      bool const fast = sigma_contains(s.table, at, m, n);
      bool const slow = direct_shift_equal(s.g, at, m, n, depth);
      t.add(fast == slow, [&] {
        return s.name + ": v=" + s.g.vertex_name(at) + " m=" + show(m) + " n=" + show(n) + " sigma=" +
               std::to_string(fast) + " direct=" + std::to_string(slow) + " at depth " + show(depth);
      });
    }
  }
  return t;
}

/// Aperiodic iff Per trivial iff every Per_v trivial, plus the direct
/// shift route: no vertex has sigma^m x = sigma^n x for m != n.
inline Tally characterizations(Subject const& s, Degree const& range, std::size_t budget) {
  Tally t;
  bool const verdict = is_aperiodic(s.g, s.bound).aperiodic;
  bool const trivial = s.report.group.is_trivial();
  bool const local = std::all_of(s.report.vertices.begin(), s.report.vertices.end(),
                                 [](VertexPeriodicity const& vp) { return vp.per_v.is_trivial(); });
  bool direct = true;
  for (auto const& [m, n] : sum_bounded_pairs(range)) {
    if (m == n || !is_zero(meet(m, n))) continue;
    for (std::size_t v = 0; v < s.g.vertex_count() && direct; ++v) {
      auto const at = static_cast<VertexId>(v);
      Degree depth = s.bound;
      while (total(depth) > 0 && s.g.count_paths(join(m, n) + depth, at) > budget) {
        auto it = std::max_element(depth.begin(), depth.end());
        --*it;
      }
      if (direct_shift_equal(s.g, at, m, n, depth)) direct = false;
    }
  }
  t.add(verdict == trivial && trivial == local && local == direct, [&] {
    return s.name + ": aperiodic=" + std::to_string(verdict) + " Per trivial=" + std::to_string(trivial) +
           " Per_v trivial=" + std::to_string(local) + " no shift coincidence=" + std::to_string(direct);
  });
  return t;
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

/// Pushouts that can be built are valid, aperiodic and pull back to the
/// original graph.
inline Tally pushout_aperiodic(Subject const& s) {
  Tally t;
  if (!has_property_w(s.g)) {
    ++t.skipped;
    return t;
  }
  std::optional<PushoutResult> result;
  try {
    result.emplace(pushout(s.g, s.report));
  } catch (TransformError const&) {
    ++t.skipped;
    return t;
  }
  auto const valid = verify_qgraph(result->qgraph);
  auto const aper = verify_pushout_aperiodic(result->source, result->qgraph);
  auto const iso = canonical_iso_check(result->source, result->qgraph);
  t.add(valid.ok() && aper.aperiodic && iso.ok(), [&] {
    std::string why = s.name + ":";
    if (!valid.ok()) why += " qgraph invalid (" + valid.summary() + ")";
    if (!aper.aperiodic) why += " pushout periodic";
    if (!iso.ok()) why += " iso certificate failed";
    return why;
  });
  return t;
}

/// H contained in Per of the pullback, for every pushout with H != 0.
inline Tally pullback_periodic(Subject const& s) {
  Tally t;
  if (s.report.group.is_trivial() || !has_property_w(s.g)) {
    ++t.skipped;
    return t;
  }
  std::optional<PushoutResult> result;
  try {
    result.emplace(pushout(s.g, s.report));
  } catch (TransformError const&) {
    ++t.skipped;
    return t;
  }
  auto const hp = verify_pullback_periodic(result->qgraph);
  t.add(hp.contained && !hp.per.is_trivial(), [&] { return s.name + ": H not contained in Per(pullback)"; });
  return t;
}

}  // namespace hrg::testing
