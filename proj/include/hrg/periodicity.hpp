#pragma once

// The relation mu ~ nu (same source, mu x = nu x for every infinite path x),
// the periodicity group it generates, local periodicity at vertices and the
// graph-level predicates built on reachability.
//
// Infinite paths are never built. mu ~ nu holds iff r(mu) = r(nu) and, for
// every finite lambda at s(mu), (mu lambda)(0, d(lambda)) equals
// (nu lambda)(0, d(lambda)). Feeding lambda one edge at a time, the only
// state that matters is the pair of degree-d(mu) and degree-d(nu) tails,
// so a finite automaton decides the relation.

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hrg/kgraph.hpp"
#include "hrg/lattice.hpp"

namespace hrg {

class PrefixMismatch : public Error {
 public:
  using Error::Error;
};

struct PrefixSplit {
  Path common;
  Path mu_rest;
  Path nu_rest;
};

/// mu = w mu', nu = w nu' with d(w) = d(mu) ∧ d(nu). Throws PrefixMismatch
/// when the two prefixes of that degree differ (then mu and nu are not
/// equivalent).
PrefixSplit strip_common_prefix(KGraph const& g, Path const& mu, Path const& nu);

/// (mu lambda) and (nu lambda) disagree on their prefix of degree `at`.
struct DistinguishingExtension {
  Path extension;
  Degree at;
};

struct EquivalenceWitness {
  Path mu;
  Path nu;
  bool equivalent = false;
  std::optional<DistinguishingExtension> counterexample;
};

/// Delay-automaton decision of mu ~ nu.
EquivalenceWitness equivalent(KGraph const& g, Path const& mu, Path const& nu);

/// Partition of every path of degree <= bound into ~-classes, computed by
/// Moore-style refinement of the tail automaton.
class EquivalenceTable {
 public:
  EquivalenceTable(KGraph const& g, Degree bound);

  KGraph const& graph() const { return *graph_; }
  Degree const& bound() const { return bound_; }
  bool covers(Degree const& d) const;

  /// Paths ordered by total degree, then degree, range and edge ids.
  std::vector<Path> const& paths() const { return paths_; }
  std::size_t index_of(Path const& p) const;
  std::size_t class_of(Path const& p) const { return class_[index_of(p)]; }
  std::size_t class_of_index(std::size_t i) const { return class_[i]; }
  std::size_t class_count() const { return members_.size(); }
  std::vector<std::size_t> const& members(std::size_t cls) const { return members_[cls]; }

  /// Table lookup when both degrees are covered, the automaton otherwise.
  bool equivalent(Path const& mu, Path const& nu) const;

 private:
  KGraph const* graph_;
  Degree bound_;
  std::vector<Path> paths_;
  std::unordered_map<Path, std::size_t, PathHash> index_;
  std::vector<std::size_t> class_;
  std::vector<std::vector<std::size_t>> members_;
};

/// (m, n) in Sigma_v: every lambda in v Lambda^{m+n} has
/// lambda(m, m+n) ~ lambda(n, m+n).
bool sigma_contains(KGraph const& g, VertexId v, Degree const& m, Degree const& n);
bool sigma_contains(EquivalenceTable const& table, VertexId v, Degree const& m, Degree const& n);

struct EquivalentPair {
  Path xi;
  Path eta;
};

struct VertexPeriodicity {
  VertexId vertex = 0;
  /// Pairs m != n with m + n <= bound found in Sigma_v.
  std::vector<std::pair<Degree, Degree>> sigma;
  Subgroup per_v;
  bool sigma_matches_global = false;
  bool in_vertices_per = false;
};

struct PeriodicityReport {
  Degree bound;
  std::vector<GDegree> raw_differences;
  /// One equivalent pair per raw difference, same order.
  std::vector<EquivalentPair> witnesses;
  Subgroup group;
  std::vector<VertexPeriodicity> vertices;
  std::vector<VertexId> vertices_per;
  /// {v : Sigma_v = Sigma_Lambda} on the tested range.
  std::vector<VertexId> sigma_global_vertices;
  bool aperiodic = true;
  bool complete = false;
  std::vector<std::string> warnings;

  explicit PeriodicityReport(std::size_t k) : group(k) {}
  std::optional<EquivalentPair> first_witness() const;
};

/// Per-coordinate 2 |Lambda^0| max_i |Lambda^{e_i}|, capped.
Degree default_bound(KGraph const& g, std::int64_t cap = 3);

PeriodicityReport periodicity_group(KGraph const& g, Degree const& bound);

std::vector<VertexId> vertices_per(KGraph const& g, PeriodicityReport const& report);
std::vector<VertexId> vertices_per(EquivalenceTable const& table, Subgroup const& per);

struct AperiodicityVerdict {
  bool aperiodic = true;
  std::optional<EquivalentPair> witness;
  bool complete = false;
};

AperiodicityVerdict is_aperiodic(KGraph const& g, Degree const& bound);

/// reach[u][w] iff u Lambda w is nonempty.
std::vector<std::vector<bool>> reachability(KGraph const& g);
bool has_property_w(KGraph const& g);
bool is_cofinal(KGraph const& g);
bool is_sink_free(KGraph const& g);

}  // namespace hrg
