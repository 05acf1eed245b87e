#pragma once

// Graphs over a quotient monoid Z^k/H, the pushout Lambda/~ and the
// pullback q*Gamma, with the checks tying them together.
//
// A QGraph is presented like a skeleton: its morphisms are the classes of
// degree q(e_i) ("generator degrees") and of degree q(e_i) + q(e_j), and the
// composition table is stored for pairs of generator-degree morphisms only.
// Vertices are the degree-0 morphisms and are not listed as morphisms.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrg/error.hpp"
#include "hrg/kgraph.hpp"
#include "hrg/lattice.hpp"
#include "hrg/periodicity.hpp"

namespace hrg {

enum class TransformErrorKind {
  PropertyWViolation,
  VerticesPerIncomplete,
  BoundInsufficient,
  DegreeMismatch,
  FactorizationFailure,
  TrivialSubgroup,
};

char const* transform_error_name(TransformErrorKind kind);

class TransformError : public Error {
 public:
  TransformError(TransformErrorKind kind, std::string const& message);
  TransformErrorKind kind() const { return kind_; }

 private:
  TransformErrorKind kind_;
};

struct MorphismRef {
  bool is_vertex = false;
  std::int32_t index = 0;

  static MorphismRef vertex(VertexId v) { return {true, v}; }
  static MorphismRef morphism(std::int32_t m) { return {false, m}; }
  bool operator==(MorphismRef const&) const = default;
  auto operator<=>(MorphismRef const&) const = default;
};

struct QMorphism {
  std::string name;
  QElem degree;
  VertexId range = 0;
  VertexId source = 0;
  /// Members of the ~-class in the originating k-graph (pushout output only).
  std::vector<Path> representatives;
};

struct QComposition {
  std::int32_t lhs = 0;
  std::int32_t rhs = 0;
  MorphismRef result;
};

struct QGraph {
  explicit QGraph(QuotientMonoid q) : quotient(std::move(q)) {}

  QuotientMonoid quotient;
  std::vector<std::string> vertices;
  std::vector<QMorphism> morphisms;
  std::vector<QComposition> compositions;
  std::vector<std::string> notes;

  std::size_t rank() const { return quotient.ambient_rank(); }
  QElem generator_degree(int color) const { return quotient.generator_degree(static_cast<std::size_t>(color - 1)); }
  /// Distinct nonzero generator degrees, in order of first colour.
  std::vector<QElem> generator_values() const;

  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::optional<std::int32_t> find_morphism(std::string_view name) const;
  QElem degree_of(MorphismRef m) const;
  VertexId range_of(MorphismRef m) const;
  VertexId source_of(MorphismRef m) const;
  std::string name_of(MorphismRef m) const;
  /// Table lookup; vertices act as identities. nullopt when not composable
  /// or not stored.
  std::optional<MorphismRef> compose(MorphismRef lhs, MorphismRef rhs) const;
  /// Morphisms of degree x (all vertices when x = 0).
  std::vector<MorphismRef> of_degree(QElem const& x) const;
};

ValidationReport verify_qgraph(QGraph const& g);

struct PushoutResult {
  QGraph qgraph;
  /// The graph the classes live in: the input, or its restriction to
  /// the vertices in Lambda^0_Per.
  KGraph source;
  bool restricted = false;
  PeriodicityReport report;
};

PushoutResult pushout(KGraph const& g, PeriodicityReport const& report);

/// Restriction to a hereditary vertex set: the vertices and the edges with
/// range in the set.
Skeleton restrict_to(KGraph const& g, std::vector<VertexId> const& keep);

struct PullbackResult {
  KGraph graph;
  /// For each edge (gamma, e_i): gamma.
  std::vector<MorphismRef> origin;
};

PullbackResult pullback(QGraph const& gamma);

enum class IsoFailureKind { NotBijective, SquareMismatch };

struct IsoFailure {
  IsoFailureKind kind;
  std::string message;
};

struct IsoCertificate {
  /// edge of g -> edge of q*Gamma, per edge id of g.
  std::vector<EdgeId> edge_map;
  std::size_t squares_checked = 0;
  std::vector<IsoFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// lambda -> ([lambda], d(lambda)) on edges, checked against q*Gamma.
/// Gamma must carry representatives in g.
IsoCertificate canonical_iso_check(KGraph const& g, QGraph const& gamma);

struct PullbackPeriodicity {
  Subgroup h;
  Subgroup per;
  bool contained = false;
  bool strict = false;
  bool complete = false;
};

/// Per(q*Gamma) against H. Throws TransformError(TrivialSubgroup) when H = 0.
PullbackPeriodicity verify_pullback_periodic(QGraph const& gamma, std::optional<Degree> bound = {});

struct PushoutAperiodicity {
  bool aperiodic = true;
  std::size_t pairs_checked = 0;
  std::vector<std::string> failures;
};

/// Distinct morphisms of the pushout (vertices included) are never
/// equivalent, neither through their representatives in g nor through
/// their lifts to q*Gamma.
PushoutAperiodicity verify_pushout_aperiodic(KGraph const& g, QGraph const& gamma);

/// For lambda of degree `depth` and n != n' <= depth with q(n) = q(n'),
/// lambda(0, n) ~ lambda(0, n').
bool induced_path_map_check(KGraph const& g, QGraph const& gamma, Degree const& depth);

/// (mu, m)(w, p)(nu, n) = (mu, n)(w, p)(nu, m) in q*Gamma whenever
/// q(m) = q(n), for m, n of total degree <= 2 and p <= (1, ..., 1).
/// Returns the number of triples checked, or the first failure.
struct ExchangeCheck {
  std::size_t checked = 0;
  std::optional<std::string> failure;
};
ExchangeCheck exchange_identity_check(QGraph const& gamma, PullbackResult const& pb);

}  // namespace hrg
