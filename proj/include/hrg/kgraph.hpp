#pragma once

// Finite k-graphs presented by a coloured skeleton plus commuting squares.
//
// A path is stored in colour-block normal form: all colour-1 edges first,
// then colour-2 edges, and so on. Edge sequences compose left to right, so
// s(edges[t]) = r(edges[t+1]).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrg/error.hpp"
#include "hrg/lattice.hpp"

namespace hrg {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
/// Element of N^k. Shares the representation of GDegree.
using Degree = GDegree;

Degree unit_degree(std::size_t k, int color);

struct EdgeRecord {
  std::string name;
  int color = 1;  // 1..k
  VertexId range = 0;
  VertexId source = 0;
};

/// a.b = b'.a' with colour(a) = colour(a') < colour(b) = colour(b').
struct SquareRecord {
  EdgeId a = 0;
  EdgeId b = 0;
  EdgeId b_prime = 0;
  EdgeId a_prime = 0;
};

struct Skeleton {
  int k = 1;
  std::vector<std::string> vertices;
  std::vector<EdgeRecord> edges;
  std::vector<SquareRecord> squares;

  VertexId add_vertex(std::string name);
  EdgeId add_edge(std::string name, int color, VertexId range, VertexId source);
  void add_square(EdgeId a, EdgeId b, EdgeId b_prime, EdgeId a_prime);
  /// By names; throws Error when a name is unknown.
  void add_square(std::string_view a, std::string_view b, std::string_view b_prime,
                  std::string_view a_prime);

  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;

  bool operator==(Skeleton const& other) const;
};

ValidationReport check_skeleton(Skeleton const& s);

struct Path {
  Degree degree;
  VertexId range = 0;
  VertexId source = 0;
  std::vector<EdgeId> edges;

  bool is_vertex() const { return edges.empty(); }
  bool operator==(Path const& other) const = default;
  auto operator<=>(Path const& other) const = default;
};

struct PathHash {
  std::size_t operator()(Path const& p) const noexcept;
};

enum class PathErrorKind { NotComposable, OutOfRange };

class PathError : public Error {
 public:
  PathError(PathErrorKind kind, std::string message, std::size_t position = 0)
      : Error(std::move(message)), kind_(kind), position_(position) {}
  PathErrorKind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  PathErrorKind kind_;
  std::size_t position_;
};

/// A skeleton that passed validation. Immutable.
class KGraph {
 public:
  explicit KGraph(Skeleton skeleton);  // throws ValidationError

  Skeleton const& skeleton() const { return skeleton_; }
  int rank() const { return skeleton_.k; }
  std::size_t vertex_count() const { return skeleton_.vertices.size(); }
  std::size_t edge_count() const { return skeleton_.edges.size(); }
  EdgeRecord const& edge(EdgeId e) const { return skeleton_.edges[e]; }
  std::string const& vertex_name(VertexId v) const { return skeleton_.vertices[v]; }
  int color(EdgeId e) const { return skeleton_.edges[e].color; }

  /// Edges of the given colour with range v, in id order.
  std::vector<EdgeId> const& edges_into(VertexId v, int color) const;
  /// All edges with range v, in id order.
  std::vector<EdgeId> const& edges_into(VertexId v) const { return in_all_[v]; }

  /// Exchanges an adjacent pair x.y of distinct colours for the unique
  /// pair y'.x' with colour(y') = colour(y), colour(x') = colour(x).
  std::pair<EdgeId, EdgeId> exchange(EdgeId x, EdgeId y) const;

  Path vertex_path(VertexId v) const;
  Path edge_path(EdgeId e) const;
  /// Normal form of a composable edge word. `at` names the vertex for an
  /// empty word.
  Path normalize(std::vector<EdgeId> const& raw, std::optional<VertexId> at = {}) const;
  Path compose(Path const& lhs, Path const& rhs) const;
  /// lambda(p, q).
  Path segment(Path const& lambda, Degree const& p, Degree const& q) const;
  /// (lambda(0,p), lambda(p,d(lambda))).
  std::pair<Path, Path> split(Path const& lambda, Degree const& p) const;
  /// mu.e = a.rest with d(a) = d(e); requires r(e) = s(mu).
  std::pair<EdgeId, Path> shift_through(Path const& mu, EdgeId e) const;

  /// Rearranges a composable word so that its colours read `target`
  /// (a permutation of the word's colours), using squares only.
  std::vector<EdgeId> reorder(std::vector<EdgeId> word, std::vector<int> const& target) const;

  std::vector<Path> paths_of_degree(Degree const& n, std::optional<VertexId> at = {}) const;
  void for_each_path(Degree const& n, VertexId at, std::function<void(Path const&)> const& fn) const;
  std::size_t count_paths(Degree const& n, VertexId at) const;

  /// Edge names joined by '.', or the vertex name for a vertex path.
  std::string describe(Path const& p) const;
  std::vector<std::string> edge_names(Path const& p) const;

 private:
  Skeleton skeleton_;
  std::vector<std::vector<std::vector<EdgeId>>> in_by_color_;  // [v][color-1]
  std::vector<std::vector<EdgeId>> in_all_;
  // index x * E + y -> exchanged pair, for composable pairs of distinct colours
  std::vector<std::pair<EdgeId, EdgeId>> exchange_;
};

KGraph validate_kgraph(Skeleton s);

/// Colour-block colour sequence of a degree: 1^{n1} 2^{n2} ...
std::vector<int> color_sequence(Degree const& n);

/// All degrees d with 0 <= d <= bound, in lexicographic order.
std::vector<Degree> degrees_up_to(Degree const& bound);

/// One-vertex skeleton with sizes[i] loops of colour i+1. `squares` holds one
/// permutation per colour pair i < j in lexicographic pair order; entry
/// a * sizes[j] + b maps to b' * sizes[i] + a', meaning a.b = b'.a'.
Skeleton single_vertex_fixture(int k, std::vector<int> const& sizes,
                               std::vector<std::vector<int>> const& squares);

/// The "flip" family: a.b = b.a for every pair.
std::vector<std::vector<int>> commuting_squares(std::vector<int> const& sizes);

}  // namespace hrg
