#include "hrg/kgraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace hrg {

Degree unit_degree(std::size_t k, int color) {
  Degree d(k, 0);
  d.at(static_cast<std::size_t>(color - 1)) = 1;
  return d;
}

std::vector<int> color_sequence(Degree const& n) {
  std::vector<int> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (std::int64_t t = 0; t < n[i]; ++t) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

std::vector<Degree> degrees_up_to(Degree const& bound) {
  std::vector<Degree> out;
  Degree cur(bound.size(), 0);
  for (;;) {
    out.push_back(cur);
    bool advanced = false;
    for (std::size_t i = bound.size(); i-- > 0;) {
      if (cur[i] < bound[i]) {
        ++cur[i];
        std::fill(cur.begin() + static_cast<std::ptrdiff_t>(i) + 1, cur.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) return out;
  }
}

// ---------------------------------------------------------------------------
// Skeleton
// ---------------------------------------------------------------------------

VertexId Skeleton::add_vertex(std::string name) {
  vertices.push_back(std::move(name));
  return static_cast<VertexId>(vertices.size() - 1);
}

EdgeId Skeleton::add_edge(std::string name, int color, VertexId range, VertexId source) {
  edges.push_back({std::move(name), color, range, source});
  return static_cast<EdgeId>(edges.size() - 1);
}

void Skeleton::add_square(EdgeId a, EdgeId b, EdgeId b_prime, EdgeId a_prime) {
  squares.push_back({a, b, b_prime, a_prime});
}

void Skeleton::add_square(std::string_view a, std::string_view b, std::string_view b_prime,
                          std::string_view a_prime) {
  auto lookup = [this](std::string_view n) {
    auto e = find_edge(n);
    if (!e) throw Error("unknown edge '" + std::string(n) + "'");
    return *e;
  };
  add_square(lookup(a), lookup(b), lookup(b_prime), lookup(a_prime));
}

std::optional<VertexId> Skeleton::find_vertex(std::string_view name) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] == name) return static_cast<VertexId>(i);
  }
  return std::nullopt;
}

std::optional<EdgeId> Skeleton::find_edge(std::string_view name) const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].name == name) return static_cast<EdgeId>(i);
  }
  return std::nullopt;
}

bool Skeleton::operator==(Skeleton const& other) const {
  if (k != other.k || vertices != other.vertices || edges.size() != other.edges.size()) return false;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto const& x = edges[i];
    auto const& y = other.edges[i];
    if (x.name != y.name || x.color != y.color || x.range != y.range || x.source != y.source) {
      return false;
    }
  }
  auto key = [](SquareRecord const& s) { return std::tuple(s.a, s.b, s.b_prime, s.a_prime); };
  std::set<std::tuple<EdgeId, EdgeId, EdgeId, EdgeId>> mine, theirs;
  for (auto const& s : squares) mine.insert(key(s));
  for (auto const& s : other.squares) theirs.insert(key(s));
  return mine == theirs;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

using EdgePair = std::pair<EdgeId, EdgeId>;

std::string pair_name(Skeleton const& s, EdgeId x, EdgeId y) {
  return s.edges[x].name + "." + s.edges[y].name;
}

bool check_structure(Skeleton const& s, ValidationReport& report) {
  std::size_t const before = report.issues.size();
  if (s.k < 1) report.add(IssueKind::Malformed, "rank k must be at least 1");
  std::set<std::string> names;
  for (auto const& v : s.vertices) {
    if (!names.insert(v).second) report.add(IssueKind::Malformed, "duplicate vertex '" + v + "'");
  }
  std::set<std::string> edge_names;
  auto const nv = static_cast<VertexId>(s.vertices.size());
  for (auto const& e : s.edges) {
    if (!edge_names.insert(e.name).second) {
      report.add(IssueKind::Malformed, "duplicate edge '" + e.name + "'");
    }
    if (e.color < 1 || e.color > s.k) {
      report.add(IssueKind::Malformed, "edge '" + e.name + "' has colour outside 1..k");
    }
    if (e.range < 0 || e.range >= nv || e.source < 0 || e.source >= nv) {
      report.add(IssueKind::Malformed, "edge '" + e.name + "' has an unknown endpoint");
    }
  }
  auto const ne = static_cast<EdgeId>(s.edges.size());
  for (auto const& sq : s.squares) {
    for (EdgeId x : {sq.a, sq.b, sq.b_prime, sq.a_prime}) {
      if (x < 0 || x >= ne) report.add(IssueKind::Malformed, "square refers to an unknown edge");
    }
  }
  return report.issues.size() == before;
}

}  // namespace

ValidationReport check_skeleton(Skeleton const& s) {
  ValidationReport report;
  if (!check_structure(s, report)) return report;
  auto const& E = s.edges;

  std::map<EdgePair, EdgePair> forward;
  std::map<EdgePair, EdgePair> backward;
  for (auto const& sq : s.squares) {
    auto const &a = E[sq.a], &b = E[sq.b], &bp = E[sq.b_prime], &ap = E[sq.a_prime];
    std::string const label = "square " + a.name + " " + b.name + " = " + bp.name + " " + ap.name;
    if (!(a.color < b.color && bp.color == b.color && ap.color == a.color)) {
      report.add(IssueKind::EndpointMismatch, label + ": colours must read i j = j i with i < j");
      continue;
    }
    if (a.source != b.range) {
      report.add(IssueKind::EndpointMismatch, label + ": " + pair_name(s, sq.a, sq.b) + " is not composable");
      continue;
    }
    if (bp.source != ap.range) {
      report.add(IssueKind::EndpointMismatch,
                 label + ": " + pair_name(s, sq.b_prime, sq.a_prime) + " is not composable");
      continue;
    }
    if (bp.range != a.range || ap.source != b.source) {
      report.add(IssueKind::EndpointMismatch, label + ": range/source of the two sides differ");
      continue;
    }
    EdgePair const key{sq.a, sq.b};
    EdgePair const val{sq.b_prime, sq.a_prime};
    auto [it, inserted] = forward.emplace(key, val);
    if (!inserted && it->second != val) {
      report.add(IssueKind::NonBijectiveSquares,
                 "pair " + pair_name(s, sq.a, sq.b) + " is assigned two different squares");
    }
    auto [jt, inserted2] = backward.emplace(val, key);
    if (!inserted2 && jt->second != key) {
      report.add(IssueKind::NonBijectiveSquares,
                 "pair " + pair_name(s, sq.b_prime, sq.a_prime) + " is the image of two squares");
    }
  }

  for (std::size_t x = 0; x < E.size(); ++x) {
    for (std::size_t y = 0; y < E.size(); ++y) {
      if (E[x].source != E[y].range) continue;
      auto const xi = static_cast<EdgeId>(x), yi = static_cast<EdgeId>(y);
      if (E[x].color < E[y].color && !forward.count({xi, yi})) {
        report.add(IssueKind::MissingSquare, "no square for " + pair_name(s, xi, yi));
      }
      if (E[x].color > E[y].color && !backward.count({xi, yi})) {
        report.add(IssueKind::NonBijectiveSquares,
                   "pair " + pair_name(s, xi, yi) + " is not the image of any square");
      }
    }
  }

  for (std::size_t v = 0; v < s.vertices.size(); ++v) {
    for (int c = 1; c <= s.k; ++c) {
      bool const has = std::any_of(E.begin(), E.end(), [&](EdgeRecord const& e) {
        return e.range == static_cast<VertexId>(v) && e.color == c;
      });
      if (!has) {
        report.add(IssueKind::SourceViolation,
                   "vertex '" + s.vertices[v] + "' receives no edge of colour " + std::to_string(c));
      }
    }
  }

  if (!report.ok() || s.k < 3) return report;

  // Hexagon condition on every composable triple of three distinct colours.
  auto exchange = [&](EdgeId x, EdgeId y) -> EdgePair {
    if (E[x].color < E[y].color) return forward.at({x, y});
    auto const& ab = backward.at({x, y});
    return ab;
  };
  for (std::size_t a = 0; a < E.size(); ++a) {
    for (std::size_t b = 0; b < E.size(); ++b) {
      if (E[a].source != E[b].range || E[a].color >= E[b].color) continue;
      for (std::size_t c = 0; c < E.size(); ++c) {
        if (E[b].source != E[c].range || E[b].color >= E[c].color) continue;
        auto const ai = static_cast<EdgeId>(a), bi = static_cast<EdgeId>(b), ci = static_cast<EdgeId>(c);
        // route 1: swap (b,c), then (a,c'), then (a',b')
        auto [c1, b1] = exchange(bi, ci);
        auto [c2, a1] = exchange(ai, c1);
        auto [b2, a2] = exchange(a1, b1);
        // route 2: swap (a,b), then (a',c), then (b',c')
        auto [b3, a3] = exchange(ai, bi);
        auto [c3, a4] = exchange(a3, ci);
        auto [c4, b4] = exchange(b3, c3);
        if (c2 != c4 || b2 != b4 || a2 != a4) {
          report.add(IssueKind::AssociativityViolation,
                     "triple " + E[a].name + "." + E[b].name + "." + E[c].name +
                         " normalises to " + E[c2].name + "." + E[b2].name + "." + E[a2].name +
                         " and " + E[c4].name + "." + E[b4].name + "." + E[a4].name);
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// KGraph
// ---------------------------------------------------------------------------

std::size_t PathHash::operator()(Path const& p) const noexcept {
  std::size_t h = static_cast<std::size_t>(p.range) * 1000003u ^ static_cast<std::size_t>(p.source);
  for (auto x : p.degree) h = h * 31u + static_cast<std::size_t>(x);
  for (auto e : p.edges) h = h * 1099511628211ull + static_cast<std::size_t>(e) + 7u;
  return h;
}

KGraph::KGraph(Skeleton skeleton) : skeleton_(std::move(skeleton)) {
  ValidationReport report = check_skeleton(skeleton_);
  if (!report.ok()) throw ValidationError(std::move(report));

  std::size_t const nv = skeleton_.vertices.size();
  std::size_t const ne = skeleton_.edges.size();
  in_by_color_.assign(nv, std::vector<std::vector<EdgeId>>(static_cast<std::size_t>(skeleton_.k)));
  in_all_.assign(nv, {});
  for (std::size_t e = 0; e < ne; ++e) {
    auto const& rec = skeleton_.edges[e];
    in_by_color_[rec.range][static_cast<std::size_t>(rec.color - 1)].push_back(static_cast<EdgeId>(e));
    in_all_[rec.range].push_back(static_cast<EdgeId>(e));
  }
  exchange_.assign(ne * ne, {-1, -1});
  for (auto const& sq : skeleton_.squares) {
    exchange_[static_cast<std::size_t>(sq.a) * ne + static_cast<std::size_t>(sq.b)] = {sq.b_prime, sq.a_prime};
    exchange_[static_cast<std::size_t>(sq.b_prime) * ne + static_cast<std::size_t>(sq.a_prime)] = {sq.a, sq.b};
  }
}

KGraph validate_kgraph(Skeleton s) { return KGraph(std::move(s)); }

std::vector<EdgeId> const& KGraph::edges_into(VertexId v, int color) const {
  return in_by_color_[v][static_cast<std::size_t>(color - 1)];
}

std::pair<EdgeId, EdgeId> KGraph::exchange(EdgeId x, EdgeId y) const {
  auto const& r = exchange_[static_cast<std::size_t>(x) * edge_count() + static_cast<std::size_t>(y)];
  if (r.first < 0) {
    throw PathError(PathErrorKind::NotComposable,
                    "no square exchanges " + edge(x).name + "." + edge(y).name);
  }
  return r;
}

Path KGraph::vertex_path(VertexId v) const {
  return Path{Degree(static_cast<std::size_t>(rank()), 0), v, v, {}};
}

Path KGraph::edge_path(EdgeId e) const {
  auto const& rec = edge(e);
  return Path{unit_degree(static_cast<std::size_t>(rank()), rec.color), rec.range, rec.source, {e}};
}

std::vector<EdgeId> KGraph::reorder(std::vector<EdgeId> word, std::vector<int> const& target) const {
  std::size_t const n = word.size();
  if (target.size() != n) throw std::invalid_argument("reorder: colour multiset mismatch");
  std::vector<std::vector<int>> slots_of_color(static_cast<std::size_t>(rank()) + 1);
  for (std::size_t t = 0; t < n; ++t) slots_of_color.at(static_cast<std::size_t>(target[t])).push_back(static_cast<int>(t));
  std::vector<std::size_t> used(slots_of_color.size(), 0);
  std::vector<int> slot(n);
  for (std::size_t t = 0; t < n; ++t) {
    auto const c = static_cast<std::size_t>(color(word[t]));
    if (used[c] >= slots_of_color[c].size()) throw std::invalid_argument("reorder: colour multiset mismatch");
    slot[t] = slots_of_color[c][used[c]++];
  }
  // Bubble sort on target slots; equal colours never cross.
  for (std::size_t pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (slot[i] > slot[i + 1]) {
        auto [y, x] = exchange(word[i], word[i + 1]);
        word[i] = y;
        word[i + 1] = x;
        std::swap(slot[i], slot[i + 1]);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return word;
}

Path KGraph::normalize(std::vector<EdgeId> const& raw, std::optional<VertexId> at) const {
  if (raw.empty()) {
    if (!at) throw PathError(PathErrorKind::NotComposable, "empty word needs a vertex");
    return vertex_path(*at);
  }
  Path p;
  p.degree.assign(static_cast<std::size_t>(rank()), 0);
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (raw[t] < 0 || static_cast<std::size_t>(raw[t]) >= edge_count()) {
      throw PathError(PathErrorKind::NotComposable, "unknown edge id", t);
    }
    if (t + 1 < raw.size() && edge(raw[t]).source != edge(raw[t + 1]).range) {
      throw PathError(PathErrorKind::NotComposable,
                      "edges " + edge(raw[t]).name + " and " + edge(raw[t + 1]).name + " do not compose",
                      t);
    }
    ++p.degree[static_cast<std::size_t>(color(raw[t]) - 1)];
  }
  if (at && *at != edge(raw.front()).range) {
    throw PathError(PathErrorKind::NotComposable, "word does not start at the given vertex", 0);
  }
  p.range = edge(raw.front()).range;
  p.source = edge(raw.back()).source;
  p.edges = reorder(raw, color_sequence(p.degree));
  return p;
}

Path KGraph::compose(Path const& lhs, Path const& rhs) const {
  if (lhs.source != rhs.range) {
    throw PathError(PathErrorKind::NotComposable, describe(lhs) + " and " + describe(rhs) + " do not compose");
  }
  if (lhs.is_vertex()) return rhs;
  if (rhs.is_vertex()) return lhs;
  Path out;
  out.degree = lhs.degree + rhs.degree;
  out.range = lhs.range;
  out.source = rhs.source;
  std::vector<EdgeId> word = lhs.edges;
  word.insert(word.end(), rhs.edges.begin(), rhs.edges.end());
  out.edges = reorder(std::move(word), color_sequence(out.degree));
  return out;
}

Path KGraph::segment(Path const& lambda, Degree const& p, Degree const& q) const {
  Degree const zero(lambda.degree.size(), 0);
  if (p.size() != lambda.degree.size() || q.size() != lambda.degree.size() || !leq(zero, p) ||
      !leq(p, q) || !leq(q, lambda.degree)) {
    throw PathError(PathErrorKind::OutOfRange,
                    "segment bounds " + to_string(p) + ".." + to_string(q) + " outside " +
                        to_string(lambda.degree));
  }
  std::vector<int> target = color_sequence(p);
  std::size_t const head = target.size();
  auto middle = color_sequence(q - p);
  std::size_t const mid = middle.size();
  target.insert(target.end(), middle.begin(), middle.end());
  auto tail = color_sequence(lambda.degree - q);
  target.insert(target.end(), tail.begin(), tail.end());
  std::vector<EdgeId> word = reorder(lambda.edges, target);

  Path out;
  out.degree = q - p;
  out.range = head == 0 ? lambda.range : edge(word[head - 1]).source;
  out.source = mid == 0 ? out.range : edge(word[head + mid - 1]).source;
  out.edges.assign(word.begin() + static_cast<std::ptrdiff_t>(head),
                   word.begin() + static_cast<std::ptrdiff_t>(head + mid));
  return out;
}

std::pair<Path, Path> KGraph::split(Path const& lambda, Degree const& p) const {
  return {segment(lambda, Degree(p.size(), 0), p), segment(lambda, p, lambda.degree)};
}

std::pair<EdgeId, Path> KGraph::shift_through(Path const& mu, EdgeId e) const {
  if (edge(e).range != mu.source) {
    throw PathError(PathErrorKind::NotComposable, describe(mu) + " and " + edge(e).name + " do not compose");
  }
  if (mu.is_vertex()) return {e, vertex_path(edge(e).source)};
  std::vector<EdgeId> word = mu.edges;
  word.push_back(e);
  std::vector<int> target{color(e)};
  auto rest = color_sequence(mu.degree);
  target.insert(target.end(), rest.begin(), rest.end());
  word = reorder(std::move(word), target);
  Path out;
  out.degree = mu.degree;
  out.range = edge(word.front()).source;
  out.source = edge(e).source;
  out.edges.assign(word.begin() + 1, word.end());
  return {word.front(), std::move(out)};
}

void KGraph::for_each_path(Degree const& n, VertexId at, std::function<void(Path const&)> const& fn) const {
  std::vector<int> const colors = color_sequence(n);
  Path current;
  current.degree = n;
  current.range = at;
  current.edges.reserve(colors.size());
  // iterative DFS keeping one cursor per depth
  std::vector<std::size_t> cursor(colors.size() + 1, 0);
  std::size_t depth = 0;
  auto source_at = [&](std::size_t d) { return d == 0 ? at : edge(current.edges[d - 1]).source; };
  if (colors.empty()) {
    current.source = at;
    fn(current);
    return;
  }
  cursor[0] = 0;
  for (;;) {
    auto const& candidates = edges_into(source_at(depth), colors[depth]);
    if (cursor[depth] < candidates.size()) {
      current.edges.push_back(candidates[cursor[depth]++]);
      ++depth;
      if (depth == colors.size()) {
        current.source = edge(current.edges.back()).source;
        fn(current);
        current.edges.pop_back();
        --depth;
      } else {
        cursor[depth] = 0;
      }
    } else {
      if (depth == 0) return;
      current.edges.pop_back();
      --depth;
    }
  }
}

std::vector<Path> KGraph::paths_of_degree(Degree const& n, std::optional<VertexId> at) const {
  if (!is_nonnegative(n) || n.size() != static_cast<std::size_t>(rank())) {
    throw PathError(PathErrorKind::OutOfRange, "degree " + to_string(n) + " is not in N^k");
  }
  std::vector<Path> out;
  auto collect = [&out](Path const& p) { out.push_back(p); };
  if (at) {
    for_each_path(n, *at, collect);
  } else {
    for (std::size_t v = 0; v < vertex_count(); ++v) for_each_path(n, static_cast<VertexId>(v), collect);
  }
  return out;
}

std::size_t KGraph::count_paths(Degree const& n, VertexId at) const {
  std::vector<int> const colors = color_sequence(n);
  std::vector<std::size_t> ways(vertex_count(), 0);
  ways[at] = 1;
  for (int c : colors) {
    std::vector<std::size_t> next(vertex_count(), 0);
    for (std::size_t v = 0; v < vertex_count(); ++v) {
      if (ways[v] == 0) continue;
      for (EdgeId e : edges_into(static_cast<VertexId>(v), c)) next[edge(e).source] += ways[v];
    }
    ways = std::move(next);
  }
  return std::accumulate(ways.begin(), ways.end(), std::size_t{0});
}

std::string KGraph::describe(Path const& p) const {
  if (p.is_vertex()) return vertex_name(p.range);
  std::string out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += '.';
    out += edge(p.edges[i]).name;
  }
  return out;
}

std::vector<std::string> KGraph::edge_names(Path const& p) const {
  std::vector<std::string> out;
  for (EdgeId e : p.edges) out.push_back(edge(e).name);
  return out;
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

namespace {

std::string loop_name(int color, int index) {
  static char const* const letters = "abcdefghijklmnopqrstuvwxyz";
  std::string name;
  name += letters[(color - 1) % 26];
  name += std::to_string(index + 1);
  return name;
}

}  // namespace

Skeleton single_vertex_fixture(int k, std::vector<int> const& sizes,
                               std::vector<std::vector<int>> const& squares) {
  if (k < 1 || sizes.size() != static_cast<std::size_t>(k)) {
    throw Error("SizeMismatch: expected " + std::to_string(k) + " colour sizes");
  }
  std::size_t const pairs = static_cast<std::size_t>(k) * static_cast<std::size_t>(k - 1) / 2;
  if (squares.size() != pairs) {
    throw Error("SizeMismatch: expected " + std::to_string(pairs) + " square permutations");
  }
  Skeleton s;
  s.k = k;
  VertexId const v = s.add_vertex("v");
  std::vector<std::vector<EdgeId>> ids(static_cast<std::size_t>(k));
  for (int c = 1; c <= k; ++c) {
    if (sizes[static_cast<std::size_t>(c - 1)] < 1) throw Error("SizeMismatch: every colour needs a loop");
    for (int t = 0; t < sizes[static_cast<std::size_t>(c - 1)]; ++t) {
      ids[static_cast<std::size_t>(c - 1)].push_back(s.add_edge(loop_name(c, t), c, v, v));
    }
  }
  std::size_t pair_index = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j, ++pair_index) {
      auto const ni = sizes[static_cast<std::size_t>(i)];
      auto const nj = sizes[static_cast<std::size_t>(j)];
      auto const& perm = squares[pair_index];
      if (perm.size() != static_cast<std::size_t>(ni * nj)) {
        throw Error("SizeMismatch: square table for colours " + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + " has wrong length");
      }
      std::vector<int> seen(perm.size(), 0);
      for (int x : perm) {
        if (x < 0 || x >= ni * nj || seen[static_cast<std::size_t>(x)]++) {
          throw Error("SizeMismatch: square table is not a permutation");
        }
      }
      for (int a = 0; a < ni; ++a) {
        for (int b = 0; b < nj; ++b) {
          int const img = perm[static_cast<std::size_t>(a * nj + b)];
          int const bp = img / ni;
          int const ap = img % ni;
          s.add_square(ids[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)],
                       ids[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)],
                       ids[static_cast<std::size_t>(j)][static_cast<std::size_t>(bp)],
                       ids[static_cast<std::size_t>(i)][static_cast<std::size_t>(ap)]);
        }
      }
    }
  }
  return s;
}

std::vector<std::vector<int>> commuting_squares(std::vector<int> const& sizes) {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t j = i + 1; j < sizes.size(); ++j) {
      std::vector<int> perm;
      for (int a = 0; a < sizes[i]; ++a) {
        for (int b = 0; b < sizes[j]; ++b) perm.push_back(b * sizes[i] + a);
      }
      out.push_back(std::move(perm));
    }
  }
  return out;
}

}  // namespace hrg
