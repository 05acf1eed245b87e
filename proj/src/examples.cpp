#include <map>

#include "hrg/io.hpp"

namespace hrg {

namespace {

// An arrow X -> Y in the drawing is an edge with source X and range Y.
constexpr char const* kSims = R"(# 2-graph with Per = {(2n, 0)}: ee ~ u, fg ~ v, gf ~ w
kgraph k=2
vertex u
vertex v
vertex w
# solid
edge e color=1 range=u source=u
edge f color=1 range=v source=w
edge g color=1 range=w source=v
# dashed
edge a color=2 range=u source=w
edge b color=2 range=w source=u
edge c color=2 range=v source=u
edge d color=2 range=u source=v
square e a = d f
square e d = a g
square f b = c e
square g c = b e
)";

constexpr char const* kE = R"(# one vertex, one loop
kgraph k=1
vertex v
edge e color=1 range=v source=v
)";

constexpr char const* kTwoLoops = R"(kgraph k=1
vertex v
edge e color=1 range=v source=v
edge f color=1 range=v source=v
)";

constexpr char const* kEg1 = R"(# Z_2-graph: one vertex, one edge of degree 1, e e = v
qgraph torsion=2 free=0
subgroup 2
vertex v
morphism e degree=(1;) range=v source=v
compose e e = v
)";

constexpr char const* kTwoCycle = R"(# both colours swap x and y
kgraph k=2
vertex x
vertex y
edge p color=1 range=y source=x
edge q color=1 range=x source=y
edge a color=2 range=y source=x
edge b color=2 range=x source=y
square p b = a q
square q a = b p
)";

constexpr char const* kCommuting = R"(kgraph k=2
vertex v
edge e color=1 range=v source=v
edge f color=2 range=v source=v
square e f = f e
)";

constexpr char const* kDisjoint = R"(kgraph k=1
vertex u
vertex v
edge e color=1 range=u source=u
edge f color=1 range=v source=v
)";

constexpr char const* kTail = R"(# v feeds into the periodic vertex u
kgraph k=1
vertex u
vertex v
edge e color=1 range=u source=u
edge f color=1 range=v source=u
edge g color=1 range=v source=v
)";

std::map<std::string, char const*, std::less<>> const& table() {
  static std::map<std::string, char const*, std::less<>> const examples{
      {"sims", kSims},         {"E", kE},           {"two-loops", kTwoLoops}, {"eg1", kEg1},
      {"two-cycle", kTwoCycle}, {"commuting", kCommuting}, {"disjoint", kDisjoint}, {"tail", kTail},
  };
  return examples;
}

}  // namespace

std::vector<std::string> example_names() {
  std::vector<std::string> out;
  for (auto const& [name, text] : table()) out.push_back(name);
  return out;
}

std::string example_text(std::string_view name) {
  auto it = table().find(name);
  if (it == table().end()) throw Error("unknown example '" + std::string(name) + "'");
  return it->second;
}

}  // namespace hrg
