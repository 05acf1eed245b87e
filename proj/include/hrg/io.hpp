#pragma once

// Line-oriented text formats for k-graphs and quotient graphs, DOT export
// and the periodicity report document.
//
//   kgraph k=2                          qgraph torsion=2 free=1
//   vertex u                            subgroup 2 0
//   edge e color=1 range=u source=u     vertex u
//   square e a = d f                    morphism e degree=(1;0) range=u source=u
//                                       compose e e = u
//
// '#' starts a comment. QGraph degrees are coordinates in the basis the
// Smith decomposition of the subgroup rows produces.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hrg/kgraph.hpp"
#include "hrg/periodicity.hpp"
#include "hrg/transforms.hpp"

namespace hrg {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string const& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

using Document = std::variant<Skeleton, QGraph>;

Document parse_document(std::string_view text);
Skeleton parse_kgraph(std::string_view text);
QGraph parse_qgraph(std::string_view text);

std::string print_kgraph(Skeleton const& s);
/// Representatives are written as comments when `origin` is given.
std::string print_qgraph(QGraph const& g, KGraph const* origin = nullptr);

/// Same quotient, vertices, morphisms and composition table.
bool structurally_equal(QGraph const& a, QGraph const& b);

/// Edges drawn source -> range. Colour 1 solid, 2 dashed, 3 dotted,
/// higher colours bold.
std::string kgraph_dot(Skeleton const& s);
/// Generator-degree morphisms only; torsion degrees dotted.
std::string qgraph_dot(QGraph const& g);

nlohmann::ordered_json path_json(KGraph const& g, Path const& p);
nlohmann::ordered_json report_json(KGraph const& g, PeriodicityReport const& report, bool with_classes = false);
std::string report_text(KGraph const& g, PeriodicityReport const& report);

std::vector<std::string> example_names();
/// Source text of a built-in example; throws Error for unknown names.
std::string example_text(std::string_view name);

}  // namespace hrg
