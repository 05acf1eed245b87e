#include "hrg/io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace hrg {

ParseError::ParseError(std::size_t line, std::size_t column, std::string const& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    Line parsed{number, {}};
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t const start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) parsed.tokens.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    if (!parsed.tokens.empty()) out.push_back(std::move(parsed));
    pos = end + 1;
  }
  return out;
}

[[noreturn]] void fail(Line const& line, Token const& tok, std::string const& message) {
  throw ParseError(line.number, tok.column, message);
}

std::int64_t parse_int(Line const& line, Token const& tok, std::string_view s) {
  std::int64_t value = 0;
  auto const* first = s.data();
  auto const* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last) fail(line, tok, "expected an integer, got '" + std::string(s) + "'");
  return value;
}

std::vector<std::int64_t> parse_int_list(Line const& line, Token const& tok, std::string_view s) {
  std::vector<std::int64_t> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    std::size_t const comma = s.find(',', pos);
    out.push_back(parse_int(line, tok, s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// key=value tokens after the fixed positional ones.
std::map<std::string, Token> keyed(Line const& line, std::size_t from, std::set<std::string> const& required) {
  std::map<std::string, Token> out;
  for (std::size_t i = from; i < line.tokens.size(); ++i) {
    auto const& tok = line.tokens[i];
    auto const eq = tok.text.find('=');
    if (eq == std::string::npos) fail(line, tok, "expected key=value, got '" + tok.text + "'");
    std::string key = tok.text.substr(0, eq);
    if (!required.count(key)) fail(line, tok, "unknown key '" + key + "'");
    Token value{tok.text.substr(eq + 1), tok.column + eq + 1};
    if (!out.emplace(key, value).second) fail(line, tok, "duplicate key '" + key + "'");
  }
  for (auto const& key : required) {
    if (!out.count(key)) fail(line, line.tokens.front(), "missing " + key + "=");
  }
  return out;
}

void expect_count(Line const& line, std::size_t n, std::string const& usage) {
  if (line.tokens.size() != n) fail(line, line.tokens.front(), "expected: " + usage);
}

Skeleton parse_kgraph_lines(std::vector<Line> const& lines) {
  Skeleton s;
  auto const& head = lines.front();
  auto const args = keyed(head, 1, {"k"});
  auto const& kt = args.at("k");
  s.k = static_cast<int>(parse_int(head, kt, kt.text));
  if (s.k < 1) fail(head, kt, "rank must be at least 1");

  auto vertex = [&](Line const& line, Token const& tok) {
    auto v = s.find_vertex(tok.text);
    if (!v) fail(line, tok, "unknown vertex '" + tok.text + "'");
    return *v;
  };
  auto edge = [&](Line const& line, Token const& tok) {
    auto e = s.find_edge(tok.text);
    if (!e) fail(line, tok, "unknown edge '" + tok.text + "'");
    return *e;
  };
  std::set<std::string> names;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto const& line = lines[i];
    auto const& word = line.tokens.front().text;
    if (word == "vertex") {
      expect_count(line, 2, "vertex NAME");
      if (!names.insert(line.tokens[1].text).second) fail(line, line.tokens[1], "duplicate name " + line.tokens[1].text);
      s.add_vertex(line.tokens[1].text);
    } else if (word == "edge") {
      if (line.tokens.size() < 2) fail(line, line.tokens.front(), "expected: edge NAME color=I range=V source=W");
      auto const& name = line.tokens[1];
      if (name.text.find('=') != std::string::npos) fail(line, name, "edge name missing");
      if (!names.insert(name.text).second) fail(line, name, "duplicate name " + name.text);
      auto const kv = keyed(line, 2, {"color", "range", "source"});
      auto const& ct = kv.at("color");
      auto const color = parse_int(line, ct, ct.text);
      if (color < 1 || color > s.k) fail(line, ct, "colour out of range 1.." + std::to_string(s.k));
      s.add_edge(name.text, static_cast<int>(color), vertex(line, kv.at("range")), vertex(line, kv.at("source")));
    } else if (word == "square") {
      expect_count(line, 6, "square A B = Bp Ap");
      if (line.tokens[3].text != "=") fail(line, line.tokens[3], "expected '='");
      s.add_square(edge(line, line.tokens[1]), edge(line, line.tokens[2]), edge(line, line.tokens[4]),
                   edge(line, line.tokens[5]));
    } else {
      fail(line, line.tokens.front(), "unknown directive '" + word + "'");
    }
  }
  return s;
}

QElem parse_qelem(Line const& line, Token const& tok, QuotientMonoid const& q) {
  std::string_view s = tok.text;
  if (s.size() < 3 || s.front() != '(' || s.back() != ')') fail(line, tok, "expected a degree (t1,..;z1,..)");
  s = s.substr(1, s.size() - 2);
  auto const semi = s.find(';');
  if (semi == std::string_view::npos) fail(line, tok, "degree needs ';' between torsion and free parts");
  QElem x{parse_int_list(line, tok, s.substr(0, semi)), parse_int_list(line, tok, s.substr(semi + 1))};
  if (x.torsion.size() != q.torsion().size() || x.free.size() != q.free_rank()) {
    fail(line, tok, "degree has the wrong shape for this quotient");
  }
  if (!q.valid(x)) fail(line, tok, "torsion coordinate out of range");
  return x;
}

QGraph parse_qgraph_lines(std::vector<Line> const& lines) {
  auto const& head = lines.front();
  auto const args = keyed(head, 1, {"torsion", "free"});
  auto const torsion = parse_int_list(head, args.at("torsion"), args.at("torsion").text);
  auto const free = parse_int(head, args.at("free"), args.at("free").text);
  if (free < 0) fail(head, args.at("free"), "free rank must be nonnegative");

  std::vector<GDegree> rows;
  std::size_t i = 1;
  for (; i < lines.size() && lines[i].tokens.front().text == "subgroup"; ++i) {
    auto const& line = lines[i];
    GDegree row;
    for (std::size_t t = 1; t < line.tokens.size(); ++t) row.push_back(parse_int(line, line.tokens[t], line.tokens[t].text));
    if (row.empty()) fail(line, line.tokens.front(), "empty subgroup row");
    if (!rows.empty() && row.size() != rows.front().size()) fail(line, line.tokens.front(), "subgroup rows differ in length");
    rows.push_back(std::move(row));
  }
  std::size_t k = rows.empty() ? static_cast<std::size_t>(free) : rows.front().size();
  if (rows.empty() && !torsion.empty()) fail(head, args.at("torsion"), "torsion given without subgroup rows");
  if (k == 0) fail(head, head.tokens.front(), "rank must be at least 1");
  QuotientMonoid q = quotient_structure(Subgroup(k, rows));
  if (q.torsion() != torsion || static_cast<std::int64_t>(q.free_rank()) != free) {
    std::string expected;
    for (auto d : q.torsion()) expected += (expected.empty() ? "" : ",") + std::to_string(d);
    fail(head, head.tokens.front(),
         "header does not match the subgroup (expected torsion=" + expected + " free=" + std::to_string(q.free_rank()) + ")");
  }

  QGraph g(std::move(q));
  std::set<std::string> names;
  auto vertex = [&](Line const& line, Token const& tok) {
    auto v = g.find_vertex(tok.text);
    if (!v) fail(line, tok, "unknown vertex '" + tok.text + "'");
    return *v;
  };
  auto morphism = [&](Line const& line, Token const& tok) {
    auto m = g.find_morphism(tok.text);
    if (!m) fail(line, tok, "unknown morphism '" + tok.text + "'");
    return *m;
  };
  for (; i < lines.size(); ++i) {
    auto const& line = lines[i];
    auto const& word = line.tokens.front().text;
    if (word == "vertex") {
      expect_count(line, 2, "vertex NAME");
      if (!names.insert(line.tokens[1].text).second) fail(line, line.tokens[1], "duplicate name " + line.tokens[1].text);
      g.vertices.push_back(line.tokens[1].text);
    } else if (word == "morphism") {
      if (line.tokens.size() < 2) fail(line, line.tokens.front(), "expected: morphism NAME degree=(..) range=V source=W");
      auto const& name = line.tokens[1];
      if (!names.insert(name.text).second) fail(line, name, "duplicate name " + name.text);
      auto const kv = keyed(line, 2, {"degree", "range", "source"});
      g.morphisms.push_back({name.text, parse_qelem(line, kv.at("degree"), g.quotient), vertex(line, kv.at("range")),
                             vertex(line, kv.at("source")), {}});
    } else if (word == "compose") {
      expect_count(line, 5, "compose A B = C");
      if (line.tokens[3].text != "=") fail(line, line.tokens[3], "expected '='");
      auto const& rt = line.tokens[4];
      MorphismRef result;
      if (auto v = g.find_vertex(rt.text)) {
        result = MorphismRef::vertex(*v);
      } else {
        result = MorphismRef::morphism(morphism(line, rt));
      }
      g.compositions.push_back({morphism(line, line.tokens[1]), morphism(line, line.tokens[2]), result});
    } else if (word == "subgroup") {
      fail(line, line.tokens.front(), "subgroup rows must directly follow the header");
    } else {
      fail(line, line.tokens.front(), "unknown directive '" + word + "'");
    }
  }
  return g;
}

std::vector<Line> nonempty(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, 1, "empty document");
  return lines;
}

}  // namespace

Document parse_document(std::string_view text) {
  auto const lines = nonempty(text);
  auto const& word = lines.front().tokens.front().text;
  if (word == "kgraph") return parse_kgraph_lines(lines);
  if (word == "qgraph") return parse_qgraph_lines(lines);
  fail(lines.front(), lines.front().tokens.front(), "expected 'kgraph' or 'qgraph' header");
}

Skeleton parse_kgraph(std::string_view text) {
  auto const lines = nonempty(text);
  if (lines.front().tokens.front().text != "kgraph") {
    fail(lines.front(), lines.front().tokens.front(), "expected 'kgraph' header");
  }
  return parse_kgraph_lines(lines);
}

QGraph parse_qgraph(std::string_view text) {
  auto const lines = nonempty(text);
  if (lines.front().tokens.front().text != "qgraph") {
    fail(lines.front(), lines.front().tokens.front(), "expected 'qgraph' header");
  }
  return parse_qgraph_lines(lines);
}

std::string print_kgraph(Skeleton const& s) {
  std::ostringstream out;
  out << "kgraph k=" << s.k << '\n';
  for (auto const& v : s.vertices) out << "vertex " << v << '\n';
  for (auto const& e : s.edges) {
    out << "edge " << e.name << " color=" << e.color << " range=" << s.vertices[e.range]
        << " source=" << s.vertices[e.source] << '\n';
  }
  for (auto const& sq : s.squares) {
    out << "square " << s.edges[sq.a].name << ' ' << s.edges[sq.b].name << " = " << s.edges[sq.b_prime].name << ' '
        << s.edges[sq.a_prime].name << '\n';
  }
  return out.str();
}

std::string print_qgraph(QGraph const& g, KGraph const* origin) {
  std::ostringstream out;
  out << "qgraph torsion=";
  for (std::size_t i = 0; i < g.quotient.torsion().size(); ++i) out << (i ? "," : "") << g.quotient.torsion()[i];
  out << " free=" << g.quotient.free_rank() << '\n';
  for (auto const& row : g.quotient.subgroup().generators()) {
    out << "subgroup";
    for (auto x : row) out << ' ' << x;
    out << '\n';
  }
  for (auto const& note : g.notes) out << "# " << note << '\n';
  for (auto const& v : g.vertices) out << "vertex " << v << '\n';
  for (auto const& m : g.morphisms) {
    out << "morphism " << m.name << " degree=" << to_string(m.degree) << " range=" << g.vertices[m.range]
        << " source=" << g.vertices[m.source] << '\n';
    if (origin && m.representatives.size() > 1) {
      out << "#   class:";
      std::size_t const shown = std::min<std::size_t>(m.representatives.size(), 8);
      for (std::size_t i = 0; i < shown; ++i) out << ' ' << origin->describe(m.representatives[i]);
      if (shown < m.representatives.size()) out << " ... (" << m.representatives.size() << " paths)";
      out << '\n';
    }
  }
  for (auto const& c : g.compositions) {
    out << "compose " << g.morphisms[c.lhs].name << ' ' << g.morphisms[c.rhs].name << " = " << g.name_of(c.result)
        << '\n';
  }
  return out.str();
}

bool structurally_equal(QGraph const& a, QGraph const& b) {
  if (!a.quotient.subgroup().same_as(b.quotient.subgroup()) || a.quotient.torsion() != b.quotient.torsion() ||
      a.vertices != b.vertices || a.morphisms.size() != b.morphisms.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.morphisms.size(); ++i) {
    auto const& x = a.morphisms[i];
    auto const& y = b.morphisms[i];
    if (x.name != y.name || x.degree != y.degree || x.range != y.range || x.source != y.source) return false;
  }
  auto key = [](QComposition const& c) { return std::tuple(c.lhs, c.rhs, c.result); };
  std::set<std::tuple<std::int32_t, std::int32_t, MorphismRef>> ca, cb;
  for (auto const& c : a.compositions) ca.insert(key(c));
  for (auto const& c : b.compositions) cb.insert(key(c));
  return ca == cb;
}

namespace {

char const* style_for(int color) {
  switch (color) {
    case 1: return "solid";
    case 2: return "dashed";
    case 3: return "dotted";
    default: return "bold";
  }
}

std::string quoted(std::string const& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string kgraph_dot(Skeleton const& s) {
  std::ostringstream out;
  out << "digraph kgraph {\n";
  out << "  // colour 1 solid, 2 dashed, 3 dotted, higher colours bold\n";
  out << "  node [shape=circle];\n";
  for (auto const& v : s.vertices) out << "  " << quoted(v) << ";\n";
  for (auto const& e : s.edges) {
    out << "  " << quoted(s.vertices[e.source]) << " -> " << quoted(s.vertices[e.range]) << " [label=" << quoted(e.name)
        << ", style=" << style_for(e.color) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string qgraph_dot(QGraph const& g) {
  std::ostringstream out;
  out << "digraph qgraph {\n";
  out << "  // torsion degrees dotted, otherwise the style of the first colour with that degree\n";
  out << "  node [shape=circle];\n";
  for (auto const& v : g.vertices) out << "  " << quoted(v) << ";\n";
  auto const values = g.generator_values();
  for (auto const& m : g.morphisms) {
    auto const it = std::find(values.begin(), values.end(), m.degree);
    if (it == values.end()) continue;
    bool const torsion = std::all_of(m.degree.free.begin(), m.degree.free.end(), [](std::int64_t z) { return z == 0; });
    int color = 1;
    while (g.generator_degree(color) != m.degree) ++color;
    out << "  " << quoted(g.vertices[m.source]) << " -> " << quoted(g.vertices[m.range])
        << " [label=" << quoted(m.name + " " + to_string(m.degree)) << ", style=" << (torsion ? "dotted" : style_for(color))
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

GDegree sign_normalized(GDegree g) {
  auto first = std::find_if(g.begin(), g.end(), [](std::int64_t x) { return x != 0; });
  if (first != g.end() && *first < 0) g = -g;
  return g;
}

std::vector<GDegree> display_generators(Subgroup const& h) {
  std::vector<GDegree> out;
  for (auto const& g : h.canonical_generators()) out.push_back(sign_normalized(g));
  return out;
}

std::vector<std::string> vertex_names(KGraph const& g, std::vector<VertexId> const& vs) {
  std::vector<std::string> out;
  for (auto v : vs) out.push_back(g.vertex_name(v));
  return out;
}

}  // namespace

nlohmann::ordered_json path_json(KGraph const& g, Path const& p) {
  nlohmann::ordered_json j;
  j["path"] = g.describe(p);
  j["edges"] = p.edges;
  j["degree"] = p.degree;
  j["range"] = g.vertex_name(p.range);
  j["source"] = g.vertex_name(p.source);
  return j;
}

nlohmann::ordered_json report_json(KGraph const& g, PeriodicityReport const& report, bool with_classes) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema"] = 1;
  j["kind"] = "periodicity";
  j["rank"] = g.rank();
  std::vector<std::string> all;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) all.push_back(g.vertex_name(static_cast<VertexId>(v)));
  j["vertices"] = all;
  j["bound"] = report.bound;

  json per;
  per["generators"] = display_generators(report.group);
  std::vector<std::string> factors;
  for (auto const& d : report.group.invariant_factors()) factors.push_back(d.str());
  per["invariant_factors"] = factors;
  per["free_rank"] = report.group.ambient_rank() - report.group.torsion_rank();
  Integer const index = report.group.index();
  per["index"] = index == 0 ? json(nullptr) : json(index.str());
  j["per"] = per;

  j["aperiodic"] = report.aperiodic;
  j["complete"] = report.complete;
  j["raw_differences"] = report.raw_differences;
  json witnesses = json::array();
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    json w;
    w["difference"] = report.raw_differences[i];
    w["xi"] = path_json(g, report.witnesses[i].xi);
    w["eta"] = path_json(g, report.witnesses[i].eta);
    witnesses.push_back(w);
  }
  j["witnesses"] = witnesses;

  j["vertices_per"] = vertex_names(g, report.vertices_per);
  j["sigma_global_vertices"] = vertex_names(g, report.sigma_global_vertices);
  j["vertices_per_matches_sigma"] = report.vertices_per == report.sigma_global_vertices;

  json local = json::array();
  for (auto const& vp : report.vertices) {
    json x;
    x["vertex"] = g.vertex_name(vp.vertex);
    json sigma = json::array();
    for (auto const& [m, n] : vp.sigma) sigma.push_back(json::array({m, n}));
    x["sigma"] = sigma;
    x["per_v"] = display_generators(vp.per_v);
    x["sigma_matches_global"] = vp.sigma_matches_global;
    x["in_vertices_per"] = vp.in_vertices_per;
    local.push_back(x);
  }
  j["local"] = local;
  j["property_w"] = has_property_w(g);
  j["cofinal"] = is_cofinal(g);
  j["sink_free"] = is_sink_free(g);
  j["warnings"] = report.warnings;

  if (with_classes) {
    EquivalenceTable const table(g, report.bound);
    json classes = json::array();
    for (std::size_t c = 0; c < table.class_count(); ++c) {
      auto const& members = table.members(c);
      if (members.size() < 2) continue;
      std::vector<std::string> names;
      for (auto i : members) names.push_back(g.describe(table.paths()[i]));
      classes.push_back(names);
    }
    j["classes"] = classes;
  }
  return j;
}

std::string report_text(KGraph const& g, PeriodicityReport const& report) {
  std::ostringstream out;
  auto join = [](std::vector<std::string> const& xs) {
    std::string s;
    for (auto const& x : xs) s += (s.empty() ? "" : " ") + x;
    return s.empty() ? std::string("(none)") : s;
  };
  out << "bound " << to_string(report.bound) << '\n';
  std::vector<std::string> gens;
  for (auto const& h : display_generators(report.group)) gens.push_back(to_string(h));
  out << "Per generators: " << join(gens) << '\n';
  out << (report.aperiodic ? "aperiodic" : "periodic") << (report.complete ? " (complete)" : " (bounded search)")
      << '\n';
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    out << "  " << to_string(report.raw_differences[i]) << ": " << g.describe(report.witnesses[i].xi) << " ~ "
        << g.describe(report.witnesses[i].eta) << '\n';
  }
  out << "Lambda^0_Per: " << join(vertex_names(g, report.vertices_per)) << '\n';
  out << "Sigma_v = Sigma_Lambda at: " << join(vertex_names(g, report.sigma_global_vertices)) << '\n';
  for (auto const& vp : report.vertices) {
    std::vector<std::string> pv;
    for (auto const& h : display_generators(vp.per_v)) pv.push_back(to_string(h));
    out << "  Per_" << g.vertex_name(vp.vertex) << ": " << join(pv) << "  (" << vp.sigma.size() << " pairs in Sigma)\n";
  }
  out << "property W: " << (has_property_w(g) ? "yes" : "no") << ", cofinal: " << (is_cofinal(g) ? "yes" : "no")
      << ", sink-free: " << (is_sink_free(g) ? "yes" : "no") << '\n';
  for (auto const& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace hrg
