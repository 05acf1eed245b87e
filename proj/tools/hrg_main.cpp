// hrg: command-line driver for the k-graph toolkit.
//
// Exit codes: 0 success, 1 validation or certificate failure, 2 parse
// error, 3 precondition failure, 4 I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hrg/io.hpp"
#include "hrg/periodicity.hpp"
#include "hrg/transforms.hpp"

namespace {

using namespace hrg;
using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kInvalid = 1, kParse = 2, kPrecondition = 3, kIo = 4 };

struct Failure {
  int code;
  std::string message;
};

struct Config {
  std::string input;
  std::string bound;
  std::string format = "text";
  std::string out;
  int depth = 2;
  bool classes = false;
};

Document load(std::string const& path) {
  std::string text;
  if (path.rfind("example:", 0) == 0) {
    try {
      text = example_text(path.substr(8));
    } catch (Error const& e) {
      throw Failure{kIo, e.what()};
    }
  } else {
    std::ifstream in(path);
    if (!in) throw Failure{kIo, "cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return parse_document(text);
  } catch (ParseError const& e) {
    throw Failure{kParse, e.what()};
  }
}

void emit(Config const& cfg, std::string const& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out);
  if (!out || !(out << text)) throw Failure{kIo, "cannot write " + cfg.out};
}

KGraph require_kgraph(Document const& doc, char const* command) {
  auto const* s = std::get_if<Skeleton>(&doc);
  if (!s) throw Failure{kPrecondition, std::string(command) + " expects a k-graph"};
  try {
    return KGraph(*s);
  } catch (ValidationError const& e) {
    throw Failure{kInvalid, e.report().summary()};
  }
}

Degree bound_for(Config const& cfg, KGraph const& g) {
  if (cfg.bound.empty()) return default_bound(g);
  Degree b;
  std::stringstream in(cfg.bound);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      long long const x = std::stoll(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      b.push_back(x);
    } catch (std::exception const&) {
      throw Failure{kPrecondition, "bad --bound '" + cfg.bound + "'"};
    }
  }
  if (b.size() != static_cast<std::size_t>(g.rank())) {
    throw Failure{kPrecondition, "--bound needs " + std::to_string(g.rank()) + " coordinates"};
  }
  for (auto x : b) {
    if (x < 1) throw Failure{kPrecondition, "--bound must be positive in every coordinate"};
  }
  return b;
}

int cmd_validate(Config const& cfg) {
  Document const doc = load(cfg.input);
  ValidationReport report;
  std::string kind;
  if (auto const* s = std::get_if<Skeleton>(&doc)) {
    report = check_skeleton(*s);
    kind = "kgraph";
  } else {
    report = verify_qgraph(std::get<QGraph>(doc));
    kind = "qgraph";
  }
  if (cfg.format == "json") {
    json j;
    j["schema"] = 1;
    j["kind"] = "validation";
    j["graph"] = kind;
    j["valid"] = report.ok();
    json issues = json::array();
    for (auto const& i : report.issues) issues.push_back({{"kind", issue_name(i.kind)}, {"message", i.message}});
    j["issues"] = issues;
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, report.ok() ? "valid " + kind + "\n" : report.summary() + "\n");
  }
  return report.ok() ? kOk : kInvalid;
}

int cmd_analyze(Config const& cfg) {
  KGraph const g = require_kgraph(load(cfg.input), "analyze");
  PeriodicityReport const report = periodicity_group(g, bound_for(cfg, g));
  if (cfg.format == "json") {
    emit(cfg, report_json(g, report, cfg.classes).dump(2) + "\n");
  } else {
    emit(cfg, report_text(g, report));
  }
  return kOk;
}

PushoutResult run_pushout(Config const& cfg, KGraph const& g) {
  PeriodicityReport const report = periodicity_group(g, bound_for(cfg, g));
  try {
    return pushout(g, report);
  } catch (TransformError const& e) {
    throw Failure{kPrecondition, e.what()};
  }
}

int cmd_pushout(Config const& cfg) {
  KGraph const g = require_kgraph(load(cfg.input), "pushout");
  PushoutResult const result = run_pushout(cfg, g);
  ValidationReport const check = verify_qgraph(result.qgraph);
  if (!check.ok()) throw Failure{kInvalid, "pushout failed verification: " + check.summary()};
  emit(cfg, print_qgraph(result.qgraph, &result.source));
  return kOk;
}

int cmd_pullback(Config const& cfg) {
  Document const doc = load(cfg.input);
  auto const* gamma = std::get_if<QGraph>(&doc);
  if (!gamma) throw Failure{kPrecondition, "pullback expects a qgraph"};
  try {
    PullbackResult const pb = pullback(*gamma);
    emit(cfg, print_kgraph(pb.graph.skeleton()));
  } catch (ValidationError const& e) {
    throw Failure{kInvalid, e.report().summary()};
  } catch (TransformError const& e) {
    throw Failure{kInvalid, e.what()};
  }
  return kOk;
}

int cmd_roundtrip(Config const& cfg) {
  KGraph const g = require_kgraph(load(cfg.input), "roundtrip");
  PushoutResult const result = run_pushout(cfg, g);
  ValidationReport const check = verify_qgraph(result.qgraph);
  if (!check.ok()) throw Failure{kInvalid, "pushout failed verification: " + check.summary()};
  KGraph const& src = result.source;
  IsoCertificate const cert = canonical_iso_check(src, result.qgraph);
  PushoutAperiodicity const aper = verify_pushout_aperiodic(src, result.qgraph);
  bool const induced = induced_path_map_check(src, result.qgraph, Degree(static_cast<std::size_t>(src.rank()), cfg.depth));
  std::optional<PullbackPeriodicity> periodic;
  if (!result.qgraph.quotient.subgroup().is_trivial()) periodic = verify_pullback_periodic(result.qgraph);
  PullbackResult const pb = pullback(result.qgraph);
  bool const ok = cert.ok() && aper.aperiodic && induced && (!periodic || periodic->contained);

  if (cfg.format == "json") {
    json j;
    j["schema"] = 1;
    j["kind"] = "roundtrip";
    j["restricted"] = result.restricted;
    j["vertices"] = result.qgraph.vertices;
    json c;
    c["ok"] = cert.ok();
    json map = json::object();
    for (std::size_t e = 0; e < cert.edge_map.size(); ++e) {
      if (cert.edge_map[e] >= 0) map[src.edge(static_cast<EdgeId>(e)).name] = pb.graph.edge(cert.edge_map[e]).name;
    }
    c["edge_map"] = map;
    c["squares_checked"] = cert.squares_checked;
    json failures = json::array();
    for (auto const& f : cert.failures) failures.push_back(f.message);
    c["failures"] = failures;
    j["certificate"] = c;
    j["pushout_aperiodic"] = aper.aperiodic;
    j["induced_path_map"] = induced;
    if (periodic) {
      j["pullback_periodic"] = {{"contained", periodic->contained}, {"strict", periodic->strict}};
    } else {
      j["pullback_periodic"] = nullptr;
    }
    j["ok"] = ok;
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    if (result.restricted) out << "restricted to Lambda^0_Per\n";
    out << "pushout: " << result.qgraph.vertices.size() << " vertices, " << result.qgraph.morphisms.size()
        << " morphisms over torsion=(";
    for (std::size_t i = 0; i < result.qgraph.quotient.torsion().size(); ++i) {
      out << (i ? "," : "") << result.qgraph.quotient.torsion()[i];
    }
    out << ") free=" << result.qgraph.quotient.free_rank() << '\n';
    out << "certificate: " << (cert.ok() ? "OK" : "FAILED") << " (" << cert.edge_map.size() << " edges, "
        << cert.squares_checked << " squares)\n";
    for (auto const& f : cert.failures) out << "  " << f.message << '\n';
    out << "pushout aperiodic: " << (aper.aperiodic ? "yes" : "no") << '\n';
    out << "induced path map well defined to depth " << cfg.depth << ": " << (induced ? "yes" : "no") << '\n';
    if (periodic) {
      out << "H contained in Per(pullback): " << (periodic->contained ? "yes" : "no")
          << (periodic->strict ? " (strict)" : "") << '\n';
    }
    emit(cfg, out.str());
  }
  return ok ? kOk : kInvalid;
}

int cmd_export_dot(Config const& cfg) {
  Document const doc = load(cfg.input);
  if (auto const* s = std::get_if<Skeleton>(&doc)) {
    emit(cfg, kgraph_dot(*s));
  } else {
    emit(cfg, qgraph_dot(std::get<QGraph>(doc)));
  }
  return kOk;
}

int cmd_example(std::string const& name, Config const& cfg) {
  if (name.empty()) {
    std::string out;
    for (auto const& n : example_names()) out += n + "\n";
    emit(cfg, out);
    return kOk;
  }
  try {
    emit(cfg, example_text(name));
  } catch (Failure const&) {
    throw;
  } catch (Error const& e) {
    throw Failure{kIo, e.what()};
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-graph periodicity, pushout and pullback toolkit"};
  app.require_subcommand(1);
  Config cfg;
  std::string example_name;

  auto add_common = [&](CLI::App* sub, bool with_bound) {
    sub->add_option("input", cfg.input, "graph file or example:NAME")->required();
    sub->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", cfg.out, "write output to FILE");
    if (with_bound) sub->add_option("--bound", cfg.bound, "search bound a,b,...");
  };
  auto* validate = app.add_subcommand("validate", "check a kgraph or qgraph file");
  add_common(validate, false);
  auto* analyze = app.add_subcommand("analyze", "periodicity report");
  add_common(analyze, true);
  analyze->add_flag("--classes", cfg.classes, "list nontrivial equivalence classes (json)");
  auto* push = app.add_subcommand("pushout", "write the quotient graph Lambda/~");
  add_common(push, true);
  auto* pull = app.add_subcommand("pullback", "write the k-graph q*Gamma");
  add_common(pull, false);
  auto* round = app.add_subcommand("roundtrip", "pushout, pullback and the canonical isomorphism check");
  add_common(round, true);
  round->add_option("--depth", cfg.depth, "depth of the induced path map check")->check(CLI::NonNegativeNumber);
  auto* dot = app.add_subcommand("export-dot", "Graphviz output");
  add_common(dot, false);
  auto* example = app.add_subcommand("example", "list built-in examples or print one");
  example->add_option("name", example_name, "example name");
  example->add_option("--out", cfg.out, "write output to FILE");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }

  try {
    if (*validate) return cmd_validate(cfg);
    if (*analyze) return cmd_analyze(cfg);
    if (*push) return cmd_pushout(cfg);
    if (*pull) return cmd_pullback(cfg);
    if (*round) return cmd_roundtrip(cfg);
    if (*dot) return cmd_export_dot(cfg);
    if (*example) return cmd_example(example_name, cfg);
  } catch (Failure const& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (TransformError const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (ValidationError const& e) {
    std::cerr << "error: " << e.report().summary() << '\n';
    return kInvalid;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
