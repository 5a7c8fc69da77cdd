// Command-line front end. Every command prints one JSON document on stdout;
// diagnostics go to stderr. Exit codes: 0 success, 1 mathematical failure,
// 2 usage or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "chainrt/errors.hpp"
#include "chainrt/io.hpp"
#include "chainrt/parallel.hpp"
#include "chainrt/skein.hpp"

namespace fs = std::filesystem;
using namespace chainrt;

namespace {

constexpr int kMathFailure = 1;
constexpr int kUsage = 2;

struct Options {
  std::string category, surface, diagram, out, verify;
  std::vector<std::string> complexes, maps;
  bool approx = false;
  unsigned jobs = 1;
  unsigned long seed = 1;
};

// Pretty-prints, keeping any value that fits on one line inline.
void format(const Json& j, std::size_t indent, std::string& out) {
  std::string flat = j.dump();
  if (!j.is_structured() || j.empty() || indent + flat.size() <= 88) {
    // dump() has no spaces; add them after separators outside strings.
    std::string spaced;
    bool in_str = false;
    for (std::size_t i = 0; i < flat.size(); ++i) {
      char c = flat[i];
      spaced += c;
      if (c == '"' && (i == 0 || flat[i - 1] != '\\')) in_str = !in_str;
      if (!in_str && (c == ',' || c == ':')) spaced += ' ';
    }
    out += spaced;
    return;
  }
  const std::string pad(indent + 2, ' ');
  out += j.is_array() ? "[\n" : "{\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (j.is_object()) out += Json(it.key()).dump() + ": ";
    format(*it, indent + 2, out);
  }
  out += "\n" + std::string(indent, ' ') + (j.is_array() ? "]" : "}");
}

void emit(const Json& j, const std::string& out) {
  std::string text;
  format(j, 0, text);
  text += "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ParseError(out + ": cannot write");
  f << text;
}

std::string approx_text(const ScalarCyclo& s) {
  const auto z = s.approx();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

Json scalar_report(const ScalarCyclo& s, bool approx) {
  Json j{{"value", scalar_to_json(s)}, {"text", s.to_string()}};
  if (approx) j["approx_display_only"] = approx_text(s);
  return j;
}

std::string poincare_text(const std::map<int, std::size_t>& dims) {
  std::string out;
  for (const auto& [n, d] : dims) {
    if (d == 0) continue;
    if (!out.empty()) out += " + ";
    std::string coeff = (d == 1 && n != 0) ? "" : std::to_string(d);
    if (n == 0) out += coeff;
    else out += coeff + (n == 1 ? "t" : "t^" + std::to_string(n));
  }
  return out.empty() ? "0" : out;
}

Json degree_table(const std::map<int, std::size_t>& m) {
  Json j = Json::object();
  for (const auto& [n, d] : m) j[std::to_string(n)] = d;
  return j;
}

// ------------------------------------------------------------ commands

int check_category(const Options& o) {
  HopfAlgebraData d;
  if (o.category == "trivial") d = datasets::trivial();
  else if (o.category == "sweedler") d = datasets::sweedler();
  else if (o.category.rfind("fun_z", 0) == 0 && !fs::exists(o.category)) {
    try {
      d = datasets::fun_zn(unsigned(std::stoul(o.category.substr(5))));
    } catch (const std::exception&) {
      throw ParseError(o.category + ": unknown builtin category");
    }
  } else {
    try {
      d = hopf_from_json(read_json_file(o.category));
    } catch (const ParseError& e) {
      throw ParseError(o.category + ": " + e.what());
    }
  }
  const auto failed = verify_hopf_ribbon(d);
  emit({{"category", d.name}, {"dim", d.dim}, {"failed", failed}, {"ok", failed.empty()}}, o.out);
  return failed.empty() ? 0 : kMathFailure;
}

int state_space(const Options& o) {
  Workspace ws;
  const HopfPtr h = o.category.empty() ? nullptr : ws.category(o.category);
  MarkedSurface s = ws.surface(o.surface, {}, h);
  if (h) {
    if (!s.markings.empty() && h != s.algebra) throw ParseError("--category disagrees with the surface's markings");
    s.algebra = h;
  }
  const StateComplex st = state_complex(s);
  std::map<int, std::size_t> dims;
  for (int n = st.complex.lo(); n <= st.complex.hi(); ++n) dims[n] = st.complex.dim(n);
  const auto coh = cohomology(st.complex);
  Json j{{"genus", s.genus},
         {"markings", s.markings.size()},
         {"category", s.algebra->name()},
         {"poincare", degree_table(dims)},
         {"poincare_polynomial", poincare_text(dims)},
         {"cohomology", degree_table(coh)},
         {"cohomology_polynomial", poincare_text(coh)}};
  int code = 0;
  if (!o.verify.empty()) {
    const bool d2 = st.complex.validate().empty();
    const bool explicit_ok = state_differential_explicit(s).complex == st.complex;
    j["verified"] = {{"d_squared", d2}, {"explicit_differential", explicit_ok}};
    if (!d2 || !explicit_ok) code = kMathFailure;
  }
  emit(j, o.out);
  return code;
}

LoadedDiagram load_labeled_diagram(Workspace& ws, const Options& o) {
  LoadedDiagram d = ws.diagram(o.diagram);
  for (std::size_t k = 0; k < o.complexes.size(); ++k) {
    const ChainObject x = ws.complex(o.complexes[k]);
    if (k < d.labels.objects.size()) d.labels.objects[k] = x;
    else d.labels.objects.push_back(x);
  }
  return d;
}

int eval_diagram(const Options& o) {
  Workspace ws;
  const LoadedDiagram d = load_labeled_diagram(ws, o);
  if (d.graded) {
    emit({{"kind", "graded"}, {"value", eval_string(d.strings)}}, o.out);
    return 0;
  }
  const ChainMap f = evaluate(d.ribbon, d.labels);
  Json j{{"kind", "ribbon"}};
  if (d.ribbon.source.empty() && d.ribbon.target.empty()) {
    j["scalar"] = scalar_report(f.component(0).rows() ? f.component(0).at(0, 0) : ScalarCyclo(0), o.approx);
  } else {
    j["map"] = ws.map_to_json(f);
  }
  int code = 0;
  if (!o.verify.empty()) {
    const ChainMap g = evaluate_separated(d.ribbon, d.labels);
    bool same = true;
    for (int n = std::min(f.source.lo(), g.source.lo()); n <= std::max(f.source.hi(), g.source.hi()); ++n)
      same = same && f.component(n) == g.component(n);
    j["verified"] = {{"separated", same}};
    if (!same) code = kMathFailure;
  }
  emit(j, o.out);
  return code;
}

int link(const Options& o) {
  Workspace ws;
  const LoadedDiagram d = load_labeled_diagram(ws, o);
  if (d.graded) throw ParseError(o.diagram + ": link needs a ribbon diagram");
  if (!d.ribbon.source.empty() || !d.ribbon.target.empty()) throw ShapeError(o.diagram + ": diagram is not closed");
  const ScalarCyclo v = graded_link_invariant(d.ribbon, d.labels);
  Json j = scalar_report(v, o.approx);
  int code = 0;
  if (!o.verify.empty()) {
    j["verified"] = Json::object();
    bool ok = evaluate_separated(d.ribbon, d.labels).component(0) == evaluate(d.ribbon, d.labels).component(0);
    j["verified"]["separated"] = ok;
    if (d.labels.objects.size() == 1 && d.labels.morphisms.empty()) {
      const bool alt = knot_alternating_sum(d.ribbon, d.labels.objects[0]) == v;
      j["verified"]["alternating_sum"] = alt;
      ok = ok && alt;
    }
    if (!ok) code = kMathFailure;
  }
  emit(j, o.out);
  return code;
}

int homotopy(const Options& o) {
  Workspace ws;
  if (!o.verify.empty()) {
    const bool ok = verify_witness(ws, read_json_file(o.verify), fs::path(o.verify).parent_path());
    emit({{"witness", o.verify}, {"verified", ok}}, o.out);
    return ok ? 0 : kMathFailure;
  }
  if (o.maps.empty() || o.maps.size() > 2) throw CLI::ValidationError("homotopy", "expects one or two map files");
  const ChainMap f = ws.map(o.maps[0]);
  if (o.maps.size() == 2) {
    const ChainMap g = ws.map(o.maps[1]);
    if (!(f.source == g.source) || !(f.target == g.target)) throw ShapeError("homotopy: maps have different shapes");
    const auto h = find_homotopy(f, g);
    emit(h ? homotopy_witness_to_json(ws, f, g, *h) : Json{{"kind", "homotopy"}, {"result", "none"}}, o.out);
    return 0;
  }
  const auto w = is_homotopy_equivalence(f);
  emit(w ? equivalence_witness_to_json(ws, f, *w) : Json{{"kind", "equivalence"}, {"result", "none"}}, o.out);
  return 0;
}

// Short randomized run of the library's main properties.
int selftest(const Options& o) {
  std::mt19937_64 rng(o.seed);
  std::vector<std::pair<std::string, bool>> results;
  auto record = [&](const std::string& name, bool ok) {
    results.push_back({name, ok});
    std::cerr << (ok ? "PASS " : "FAIL ") << name << "\n";
  };

  const HopfPtr triv = HopfAlgebra::trivial();
  const HopfPtr z3 = HopfAlgebra::create(datasets::fun_zn(3));
  const HopfPtr sw = HopfAlgebra::create(datasets::sweedler());
  const std::vector<HopfPtr> algebras = {triv, z3, sw};

  bool axioms = true;
  for (const auto& d : {datasets::trivial(), datasets::fun_zn(3), datasets::fun_zn(5), datasets::sweedler()})
    axioms = axioms && verify_hopf_ribbon(d).empty();
  record("category axioms", axioms);

  bool signs = true;
  for (int m = -3; m <= 3; ++m) {
    const int expect = m % 2 == 0 ? 1 : -1;
    const GradedStringDiagram loop{{}, {}, {{GradedToken::cup(0, {m, true})}, {GradedToken::cap(0)}}};
    const GradedStringDiagram cross{{{m, true}, {m, true}}, {{m, true}, {m, true}}, {{GradedToken::cross(0)}}};
    signs = signs && eval_string(loop) == expect && eval_string(cross) == expect;
  }
  record("graded signs", signs);

  bool separated = true, skein = true;
  for (const HopfPtr& h : algebras) {
    std::vector<CouponSignature> sigs;
    const ChainLabels labels = random_chain_labels(rng, h, 2, sigs);
    const RibbonDiagram d = random_diagram(rng, 2, sigs, 6, false);
    const ChainMap a = evaluate(d, labels), b = evaluate_separated(d, labels);
    for (int n = a.source.lo(); n <= a.source.hi(); ++n) separated = separated && a.component(n) == b.component(n);
    SkeinMove move;
    SkeinSite site;
    if (random_skein_step(rng, d, move, site)) {
      const ChainMap c = evaluate(apply_skein(d, move, site), labels);
      for (int n = a.source.lo(); n <= a.source.hi(); ++n) skein = skein && a.component(n) == c.component(n);
    }
  }
  record("separated evaluation", separated);
  record("skein invariance", skein);

  bool states = true, explicit_ok = true, monoidal = true;
  RandomComplexOptions opts;
  opts.max_width = 2;
  opts.max_terms = 2;
  for (const HopfPtr& h : algebras) {
    MarkedSurface s{h, 1, {}};
    for (int k = 0; k < 2; ++k) s.markings.push_back({random_complex(rng, standard_blocks(h), opts), k == 0});
    const StateComplex st = state_complex(s);
    states = states && st.complex.validate().empty();
    explicit_ok = explicit_ok && state_differential_explicit(s).complex == st.complex;
    monoidal = monoidal && monoidality_check(s, MarkedSurface{z3, 1, {}}).ok();
  }
  record("state complexes", states);
  record("explicit differential", explicit_ok);
  record("monoidality", monoidal);

  bool preserved = true;
  {
    const auto blocks = standard_blocks(z3);
    const ChainObject x = random_complex(rng, blocks, opts);
    const auto [mu, w] = random_equivalence(rng, x, blocks);
    const StateComplex a = state_complex({z3, 1, {{x, true}}});
    const StateComplex b = state_complex({z3, 1, {{mu.target, true}}});
    const PreservationResult r = verify_homotopy_preservation(a, b, {mu}, {w});
    preserved = r.witness_verified && r.fallback_verified;
  }
  record("homotopy preservation", preserved);

  Json j = Json::object();
  bool all = true;
  for (const auto& [name, ok] : results) {
    j[name] = ok;
    all = all && ok;
  }
  emit({{"selftest", j}, {"ok", all}}, o.out);
  return all ? 0 : kMathFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with cochain-valued ribbon categories"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--jobs", o.jobs, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

  auto* cc = app.add_subcommand("check-category", "Verify the ribbon Hopf algebra axioms");
  cc->add_option("--category", o.category, "Category file or builtin name")->required();
  cc->add_option("--out", o.out, "Write the report here");

  auto* ss = app.add_subcommand("state-space", "Dimensions and cohomology of a state complex");
  ss->add_option("--surface", o.surface, "Surface file")->required();
  ss->add_option("--category", o.category, "Category for an unmarked surface");
  ss->add_option("--out", o.out, "Write the result here");
  ss->add_flag("--verify{yes}", o.verify, "Also check d^2 = 0 and the explicit differential");

  auto* ed = app.add_subcommand("eval-diagram", "Evaluate a graded-string or ribbon diagram");
  ed->add_option("--diagram", o.diagram, "Diagram file")->required();
  ed->add_option("--complex", o.complexes, "Label complexes, overriding the diagram's in order");
  ed->add_option("--out", o.out, "Write the result here");
  ed->add_flag("--approx", o.approx, "Add a decimal approximation (display only)");
  ed->add_flag("--verify{yes}", o.verify, "Also compare with the separated evaluation");

  auto* lk = app.add_subcommand("link", "Graded invariant of a closed labeled diagram");
  lk->add_option("--diagram", o.diagram, "Closed ribbon diagram file")->required();
  lk->add_option("--complex", o.complexes, "Label complexes, overriding the diagram's in order");
  lk->add_option("--out", o.out, "Write the result here");
  lk->add_flag("--approx", o.approx, "Add a decimal approximation (display only)");
  lk->add_flag("--verify{yes}", o.verify, "Also check the separated evaluation and alternating sum");

  auto* hp = app.add_subcommand("homotopy", "Find a homotopy f ~ g, or an equivalence witness for f");
  hp->add_option("maps", o.maps, "One or two chain map files");
  hp->add_option("--out", o.out, "Write the witness here");
  hp->add_option("--verify", o.verify, "Replay a witness file instead");

  auto* st = app.add_subcommand("selftest", "Run a short randomized validation");
  st->add_option("--seed", o.seed, "Random seed");
  st->add_option("--out", o.out, "Write the summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }
  set_jobs(o.jobs);

  try {
    if (*cc) return check_category(o);
    if (*ss) return state_space(o);
    if (*ed) return eval_diagram(o);
    if (*lk) return link(o);
    if (*hp) return homotopy(o);
    if (*st) return selftest(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kUsage;
  } catch (const MathError& e) {
    std::cerr << "math error: " << e.what() << "\n";
    return kMathFailure;
  }
  return kUsage;
}
