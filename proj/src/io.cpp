#include "chainrt/io.hpp"

#include <fstream>
#include <regex>

#include "chainrt/errors.hpp"

namespace fs = std::filesystem;

namespace chainrt {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

long as_long(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long>();
}

std::size_t as_index(const Json& j, const std::string& where) {
  const long v = as_long(j, where);
  if (v < 0) fail(where, "expected a nonnegative integer");
  return std::size_t(v);
}

int as_degree(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(key, &used);
    if (used == key.size()) return v;
  } catch (const std::exception&) {
  }
  fail(where, "\"" + key + "\" is not a degree");
}

mpq_class rational_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_string()) {
      mpq_class q(j.get<std::string>());
      if (q.get_den() == 0) fail(where, "zero denominator");
      q.canonicalize();
      return q;
    }
  } catch (const std::invalid_argument&) {
    fail(where, "not a rational number");
  }
  fail(where, "expected an integer or a rational string");
}

Json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

std::string sign_text(bool up) { return up ? "+" : "-"; }

bool parse_sign(const Json& j, const std::string& where) {
  if (j == "+") return true;
  if (j == "-") return false;
  fail(where, "expected \"+\" or \"-\"");
}

std::pair<long, bool> strand_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [value, \"+|-\"]");
  return {as_long(j[0], where + "[0]"), parse_sign(j[1], where + "[1]")};
}

const std::regex kFunZn("fun_z([0-9]+)");

bool is_builtin_category(const std::string& ref) {
  return ref == "trivial" || ref == "sweedler" || std::regex_match(ref, kFunZn);
}

Json ribbon_token_to_json(const RibbonToken& t);
RibbonToken ribbon_token_from_json(const Json& j, const std::string& where);

Json ribbon_slices_to_json(const std::vector<std::vector<RibbonToken>>& slices) {
  Json out = Json::array();
  for (const auto& s : slices) {
    Json js = Json::array();
    for (const auto& t : s) js.push_back(ribbon_token_to_json(t));
    out.push_back(js);
  }
  return out;
}

std::vector<std::vector<RibbonToken>> ribbon_slices_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of slices");
  std::vector<std::vector<RibbonToken>> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    if (!j[k].is_array()) fail(w, "expected an array of tokens");
    std::vector<RibbonToken> slice;
    for (std::size_t i = 0; i < j[k].size(); ++i)
      slice.push_back(ribbon_token_from_json(j[k][i], w + "[" + std::to_string(i) + "]"));
    out.push_back(std::move(slice));
  }
  return out;
}

Json ribbon_token_to_json(const RibbonToken& t) {
  using K = RibbonToken::Kind;
  Json j;
  j["pos"] = t.pos;
  switch (t.kind) {
    case K::cross_pos:
    case K::cross_neg:
      j["type"] = "cross";
      j["sign"] = sign_text(t.kind == K::cross_pos);
      break;
    case K::twist_pos:
    case K::twist_neg:
      j["type"] = "twist";
      j["sign"] = sign_text(t.kind == K::twist_pos);
      break;
    case K::cap:
      j["type"] = "cap";
      break;
    case K::cup:
      j["type"] = "cup";
      j["strand"] = Json::array({t.strand.label, sign_text(t.strand.up)});
      break;
    case K::coupon: {
      j["type"] = "coupon";
      j["arity"] = t.arity;
      Json outs = Json::array();
      for (const auto& s : t.outputs) outs.push_back(Json::array({s.label, sign_text(s.up)}));
      j["outputs"] = outs;
      j["word"] = t.label.word;
      if (t.label.dual) j["dual"] = true;
      if (!t.label.post.empty()) j["post"] = ribbon_slices_to_json(t.label.post);
      break;
    }
  }
  return j;
}

RibbonStrand ribbon_strand_from_json(const Json& j, const std::string& where) {
  const auto [v, up] = strand_from_json(j, where);
  if (v < 0) fail(where, "negative label index");
  return {std::size_t(v), up};
}

RibbonToken ribbon_token_from_json(const Json& j, const std::string& where) {
  const std::string type = field(j, "type", where).is_string() ? j["type"].get<std::string>() : "";
  const std::size_t pos = as_index(field(j, "pos", where), where + ".pos");
  if (type == "cross" || type == "twist") {
    const bool positive = j.contains("sign") ? parse_sign(j["sign"], where + ".sign") : true;
    return type == "cross" ? RibbonToken::cross(pos, positive) : RibbonToken::twist(pos, positive);
  }
  if (type == "cap") return RibbonToken::cap(pos);
  if (type == "cup") return RibbonToken::cup(pos, ribbon_strand_from_json(field(j, "strand", where), where + ".strand"));
  if (type == "coupon") {
    RibbonToken t;
    t.kind = RibbonToken::Kind::coupon;
    t.pos = pos;
    t.arity = as_index(field(j, "arity", where), where + ".arity");
    const Json& outs = field(j, "outputs", where);
    if (!outs.is_array()) fail(where + ".outputs", "expected an array");
    for (std::size_t k = 0; k < outs.size(); ++k)
      t.outputs.push_back(ribbon_strand_from_json(outs[k], where + ".outputs[" + std::to_string(k) + "]"));
    const Json& word = field(j, "word", where);
    if (!word.is_array() || word.empty()) fail(where + ".word", "expected a nonempty array of morphism indices");
    for (std::size_t k = 0; k < word.size(); ++k)
      t.label.word.push_back(as_index(word[k], where + ".word[" + std::to_string(k) + "]"));
    t.label.dual = j.value("dual", false);
    if (j.contains("post")) t.label.post = ribbon_slices_from_json(j["post"], where + ".post");
    return t;
  }
  fail(where + ".type", "unknown token type \"" + type + "\"");
}

}  // namespace

// ---------------------------------------------------------------- scalars

Json scalar_to_json(const ScalarCyclo& s) {
  Json coeffs = Json::array();
  for (const auto& q : s.coeffs()) coeffs.push_back(Json::array({integer_to_json(q.get_num()), integer_to_json(q.get_den())}));
  return {{"order", s.order()}, {"coeffs", coeffs}};
}

ScalarCyclo scalar_from_json(const Json& j) {
  const std::string where = "scalar";
  if (!j.is_object()) return ScalarCyclo(rational_from_json(j, where));
  const long order = as_long(field(j, "order", where), where + ".order");
  if (order <= 0) fail(where + ".order", "must be positive");
  const Json& cs = field(j, "coeffs", where);
  if (!cs.is_array()) fail(where + ".coeffs", "expected an array");
  std::vector<mpq_class> coeffs;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const std::string w = where + ".coeffs[" + std::to_string(k) + "]";
    if (cs[k].is_array()) {
      if (cs[k].size() != 2) fail(w, "expected [num, den]");
      const mpq_class num = rational_from_json(cs[k][0], w), den = rational_from_json(cs[k][1], w);
      if (den <= 0) fail(w, "denominator must be positive");
      coeffs.push_back(num / den);
    } else {
      coeffs.push_back(rational_from_json(cs[k], w));
    }
  }
  return ScalarCyclo::from_coeffs(unsigned(order), std::move(coeffs));
}

// --------------------------------------------------------------- matrices

Json matrix_to_json(const Matrix& m) {
  Json entries = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const ScalarCyclo v = m.at(r, c);
      if (!v.is_zero()) entries.push_back(Json::array({r, c, scalar_to_json(v)}));
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const Json& j) {
  const std::string where = "matrix";
  if (j.is_array()) {
    std::vector<std::vector<ScalarCyclo>> dense;
    for (std::size_t r = 0; r < j.size(); ++r) {
      if (!j[r].is_array()) fail(where + "[" + std::to_string(r) + "]", "expected a row");
      if (r > 0 && j[r].size() != j[0].size()) fail(where + "[" + std::to_string(r) + "]", "ragged rows");
      std::vector<ScalarCyclo> row;
      for (const auto& v : j[r]) row.push_back(scalar_from_json(v));
      dense.push_back(std::move(row));
    }
    return dense.empty() ? Matrix(0, 0) : Matrix::from_dense(dense);
  }
  const std::size_t rows = as_index(field(j, "rows", where), where + ".rows");
  const std::size_t cols = as_index(field(j, "cols", where), where + ".cols");
  Matrix m(rows, cols);
  const Json& es = j.contains("entries") ? j["entries"] : Json::array();
  for (std::size_t k = 0; k < es.size(); ++k) {
    const std::string w = where + ".entries[" + std::to_string(k) + "]";
    if (!es[k].is_array() || es[k].size() != 3) fail(w, "expected [row, col, scalar]");
    const std::size_t r = as_index(es[k][0], w), c = as_index(es[k][1], w);
    if (r >= rows || c >= cols) fail(w, "index out of range");
    m.set(r, c, scalar_from_json(es[k][2]));
  }
  return m;
}

// ------------------------------------------------------------- categories

Json hopf_to_json(const HopfAlgebraData& d) {
  auto vec = [](const Vector& v) {
    Json a = Json::array();
    for (const auto& s : v) a.push_back(scalar_to_json(s));
    return a;
  };
  auto t3 = [](const std::vector<HopfAlgebraData::Term3>& ts) {
    Json a = Json::array();
    for (const auto& t : ts) a.push_back(Json::array({t.i, t.j, t.k, scalar_to_json(t.c)}));
    return a;
  };
  auto t2 = [](const std::vector<HopfAlgebraData::Term2>& ts) {
    Json a = Json::array();
    for (const auto& t : ts) a.push_back(Json::array({t.i, t.j, scalar_to_json(t.c)}));
    return a;
  };
  Json j;
  j["name"] = d.name;
  j["field"] = {{"cyclotomic_order", d.field_order}};
  j["dim"] = d.dim;
  j["mult"] = t3(d.mult);
  j["unit"] = vec(d.unit);
  j["comult"] = t3(d.comult);
  j["counit"] = vec(d.counit);
  j["antipode"] = t2(d.antipode);
  j["rmatrix"] = t2(d.rmatrix);
  j["ribbon"] = vec(d.ribbon);
  return j;
}

HopfAlgebraData hopf_from_json(const Json& j) {
  const std::string where = "category";
  HopfAlgebraData d;
  if (!field(j, "name", where).is_string()) fail(where + ".name", "expected a string");
  d.name = j["name"].get<std::string>();
  const long order = as_long(field(field(j, "field", where), "cyclotomic_order", where + ".field"),
                             where + ".field.cyclotomic_order");
  if (order <= 0) fail(where + ".field.cyclotomic_order", "must be positive");
  d.field_order = unsigned(order);
  d.dim = as_index(field(j, "dim", where), where + ".dim");
  if (d.dim == 0) fail(where + ".dim", "must be positive");
  auto idx = [&](const Json& v, const std::string& w) {
    const std::size_t i = as_index(v, w);
    if (i >= d.dim) fail(w, "basis index out of range");
    return i;
  };
  auto vec = [&](const char* key) {
    const Json& a = field(j, key, where);
    if (!a.is_array() || a.size() != d.dim) fail(where + "." + key, "expected " + std::to_string(d.dim) + " scalars");
    Vector v;
    for (const auto& s : a) v.push_back(scalar_from_json(s));
    return v;
  };
  auto t3 = [&](const char* key) {
    const Json& a = field(j, key, where);
    if (!a.is_array()) fail(where + "." + key, "expected an array");
    std::vector<HopfAlgebraData::Term3> out;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string w = where + "." + key + "[" + std::to_string(k) + "]";
      if (!a[k].is_array() || a[k].size() != 4) fail(w, "expected [i, j, k, scalar]");
      out.push_back({idx(a[k][0], w), idx(a[k][1], w), idx(a[k][2], w), scalar_from_json(a[k][3])});
    }
    return out;
  };
  auto t2 = [&](const char* key) {
    const Json& a = field(j, key, where);
    if (!a.is_array()) fail(where + "." + key, "expected an array");
    std::vector<HopfAlgebraData::Term2> out;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string w = where + "." + key + "[" + std::to_string(k) + "]";
      if (!a[k].is_array() || a[k].size() != 3) fail(w, "expected [i, j, scalar]");
      out.push_back({idx(a[k][0], w), idx(a[k][1], w), scalar_from_json(a[k][2])});
    }
    return out;
  };
  d.mult = t3("mult");
  d.unit = vec("unit");
  d.comult = t3("comult");
  d.counit = vec("counit");
  d.antipode = t2("antipode");
  d.rmatrix = t2("rmatrix");
  d.ribbon = vec("ribbon");
  return d;
}

Json rep_to_json(const RepObject& x) {
  Json acts = Json::array();
  for (const auto& m : x.actions()) acts.push_back(matrix_to_json(m));
  return {{"dim", x.dim()}, {"actions", acts}};
}

// --------------------------------------------------------------- diagrams

Json graded_diagram_to_json(const GradedStringDiagram& d) {
  auto strands = [](const std::vector<GradedStrand>& ss) {
    Json a = Json::array();
    for (const auto& s : ss) a.push_back(Json::array({s.m, sign_text(s.up)}));
    return a;
  };
  Json slices = Json::array();
  for (const auto& slice : d.slices) {
    Json js = Json::array();
    for (const auto& t : slice) {
      Json jt;
      jt["pos"] = t.pos;
      switch (t.kind) {
        case GradedToken::Kind::id:
          jt["type"] = "id";
          jt["strand"] = Json::array({t.strand.m, sign_text(t.strand.up)});
          break;
        case GradedToken::Kind::cross:
          jt["type"] = "cross";
          break;
        case GradedToken::Kind::cap:
          jt["type"] = "cap";
          break;
        case GradedToken::Kind::cup:
          jt["type"] = "cup";
          jt["strand"] = Json::array({t.strand.m, sign_text(t.strand.up)});
          break;
        case GradedToken::Kind::coupon:
          jt["type"] = "coupon";
          jt["arity"] = t.arity;
          jt["outputs"] = strands(t.outputs);
          break;
      }
      js.push_back(jt);
    }
    slices.push_back(js);
  }
  return {{"kind", "graded"}, {"source", strands(d.source)}, {"target", strands(d.target)}, {"slices", slices}};
}

GradedStringDiagram graded_diagram_from_json(const Json& j) {
  const std::string where = "diagram";
  auto strands = [&](const Json& a, const std::string& w) {
    if (!a.is_array()) fail(w, "expected an array of strands");
    std::vector<GradedStrand> out;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto [m, up] = strand_from_json(a[k], w + "[" + std::to_string(k) + "]");
      out.push_back({int(m), up});
    }
    return out;
  };
  GradedStringDiagram d;
  d.source = strands(field(j, "source", where), where + ".source");
  d.target = strands(field(j, "target", where), where + ".target");
  const Json& slices = field(j, "slices", where);
  if (!slices.is_array()) fail(where + ".slices", "expected an array");
  for (std::size_t k = 0; k < slices.size(); ++k) {
    const std::string ws = where + ".slices[" + std::to_string(k) + "]";
    if (!slices[k].is_array()) fail(ws, "expected an array of tokens");
    std::vector<GradedToken> slice;
    for (std::size_t i = 0; i < slices[k].size(); ++i) {
      const Json& t = slices[k][i];
      const std::string w = ws + "[" + std::to_string(i) + "]";
      const std::string type = field(t, "type", w).is_string() ? t["type"].get<std::string>() : "";
      const std::size_t pos = as_index(field(t, "pos", w), w + ".pos");
      auto strand = [&]() {
        const auto [m, up] = strand_from_json(field(t, "strand", w), w + ".strand");
        return GradedStrand{int(m), up};
      };
      if (type == "id")
        slice.push_back(GradedToken::identity(pos, strand()));
      else if (type == "cross")
        slice.push_back(GradedToken::cross(pos));
      else if (type == "cap")
        slice.push_back(GradedToken::cap(pos));
      else if (type == "cup")
        slice.push_back(GradedToken::cup(pos, strand()));
      else if (type == "coupon")
        slice.push_back(GradedToken::coupon(pos, as_index(field(t, "arity", w), w + ".arity"),
                                            strands(field(t, "outputs", w), w + ".outputs")));
      else
        fail(w + ".type", "unknown token type \"" + type + "\"");
    }
    d.slices.push_back(std::move(slice));
  }
  return d;
}

Json ribbon_diagram_to_json(const RibbonDiagram& d) {
  auto strands = [](const std::vector<RibbonStrand>& ss) {
    Json a = Json::array();
    for (const auto& s : ss) a.push_back(Json::array({s.label, sign_text(s.up)}));
    return a;
  };
  return {{"kind", "ribbon"},
          {"source", strands(d.source)},
          {"target", strands(d.target)},
          {"slices", ribbon_slices_to_json(d.slices)}};
}

RibbonDiagram ribbon_diagram_from_json(const Json& j) {
  const std::string where = "diagram";
  auto strands = [&](const Json& a, const std::string& w) {
    if (!a.is_array()) fail(w, "expected an array of strands");
    std::vector<RibbonStrand> out;
    for (std::size_t k = 0; k < a.size(); ++k) out.push_back(ribbon_strand_from_json(a[k], w + "[" + std::to_string(k) + "]"));
    return out;
  };
  RibbonDiagram d;
  d.source = strands(field(j, "source", where), where + ".source");
  d.target = strands(field(j, "target", where), where + ".target");
  d.slices = ribbon_slices_from_json(field(j, "slices", where), where + ".slices");
  try {
    check_shape(d);
  } catch (const ShapeError& e) {
    fail(where, e.what());
  }
  return d;
}

// -------------------------------------------------------------- workspace

Json read_json_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file.string() + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

std::string Workspace::resolve(const std::string& ref, const fs::path& base) const {
  if (is_builtin_category(ref)) return ref;
  fs::path p(ref);
  if (p.is_relative() && !base.empty()) p = base / p;
  std::error_code ec;
  const fs::path c = fs::weakly_canonical(p, ec);
  return (ec ? p : c).string();
}

HopfPtr Workspace::category(const std::string& ref, const fs::path& base) {
  const std::string key = resolve(ref, base);
  if (auto it = categories_.find(key); it != categories_.end()) return it->second;
  HopfPtr h;
  std::smatch m;
  if (key == "trivial") {
    h = HopfAlgebra::trivial();
  } else if (key == "sweedler") {
    h = HopfAlgebra::create(datasets::sweedler());
  } else if (std::regex_match(key, m, kFunZn)) {
    try {
      h = HopfAlgebra::create(datasets::fun_zn(unsigned(std::stoul(m[1]))));
    } catch (const ShapeError& e) {
      throw ParseError(key + ": " + e.what());
    }
  } else {
    HopfAlgebraData d;
    try {
      d = hopf_from_json(read_json_file(key));
    } catch (const ParseError& e) {
      throw ParseError(key + ": " + e.what());
    }
    h = HopfAlgebra::create(std::move(d));
  }
  categories_[key] = h;
  category_names_.emplace(h.get(), key);
  return h;
}

HopfPtr Workspace::category_value(const Json& j, const fs::path& base, const std::string& where) {
  if (j.is_string()) return category(j.get<std::string>(), base);
  if (j.is_object()) {
    HopfPtr h = HopfAlgebra::create(hopf_from_json(j));
    const std::string key = where + "#inline";
    categories_[key] = h;
    category_names_.emplace(h.get(), key);
    return h;
  }
  fail(where, "expected a category reference");
}

std::string Workspace::category_ref(const HopfPtr& h) const {
  if (h == HopfAlgebra::trivial()) return "trivial";
  auto it = category_names_.find(h.get());
  if (it == category_names_.end()) throw ShapeError("category not loaded through this workspace");
  return it->second;
}

RepObject Workspace::rep_value(const Json& j, const HopfPtr& h, const fs::path& base, const std::string& where) {
  RepObject out;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "unit") return unit_rep(h);
    if (s == "zero") return zero_rep(h);
    if (s == "regular") return regular_rep(h);
    if (s == "adjoint") return adjoint_rep(h);
    fs::path p(s);
    if (p.is_relative()) p = base / p;
    return rep_value(read_json_file(p), h, p.parent_path(), p.string());
  }
  if (j.is_array()) {
    std::vector<RepObject> parts;
    for (std::size_t k = 0; k < j.size(); ++k) parts.push_back(rep_value(j[k], h, base, where + "[" + std::to_string(k) + "]"));
    return direct_sum_rep(h, parts);
  }
  if (!j.is_object()) fail(where, "expected a representation");
  if (j.contains("character")) {
    const Json& c = j["character"];
    if (!c.is_array() || c.size() != h->dim()) fail(where + ".character", "expected one scalar per basis element");
    Vector chi;
    for (const auto& v : c) chi.push_back(scalar_from_json(v));
    out = character_rep(h, chi);
  } else if (j.contains("vector_space")) {
    if (!h->is_trivial()) fail(where, "vector_space needs the trivial category");
    out = vector_space(as_index(j["vector_space"], where + ".vector_space"));
  } else if (j.contains("dual")) {
    out = dual_rep(rep_value(j["dual"], h, base, where + ".dual"));
  } else {
    const std::size_t dim = as_index(field(j, "dim", where), where + ".dim");
    const Json& acts = field(j, "actions", where);
    if (!acts.is_array() || acts.size() != h->dim()) fail(where + ".actions", "expected one matrix per basis element");
    std::vector<Matrix> ms;
    for (const auto& a : acts) ms.push_back(matrix_from_json(a));
    try {
      out = RepObject(h, dim, std::move(ms));
    } catch (const ShapeError& e) {
      fail(where, e.what());
    }
  }
  if (const auto bad = out.validate(); !bad.empty()) throw MathError(where + ": not a module (" + bad.front() + ")");
  return out;
}

ChainObject Workspace::complex(const std::string& ref, const fs::path& base) {
  const std::string key = resolve(ref, base);
  if (auto it = complexes_.find(key); it != complexes_.end()) return it->second;
  const ChainObject x = complex_value(read_json_file(key), fs::path(key).parent_path(), key);
  complexes_[key] = x;
  return x;
}

ChainObject Workspace::complex_value(const Json& j, const fs::path& base, const std::string& where) {
  if (j.is_string()) return complex(j.get<std::string>(), base);
  const HopfPtr h = category_value(field(j, "category", where), base, where + ".category");
  const Json& support = field(j, "support", where);
  if (!support.is_array() || support.size() != 2) fail(where + ".support", "expected [lo, hi]");
  const int lo = int(as_long(support[0], where + ".support[0]")), hi = int(as_long(support[1], where + ".support[1]"));
  if (hi < lo) return zero_chain(h);

  std::vector<std::vector<RepObject>> summands(std::size_t(hi - lo + 1));
  const Json& comps = field(j, "components", where);
  if (!comps.is_object()) fail(where + ".components", "expected an object keyed by degree");
  for (const auto& [key, value] : comps.items()) {
    const std::string w = where + ".components." + key;
    const int n = as_degree(key, w);
    if (n < lo || n > hi) fail(w, "degree outside the support");
    // an array of summands is kept as such; anything else is one summand
    if (value.is_array() && !value.empty() && !value[0].is_array()) {
      for (std::size_t k = 0; k < value.size(); ++k)
        summands[std::size_t(n - lo)].push_back(rep_value(value[k], h, base, w + "[" + std::to_string(k) + "]"));
    } else {
      summands[std::size_t(n - lo)].push_back(rep_value(value, h, base, w));
    }
  }
  std::vector<std::size_t> dims;
  for (const auto& s : summands) {
    std::size_t d = 0;
    for (const auto& r : s) d += r.dim();
    dims.push_back(d);
  }
  std::vector<Matrix> diffs;
  for (int n = lo; n < hi; ++n) diffs.emplace_back(dims[std::size_t(n + 1 - lo)], dims[std::size_t(n - lo)]);
  if (j.contains("diffs")) {
    if (!j["diffs"].is_object()) fail(where + ".diffs", "expected an object keyed by degree");
    for (const auto& [key, value] : j["diffs"].items()) {
      const std::string w = where + ".diffs." + key;
      const int n = as_degree(key, w);
      const Matrix m = matrix_from_json(value);
      if (n < lo || n >= hi) {
        if (!m.is_zero()) fail(w, "nonzero differential leaves the support");
        continue;
      }
      if (m.rows() != dims[std::size_t(n + 1 - lo)] || m.cols() != dims[std::size_t(n - lo)])
        fail(w, "shape does not match the components");
      diffs[std::size_t(n - lo)] = m;
    }
  }
  ChainObject x(h, lo, std::move(summands), std::move(diffs));
  if (const auto bad = x.validate(); !bad.empty()) throw MathError(where + ": not a complex (" + bad.front() + ")");
  return x;
}

ChainMap Workspace::map(const std::string& ref, const fs::path& base) {
  const std::string key = resolve(ref, base);
  if (auto it = maps_.find(key); it != maps_.end()) return it->second;
  const ChainMap f = map_value(read_json_file(key), fs::path(key).parent_path(), key);
  maps_[key] = f;
  return f;
}

namespace {

std::map<int, Matrix> components_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object keyed by degree");
  std::map<int, Matrix> out;
  for (const auto& [key, value] : j.items()) out[as_degree(key, where + "." + key)] = matrix_from_json(value);
  return out;
}

Json components_to_json(const std::map<int, Matrix>& comps) {
  Json j = Json::object();
  for (const auto& [n, m] : comps)
    if (!m.is_zero()) j[std::to_string(n)] = matrix_to_json(m);
  return j;
}

// Shapes of components of a degree-k map x -> y.
void check_components(const std::map<int, Matrix>& comps, const ChainObject& x, const ChainObject& y, int k,
                      const std::string& where) {
  for (const auto& [n, m] : comps) {
    if (m.is_zero()) continue;
    if (m.rows() != y.dim(n + k) || m.cols() != x.dim(n))
      fail(where + "." + std::to_string(n), "shape does not match source and target");
  }
}

}  // namespace

ChainMap Workspace::map_value(const Json& j, const fs::path& base, const std::string& where) {
  if (j.is_string()) return map(j.get<std::string>(), base);
  ChainMap f;
  f.source = complex_value(field(j, "source", where), base, where + ".source");
  f.target = complex_value(field(j, "target", where), base, where + ".target");
  if (f.source.algebra_ptr() != f.target.algebra_ptr()) fail(where, "source and target over different categories");
  f.components = components_from_json(j.contains("components") ? j["components"] : Json::object(), where + ".components");
  check_components(f.components, f.source, f.target, 0, where + ".components");
  for (auto it = f.components.begin(); it != f.components.end();)
    it = it->second.is_zero() ? f.components.erase(it) : std::next(it);
  if (!is_chain_map(f)) throw MathError(where + ": not a chain map");
  return f;
}

LoadedDiagram Workspace::diagram(const std::string& ref, const fs::path& base) {
  const std::string key = resolve(ref, base);
  const Json j = read_json_file(key);
  const fs::path dir = fs::path(key).parent_path();
  LoadedDiagram out;
  const std::string kind = j.value("kind", j.contains("labels") ? "ribbon" : "graded");
  try {
    if (kind == "graded") {
      out.graded = true;
      out.strings = graded_diagram_from_json(j);
      return out;
    }
    if (kind != "ribbon") fail(key + ".kind", "expected \"graded\" or \"ribbon\"");
    out.ribbon = ribbon_diagram_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(key + ": " + e.what());
  }
  if (j.contains("labels")) {
    const Json& labels = j["labels"];
    const Json objs = labels.value("objects", Json::array());
    const Json mors = labels.value("morphisms", Json::array());
    for (std::size_t k = 0; k < objs.size(); ++k)
      out.labels.objects.push_back(complex_value(objs[k], dir, key + ".labels.objects[" + std::to_string(k) + "]"));
    for (std::size_t k = 0; k < mors.size(); ++k)
      out.labels.morphisms.push_back(map_value(mors[k], dir, key + ".labels.morphisms[" + std::to_string(k) + "]"));
  }
  return out;
}

MarkedSurface Workspace::surface(const std::string& ref, const fs::path& base, const HopfPtr& fallback) {
  const std::string key = resolve(ref, base);
  const Json j = read_json_file(key);
  const fs::path dir = fs::path(key).parent_path();
  MarkedSurface s;
  s.genus = as_index(field(j, "genus", key), key + ".genus");
  const Json marks = j.value("markings", Json::array());
  if (!marks.is_array()) fail(key + ".markings", "expected an array");
  for (std::size_t k = 0; k < marks.size(); ++k) {
    const std::string w = key + ".markings[" + std::to_string(k) + "]";
    Marking m;
    m.label = complex_value(field(marks[k], "complex", w), dir, w + ".complex");
    m.positive = marks[k].contains("sign") ? parse_sign(marks[k]["sign"], w + ".sign") : true;
    s.markings.push_back(std::move(m));
  }
  if (j.contains("category"))
    s.algebra = category_value(j["category"], dir, key + ".category");
  else if (!s.markings.empty())
    s.algebra = s.markings.front().label.algebra_ptr();
  else if (fallback)
    s.algebra = fallback;
  else
    fail(key, "an unmarked surface needs a \"category\"");
  for (std::size_t k = 0; k < s.markings.size(); ++k)
    if (s.markings[k].label.algebra_ptr() != s.algebra)
      fail(key + ".markings[" + std::to_string(k) + "]", "complex over another category");
  return s;
}

Json Workspace::complex_to_json(const ChainObject& x) const {
  Json j;
  j["category"] = category_ref(x.algebra_ptr());
  j["support"] = Json::array({x.lo(), x.hi()});
  Json comps = Json::object(), diffs = Json::object();
  for (int n = x.lo(); n <= x.hi(); ++n) {
    Json parts = Json::array();
    for (const auto& s : x.summands(n)) parts.push_back(rep_to_json(s));
    if (!parts.empty()) comps[std::to_string(n)] = parts;
    if (n < x.hi() && !x.diff(n).is_zero()) diffs[std::to_string(n)] = matrix_to_json(x.diff(n));
  }
  j["components"] = comps;
  j["diffs"] = diffs;
  return j;
}

Json Workspace::map_to_json(const ChainMap& f) const {
  return {{"source", complex_to_json(f.source)},
          {"target", complex_to_json(f.target)},
          {"components", components_to_json(f.components)}};
}

// -------------------------------------------------------------- witnesses

Json homotopy_witness_to_json(const Workspace& ws, const ChainMap& f, const ChainMap& g, const ChainHomotopy& h) {
  return {{"kind", "homotopy"},
          {"f", ws.map_to_json(f)},
          {"g", ws.map_to_json(g)},
          {"components", components_to_json(h.components)}};
}

Json equivalence_witness_to_json(const Workspace& ws, const ChainMap& f, const HomotopyEquivalence& w) {
  return {{"kind", "equivalence"},
          {"map", ws.map_to_json(f)},
          {"inverse", components_to_json(w.inverse.components)},
          {"left", components_to_json(w.left.components)},
          {"right", components_to_json(w.right.components)}};
}

bool verify_witness(Workspace& ws, const Json& j, const fs::path& base) {
  const std::string where = "witness";
  const std::string kind = field(j, "kind", where).is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "homotopy") {
    const ChainMap f = ws.map_value(field(j, "f", where), base, where + ".f");
    const ChainMap g = ws.map_value(field(j, "g", where), base, where + ".g");
    ChainHomotopy h{f.source, f.target, components_from_json(field(j, "components", where), where + ".components")};
    check_components(h.components, f.source, f.target, -1, where + ".components");
    return is_homotopy(h, f, g);
  }
  if (kind == "equivalence") {
    const ChainMap f = ws.map_value(field(j, "map", where), base, where + ".map");
    HomotopyEquivalence w;
    w.inverse = {f.target, f.source, components_from_json(field(j, "inverse", where), where + ".inverse")};
    w.left = {f.source, f.source, components_from_json(field(j, "left", where), where + ".left")};
    w.right = {f.target, f.target, components_from_json(field(j, "right", where), where + ".right")};
    check_components(w.inverse.components, f.target, f.source, 0, where + ".inverse");
    check_components(w.left.components, f.source, f.source, -1, where + ".left");
    check_components(w.right.components, f.target, f.target, -1, where + ".right");
    return verify_equivalence(f, w);
  }
  fail(where + ".kind", "expected \"homotopy\" or \"equivalence\"");
}

}  // namespace chainrt
