#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainrt/chain.hpp"
#include "chainrt/diagram.hpp"
#include "chainrt/graded_strings.hpp"
#include "chainrt/hopf.hpp"
#include "chainrt/state.hpp"

namespace chainrt {

using Json = nlohmann::json;

/// Malformed or unresolvable input. The message starts with the file and
/// the JSON path of the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scalars are {"order": N, "coeffs": [[num, den], ...]}; integers and
// "p/q" strings are accepted on input.
Json scalar_to_json(const ScalarCyclo& s);
ScalarCyclo scalar_from_json(const Json& j);

// Matrices are written as {"rows", "cols", "entries": [[r, c, scalar]...]};
// a dense array of rows is accepted on input.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json hopf_to_json(const HopfAlgebraData& d);
HopfAlgebraData hopf_from_json(const Json& j);

Json rep_to_json(const RepObject& x);

Json graded_diagram_to_json(const GradedStringDiagram& d);
GradedStringDiagram graded_diagram_from_json(const Json& j);
Json ribbon_diagram_to_json(const RibbonDiagram& d);
RibbonDiagram ribbon_diagram_from_json(const Json& j);

/// A diagram file: graded strings, or a ribbon diagram with its labels.
struct LoadedDiagram {
  bool graded = false;
  GradedStringDiagram strings;
  RibbonDiagram ribbon;
  ChainLabels labels;
};

/// Everything loaded for one run, keyed by canonical reference: a builtin
/// name ("trivial", "fun_z3", "sweedler", ...) or an absolute file path.
/// Loading the same reference twice yields the same object, so algebras
/// compare equal by identity across files.
class Workspace {
 public:
  HopfPtr category(const std::string& ref, const std::filesystem::path& base = {});
  ChainObject complex(const std::string& ref, const std::filesystem::path& base = {});
  ChainMap map(const std::string& ref, const std::filesystem::path& base = {});
  LoadedDiagram diagram(const std::string& ref, const std::filesystem::path& base = {});
  /// `fallback` is the algebra of an unmarked surface that names none.
  MarkedSurface surface(const std::string& ref, const std::filesystem::path& base = {}, const HopfPtr& fallback = {});

  /// Values that are either a reference string or an inline object.
  HopfPtr category_value(const Json& j, const std::filesystem::path& base, const std::string& where);
  ChainObject complex_value(const Json& j, const std::filesystem::path& base, const std::string& where);
  ChainMap map_value(const Json& j, const std::filesystem::path& base, const std::string& where);

  /// Reference under which an algebra was loaded; throws ShapeError for an
  /// algebra that did not come from this workspace.
  std::string category_ref(const HopfPtr& h) const;

  Json complex_to_json(const ChainObject& x) const;
  Json map_to_json(const ChainMap& f) const;

 private:
  std::string resolve(const std::string& ref, const std::filesystem::path& base) const;
  RepObject rep_value(const Json& j, const HopfPtr& h, const std::filesystem::path& base, const std::string& where);

  std::map<std::string, HopfPtr> categories_;
  std::map<std::string, ChainObject> complexes_;
  std::map<std::string, ChainMap> maps_;
  std::map<const HopfAlgebra*, std::string> category_names_;
};

/// Reads a JSON file; throws ParseError with the path on failure.
Json read_json_file(const std::filesystem::path& file);

/// Witness files written by the homotopy command and read back by --verify.
Json homotopy_witness_to_json(const Workspace& ws, const ChainMap& f, const ChainMap& g, const ChainHomotopy& h);
Json equivalence_witness_to_json(const Workspace& ws, const ChainMap& f, const HomotopyEquivalence& w);
/// Replays a witness file: true iff the stated homotopy or equivalence checks.
bool verify_witness(Workspace& ws, const Json& j, const std::filesystem::path& base);

}  // namespace chainrt
