#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hpq/bochner.hpp"
#include "hpq/curvature.hpp"
#include "hpq/graph_chart.hpp"
#include "hpq/plateau.hpp"
#include "hpq/products.hpp"

namespace hpq {

/// Insertion-ordered JSON keeps reports byte-stable.
using Json = nlohmann::ordered_json;

/// Malformed input file or spec; message carries line:column when known.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses text, reporting syntax errors as "<source>:line:col: message".
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// {"kind":"product","n":[..],"alpha":[..] | "maximal","q":..}
ProductSpec product_spec_from_json(const Json& j, int* q_out = nullptr);
Json to_json(const ProductSpec& spec, int q);
/// {"kind":"pseudoflat","p":..,"q":..,"mu":[..],"theta":..}
PseudoFlatSpec pseudoflat_spec_from_json(const Json& j);
Json to_json(const PseudoFlatSpec& spec);
/// {"kind":"graph","p":..,"q":..,"half_width":..,"terms":[{"normal","coef","powers","sine","freq","phase"}]}
GraphSpec graph_spec_from_json(const Json& j);
Json to_json(const GraphSpec& spec);
/// Routes on "kind".
ImmersionChart chart_from_json(const Json& j);

/// {"p":..,"q":..,"vertices":[[..],..]}; null vectors, positive scaling only.
std::vector<BoundaryRay> rays_from_json(const Json& j, int* p_out, int* q_out);
Json rays_to_json(int p, int q, const std::vector<BoundaryRay>& rays);
Json to_json(const Polyhedron& poly);

Json to_json(const Vec& v);
Json to_json(const Mat& m);
Json to_json(const CurvatureReport& r);
Json to_json(const BoundReport& r);
Json to_json(const BochnerReport& r);
Json to_json(const CurvatureSummary& s);
/// Summary, convergence data and bound checks; per-vertex data goes to CSV.
Json to_json(const SolveResult& r, const SolverConfig& config);

/// Minimal CSV writer with %.17g numbers.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return out_; }
  static std::string num(double x);

 private:
  std::size_t cols_;
  std::string out_;
};

/// param_hint, Scal, |II|^2, max Ric eigenvalue, |H| and support flag per vertex.
std::string vertex_csv(const SolveResult& r);

}  // namespace hpq
