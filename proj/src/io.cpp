#include "hpq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hpq/error.hpp"

namespace hpq {

namespace {

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw SpecError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

double num_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw SpecError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::vector<double> num_array(const Json& v, const char* key) {
  if (!v.is_array()) throw SpecError(std::string("field \"") + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw SpecError(std::string("field \"") + key + "\" must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> int_array(const Json& v, const char* key) {
  if (!v.is_array()) throw SpecError(std::string("field \"") + key + "\" must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw SpecError(std::string("field \"") + key + "\" must be an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    const auto pos = what.find("parse error");
    if (pos != std::string::npos) what = what.substr(pos);
    throw SpecError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write " + path);
  out << text;
  if (!out) throw SpecError("write failed for " + path);
}

ProductSpec product_spec_from_json(const Json& j, int* q_out) {
  ProductSpec s;
  s.n = int_array(field(j, "n"), "n");
  const Json& a = field(j, "alpha");
  if (a.is_string()) {
    if (a.get<std::string>() != "maximal") throw SpecError("field \"alpha\" must be an array or \"maximal\"");
    s.alpha = maximal_weights(s.n);
  } else {
    s.alpha = num_array(a, "alpha");
  }
  const int q = j.contains("q") ? int_field(j, "q") : s.k();
  if (q_out) *q_out = q;
  return s;
}

Json to_json(const ProductSpec& spec, int q) {
  Json j;
  j["kind"] = "product";
  j["n"] = spec.n;
  j["alpha"] = spec.alpha;
  j["q"] = q;
  return j;
}

PseudoFlatSpec pseudoflat_spec_from_json(const Json& j) {
  PseudoFlatSpec s;
  s.p = int_field(j, "p");
  s.q = int_field(j, "q");
  s.mu = j.contains("mu") ? num_array(j.at("mu"), "mu") : std::vector<double>{};
  s.theta = j.contains("theta") ? num_field(j, "theta") : 0.0;
  return s;
}

Json to_json(const PseudoFlatSpec& spec) {
  Json j;
  j["kind"] = "pseudoflat";
  j["p"] = spec.p;
  j["q"] = spec.q;
  j["mu"] = spec.mu;
  j["theta"] = spec.theta;
  return j;
}

GraphSpec graph_spec_from_json(const Json& j) {
  GraphSpec s;
  s.p = int_field(j, "p");
  s.q = int_field(j, "q");
  if (j.contains("half_width")) s.half_width = num_field(j, "half_width");
  if (j.contains("terms")) {
    const Json& ts = j.at("terms");
    if (!ts.is_array()) throw SpecError("field \"terms\" must be an array");
    for (const auto& t : ts) {
      GraphTerm g;
      g.normal = int_field(t, "normal");
      g.coef = num_field(t, "coef");
      if (t.contains("powers")) g.powers = int_array(t.at("powers"), "powers");
      if (t.contains("sine")) {
        if (!t.at("sine").is_boolean()) throw SpecError("field \"sine\" must be a boolean");
        g.sine = t.at("sine").get<bool>();
      }
      if (t.contains("freq")) g.freq = num_array(t.at("freq"), "freq");
      if (t.contains("phase")) g.phase = num_field(t, "phase");
      s.terms.push_back(std::move(g));
    }
  }
  return s;
}

Json to_json(const GraphSpec& spec) {
  Json j;
  j["kind"] = "graph";
  j["p"] = spec.p;
  j["q"] = spec.q;
  j["half_width"] = spec.half_width;
  Json ts = Json::array();
  for (const auto& t : spec.terms) {
    Json o;
    o["normal"] = t.normal;
    o["coef"] = t.coef;
    o["powers"] = t.powers;
    o["sine"] = t.sine;
    o["freq"] = t.freq;
    o["phase"] = t.phase;
    ts.push_back(std::move(o));
  }
  j["terms"] = std::move(ts);
  return j;
}

ImmersionChart chart_from_json(const Json& j) {
  const Json& k = field(j, "kind");
  if (!k.is_string()) throw SpecError("field \"kind\" must be a string");
  const std::string kind = k.get<std::string>();
  if (kind == "product") {
    int q = 0;
    const ProductSpec s = product_spec_from_json(j, &q);
    return product_chart(s, q);
  }
  if (kind == "pseudoflat") return pseudoflat_chart(pseudoflat_spec_from_json(j));
  if (kind == "graph") return graph_chart(graph_spec_from_json(j));
  throw SpecError("unknown chart kind \"" + kind + "\"");
}

std::vector<BoundaryRay> rays_from_json(const Json& j, int* p_out, int* q_out) {
  const int p = int_field(j, "p"), q = int_field(j, "q");
  if (p < 1 || q < 0) throw SpecError("need p >= 1 and q >= 0");
  const Json& vs = field(j, "vertices");
  if (!vs.is_array()) throw SpecError("field \"vertices\" must be an array of vectors");
  const QuadraticSpace s(p, q);
  std::vector<BoundaryRay> rays;
  for (const auto& v : vs) {
    const std::vector<double> c = num_array(v, "vertices");
    if (static_cast<int>(c.size()) != p + q + 1) {
      throw SpecError("vertex " + std::to_string(rays.size()) + " must have p+q+1 = " + std::to_string(p + q + 1) +
                      " coordinates");
    }
    rays.emplace_back(s, Eigen::Map<const Vec>(c.data(), static_cast<Eigen::Index>(c.size())));
  }
  if (p_out) *p_out = p;
  if (q_out) *q_out = q;
  return rays;
}

Json rays_to_json(int p, int q, const std::vector<BoundaryRay>& rays) {
  Json j;
  j["p"] = p;
  j["q"] = q;
  Json vs = Json::array();
  for (const auto& r : rays) vs.push_back(to_json(r.rep()));
  j["vertices"] = std::move(vs);
  return j;
}

Json to_json(const Polyhedron& poly) { return rays_to_json(poly.p(), poly.q(), poly.vertices()); }

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Mat& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    a.push_back(std::move(row));
  }
  return a;
}

Json to_json(const CurvatureReport& r) {
  Json j;
  j["p"] = r.p;
  j["c"] = r.c;
  j["sec"] = to_json(r.sec);
  j["ric"] = to_json(r.ric);
  j["ric_eigenvalues"] = to_json(r.ric_eigenvalues);
  j["scal"] = r.scal;
  j["trace_residual"] = r.trace_residual;
  j["gauss_residual"] = r.gauss_residual ? Json(*r.gauss_residual) : Json(nullptr);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["scal_margin"] = r.scal_margin;
  j["ii_margin"] = r.ii_margin;
  j["ric_max"] = r.ric_max;
  j["maximal"] = r.maximal;
  j["warning"] = r.warning;
  return j;
}

Json to_json(const BochnerReport& r) {
  Json j;
  j["grad_II_sq"] = r.grad_II_sq;
  j["comm_sq"] = r.comm_sq;
  j["sec_sq"] = r.sec_sq;
  j["scal_term"] = r.scal_term;
  j["ric_sq"] = r.ric_sq;
  j["r_offdiag_sq"] = r.r_offdiag_sq;
  j["rhs_total"] = r.rhs_total;
  j["lhs_fd"] = r.lhs_fd;
  j["residual"] = r.residual;
  j["scal"] = r.scal;
  j["mean_curvature_norm"] = r.mean_curvature_norm;
  j["identity_asserted"] = r.identity_asserted;
  return j;
}

Json to_json(const CurvatureSummary& s) {
  Json j;
  j["vertices"] = s.vertices;
  j["min_scal"] = s.min_scal;
  j["max_scal"] = s.max_scal;
  j["min_ii_sq"] = s.min_ii_sq;
  j["max_ii_sq"] = s.max_ii_sq;
  j["max_ric"] = s.max_ric;
  j["max_H"] = s.max_H;
  return j;
}

Json to_json(const SolveResult& r, const SolverConfig& config) {
  Json j;
  j["converged"] = r.converged;
  j["residual_H"] = r.residual_H;
  j["tol_H"] = config.tol_H;
  j["iterations"] = r.iterations;
  j["vertices"] = r.mesh.size();
  j["interior_vertices"] = r.mesh.interior_count();
  j["summary"] = to_json(r.summary);
  j["bounds_ok"] = r.bounds_ok;
  j["violations"] = r.violations;
  j["history"] = r.history;
  return j;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : cols_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != cols_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      out_ += '"';
      for (char ch : c) {
        if (ch == '"') out_ += '"';
        out_ += ch;
      }
      out_ += '"';
    } else {
      out_ += c;
    }
  }
  out_ += '\n';
}

std::string CsvWriter::num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string vertex_csv(const SolveResult& r) {
  CsvWriter w({"vertex", "s", "t", "boundary", "supported", "scal", "ii_sq", "ric_max", "H"});
  for (int i = 0; i < r.mesh.size(); ++i) {
    const VertexReport& v = r.vertices[i];
    w.row({std::to_string(i), CsvWriter::num(v.param[0]), CsvWriter::num(v.param[1]),
           r.mesh.boundary[i] ? "1" : "0", v.supported ? "1" : "0", CsvWriter::num(v.scal),
           CsvWriter::num(v.ii_sq), CsvWriter::num(v.ric_max), CsvWriter::num(v.H)});
  }
  return w.str();
}

}  // namespace hpq
