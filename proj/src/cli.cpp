#include "hpq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hpq/bochner.hpp"
#include "hpq/curvature.hpp"
#include "hpq/error.hpp"
#include "hpq/graph_chart.hpp"
#include "hpq/immersion.hpp"
#include "hpq/io.hpp"
#include "hpq/plateau.hpp"
#include "hpq/products.hpp"
#include "hpq/random.hpp"

namespace hpq::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double gauss = 1e-6;
  double codazzi = 1e-6;
  double ricci = 1e-6;
  double trace = 1e-7;
  double closed = 1e-9;      // product constants, mean curvature, Ricci spectrum
  double invariant = 1e-8;   // Scal, |II|^2, sectional curvature, pseudo-flat H
  double bochner = 1e-5;
  double max_principle = 1e-4;
  double maximal = 1e-5;     // |H| below this counts as maximal
  double H = 1e-3;           // Plateau residual
  double scal = 1e-2;        // Plateau Scal cap
  double ii = 5e-2;          // Plateau |II|^2 slack
  double study = 1e-2;       // Plateau truncation study
};

struct Options {
  std::string suite = "all";
  std::string p, q;
  int count = 100;
  std::string n, alpha;
  std::string theta, mu, k;
  std::string at;
  std::string report = "curvature";
  std::string family = "product";
  std::string polyhedron = "canonical";
  double jitter = 0.05;
  double R = 3.0;
  int rings = 40;
  std::string levels;
  int max_iters = 20000;
  int fit_ring = 2;
  int fit_degree = 4;
  double step = 0.0;
  bool study = false;
  std::string csv;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string input, output;
  Tolerances tol;
};

// ---------- parsing helpers ----------

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* flag) {
  std::vector<double> out;
  for (const auto& item : split(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError(std::string(flag) + ": not a number: \"" + item + "\"");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s, const char* flag) {
  std::vector<int> out;
  for (const auto& item : split(s)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError(std::string(flag) + ": not an integer: \"" + item + "\"");
    out.push_back(v);
  }
  return out;
}

std::optional<int> single_int(const std::string& s, const char* flag) {
  const auto v = parse_ints(s, flag);
  if (v.empty()) return std::nullopt;
  if (v.size() != 1) throw UsageError(std::string(flag) + " takes one value here");
  return v[0];
}

Param param_or_origin(const std::string& at, int p) {
  Param u = parse_doubles(at, "--at");
  if (u.empty()) return Param(p, 0.0);
  if (static_cast<int>(u.size()) != p) throw UsageError("--at needs " + std::to_string(p) + " coordinates");
  return u;
}

std::uint64_t case_seed(std::uint64_t seed, int i) {
  return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1);
}

// ---------- deterministic parallel map ----------

struct CaseOutcome {
  Json entry;
  std::vector<std::string> failures;
};

template <class F>
std::vector<CaseOutcome> run_cases(int n, int jobs, F f) {
  std::vector<CaseOutcome> out(n);
  auto one = [&](int i) {
    try {
      out[i] = f(i);
    } catch (const std::exception& e) {
      out[i].entry = Json::object();
      out[i].entry["case"] = i;
      out[i].entry["error"] = e.what();
      out[i].failures.push_back("case " + std::to_string(i) + ": " + e.what());
    }
  };
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) one(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(jobs, n); ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) one(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

void collect(const std::vector<CaseOutcome>& cases, Json& results, Json& failures) {
  for (const auto& c : cases) {
    results.push_back(c.entry);
    for (const auto& f : c.failures) failures.push_back(f);
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Adds a failure when value > tol.
void expect_below(std::vector<std::string>& failures, const std::string& what, double value, double tol) {
  if (!(value < tol)) failures.push_back(what + " = " + fmt(value) + " not below " + fmt(tol));
}

Json tolerances_json(const Tolerances& t) {
  Json j;
  j["gauss"] = t.gauss;
  j["codazzi"] = t.codazzi;
  j["ricci"] = t.ricci;
  j["trace"] = t.trace;
  j["closed"] = t.closed;
  j["invariant"] = t.invariant;
  j["bochner"] = t.bochner;
  j["max_principle"] = t.max_principle;
  j["maximal"] = t.maximal;
  j["H"] = t.H;
  j["scal"] = t.scal;
  j["ii"] = t.ii;
  j["study"] = t.study;
  return j;
}

// ---------- shared geometry checks ----------

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

struct FundamentalResiduals {
  double gauss = 0.0;
  double codazzi = 0.0;
  double ricci = 0.0;
  double trace = 0.0;
};

FundamentalResiduals fundamental_residuals(const ImmersionChart& c, const Param& u) {
  FundamentalResiduals r;
  const CurvatureReport cr = curvature_at(c, u);
  r.gauss = cr.gauss_residual.value_or(0.0);
  r.trace = cr.trace_residual;
  r.codazzi = covariant_derivative_II(c, u).codazzi_residual;
  if (c.q() >= 2) {
    r.ricci = max_abs_diff(normal_curvature(fundamental_data(c, u)).r, normal_curvature_fd(c, u).r);
  }
  return r;
}

Json residuals_json(const FundamentalResiduals& r) {
  Json j;
  j["gauss"] = r.gauss;
  j["codazzi"] = r.codazzi;
  j["ricci"] = r.ricci;
  j["trace"] = r.trace;
  return j;
}

// Unit tangent N_i = II(X_i, X_i) for each factor, from coordinate vectors of the factor blocks.
std::vector<Vec> product_N(const ProductSpec& spec, const ImmersionChart& c, const Param& u) {
  const LocalGeometry g = local_geometry(c, u);
  const int p = spec.p();
  std::vector<Vec> out;
  int start = 0;
  for (int i = 0; i < spec.k(); ++i) {
    const int j = start;
    out.push_back(g.ii[j * p + j] / g.metric(j, j));
    start += spec.n[i];
  }
  return out;
}

// Product constants, closed-form H and (for maximal weights) Scal and |II|^2.
CaseOutcome product_case(const ProductSpec& spec, int q, const Param& u, const Tolerances& tol) {
  CaseOutcome o;
  const ImmersionChart c = product_chart(spec, q);
  const QuadraticSpace s(spec.p(), q);
  const int p = spec.p(), k = spec.k();
  const std::string name = c.label().empty() ? "product" : c.label();
  const std::vector<Vec> N = product_N(spec, c, u);
  double n_err = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double expect = i == j ? 1.0 - 1.0 / (spec.alpha[i] * spec.alpha[i]) : 1.0;
      n_err = std::max(n_err, std::abs(s.inner(N[i], N[j]) - expect));
    }
  const FundamentalData fd = fundamental_data(c, u);
  const Vec h = product_mean_curvature(spec, product_factor_points(spec, q, u));
  const double h_err = (fd.mean_curvature - h).norm();
  const CurvatureReport cr = curvature_from_II(fd);
  o.entry["chart"] = name;
  o.entry["n"] = spec.n;
  o.entry["alpha"] = spec.alpha;
  o.entry["q"] = q;
  o.entry["u"] = u;
  o.entry["N_gram_error"] = n_err;
  o.entry["mean_curvature_error"] = h_err;
  o.entry["scal"] = cr.scal;
  o.entry["ii_sq"] = fd.ii_norm_sq();
  expect_below(o.failures, name + ": <N_i,N_j> error", n_err, tol.closed);
  expect_below(o.failures, name + ": mean curvature error", h_err, tol.closed);
  const std::vector<double> mw = maximal_weights(spec.n);
  if (max_abs_diff(mw, spec.alpha) < 1e-12) {
    const double scal_err = std::abs(cr.scal + double(p) * (p - k));
    const double ii_err = std::abs(fd.ii_norm_sq() - double(p) * (k - 1));
    const bool expect_eq = k == std::min(p, q + 1);
    const bool eq = std::abs(cr.scal - scal_bound(p, q)) < tol.invariant &&
                    std::abs(fd.ii_norm_sq() - ii_bound(p, q)) < tol.invariant;
    o.entry["scal_error"] = scal_err;
    o.entry["ii_sq_error"] = ii_err;
    o.entry["equality"] = eq;
    o.entry["equality_expected"] = expect_eq;
    expect_below(o.failures, name + ": Scal + p(p-k)", scal_err, tol.invariant);
    expect_below(o.failures, name + ": |II|^2 - p(k-1)", ii_err, tol.invariant);
    if (eq != expect_eq) o.failures.push_back(name + ": bound equality does not match k = min{p, q+1}");
  }
  return o;
}

// ---------- verify ----------

Json verify_fundamental(const Options& o, Json& failures, const std::optional<int>& fp,
                        const std::optional<int>& fq) {
  const auto cases = run_cases(o.count, o.jobs, [&](int i) {
    CaseOutcome out;
    Lcg64 rng(case_seed(o.seed, i));
    const int p = fp ? *fp : 2 + i % 2;
    const int q = fq ? *fq : 1 + (i / 2) % 2;
    const ImmersionChart c = graph_chart(random_graph_spec(p, q, rng));
    Param u(p);
    for (auto& x : u) x = rng.uniform(-0.2, 0.2);
    const FundamentalResiduals r = fundamental_residuals(c, u);
    out.entry["case"] = i;
    out.entry["p"] = p;
    out.entry["q"] = q;
    out.entry["u"] = u;
    out.entry["residuals"] = residuals_json(r);
    const std::string tag = "fundamental case " + std::to_string(i) + ": ";
    expect_below(out.failures, tag + "Gauss residual", r.gauss, o.tol.gauss);
    expect_below(out.failures, tag + "Codazzi residual", r.codazzi, o.tol.codazzi);
    expect_below(out.failures, tag + "Ricci residual", r.ricci, o.tol.ricci);
    return out;
  });
  Json results = Json::array();
  collect(cases, results, failures);
  return results;
}

// Closed-form charts added to the random corpus for the trace identity.
std::vector<std::pair<std::string, ImmersionChart>> closed_form_corpus() {
  std::vector<std::pair<std::string, ImmersionChart>> out;
  for (int p : {2, 3}) out.emplace_back("totally geodesic p=" + std::to_string(p), totally_geodesic_chart(p, 1));
  out.emplace_back("product n=(1,1) alpha=(0.8,0.6)", product_chart(ProductSpec{{1, 1}, {0.8, 0.6}}, 1));
  for (auto n : {std::vector<int>{1, 1}, {2, 1}, {1, 1, 1}, {2, 2}}) {
    const ProductSpec s = maximal_product(n);
    std::string name = "maximal product n=(";
    for (std::size_t i = 0; i < n.size(); ++i) name += (i ? "," : "") + std::to_string(n[i]);
    out.emplace_back(name + ")", product_chart(s, s.k()));
  }
  out.emplace_back("pseudo-flat p=2 q=1", pseudoflat_chart(PseudoFlatSpec{2, 1, {}, 0.0}));
  out.emplace_back("pseudo-flat p=2 q=2 theta=0.3", pseudoflat_chart(PseudoFlatSpec{2, 2, {1.0}, 0.3}));
  out.emplace_back("pseudo-flat p=2 q=3 theta=0.5", pseudoflat_chart(PseudoFlatSpec{2, 3, {0.6, 0.8}, 0.5}));
  return out;
}

Json verify_trace(const Options& o, Json& failures, const std::optional<int>& fp, const std::optional<int>& fq) {
  const auto corpus = closed_form_corpus();
  const int nc = static_cast<int>(corpus.size());
  const auto cases = run_cases(o.count + nc, o.jobs, [&](int i) {
    CaseOutcome out;
    Lcg64 rng(case_seed(o.seed, i));
    std::string name;
    std::optional<ImmersionChart> c;
    if (i < nc) {
      name = corpus[i].first;
      c = corpus[i].second;
    } else {
      const int j = i - nc;
      const int p = fp ? *fp : 2 + j % 2;
      const int q = fq ? *fq : 1 + (j / 2) % 2;
      c = graph_chart(random_graph_spec(p, q, rng));
      name = "random graph " + std::to_string(j);
    }
    Param u(c->p());
    for (auto& x : u) x = rng.uniform(-0.2, 0.2);
    const FundamentalData fd = fundamental_data(*c, u);
    const CurvatureReport cr = curvature_from_II(fd);
    out.entry["chart"] = name;
    out.entry["p"] = c->p();
    out.entry["q"] = c->q();
    out.entry["trace_residual"] = cr.trace_residual;
    expect_below(out.failures, name + ": trace residual", cr.trace_residual, o.tol.trace);
    return out;
  });
  Json results = Json::array();
  collect(cases, results, failures);
  return results;
}

Json verify_products(const Options& o, Json& failures) {
  struct Item {
    ProductSpec spec;
    int q;
  };
  std::vector<Item> items{{ProductSpec{{1, 1}, {0.8, 0.6}}, 1}, {ProductSpec{{1, 2}, {0.6, 0.8}}, 1},
                          {ProductSpec{{2, 1, 1}, {0.6, 0.64, 0.48}}, 2}};
  for (auto n : {std::vector<int>{1, 1}, {2, 1}, {1, 1, 1}, {2, 2}, {3, 1}, {2, 1, 1}, {1, 1, 1, 1}}) {
    const ProductSpec s = maximal_product(n);
    items.push_back({s, s.k() - 1 > 0 ? s.k() - 1 : 1});
    items.push_back({s, s.k()});
  }
  // p = 4, q = 3: k = 1..4 all embed.
  for (auto n : {std::vector<int>{4}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}}) items.push_back({maximal_product(n), 3});
  const auto cases = run_cases(static_cast<int>(items.size()), o.jobs, [&](int i) {
    Lcg64 rng(case_seed(o.seed, i));
    Param u(items[i].spec.p());
    for (auto& x : u) x = rng.uniform(-0.5, 0.5);
    CaseOutcome out = product_case(items[i].spec, items[i].q, u, o.tol);
    out.entry["case"] = i;
    return out;
  });
  Json results = Json::array();
  collect(cases, results, failures);
  return results;
}

Json verify_pseudoflat(const Options& o, Json& failures) {
  std::vector<PseudoFlatSpec> specs{{2, 1, {}, 0.0},     {2, 2, {1.0}, 0.3},        {2, 3, {0.6, 0.8}, 0.5},
                                    {3, 2, {}, 0.0},     {3, 3, {-1.0}, 0.2},       {2, 2, {1.0}, 0.0}};
  const int per = 4;
  const auto cases = run_cases(static_cast<int>(specs.size()) * per, o.jobs, [&](int i) {
    CaseOutcome out;
    const PseudoFlatSpec& spec = specs[i / per];
    Lcg64 rng(case_seed(o.seed, i));
    Param u(spec.p);
    for (auto& x : u) x = rng.uniform(-1.0, 1.0);
    const ImmersionChart c = pseudoflat_chart(spec);
    const FundamentalData fd = fundamental_data(c, u);
    const CurvatureReport cr = curvature_from_II(fd);
    const double h_err = (fd.mean_curvature - pseudoflat_mean_curvature(spec, u)).norm();
    const std::string name = "pseudo-flat p=" + std::to_string(spec.p) + " q=" + std::to_string(spec.q) +
                             " theta=" + fmt(spec.theta);
    out.entry["chart"] = name;
    out.entry["u"] = u;
    out.entry["mean_curvature_error"] = h_err;
    out.entry["scal"] = cr.scal;
    out.entry["ii_sq"] = fd.ii_norm_sq();
    out.entry["H_norm"] = std::sqrt(fd.mean_curvature_norm_sq());
    expect_below(out.failures, name + ": mean curvature error", h_err, o.tol.invariant);
    double sec = 0.0;
    for (int a = 0; a < spec.p; ++a)
      for (int b = 0; b < spec.p; ++b)
        if (a != b) sec = std::max(sec, std::abs(cr.sec(a, b)));
    out.entry["max_abs_sec"] = sec;
    expect_below(out.failures, name + ": |sec|", sec, o.tol.invariant);
    expect_below(out.failures, name + ": |Scal|", std::abs(cr.scal), o.tol.invariant);
    if (spec.theta == 0.0) {
      const double ii_err = std::abs(fd.ii_norm_sq() - double(spec.p) * (spec.p - 1));
      out.entry["ii_sq_error"] = ii_err;
      expect_below(out.failures, name + ": |II|^2 - p(p-1)", ii_err, o.tol.invariant);
      expect_below(out.failures, name + ": |H|", std::sqrt(fd.mean_curvature_norm_sq()), o.tol.invariant);
    }
    return out;
  });
  Json results = Json::array();
  collect(cases, results, failures);
  return results;
}

Json bochner_json(const BochnerReport& r, int p) {
  Json j = to_json(r);
  j["max_principle"] = maximum_principle_inequality(r, p);
  return j;
}

Json verify_bochner(const Options& o, Json& failures) {
  struct Item {
    std::string name;
    ImmersionChart chart;
    std::optional<std::array<double, 6>> table;
  };
  std::vector<Item> items;
  items.push_back({"totally geodesic H^3 in H^{3,1}", totally_geodesic_chart(3, 1),
                   std::array<double, 6>{0, 0, 6, -18, 12, 0}});
  items.push_back({"maximal H^2 x H^1 in H^{3,1}", product_chart(maximal_product({2, 1}), 1),
                   std::array<double, 6>{0, 0, 4.5, -9, 4.5, 0}});
  for (int p : {2, 4}) items.push_back({"totally geodesic H^" + std::to_string(p), totally_geodesic_chart(p, 1), {}});
  for (auto n : {std::vector<int>{1, 1}, {1, 2}, {2, 2}, {3, 1}, {1, 1, 1}, {2, 1, 1}}) {
    const ProductSpec s = maximal_product(n);
    std::string name = "maximal product n=(";
    for (std::size_t i = 0; i < n.size(); ++i) name += (i ? "," : "") + std::to_string(n[i]);
    items.push_back({name + ")", product_chart(s, s.k()), {}});
  }
  items.push_back({"pseudo-flat p=2 q=1", pseudoflat_chart(PseudoFlatSpec{2, 1, {}, 0.0}), {}});
  items.push_back({"pseudo-flat p=3 q=2", pseudoflat_chart(PseudoFlatSpec{3, 2, {}, 0.0}), {}});
  const auto cases = run_cases(static_cast<int>(items.size()), o.jobs, [&](int i) {
    CaseOutcome out;
    const Item& it = items[i];
    Lcg64 rng(case_seed(o.seed, i));
    Param u(it.chart.p());
    for (auto& x : u) x = rng.uniform(-0.3, 0.3);
    const BochnerReport r = bochner_terms(it.chart, u);
    const int p = it.chart.p();
    out.entry["chart"] = it.name;
    out.entry["u"] = u;
    out.entry["terms"] = bochner_json(r, p);
    expect_below(out.failures, it.name + ": Bochner residual", std::abs(r.residual), o.tol.bochner);
    const double mp = maximum_principle_inequality(r, p);
    if (!(mp >= -o.tol.max_principle)) {
      out.failures.push_back(it.name + ": Lap Scal - 2p Scal = " + fmt(mp) + " below -" + fmt(o.tol.max_principle));
    }
    if (it.table) {
      const std::array<double, 6> got{r.grad_II_sq, r.comm_sq, r.sec_sq, r.scal_term, r.ric_sq, r.r_offdiag_sq};
      double d = 0.0;
      for (int t = 0; t < 6; ++t) d = std::max(d, std::abs(got[t] - (*it.table)[t]));
      out.entry["expected_table"] = *it.table;
      out.entry["table_error"] = d;
      expect_below(out.failures, it.name + ": six-term table error", d, o.tol.invariant);
      expect_below(out.failures, it.name + ": six-term sum", std::abs(r.rhs_total), o.tol.invariant);
    }
    return out;
  });
  Json results = Json::array();
  collect(cases, results, failures);
  return results;
}

// Sorted shape-operator spectrum against {sqrt((p-k)/k) x k, -sqrt(k/(p-k)) x (p-k)} up to the normal's sign.
double shape_spectrum_error(const FundamentalData& fd, int k) {
  const int p = fd.p;
  Eigen::SelfAdjointEigenSolver<Mat> es(fd.h[0]);
  std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + p);
  std::vector<double> expect;
  for (int i = 0; i < k; ++i) expect.push_back(std::sqrt(double(p - k) / k));
  for (int i = 0; i < p - k; ++i) expect.push_back(-std::sqrt(double(k) / (p - k)));
  std::vector<double> flipped;
  for (double x : expect) flipped.push_back(-x);
  std::sort(got.begin(), got.end());
  std::sort(expect.begin(), expect.end());
  std::sort(flipped.begin(), flipped.end());
  return std::min(max_abs_diff(got, expect), max_abs_diff(got, flipped));
}

Json verify_ricci(const Options& o, Json& failures) {
  struct Item {
    std::vector<int> n;
    double ric_max;
  };
  std::vector<Item> items{{{2, 1}, 0.0}, {{3, 1}, 0.0}, {{4, 1}, 0.0}, {{2, 2}, -2.0}, {{1, 1}, 0.0}, {{1, 3}, 0.0}};
  const auto cases = run_cases(static_cast<int>(items.size()), o.jobs, [&](int i) {
    CaseOutcome out;
    const ProductSpec spec = maximal_product(items[i].n);
    const int p = spec.p(), k = spec.n[0];
    Lcg64 rng(case_seed(o.seed, i));
    Param u(p);
    for (auto& x : u) x = rng.uniform(-0.5, 0.5);
    const FundamentalData fd = fundamental_data(product_chart(spec, 1), u);
    const CurvatureReport cr = curvature_from_II(fd);
    const std::string name = "maximal H^" + std::to_string(k) + " x H^" + std::to_string(p - k) + " in H^{" +
                             std::to_string(p) + ",1}";
    const double ric_err = std::abs(cr.ric_eigenvalues[0] - items[i].ric_max);
    const double spec_err = shape_spectrum_error(fd, k);
    out.entry["chart"] = name;
    out.entry["u"] = u;
    out.entry["ric_max"] = cr.ric_eigenvalues[0];
    out.entry["ric_max_expected"] = items[i].ric_max;
    out.entry["shape_spectrum_error"] = spec_err;
    expect_below(out.failures, name + ": max Ric eigenvalue error", ric_err, o.tol.closed);
    expect_below(out.failures, name + ": shape spectrum error", spec_err, o.tol.closed);
    return out;
  });
  Json results = Json::array();
  collect(cases, results, failures);
  return results;
}

int finish(const Options& o, const std::string& command, Json config, Json results, Json failures,
           std::ostream& out) {
  Json rep;
  rep["command"] = command;
  rep["config"] = std::move(config);
  rep["results"] = std::move(results);
  const bool failed = !failures.empty();
  rep["failures"] = std::move(failures);
  const std::string text = rep.dump(2) + "\n";
  if (o.output.empty()) {
    out << text;
  } else {
    write_text_file(o.output, text);
  }
  return failed ? 1 : 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  static const std::vector<std::string> suites{"fundamental", "trace", "products", "pseudoflat", "bochner", "ricci"};
  if (o.suite != "all" && std::find(suites.begin(), suites.end(), o.suite) == suites.end()) {
    throw UsageError("unknown suite \"" + o.suite + "\"");
  }
  if (o.count < 0) throw UsageError("--count must be non-negative");
  const auto fp = single_int(o.p, "--p");
  const auto fq = single_int(o.q, "--q");
  if (fp && (*fp < 2 || *fp > 3)) throw UsageError("random charts need --p in {2, 3}");
  if (fq && (*fq < 1 || *fq > 2)) throw UsageError("random charts need --q in {1, 2}");
  Json config;
  config["suite"] = o.suite;
  config["p"] = fp ? Json(*fp) : Json("2,3");
  config["q"] = fq ? Json(*fq) : Json("1,2");
  config["count"] = o.count;
  config["seed"] = o.seed;
  config["tolerances"] = tolerances_json(o.tol);
  Json results = Json::object();
  Json failures = Json::array();
  auto want = [&](const char* s) { return o.suite == "all" || o.suite == s; };
  if (want("fundamental")) results["fundamental"] = verify_fundamental(o, failures, fp, fq);
  if (want("trace")) results["trace"] = verify_trace(o, failures, fp, fq);
  if (want("products")) results["products"] = verify_products(o, failures);
  if (want("pseudoflat")) results["pseudoflat"] = verify_pseudoflat(o, failures);
  if (want("bochner")) results["bochner"] = verify_bochner(o, failures);
  if (want("ricci")) results["ricci"] = verify_ricci(o, failures);
  return finish(o, "verify", std::move(config), std::move(results), std::move(failures), out);
}

// ---------- single-chart reports ----------

void chart_report(const ImmersionChart& c, const Param& u, const std::string& report, const Options& o,
                  const std::optional<Vec>& closed_H, Json& results, Json& failures) {
  const int p = c.p(), q = c.q();
  const FundamentalData fd = fundamental_data(c, u);
  const double h_norm = std::sqrt(fd.mean_curvature_norm_sq());
  results["u"] = u;
  results["H_norm"] = h_norm;
  results["ii_sq"] = fd.ii_norm_sq();
  if (closed_H) {
    const double e = (fd.mean_curvature - *closed_H).norm();
    results["mean_curvature_error"] = e;
    if (!(e < o.tol.invariant)) failures.push_back("mean curvature differs from closed form by " + fmt(e));
  }
  if (report == "curvature") {
    const CurvatureReport cr = curvature_at(c, u);
    results["scal"] = cr.scal;
    results["curvature"] = to_json(cr);
    if (!(cr.trace_residual < o.tol.trace)) failures.push_back("trace residual " + fmt(cr.trace_residual));
    if (!(cr.gauss_residual.value_or(0.0) < o.tol.gauss)) {
      failures.push_back("Gauss residual " + fmt(cr.gauss_residual.value_or(0.0)));
    }
  } else if (report == "bochner") {
    const BochnerReport r = bochner_terms(c, u);
    results["bochner"] = bochner_json(r, p);
    if (r.identity_asserted) {
      if (!(std::abs(r.residual) < o.tol.bochner)) failures.push_back("Bochner residual " + fmt(r.residual));
      const double mp = maximum_principle_inequality(r, p);
      if (!(mp >= -o.tol.max_principle)) failures.push_back("Lap Scal - 2p Scal = " + fmt(mp));
    }
  } else if (report == "fundamental") {
    const FundamentalResiduals r = fundamental_residuals(c, u);
    Json d;
    d["metric"] = to_json(fd.metric);
    Json h = Json::array();
    for (const auto& m : fd.h) h.push_back(to_json(m));
    d["shape_operators"] = std::move(h);
    d["mean_curvature"] = to_json(fd.mean_curvature);
    results["fundamental"] = std::move(d);
    results["residuals"] = residuals_json(r);
    if (!(r.gauss < o.tol.gauss)) failures.push_back("Gauss residual " + fmt(r.gauss));
    if (!(r.codazzi < o.tol.codazzi)) failures.push_back("Codazzi residual " + fmt(r.codazzi));
    if (!(r.ricci < o.tol.ricci)) failures.push_back("Ricci residual " + fmt(r.ricci));
  } else if (report == "bounds") {
    const CurvatureReport cr = curvature_from_II(fd);
    const BoundReport b = bound_check(cr, fd, p, q, o.tol.maximal);
    results["scal"] = cr.scal;
    results["bounds"] = to_json(b);
    results["scal_bound"] = scal_bound(p, q);
    results["ii_bound"] = ii_bound(p, q);
    if (b.maximal) {
      if (b.scal_margin < -o.tol.invariant) failures.push_back("Scal exceeds its bound by " + fmt(-b.scal_margin));
      if (b.ii_margin < -o.tol.invariant) failures.push_back("|II|^2 exceeds its bound by " + fmt(-b.ii_margin));
    }
  } else {
    throw UsageError("unknown --report \"" + report + "\"");
  }
}

int cmd_product(const Options& o, std::ostream& out) {
  ProductSpec spec;
  int q = 0;
  if (!o.input.empty()) {
    spec = product_spec_from_json(read_json_file(o.input), &q);
  } else {
    spec.n = parse_ints(o.n, "--n");
    if (spec.n.empty()) throw UsageError("product needs --n or --input");
    if (trim(o.alpha).empty() || trim(o.alpha) == "maximal") {
      spec.alpha = maximal_weights(spec.n);
    } else {
      spec.alpha = parse_doubles(o.alpha, "--alpha");
    }
    const auto qq = single_int(o.q, "--q");
    q = qq ? *qq : spec.k();
  }
  spec.validate();
  const ImmersionChart c = product_chart(spec, q);
  const Param u = param_or_origin(o.at, spec.p());
  Json config = to_json(spec, q);
  config["report"] = o.report;
  config["at"] = u;
  config["tolerances"] = tolerances_json(o.tol);
  Json results;
  Json failures = Json::array();
  results["p"] = spec.p();
  results["q"] = q;
  const Vec h = product_mean_curvature(spec, product_factor_points(spec, q, u));
  chart_report(c, u, o.report, o, h, results, failures);
  const CaseOutcome constants = product_case(spec, q, u, o.tol);
  results["constants"] = constants.entry;
  for (const auto& f : constants.failures) failures.push_back(f);
  return finish(o, "product", std::move(config), std::move(results), std::move(failures), out);
}

PseudoFlatSpec pseudoflat_from_options(const Options& o, const std::optional<double>& theta_override = {}) {
  PseudoFlatSpec spec;
  const auto p = single_int(o.p, "--p");
  const auto q = single_int(o.q, "--q");
  if (!p || !q) throw UsageError("pseudoflat needs --p and --q");
  spec.p = *p;
  spec.q = *q;
  if (theta_override) {
    spec.theta = *theta_override;
  } else {
    const auto t = parse_doubles(o.theta, "--theta");
    if (t.size() > 1) throw UsageError("--theta takes one value here");
    spec.theta = t.empty() ? 0.0 : t[0];
  }
  spec.mu = parse_doubles(o.mu, "--mu");
  if (trim(o.mu).empty() && spec.q + 1 - spec.p > 0) {
    spec.mu.assign(spec.q + 1 - spec.p, 0.0);
    spec.mu[0] = 1.0;
  }
  return spec;
}

int cmd_pseudoflat(const Options& o, std::ostream& out) {
  const PseudoFlatSpec spec =
      o.input.empty() ? pseudoflat_from_options(o) : pseudoflat_spec_from_json(read_json_file(o.input));
  spec.validate();
  const ImmersionChart c = pseudoflat_chart(spec);
  const Param u = param_or_origin(o.at, spec.p);
  Json config = to_json(spec);
  config["report"] = o.report;
  config["at"] = u;
  config["tolerances"] = tolerances_json(o.tol);
  Json results;
  Json failures = Json::array();
  results["p"] = spec.p;
  results["q"] = spec.q;
  results["H_norm_closed_form"] = spec.p * std::tan(spec.theta);
  chart_report(c, u, o.report, o, pseudoflat_mean_curvature(spec, u), results, failures);
  return finish(o, "pseudoflat", std::move(config), std::move(results), std::move(failures), out);
}

// ---------- bochner-check ----------

int cmd_bochner_check(const Options& o, std::ostream& out) {
  std::vector<std::pair<std::string, ImmersionChart>> charts;
  if (!o.input.empty()) {
    charts.emplace_back(o.input, chart_from_json(read_json_file(o.input)));
  } else {
    const auto fp = parse_ints(o.p, "--p");
    const auto fq = parse_ints(o.q, "--q");
    auto keep = [&](int p, int q) {
      return (fp.empty() || std::count(fp.begin(), fp.end(), p)) && (fq.empty() || std::count(fq.begin(), fq.end(), q));
    };
    for (int p = 2; p <= 4; ++p)
      for (int q = 1; q <= 2; ++q)
        if (keep(p, q)) charts.emplace_back("totally geodesic H^" + std::to_string(p), totally_geodesic_chart(p, q));
    for (auto n : {std::vector<int>{1, 1}, {2, 1}, {1, 1, 1}, {2, 2}, {3, 1}, {2, 1, 1}}) {
      const ProductSpec s = maximal_product(n);
      for (int q = s.k() - 1; q <= s.k(); ++q) {
        if (q < 1 || !keep(s.p(), q)) continue;
        std::string name = "maximal product n=(";
        for (std::size_t i = 0; i < n.size(); ++i) name += (i ? "," : "") + std::to_string(n[i]);
        charts.emplace_back(name + ")", product_chart(s, q));
      }
    }
  }
  std::vector<Param> points;
  const int np = static_cast<int>(charts.size());
  const auto cases = run_cases(np, o.jobs, [&](int i) {
    CaseOutcome r;
    const ImmersionChart& c = charts[i].second;
    const Param u = param_or_origin(o.at, c.p());
    const BochnerReport b = bochner_terms(c, u);
    r.entry["chart"] = charts[i].first;
    r.entry["p"] = c.p();
    r.entry["q"] = c.q();
    r.entry["u"] = u;
    r.entry["terms"] = bochner_json(b, c.p());
    if (b.identity_asserted) {
      expect_below(r.failures, charts[i].first + ": Bochner residual", std::abs(b.residual), o.tol.bochner);
      const double mp = maximum_principle_inequality(b, c.p());
      if (!(mp >= -o.tol.max_principle)) r.failures.push_back(charts[i].first + ": Lap Scal - 2p Scal = " + fmt(mp));
    }
    return r;
  });
  Json config;
  config["input"] = o.input;
  config["p"] = o.p;
  config["q"] = o.q;
  config["at"] = o.at;
  config["tolerances"] = tolerances_json(o.tol);
  Json results = Json::array();
  Json failures = Json::array();
  collect(cases, results, failures);
  return finish(o, "bochner-check", std::move(config), std::move(results), std::move(failures), out);
}

// ---------- plateau ----------

SolverConfig solver_config(const Options& o) {
  SolverConfig c;
  c.step = o.step;
  c.tol_H = o.tol.H;
  c.max_iters = o.max_iters;
  c.truncation_radius = o.R;
  c.fit_ring = o.fit_ring;
  c.fit_degree = o.fit_degree;
  c.rings = o.rings;
  c.levels = parse_ints(o.levels, "--levels");
  c.jobs = o.jobs;
  c.validate();
  return c;
}

Json solver_config_json(const SolverConfig& c) {
  Json j;
  j["step"] = c.step;
  j["tol_H"] = c.tol_H;
  j["max_iters"] = c.max_iters;
  j["truncation_radius"] = c.truncation_radius;
  j["fit_ring"] = c.fit_ring;
  j["fit_degree"] = c.fit_degree;
  j["rings"] = c.rings;
  j["levels"] = c.level_schedule();
  return j;
}

struct BoundarySource {
  std::string kind;
  std::optional<Polyhedron> poly;
  std::vector<BoundaryRay> rays;
  int p = 2;
  int q = 1;

  BoundaryCurve at_radius(double R) const {
    return poly ? polyhedron_boundary(*poly, R) : ray_boundary(p, q, rays, R);
  }
};

BoundarySource boundary_source(const Options& o) {
  BoundarySource b;
  if (!o.input.empty()) {
    const Json j = read_json_file(o.input);
    b.rays = rays_from_json(j, &b.p, &b.q);
    const bool is_poly = j.contains("kind") && j.at("kind") == "polyhedron";
    if (is_poly) {
      b.poly.emplace(b.p, b.q, b.rays);
      b.kind = "polyhedron file";
    } else {
      b.kind = "ray list";
    }
  } else {
    const auto q = single_int(o.q, "--q");
    b.q = q ? *q : 1;
    const auto p = single_int(o.p, "--p");
    if (p && *p != 2) throw UsageError("the Plateau solver supports p = 2 only");
    if (o.polyhedron == "canonical") {
      b.poly = Polyhedron::canonical(2, b.q);
      b.kind = "canonical";
    } else if (o.polyhedron == "jitter") {
      b.poly = jitter_polyhedron(Polyhedron::canonical(2, b.q), o.jitter, o.seed);
      b.kind = "jitter";
    } else {
      throw UsageError("--polyhedron must be canonical or jitter");
    }
  }
  if (b.p != 2) throw UsageError("the Plateau solver supports p = 2 only");
  return b;
}

void plateau_failures(const SolveResult& r, const Options& o, Json& failures, const std::string& tag) {
  if (!r.converged) failures.push_back(tag + "not converged: residual_H = " + fmt(r.residual_H));
  if (r.converged && r.summary.vertices > 0) {
    if (r.summary.max_scal > o.tol.scal) failures.push_back(tag + "max interior Scal = " + fmt(r.summary.max_scal));
    const double cap = ii_bound(r.mesh.p, r.mesh.q) + o.tol.ii;
    if (r.summary.max_ii_sq > cap) failures.push_back(tag + "max interior |II|^2 = " + fmt(r.summary.max_ii_sq));
  }
}

int cmd_plateau(const Options& o, std::ostream& out) {
  const SolverConfig config = solver_config(o);
  const BoundarySource src = boundary_source(o);
  Json cfg;
  cfg["boundary"] = src.kind;
  if (!o.input.empty()) cfg["input"] = o.input;
  if (src.kind == "jitter") {
    cfg["jitter"] = o.jitter;
    cfg["seed"] = o.seed;
  }
  cfg["R"] = o.R;
  cfg["solver"] = solver_config_json(config);
  cfg["study"] = o.study;
  cfg["tolerances"] = tolerances_json(o.tol);
  Json results;
  Json failures = Json::array();
  if (src.poly) results["polyhedron"] = to_json(*src.poly);
  const SolveResult r = solve(src.at_radius(o.R), config);
  results["solve"] = to_json(r, config);
  plateau_failures(r, o, failures, "");
  if (!o.csv.empty()) write_text_file(o.csv, vertex_csv(r));
  if (o.study) {
    // Truncation study: the curvature summary should barely move with R.
    Json study = Json::array();
    std::vector<CurvatureSummary> sums;
    for (double R : {2.0, 3.0, 4.0}) {
      SolverConfig c = config;
      c.truncation_radius = R;
      const SolveResult s = R == o.R ? r : solve(src.at_radius(R), c);
      Json e;
      e["R"] = R;
      e["converged"] = s.converged;
      e["residual_H"] = s.residual_H;
      e["summary"] = to_json(s.summary);
      study.push_back(std::move(e));
      sums.push_back(s.summary);
      plateau_failures(s, o, failures, "R = " + fmt(R) + ": ");
    }
    double change = 0.0;
    for (std::size_t a = 0; a < sums.size(); ++a)
      for (std::size_t b = a + 1; b < sums.size(); ++b) {
        change = std::max({change, std::abs(sums[a].max_scal - sums[b].max_scal),
                           std::abs(sums[a].min_scal - sums[b].min_scal),
                           std::abs(sums[a].max_ii_sq - sums[b].max_ii_sq),
                           std::abs(sums[a].min_ii_sq - sums[b].min_ii_sq)});
      }
    results["truncation_study"] = std::move(study);
    results["truncation_change"] = change;
    if (!(change < o.tol.study)) failures.push_back("curvature summary changes by " + fmt(change) + " across R");
  }
  return finish(o, "plateau", std::move(cfg), std::move(results), std::move(failures), out);
}

// ---------- sweep ----------

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + CsvWriter::num(v[i]);
  return s;
}

struct SweepRow {
  std::vector<std::string> cells;
  bool violation = false;
};

SweepRow sweep_row(const std::string& family, int p, int q, int k, const std::optional<double>& theta,
                   const Options& o) {
  SweepRow row;
  std::string n_s, alpha_s, theta_s, mu_s, status = "ok";
  std::vector<std::string> nums(6);
  try {
    std::optional<ImmersionChart> c;
    if (family == "product") {
      std::vector<int> n(k, p / k);
      for (int i = 0; i < p % k; ++i) ++n[i];
      const ProductSpec spec = maximal_product(n);
      n_s = join(spec.n);
      alpha_s = join(spec.alpha);
      c = product_chart(spec, q);
    } else {
      Options oo = o;
      oo.p = std::to_string(p);
      oo.q = std::to_string(q);
      const PseudoFlatSpec spec = pseudoflat_from_options(oo, theta);
      theta_s = CsvWriter::num(spec.theta);
      mu_s = join(spec.mu);
      spec.validate();
      c = pseudoflat_chart(spec);
    }
    const FundamentalData fd = fundamental_data(*c, Param(p, 0.0));
    const CurvatureReport cr = curvature_from_II(fd);
    const BoundReport b = bound_check(cr, fd, p, q, o.tol.maximal);
    nums = {CsvWriter::num(cr.scal),          CsvWriter::num(fd.ii_norm_sq()),
            CsvWriter::num(std::sqrt(fd.mean_curvature_norm_sq())), CsvWriter::num(b.scal_margin),
            CsvWriter::num(b.ii_margin),      CsvWriter::num(b.ric_max)};
    if (!(cr.trace_residual < o.tol.trace)) {
      status = "violation: trace residual " + fmt(cr.trace_residual);
      row.violation = true;
    } else if (b.maximal && (b.scal_margin < -o.tol.invariant || b.ii_margin < -o.tol.invariant)) {
      status = "violation: bound exceeded";
      row.violation = true;
    } else if (!b.maximal) {
      status = "ok (not maximal; bounds not asserted)";
    }
  } catch (const std::exception& e) {
    status = std::string("error: ") + e.what();
    nums.assign(6, "");
  }
  row.cells = {family, std::to_string(p), std::to_string(q), family == "product" ? std::to_string(k) : "",
               n_s,    alpha_s,           theta_s,           mu_s};
  row.cells.insert(row.cells.end(), nums.begin(), nums.end());
  row.cells.push_back(status);
  return row;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.family != "product" && o.family != "pseudoflat") throw UsageError("--family must be product or pseudoflat");
  const std::vector<int> ps = parse_ints(o.p, "--p");
  const std::vector<int> qs = parse_ints(o.q, "--q");
  const std::vector<int> ks = o.k == "default" ? std::vector<int>{} : parse_ints(o.k, "--k");
  const std::vector<double> thetas = parse_doubles(o.theta, "--theta");
  struct Cell {
    int p, q, k;
    std::optional<double> theta;
  };
  std::vector<Cell> grid;
  for (int p : ps)
    for (int q : qs) {
      if (o.family == "product") {
        // Default k range: 1..min(p, q+1).
        std::vector<int> kk = ks;
        if (o.k == "default") {
          kk.clear();
          for (int k = 1; k <= std::min(p, q + 1); ++k) kk.push_back(k);
        }
        for (int k : kk) grid.push_back({p, q, k, {}});
      } else {
        for (double t : thetas) grid.push_back({p, q, 0, t});
      }
    }
  const int n = static_cast<int>(grid.size());
  std::vector<SweepRow> rows(n);
  run_cases(n, o.jobs, [&](int i) {
    rows[i] = sweep_row(o.family, grid[i].p, grid[i].q, grid[i].k, grid[i].theta, o);
    return CaseOutcome{};
  });
  CsvWriter w({"family", "p", "q", "k", "n", "alpha", "theta", "mu", "scal", "ii_sq", "H_norm", "scal_margin",
               "ii_margin", "ric_max", "status"});
  bool violation = false;
  for (const auto& r : rows) {
    w.row(r.cells);
    violation = violation || r.violation;
  }
  if (o.output.empty()) {
    out << w.str();
  } else {
    write_text_file(o.output, w.str());
  }
  if (violation) err << "sweep: at least one row violates a bound or residual check\n";
  return violation ? 1 : 0;
}

// ---------- argument wiring ----------

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--output", o.output, "Report path (default stdout)");
  sub->add_option("--tol-gauss", o.tol.gauss);
  sub->add_option("--tol-codazzi", o.tol.codazzi);
  sub->add_option("--tol-ricci", o.tol.ricci);
  sub->add_option("--tol-trace", o.tol.trace);
  sub->add_option("--tol-closed", o.tol.closed, "Closed-form constants");
  sub->add_option("--tol-invariant", o.tol.invariant, "Scal, |II|^2, sec and pseudo-flat H");
  sub->add_option("--tol-bochner", o.tol.bochner);
  sub->add_option("--tol-max-principle", o.tol.max_principle);
  sub->add_option("--tol-maximal", o.tol.maximal, "|H| below this counts as maximal");
}

int dispatch(CLI::App& app, Options& o, std::ostream& out, std::ostream& err) {
  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "verify") return cmd_verify(o, out);
  if (name == "product") return cmd_product(o, out);
  if (name == "pseudoflat") return cmd_pseudoflat(o, out);
  if (name == "bochner-check") return cmd_bochner_check(o, out);
  if (name == "plateau") return cmd_plateau(o, out);
  if (name == "sweep") return cmd_sweep(o, out, err);
  throw UsageError("unknown command " + name);
}

bool input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_spec:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::non_spacelike_boundary:
    case ErrorCode::antipodal_boundary:
    case ErrorCode::zero_vector:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Spacelike submanifolds of pseudo-hyperbolic space: checks, model charts and Plateau solves", "hpq"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run verification suites on random and closed-form charts");
  verify->add_option("--suite", o.suite, "fundamental|trace|products|pseudoflat|bochner|ricci|all");
  verify->add_option("--p", o.p, "Fix p for random charts (2 or 3)");
  verify->add_option("--q", o.q, "Fix q for random charts (1 or 2)");
  verify->add_option("--count", o.count, "Random charts per suite");

  auto* product = app.add_subcommand("product", "Report on a weighted product of hyperbolic spaces");
  product->add_option("--n", o.n, "Factor dimensions, e.g. 2,1");
  product->add_option("--alpha", o.alpha, "Weights, or 'maximal'");
  product->add_option("--q", o.q, "Target q (default k)");
  product->add_option("--input", o.input, "Product spec JSON");
  product->add_option("--at", o.at, "Parameter point (default origin)");
  product->add_option("--report", o.report, "curvature|bochner|fundamental|bounds");

  auto* pseudo = app.add_subcommand("pseudoflat", "Report on a pseudo-flat orbit");
  pseudo->add_option("--p", o.p);
  pseudo->add_option("--q", o.q);
  pseudo->add_option("--theta", o.theta);
  pseudo->add_option("--mu", o.mu, "Unit vector of length q+1-p");
  pseudo->add_option("--input", o.input, "Pseudo-flat spec JSON");
  pseudo->add_option("--at", o.at, "Parameter point (default origin)");
  pseudo->add_option("--report", o.report, "curvature|bochner|fundamental|bounds");

  auto* bochner = app.add_subcommand("bochner-check", "Bochner terms on closed-form maximal charts");
  bochner->add_option("--p", o.p, "Restrict to these p");
  bochner->add_option("--q", o.q, "Restrict to these q");
  bochner->add_option("--input", o.input, "Chart spec JSON");
  bochner->add_option("--at", o.at, "Parameter point (default origin)");

  auto* plateau = app.add_subcommand("plateau", "Solve the Plateau problem for a polygonal boundary (p = 2)");
  plateau->add_option("--input", o.input, "Boundary JSON: ray list, or kind=polyhedron");
  plateau->add_option("--polyhedron", o.polyhedron, "canonical|jitter");
  plateau->add_option("--jitter", o.jitter, "Relative jitter of the polyhedron vertices");
  plateau->add_option("--p", o.p);
  plateau->add_option("--q", o.q);
  plateau->add_option("--R", o.R, "Truncation radius");
  plateau->add_option("--rings", o.rings, "Finest mesh resolution");
  plateau->add_option("--levels", o.levels, "Ring counts, coarse to fine");
  plateau->add_option("--max-iters", o.max_iters, "Iteration budget per level");
  plateau->add_option("--fit-ring", o.fit_ring);
  plateau->add_option("--fit-degree", o.fit_degree);
  plateau->add_option("--step", o.step, "Initial flow step (0 = automatic)");
  plateau->add_option("--csv", o.csv, "Per-vertex CSV path");
  plateau->add_flag("--study", o.study, "Also solve at R = 2, 3, 4 and compare");
  plateau->add_option("--tol-H", o.tol.H);
  plateau->add_option("--tol-scal", o.tol.scal);
  plateau->add_option("--tol-ii", o.tol.ii);
  plateau->add_option("--tol-study", o.tol.study);

  auto* sweep = app.add_subcommand("sweep", "CSV sweep over maximal products or pseudo-flat orbits");
  o.k = "default";
  sweep->add_option("--family", o.family, "product|pseudoflat");
  sweep->add_option("--p", o.p, "List of p");
  sweep->add_option("--q", o.q, "List of q");
  sweep->add_option("--k", o.k, "Factor counts (default 1..min(p, q+1))");
  sweep->add_option("--theta", o.theta, "List of theta");
  sweep->add_option("--mu", o.mu);

  for (auto* s : {verify, product, pseudo, bochner, plateau, sweep}) add_common(s, o);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  // Sweep defaults that differ from the single-chart commands.
  if (app.got_subcommand("sweep")) {
    if (!sweep->count("--p")) o.p = "4";
    if (!sweep->count("--q")) o.q = "3";
    if (!sweep->count("--theta")) o.theta = "0,0.2,0.4";
  }
  try {
    return dispatch(app, o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const SpecError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return input_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hpq::cli
