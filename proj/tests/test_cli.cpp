#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hpq/cli.hpp"
#include "hpq/io.hpp"

using namespace hpq;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args, int expect_code = 0) {
  const Run r = run(std::move(args));
  INFO(r.err);
  REQUIRE(r.code == expect_code);
  return parse_json(r.out);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  FAIL("missing column " << name);
  return -1;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hpq_test_" + name);
}

}  // namespace

TEST_CASE("verify fundamental on random charts with p = q = 2") {
  const Json j = run_json({"verify", "--suite", "fundamental", "--p", "2", "--q", "2", "--seed", "7"});
  CHECK(j["command"] == "verify");
  CHECK(j["failures"].empty());
  const Json& cases = j["results"]["fundamental"];
  CHECK(cases.size() == 100);
  for (const auto& c : cases) {
    CHECK(c["p"] == 2);
    CHECK(c["q"] == 2);
    for (const char* k : {"gauss", "codazzi", "ricci"}) CHECK(c["residuals"][k].get<double>() < 1e-6);
  }
}

TEST_CASE("verify all suites pass with default tolerances") {
  const Json j = run_json({"verify", "--seed", "3", "--count", "20"});
  CHECK(j["failures"].empty());
  for (const char* s : {"fundamental", "trace", "products", "pseudoflat", "bochner", "ricci"}) {
    CHECK(j["results"].contains(s));
  }
}

TEST_CASE("pseudoflat p = 3, q = 2, theta = 0 reports Scal 0 and |II|^2 6") {
  const Json j = run_json({"pseudoflat", "--p", "3", "--q", "2", "--theta", "0", "--report", "curvature"});
  CHECK(std::abs(j["results"]["scal"].get<double>()) < 1e-8);
  CHECK(j["results"]["ii_sq"].get<double>() == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(j["failures"].empty());
}

TEST_CASE("maximal H^2 x H^1 Bochner report sums to zero") {
  const Json j = run_json({"product", "--n", "2,1", "--alpha", "maximal", "--q", "1", "--report", "bochner"});
  CHECK(std::abs(j["results"]["bochner"]["rhs_total"].get<double>()) < 1e-5);
  CHECK(j["failures"].empty());
}

TEST_CASE("every report kind runs on a product and a pseudo-flat chart") {
  for (const char* rep : {"curvature", "bochner", "fundamental", "bounds"}) {
    CAPTURE(rep);
    CHECK(run({"product", "--n", "1,1", "--alpha", "0.8,0.6", "--q", "1", "--at", "0.1,-0.2", "--report", rep}).code == 0);
    CHECK(run({"pseudoflat", "--p", "2", "--q", "2", "--theta", "0.3", "--report", rep}).code == 0);
  }
  const Json b = run_json({"product", "--n", "2,2", "--q", "1", "--report", "bounds"});
  CHECK(b["results"]["bounds"]["maximal"] == true);
  CHECK(b["results"]["bounds"]["ii_margin"].get<double>() == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("sweep over maximal products gives |II|^2 = p(k-1)") {
  const Run r = run({"sweep", "--family", "product", "--p", "4", "--q", "3"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  const int ii = column(rows[0], "ii_sq");
  const int k = column(rows[0], "k");
  for (int i = 1; i <= 4; ++i) {
    CHECK(std::stoi(rows[i][k]) == i);
    CHECK(std::stod(rows[i][ii]) == doctest::Approx(4.0 * (i - 1)).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("theta sweep: |H| is 0 then increasing") {
  const Run r = run({"sweep", "--family", "pseudoflat", "--p", "2", "--q", "2", "--theta", "0,0.2,0.4"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  const int h = column(rows[0], "H_norm");
  const double h0 = std::stod(rows[1][h]), h1 = std::stod(rows[2][h]), h2 = std::stod(rows[3][h]);
  CHECK(h0 < 1e-12);
  CHECK(h1 > h0);
  CHECK(h2 > h1);
  CHECK(h1 == doctest::Approx(2.0 * std::tan(0.2)).epsilon(1e-10));
}

TEST_CASE("empty grid gives a header-only CSV") {
  const Run a = run({"sweep", "--family", "pseudoflat", "--p", "2", "--q", "2", "--theta", ""});
  CHECK(a.code == 0);
  CHECK(csv_rows(a.out).size() == 1);
  const Run b = run({"sweep", "--family", "product", "--p", "", "--q", "3"});
  CHECK(b.code == 0);
  CHECK(csv_rows(b.out).size() == 1);
  CHECK(a.out == b.out);
}

TEST_CASE("sweep rows that fail their own preconditions are reported, not fatal") {
  const Run r = run({"sweep", "--family", "product", "--p", "4", "--q", "1", "--k", "1,2,3"});
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  const int st = column(rows[0], "status");
  CHECK(rows[1][st] == "ok");
  CHECK(rows[3][st].rfind("error:", 0) == 0);
}

TEST_CASE("malformed spec files exit 2 with line and column") {
  const auto path = temp_file("bad.json");
  write_text_file(path.string(), "{\"kind\": \"product\",\n \"n\": [2, 1],\n \"alpha\": maximal}\n");
  const Run r = run({"product", "--input", path.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(path.string() + ":3:") != std::string::npos);
  std::filesystem::remove(path);

  const auto missing = temp_file("missing_field.json");
  write_text_file(missing.string(), "{\"kind\": \"pseudoflat\", \"p\": 2}");
  CHECK(run({"pseudoflat", "--input", missing.string()}).code == 2);
  std::filesystem::remove(missing);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"verify", "--suite", "nope"}).code == 2);
  CHECK(run({"verify", "--p", "7"}).code == 2);
  CHECK(run({"product", "--n", "1,x"}).code == 2);
  CHECK(run({"product", "--n", "1,1", "--alpha", "0.5,0.5"}).code == 2);
  CHECK(run({"product", "--n", "1,1", "--report", "nope"}).code == 2);
  CHECK(run({"pseudoflat", "--p", "2"}).code == 2);
  CHECK(run({"pseudoflat", "--p", "2", "--q", "1", "--theta", "0.3"}).code == 2);
  CHECK(run({"sweep", "--family", "graph"}).code == 2);
  CHECK(run({"plateau", "--polyhedron", "cube"}).code == 2);
  CHECK(run({"plateau", "--rings", "1"}).code == 2);
  CHECK(run({"verify", "--help"}).code == 0);
}

TEST_CASE("exit 1 exactly when a check fails") {
  const Json j = run_json({"verify", "--suite", "trace", "--count", "5", "--tol-trace", "0"}, 1);
  CHECK_FALSE(j["failures"].empty());
  const Json ok = run_json({"verify", "--suite", "trace", "--count", "5"});
  CHECK(ok["failures"].empty());
  CHECK(run({"product", "--n", "2,1", "--report", "bochner", "--tol-bochner", "-1"}).code == 1);
}

TEST_CASE("spec files round-trip through the CLI") {
  const auto path = temp_file("product.json");
  write_text_file(path.string(), to_json(ProductSpec{{1, 1}, {0.8, 0.6}}, 1).dump());
  const Json j = run_json({"product", "--input", path.string(), "--report", "curvature"});
  CHECK(j["config"]["alpha"][0].get<double>() == 0.8);
  std::filesystem::remove(path);

  const auto pf = temp_file("pseudoflat.json");
  write_text_file(pf.string(), to_json(PseudoFlatSpec{2, 2, {1.0}, 0.3}).dump());
  const Json k = run_json({"pseudoflat", "--input", pf.string()});
  CHECK(k["results"]["H_norm"].get<double>() == doctest::Approx(2.0 * std::tan(0.3)).epsilon(1e-10));
  std::filesystem::remove(pf);

  // A non-maximal graph: Bochner terms are reported but the identity is not asserted.
  const auto g = temp_file("graph.json");
  GraphSpec gs;
  gs.terms.push_back({0, 0.2, {2, 0}, false, {}, 0.0});
  write_text_file(g.string(), to_json(gs).dump());
  const Json b = run_json({"bochner-check", "--input", g.string()});
  CHECK(b["results"][0]["terms"]["identity_asserted"] == false);
  std::filesystem::remove(g);
}

TEST_CASE("bochner-check grid passes and can be filtered") {
  const Json all = run_json({"bochner-check", "--at", ""});
  CHECK(all["failures"].empty());
  const Json p3 = run_json({"bochner-check", "--p", "3", "--q", "1"});
  for (const auto& r : p3["results"]) {
    CHECK(r["p"] == 3);
    CHECK(r["q"] == 1);
  }
  CHECK(p3["results"].size() < all["results"].size());
}

TEST_CASE("plateau from a polyhedron file and from a ray list") {
  const auto poly = temp_file("poly.json");
  Json pj = to_json(Polyhedron::canonical(2, 1));
  pj["kind"] = "polyhedron";
  write_text_file(poly.string(), pj.dump());
  const auto csv = temp_file("plateau.csv");
  const Json j = run_json({"plateau", "--input", poly.string(), "--rings", "8", "--csv", csv.string()});
  CHECK(j["results"]["solve"]["converged"] == true);
  const std::string text = [&] {
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }();
  const auto rows = csv_rows(text);
  CHECK(rows.size() == 1 + j["results"]["solve"]["vertices"].get<std::size_t>());
  CHECK(rows[0][column(rows[0], "scal")] == "scal");

  pj.erase("kind");
  write_text_file(poly.string(), pj.dump());
  const Json r = run_json({"plateau", "--input", poly.string(), "--rings", "8"});
  CHECK(r["config"]["boundary"] == "ray list");
  CHECK(r["results"]["solve"]["converged"] == true);

  // Two antipodal rays cannot bound a spacelike disk.
  Json bad;
  bad["p"] = 2;
  bad["q"] = 1;
  bad["vertices"] = Json::array({Json::array({1, 0, 1, 0}), Json::array({0, 1, 0, 1}), Json::array({-1, 0, -1, 0})});
  write_text_file(poly.string(), bad.dump());
  CHECK(run({"plateau", "--input", poly.string(), "--rings", "8"}).code == 2);
  std::filesystem::remove(poly);
  std::filesystem::remove(csv);
}

TEST_CASE("identical arguments give byte-identical reports") {
  const std::vector<std::vector<std::string>> commands{
      {"verify", "--seed", "11", "--count", "10"},
      {"product", "--n", "2,1", "--report", "fundamental"},
      {"sweep", "--family", "pseudoflat"},
      {"plateau", "--rings", "8", "--polyhedron", "jitter", "--seed", "4"},
  };
  for (const auto& c : commands) {
    CAPTURE(c[0]);
    const Run a = run(c), b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    auto threaded = c;
    threaded.push_back("--jobs");
    threaded.push_back("3");
    CHECK(run(threaded).out == a.out);
  }
  const auto path = temp_file("report.json");
  const Run a = run({"verify", "--suite", "ricci", "--output", path.string()});
  CHECK(a.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run({"verify", "--suite", "ricci"}).out);
  std::filesystem::remove(path);
}
