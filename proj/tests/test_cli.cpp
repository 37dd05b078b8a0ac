#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace nrdyn;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -19.73720061524952, 1e-300, 4.01}) CHECK(std::stod(cli::format_number(v)) == v);
  CHECK(cli::format_number(4.0) == "4");
}

TEST_CASE("x0 and range parsing") {
  CHECK(cli::parse_ext_real("inf").is_infinite());
  CHECK(cli::parse_ext_real("-Infinity").is_infinite());
  CHECK(cli::parse_ext_real("0.25").value() == 0.25);
  CHECK_THROWS(cli::parse_ext_real("abc"));
  CHECK_THROWS(cli::parse_ext_real("1.5x"));
  CHECK_THROWS(cli::parse_ext_real("nan"));
  const GridRange r = cli::parse_range("3:5:0.25");
  CHECK(r.values().size() == 9);
  CHECK_THROWS(cli::parse_range("3:5"));
  CHECK_THROWS(cli::parse_range("5:3:1"));
  CHECK_THROWS(cli::parse_range("3:5:-1"));
}

TEST_CASE("analyze") {
  const Result r = run({"analyze", "--a", "4", "--b", "2"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["omega"]["center_x"] == -0.5);
  CHECK(j["omega"]["rx"] == 1.5);
  CHECK(j["omega"]["ry"] == 2.5);
  CHECK(j["partition"]["xs"].size() == 13);
  CHECK(j["t14"]["det"] == 1);
  CHECK(json::parse(j.dump()) == j);

  const json k = json::parse(run({"analyze", "--a", "4.01", "--b", "2.5"}).out);
  CHECK(std::abs(k["matrixes"]["detB"].get<double>() - 2.2801) < 1e-12);
}

TEST_CASE("usage errors exit 2 with a JSON error object") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"analyze", "--a", "2", "--b", "4"},
           {"analyze", "--a", "4"},
           {"bogus", "--a", "4", "--b", "2"},
           {"scan", "--a-range", "4:x", "--b-range", "1:2:1"},
           {"itinerary", "--a", "4", "--b", "2", "--x0", "zz"},
           {"plot", "--a", "4", "--b", "2", "--format", "csv"},
       }) {
    const Result r = run(args);
    CHECK(r.code == 2);
  }
  const Result r = run({"analyze", "--a", "2", "--b", "4"});
  CHECK(json::parse(r.err)["error"]["code"] == 2);
  CHECK(r.out.empty());
}

TEST_CASE("help exits 0") { CHECK(run({"--help"}).code == 0); }

TEST_CASE("itinerary") {
  const json j = json::parse(run({"itinerary", "--a", "4.01", "--b", "2.5", "--x0", "0", "--n", "5000"}).out);
  CHECK(j["interval"]["periodicity"]["eventually_periodic"] == true);
  CHECK(j["arc"]["periodicity"]["eventually_periodic"] == true);
  CHECK(j["interval"]["periodicity"]["period"] == j["arc"]["periodicity"]["period"]);

  const json k = json::parse(run({"itinerary", "--a", "4", "--b", "2", "--x0", "inf", "--n", "3"}).out);
  CHECK(k["orbit"] == json::parse(R"(["inf", 1.0, 3.0, 0.7142857142857143])"));
  CHECK(k["interval"]["symbols"][0] == "inf");
  CHECK(k["arc"]["symbols"][0] == "Sinf");

  const json z = json::parse(run({"itinerary", "--a", "4", "--b", "2", "--n", "0"}).out);
  CHECK(z["interval"]["symbols"].size() == 1);
  CHECK(z["arc"]["symbols"].size() == 1);

  const Result csv = run({"itinerary", "--a", "4", "--b", "2", "--x0", "inf", "--n", "2", "--format", "csv"});
  CHECK(csv.out == "step,x,I,J\n0,inf,inf,Sinf\n1,1,I9,J9\n2,3,I13,J13\n");
}

TEST_CASE("scan") {
  const std::vector<std::string> args = {"scan", "--a-range", "3:4.02:0.01", "--b-range", "2.5:4.5:1", "--threads", "4"};
  const Result r = run(args);
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("a,b,status,preperiod,period\n", 0) == 0);
  CHECK(r.out.find("\n4.01,2.5,periodic,") != std::string::npos);
  CHECK(r.out.find("\n3,3.5,skipped,,\n") != std::string::npos);
  CHECK(run(args).out == r.out);

  auto single = args;
  single.back() = "1";
  CHECK(run(single).out == r.out);

  const json j = json::parse(run({"scan", "--a-range", "1:1:1", "--b-range", "2:2:1", "--format", "json"}).out);
  CHECK(j[0]["status"] == "skipped");
}

TEST_CASE("check") {
  const Result r = run({"check", "--a", "4", "--b", "2"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"].size() == 12);

  CHECK(run({"check", "--a", "4.01", "--b", "2.5"}).code == 0);

  const Result t = run({"check", "--a", "4", "--b", "2", "--tol-ellipse", "1e-18"});
  CHECK(t.code == 1);
  bool failed_membership = false;
  const json detail = json::parse(t.out);
  for (const auto& c : detail["checks"])
    if (c["name"] == "ellipse_membership") failed_membership = c["pass"] == false;
  CHECK(failed_membership);
}

TEST_CASE("plot") {
  const auto dir = std::filesystem::temp_directory_path() / "nrdyn_test_plot";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "omega.svg").string();
  REQUIRE(run({"plot", "--a", "4", "--b", "2", "--out", path}).code == 0);
  const std::string first = slurp(path);
  CHECK(first.find("<svg") != std::string::npos);
  CHECK(first.find("class=\"omega\"") != std::string::npos);
  CHECK(first.find("class=\"numerical-range\"") != std::string::npos);
  CHECK(first.find(">S13<") != std::string::npos);
  CHECK(first.find("class=\"orbit\"") == std::string::npos);
  std::size_t arrows = 0;
  for (std::size_t pos = 0; (pos = first.find("class=\"orientation\"", pos)) != std::string::npos; ++pos) ++arrows;
  CHECK(arrows == 14);
  std::size_t vertices = 0;
  for (std::size_t pos = 0; (pos = first.find("class=\"vertex\"", pos)) != std::string::npos; ++pos) ++vertices;
  CHECK(vertices == 2);

  REQUIRE(run({"plot", "--a", "4", "--b", "2", "--out", path}).code == 0);
  CHECK(slurp(path) == first);

  const std::string with_orbit = cli::plot_svg(Params(4, 2), cli::OrbitOverlay{0.3, 40});
  CHECK(with_orbit.find("class=\"orbit\"") != std::string::npos);

  CHECK(run({"plot", "--a", "4", "--b", "2", "--out", (dir / "missing" / "x.svg").string()}).code == 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("Omega is inscribed in W(A2) with shared top and bottom vertices") {
  for (const Params& p : {Params(4, 2), Params(4.01, 2.5), Params(9, 0.5)}) {
    const Ellipse2D w = numerical_range_2x2(coefficient_matrix(p.a(), p.b()));
    const OmegaEllipse om = omega(p);
    for (int j = 0; j < 360; ++j) CHECK(ellipse_contains(w, om.point_at(j * std::numbers::pi / 180), 1e-9));
    CHECK(std::abs(support_function(coefficient_matrix(p.a(), p.b()), std::numbers::pi / 2) - om.ry) < 1e-10);
    CHECK(std::abs(support_function(coefficient_matrix(p.a(), p.b()), -std::numbers::pi / 2) - om.ry) < 1e-10);
  }
}
