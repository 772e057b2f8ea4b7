#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lpdisc/cli.hpp"

using namespace lpdisc;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("constants") {
  Run r = run({"constants", "--q", "2", "--scheme", "quadratic"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(std::abs(j["C"].get<double>() - 1.08332) <= 5e-5);
  for (const char* key : {"q", "p", "scheme", "a", "c", "alpha1", "alpha2", "alpha3", "C", "C_minus_1",
                          "sign_checks_passed", "balance_residual", "tolerances", "checks"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.size() == 14);

  r = run({"constants", "--q", "4", "--a", "0.930338256"});
  CHECK(r.code == 0);
  CHECK(std::abs(json::parse(r.out)["C"].get<double>() - 1.00277) <= 5e-5);

  r = run({"constants", "--q", "3"});
  CHECK(r.code == 2);
  CHECK(json::parse(r.out)["error"] == "validation");

  r = run({"constants", "--q", "4", "--a", "0.3"});
  CHECK(r.code == 2);
  CHECK(json::parse(r.out)["error"] == "no-balance");

  r = run({"constants", "--compare-table"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["rows"].size() == 3);
}

TEST_CASE("a sign failure exits with 2 but still prints the certificate") {
  Run r = run({"constants", "--q", "4", "--a", "0.9"});
  CHECK(r.code == 2);
  json j = json::parse(r.out);
  CHECK(j["sign_checks_passed"] == false);
}

TEST_CASE("bound") {
  Run r = run({"bound", "--q", "2", "--scheme", "quadratic", "--d", "10", "--N", "0"});
  CHECK(r.code == 0);
  CHECK(r.out == "1.0\n");

  r = run({"bound", "--q", "4", "--d", "5", "--N", "32"});
  CHECK(r.out == "0.0\n");

  r = run({"bound", "--q", "2", "--scheme", "quadratic", "--eps", "0.5", "--d-range", "50:200:50"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "d,certified_N,log_certified_N,C_to_the_d");
  long long prev = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto first = rows[i].find(',');
    const auto second = rows[i].find(',', first + 1);
    const long long n = std::stoll(rows[i].substr(first + 1, second - first - 1));
    CHECK(n > prev);
    prev = n;
  }

  CHECK(run({"bound", "--q", "2", "--eps", "0.5"}).code == 2);
  CHECK(run({"bound", "--q", "2", "--eps", "0.5", "--d-range", "5:1:1"}).code == 2);
}

TEST_CASE("disc") {
  const auto single = temp_file("lpdisc_single.csv", "0.5\n");
  Run r = run({"disc", "--file", single.string(), "--p", "2", "--method", "exact-l2"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.288675134594813).epsilon(1e-12));
  CHECK(j.size() == 5);
  CHECK(j["seed"].is_null());

  const auto empty = temp_file("lpdisc_empty.csv", "");
  r = run({"disc", "--file", empty.string(), "--p", "2"});
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(1 / std::sqrt(3.0)));

  r = run({"disc", "--file", single.string(), "--p", "1.3333", "--method", "cell-exact"});
  CHECK(r.code == 2);

  r = run({"disc", "--file", single.string(), "--p", "inf", "--method", "star-exact"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(0.5));

  r = run({"disc", "--file", single.string(), "--p", "2", "--method", "monte-carlo", "--samples",
           "1000", "--seed", "4"});
  CHECK(json::parse(r.out)["seed"] == 4);
  const Run again = run({"disc", "--file", single.string(), "--p", "2", "--method", "monte-carlo",
                         "--samples", "1000", "--seed", "4"});
  CHECK(again.out == r.out);

  const auto weighted = temp_file("lpdisc_weighted.csv", "#weights\n0.5,2.0\n");
  const Run plain = run({"disc", "--file", weighted.string(), "--p", "2"});
  const Run gen = run({"disc", "--file", weighted.string(), "--p", "2", "--weighted"});
  CHECK(plain.out != gen.out);

  const auto bad = temp_file("lpdisc_bad.csv", "0.1\n2.0\n");
  r = run({"disc", "--file", bad.string(), "--p", "2"});
  CHECK(r.code == 2);
  CHECK(json::parse(r.out)["message"].get<std::string>().find("row 2") != std::string::npos);

  const auto many = temp_file("lpdisc_many.csv", "0.1,0.2,0.3\n0.4,0.5,0.6\n0.7,0.8,0.9\n");
  r = run({"--budget", "10", "disc", "--file", many.string(), "--p", "2", "--method", "cell-exact"});
  CHECK(r.code == 3);
}

TEST_CASE("verify") {
  Run r = run({"verify", "--q", "2", "--d", "1", "--n", "3", "--seed", "7"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["domination_passed"] == true);
  for (const char* key : {"vanishing_max_abs", "norm_g", "norm_h", "domination_passed", "fooling_integral"}) {
    CHECK(j.contains(key));
  }

  r = run({"verify", "--q", "4", "--d", "2", "--n", "0"});
  j = json::parse(r.out);
  CHECK(j["norm_g"].get<double>() == doctest::Approx(j["norm_h"].get<double>()).epsilon(1e-14));
  CHECK(j["fooling_integral"].get<double>() == doctest::Approx(std::pow(7.0 / 3.0, -1.5)).epsilon(1e-12));

  r = run({"verify", "--q", "2", "--scheme", "candidate", "--d", "2", "--n", "4"});
  j = json::parse(r.out);
  CHECK(j["domination_experimental"] == true);

  CHECK(run({"verify", "--q", "2", "--d", "13", "--n", "1"}).code == 3);
}

TEST_CASE("decompose and gen") {
  Run r = run({"decompose", "--q", "4", "--a", "0.8", "--c", "0.04", "--grid", "1001"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 1002);
  CHECK(rows[0] == "x,h1,h11,h120,h121");
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    double v[5];
    char comma;
    in >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3] >> comma >> v[4];
    worst = std::max(worst, std::abs(v[2] + v[3] + v[4] - v[1]));
  }
  CHECK(worst <= 1e-12);

  r = run({"decompose", "--q", "2", "--scheme", "quadratic"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 1002);

  r = run({"gen", "--kind", "grid", "--n", "4", "--d", "2"});
  CHECK(r.out == "#dim=2\n0,0\n0,0.5\n0.5,0\n0.5,0.5\n");
  CHECK(run({"gen", "--kind", "grid", "--n", "5", "--d", "2"}).code == 2);

  const auto out = std::filesystem::temp_directory_path() / "lpdisc_gen.csv";
  r = run({"--output", out.string(), "gen", "--kind", "random", "--n", "3", "--d", "2", "--seed", "1"});
  CHECK(r.out.empty());
  CHECK(std::filesystem::exists(out));
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"constants", "--scheme", "cubic"}).code == 2);
}
