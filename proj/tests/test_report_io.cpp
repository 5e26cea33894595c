#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <sstream>
#include <string>

#include "json.hpp"
#include "resonance/error.hpp"
#include "resonance/report_io.hpp"

using namespace resonance;

namespace {

std::string parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config") {
  const auto c = parse_config(R"({"theorem": 1, "q": 101, "ell": 1})");
  CHECK(c.theorem == Theorem::One);
  CHECK(c.q == 101);
  CHECK(c.Y == 1000);
  CHECK(c.X == doctest::Approx(default_X(Theorem::One, 101).X));
}

TEST_CASE("X from parameters") {
  const auto c = parse_config(R"({"theorem": 2, "q": 211, "sigma": 0.75, "kappa": 0.1})");
  CHECK(c.X == doctest::Approx(X_from_parameter(Theorem::Two, 211, 0.1)));
  const auto d = parse_config(R"({"theorem": 1, "q": 211, "X": 12.5, "Y": 500, "excluded": [3, 4], "oracle": true})");
  CHECK(d.X == 12.5);
  CHECK(d.Y == 500);
  CHECK(d.excluded == std::vector<std::uint64_t>{3, 4});
  CHECK(d.oracle);
  const auto m = parse_config(R"({"theorem": 3, "q": 211, "margin": 0.05})");
  CHECK(m.X == doctest::Approx(default_X(Theorem::Three, 211, 0.05).X));
}

TEST_CASE("diagnostics carry line numbers") {
  const std::string y_below_x = "{\n  \"theorem\": 1,\n  \"q\": 101,\n  \"X\": 50,\n  \"Y\": 10\n}";
  CHECK(parse_error(y_below_x).find("X <= Y") != std::string::npos);

  const std::string t4 = "{\"theorem\": 4, \"q\": 101, \"ell\": 2, \"sigma\": 0.75, \"X\": 20}";
  CHECK(parse_error(t4).find("1 <= ell < (2 - 2 sigma)^{-1}") != std::string::npos);

  const std::string broken = "{\n  \"theorem\": 1,\n  \"q\": 101,,\n}";
  CHECK(parse_error(broken).rfind("line 3:", 0) == 0);

  const std::string unknown = "{\n  \"theorem\": 1,\n  \"q\": 101,\n  \"zeta\": 2\n}";
  CHECK(parse_error(unknown).rfind("line 4:", 0) == 0);

  const std::string wrong_type = "{\n  \"theorem\": 1,\n  \"q\": \"101\"\n}";
  CHECK(parse_error(wrong_type).rfind("line 3:", 0) == 0);

  CHECK(parse_error(R"({"q": 101})").find("theorem") != std::string::npos);
  CHECK(parse_error(R"({"theorem": 5, "q": 101})").find("theorem") != std::string::npos);
  CHECK(parse_error(R"({"theorem": 1, "q": 101, "kappa": 0.1})").find("kappa") != std::string::npos);
  CHECK(parse_error("[1, 2]").find("object") != std::string::npos);
}

TEST_CASE("CSV quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("CSV and JSON reports") {
  ExperimentConfig c;
  c.theorem = Theorem::Two;
  c.q = 101;
  c.ell = 1;
  c.sigma = 0.75;
  c.X = 20;
  const auto report = run_theorem(c);

  std::ostringstream out;
  write_csv(out, {report});
  const std::string csv = out.str();
  CHECK(csv.rfind(std::string(kCsvHeader) + "\r\n", 0) == 0);
  const std::string row = csv.substr(kCsvHeader.size() + 2);
  CHECK(std::count(row.begin(), row.end(), ',') == 14);
  CHECK(row.rfind("101,1,0.75,20,1000,", 0) == 0);

  std::ostringstream empty;
  write_csv(empty, {});
  CHECK(empty.str() == std::string(kCsvHeader) + "\r\n");

  const auto j = nlohmann::json::parse(report_json(report));
  CHECK(j["config"]["q"] == 101);
  CHECK(j["config"]["sigma"] == 0.75);
  CHECK(j["S1"].get<double>() == report.S1);
  CHECK(j["margin"].get<double>() == report.margin);
  CHECK(j["passed"] == true);
  CHECK(j["oracle_gap"].is_null());
}
