#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using intrinsic::cli::Json;
using intrinsic::cli::run;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  std::vector<Json> lines() const {
    std::vector<Json> v;
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) v.push_back(Json::parse(line));
    return v;
  }
  std::vector<Json> rows() const {
    auto v = lines();
    std::vector<Json> r;
    for (auto& j : v)
      if (j["record"] != "envelope" && j["record"] != "summary") r.push_back(j);
    return r;
  }
  Json summary() const {
    for (auto& j : lines())
      if (j["record"] == "summary" || j["record"] == "replay") return j;
    return {};
  }
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("intrinsic_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("ckd") {
  const auto table = cli({"ckd", "--table", "6"});
  REQUIRE(table.code == 0);
  const auto rows = table.rows();
  CHECK(rows.size() == 21);
  std::map<std::pair<unsigned, unsigned>, std::string> c;
  for (const auto& r : rows) c[{r["k"].get<unsigned>(), r["d"].get<unsigned>()}] = r["c"];
  CHECK(c[{2, 4}] == "5/6");
  CHECK(c[{2, 6}] == "7/11");
  CHECK(c[{3, 5}] == "6/7");
  CHECK(c[{1, 1}] == "2/1");

  const auto one = cli({"ckd", "2", "4", "--oracle"});
  REQUIRE(one.code == 0);
  const auto r = one.rows().at(0);
  CHECK(r["n"] == 1);
  CHECK(r["m"] == 2);
  CHECK(r["N"] == "6");
  CHECK(r["c"] == "5/6");
  CHECK(r["agree"] == true);

  const auto ver = cli({"ckd", "1", "1", "2", "--veronese-condition"});
  REQUIRE(ver.code == 0);
  CHECK(ver.rows().at(0)["holds"] == true);
  CHECK(ver.rows().at(0)["lhs"] == "1/1");
  CHECK(ver.rows().at(0)["rhs"] == "1/1");

  CHECK(cli({"ckd", "4", "2"}).code == 2);
  CHECK(cli({"ckd", "1", "2", "3", "4"}).code == 2);
}

TEST_CASE("enumerate") {
  const auto cn = cli({"enumerate", "cn:2", "--height", "4", "--box", "-1..1", "--oracle"});
  REQUIRE(cn.code == 0);
  CHECK(cn.rows().size() == 5);
  CHECK(cn.summary()["oracle_agrees"] == true);

  const auto sph = cli({"enumerate", "sphere:2", "--height", "5", "--oracle"});
  REQUIRE(sph.code == 0);
  CHECK(sph.rows().size() == 12);
  CHECK(sph.summary()["oracle_agrees"] == true);

  const auto ver = cli({"enumerate", "veronese:1,2", "--height", "3"});
  REQUIRE(ver.code == 0);
  for (const auto& row : ver.rows()) CHECK(row["height"] == "1");

  // All or nothing: a budget overrun leaves stdout empty.
  const auto over = cli({"--budget", "10", "enumerate", "cn:2", "--height", "1000"});
  CHECK(over.code == 3);
  CHECK(over.out.empty());
  CHECK(over.err.find("\"BudgetExceeded\"") != std::string::npos);

  CHECK(cli({"enumerate", "torus:2", "--height", "3"}).code == 2);
  CHECK(cli({"enumerate", "cn:2"}).code == 2);
}

TEST_CASE("envelope, csv and determinism") {
  const auto a = cli({"enumerate", "sphere:2", "--height", "5", "--seed", "3"});
  const auto b = cli({"--seed", "3", "enumerate", "sphere:2", "--height", "5"});
  CHECK(a.out == b.out);
  const auto env = a.lines().at(0);
  CHECK(env["record"] == "envelope");
  CHECK(env["chart"] == "sphere:2");
  CHECK(env["config"]["seed"] == 3);
  CHECK(env["config"]["budget"].is_number());
  CHECK(env.contains("version"));
  CHECK(a.err.find("wall-time") != std::string::npos);

  const auto csv = cli({"--format", "csv", "enumerate", "cn:2", "--height", "4", "--box", "-1..1"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.find("# config: ") != std::string::npos);
  CHECK(csv.out.find("height,point,parameter,chart\n") != std::string::npos);
  CHECK(csv.out.find("\"[\"\"-1/2\"\",\"\"1/4\"\"]\"") != std::string::npos);

  const auto dcsv = cli({"--format", "csv", "dirichlet", "sphere:2", "--targets", "3", "--height", "64"});
  REQUIRE(dcsv.code == 0);
  CHECK(dcsv.out.find("constant_lo,constant_lo_approx,constant_hi,constant_hi_approx") != std::string::npos);

  CHECK(intrinsic::cli::csv_field("a,b") == "\"a,b\"");
  CHECK(intrinsic::cli::csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
  CHECK(intrinsic::cli::csv_field("plain") == "plain");

  const auto w1 = cli({"--workers", "1", "--seed", "5", "dirichlet", "sphere:2", "--targets", "6", "--height", "256"});
  const auto w3 = cli({"--workers", "3", "--seed", "5", "dirichlet", "sphere:2", "--targets", "6", "--height", "256"});
  REQUIRE(w1.code == 0);
  CHECK(w1.out == w3.out);

  const auto cfg = cli({"--emit-config", "--seed", "9", "ckd", "2", "4"});
  CHECK(cfg.code == 0);
  const auto j = Json::parse(cfg.out);
  CHECK(j["command"] == "ckd");
  CHECK(j["seed"] == 9);
  CHECK(j["args"].size() == 6);

  const std::string path = temp_path("out.jsonl");
  REQUIRE(cli({"--output", path, "ckd", "2", "4"}).code == 0);
  CHECK(slurp(path) == cli({"ckd", "2", "4"}).out);
  std::remove(path.c_str());

  CHECK(cli({"--format", "xml", "ckd", "2", "4"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("simplex") {
  const auto ok = cli({"simplex", "cn:2", "--kappa", "1/10", "--samples", "50", "--seed", "7"});
  REQUIRE(ok.code == 0);
  CHECK(ok.rows().size() == 50);
  CHECK(ok.summary()["pass_rate"] == 1.0);

  // A large kappa admits simplices spanning the plane: exit 4 with the report written.
  const auto bad = cli({"simplex", "cn:2", "--kappa", "64", "--samples", "50", "--seed", "7"});
  CHECK(bad.code == 4);
  REQUIRE_FALSE(bad.out.empty());
  const auto s = bad.summary();
  CHECK(s["failures"].size() > 0);
  for (const auto& row : bad.rows())
    if (row.contains("failure")) CHECK(row["failure"]["lower_bound_holds"] == true);
}

TEST_CASE("exponent") {
  const auto e = cli({"exponent", "cn:2", "--target", "x^2-x-1,[1,2]", "--height", "1e4"});
  REQUIRE(e.code == 0);
  const auto rows = e.rows();
  REQUIRE(rows.size() > 5);
  CHECK(rows.back()["height"] == "7921");  // 144/89, height 89^2
  const auto s = e.summary();
  CHECK(s["estimate"]["tail_slope"].get<double>() == doctest::Approx(1).epsilon(0.05));
  CHECK(s["classification"] == "badly-approximable");
  CHECK(cli({"exponent", "cn:2", "--target", "x^2-2,[0,1]"}).code == 2);
}

TEST_CASE("game and replay") {
  const std::string path = temp_path("game.jsonl");
  const auto g = cli({"game", "cn:2", "--beta", "1/8", "--depth", "12", "--alice", "simplex", "--bob", "greedy",
                      "--seed", "7", "--transcript", path});
  REQUIRE(g.code == 0);
  const auto s = g.summary();
  CHECK(s["outcome"] == "completed");
  CHECK(s["disjoint"] == true);
  CHECK(s["ba"]["positive"] == true);
  CHECK(g.rows().size() == 25);

  const auto rep = cli({"game", "--replay", path});
  REQUIRE(rep.code == 0);
  CHECK(rep.summary()["valid"] == true);
  CHECK(rep.summary()["byte_identical"] == true);

  std::string text = slurp(path);
  const auto pos = text.find("\"radius\":\"1/8\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 14, "\"radius\":\"1/9\"");
  {
    std::ofstream f(path, std::ios::binary);
    f << text;
  }
  const auto tampered = cli({"game", "--replay", path});
  CHECK(tampered.code == 4);
  CHECK(tampered.summary()["valid"] == false);
  std::remove(path.c_str());

  CHECK(cli({"game"}).code == 2);
  CHECK(cli({"game", "cn:2", "--bob", "lazy"}).code == 2);
  // With degree bound 0 every deletion is illegal.
  const auto bad = cli({"game", "cn:2", "--D", "0", "--depth", "6", "--kappa", "1"});
  CHECK(bad.code == 4);
  CHECK(bad.err.find("\"IllegalMove\"") != std::string::npos);
}
