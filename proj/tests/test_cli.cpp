#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "bpxor/cli.hpp"

namespace fs = std::filesystem;
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
  const int code = bpxor::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bpxor_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

}  // namespace

TEST_CASE("cli: construct array") {
  const auto r = run({"construct", "array", "--columns", "5", "--survivors", "2"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["m"] == 2);
  CHECK(j["n"] == 5);
  CHECK(j["k"] == 4);
  CHECK(j["certificate"]["t"] == 3);
  CHECK(run({"construct", "array", "--columns", "5", "--survivors", "3"}).code == 2);
}

TEST_CASE("cli: construct flat and graph") {
  const auto f = run({"construct", "flat", "--n", "7", "--k", "3", "--d", "4"});
  REQUIRE(f.code == 0);
  CHECK(json::parse(f.out)["decoder"] == "gauss");
  CHECK(run({"construct", "flat", "--n", "8", "--k", "5", "--d", "3"}).code == 1);
  CHECK(run({"construct", "flat", "--n", "8", "--k", "5", "--d", "7"}).code == 2);

  const auto dir = scratch("graph");
  const auto g = run({"construct", "graph", "--kind", "p1f:5,3", "--dot", (dir / "g.dot").string()});
  REQUIRE(g.code == 0);
  const auto j = json::parse(g.out);
  CHECK(j["nodes"] == 5);
  CHECK(j["colors"] == 3);
  CHECK(j["edges"].size() == 6);
  CHECK(slurp(dir / "g.dot").rfind("graph G {", 0) == 0);
  CHECK(json::parse(run({"construct", "graph", "--kind", "3cc:9"}).out)["edges"].size() == 16);
  CHECK(json::parse(run({"construct", "graph", "--kind", "g42"}).out)["nodes"] == 7);
  CHECK(run({"construct", "graph", "--kind", "cube"}).code == 2);
  CHECK(run({"construct", "graph", "--kind", "p1f:9,3"}).code == 1);
}

TEST_CASE("cli: search reports exhaustion") {
  const auto r = run({"search", "--n", "5", "--k", "3", "--t", "2", "--class", "bp"});
  CHECK(r.code == 1);
  CHECK(r.err.find("exhausted 462 candidates") != std::string::npos);
  CHECK(json::parse(r.out)["candidates_examined"] == 462);

  const auto hit = run({"search", "--n", "5", "--k", "2", "--t", "2", "--class", "bp"});
  REQUIRE(hit.code == 0);
  CHECK(json::parse(hit.out)["code"]["certificate"]["t"] == 2);
  const auto parallel = run({"--jobs", "3", "search", "--n", "5", "--k", "2", "--t", "2", "--class", "bp"});
  CHECK(parallel.out == hit.out);
  CHECK(run({"search", "--n", "8", "--k", "4", "--t", "2", "--max-patterns", "10"}).code == 3);
}

TEST_CASE("cli: verify") {
  const auto dir = scratch("verify");
  spit(dir / "parity.json", run({"construct", "flat", "--n", "5", "--k", "4", "--d", "2"}).out);
  const auto bad = run({"verify", "--code", (dir / "parity.json").string(), "--t", "2"});
  CHECK(bad.code == 1);
  const auto j = json::parse(bad.out);
  CHECK(j["verified"] == false);
  CHECK(j["counterexample"].size() == 2);

  const auto good = run({"verify", "--code", (dir / "parity.json").string(), "--t", "1", "--exhaustive-distance"});
  CHECK(good.code == 0);
  CHECK(json::parse(good.out)["distance"] == 2);

  spit(dir / "c5.json", run({"construct", "array", "--columns", "5"}).out);
  CHECK(run({"verify", "--code", (dir / "c5.json").string(), "--t", "3", "--max-patterns", "5"}).code == 3);
  CHECK(run({"verify", "--code", (dir / "c5.json").string(), "--t", "3"}).code == 0);
  CHECK(run({"verify", "--code", (dir / "c5.json").string(), "--t", "4"}).code == 1);
  CHECK(run({"verify", "--code", (dir / "c5.json").string(), "--t", "1", "--exhaustive-distance"}).code == 2);
  CHECK(run({"verify", "--code", (dir / "missing.json").string(), "--t", "1"}).code == 2);
  spit(dir / "junk.json", "{not json");
  CHECK(run({"verify", "--code", (dir / "junk.json").string(), "--t", "1"}).code == 1);
}

TEST_CASE("cli: usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"search", "--n", "5", "--k", "3", "--t", "2", "--bogus"}).code == 2);
  CHECK(run({"search", "--n", "5", "--k", "3", "--t", "2", "--class", "ldpc"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: encode, decode and repair") {
  const auto dir = scratch("files");
  spit(dir / "code.json", run({"construct", "array", "--columns", "5"}).out);
  std::string payload;
  for (int i = 0; i < 5000; ++i) payload.push_back(static_cast<char>((i * 131) % 256));
  spit(dir / "in.bin", payload);

  const auto enc = run({"encode", "--code", (dir / "code.json").string(), "--in", (dir / "in.bin").string(),
                        "--out-dir", (dir / "shards").string()});
  REQUIRE(enc.code == 0);
  CHECK(json::parse(enc.out)["shards"].size() == 5);
  const auto first = slurp(dir / "shards" / "3.shard");
  REQUIRE(run({"encode", "--code", (dir / "code.json").string(), "--in", (dir / "in.bin").string(), "--out-dir",
               (dir / "shards").string()})
              .code == 0);
  CHECK(slurp(dir / "shards" / "3.shard") == first);

  const auto dec = run({"decode", "--shards", (dir / "shards" / "2.shard").string(),
                        (dir / "shards" / "5.shard").string(), "--out", (dir / "out.bin").string()});
  REQUIRE(dec.code == 0);
  CHECK(slurp(dir / "out.bin") == payload);

  const auto one = run({"decode", "--shards", (dir / "shards" / "2.shard").string(), "--out",
                        (dir / "out2.bin").string()});
  CHECK(one.code == 1);
  CHECK(json::parse(one.out)["error"] == "insufficient shards");

  const auto rep = run({"repair", "--code", (dir / "code.json").string(), "--shards",
                        (dir / "shards" / "1.shard").string(), (dir / "shards" / "2.shard").string(), "--column", "3",
                        "--out", (dir / "3.shard").string()});
  REQUIRE(rep.code == 0);
  CHECK(slurp(dir / "3.shard") == first);

  spit(dir / "broken.shard", first.substr(0, 20));
  CHECK(run({"decode", "--shards", (dir / "broken.shard").string(), (dir / "shards" / "1.shard").string(), "--out",
             (dir / "out3.bin").string()})
            .code == 1);
}

TEST_CASE("cli: encode refuses an uncertified descriptor") {
  const auto dir = scratch("uncert");
  auto j = json::parse(run({"construct", "array", "--columns", "5"}).out);
  j["certificate"] = nullptr;
  spit(dir / "code.json", j.dump());
  spit(dir / "in.bin", "data");
  CHECK(run({"encode", "--code", (dir / "code.json").string(), "--in", (dir / "in.bin").string(), "--out-dir",
             (dir / "s").string()})
            .code == 1);
}

TEST_CASE("cli: simulate and lt-bench") {
  const auto dir = scratch("sim");
  spit(dir / "code.json", run({"construct", "array", "--columns", "5"}).out);
  const auto all = run({"simulate", "--code", (dir / "code.json").string(), "--mode", "all", "--t", "3"});
  REQUIRE(all.code == 0);
  std::istringstream lines(all.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    CHECK(json::parse(line)["outcome"] == "full");
    ++count;
  }
  CHECK(count == 10);
  const auto rnd = run({"simulate", "--code", (dir / "code.json").string(), "--mode", "random", "--t", "4",
                        "--trials", "20", "--seed", "9"});
  REQUIRE(rnd.code == 0);
  const auto rnd2 = run({"simulate", "--code", (dir / "code.json").string(), "--mode", "random", "--t", "4",
                         "--trials", "20", "--seed", "9"});
  auto strip_times = [](const std::string& s) {
    std::istringstream in(s);
    std::string l;
    std::vector<json> out;
    while (std::getline(in, l)) {
      auto j = json::parse(l);
      j.erase("wall_ns");
      out.push_back(j);
    }
    return out;
  };
  CHECK(strip_times(rnd.out) == strip_times(rnd2.out));

  const auto lt = run({"lt-bench", "--k", "16", "--overhead-from", "0", "--overhead-to", "8", "--trials", "200",
                       "--seed", "1"});
  REQUIRE(lt.code == 0);
  std::istringstream csv(lt.out);
  std::getline(csv, line);
  CHECK(line == "k,overhead,symbols,trials,success_rate");
  int rows = 0;
  double prev = -1;
  while (std::getline(csv, line)) {
    const double rate = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(rate >= prev);
    prev = rate;
    ++rows;
  }
  CHECK(rows == 9);
  CHECK(run({"lt-bench", "--k", "16", "--overhead-from", "4", "--overhead-to", "0", "--trials", "5", "--seed", "1"})
            .code == 2);
}

TEST_CASE("cli: inspect") {
  const std::string fixtures = BPXOR_FIXTURE_DIR;
  const auto code = run({"inspect", "--code", fixtures + "/two_survivor_5.json"});
  REQUIRE(code.code == 0);
  const auto j = json::parse(code.out);
  CHECK(j["type"] == "array");
  CHECK(j["certified"] == true);
  CHECK(j["degree_profile"]["1"] == 4);
  CHECK(j["degree_profile"]["2"] == 6);

  const auto shards = run({"inspect", "--shard", fixtures + "/shards/2.shard", fixtures + "/shards/5.shard"});
  REQUIRE(shards.code == 0);
  std::istringstream lines(shards.out);
  std::string first;
  std::string second;
  std::getline(lines, first);
  std::getline(lines, second);
  const auto s2 = json::parse(first);
  CHECK(s2["column"] == 2);
  CHECK(s2["cells"] == json::parse("[[2],[3,4]]"));
  CHECK(s2["digest"] == j["digest"]);
  CHECK(json::parse(second)["column"] == 5);

  CHECK(run({"inspect"}).code == 2);
  CHECK(run({"inspect", "--code", fixtures + "/two_survivor_5.json", "--shard", fixtures + "/shards/1.shard"}).code ==
        2);
}
