#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lowmult/cli.hpp"
#include "lowmult/store.hpp"

using namespace lowmult;

namespace {

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/lowmult_test_" + name) {
    std::remove(path.c_str());
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("kummer CLI example") {
  const auto r = run({"kummer", "--n", "5", "--prime", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"valuation\":2") != std::string::npos);
}

TEST_CASE("heuristic CLI example") {
  const auto r = run({"heuristic", "--primes", "3,5,7"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"sigma\":0.974") != std::string::npos);
  CHECK(r.out.find("ExpectInfinite") != std::string::npos);
}

TEST_CASE("search CLI: graham members at 1000") {
  const auto r = run({"search", "--primes", "3,5,7", "--limit", "1000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\n756\n") != std::string::npos);
  CHECK(r.out.find("\n757\n") != std::string::npos);
  CHECK(r.out.find("\"completed\":true") != std::string::npos);
}

TEST_CASE("search CLI: checkpoint round trip through files") {
  TempFile cp("checkpoint.bin");
  const auto full = run({"search", "--primes", "3,5,7", "--limit", "100000", "--quiet"});
  REQUIRE(full.code == 0);

  const auto part = run({"search", "--primes", "3,5,7", "--limit", "100000", "--quiet",
                         "--node-budget", "200", "--checkpoint", cp.path});
  REQUIRE(part.code == 0);
  CHECK(part.out.find("\"completed\":false") != std::string::npos);

  const auto resumed = run({"search", "--primes", "3,5,7", "--limit", "100000", "--quiet",
                            "--checkpoint", cp.path, "--resume"});
  REQUIRE(resumed.code == 0);
  // same count and node total as the uninterrupted run
  const auto count_of = [](const std::string& s) {
    const auto p = s.find("\"count\":");
    return s.substr(p, s.find(',', p) - p);
  };
  CHECK(count_of(resumed.out) == count_of(full.out));
  const auto nodes_of = [](const std::string& s) {
    const auto p = s.find("\"nodes\":");
    return s.substr(p, s.find(',', p) - p);
  };
  CHECK(nodes_of(resumed.out) == nodes_of(full.out));
}

TEST_CASE("search CLI: census mode") {
  const auto r = run({"search", "--primes", "3,5", "--limit", "4096", "--census"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"buckets\"") != std::string::npos);
  CHECK(r.out.find("\"predicted\"") != std::string::npos);
}

TEST_CASE("usage and invariant exit codes") {
  CHECK(run({"search", "--primes"}).code == 1);          // missing value
  CHECK(run({"nonsense"}).code == 1);                    // unknown subcommand
  CHECK(run({"kummer", "--n", "5", "--prime", "9"}).code == 2);   // composite p
  CHECK(run({"search", "--primes", "3,3", "--limit", "10"}).code == 2);
  CHECK(run({"fourier", "instance", "--primes", "31", "--P", "911", "--H", "1"}).code == 2);
}

TEST_CASE("equidist CLI verbs are reachable") {
  CHECK(run({"equidist", "orbit", "--primes", "3", "--count", "5"}).out.find("0.6309") !=
        std::string::npos);
  const auto w = run({"equidist", "weyl", "--primes", "3", "--count", "2000", "--k", "1"});
  CHECK(w.code == 0);
  CHECK(w.out.find("magnitude") != std::string::npos);
  CHECK(run({"equidist", "boxes", "--primes", "3", "--count", "5000", "--P", "50"}).code == 0);
  CHECK(run({"equidist", "relations", "--primes", "3,5", "--height", "10", "--tol", "1e-12"})
            .out.find("\"count\":0") != std::string::npos);
  const auto c = run({"equidist", "curves", "--primes", "3,5,7", "--rows", "1,1,-1,0",
                      "--verify", "500"});
  CHECK(c.code == 0);
  CHECK(c.out.find("\"misses\":0") != std::string::npos);
}

TEST_CASE("fourier CLI verbs are reachable") {
  const auto i = run({"fourier", "instance", "--primes", "11", "--P", "1009", "--H", "1"});
  CHECK(i.code == 0);
  CHECK(i.out.find("\"E_size\":0") != std::string::npos);
  const auto v = run({"--seed", "5", "fourier", "verify", "--primes", "11", "--P", "1009",
                      "--H", "1", "--trials", "20"});
  CHECK(v.code == 0);
  CHECK(v.out.find("\"success_rate\":1.0") != std::string::npos);
  const auto l = run({"fourier", "lemma", "--r", "2", "--trials", "50"});
  CHECK(l.code == 0);
  CHECK(l.out.find("\"violations\":0") != std::string::npos);
  const auto m = run({"fourier", "remark", "--r", "2", "--P", "10007", "--samples", "64"});
  CHECK(m.code == 0);
  CHECK(m.out.find("\"vector_collisions\":0") != std::string::npos);
}

TEST_CASE("construct CLI runs a small sweep") {
  const auto r = run({"construct", "--primes", "11", "--bits", "40", "--window", "2",
                      "--s-budget", "10000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"n\":") != std::string::npos);
  CHECK(r.out.find("\"chosen_t\"") != std::string::npos);
}

TEST_CASE("store: append and query, corrupt lines skipped") {
  TempFile store("store.ndjson");
  ResultRecord rec;
  rec.fingerprint = "abcd";
  rec.timestamp = "2026-01-01T00:00:00Z";
  rec.version = "test";
  rec.config_json = "{\"a\":1}";
  rec.output_json = "{\"b\":2}";
  store_append(store.path, rec);
  store_append(store.path, rec);
  {
    std::ofstream f(store.path, std::ios::app);
    f << "{corrupt\n";
  }
  rec.fingerprint = "ffff";
  store_append(store.path, rec);

  std::string warnings;
  const auto hits = store_query(store.path, "abcd", &warnings);
  CHECK(hits.size() == 2);
  CHECK(warnings.find("corrupt") != std::string::npos);
  CHECK(store_query(store.path, "zzzz").size() == 0);
  CHECK(store_query(store.path, "").size() == 3);  // all valid records
}

TEST_CASE("determinism: identical config and seed give byte-identical reports") {
  const std::vector<std::string> cmd{"--seed", "17", "fourier", "verify", "--primes", "11",
                                     "--P", "1009", "--H", "1", "--trials", "50"};
  const auto a = run(cmd);
  const auto b = run(cmd);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const std::vector<std::string> cmd2{"search", "--primes", "3,5,7", "--limit", "20000",
                                      "--workers", "4", "--quiet"};
  CHECK(run(cmd2).out == run(cmd2).out);
}

TEST_CASE("store records byte-identical outputs for identical config and seed") {
  TempFile store("store2.ndjson");
  const std::vector<std::string> cmd{"--seed", "3", "--store", store.path, "heuristic",
                                     "--primes", "3,5,7"};
  REQUIRE(run(cmd).code == 0);
  REQUIRE(run(cmd).code == 0);
  const auto recs = store_query(store.path, "");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].fingerprint == recs[1].fingerprint);
  CHECK(recs[0].output_json == recs[1].output_json);
}
