#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kzmodp/cli.hpp"

using nlohmann::json;
namespace cli = kzmodp::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("kzmodp_test_" + name)).string();
}

}  // namespace

TEST_CASE("fnv1a reference values") {
  CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("config and manifest") {
  auto r = run({"config", "--p", "5", "--q", "3", "--n", "4"});
  REQUIRE(r.code == cli::kExitPass);
  auto d = r.doc();
  CHECK(d["manifest"]["command"] == "config");
  CHECK(d["manifest"]["version"] == cli::kVersion);
  CHECK(d["manifest"]["output_hash"] == cli::fnv1a_hex(d["result"].dump()));
  CHECK(r.err.find("config") != std::string::npos);
}

TEST_CASE("output is deterministic across thread counts") {
  auto a = run({"solve", "--p", "7", "--q", "5", "--n", "6", "--kind", "J", "--threads", "1"});
  auto b = run({"solve", "--p", "7", "--q", "5", "--n", "6", "--kind", "J", "--threads", "3"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.doc()["result"] == b.doc()["result"]);
  CHECK(a.doc()["manifest"]["output_hash"] == b.doc()["manifest"]["output_hash"]);
}

TEST_CASE("invalid parameters exit with 2") {
  CHECK(run({"config", "--p", "6", "--q", "3", "--n", "4"}).code == cli::kExitInvalid);
  CHECK(run({"config", "--p", "5", "--q", "3", "--n", "5"}).code == cli::kExitInvalid);
  CHECK(run({"solve", "--p", "5", "--q", "3", "--n", "4", "--kind", "Z"}).code == cli::kExitInvalid);
  CHECK(run({"nonsense"}).code == cli::kExitInvalid);
  CHECK(run({"config", "--q", "3", "--n", "4"}).code == cli::kExitInvalid);
}

TEST_CASE("verify kz round trip through a file, and a corrupted file") {
  const std::string path = temp_path("solutions.json");
  auto s = run({"solve", "--p", "5", "--q", "3", "--n", "4", "--kind", "I", "--out", path});
  REQUIRE(s.code == 0);
  CHECK(s.out.empty());
  auto ok = run({"verify", "kz", "--p", "5", "--q", "3", "--n", "4", "--input", path});
  CHECK(ok.code == cli::kExitPass);

  json doc;
  std::ifstream(path) >> doc;
  auto& coef = doc["result"]["solutions"][0]["vec"][0]["terms"][0]["coef"];
  coef = (coef.get<int>() + 1) % 5;
  std::ofstream(path) << doc.dump();
  auto bad = run({"verify", "kz", "--p", "5", "--q", "3", "--n", "4", "--input", path});
  CHECK(bad.code == cli::kExitFail);
  CHECK_FALSE(bad.doc()["result"]["pass"].get<bool>());

  std::ofstream(path) << "{ not json";
  CHECK(run({"verify", "kz", "--p", "5", "--q", "3", "--n", "4", "--input", path}).code == cli::kExitFail);
  CHECK(run({"verify", "kz", "--p", "5", "--q", "3", "--n", "4", "--input", path + ".missing"}).code ==
        cli::kExitFail);
  std::remove(path.c_str());
}

TEST_CASE("verification subcommands pass at (5,3,4)") {
  for (std::vector<std::string> extra : std::vector<std::vector<std::string>>{{"kz"},
                                                                               {"rank"},
                                                                               {"independence"},
                                                                               {"decomposition", "--max-degree", "30"},
                                                                               {"lucas", "--lucas-max", "60"},
                                                                               {"regularity"}}) {
    std::vector<std::string> args = {"verify"};
    args.insert(args.end(), extra.begin(), extra.end());
    for (std::string s : {"--p", "5", "--q", "3", "--n", "4"}) args.push_back(s);
    auto r = run(args);
    INFO(extra.front());
    CHECK(r.code == cli::kExitPass);
    CHECK(r.doc()["result"]["pass"].get<bool>());
  }
}

TEST_CASE("literal decomposition mode reports failure") {
  auto r = run({"verify", "decomposition", "--p", "5", "--q", "3", "--n", "4", "--max-degree", "30", "--mode", "literal"});
  CHECK(r.code == cli::kExitFail);
}

TEST_CASE("other subcommands") {
  auto hw = run({"hasse-witt", "--p", "5", "--q", "3", "--n", "4", "--curve", "y", "--full"});
  REQUIRE(hw.code == 0);
  CHECK(hw.doc()["result"]["genus"] == 3);
  CHECK(hw.doc()["result"]["full"].size() == 3);
  auto it = run({"iterate", "--p", "5", "--q", "3", "--n", "4", "--b", "1", "--m", "1", "--expand"});
  REQUIRE(it.code == 0);
  CHECK(it.doc()["result"]["kz_method"] == "expanded");
  auto fu = run({"fusion", "--p", "5", "--q", "3", "--n", "4", "--lambda", "2,1,1"});
  CHECK(fu.code == 0);
  CHECK(fu.doc()["result"]["span_rank"] == 1);
  auto cmp = run({"compare", "--p", "5", "--q", "3", "--n", "4", "--k", "3,4"});
  CHECK(cmp.code == 0);
}
