#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = BDISK_CLI_PATH;
const std::string kTmp = BDISK_TEST_TMP;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
  const std::string out_file = kTmp + "/" + tag + ".out";
  const std::string err_file = kTmp + "/" + tag + ".err";
  const std::string cmd = kCli + " " + args + " >" + out_file + " 2>" + err_file;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  const auto slurp = [](const std::string& f) {
    std::ifstream in(f);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// every invocation writes into a fresh root, so the run dir is the sole entry
fs::path only_run_dir(const std::string& root) {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) dirs.push_back(e.path());
  REQUIRE(dirs.size() == 1);
  return dirs.front();
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("cli help and report listing") {
  CHECK(run_cli("--help", "help").code == 0);
  const RunResult list = run_cli("report --list", "list");
  CHECK(list.code == 0);
  CHECK(list.out.find("disk-geometry") != std::string::npos);
  CHECK(list.out.find("flat-ratio") != std::string::npos);
}

TEST_CASE("sample-disk writes a reproducible container set") {
  const std::string root1 = kTmp + "/cli-sample1";
  const std::string root2 = kTmp + "/cli-sample2";
  fs::remove_all(root1);
  fs::remove_all(root2);
  const std::string common = "sample-disk --n 256 --seed 777 --name t ";
  CHECK(run_cli(common + "--output-dir " + root1, "sample1").code == 0);
  CHECK(run_cli(common + "--output-dir " + root2, "sample2").code == 0);

  const fs::path d1 = only_run_dir(root1);
  const fs::path d2 = only_run_dir(root2);
  CHECK(fs::exists(d1 / "config.json"));
  CHECK(fs::exists(d1 / "disk-000.bdisk"));
  CHECK(fs::exists(d1 / "disk-000.json"));
  const auto j = nlohmann::json::parse(file_bytes(d1 / "disk-000.json"));
  CHECK(j.at("parameters").at("n").get<std::size_t>() == 256);
  // same seed, same bytes
  CHECK(file_bytes(d1 / "disk-000.bdisk") == file_bytes(d2 / "disk-000.bdisk"));
}

TEST_CASE("sample-disk distance dump has the csv header") {
  const std::string root = kTmp + "/cli-dump";
  fs::remove_all(root);
  const RunResult r = run_cli(
      "sample-disk --n 128 --seed 5 --dump-distances --source 3 --output-dir " + root, "dump");
  CHECK(r.code == 0);
  const fs::path dir = only_run_dir(root);
  const std::string csv = file_bytes(dir / "disk-000-distances.csv");
  CHECK(csv.rfind("source,vertex,distance", 0) == 0);
}

TEST_CASE("usage errors exit with code 2") {
  const std::string root = kTmp + "/cli-usage";
  CHECK(run_cli("sample-disk --n 1 --output-dir " + root, "badn").code == 2);
  const RunResult unknown = run_cli("report nope --output-dir " + root, "badreport");
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("flat-ratio") != std::string::npos);  // lists valid names
  CHECK(run_cli("report --output-dir " + root, "noreport").code == 2);
  CHECK(run_cli("glue --schema /missing.json --output-dir " + root, "badschema").code == 2);
  CHECK(run_cli("frobnicate", "badcmd").code == 2);
}

TEST_CASE("report command writes json, text, and raw csv") {
  const std::string root = kTmp + "/cli-report";
  fs::remove_all(root);
  const RunResult r = run_cli(
      "report flat-ratio --set tuning.flat_m=64 --output-dir " + root, "flat");
  CHECK(r.code == 0);
  const fs::path reports = only_run_dir(root) / "reports";
  CHECK(fs::exists(reports / "flat-ratio.json"));
  CHECK(fs::exists(reports / "flat-ratio.txt"));
  const auto j = nlohmann::json::parse(file_bytes(reports / "flat-ratio.json"));
  CHECK(j.at("name") == "flat-ratio");
}

TEST_CASE("glue command round-trips a schema over disk files") {
  const std::string root = kTmp + "/cli-glue";
  fs::remove_all(root);
  CHECK(run_cli("sample-disk --n 256 --seed 9 --name a --output-dir " + root + "/a", "ga").code ==
        0);
  CHECK(run_cli("sample-disk --n 256 --seed 10 --name b --output-dir " + root + "/b", "gb").code ==
        0);
  const fs::path da = only_run_dir(root + "/a") / "disk-000.bdisk";
  const fs::path db = only_run_dir(root + "/b") / "disk-000.bdisk";

  // full-boundary identification; perimeters are read from the summaries
  const auto ja = nlohmann::json::parse(
      file_bytes(only_run_dir(root + "/a") / "disk-000.json"));
  const double per = ja.at("summary").at("perimeter").get<double>();
  nlohmann::json schema;
  schema["pieces"] = {{{"file", da.string()}}, {{"file", db.string()}}};
  schema["identifications"] = {{{"a", {{"piece", 0}, {"arc", {0.0, per}}}},
                                {"b", {{"piece", 1}, {"arc", {0.0, per}}}},
                                {"orientation", "reversed"}}};
  const std::string schema_file = kTmp + "/schema.json";
  std::ofstream(schema_file) << schema.dump(2);

  const RunResult r =
      run_cli("glue --schema " + schema_file + " --output-dir " + root + "/out", "glue");
  CHECK(r.code == 0);
  const fs::path dir = only_run_dir(root + "/out");
  CHECK(fs::exists(dir / "glued.bglue"));
  const auto j = nlohmann::json::parse(file_bytes(dir / "glued.json"));
  CHECK(j.at("pieces").get<int>() == 2);
  CHECK(j.at("interface_points").get<int>() >= 2);
}

TEST_CASE("flat counterexample shortcut") {
  const std::string root = kTmp + "/cli-flat";
  fs::remove_all(root);
  const RunResult r =
      run_cli("glue --flat-counterexample --m 64 --output-dir " + root, "flatglue");
  CHECK(r.code == 0);
}

TEST_CASE("oracle harness detects an injected fault") {
  const std::string root = kTmp + "/cli-oracle";
  const RunResult ok = run_cli(
      "oracle-check --oracles rmq --output-dir " + root + "/ok", "oracle_ok");
  CHECK(ok.code == 0);
  const RunResult bad = run_cli(
      "oracle-check --oracles rmq --inject-fault --output-dir " + root + "/bad", "oracle_bad");
  CHECK(bad.code == 1);
}
