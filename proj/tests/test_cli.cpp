#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = floquet::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("floquet_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("bands") {
  const auto d = fresh_dir("bands");
  const auto r = run({"bands", "--symbol", "dimer", "--grid", "32", "--out", d.string(), "--format", "csv,json,svg"});
  CHECK(r.code == floquet::cli::kOk);
  for (const char* f : {"bands.csv", "summary.json", "bands.svg"}) CHECK(fs::exists(d / f));
  CHECK(slurp(d / "summary.json").find("\"gaps\"") != std::string::npos);
  CHECK(run({"bands"}).code == floquet::cli::kValidationFailure);
  CHECK(run({"bands", "--symbol", "{broken"}).code == floquet::cli::kValidationFailure);
  fs::remove_all(d);
}

TEST_CASE("reconstruct writes the bundle and repeats byte for byte") {
  const auto a = fresh_dir("rec_a"), b = fresh_dir("rec_b");
  for (const auto& d : {a, b}) {
    const auto r = run({"reconstruct", "--scenario", "ssh", "--m", "8", "--out", d.string(), "--format", "csv,json,svg"});
    REQUIRE(r.code == floquet::cli::kOk);
  }
  for (const char* f : {"points.csv", "bands.csv", "gaps.json", "summary.json", "reconstruct.svg"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "summary.json").find("\"scenario\": \"ssh\"") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("reconstruct config and precedence") {
  const auto d = fresh_dir("config");
  spill(d / "cfg.json", R"({"scenario":"periodic_nn","m":12})");
  REQUIRE(run({"reconstruct", "--config", (d / "cfg.json").string(), "--out", d.string()}).code == 0);
  CHECK(slurp(d / "summary.json").find("\"dimension\": 12") != std::string::npos);
  REQUIRE(run({"reconstruct", "--config", (d / "cfg.json").string(), "--m", "20", "--out", d.string()}).code == 0);
  CHECK(slurp(d / "summary.json").find("\"dimension\": 20") != std::string::npos);

  spill(d / "bad.json", R"({"scenario":"periodic_nn",)");
  CHECK(run({"reconstruct", "--config", (d / "bad.json").string(), "--out", d.string()}).code == 1);
  spill(d / "unknown.json", R"({"scenario":"periodic_nn","mm":3})");
  CHECK(run({"reconstruct", "--config", (d / "unknown.json").string(), "--out", d.string()}).code == 1);
  CHECK(run({"reconstruct", "--scenario", "nonsense", "--out", d.string()}).code == 1);
  CHECK(run({"reconstruct", "--config", (d / "missing.json").string()}).code == 1);
  fs::remove_all(d);
}

TEST_CASE("reconstruct an external matrix") {
  const auto d = fresh_dir("external");
  REQUIRE(run({"reconstruct", "--scenario", "ssh", "--m", "4", "--out", d.string()}).code == 0);
  std::ostringstream csv;
  // SSH with m = 1 written out by hand.
  csv << "1,-1,0,0,0\n-1,2,-0.5,0,0\n0,-0.5,3,-0.5,0\n0,0,-0.5,2,-1\n0,0,0,-1,1\n";
  spill(d / "m.csv", csv.str());
  const auto r = run({"reconstruct", "--scenario", "external_matrix", "--matrix", (d / "m.csv").string(), "--k", "2",
                      "--out", d.string()});
  CHECK(r.code == 0);
  CHECK(slurp(d / "summary.json").find("\"dimension\": 5") != std::string::npos);
  spill(d / "nonherm.csv", "1,2\n3,4\n");
  CHECK(run({"reconstruct", "--scenario", "external_matrix", "--matrix", (d / "nonherm.csv").string(), "--out",
             d.string()})
            .code == 1);
  fs::remove_all(d);
}

TEST_CASE("transform") {
  const auto d = fresh_dir("transform");
  spill(d / "v.txt", "1\n0\n0\n0\n");
  REQUIRE(run({"transform", "--input", (d / "v.txt").string(), "--k", "1", "--out", d.string()}).code == 0);
  const std::string j = slurp(d / "transform.json");
  CHECK(j.find("\"Q\": 1.5707963267949,") != std::string::npos);
  std::istringstream in(slurp(d / "transform.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "bin,alpha,weight");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
  spill(d / "odd.txt", "1\n2\n3\n");
  CHECK(run({"transform", "--input", (d / "odd.txt").string(), "--k", "2", "--out", d.string()}).code == 0);
  spill(d / "zero.txt", "0\n0\n");
  CHECK(run({"transform", "--input", (d / "zero.txt").string(), "--out", d.string()}).code == 1);
  CHECK(run({"transform", "--input", (d / "v.txt").string(), "--k", "0"}).code == 1);
  fs::remove_all(d);
}

TEST_CASE("verify") {
  const auto ok = run({"verify", "--only", "transform"});
  CHECK(ok.code == floquet::cli::kOk);
  CHECK(ok.out.find("0 failed") != std::string::npos);
  CHECK(run({"verify", "--only", "transform", "--tolerance-scale", "0"}).code == floquet::cli::kCheckFailure);
  CHECK(run({"verify", "--only", "nonsense"}).code == floquet::cli::kValidationFailure);
}

TEST_CASE("help and unknown commands") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"bands", "--symbol", "monomer", "--grid", "-4"}).code == 1);
}
