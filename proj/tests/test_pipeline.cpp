#include <catch2/catch.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polycert/certificates.hpp"
#include "polycert/pipeline.hpp"

using namespace polycert;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / "polycert_pipeline_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path k4_graphs_dir() {
  auto dir = fresh_dir("graphs_k4");
  std::ofstream out(dir / "tetrahedron4.json");
  out << R"({"id":"tetrahedron4","V":4,"faces":[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]})";
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// the ms column is wall time and legitimately differs between runs
std::string csv_without_ms(const fs::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) {
    auto cut = line.rfind(',');
    out += line.substr(0, cut);
    out += '\n';
  }
  return out;
}

ProveOptions k4_options(const fs::path& out_dir, const fs::path& graphs, int workers = 2) {
  ProveOptions opt;
  opt.graphs_dir = graphs.string();
  opt.out_dir = out_dir.string();
  opt.workers = workers;
  return opt;
}

}  // namespace

TEST_CASE("prove on the tetrahedron catalog certifies all sixteen cases") {
  auto graphs = k4_graphs_dir();
  auto out = fresh_dir("k4_run");
  std::ostringstream log;
  REQUIRE(run_prove(k4_options(out, graphs), log) == 0);

  auto certs = sorted_files(out / "certs");
  REQUIRE(certs.size() == 16);
  CHECK(certs.front().filename().string() == "tetrahedron4_v1_t0_k0.json");
  CHECK(certs.back().filename().string() == "tetrahedron4_v1_t9_k0.json");

  long verified = 0;
  for (const auto& f : certs) {
    auto cert = load_certificate_file(f.string());
    CHECK(cert.graph == "tetrahedron4");
    CHECK(cert.m == 4);
    CHECK(cert.n == 9);
    CHECK(cert.y.size() == 4);
    CHECK(cert.achieved_z > 0.03);
    verified += cert.verified ? 1 : 0;
  }
  CHECK(verified == 16);

  auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["total_cases"] == 16);
  CHECK(manifest["verified_cases"] == 16);
  CHECK(manifest["all_verified"] == true);
  CHECK(manifest["case_totals"]["tetrahedron4"] == 16);

  auto csv = slurp(out / "summary.csv");
  CHECK(csv.rfind("graph,root,tree_index,tetra_index,z,verified,ms\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);

  SECTION("round-trip verification accepts the whole directory") {
    VerifyOptions vo;
    vo.certs_dir = (out / "certs").string();
    vo.graphs_dir = graphs.string();
    std::ostringstream vlog;
    CHECK(run_verify(vo, vlog) == 0);
  }

  SECTION("a tampered weight is rejected and the file is named") {
    auto victim = certs[5];
    auto cert = load_certificate_file(victim.string());
    cert.y[1] = "-" + cert.y[1];
    write_certificate_file(victim.string(), cert);
    VerifyOptions vo;
    vo.certs_dir = (out / "certs").string();
    vo.graphs_dir = graphs.string();
    std::ostringstream vlog;
    CHECK(run_verify(vo, vlog) == 1);
    CHECK(vlog.str().find(victim.filename().string()) != std::string::npos);
  }

  SECTION("a certificate whose parent map is not a tree is malformed") {
    auto victim = certs[3];
    auto cert = load_certificate_file(victim.string());
    cert.parents = {0, 3, 4, 2};  // 2->3->4->2 cycle, never reaches the root
    write_certificate_file(victim.string(), cert);
    VerifyOptions vo;
    vo.certs_dir = (out / "certs").string();
    vo.graphs_dir = graphs.string();
    std::ostringstream vlog;
    CHECK(run_verify(vo, vlog) == 2);
  }

  SECTION("report renders counts and z statistics") {
    ReportOptions ro;
    ro.out_dir = out.string();
    std::ostringstream rlog;
    REQUIRE(run_report(ro, rlog) == 0);
    auto report = slurp(out / "report.md");
    CHECK(report.find("| tetrahedron4 | 1 | 16 | 1 | 16 |") != std::string::npos);
    CHECK(report.find("min z") != std::string::npos);
  }
}

TEST_CASE("prove output is deterministic and worker-count invariant") {
  auto graphs = k4_graphs_dir();
  auto out_a = fresh_dir("det_a");
  auto out_b = fresh_dir("det_b");
  auto out_c = fresh_dir("det_c");
  std::ostringstream log;
  REQUIRE(run_prove(k4_options(out_a, graphs, 2), log) == 0);
  REQUIRE(run_prove(k4_options(out_b, graphs, 2), log) == 0);
  REQUIRE(run_prove(k4_options(out_c, graphs, 1), log) == 0);

  auto a = sorted_files(out_a / "certs");
  auto b = sorted_files(out_b / "certs");
  auto c = sorted_files(out_c / "certs");
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(slurp(a[i]) == slurp(b[i]));
    CHECK(slurp(a[i]) == slurp(c[i]));
  }
  CHECK(csv_without_ms(out_a / "summary.csv") == csv_without_ms(out_b / "summary.csv"));
  CHECK(csv_without_ms(out_a / "summary.csv") == csv_without_ms(out_c / "summary.csv"));
}

TEST_CASE("a too-coarse denominator bound recovers through the retry ladder") {
  // max_den = 1 rounds the weights to integers, which cannot verify; the
  // second attempt re-rounds with the bound scaled by 1000 and succeeds
  auto graphs = k4_graphs_dir();
  auto out = fresh_dir("retry_run");
  auto opt = k4_options(out, graphs);
  opt.max_den = 1;
  std::ostringstream log;
  REQUIRE(run_prove(opt, log) == 0);
  for (const auto& f : sorted_files(out / "certs")) {
    auto cert = load_certificate_file(f.string());
    CHECK(cert.verified);
    bool fine_denominator = false;
    for (const auto& s : cert.y) {
      if (s.find('/') != std::string::npos && s.substr(s.find('/') + 1) != "1") {
        fine_denominator = true;
      }
    }
    CHECK(fine_denominator);
  }
}

TEST_CASE("verify on an empty directory is malformed input") {
  auto dir = fresh_dir("empty_certs");
  VerifyOptions vo;
  vo.certs_dir = dir.string();
  std::ostringstream log;
  CHECK(run_verify(vo, log) == 2);
}

TEST_CASE("certificate json schema is enforced") {
  CertificateFile c;
  c.graph = "tetrahedron4";
  c.root = 1;
  c.parents = {0, 1, 1, 1};
  c.tetra_base = {2, 3, 4};
  c.m = 4;
  c.n = 9;
  c.y = {"1/2", "1/2", "1/2", "1/2"};
  c.achieved_z = 0.25;
  c.verified = true;
  auto j = certificate_to_json(c);

  auto back = certificate_from_json(j);
  CHECK(back.graph == c.graph);
  CHECK(back.parents == c.parents);
  CHECK(back.y == c.y);

  auto missing = j;
  missing.erase("y");
  CHECK_THROWS_AS(certificate_from_json(missing), std::runtime_error);

  auto wrong_schema = j;
  wrong_schema["schema"] = 2;
  CHECK_THROWS_AS(certificate_from_json(wrong_schema), std::runtime_error);

  auto short_base = j;
  short_base["tetra_base"] = std::vector<int>{2, 3};
  CHECK_THROWS_AS(certificate_from_json(short_base), std::runtime_error);

  CHECK_THROWS_AS(load_certificate_file("/nonexistent/cert.json"), std::runtime_error);
}

TEST_CASE("report without a summary CSV fails with a config error") {
  auto dir = fresh_dir("no_csv");
  ReportOptions ro;
  ro.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run_report(ro, log) == 2);
}

TEST_CASE("report on an empty run emits only the table headers") {
  auto dir = fresh_dir("empty_csv");
  {
    std::ofstream out(dir / "summary.csv");
    out << "graph,root,tree_index,tetra_index,z,verified,ms\n";
  }
  ReportOptions ro;
  ro.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_report(ro, log) == 0);
  auto report = slurp(dir / "report.md");
  CHECK(report.find("| graph | v | trees | tetrahedra | cases |") != std::string::npos);
  CHECK(report.find("| graph | min z | median z |") != std::string::npos);
}

TEST_CASE("report rejects malformed CSV rows") {
  auto dir = fresh_dir("bad_csv");
  {
    std::ofstream out(dir / "summary.csv");
    out << "graph,root,tree_index,tetra_index,z,verified,ms\n";
    out << "bipyramid5,not-a-number,0,0,0.1,true,1.0\n";
  }
  ReportOptions ro;
  ro.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run_report(ro, log) == 2);
}

TEST_CASE("a graphs directory with clashing ids is a config error") {
  auto dir = fresh_dir("dup_ids");
  const std::string body =
      R"({"id":"tetrahedron4","V":4,"faces":[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]})";
  std::ofstream(dir / "a.json") << body;
  std::ofstream(dir / "b.json") << body;
  ProveOptions opt;
  opt.graphs_dir = dir.string();
  opt.out_dir = fresh_dir("dup_ids_out").string();
  std::ostringstream log;
  CHECK(run_prove(opt, log) == 2);
  CHECK(log.str().find("duplicate graph id") != std::string::npos);
}

TEST_CASE("prove with an unknown vertex filter selects nothing") {
  ProveOptions opt;
  opt.vertices = "5";
  opt.graphs_dir = k4_graphs_dir().string();
  opt.out_dir = fresh_dir("mismatch").string();
  std::ostringstream log;
  CHECK(run_prove(opt, log) == 2);  // no graphs selected
}

TEST_CASE("prove over the builtin five-vertex catalog") {
  ProveOptions opt;
  opt.vertices = "5";
  opt.out_dir = fresh_dir("v5_run").string();
  opt.workers = 2;
  std::ostringstream log;
  REQUIRE(run_prove(opt, log) == 0);
  auto certs = sorted_files(fs::path(opt.out_dir) / "certs");
  CHECK(certs.size() == 375);
  auto manifest = nlohmann::json::parse(slurp(fs::path(opt.out_dir) / "manifest.json"));
  CHECK(manifest["total_cases"] == 375);
  CHECK(manifest["all_verified"] == true);
  CHECK(log.str().find("375/375") != std::string::npos);

  VerifyOptions vo;
  vo.certs_dir = (fs::path(opt.out_dir) / "certs").string();
  std::ostringstream vlog;
  CHECK(run_verify(vo, vlog) == 0);

  ReportOptions ro;
  ro.out_dir = opt.out_dir;
  std::ostringstream rlog;
  REQUIRE(run_report(ro, rlog) == 0);
  auto report = slurp(fs::path(opt.out_dir) / "report.md");
  CHECK(report.find("| bipyramid5 | 1 | 75 | 3 | 225 |") != std::string::npos);
  CHECK(report.find("| bipyramid5 | 3 | 75 | 2 | 150 |") != std::string::npos);
}

TEST_CASE("command line round trip", "[cli]") {
  const char* bin = std::getenv("POLYCERT_BIN");
  if (bin == nullptr) {
    WARN("POLYCERT_BIN not set; skipping CLI round trip");
    return;
  }
  const std::string exe = std::string("\"") + bin + "\"";
  auto graphs = k4_graphs_dir();
  auto out = fresh_dir("cli_run");
  auto run = [&](const std::string& args) {
    const std::string cmd = exe + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };

  CHECK(run("--help") == 0);
  CHECK(run("definitely-not-a-subcommand") == 2);
  CHECK(run("prove --vertices 9") == 2);

  REQUIRE(run("prove --graphs " + graphs.string() + " --out " + out.string() + " --workers 2") == 0);
  CHECK(run("verify --certs " + (out / "certs").string() + " --graphs " + graphs.string()) == 0);
  CHECK(run("report --out " + out.string()) == 0);

  const auto cert = (out / "certs" / "tetrahedron4_v1_t4_k0.json").string();
  const auto sysfile = (out / "system.json").string();
  REQUIRE(run("dump-system --cert " + cert + " --graphs " + graphs.string() + " --out " + sysfile) == 0);
  CHECK(run("certcheck --system " + sysfile + " --cert " + cert) == 0);

  // tamper: flip one weight's sign through the JSON surface
  auto tampered = load_certificate_file(cert);
  tampered.y[0] = "-" + tampered.y[0];
  const auto bad = (out / "tampered.json").string();
  write_certificate_file(bad, tampered);
  CHECK(run("certcheck --system " + sysfile + " --cert " + bad) == 1);
  CHECK(run("certcheck --system /nonexistent.json --cert " + cert) == 2);
}
