// Command-line front end: prove / verify / report plus the standalone
// auditing helpers certcheck and dump-system.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polycert/certificates.hpp"
#include "polycert/pipeline.hpp"
#include "polycert/quadratic.hpp"
#include "polycert/verifier.hpp"

namespace {

// Regenerates the case system described by a certificate file against the
// graph catalog. Throws on any structural problem.
polycert::QuadraticSystem system_for_certificate(const polycert::CertificateFile& cert,
                                                 const std::string& graphs_dir) {
  std::map<std::string, polycert::PolyhedralGraph> graphs;
  if (!graphs_dir.empty()) {
    for (auto& g : polycert::detail::graphs_from_dir(graphs_dir)) graphs.emplace(g.id, std::move(g));
  }
  for (auto& g : polycert::builtin_catalog()) graphs.emplace(g.id, std::move(g));
  const auto it = graphs.find(cert.graph);
  if (it == graphs.end()) throw std::runtime_error("unknown graph '" + cert.graph + "'");
  const auto& g = it->second;
  if (static_cast<int>(cert.parents.size()) != g.vertex_count) {
    throw std::runtime_error("parent list does not fit graph '" + cert.graph + "'");
  }
  polycert::CaseDescriptor cd;
  cd.graph_id = cert.graph;
  cd.root = cert.root;
  cd.tree.root = cert.root;
  cd.tree.parent.assign(g.vertex_count + 1, 0);
  for (int i = 1; i <= g.vertex_count; ++i) cd.tree.parent[i] = cert.parents[i - 1];
  cd.tetra.apex = cert.root;
  cd.tetra.base = cert.tetra_base;
  return polycert::assemble_system(cd, g);
}

// Standalone exact check of one certificate against one serialized system.
// Exit codes: 0 verified, 1 rejected, 2 malformed input.
int run_certcheck(const std::string& system_path, const std::string& cert_path) {
  polycert::QuadraticSystem sys;
  polycert::RationalCertificate rc;
  try {
    std::ifstream in(system_path);
    if (!in) throw std::runtime_error("cannot open system file '" + system_path + "'");
    nlohmann::json j;
    in >> j;
    sys = polycert::system_from_json(j);
    const auto cert = polycert::load_certificate_file(cert_path);
    for (const auto& s : cert.y) rc.y.push_back(polycert::parse_rational(s));
    if (static_cast<int>(rc.y.size()) != sys.m()) {
      throw std::runtime_error("certificate length does not match the system");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const auto rep = polycert::verify(sys, rc);
  if (rep.verified) {
    std::cout << "verified: the system has no real solution\n";
    return 0;
  }
  if (!rep.nonnegativity_ok) {
    std::cout << "rejected: weight y_" << rep.witness_index << " is negative\n";
  } else {
    std::cout << "rejected: leading principal minor " << rep.witness_index << " is not positive\n";
  }
  return 1;
}

int run_dump_system(const std::string& cert_path, const std::string& graphs_dir,
                    const std::string& out_path) {
  try {
    const auto cert = polycert::load_certificate_file(cert_path);
    const auto sys = system_for_certificate(cert, graphs_dir);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << polycert::system_to_json(sys).dump(1) << "\n";
    std::cout << "system written to " << out_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infeasibility certificates for vertex-stability case systems of simplicial polyhedra"};
  app.require_subcommand(1);

  polycert::ProveOptions prove_opt;
  auto* prove = app.add_subcommand(
      "prove", "Enumerate all cases, compute certificates and verify them exactly");
  prove->add_option("--vertices", prove_opt.vertices, "Restrict to graphs on 5 or 6 vertices")
      ->check(CLI::IsMember({"5", "6", "all"}))
      ->default_val("all");
  prove->add_option("--graphs", prove_opt.graphs_dir, "Directory of graph JSON files (replaces the builtin catalog)");
  prove->add_option("--out", prove_opt.out_dir, "Output directory")->default_val("out");
  prove->add_option("--workers", prove_opt.workers, "Worker threads (0 = logical cores)");
  prove->add_option("--z-threshold", prove_opt.z_threshold, "Minimum z accepted from the solver");
  prove->add_option("--max-iters", prove_opt.max_iters, "Solver iteration budget per case");
  prove->add_option("--max-den", prove_opt.max_den, "Denominator bound when rounding certificates");

  polycert::VerifyOptions verify_opt;
  auto* verify = app.add_subcommand(
      "verify", "Re-verify a directory of certificates from their case descriptions alone");
  verify->add_option("--certs", verify_opt.certs_dir, "Directory of certificate files")->required();
  verify->add_option("--graphs", verify_opt.graphs_dir, "Directory of extra graph JSON files");

  polycert::ReportOptions report_opt;
  auto* report = app.add_subcommand("report", "Render a summary table from a prove run");
  report->add_option("--out", report_opt.out_dir, "Directory holding summary.csv")->default_val("out");

  std::string cc_system, cc_cert;
  auto* certcheck = app.add_subcommand(
      "certcheck", "Exactly check one certificate against one serialized system");
  certcheck->add_option("--system", cc_system, "System JSON file")->required();
  certcheck->add_option("--cert", cc_cert, "Certificate JSON file")->required();

  std::string ds_cert, ds_graphs, ds_out;
  auto* dump = app.add_subcommand("dump-system", "Write the case system of a certificate as JSON");
  dump->add_option("--cert", ds_cert, "Certificate JSON file")->required();
  dump->add_option("--graphs", ds_graphs, "Directory of extra graph JSON files");
  dump->add_option("--out", ds_out, "Output path for the system JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (prove->parsed()) return polycert::run_prove(prove_opt);
    if (verify->parsed()) return polycert::run_verify(verify_opt);
    if (report->parsed()) return polycert::run_report(report_opt);
    if (certcheck->parsed()) return run_certcheck(cc_system, cc_cert);
    if (dump->parsed()) return run_dump_system(ds_cert, ds_graphs, ds_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
