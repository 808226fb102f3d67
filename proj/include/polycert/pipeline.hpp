#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "polycert/automorphism.hpp"
#include "polycert/certificates.hpp"
#include "polycert/enumeration.hpp"
#include "polycert/graph.hpp"
#include "polycert/quadratic.hpp"
#include "polycert/sdp.hpp"
#include "polycert/verifier.hpp"

namespace polycert {

inline constexpr const char* kToolVersion = "0.1.0";

struct ProveOptions {
  std::string vertices = "all";  // "5", "6" or "all"
  std::string graphs_dir;        // replaces the builtin catalog when set
  std::string out_dir = "out";
  int workers = 0;  // 0 = logical cores
  double z_threshold = 1e-3;
  int max_iters = 5000;
  long max_den = 1000000;
};

struct VerifyOptions {
  std::string certs_dir;
  std::string graphs_dir;  // extra graphs, looked up before the builtins
};

struct ReportOptions {
  std::string out_dir = "out";
};

namespace detail {

inline std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string format_double(double v, const char* fmt = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline std::vector<PolyhedralGraph> graphs_from_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<PolyhedralGraph> out;
  std::set<std::string> ids;
  for (const auto& f : files) {
    auto g = load_graph(f);
    if (!ids.insert(g.id).second) {
      throw std::runtime_error("duplicate graph id '" + g.id + "' in '" + dir + "'");
    }
    out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<PolyhedralGraph> collect_graphs(const ProveOptions& opt) {
  std::vector<PolyhedralGraph> graphs =
      opt.graphs_dir.empty() ? builtin_catalog() : graphs_from_dir(opt.graphs_dir);
  if (opt.vertices != "all") {
    const int want = std::stoi(opt.vertices);
    std::erase_if(graphs, [want](const PolyhedralGraph& g) { return g.vertex_count != want; });
  }
  for (const auto& g : graphs) {
    auto v = validate_triangulation(g);
    if (!v.ok) throw std::runtime_error("graph '" + g.id + "' failed validation");
  }
  return graphs;
}

struct CaseResult {
  std::string graph_id;
  int vertex_count = 0;
  int root = 0;
  int tree_index = 0;
  int tetra_index = 0;
  long case_index = 0;
  std::vector<int> parents;
  std::array<int, 3> tetra_base{};
  int m = 0;
  int n = 0;
  std::vector<std::string> y;
  double z = 0.0;
  bool verified = false;
  int attempts = 0;
  double ms = 0.0;
};

/// Solve, round and exactly verify one case. Retry ladder on verification
/// failure: re-round with a 1000x denominator bound, then re-solve with 4x
/// the iteration budget; three attempts total.
inline CaseResult process_case(const PolyhedralGraph& g, const CaseDescriptor& cd,
                               const ProveOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CaseResult res;
  res.graph_id = cd.graph_id;
  res.vertex_count = g.vertex_count;
  res.root = cd.root;
  res.tree_index = cd.tree_index;
  res.tetra_index = cd.tetra_index;
  res.case_index = cd.case_index;
  res.parents.assign(cd.tree.parent.begin() + 1, cd.tree.parent.end());
  res.tetra_base = cd.tetra.base;

  const QuadraticSystem sys = assemble_system(cd, g);
  res.m = sys.m();
  res.n = sys.n;
  const SdpProblem prob = SdpProblem::from_system(sys);

  SdpOptions sopt;
  sopt.z_threshold = opt.z_threshold;
  sopt.max_iters = opt.max_iters;

  FloatCertificate fc = solve_certificate_sdp(prob, sopt);
  std::vector<mpq_class> y;
  bool ok = false;

  for (int attempt = 1; attempt <= 3 && !ok; ++attempt) {
    res.attempts = attempt;
    if (attempt == 3) {
      sopt.max_iters = opt.max_iters * 4;
      fc = solve_certificate_sdp(prob, sopt);
    }
    if (fc.status != SolveStatus::positive) continue;
    RationalizeOptions ropt;
    ropt.max_den = (attempt == 1) ? opt.max_den : opt.max_den * 1000;
    y = rationalize(fc, ropt);
    ok = verify(sys, RationalCertificate{y, cd.graph_id}).verified;
  }

  res.z = fc.z;
  res.verified = ok;
  if (fc.status == SolveStatus::positive) {
    res.y.reserve(y.size());
    for (const auto& q : y) res.y.push_back(format_rational(q));
  }
  res.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

inline void write_summary_csv(const std::string& path, const std::vector<CaseResult>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "graph,root,tree_index,tetra_index,z,verified,ms\n";
  for (const auto& r : rows) {
    out << r.graph_id << ',' << r.root << ',' << r.tree_index << ',' << r.tetra_index << ','
        << format_double(r.z) << ',' << (r.verified ? "true" : "false") << ','
        << format_double(r.ms, "%.3f") << "\n";
  }
}

}  // namespace detail

/// Full pipeline: catalog -> symmetry classes -> cases -> systems -> SDP ->
/// rationalize -> exact verification, with a static partition of the case
/// list over worker threads. Writes one certificate per case, a summary CSV
/// and a run manifest. Exit status: 0 when every case verified, 3 when any
/// case failed, 2 on configuration or I/O problems.
inline int run_prove(const ProveOptions& opt, std::ostream& log = std::cout) {
  namespace fs = std::filesystem;
  const std::string started = detail::iso_timestamp();

  std::vector<PolyhedralGraph> graphs;
  try {
    graphs = detail::collect_graphs(opt);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  if (graphs.empty()) {
    log << "error: no graphs selected\n";
    return 2;
  }

  struct WorkItem {
    const PolyhedralGraph* graph;
    CaseDescriptor cd;
  };
  std::vector<WorkItem> work;
  std::map<std::string, long> case_totals;
  try {
    for (const auto& g : graphs) {
      const auto partition = automorphism_classes(g);
      auto cases = enumerate_cases(g, partition);
      case_totals[g.id] = static_cast<long>(cases.size());
      for (auto& cd : cases) work.push_back({&g, std::move(cd)});
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::max(1, opt.workers > 0 ? opt.workers : (hw > 0 ? hw : 1));

  std::vector<detail::CaseResult> results(work.size());
  {
    std::vector<std::thread> pool;
    const std::size_t total = work.size();
    for (int w = 0; w < workers; ++w) {
      const std::size_t lo = total * w / workers;
      const std::size_t hi = total * (w + 1) / workers;
      pool.emplace_back([&work, &results, &opt, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) {
          try {
            results[i] = detail::process_case(*work[i].graph, work[i].cd, opt);
          } catch (const std::exception&) {
            // a case that cannot be processed is a failed case, not a crash
            detail::CaseResult& r = results[i];
            const CaseDescriptor& cd = work[i].cd;
            r.graph_id = cd.graph_id;
            r.vertex_count = work[i].graph->vertex_count;
            r.root = cd.root;
            r.tree_index = cd.tree_index;
            r.tetra_index = cd.tetra_index;
            r.case_index = cd.case_index;
            r.parents.assign(cd.tree.parent.begin() + 1, cd.tree.parent.end());
            r.tetra_base = cd.tetra.base;
            r.m = work[i].graph->vertex_count;
            r.n = 3 * (work[i].graph->vertex_count - 1);
            r.verified = false;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  long verified_count = 0;
  for (const auto& r : results) verified_count += r.verified ? 1 : 0;

  try {
    const fs::path out_dir(opt.out_dir);
    const fs::path cert_dir = out_dir / "certs";
    fs::create_directories(cert_dir);
    for (const auto& r : results) {
      CertificateFile c;
      c.graph = r.graph_id;
      c.root = r.root;
      c.parents = r.parents;
      c.tetra_base = r.tetra_base;
      c.m = r.m;
      c.n = r.n;
      c.y = r.y;
      c.achieved_z = r.z;
      c.verified = r.verified;
      write_certificate_file(
          (cert_dir / certificate_filename(r.graph_id, r.root, r.tree_index, r.tetra_index))
              .string(),
          c);
    }
    detail::write_summary_csv((out_dir / "summary.csv").string(), results);

    nlohmann::json manifest;
    manifest["tool_version"] = kToolVersion;
    nlohmann::json gids = nlohmann::json::array();
    for (const auto& g : graphs) gids.push_back(g.id);
    manifest["graphs"] = gids;
    manifest["options"] = {{"vertices", opt.vertices},
                           {"z_threshold", opt.z_threshold},
                           {"max_iters", opt.max_iters},
                           {"max_den", opt.max_den},
                           {"workers", workers}};
    manifest["started"] = started;
    manifest["finished"] = detail::iso_timestamp();
    manifest["case_totals"] = case_totals;
    manifest["total_cases"] = static_cast<long>(results.size());
    manifest["verified_cases"] = verified_count;
    manifest["all_verified"] = verified_count == static_cast<long>(results.size());
    std::ofstream mf(out_dir / "manifest.json");
    if (!mf) throw std::runtime_error("cannot write manifest");
    mf << manifest.dump(1) << "\n";
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }

  std::map<int, std::pair<long, long>> per_v;  // V -> (cases, verified)
  std::map<int, double> min_z;
  for (const auto& r : results) {
    auto& [cases, ver] = per_v[r.vertex_count];
    ++cases;
    ver += r.verified ? 1 : 0;
    auto it = min_z.find(r.vertex_count);
    if (it == min_z.end() || r.z < it->second) min_z[r.vertex_count] = r.z;
  }
  for (const auto& g : graphs) {
    log << "graph " << g.id << ": " << case_totals[g.id] << " cases\n";
  }
  for (const auto& [v, counts] : per_v) {
    log << "V=" << v << ": " << counts.second << "/" << counts.first
        << " cases verified, min achieved z = " << detail::format_double(min_z[v]) << "\n";
  }
  log << "total: " << verified_count << "/" << results.size() << " cases verified\n";
  return verified_count == static_cast<long>(results.size()) ? 0 : 3;
}

/// Audit path: re-derives every case system from the case description
/// stored in each certificate (coefficients on disk are never trusted) and
/// re-runs the exact verifier. Exit status: 0 all verified, 1 at least one
/// rejected (each named), 2 malformed input.
inline int run_verify(const VerifyOptions& opt, std::ostream& log = std::cout) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  try {
    for (const auto& entry : fs::directory_iterator(opt.certs_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path().string());
      }
    }
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    log << "error: no certificate files in '" << opt.certs_dir << "'\n";
    return 2;
  }

  std::map<std::string, PolyhedralGraph> graphs;
  try {
    if (!opt.graphs_dir.empty()) {
      for (auto& g : detail::graphs_from_dir(opt.graphs_dir)) graphs.emplace(g.id, std::move(g));
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  for (auto& g : builtin_catalog()) graphs.emplace(g.id, std::move(g));

  long rejected = 0;
  for (const auto& file : files) {
    CertificateFile cert;
    try {
      cert = load_certificate_file(file);
    } catch (const std::exception& e) {
      log << "error: " << e.what() << "\n";
      return 2;
    }
    const auto git = graphs.find(cert.graph);
    if (git == graphs.end()) {
      log << "error: " << file << ": unknown graph '" << cert.graph << "'\n";
      return 2;
    }
    const PolyhedralGraph& g = git->second;
    const int V = g.vertex_count;
    if (static_cast<int>(cert.parents.size()) != V || cert.root < 1 || cert.root > V) {
      log << "error: " << file << ": case description does not fit graph '" << cert.graph << "'\n";
      return 2;
    }
    CaseDescriptor cd;
    cd.graph_id = cert.graph;
    cd.root = cert.root;
    cd.tree.root = cert.root;
    cd.tree.parent.assign(V + 1, 0);
    for (int i = 1; i <= V; ++i) cd.tree.parent[i] = cert.parents[i - 1];
    cd.tetra.apex = cert.root;
    cd.tetra.base = cert.tetra_base;

    QuadraticSystem sys;
    try {
      sys = assemble_system(cd, g);
    } catch (const std::exception& e) {
      log << "error: " << file << ": " << e.what() << "\n";
      return 2;
    }
    if (cert.m != sys.m() || cert.n != sys.n) {
      log << "error: " << file << ": declared dimensions do not match the case system\n";
      return 2;
    }

    RationalCertificate rc;
    rc.case_ref = file;
    try {
      for (const auto& s : cert.y) rc.y.push_back(parse_rational(s));
    } catch (const std::invalid_argument& e) {
      log << "error: " << file << ": " << e.what() << "\n";
      return 2;
    }
    if (static_cast<int>(rc.y.size()) != sys.m()) {
      log << "REJECTED " << file << ": certificate has " << rc.y.size() << " weights, system has "
          << sys.m() << "\n";
      ++rejected;
      continue;
    }
    const VerificationReport rep = verify(sys, rc);
    if (!rep.verified) {
      log << "REJECTED " << file << ": "
          << (rep.witness_kind == WitnessKind::negative_entry
                  ? "negative weight y_" + std::to_string(rep.witness_index)
                  : "leading principal minor " + std::to_string(rep.witness_index) +
                        " not positive")
          << "\n";
      ++rejected;
    }
  }
  log << files.size() - rejected << "/" << files.size() << " certificates verified\n";
  return rejected == 0 ? 0 : 1;
}

/// Renders a summary table from the prove run's CSV: one row per graph and
/// representative root with its tree and tetrahedron counts, plus achieved-z
/// statistics per graph. Exit status: 0 on success, 2 when the CSV is
/// missing or malformed.
inline int run_report(const ReportOptions& opt, std::ostream& log = std::cout) {
  namespace fs = std::filesystem;
  const fs::path csv_path = fs::path(opt.out_dir) / "summary.csv";
  std::ifstream in(csv_path);
  if (!in) {
    log << "error: cannot open '" << csv_path.string() << "'\n";
    return 2;
  }
  struct RowKey {
    std::string graph;
    int root;
    bool operator<(const RowKey& o) const {
      return graph != o.graph ? graph < o.graph : root < o.root;
    }
  };
  struct RowAgg {
    std::set<int> trees;
    std::set<int> tetras;
    long order = 0;  // first-seen order, to keep the run's graph ordering
  };
  std::map<RowKey, RowAgg> rows;
  std::map<std::string, std::vector<double>> graph_z;
  std::vector<std::string> graph_order;
  std::string line;
  std::getline(in, line);
  if (line != "graph,root,tree_index,tetra_index,z,verified,ms") {
    log << "error: unexpected CSV header in '" << csv_path.string() << "'\n";
    return 2;
  }
  long order = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 7) {
      log << "error: malformed CSV row '" << line << "'\n";
      return 2;
    }
    try {
      RowKey key{fields[0], std::stoi(fields[1])};
      auto [it, fresh] = rows.try_emplace(key);
      if (fresh) it->second.order = order++;
      it->second.trees.insert(std::stoi(fields[2]));
      it->second.tetras.insert(std::stoi(fields[3]));
      if (graph_z.find(fields[0]) == graph_z.end()) graph_order.push_back(fields[0]);
      graph_z[fields[0]].push_back(std::stod(fields[4]));
    } catch (const std::exception&) {
      log << "error: malformed CSV row '" << line << "'\n";
      return 2;
    }
  }

  std::vector<std::pair<RowKey, RowAgg>> ordered(rows.begin(), rows.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.second.order < b.second.order; });

  std::ostringstream md;
  md << "# Certification summary\n\n";
  md << "| graph | v | trees | tetrahedra | cases |\n";
  md << "|---|---|---|---|---|\n";
  for (const auto& [key, agg] : ordered) {
    md << "| " << key.graph << " | " << key.root << " | " << agg.trees.size() << " | "
       << agg.tetras.size() << " | " << agg.trees.size() * agg.tetras.size() << " |\n";
  }
  md << "\n| graph | min z | median z |\n";
  md << "|---|---|---|\n";
  for (const auto& gid : graph_order) {
    auto z = graph_z[gid];
    std::sort(z.begin(), z.end());
    const double median =
        z.size() % 2 == 1 ? z[z.size() / 2] : 0.5 * (z[z.size() / 2 - 1] + z[z.size() / 2]);
    md << "| " << gid << " | " << detail::format_double(z.front()) << " | "
       << detail::format_double(median) << " |\n";
  }

  const fs::path report_path = fs::path(opt.out_dir) / "report.md";
  std::ofstream out(report_path);
  if (!out) {
    log << "error: cannot write '" << report_path.string() << "'\n";
    return 2;
  }
  out << md.str();
  log << "report written to " << report_path.string() << "\n";
  return 0;
}

}  // namespace polycert
