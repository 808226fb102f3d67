#pragma once

#include <array>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace polycert {

/// On-disk certificate schema, one file per case. Only the case description
/// and the rational weights are trusted input for auditing; the system is
/// always regenerated from the case, never read back from disk.
struct CertificateFile {
  int schema = 1;
  std::string graph;
  int root = 0;
  std::vector<int> parents;  // one entry per vertex, 0 at the root
  std::array<int, 3> tetra_base{};
  int m = 0;
  int n = 0;
  std::vector<std::string> y;  // "p/q" strings
  double achieved_z = 0.0;
  bool verified = false;
};

inline std::string certificate_filename(const std::string& graph, int root, int tree_index,
                                        int tetra_index) {
  return graph + "_v" + std::to_string(root) + "_t" + std::to_string(tree_index) + "_k" +
         std::to_string(tetra_index) + ".json";
}

inline nlohmann::json certificate_to_json(const CertificateFile& c) {
  nlohmann::json j;
  j["schema"] = c.schema;
  j["graph"] = c.graph;
  j["root"] = c.root;
  j["parents"] = c.parents;
  j["tetra_base"] = c.tetra_base;
  j["m"] = c.m;
  j["n"] = c.n;
  j["y"] = c.y;
  j["achieved_z"] = c.achieved_z;
  j["verified"] = c.verified;
  return j;
}

inline CertificateFile certificate_from_json(const nlohmann::json& j) {
  CertificateFile c;
  try {
    if (!j.is_object()) throw std::runtime_error("certificate json must be an object");
    c.schema = j.at("schema").get<int>();
    if (c.schema != 1) throw std::runtime_error("unsupported certificate schema");
    c.graph = j.at("graph").get<std::string>();
    c.root = j.at("root").get<int>();
    c.parents = j.at("parents").get<std::vector<int>>();
    auto base = j.at("tetra_base").get<std::vector<int>>();
    if (base.size() != 3) throw std::runtime_error("tetra_base must have three vertices");
    c.tetra_base = {base[0], base[1], base[2]};
    c.m = j.at("m").get<int>();
    c.n = j.at("n").get<int>();
    c.y = j.at("y").get<std::vector<std::string>>();
    c.achieved_z = j.at("achieved_z").get<double>();
    c.verified = j.at("verified").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("certificate json: ") + e.what());
  }
  return c;
}

inline void write_certificate_file(const std::string& path, const CertificateFile& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write certificate file '" + path + "'");
  out << certificate_to_json(c).dump(1) << "\n";
}

inline CertificateFile load_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open certificate file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("certificate file '" + path + "': " + e.what());
  }
  return certificate_from_json(j);
}

}  // namespace polycert
