#include "lgvi/harness/feature_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lgvi/errors.hpp"

namespace lgvi {

namespace {

std::vector<double> parse_reals(const std::string& value, size_t expected,
                                const std::string& field, int lineno) {
  std::stringstream ss(value);
  std::vector<double> reals;
  double d;
  while (ss >> d) reals.push_back(d);
  std::string rest;
  if (ss.clear(), ss >> rest) {
    throw ParseError("line " + std::to_string(lineno) + ": field '" + field +
                     "' has a non-numeric token '" + rest + "'");
  }
  if (reals.size() != expected) {
    throw ParseError("line " + std::to_string(lineno) + ": field '" + field +
                     "' expects " + std::to_string(expected) + " reals, got " +
                     std::to_string(reals.size()));
  }
  return reals;
}

}  // namespace

CameraScene ingest_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open feature file '" + path + "'");

  CameraScene scene;
  bool have_K = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected key = values");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    if (key == "K") {
      const auto v = parse_reals(value, 9, "K", lineno);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scene.K(i, j) = v[3 * i + j];
      have_K = true;
    } else if (key == "feature") {
      const auto v = parse_reals(value, 5, "feature", lineno);
      Feature f;
      f.pixel = Eigen::Vector2d(v[0], v[1]);
      f.world = Eigen::Vector3d(v[2], v[3], v[4]);
      scene.features.push_back(f);
    } else if (key == "ground_truth") {
      const auto v = parse_reals(value, 12, "ground_truth", lineno);
      Eigen::Matrix3d R;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) R(i, j) = v[3 * i + j];
      scene.ground_truth = Pose{R, Eigen::Vector3d(v[9], v[10], v[11])};
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown field '" +
                       key + "'");
    }
  }
  if (!have_K) throw ParseError("'" + path + "': missing mandatory field 'K'");
  return scene;
}

void write_features(const std::string& path, const CameraScene& scene) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open feature file '" + path + "' for writing");
  char buf[1024];
  auto put_reals = [&](const char* key, const double* v, int n) {
    out << key << " =";
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), " %.17g", v[i]);
      out << buf;
    }
    out << "\n";
  };
  double kv[9];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) kv[3 * i + j] = scene.K(i, j);
  put_reals("K", kv, 9);
  if (scene.ground_truth) {
    double gt[12];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) gt[3 * i + j] = scene.ground_truth->R(i, j);
    for (int i = 0; i < 3; ++i) gt[9 + i] = scene.ground_truth->x(i);
    put_reals("ground_truth", gt, 12);
  }
  for (const auto& f : scene.features) {
    const double v[5] = {f.pixel.x(), f.pixel.y(), f.world.x(), f.world.y(),
                         f.world.z()};
    put_reals("feature", v, 5);
  }
}

}  // namespace lgvi
