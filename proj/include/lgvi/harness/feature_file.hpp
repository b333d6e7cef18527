#pragma once

#include <string>

#include "lgvi/camera.hpp"

namespace lgvi {

/// Feature-file schema (line oriented, '#' comments):
///   K = 9 reals, row-major
///   feature = u v X Y Z          (one line per feature)
///   ground_truth = 9 reals (R, row-major) + 3 reals (x)
/// K is mandatory; ground_truth optional. Parse errors carry the line number
/// and field name.
CameraScene ingest_features(const std::string& path);

void write_features(const std::string& path, const CameraScene& scene);

}  // namespace lgvi
