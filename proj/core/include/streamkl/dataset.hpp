#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace streamkl {

// One stream element after preprocessing: |x| = 1 and y in [0, 1].
struct StreamSample {
  Eigen::VectorXd x;
  double y = 0.0;
};

// Key-value manifest pinning how a CSV dataset is read. `samples == 0`
// or an empty `content_hash` disables the respective drift check.
struct DatasetManifest {
  std::string name;
  std::string path;           // resolved relative to the manifest file
  int features = 0;           // expected d after column drops
  long samples = 0;           // expected row count after filtering (0 = unchecked)
  int label_column = -1;      // raw column index after drops; -1 = last
  char delimiter = ',';
  bool whitespace_delim = false;
  bool decimal_comma = false;
  int skip_header = 0;
  std::vector<int> drop_columns;      // raw column indices to discard
  std::vector<double> missing_values; // sentinels treated as missing (row dropped)
  bool drop_zero_rows = false;        // drop zero-norm feature rows instead of erroring
  std::string content_hash;           // fnv1a-64 hex of the raw file (empty = unchecked)
};

DatasetManifest load_manifest(const std::string& manifest_path);

struct LoadReport {
  std::vector<StreamSample> samples;
  long dropped_rows = 0;       // missing values / zero-norm drops
  std::string content_hash;    // fnv1a-64 of the raw file, for pinning manifests
  double label_min = 0.0;      // before min-max scaling
  double label_max = 0.0;
};

// Loads the CSV in file order, drops configured columns, treats sentinel
// or non-numeric rows as missing, unit-normalizes each feature vector and
// min-max scales labels to [0, 1] with the dataset-global min/max
// (all zero when max == min). Malformed rows raise DataError with the
// 1-based row index.
LoadReport load_csv(const DatasetManifest& manifest);

// fnv1a-64 of a file's bytes, hex encoded; the manifest drift check.
std::string file_content_hash(const std::string& path);

// Regression stream with a known best kernel: inputs uniform on the unit
// sphere, targets from a random expansion sum_m c_m kappa(x, u_m) in the
// RKHS of the generating Gaussian kernel plus optional Gaussian noise,
// min-max scaled to [0, 1]. Deterministic per seed.
//
// With `nonnegative_coefficients` the c_m are |N(0,1)| draws, which makes
// the raw function a sum of positive bumps; after min-max scaling most
// labels sit near zero, mimicking the skewed targets of the buzz-style
// benchmark datasets (useful when exercising the labeling policy).
std::vector<StreamSample> synthetic_stream(double generating_sigma2, double noise_std,
                                           long T, int dim, std::uint64_t seed,
                                           int centers = 32,
                                           bool nonnegative_coefficients = false);

}  // namespace streamkl
