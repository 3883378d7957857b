#include "streamkl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "streamkl/errors.hpp"
#include "streamkl/rng.hpp"

namespace streamkl {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line, const DatasetManifest& m) {
  std::vector<std::string> fields;
  if (m.whitespace_delim) {
    std::istringstream in(line);
    std::string token;
    while (in >> token) fields.push_back(token);
    return fields;
  }
  std::string field;
  for (char c : line) {
    if (c == m.delimiter) {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

bool parse_number(std::string text, bool decimal_comma, double& out) {
  text = trim(text);
  // Some CSV exports quote every field.
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    text = trim(text.substr(1, text.size() - 2));
  }
  if (text.empty()) return false;
  if (decimal_comma) std::replace(text.begin(), text.end(), ',', '.');
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end && std::isfinite(out);
}

}  // namespace

DatasetManifest load_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("load_manifest: cannot open " + manifest_path);

  DatasetManifest m;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError("load_manifest: malformed line '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "name") m.name = value;
    else if (key == "path") m.path = value;
    else if (key == "features") m.features = std::stoi(value);
    else if (key == "samples") m.samples = std::stol(value);
    else if (key == "label_column") m.label_column = std::stoi(value);
    else if (key == "delimiter") {
      if (value == "whitespace") m.whitespace_delim = true;
      else if (value == "semicolon") m.delimiter = ';';
      else if (value == "comma") m.delimiter = ',';
      else if (value.size() == 1) m.delimiter = value[0];
      else throw DataError("load_manifest: unknown delimiter '" + value + "'");
    }
    else if (key == "decimal_comma") m.decimal_comma = (value == "true" || value == "1");
    else if (key == "skip_header") m.skip_header = std::stoi(value);
    else if (key == "drop_zero_rows") m.drop_zero_rows = (value == "true" || value == "1");
    else if (key == "content_hash") m.content_hash = value;
    else if (key == "drop_columns") {
      std::istringstream cols(value);
      std::string tok;
      while (std::getline(cols, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) m.drop_columns.push_back(std::stoi(tok));
      }
    }
    else if (key == "missing_values") {
      std::istringstream vals(value);
      std::string tok;
      while (std::getline(vals, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) m.missing_values.push_back(std::stod(tok));
      }
    }
    else throw DataError("load_manifest: unknown key '" + key + "'");
  }

  // Data paths are relative to the manifest location.
  if (!m.path.empty() && m.path[0] != '/') {
    m.path = (std::filesystem::path(manifest_path).parent_path() / m.path).string();
  }
  return m;
}

std::string file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("file_content_hash: cannot open " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

LoadReport load_csv(const DatasetManifest& manifest) {
  std::ifstream in(manifest.path);
  if (!in) throw DataError("load_csv: cannot open " + manifest.path);

  LoadReport report;
  report.content_hash = file_content_hash(manifest.path);
  if (!manifest.content_hash.empty() && manifest.content_hash != report.content_hash) {
    throw DataError("load_csv: content hash mismatch for " + manifest.path + " (got " +
                    report.content_hash + ", manifest pins " + manifest.content_hash + ")");
  }

  std::vector<Eigen::VectorXd> features;
  std::vector<double> labels;
  std::string line;
  long row = 0;
  int skipped_header = 0;

  while (std::getline(in, line)) {
    if (skipped_header < manifest.skip_header) {
      ++skipped_header;
      continue;
    }
    ++row;
    if (trim(line).empty()) continue;

    auto raw = split_fields(line, manifest);
    std::vector<std::string> kept;
    kept.reserve(raw.size());
    for (int c = 0; c < static_cast<int>(raw.size()); ++c) {
      if (std::find(manifest.drop_columns.begin(), manifest.drop_columns.end(), c) ==
          manifest.drop_columns.end()) {
        kept.push_back(raw[c]);
      }
    }
    // Trailing empty fields (e.g. a line ending in ';;') are dropped.
    while (!kept.empty() && trim(kept.back()).empty()) kept.pop_back();
    if (kept.size() < 2) throw DataError("load_csv: row " + std::to_string(row) + ": too few columns");

    const int label_col =
        manifest.label_column < 0 ? static_cast<int>(kept.size()) - 1 : manifest.label_column;
    if (label_col >= static_cast<int>(kept.size())) {
      throw DataError("load_csv: row " + std::to_string(row) + ": label column out of range");
    }

    bool missing = false;
    std::vector<double> values(kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) {
      if (!parse_number(kept[c], manifest.decimal_comma, values[c])) {
        missing = true;  // non-numeric entry: drop the row, count it
        break;
      }
      for (double sentinel : manifest.missing_values) {
        if (values[c] == sentinel) {
          missing = true;
          break;
        }
      }
      if (missing) break;
    }
    if (missing) {
      ++report.dropped_rows;
      continue;
    }

    Eigen::VectorXd x(static_cast<Eigen::Index>(values.size()) - 1);
    Eigen::Index k = 0;
    for (int c = 0; c < static_cast<int>(values.size()); ++c) {
      if (c != label_col) x[k++] = values[c];
    }
    const double norm = x.norm();
    if (norm == 0.0) {
      if (manifest.drop_zero_rows) {
        ++report.dropped_rows;
        continue;
      }
      throw DataError("load_csv: row " + std::to_string(row) + ": zero-norm feature vector");
    }

    features.push_back(x / norm);
    labels.push_back(values[label_col]);
  }

  if (features.empty()) throw DataError("load_csv: no usable rows in " + manifest.path);

  if (manifest.features > 0 && features.front().size() != manifest.features) {
    throw DataError("load_csv: feature count " + std::to_string(features.front().size()) +
                    " does not match manifest (" + std::to_string(manifest.features) + ")");
  }
  if (manifest.samples > 0 && static_cast<long>(features.size()) != manifest.samples) {
    throw DataError("load_csv: sample count " + std::to_string(features.size()) +
                    " does not match manifest (" + std::to_string(manifest.samples) + ")");
  }

  report.label_min = *std::min_element(labels.begin(), labels.end());
  report.label_max = *std::max_element(labels.begin(), labels.end());
  const double spread = report.label_max - report.label_min;

  report.samples.reserve(features.size());
  for (std::size_t t = 0; t < features.size(); ++t) {
    const double y = spread > 0.0 ? (labels[t] - report.label_min) / spread : 0.0;
    report.samples.push_back(StreamSample{std::move(features[t]), y});
  }
  return report;
}

std::vector<StreamSample> synthetic_stream(double generating_sigma2, double noise_std,
                                           long T, int dim, std::uint64_t seed,
                                           int centers, bool nonnegative_coefficients) {
  if (T < 1) throw std::invalid_argument("synthetic_stream: T must be >= 1");
  if (dim < 1) throw std::invalid_argument("synthetic_stream: dim must be >= 1");
  if (generating_sigma2 <= 0.0) throw std::invalid_argument("synthetic_stream: sigma2 must be positive");
  if (centers < 1) throw std::invalid_argument("synthetic_stream: need at least one center");

  Rng rng(derive_seed(seed, RngStream::synthetic));
  const auto unit_vector = [&](int d) {
    Eigen::VectorXd v(d);
    double norm = 0.0;
    do {
      for (int i = 0; i < d; ++i) v[i] = rng.gaussian();
      norm = v.norm();
    } while (norm == 0.0);
    return Eigen::VectorXd(v / norm);
  };

  std::vector<Eigen::VectorXd> expansion_centers(centers);
  Eigen::VectorXd coefficients(centers);
  for (int m = 0; m < centers; ++m) {
    expansion_centers[m] = unit_vector(dim);
    coefficients[m] = rng.gaussian();
    if (nonnegative_coefficients) coefficients[m] = std::abs(coefficients[m]);
  }

  std::vector<StreamSample> samples(T);
  std::vector<double> raw(T);
  for (long t = 0; t < T; ++t) {
    samples[t].x = unit_vector(dim);
    double f = 0.0;
    for (int m = 0; m < centers; ++m) {
      f += coefficients[m] *
           std::exp(-(samples[t].x - expansion_centers[m]).squaredNorm() /
                    (2.0 * generating_sigma2));
    }
    raw[t] = f + (noise_std > 0.0 ? noise_std * rng.gaussian() : 0.0);
  }

  const double lo = *std::min_element(raw.begin(), raw.end());
  const double hi = *std::max_element(raw.begin(), raw.end());
  const double spread = hi - lo;
  for (long t = 0; t < T; ++t) {
    samples[t].y = spread > 0.0 ? (raw[t] - lo) / spread : 0.0;
  }
  return samples;
}

}  // namespace streamkl
