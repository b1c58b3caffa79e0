#include "hypercondense/artifacts.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hypercondense/errors.hpp"

namespace hypercondense {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "artifact writer assumes a little-endian host");

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_matrix(const fs::path& dir, const std::string& stem, const Matrix& m) {
  write_json(dir / (stem + ".json"), {{"rows", m.rows()},
                                      {"cols", m.cols()},
                                      {"dtype", "f64"},
                                      {"layout", "row-major"},
                                      {"byte_order", "little"}});
  std::ofstream out(dir / (stem + ".bin"), std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / (stem + ".bin")).string());
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
}

Matrix read_matrix(const fs::path& dir, const std::string& stem) {
  const json header = read_json(dir / (stem + ".json"));
  if (header.value("dtype", "") != "f64" || header.value("layout", "") != "row-major") {
    throw Error(ErrorCode::ParseError, stem + ".json: unsupported dtype or layout");
  }
  const auto rows = header.at("rows").get<Index>();
  const auto cols = header.at("cols").get<Index>();
  const std::string bytes = read_text(dir / (stem + ".bin"));
  if (bytes.size() != static_cast<std::size_t>(rows * cols) * sizeof(double)) {
    throw Error(ErrorCode::ParseError, stem + ".bin: expected " + std::to_string(rows * cols) + " values");
  }
  Matrix m(rows, cols);
  std::memcpy(m.data(), bytes.data(), bytes.size());
  return m;
}

void write_loss_csv(const fs::path& path, const std::vector<EpochLog>& trajectory) {
  std::string text = "epoch,group,coarse_weight,fine_weight,coarse,fine,total\n";
  char line[256];
  for (const EpochLog& e : trajectory) {
    std::snprintf(line, sizeof line, "%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.epoch,
                  e.updated_features ? "features" : "structure", e.coarse_weight, e.fine_weight, e.coarse, e.fine,
                  e.total);
    text += line;
  }
  write_text(path, text);
}

void write_condensed(const fs::path& dir, const Condensation& c) {
  fs::create_directories(dir);
  write_matrix(dir, "features", c.graph.features);
  write_matrix(dir, "incidence", c.graph.incidence);
  write_json(dir / "labels.json", {{"labels", c.graph.labels}, {"num_classes", c.graph.num_classes}});
  write_loss_csv(dir / "loss.csv", c.trajectory);
}

CondensedHypergraph read_condensed(const fs::path& dir) {
  CondensedHypergraph g;
  g.features = read_matrix(dir, "features");
  g.incidence = read_matrix(dir, "incidence");
  const json labels = read_json(dir / "labels.json");
  g.labels = labels.at("labels").get<std::vector<int>>();
  g.num_classes = labels.at("num_classes").get<int>();
  if (g.incidence.rows() != g.features.rows() || g.incidence.cols() != g.features.rows() ||
      static_cast<Index>(g.labels.size()) != g.features.rows()) {
    throw Error(ErrorCode::InconsistentDimensions, dir.string() + ": condensed artifacts disagree in size");
  }
  return g;
}

}  // namespace hypercondense
