#include "hypercondense/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hypercondense/errors.hpp"

namespace hypercondense {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Hypergraph parse_json(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, origin + ": " + e.what());
  }
  for (const char* key : {"features", "edges", "labels"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw Error(ErrorCode::ParseError, origin + ": missing array \"" + std::string(key) + "\"");
    }
  }
  const auto& jf = doc["features"];
  const auto& jl = doc["labels"];
  const auto& je = doc["edges"];
  const Index n = static_cast<Index>(jf.size());
  if (static_cast<Index>(jl.size()) != n) {
    throw Error(ErrorCode::InconsistentDimensions,
                origin + ": " + std::to_string(jl.size()) + " labels for " + std::to_string(n) +
                    " feature rows");
  }
  const Index d = n > 0 && jf[0].is_array() ? static_cast<Index>(jf[0].size()) : 0;
  Matrix features(n, d);
  for (Index i = 0; i < n; ++i) {
    const auto& row = jf[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != d) {
      throw Error(ErrorCode::InconsistentDimensions,
                  origin + ": features[" + std::to_string(i) + "] has " +
                      std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " +
                      std::to_string(d));
    }
    for (Index j = 0; j < d; ++j) {
      if (!row[j].is_number()) {
        throw Error(ErrorCode::ParseError, origin + ": features[" + std::to_string(i) + "][" +
                                               std::to_string(j) + "] is not a number");
      }
      features(i, j) = row[j].get<double>();
    }
  }
  std::vector<int> labels(n);
  for (Index i = 0; i < n; ++i) {
    if (!jl[i].is_number_integer()) {
      throw Error(ErrorCode::ParseError,
                  origin + ": labels[" + std::to_string(i) + "] is not an integer");
    }
    labels[i] = jl[i].get<int>();
  }
  std::vector<std::vector<Index>> edges;
  edges.reserve(je.size());
  for (std::size_t e = 0; e < je.size(); ++e) {
    if (!je[e].is_array()) {
      throw Error(ErrorCode::ParseError, origin + ": edges[" + std::to_string(e) + "] is not a list");
    }
    if (je[e].empty()) {
      throw Error(ErrorCode::EmptyHyperedge, origin + ": edges[" + std::to_string(e) + "] is empty");
    }
    std::vector<Index> members;
    for (const auto& v : je[e]) {
      if (!v.is_number_integer()) {
        throw Error(ErrorCode::ParseError,
                    origin + ": edges[" + std::to_string(e) + "] has a non-integer member");
      }
      members.push_back(v.get<Index>());
    }
    edges.push_back(std::move(members));
  }
  const int num_classes = doc.contains("num_classes") ? doc["num_classes"].get<int>() : 0;
  try {
    return Hypergraph(std::move(features), std::move(edges), std::move(labels), num_classes);
  } catch (const Error& e) {
    throw Error(e.code(), origin + ": " + e.what());
  }
}

struct LineReader {
  std::istringstream in;
  std::string origin;
  std::size_t line_no = 0;

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(ErrorCode code, const std::string& what) const {
    throw Error(code, origin + ":" + std::to_string(line_no) + ": " + what);
  }
};

Hypergraph parse_text(const std::string& text, const std::string& origin) {
  LineReader reader{std::istringstream(text), origin};
  std::string line;
  if (!reader.next(line)) reader.fail(ErrorCode::ParseError, "empty file");
  std::istringstream header(line);
  std::string tag;
  long long n = -1, m = -1, d = -1, c = 0;
  header >> tag >> n >> m >> d >> c;
  if (tag != "hypergraph" || n < 0 || m < 0 || d < 0 || header.fail()) {
    reader.fail(ErrorCode::ParseError, "expected 'hypergraph <N> <M> <d> <C>'");
  }
  Matrix features(n, d);
  std::vector<int> labels(n);
  for (long long i = 0; i < n; ++i) {
    if (!reader.next(line)) reader.fail(ErrorCode::ParseError, "unexpected end of file in node block");
    std::istringstream row(line);
    long long label;
    if (!(row >> label)) reader.fail(ErrorCode::ParseError, "node line without label");
    if (label < 0 || (c > 0 && label >= c)) {
      reader.fail(ErrorCode::LabelOutOfRange, "node " + std::to_string(i) + " has label " +
                                                  std::to_string(label) + " outside [0," + std::to_string(c) + ")");
    }
    labels[i] = static_cast<int>(label);
    for (long long j = 0; j < d; ++j) {
      if (!(row >> features(i, j))) {
        if (!row.eof()) reader.fail(ErrorCode::ParseError, "node " + std::to_string(i) + " has a non-numeric feature");
        reader.fail(ErrorCode::InconsistentDimensions,
                    "node " + std::to_string(i) + " has " + std::to_string(j) +
                        " features, expected " + std::to_string(d));
      }
    }
    double extra;
    if (row >> extra) {
      reader.fail(ErrorCode::InconsistentDimensions,
                  "node " + std::to_string(i) + " has more than " + std::to_string(d) + " features");
    }
  }
  std::vector<std::vector<Index>> edges(m);
  for (long long e = 0; e < m; ++e) {
    if (!reader.next(line)) reader.fail(ErrorCode::ParseError, "unexpected end of file in edge block");
    std::istringstream row(line);
    long long k;
    if (!(row >> k) || k < 0) reader.fail(ErrorCode::ParseError, "edge line without member count");
    if (k == 0) reader.fail(ErrorCode::EmptyHyperedge, "edge " + std::to_string(e) + " is empty");
    for (long long j = 0; j < k; ++j) {
      long long v;
      if (!(row >> v)) {
        reader.fail(ErrorCode::ParseError,
                    "edge " + std::to_string(e) + " lists fewer than " + std::to_string(k) + " members");
      }
      edges[e].push_back(static_cast<Index>(v));
    }
  }
  if (reader.next(line)) reader.fail(ErrorCode::ParseError, "trailing content after edge block");
  try {
    return Hypergraph(std::move(features), std::move(edges), std::move(labels), static_cast<int>(c));
  } catch (const Error& e) {
    throw Error(e.code(), origin + ": " + e.what());
  }
}

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

DatasetFormat parse_dataset_format(const std::string& name) {
  if (name == "json") return DatasetFormat::Json;
  if (name == "text") return DatasetFormat::Text;
  throw Error(ErrorCode::ConfigError, "unknown dataset format '" + name + "' (json|text)");
}

Hypergraph load_hypergraph(const std::filesystem::path& path, DatasetFormat format) {
  const std::string text = read_file(path);
  return format == DatasetFormat::Json ? parse_json(text, path.string())
                                       : parse_text(text, path.string());
}

Hypergraph load_hypergraph(const std::filesystem::path& path) {
  return load_hypergraph(path, path.extension() == ".json" ? DatasetFormat::Json : DatasetFormat::Text);
}

void save_hypergraph(const Hypergraph& h, const std::filesystem::path& path, DatasetFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  const Matrix& x = h.features();
  std::vector<int> labels(h.num_nodes());
  for (Index v = 0; v < h.num_nodes(); ++v) labels[v] = h.label(v);
  if (format == DatasetFormat::Text) {
    out << "hypergraph " << h.num_nodes() << ' ' << h.num_input_edges() << ' ' << x.cols() << ' '
        << h.num_classes() << '\n';
    for (Index v = 0; v < h.num_nodes(); ++v) {
      out << labels[v];
      for (Index j = 0; j < x.cols(); ++j) out << ' ' << format_double(x(v, j));
      out << '\n';
    }
    for (Index e = 0; e < h.num_input_edges(); ++e) {
      auto members = h.edge_members(e);
      out << members.size();
      for (Index v : members) out << ' ' << v;
      out << '\n';
    }
    return;
  }
  // Streamed by hand: building a json DOM for Cora-sized feature blocks is slow.
  out << "{\"num_classes\":" << h.num_classes() << ",\n\"labels\":[";
  for (Index v = 0; v < h.num_nodes(); ++v) out << (v ? "," : "") << labels[v];
  out << "],\n\"edges\":[";
  for (Index e = 0; e < h.num_input_edges(); ++e) {
    out << (e ? ",\n[" : "\n[");
    auto members = h.edge_members(e);
    for (std::size_t k = 0; k < members.size(); ++k) out << (k ? "," : "") << members[k];
    out << ']';
  }
  out << "],\n\"features\":[";
  for (Index v = 0; v < h.num_nodes(); ++v) {
    out << (v ? ",\n[" : "\n[");
    for (Index j = 0; j < x.cols(); ++j) out << (j ? "," : "") << format_double(x(v, j));
    out << ']';
  }
  out << "]}\n";
}

std::string bytes_fingerprint(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string file_fingerprint(const std::filesystem::path& path) {
  return bytes_fingerprint(read_file(path));
}

}  // namespace hypercondense
