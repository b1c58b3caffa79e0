#pragma once

#include <filesystem>
#include <string>

#include "hypercondense/hypergraph.hpp"

namespace hypercondense {

enum class DatasetFormat { Json, Text };

DatasetFormat parse_dataset_format(const std::string& name);

/// Reads a hypergraph from disk.
///
/// JSON: {"features": [[...], ...], "edges": [[node ids], ...], "labels": [...],
///        "num_classes": C (optional)}
///
/// Text (line based, '#' starts a comment line):
///   hypergraph <N> <M> <d> <C>
///   <label> <x_1> ... <x_d>        N node lines
///   <k> <v_1> ... <v_k>            M edge lines, k = member count
///
/// Errors carry the offending record index (JSON) or line number (text).
Hypergraph load_hypergraph(const std::filesystem::path& path, DatasetFormat format);
Hypergraph load_hypergraph(const std::filesystem::path& path);  // format from extension

void save_hypergraph(const Hypergraph& h, const std::filesystem::path& path,
                     DatasetFormat format);

/// FNV-1a 64 content hash of a file, hex encoded.
std::string file_fingerprint(const std::filesystem::path& path);
std::string bytes_fingerprint(std::string_view bytes);

}  // namespace hypercondense
