#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypercondense/condenser.hpp"
#include "hypercondense/matrix.hpp"

namespace hypercondense {

/// <stem>.bin holds row-major little-endian f64 values; <stem>.json holds
/// {"rows", "cols", "dtype": "f64", "layout": "row-major", "byte_order": "little"}.
void write_matrix(const std::filesystem::path& dir, const std::string& stem, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& dir, const std::string& stem);

/// Writes features, incidence, labels.json and loss.csv of one condensed set.
void write_condensed(const std::filesystem::path& dir, const Condensation& c);
CondensedHypergraph read_condensed(const std::filesystem::path& dir);

void write_loss_csv(const std::filesystem::path& path, const std::vector<EpochLog>& trajectory);

/// Pretty JSON with a trailing newline; key order is the library's sorted order.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace hypercondense
