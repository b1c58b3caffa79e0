#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hypercondense/protocol.hpp"

namespace hypercondense {

/// Report CSV columns, shared by evaluate, baseline and report:
/// row_type,method,ratio,set,repeat,test_acc,std,val_acc,best_epoch,fingerprint
/// row_type is "run" (one trained model) or "summary" (mean and population
/// std over the runs of one method and ratio).
inline constexpr const char* kReportHeader =
    "row_type,method,ratio,set,repeat,test_acc,std,val_acc,best_epoch,fingerprint";

std::string report_csv(const EvalReport& report, const std::string& fingerprint);

struct ReportRow {
  std::string row_type;
  std::string method;
  double ratio = 0.0;
  int set = 0;
  int repeat = 0;
  double test_accuracy = 0.0;
  double val_accuracy = 0.0;
  int best_epoch = 0;
  std::string fingerprint;
};

/// Run rows of a report CSV (summary rows are recomputed, not trusted).
std::vector<ReportRow> parse_report_csv(const std::string& text, const std::string& source);

struct Comparison {
  std::string table;      // report CSV: run rows then summary rows
  std::string plot_data;  // method,ratio,mean,std,runs
};

/// Aggregates run rows from several reports. Rows are sorted by method,
/// ratio, set, repeat so input order does not matter. Throws
/// MixedFingerprints if the rows come from different datasets.
Comparison compare_reports(std::vector<ReportRow> rows);

/// Accepts report CSV files or directories containing report.csv.
std::vector<ReportRow> load_report_rows(const std::vector<std::filesystem::path>& inputs);

}  // namespace hypercondense
