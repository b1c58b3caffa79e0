#include "hypercondense/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "hypercondense/artifacts.hpp"
#include "hypercondense/errors.hpp"

namespace hypercondense {

namespace fs = std::filesystem;

namespace {

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::string run_line(const std::string& method, double ratio, int set, int repeat, double test, double val,
                     int best_epoch, const std::string& fp) {
  return format("run,%s,%.6g,%d,%d,%.6f,,%.6f,%d,%s\n", method.c_str(), ratio, set, repeat, test, val, best_epoch,
                fp.c_str());
}

std::string summary_line(const std::string& method, double ratio, double mean, double stddev, const std::string& fp) {
  return format("summary,%s,%.6g,,,%.6f,%.6f,,,%s\n", method.c_str(), ratio, mean, stddev, fp.c_str());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string report_csv(const EvalReport& report, const std::string& fingerprint) {
  std::string text = std::string(kReportHeader) + "\n";
  for (const RunRecord& r : report.runs) {
    text += run_line(r.method, r.ratio, r.set, r.repeat, r.test_accuracy, r.val_accuracy, r.best_epoch, fingerprint);
  }
  if (!report.runs.empty()) {
    text += summary_line(report.runs.front().method, report.runs.front().ratio, report.mean, report.stddev,
                         fingerprint);
  }
  return text;
}

std::vector<ReportRow> parse_report_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<ReportRow> rows;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (number == 1) {
      if (line != kReportHeader) throw Error(ErrorCode::ParseError, source + ":1: unexpected report header");
      continue;
    }
    const auto f = split(line);
    if (f.size() != 10) {
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(number) + ": expected 10 fields");
    }
    if (f[0] != "run") continue;
    try {
      ReportRow r;
      r.row_type = f[0];
      r.method = f[1];
      r.ratio = std::stod(f[2]);
      r.set = std::stoi(f[3]);
      r.repeat = std::stoi(f[4]);
      r.test_accuracy = std::stod(f[5]);
      r.val_accuracy = std::stod(f[7]);
      r.best_epoch = std::stoi(f[8]);
      r.fingerprint = f[9];
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(number) + ": malformed number");
    }
  }
  return rows;
}

Comparison compare_reports(std::vector<ReportRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::ConfigError, "report: no run rows to aggregate");
  for (const ReportRow& r : rows) {
    if (r.fingerprint != rows.front().fingerprint) {
      throw Error(ErrorCode::MixedFingerprints, "report: runs come from different datasets (" +
                                                    rows.front().fingerprint + " vs " + r.fingerprint + ")");
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.method, a.ratio, a.set, a.repeat) < std::tie(b.method, b.ratio, b.set, b.repeat);
  });
  Comparison out;
  out.table = std::string(kReportHeader) + "\n";
  std::map<std::pair<std::string, double>, std::vector<double>> groups;
  for (const ReportRow& r : rows) {
    out.table += run_line(r.method, r.ratio, r.set, r.repeat, r.test_accuracy, r.val_accuracy, r.best_epoch,
                          r.fingerprint);
    groups[{r.method, r.ratio}].push_back(r.test_accuracy);
  }
  out.plot_data = "method,ratio,mean,std,runs\n";
  for (const auto& [key, accs] : groups) {
    double mean = 0.0;
    for (double a : accs) mean += a;
    mean /= static_cast<double>(accs.size());
    double sq = 0.0;
    for (double a : accs) sq += (a - mean) * (a - mean);
    const double stddev = std::sqrt(sq / static_cast<double>(accs.size()));
    out.table += summary_line(key.first, key.second, mean, stddev, rows.front().fingerprint);
    out.plot_data += format("%s,%.6g,%.6f,%.6f,%zu\n", key.first.c_str(), key.second, mean, stddev, accs.size());
  }
  return out;
}

std::vector<ReportRow> load_report_rows(const std::vector<fs::path>& inputs) {
  std::vector<ReportRow> rows;
  for (const fs::path& p : inputs) {
    const fs::path file = fs::is_directory(p) ? p / "report.csv" : p;
    auto part = parse_report_csv(read_text(file), file.string());
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace hypercondense
