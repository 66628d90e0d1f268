#pragma once

#include "otray/scenario.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace otray {

struct ReportRow {
  std::string check;
  std::string scenario;
  std::string metric;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;

  bool operator==(const ReportRow& o) const;
};

/// Named columns of plot data, one table per file.
struct PlotTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool operator==(const PlotTable&) const = default;
};

struct Report {
  std::string version;
  int n = 2;
  double K = 1.0;
  std::string scenario;
  std::vector<ReportRow> rows;
  std::map<std::string, PlotTable> tables;  // file name -> table

  bool all_pass() const;
  bool operator==(const Report&) const = default;
};

struct SuiteOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  int grid = 129;
  double tol_scale = 1.0;
  bool timing = false;  // wall_ms is 0 otherwise so reports stay byte-identical
};

/// Registered check ids, sorted.
const std::vector<std::string>& registered_checks();
/// One-line description per check id.
std::string describe_check(const std::string& id);

/// "all" or a comma list; sorted, deduplicated. Throws UnknownCheckError.
std::vector<std::string> parse_check_list(const std::string& list);

/// One row per requested check; checks that do not apply to the scenario
/// kind give a "skipped" row (value NaN, pass true).
Report run_suite(const Scenario& scn, const std::vector<std::string>& checks, const SuiteOptions& opt);

enum class ReportFormat { Csv, Json, PlotTables };

ReportFormat parse_format(const std::string& s);

std::string report_csv(const Report& r);
std::string report_json(const Report& r);
Report parse_report_json(const std::string& text);
std::string table_tsv(const PlotTable& t);

/// Writes report.csv, report.json or one .tsv per plot table into `dir`
/// (created if needed) and returns the written paths. Throws IoError.
std::vector<std::string> emit_report(const Report& r, ReportFormat f, const std::string& dir);

}  // namespace otray
