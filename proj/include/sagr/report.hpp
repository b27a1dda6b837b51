#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sagr/bcg.hpp"
#include "sagr/network.hpp"

namespace sagr {

inline constexpr int kReportSchemaVersion = 1;

// Plain-value view of a run, keyed by instance ids so it stands without the
// network it came from.
struct ReportLeg {
  std::string flight;
  Minutes dep = 0;
  Minutes arr = 0;
  Minutes delay = 0;

  bool operator==(const ReportLeg&) const = default;
};

struct ReportRoute {
  std::string aircraft;
  std::vector<ReportLeg> legs;
  double cost = 0.0;
  int swaps = 0;

  bool operator==(const ReportRoute&) const = default;
};

struct ReportActivity {
  std::string flight;
  std::string kind;  // dep / arr / mt
  Minutes start = 0;
  Minutes end = 0;

  bool operator==(const ReportActivity&) const = default;
};

struct ReportGate {
  std::string airport;
  std::string gate_type;
  int gate = 0;
  std::vector<ReportActivity> activities;

  bool operator==(const ReportGate&) const = default;
};

struct Report {
  std::string instance;
  std::string method;
  std::string status;
  Metrics metrics;
  double lb = 0.0;
  double ub = 0.0;
  std::vector<std::string> cancelled;
  std::vector<ReportRoute> routes;
  std::vector<ReportGate> gates;
  int gate_shortfall = 0;
  int certificates = 0;
  std::map<std::string, int> cuts;
  std::vector<IterationRecord> log;

  bool operator==(const Report&) const = default;
};

Report make_report(const Network& net, const RunResult& res, std::string instance_name = "");

std::string emit_report(const Report& r);
Report parse_report(std::string_view text);
// Throws IOError.
void save_report(const Report& r, const std::string& path);

// One row per run with the columns of the published comparison table.
std::string csv_header();
std::string csv_row(const Report& r);
// Appends a row, writing the header first when the file is new or empty.
void append_csv(const Report& r, const std::string& path);

}  // namespace sagr
