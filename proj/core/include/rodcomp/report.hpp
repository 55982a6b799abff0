#pragma once

#include <map>
#include <string>
#include <vector>

namespace rodcomp {

// One measurement: a wrench increment applied to one shape at one basis
// order. time_us is the wall time of the compliance evaluation for the
// (shape, order) pair and repeats across its six axis rows.
struct StudyRow {
  int shape_id = 0;
  int order = 0;
  std::string wrench_axis;
  double increment = 0.0;  // N or N m
  double e_p_mm = 0.0;
  double rot_err_deg = 0.0;
  double time_us = 0.0;
  std::string status = "ok";
};

struct OrderAggregate {
  int order = 0;
  double mean_e_p_mm = 0.0;
  double max_e_p_mm = 0.0;
  double mean_rot_err_deg = 0.0;
  double max_rot_err_deg = 0.0;
  double throughput_hz = 0.0;  // 1e6 / mean(time_us) over ok rows
  int rows_ok = 0;
  int rows_failed = 0;
};

struct StudyReport {
  std::string study;
  std::vector<StudyRow> rows;
  std::vector<OrderAggregate> aggregates;
  std::map<std::string, std::string> metadata;
  std::string config_echo;

  static std::vector<OrderAggregate> compute_aggregates(const std::vector<StudyRow>& rows);
  void finalize() { aggregates = compute_aggregates(rows); }

  const OrderAggregate& aggregate_for(int order) const;
};

/// CSV with the fixed column set; one row per measurement.
void write_csv(const StudyReport& report, const std::string& path);

/// JSON with aggregates, metadata and the byte-for-byte config echo.
void write_json(const StudyReport& report, const std::string& path);

/// Reads rows back from CSV (used to confirm aggregates are recomputable).
std::vector<StudyRow> read_csv_rows(const std::string& path);

}  // namespace rodcomp
