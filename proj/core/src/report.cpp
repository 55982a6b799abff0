#include "rodcomp/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rodcomp/errors.hpp"

namespace rodcomp {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<OrderAggregate> StudyReport::compute_aggregates(const std::vector<StudyRow>& rows) {
  std::vector<int> orders;
  for (const auto& row : rows) {
    if (std::find(orders.begin(), orders.end(), row.order) == orders.end()) {
      orders.push_back(row.order);
    }
  }
  std::sort(orders.begin(), orders.end());

  std::vector<OrderAggregate> aggregates;
  for (int order : orders) {
    OrderAggregate agg;
    agg.order = order;
    double sum_ep = 0.0, sum_rot = 0.0, sum_time = 0.0;
    for (const auto& row : rows) {
      if (row.order != order) continue;
      if (row.status != "ok") {
        ++agg.rows_failed;
        continue;
      }
      ++agg.rows_ok;
      sum_ep += row.e_p_mm;
      sum_rot += row.rot_err_deg;
      sum_time += row.time_us;
      agg.max_e_p_mm = std::max(agg.max_e_p_mm, row.e_p_mm);
      agg.max_rot_err_deg = std::max(agg.max_rot_err_deg, row.rot_err_deg);
    }
    if (agg.rows_ok > 0) {
      agg.mean_e_p_mm = sum_ep / agg.rows_ok;
      agg.mean_rot_err_deg = sum_rot / agg.rows_ok;
      const double mean_time = sum_time / agg.rows_ok;
      agg.throughput_hz = mean_time > 0.0 ? 1e6 / mean_time : 0.0;
    }
    aggregates.push_back(agg);
  }
  return aggregates;
}

const OrderAggregate& StudyReport::aggregate_for(int order) const {
  for (const auto& agg : aggregates) {
    if (agg.order == order) return agg;
  }
  throw std::out_of_range("StudyReport: no aggregate for order " + std::to_string(order));
}

void write_csv(const StudyReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open " + path);
  out << "shape_id,order,wrench_axis,increment,e_p_mm,rot_err_deg,time_us,status\n";
  for (const auto& row : report.rows) {
    out << row.shape_id << ',' << row.order << ',' << row.wrench_axis << ','
        << format_double(row.increment) << ',' << format_double(row.e_p_mm) << ','
        << format_double(row.rot_err_deg) << ',' << format_double(row.time_us) << ','
        << row.status << '\n';
  }
  if (!out) throw IoError("write_csv: write failed for " + path);
}

void write_json(const StudyReport& report, const std::string& path) {
  nlohmann::json doc;
  doc["study"] = report.study;
  doc["metadata"] = report.metadata;
  doc["config_echo"] = report.config_echo;
  doc["row_count"] = report.rows.size();
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& agg : report.aggregates) {
    aggs.push_back({
        {"order", agg.order},
        {"mean_e_p_mm", agg.mean_e_p_mm},
        {"max_e_p_mm", agg.max_e_p_mm},
        {"mean_rot_err_deg", agg.mean_rot_err_deg},
        {"max_rot_err_deg", agg.max_rot_err_deg},
        {"throughput_hz", agg.throughput_hz},
        {"rows_ok", agg.rows_ok},
        {"rows_failed", agg.rows_failed},
    });
  }
  doc["aggregates"] = aggs;
  std::ofstream out(path);
  if (!out) throw IoError("write_json: cannot open " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write_json: write failed for " + path);
}

std::vector<StudyRow> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_csv_rows: cannot open " + path);
  std::vector<StudyRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    StudyRow row;
    std::getline(ss, field, ',');
    row.shape_id = std::stoi(field);
    std::getline(ss, field, ',');
    row.order = std::stoi(field);
    std::getline(ss, row.wrench_axis, ',');
    std::getline(ss, field, ',');
    row.increment = std::stod(field);
    std::getline(ss, field, ',');
    row.e_p_mm = std::stod(field);
    std::getline(ss, field, ',');
    row.rot_err_deg = std::stod(field);
    std::getline(ss, field, ',');
    row.time_us = std::stod(field);
    std::getline(ss, row.status);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rodcomp
