#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "rodcomp/errors.hpp"
#include "rodcomp/experiments.hpp"

namespace rodcomp {

const char* to_string(IncrementScheme scheme) {
  switch (scheme) {
    case IncrementScheme::kCentralRichardson:
      return "central_richardson";
    case IncrementScheme::kCentral:
      return "central";
    default:
      return "one_sided";
  }
}

namespace {

enum class UnitKind {
  kLength,
  kLoad,  // forces; mass units are converted through standard gravity
  kMoment,
  kPressure,
  kLinearStiffness,
  kBendingStiffness,
  kDimensionless,
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double unit_factor(UnitKind kind, const std::string& unit) {
  struct Entry {
    UnitKind kind;
    const char* name;
    double factor;
  };
  static const Entry table[] = {
      {UnitKind::kLength, "m", 1.0},
      {UnitKind::kLength, "cm", 1e-2},
      {UnitKind::kLength, "mm", 1e-3},
      {UnitKind::kLoad, "N", 1.0},
      {UnitKind::kLoad, "kN", 1e3},
      {UnitKind::kLoad, "lb", 0.45359237 * 9.80665},
      {UnitKind::kLoad, "lbs", 0.45359237 * 9.80665},
      {UnitKind::kLoad, "kg", 9.80665},
      {UnitKind::kMoment, "Nm", 1.0},
      {UnitKind::kMoment, "N.m", 1.0},
      {UnitKind::kMoment, "N*m", 1.0},
      {UnitKind::kMoment, "Nmm", 1e-3},
      {UnitKind::kPressure, "Pa", 1.0},
      {UnitKind::kPressure, "kPa", 1e3},
      {UnitKind::kPressure, "MPa", 1e6},
      {UnitKind::kPressure, "GPa", 1e9},
      {UnitKind::kLinearStiffness, "N/m", 1.0},
      {UnitKind::kLinearStiffness, "N/mm", 1e3},
      {UnitKind::kBendingStiffness, "Nm^2", 1.0},
      {UnitKind::kBendingStiffness, "N.m^2", 1.0},
      {UnitKind::kBendingStiffness, "N*m^2", 1.0},
  };
  for (const auto& entry : table) {
    if (entry.kind == kind && unit == entry.name) return entry.factor;
  }
  throw ConfigError("unknown or mismatched unit '" + unit + "'");
}

double parse_quantity(const std::string& token, UnitKind kind) {
  const std::string text = trim(token);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw ConfigError("expected a number in '" + token + "'");
  const std::string unit = trim(std::string(end));
  if (kind == UnitKind::kDimensionless) {
    if (!unit.empty()) throw ConfigError("unexpected unit in dimensionless value '" + token + "'");
    return value;
  }
  if (unit.empty()) {
    throw ConfigError("missing unit tag in '" + token + "' (all physical quantities need one)");
  }
  return value * unit_factor(kind, unit);
}

// "0 mm 25 mm" -> {0.0, 0.025}; alternating number/unit words.
std::vector<double> parse_quantity_sequence(const std::string& token, UnitKind kind) {
  std::istringstream ss(trim(token));
  std::vector<std::string> words;
  std::string word;
  while (ss >> word) words.push_back(word);
  std::vector<double> values;
  for (std::size_t i = 0; i + 1 < words.size(); i += 2) {
    values.push_back(parse_quantity(words[i] + " " + words[i + 1], kind));
  }
  if (words.size() % 2 != 0) {
    throw ConfigError("unit-tagged sequence has a dangling token: '" + token + "'");
  }
  return values;
}

using SectionMap = std::map<std::string, std::map<std::string, std::vector<std::string>>>;

std::vector<std::string> split_tokens(const std::string& value) {
  std::vector<std::string> tokens;
  std::string current;
  bool in_quotes = false;
  for (char ch : value) {
    if (ch == '"') {
      in_quotes = !in_quotes;
      continue;
    }
    if (ch == ',' && !in_quotes) {
      tokens.push_back(trim(current));
      current.clear();
      continue;
    }
    current += ch;
  }
  const std::string last = trim(current);
  if (!last.empty() || !tokens.empty()) tokens.push_back(last);
  if (in_quotes) throw ConfigError("unterminated quote in value: " + value);
  return tokens;
}

SectionMap parse_sections(const std::string& text) {
  SectionMap sections;
  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section header at line " + std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value at line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    sections[section][key] = split_tokens(line.substr(eq + 1));
  }
  return sections;
}

class SectionReader {
 public:
  SectionReader(const SectionMap& map, std::string section)
      : map_(map), section_(std::move(section)) {}

  bool has(const std::string& key) const {
    auto sec = map_.find(section_);
    return sec != map_.end() && sec->second.count(key) > 0;
  }
  const std::vector<std::string>& tokens(const std::string& key) const {
    auto sec = map_.find(section_);
    if (sec == map_.end() || !sec->second.count(key)) {
      throw ConfigError("missing key [" + section_ + "] " + key);
    }
    return sec->second.at(key);
  }
  std::string scalar(const std::string& key) const {
    const auto& t = tokens(key);
    if (t.size() != 1) throw ConfigError("[" + section_ + "] " + key + ": expected one value");
    return t[0];
  }
  double quantity(const std::string& key, UnitKind kind) const {
    return parse_quantity(scalar(key), kind);
  }
  double number(const std::string& key) const {
    return parse_quantity(scalar(key), UnitKind::kDimensionless);
  }
  int integer(const std::string& key) const { return static_cast<int>(number(key)); }

 private:
  const SectionMap& map_;
  std::string section_;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  const SectionMap sections = parse_sections(text);
  ExperimentConfig config;
  config.raw_text = text;

  SectionReader rod(sections, "rod");
  if (rod.has("bending_stiffness")) {
    const double length = rod.quantity("length", UnitKind::kLength);
    const double ei = rod.quantity("bending_stiffness", UnitKind::kBendingStiffness);
    const double gj = rod.has("torsion_stiffness")
                          ? rod.quantity("torsion_stiffness", UnitKind::kBendingStiffness)
                          : ei;
    config.rod = RodProperties(length, Eigen::Vector3d(ei, ei, gj));
  } else if (rod.has("length")) {
    config.rod = RodProperties::circular(
        rod.quantity("length", UnitKind::kLength), rod.quantity("diameter", UnitKind::kLength),
        rod.quantity("youngs_modulus", UnitKind::kPressure), rod.number("poisson_ratio"));
  }

  SectionReader basis(sections, "basis");
  if (basis.has("orders")) {
    config.orders.clear();
    for (const auto& token : basis.tokens("orders")) {
      const int order = static_cast<int>(parse_quantity(token, UnitKind::kDimensionless));
      if (order < 0) throw ConfigError("basis orders must be non-negative");
      config.orders.push_back(order);
    }
  }

  SectionReader integration(sections, "integration");
  if (integration.has("steps")) {
    config.steps = integration.integer("steps");
    if (config.steps < 1) throw ConfigError("integration steps must be >= 1");
  }

  SectionReader grid(sections, "grid");
  if (grid.has("preset")) config.grid_preset = grid.scalar("preset");
  if (grid.has("force_levels")) {
    config.force_levels.clear();
    for (const auto& token : grid.tokens("force_levels")) {
      config.force_levels.push_back(parse_quantity(token, UnitKind::kLoad));
    }
  }
  if (grid.has("moment_levels")) {
    config.moment_levels.clear();
    for (const auto& token : grid.tokens("moment_levels")) {
      config.moment_levels.push_back(parse_quantity(token, UnitKind::kMoment));
    }
  }

  SectionReader increments(sections, "increments");
  if (increments.has("force_step")) {
    config.force_step = increments.quantity("force_step", UnitKind::kLoad);
  }
  if (increments.has("moment_step")) {
    config.moment_step = increments.quantity("moment_step", UnitKind::kMoment);
  }
  if (config.force_step <= 0.0 || config.moment_step <= 0.0) {
    throw ConfigError("wrench increments must be positive");
  }
  if (increments.has("scheme")) {
    const std::string scheme = increments.scalar("scheme");
    if (scheme == "central_richardson") {
      config.scheme = IncrementScheme::kCentralRichardson;
    } else if (scheme == "central") {
      config.scheme = IncrementScheme::kCentral;
    } else if (scheme == "one_sided") {
      config.scheme = IncrementScheme::kOneSided;
    } else {
      throw ConfigError("unknown increment scheme '" + scheme + "'");
    }
  }

  SectionReader segment(sections, "segment");
  if (segment.has("length")) {
    auto& seg = config.segment;
    seg.length = segment.quantity("length", UnitKind::kLength);
    seg.pitch_radius = segment.quantity("pitch_radius", UnitKind::kLength);
    seg.bending_stiffness = segment.quantity("bending_stiffness", UnitKind::kBendingStiffness);
    seg.line_stiffness = segment.quantity("line_stiffness", UnitKind::kLinearStiffness);
    if (segment.has("torsion_ratio")) seg.torsion_ratio = segment.number("torsion_ratio");
    if (segment.has("tendon_count")) seg.tendon_count = segment.integer("tendon_count");
    if (segment.has("basis_order")) seg.basis_order = segment.integer("basis_order");
    if (segment.has("quadrature_nodes")) {
      seg.quadrature_nodes = segment.integer("quadrature_nodes");
    }
    if (segment.has("configurations")) {
      seg.pull_configurations.clear();
      for (const auto& token : segment.tokens("configurations")) {
        const auto pulls = parse_quantity_sequence(token, UnitKind::kLength);
        if (static_cast<int>(pulls.size()) != seg.tendon_count) {
          throw ConfigError("segment configuration needs one pull per tendon: '" + token + "'");
        }
        seg.pull_configurations.push_back(
            Eigen::Map<const Eigen::VectorXd>(pulls.data(), pulls.size()));
      }
    }
    if (segment.has("masses")) {
      seg.load_forces.clear();
      for (const auto& token : segment.tokens("masses")) {
        seg.load_forces.push_back(parse_quantity(token, UnitKind::kLoad));
      }
    }
    if (segment.has("directions")) {
      seg.load_directions = segment.tokens("directions");
    }
  }

  SectionReader output(sections, "output");
  if (output.has("out_dir")) config.out_dir = output.scalar("out_dir");
  if (output.has("format")) {
    config.format = output.scalar("format");
    if (config.format != "csv" && config.format != "json" && config.format != "both") {
      throw ConfigError("format must be csv, json or both");
    }
  }
  if (output.has("jobs")) {
    config.jobs = output.integer("jobs");
    if (config.jobs < 1) throw ConfigError("jobs must be >= 1");
  }
  if (output.has("seed")) config.seed = static_cast<unsigned>(output.number("seed"));
  if (output.has("tendon_mode")) {
    const std::string mode = output.scalar("tendon_mode");
    if (mode == "physical") {
      config.tendon_mode = TendonTermMode::kPhysical;
    } else if (mode == "subtractive") {
      config.tendon_mode = TendonTermMode::kSubtractive;
    } else {
      throw ConfigError("tendon_mode must be physical or subtractive");
    }
  }

  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace rodcomp
