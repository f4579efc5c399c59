#include "memone/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace memone::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw UsageError(std::string("malformed ") + what + ": '" + text + "'");
    }
    out.push_back(x);
  }
  if (out.size() != expected || (!text.empty() && text.back() == ',')) {
    throw UsageError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated values: '" +
                     text + "'");
  }
  return out;
}

}  // namespace

Eigen::Vector4d parse_probability_vector(const std::string& text) {
  const auto xs = parse_numbers(text, 4, "strategy");
  for (double x : xs) {
    if (!(x >= 0.0 && x <= 1.0)) throw UsageError("strategy entries must lie in [0,1]: '" + text + "'");
  }
  return {xs[0], xs[1], xs[2], xs[3]};
}

PayoffValues parse_payoffs(const std::string& text) {
  const auto xs = parse_numbers(text, 4, "payoffs");
  try {
    validate_payoffs(xs[0], xs[1], xs[2], xs[3]);
  } catch (const ConstraintError& e) {
    throw UsageError(e.what());
  }
  return {xs[0], xs[1], xs[2], xs[3]};
}

std::vector<MemoryOneStrategy> parse_opponents(std::istream& in) {
  std::vector<MemoryOneStrategy> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    try {
      out.emplace_back(parse_probability_vector(t));
    } catch (const UsageError& e) {
      throw UsageError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<MemoryOneStrategy> read_opponents_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read opponents file " + path.string());
  return parse_opponents(in);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, ptr);
}

}  // namespace memone::cli
