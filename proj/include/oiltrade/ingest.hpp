#pragma once

// Trade-record files.
//
//   year,reporter,partner,flow,value_usd
//   2020,NLD,RUS,import,7000000000
//
// Comma-delimited, '.' decimal separator, no thousands separators. Files
// ending in ".gz" are read through zlib. An import row reported by R from
// partner P becomes the edge P -> R (exporter -> importer); an export row
// becomes R -> P.

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oiltrade/error.hpp"
#include "oiltrade/network.hpp"

namespace oiltrade {

enum class FlowKind { import, export_ };

inline std::string_view to_string(FlowKind f) { return f == FlowKind::import ? "import" : "export"; }

struct TradeRecord {
  int year = 0;
  std::string reporter;
  std::string partner;
  FlowKind flow = FlowKind::import;
  double value = 0.0;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct ParseReport {
  std::vector<TradeRecord> records;
  std::vector<RowError> errors;
  std::size_t zero_value_rows = 0;

  [[nodiscard]] bool ok() const { return errors.empty(); }
};

inline constexpr std::string_view kTradeHeader = "year,reporter,partner,flow,value_usd";

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace detail

// Parse a whole stream. A missing or wrong header throws ValidationError;
// bad rows are collected with their 1-based line numbers and parsing goes
// on. Zero-value rows are dropped and counted.
inline ParseReport parse_trade_file(std::istream& in) {
  ParseReport rep;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = detail::trim(line);
    if (!header) {
      if (lineno == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
      if (view.empty()) continue;
      if (view != kTradeHeader) {
        throw ValidationError("line " + std::to_string(lineno) + ": expected header '" +
                              std::string(kTradeHeader) + "'");
      }
      header = true;
      continue;
    }
    if (view.empty()) continue;
    auto fields = detail::split(view);
    auto fail = [&](std::string msg) { rep.errors.push_back({lineno, std::move(msg)}); };
    if (fields.size() != 5) {
      fail("expected 5 fields, got " + std::to_string(fields.size()));
      continue;
    }
    TradeRecord r;
    if (!detail::parse_number(fields[0], r.year) || r.year < 1900 || r.year > 2100) {
      fail("bad year '" + std::string(fields[0]) + "'");
      continue;
    }
    if (fields[1].empty() || fields[2].empty()) {
      fail("empty economy code");
      continue;
    }
    r.reporter = fields[1];
    r.partner = fields[2];
    if (fields[3] == "import") {
      r.flow = FlowKind::import;
    } else if (fields[3] == "export") {
      r.flow = FlowKind::export_;
    } else {
      fail("bad flow '" + std::string(fields[3]) + "'");
      continue;
    }
    if (!detail::parse_number(fields[4], r.value) || !std::isfinite(r.value)) {
      fail("bad value '" + std::string(fields[4]) + "'");
      continue;
    }
    if (r.value < 0.0) {
      fail("negative value");
      continue;
    }
    if (r.value == 0.0) {
      ++rep.zero_value_rows;
      continue;
    }
    rep.records.push_back(std::move(r));
  }
  if (!header) throw ValidationError("missing header '" + std::string(kTradeHeader) + "'");
  return rep;
}

// Read a file from disk, decompressing when the name ends in ".gz".
inline ParseReport read_trade_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ValidationError("no such file: " + path.string());
  if (path.extension() == ".gz") {
    gzFile gz = gzopen(path.string().c_str(), "rb");
    if (!gz) throw ValidationError("cannot open " + path.string());
    std::string text;
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(gz, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(got));
    int err = 0;
    const char* msg = gzerror(gz, &err);
    std::string what = (got < 0 && msg) ? msg : "";
    gzclose(gz);
    if (got < 0) throw ValidationError("gzip error in " + path.string() + ": " + what);
    std::istringstream in(text);
    return parse_trade_file(in);
  }
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return parse_trade_file(in);
}

// Which reported flows build the networks.
enum class FlowPolicy { import, export_ };

using YearlyNetworks = std::map<int, TradeNetwork>;

inline YearlyNetworks build_yearly_networks(std::span<const TradeRecord> records,
                                            FlowPolicy policy = FlowPolicy::import) {
  std::map<int, std::vector<FlowRecord>> by_year;
  for (const auto& r : records) {
    auto& flows = by_year[r.year];
    if (policy == FlowPolicy::import && r.flow == FlowKind::import) {
      flows.push_back({r.partner, r.reporter, r.value});
    } else if (policy == FlowPolicy::export_ && r.flow == FlowKind::export_) {
      flows.push_back({r.reporter, r.partner, r.value});
    }
  }
  YearlyNetworks out;
  for (auto& [year, flows] : by_year) {
    out.emplace(year, build_network(std::span<const FlowRecord>(flows), year));
  }
  return out;
}

// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Import-flow rows of a network's active edges; parsing them back yields
// the same network.
inline void write_trade_file(std::ostream& out, const TradeNetwork& net) {
  out << kTradeHeader << '\n';
  for (const auto& f : to_flows(net)) {
    out << net.year() << ',' << f.target << ',' << f.source << ",import," << format_double(f.weight) << '\n';
  }
}

}  // namespace oiltrade
