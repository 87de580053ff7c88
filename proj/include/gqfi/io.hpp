#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gqfi/crb.hpp"
#include "gqfi/sensing.hpp"

namespace gqfi {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kConvention = "hbar=2, vacuum variance 1, ordering QQPP";

/// Formats with 12 significant digits (the project-wide numeric output width).
std::string format_double(double v);

/// Ordered key/value metadata echoed into every output file.
struct Metadata {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
  void add(const std::string& key, double value) { entries.emplace_back(key, format_double(value)); }
  void add(const std::string& key, long long value) { entries.emplace_back(key, std::to_string(value)); }
};

Metadata base_metadata(const std::string& command);

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(const std::string& name);

std::string serialize_sweep(const SweepTable& table, const Metadata& meta, OutputFormat fmt);
std::string serialize_spectrum(const std::vector<std::pair<ProbeParams, SpectrumTable>>& blocks,
                               const Metadata& meta, OutputFormat fmt);
std::string serialize_crb(const CrbReport& report, const Metadata& meta, OutputFormat fmt);

/// Writes to the path, or to the stream when path is empty.
void write_output(const std::string& path, std::ostream& fallback, const std::string& payload);

}  // namespace gqfi
