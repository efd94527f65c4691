#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fqe {

/// Shortest decimal text that round-trips the double.
std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
};

/// {tool, version, eigen, command, config}; no timestamps so reruns are byte-identical.
nlohmann::json report_envelope(const std::string& command, const nlohmann::json& config);

/// Writes <stem>.csv and <stem>.json under the output directory, or prints to the stream
/// (CSV when present and JSON not forced, otherwise JSON).
class ReportSink {
 public:
  ReportSink(std::optional<std::filesystem::path> out_dir, std::ostream& out, bool force_json);

  void emit(const std::string& stem, const nlohmann::json& document, const CsvTable* table = nullptr);
  void emit_text(const std::string& stem, const std::string& text, const std::string& extension);

 private:
  std::optional<std::filesystem::path> out_dir_;
  std::ostream& out_;
  bool force_json_;
};

}  // namespace fqe
