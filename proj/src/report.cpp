#include "fqe/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>

#ifndef FQE_VERSION
#define FQE_VERSION "0.0.0"
#endif

namespace fqe {

std::string format_number(double x) {
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

nlohmann::json report_envelope(const std::string& command, const nlohmann::json& config) {
  return {{"tool", "fqe"},
          {"version", FQE_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"command", command},
          {"config", config}};
}

ReportSink::ReportSink(std::optional<std::filesystem::path> out_dir, std::ostream& out, bool force_json)
    : out_dir_(std::move(out_dir)), out_(out), force_json_(force_json) {
  if (out_dir_) std::filesystem::create_directories(*out_dir_);
}

void ReportSink::emit(const std::string& stem, const nlohmann::json& document, const CsvTable* table) {
  if (out_dir_) {
    if (table) {
      std::ostringstream csv;
      table->write(csv);
      write_file(*out_dir_ / (stem + ".csv"), csv.str());
      out_ << (*out_dir_ / (stem + ".csv")).string() << '\n';
    }
    write_file(*out_dir_ / (stem + ".json"), document.dump(2) + "\n");
    out_ << (*out_dir_ / (stem + ".json")).string() << '\n';
    return;
  }
  if (table && !force_json_) table->write(out_);
  else out_ << document.dump(2) << '\n';
}

void ReportSink::emit_text(const std::string& stem, const std::string& text, const std::string& extension) {
  if (out_dir_) {
    const auto path = *out_dir_ / (stem + extension);
    write_file(path, text);
    out_ << path.string() << '\n';
    return;
  }
  out_ << text;
}

}  // namespace fqe
