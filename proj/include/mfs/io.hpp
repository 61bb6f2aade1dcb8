#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mfs/convex.hpp"
#include "mfs/paths.hpp"
#include "mfs/potential.hpp"
#include "mfs/sft.hpp"
#include "mfs/spectra.hpp"
#include "mfs/thermo.hpp"

namespace mfs {

using Json = nlohmann::ordered_json;
using JsonPointer = Json::json_pointer;

/// 17 significant digits with a '.' decimal separator.
std::string format_number(double value);

/// Throws kIo.
std::string read_text(const std::filesystem::path& path);
/// Writes bytes as given (no newline translation). Throws kIo.
void write_text(const std::filesystem::path& path, std::string_view content);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view content);

/// Pretty-printed document with a trailing newline.
std::string dump_json(const Json& value);

/// A parsed structured-text (JSON) document that remembers the source line of
/// every value. All failures are kConfigInvalid with a "source:line: " prefix.
class Document {
 public:
  Document(std::string text, std::string source);
  static Document load(const std::filesystem::path& path);

  const Json& root() const { return root_; }
  const std::string& source() const { return source_; }

  /// Line of the value at the pointer, or of its nearest present ancestor.
  int line(const JsonPointer& at) const;
  [[noreturn]] void fail(const JsonPointer& at, const std::string& message) const;

  bool has(const JsonPointer& at) const { return root_.contains(at); }
  /// Throws unless the value exists.
  const Json& at(const JsonPointer& at) const;

  double number(const JsonPointer& at) const;
  double number(const JsonPointer& at, double fallback) const;
  long long integer(const JsonPointer& at) const;
  long long integer(const JsonPointer& at, long long fallback) const;
  std::string string(const JsonPointer& at) const;
  std::string string(const JsonPointer& at, const std::string& fallback) const;
  bool boolean(const JsonPointer& at, bool fallback) const;
  std::vector<double> numbers(const JsonPointer& at) const;

 private:
  std::string source_;
  Json root_;
  std::map<std::string, int> lines_;
};

/// {"alphabet": n, "transitions": [[...]]}
Sft sft_from_json(const Document& doc, const JsonPointer& at);
Json sft_to_json(const Sft& sft);

/// {"depth": k, "table": {"word": value}} with one entry per admissible word.
Potential potential_from_json(const Sft& sft, const Document& doc, const JsonPointer& at);
Json potential_to_json(const Potential& phi);

/// CSV writers: header line, then one row per sample, '\n' line endings.
std::string pressure_csv(const PressureCurve& curve);
std::string grid_csv(const GridFunction& f);
/// grid_csv with a leading "#maximizer_index=...,max_value=..." row.
std::string cms_csv(const CmsFunction& h);
std::string spectrum_csv(const SpectrumGraph& g);
std::string path_csv(const Path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;  // from "#key=value,..." rows
  std::vector<int> row_lines;                   // source line of each row
};

/// Numeric CSV with one header line; '#' rows carry metadata. Throws
/// kConfigInvalid naming the source and line.
CsvTable parse_csv(std::string_view text, const std::string& source);

/// First two columns of a table as a uniform-grid function.
GridFunction grid_from_csv(const CsvTable& table, const std::string& source);

}  // namespace mfs
