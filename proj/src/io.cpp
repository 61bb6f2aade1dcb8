#include "mfs/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "mfs/error.hpp"

namespace mfs {

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Source line of every value of a syntactically valid JSON text, keyed by
// JSON pointer.
std::map<std::string, int> value_lines(std::string_view text) {
  struct Frame {
    bool object = false;
    bool expect_key = false;
    std::string key;
    long long index = 0;
  };
  std::vector<Frame> stack;
  std::map<std::string, int> lines;
  int line = 1;
  const auto record = [&] {
    std::string pointer;
    for (const Frame& f : stack) pointer += "/" + (f.object ? escape_token(f.key) : std::to_string(f.index));
    lines.emplace(pointer, line);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (c == '"') {
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        s += text[i];
      }
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().key = s;
        stack.back().expect_key = false;
      } else {
        record();
      }
    } else if (c == '{' || c == '[') {
      record();
      stack.push_back(Frame{c == '{', c == '{', {}, 0});
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
    } else if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object) {
          stack.back().expect_key = true;
        } else {
          ++stack.back().index;
        }
      }
    } else if (c != ':' && !std::isspace(static_cast<unsigned char>(c))) {
      record();
      while (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != ']' && text[i + 1] != '}' &&
             !std::isspace(static_cast<unsigned char>(text[i + 1])))
        ++i;
    }
  }
  return lines;
}

std::string type_name(const Json& v) { return v.type_name(); }

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                    std::chars_format::general, 17);
  return std::string(buffer.data(), result.ptr);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

std::string sha256_hex(std::string_view content) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int size = 0;
  if (EVP_Digest(content.data(), content.size(), digest.data(), &size, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string dump_json(const Json& value) { return value.dump(2) + "\n"; }

Document::Document(std::string text, std::string source) : source_(std::move(source)) {
  try {
    root_ = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t end = std::min(e.byte, text.size() + 1);
    for (std::size_t i = 0; i + 1 < end; ++i)
      if (text[i] == '\n') ++line;
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw Error(ErrorKind::kConfigInvalid,
                source_ + ":" + std::to_string(line) + ": " + (pos == std::string::npos ? what : what.substr(pos)));
  }
  lines_ = value_lines(text);
}

Document Document::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error&) {
    throw Error(ErrorKind::kConfigInvalid, path.string() + ":0: cannot read file");
  }
  return Document(std::move(text), path.string());
}

int Document::line(const JsonPointer& at) const {
  JsonPointer p = at;
  while (true) {
    const auto it = lines_.find(p.to_string());
    if (it != lines_.end() && root_.contains(p)) return it->second;
    if (p.empty()) return 1;
    p = p.parent_pointer();
  }
}

void Document::fail(const JsonPointer& at, const std::string& message) const {
  const std::string where = at.empty() ? std::string("document") : at.to_string();
  throw Error(ErrorKind::kConfigInvalid, source_ + ":" + std::to_string(line(at)) + ": " + where + ": " + message);
}

const Json& Document::at(const JsonPointer& at) const {
  if (!root_.contains(at)) fail(at, "missing value");
  return root_.at(at);
}

double Document::number(const JsonPointer& at) const {
  const Json& v = this->at(at);
  if (!v.is_number()) fail(at, "expected a number, found " + type_name(v));
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(at, "expected a finite number");
  return x;
}

double Document::number(const JsonPointer& at, double fallback) const {
  return has(at) ? number(at) : fallback;
}

long long Document::integer(const JsonPointer& at) const {
  const Json& v = this->at(at);
  if (!v.is_number_integer()) fail(at, "expected an integer, found " + type_name(v));
  return v.get<long long>();
}

long long Document::integer(const JsonPointer& at, long long fallback) const {
  return has(at) ? integer(at) : fallback;
}

std::string Document::string(const JsonPointer& at) const {
  const Json& v = this->at(at);
  if (!v.is_string()) fail(at, "expected a string, found " + type_name(v));
  return v.get<std::string>();
}

std::string Document::string(const JsonPointer& at, const std::string& fallback) const {
  return has(at) ? string(at) : fallback;
}

bool Document::boolean(const JsonPointer& at, bool fallback) const {
  if (!has(at)) return fallback;
  const Json& v = root_.at(at);
  if (!v.is_boolean()) fail(at, "expected true or false, found " + type_name(v));
  return v.get<bool>();
}

std::vector<double> Document::numbers(const JsonPointer& at) const {
  const Json& v = this->at(at);
  if (!v.is_array()) fail(at, "expected an array of numbers, found " + type_name(v));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(at / i));
  return out;
}

Sft sft_from_json(const Document& doc, const JsonPointer& at) {
  if (!doc.at(at).is_object()) doc.fail(at, "expected an SFT object");
  const long long n = doc.integer(at / "alphabet");
  if (n < 1 || n > 36) doc.fail(at / "alphabet", "alphabet size must lie in [1, 36]");
  const Json& rows = doc.at(at / "transitions");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) {
    doc.fail(at / "transitions", "expected " + std::to_string(n) + " rows");
  }
  std::vector<std::vector<int>> matrix;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const JsonPointer row_at = at / "transitions" / i;
    if (!rows[i].is_array() || rows[i].size() != static_cast<std::size_t>(n)) {
      doc.fail(row_at, "expected a row of " + std::to_string(n) + " entries");
    }
    std::vector<int> row;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const long long v = doc.integer(row_at / j);
      if (v != 0 && v != 1) doc.fail(row_at / j, "transition entries must be 0 or 1");
      row.push_back(static_cast<int>(v));
    }
    matrix.push_back(std::move(row));
  }
  try {
    return build_sft(static_cast<int>(n), matrix);
  } catch (const Error& e) {
    doc.fail(at / "transitions", e.what());
  }
}

Json sft_to_json(const Sft& sft) {
  Json out;
  out["alphabet"] = sft.alphabet_size();
  out["transitions"] = sft.transitions();
  return out;
}

Potential potential_from_json(const Sft& sft, const Document& doc, const JsonPointer& at) {
  if (!doc.at(at).is_object()) doc.fail(at, "expected a potential object");
  const long long depth = doc.integer(at / "depth");
  if (depth < 1 || depth > 16) doc.fail(at / "depth", "depth must lie in [1, 16]");
  const Json& table = doc.at(at / "table");
  if (!table.is_object()) doc.fail(at / "table", "expected an object mapping words to values");
  const WordIndex index(sft, static_cast<int>(depth));
  std::vector<double> values(index.size(), 0.0);
  std::vector<bool> seen(index.size(), false);
  for (const auto& [key, value] : table.items()) {
    const JsonPointer entry = at / "table" / key;
    Word word;
    try {
      word = word_from_string(key);
    } catch (const Error&) {
      doc.fail(entry, "not a word over the base-36 digits");
    }
    if (static_cast<long long>(word.size()) != depth) doc.fail(entry, "word length differs from depth");
    for (Symbol s : word)
      if (s >= sft.alphabet_size()) doc.fail(entry, "symbol outside the alphabet");
    const int i = index.find(word);
    if (i < 0) doc.fail(entry, "word is not admissible");
    values[static_cast<std::size_t>(i)] = doc.number(entry);
    seen[static_cast<std::size_t>(i)] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) doc.fail(at / "table", "missing admissible word " + word_to_string(index.word(i)));
  }
  return Potential(sft, static_cast<int>(depth), std::move(values));
}

Json potential_to_json(const Potential& phi) {
  Json out;
  out["depth"] = phi.depth();
  Json table = Json::object();
  for (std::size_t i = 0; i < phi.size(); ++i) table[word_to_string(phi.words()[i])] = phi.values()[i];
  out["table"] = std::move(table);
  return out;
}

namespace {

std::string two_column_csv(const char* header, const std::vector<double>& a, const std::vector<double>& b) {
  std::string out = header;
  out += '\n';
  for (std::size_t i = 0; i < a.size(); ++i) out += format_number(a[i]) + "," + format_number(b[i]) + "\n";
  return out;
}

}  // namespace

std::string pressure_csv(const PressureCurve& curve) { return two_column_csv("t,pressure", curve.t_grid, curve.values); }

std::string grid_csv(const GridFunction& f) { return two_column_csv("x,value", f.x(), f.values()); }

std::string cms_csv(const CmsFunction& h) {
  return "#maximizer_index=" + std::to_string(h.maximizer_index) + ",max_value=" + format_number(h.max_value) + "\n" +
         grid_csv(h.base);
}

std::string spectrum_csv(const SpectrumGraph& g) {
  std::string out = "alpha,entropy\n";
  for (const SpectrumPoint& p : g.points()) out += format_number(p.alpha) + "," + format_number(p.entropy) + "\n";
  return out;
}

std::string path_csv(const Path& path) {
  std::string out = "t,s,integral,entropy,pressure\n";
  for (const PathSample& p : path.samples) {
    out += format_number(p.t) + "," + format_number(p.s) + "," + format_number(p.integral) + "," +
           format_number(p.entropy) + "," + format_number(p.pressure) + "\n";
  }
  return out;
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
  CsvTable table;
  const auto fail = [&](int line, const std::string& message) {
    throw Error(ErrorKind::kConfigInvalid, source + ":" + std::to_string(line) + ": " + message);
  };
  const auto split = [](std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  const auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  int line_number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() : end + 1;
    ++line_number;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (std::string_view cell : split(line.substr(1))) {
        const std::size_t eq = cell.find('=');
        if (eq == std::string_view::npos) fail(line_number, "metadata entries must be key=value");
        table.metadata[std::string(trim(cell.substr(0, eq)))] = std::string(trim(cell.substr(eq + 1)));
      }
      continue;
    }
    const auto cells = split(line);
    if (table.header.empty()) {
      for (std::string_view cell : cells) table.header.emplace_back(trim(cell));
      continue;
    }
    if (cells.size() != table.header.size()) {
      fail(line_number, "expected " + std::to_string(table.header.size()) + " columns, found " +
                            std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (std::string_view cell : cells) {
      cell = trim(cell);
      double v = 0.0;
      const auto result = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (result.ec != std::errc() || result.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        fail(line_number, "not a finite number: '" + std::string(cell) + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
    table.row_lines.push_back(line_number);
  }
  if (table.header.empty()) fail(line_number, "missing header line");
  return table;
}

GridFunction grid_from_csv(const CsvTable& table, const std::string& source) {
  const auto fail = [&](int line, const std::string& message) {
    throw Error(ErrorKind::kConfigInvalid, source + ":" + std::to_string(line) + ": " + message);
  };
  if (table.header.size() < 2) fail(1, "expected at least two columns");
  if (table.rows.empty()) fail(1, "no data rows");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& row : table.rows) {
    x.push_back(row[0]);
    y.push_back(row[1]);
  }
  if (x.size() == 2) fail(table.row_lines[1], "a grid needs one point or at least three");
  if (x.size() > 1) {
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (!(x[i] > x[i - 1])) fail(table.row_lines[i], "grid points must increase");
      const double expected = x.front() + h * static_cast<double>(i);
      if (std::abs(x[i] - expected) > 1e-9 * std::max(1.0, x.back() - x.front())) {
        fail(table.row_lines[i], "grid must be uniformly spaced");
      }
    }
    // Snap to the exact uniform grid the spacing implies.
    const double span = x.back() - x.front();
    for (std::size_t i = 1; i + 1 < x.size(); ++i)
      x[i] = x.front() + span * static_cast<double>(i) / static_cast<double>(x.size() - 1);
  }
  return GridFunction(std::move(x), std::move(y));
}

}  // namespace mfs
