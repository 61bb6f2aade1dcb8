#include "mfs/sft.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "mfs/error.hpp"
#include "mfs/perron.hpp"

namespace mfs {

namespace {

using BoolMatrix = std::vector<std::uint8_t>;

BoolMatrix boolean_product(const BoolMatrix& a, const BoolMatrix& b, int n) {
  BoolMatrix c(a.size(), 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (a[i * n + k])
        for (int j = 0; j < n; ++j) c[i * n + j] |= b[k * n + j];
  return c;
}

bool primitive_matrix(const BoolMatrix& m, int n) {
  BoolMatrix power = m;
  const long long bound = static_cast<long long>(n) * n;
  for (long long exponent = 1;; exponent *= 2) {
    bool positive = true;
    for (auto v : power) positive = positive && v;
    if (positive) return true;
    if (exponent >= bound) return false;
    power = boolean_product(power, power, n);
  }
}

void extend_words(const Sft& sft, int length, Word& prefix, std::vector<Word>& out) {
  if (static_cast<int>(prefix.size()) == length) {
    out.push_back(prefix);
    return;
  }
  for (Symbol s = 0; s < sft.alphabet_size(); ++s) {
    if (!prefix.empty() && !sft.allowed(prefix.back(), s)) continue;
    prefix.push_back(s);
    extend_words(sft, length, prefix, out);
    prefix.pop_back();
  }
}

constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";

}  // namespace

Sft::Sft(int alphabet_size, const std::vector<std::vector<int>>& transitions) : alphabet_size_(alphabet_size) {
  if (alphabet_size <= 0) throw Error(ErrorKind::kInvalidArgument, "alphabet size must be positive");
  if (static_cast<int>(transitions.size()) != alphabet_size) {
    throw Error(ErrorKind::kNotSquare, "transition matrix has " + std::to_string(transitions.size()) +
                                           " rows for alphabet size " + std::to_string(alphabet_size));
  }
  const int n = alphabet_size;
  transitions_.assign(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(transitions[a].size()) != n) {
      throw Error(ErrorKind::kNotSquare, "row " + std::to_string(a) + " has " +
                                             std::to_string(transitions[a].size()) + " entries");
    }
    for (int b = 0; b < n; ++b) {
      const int v = transitions[a][b];
      if (v != 0 && v != 1) throw Error(ErrorKind::kInvalidArgument, "transition entries must be 0 or 1");
      transitions_[a * n + b] = static_cast<std::uint8_t>(v);
    }
  }
  for (int a = 0; a < n; ++a) {
    bool has_successor = false;
    bool has_predecessor = false;
    for (int b = 0; b < n; ++b) {
      has_successor = has_successor || transitions_[a * n + b];
      has_predecessor = has_predecessor || transitions_[b * n + a];
    }
    if (!has_successor || !has_predecessor) {
      throw Error(ErrorKind::kZeroRowOrColumn,
                  "symbol " + std::to_string(a) + (has_successor ? " has no predecessor" : " has no successor"));
    }
  }
  primitive_ = primitive_matrix(transitions_, n);
}

std::vector<std::vector<int>> Sft::transitions() const {
  std::vector<std::vector<int>> out(alphabet_size_, std::vector<int>(alphabet_size_, 0));
  for (int a = 0; a < alphabet_size_; ++a)
    for (int b = 0; b < alphabet_size_; ++b) out[a][b] = allowed(a, b) ? 1 : 0;
  return out;
}

Sft build_sft(int alphabet_size, const std::vector<std::vector<int>>& transitions) {
  return Sft(alphabet_size, transitions);
}

Sft full_shift(int symbols) {
  return Sft(symbols, std::vector<std::vector<int>>(symbols, std::vector<int>(symbols, 1)));
}

Sft golden_mean_shift() { return Sft(2, {{1, 1}, {1, 0}}); }

bool is_primitive(const Sft& sft) { return sft.primitive(); }

double topological_entropy(const Sft& sft) {
  if (!sft.primitive()) throw Error(ErrorKind::kNotPrimitive, "topological entropy needs a primitive SFT");
  const int n = sft.alphabet_size();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = sft.allowed(i, j) ? 1.0 : 0.0;
  return std::log(perron_right(a).root);
}

std::vector<Word> admissible_words(const Sft& sft, int length) {
  if (length <= 0) throw Error(ErrorKind::kInvalidArgument, "word length must be positive");
  std::vector<Word> out;
  Word prefix;
  prefix.reserve(static_cast<std::size_t>(length));
  extend_words(sft, length, prefix, out);
  return out;
}

Sft higher_block(const Sft& sft, int k) {
  if (k <= 0) throw Error(ErrorKind::kInvalidArgument, "block length must be positive");
  if (k == 1) return sft;
  const WordIndex index(sft, k);
  const auto n = index.size();
  std::vector<std::vector<int>> edges(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const Word& w = index.word(i);
    Word next(w.begin() + 1, w.end());
    next.push_back(0);
    for (Symbol s = 0; s < sft.alphabet_size(); ++s) {
      if (!sft.allowed(w.back(), s)) continue;
      next.back() = s;
      const int j = index.find(next);
      if (j >= 0) edges[i][static_cast<std::size_t>(j)] = 1;
    }
  }
  return Sft(static_cast<int>(n), edges);
}

bool is_admissible(const Sft& sft, std::span<const Symbol> word) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= sft.alphabet_size()) return false;
    if (i > 0 && !sft.allowed(word[i - 1], word[i])) return false;
  }
  return !word.empty();
}

bool is_cyclically_admissible(const Sft& sft, std::span<const Symbol> word) {
  return is_admissible(sft, word) && sft.allowed(word.back(), word.front());
}

std::string word_to_string(std::span<const Symbol> word) {
  std::string out;
  out.reserve(word.size());
  for (Symbol s : word) {
    if (s < 0 || s >= 36) throw Error(ErrorKind::kInvalidArgument, "symbol outside the base-36 range");
    out.push_back(kDigits[s]);
  }
  return out;
}

Word word_from_string(const std::string& text) {
  Word out;
  out.reserve(text.size());
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      out.push_back(c - '0');
    } else if (c >= 'a' && c <= 'z') {
      out.push_back(c - 'a' + 10);
    } else {
      throw Error(ErrorKind::kInvalidArgument, std::string("invalid symbol character '") + c + "'");
    }
  }
  return out;
}

WordIndex::WordIndex(const Sft& sft, int length)
    : alphabet_size_(sft.alphabet_size()), length_(length), words_(admissible_words(sft, length)) {
  const double codes = std::pow(static_cast<double>(alphabet_size_), length);
  if (codes > 1e8) throw Error(ErrorKind::kTooLarge, "word index would exceed 1e8 codes");
  code_to_index_.assign(static_cast<std::size_t>(codes), -1);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::size_t code = 0;
    for (Symbol s : words_[i]) code = code * static_cast<std::size_t>(alphabet_size_) + static_cast<std::size_t>(s);
    code_to_index_[code] = static_cast<int>(i);
  }
}

int WordIndex::find(std::span<const Symbol> word) const {
  if (static_cast<int>(word.size()) != length_) return -1;
  std::size_t code = 0;
  for (Symbol s : word) {
    if (s < 0 || s >= alphabet_size_) return -1;
    code = code * static_cast<std::size_t>(alphabet_size_) + static_cast<std::size_t>(s);
  }
  return code_to_index_[code];
}

}  // namespace mfs
