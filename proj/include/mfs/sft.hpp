#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mfs {

using Symbol = int;
using Word = std::vector<Symbol>;

/// One-sided subshift of finite type given by a 0/1 transition matrix:
/// symbol b may follow symbol a iff transitions(a, b) == 1.
class Sft {
 public:
  /// Validates shape and entries; throws kNotSquare, kZeroRowOrColumn or
  /// kInvalidArgument. Primitivity is computed, not required.
  Sft(int alphabet_size, const std::vector<std::vector<int>>& transitions);

  int alphabet_size() const { return alphabet_size_; }
  bool allowed(Symbol a, Symbol b) const {
    return transitions_[static_cast<std::size_t>(a * alphabet_size_ + b)] != 0;
  }
  bool primitive() const { return primitive_; }
  std::vector<std::vector<int>> transitions() const;

  bool operator==(const Sft& other) const {
    return alphabet_size_ == other.alphabet_size_ && transitions_ == other.transitions_;
  }

 private:
  int alphabet_size_;
  std::vector<std::uint8_t> transitions_;  // row-major
  bool primitive_;
};

Sft build_sft(int alphabet_size, const std::vector<std::vector<int>>& transitions);
Sft full_shift(int symbols);
/// The shift on {0,1} forbidding the word 11.
Sft golden_mean_shift();

/// True iff some power of the transition matrix with exponent at most
/// alphabet_size^2 is entrywise positive (repeated boolean squaring).
bool is_primitive(const Sft& sft);

/// log of the Perron root of the transition matrix (nats). Throws kNotPrimitive.
double topological_entropy(const Sft& sft);

/// Lexicographically ordered admissible words of the given length.
std::vector<Word> admissible_words(const Sft& sft, int length);

/// Higher-block recoding: symbol i is admissible_words(sft, k)[i]; w -> w'
/// iff they overlap in k-1 symbols and the (k+1)-word is admissible.
Sft higher_block(const Sft& sft, int k);

bool is_admissible(const Sft& sft, std::span<const Symbol> word);
/// Admissible as a cyclic word (including the wrap-around pair).
bool is_cyclically_admissible(const Sft& sft, std::span<const Symbol> word);

/// Symbols are rendered with the base-36 digits 0-9a-z.
std::string word_to_string(std::span<const Symbol> word);
Word word_from_string(const std::string& text);

/// Dense index from admissible words of a fixed length to their position in
/// admissible_words(sft, length).
class WordIndex {
 public:
  WordIndex(const Sft& sft, int length);

  int length() const { return length_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<Word>& words() const { return words_; }
  const Word& word(std::size_t i) const { return words_[i]; }
  /// -1 for inadmissible words; the span must have exactly length() symbols.
  int find(std::span<const Symbol> word) const;

 private:
  int alphabet_size_;
  int length_;
  std::vector<Word> words_;
  std::vector<int> code_to_index_;
};

}  // namespace mfs
