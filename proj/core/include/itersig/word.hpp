#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace itersig {

/// A coordinate multi-index (i_1,...,i_n) with 1-based letters in 1..d.
/// The empty word (degree 0) indexes the scalar level.
struct Word {
  int d = 1;
  std::vector<int> letters;

  Word() = default;
  Word(int dimension, std::vector<int> ls) : d(dimension), letters(std::move(ls)) {}

  int degree() const { return static_cast<int>(letters.size()); }

  bool operator==(const Word&) const = default;

  /// "1-2-1" style label used in filenames and logs.
  std::string label() const;
};

/// Throws std::invalid_argument unless 1 <= letter <= d for every letter.
void validate_word(const Word& w);

/// Lexicographic offset of w within its level: sum_j (i_j - 1) * d^(n-j).
/// The first letter is the most significant digit.
std::size_t flatten_index(const Word& w);

/// Inverse of flatten_index for given (d, degree).
Word unflatten_index(std::size_t offset, int d, int degree);

/// d^degree, the size of one dense level.
std::size_t level_size(int d, int degree);

}  // namespace itersig
