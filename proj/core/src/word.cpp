#include "itersig/word.hpp"

#include <stdexcept>

namespace itersig {

std::string Word::label() const {
  if (letters.empty()) return "e";
  std::string out;
  for (std::size_t j = 0; j < letters.size(); ++j) {
    if (j) out += '-';
    out += std::to_string(letters[j]);
  }
  return out;
}

void validate_word(const Word& w) {
  if (w.d < 1) throw std::invalid_argument("word: dimension must be >= 1");
  for (int letter : w.letters) {
    if (letter < 1 || letter > w.d)
      throw std::invalid_argument("word: letter " + std::to_string(letter) +
                                  " outside 1.." + std::to_string(w.d));
  }
}

std::size_t flatten_index(const Word& w) {
  validate_word(w);
  std::size_t offset = 0;
  for (int letter : w.letters) offset = offset * static_cast<std::size_t>(w.d) + static_cast<std::size_t>(letter - 1);
  return offset;
}

Word unflatten_index(std::size_t offset, int d, int degree) {
  if (d < 1 || degree < 0) throw std::invalid_argument("unflatten_index: bad (d, degree)");
  if (offset >= level_size(d, degree)) throw std::invalid_argument("unflatten_index: offset out of range");
  Word w(d, std::vector<int>(static_cast<std::size_t>(degree)));
  for (int j = degree - 1; j >= 0; --j) {
    w.letters[static_cast<std::size_t>(j)] = static_cast<int>(offset % static_cast<std::size_t>(d)) + 1;
    offset /= static_cast<std::size_t>(d);
  }
  return w;
}

std::size_t level_size(int d, int degree) {
  std::size_t n = 1;
  for (int j = 0; j < degree; ++j) n *= static_cast<std::size_t>(d);
  return n;
}

}  // namespace itersig
