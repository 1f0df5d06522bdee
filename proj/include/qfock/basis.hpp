#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qfock/context.hpp"
#include "qfock/errors.hpp"

namespace qfock {

// A basis label: the word (i_1, ..., i_k) over {1..n} naming the tensor
// e_{i_1} x ... x e_{i_k}. The empty word is the vacuum.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

  int level() const { return static_cast<int>(letters.size()); }

  // Row/column index of this word within its level, in lexicographic order:
  // the base-n value of (letters - 1), most significant letter first.
  long index(int n) const {
    long idx = 0;
    for (int letter : letters) idx = idx * n + (letter - 1);
    return idx;
  }

  bool operator==(const Word& other) const = default;

  // Lexicographic order within a level; shorter words first across levels.
  bool operator<(const Word& other) const {
    if (letters.size() != other.letters.size())
      return letters.size() < other.letters.size();
    return letters < other.letters;
  }

  std::string str() const {
    if (letters.empty()) return "()";
    std::string s = "(";
    for (size_t t = 0; t < letters.size(); ++t) {
      if (t) s += ",";
      s += std::to_string(letters[t]);
    }
    return s + ")";
  }
};

// All n^k words of level k in lexicographic order. Deterministic and stable:
// position in the result is the matrix row/column index used everywhere.
std::vector<Word> enumerate_words(const FockContext& ctx, int k);

// Word of level k at lexicographic position idx (inverse of Word::index).
Word word_at(const FockContext& ctx, int k, long idx);

// Number of inversions of a permutation of {1..k} given in one-line
// notation: #{(a, b) : a < b, perm[a] > perm[b]}. Throws ValidationError if
// the input is not a bijection on {1..k}.
int inversions(const std::vector<int>& perm);

// Cap for brute-force permutation enumeration (8! = 40320 stays cheap;
// anything larger must use the recursive Gram builder instead).
inline constexpr int K_ORACLE = 8;

// Every permutation of {1..k} in lexicographic order, paired with its
// inversion count. Throws OracleCapError for k > K_ORACLE and RangeError for
// negative k.
std::vector<std::pair<std::vector<int>, int>> enumerate_permutations(int k);

}  // namespace qfock
