#include "qfock/basis.hpp"

#include <algorithm>
#include <numeric>

namespace qfock {

std::vector<Word> enumerate_words(const FockContext& ctx, int k) {
  if (k < 0 || k > ctx.N) {
    throw RangeError("enumerate_words: level " + std::to_string(k) +
                     " outside [0, " + std::to_string(ctx.N) + "]");
  }
  const long count = ctx.dim(k);
  std::vector<Word> out;
  out.reserve(count);
  std::vector<int> current(k, 1);
  for (long c = 0; c < count; ++c) {
    out.emplace_back(current);
    // Increment the base-n counter, least significant (last) letter first;
    // this walks the words in lexicographic order.
    for (int pos = k - 1; pos >= 0; --pos) {
      if (current[pos] < ctx.n) {
        ++current[pos];
        break;
      }
      current[pos] = 1;
    }
  }
  return out;
}

Word word_at(const FockContext& ctx, int k, long idx) {
  if (k < 0 || k > ctx.N) {
    throw RangeError("word_at: level " + std::to_string(k) + " outside [0, " +
                     std::to_string(ctx.N) + "]");
  }
  if (idx < 0 || idx >= ctx.dim(k)) {
    throw RangeError("word_at: index " + std::to_string(idx) +
                     " outside level " + std::to_string(k));
  }
  std::vector<int> letters(k);
  for (int pos = k - 1; pos >= 0; --pos) {
    letters[pos] = static_cast<int>(idx % ctx.n) + 1;
    idx /= ctx.n;
  }
  return Word(std::move(letters));
}

int inversions(const std::vector<int>& perm) {
  const int k = static_cast<int>(perm.size());
  std::vector<bool> seen(k, false);
  for (int value : perm) {
    if (value < 1 || value > k || seen[value - 1]) {
      throw ValidationError("inversions: input is not a permutation of {1.." +
                            std::to_string(k) + "}");
    }
    seen[value - 1] = true;
  }
  int count = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (perm[a] > perm[b]) ++count;
  return count;
}

std::vector<std::pair<std::vector<int>, int>> enumerate_permutations(int k) {
  if (k < 0) throw RangeError("enumerate_permutations: negative size");
  if (k > K_ORACLE) {
    throw OracleCapError(
        "enumerate_permutations: oracle size cap exceeded (k = " +
        std::to_string(k) + " > " + std::to_string(K_ORACLE) +
        "); use the recursive Gram builder beyond the cap");
  }
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::pair<std::vector<int>, int>> out;
  do {
    out.emplace_back(perm, inversions(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace qfock
