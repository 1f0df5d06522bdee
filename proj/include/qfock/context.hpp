#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "qfock/errors.hpp"

namespace qfock {

// Global parameters shared by every construction: alphabet size n,
// deformation parameter q with |q| < 1, truncation level N (levels 0..N are
// retained), tolerances, and the RNG seed for property tests.
struct FockContext {
  int n = 2;
  double q = 0.0;
  int N = 6;
  double tol_exact = 1e-10;
  double tol_spectral = 1e-6;
  std::uint64_t seed = 42;

  FockContext() = default;

  FockContext(int n_, double q_, int N_, double tol_exact_ = 1e-10,
              double tol_spectral_ = 1e-6, std::uint64_t seed_ = 42)
      : n(n_), q(q_), N(N_), tol_exact(tol_exact_),
        tol_spectral(tol_spectral_), seed(seed_) {
    validate();
  }

  void validate() const {
    if (n < 1) {
      throw ValidationError("FockContext: alphabet size n must be >= 1, got " +
                            std::to_string(n));
    }
    if (!(std::abs(q) < 1.0)) {
      throw ValidationError("FockContext: deformation parameter requires |q| < 1, got q = " +
                            std::to_string(q));
    }
    if (N < 2) {
      throw ValidationError("FockContext: truncation level N must be >= 2, got " +
                            std::to_string(N));
    }
    if (tol_exact <= 0 || tol_spectral <= 0) {
      throw ValidationError("FockContext: tolerances must be positive");
    }
  }

  // Dimension n^k of level k.
  long dim(int k) const {
    if (k < 0 || k > N) {
      throw RangeError("level " + std::to_string(k) + " outside [0, " +
                       std::to_string(N) + "]");
    }
    long d = 1;
    for (int t = 0; t < k; ++t) d *= n;
    return d;
  }

  // Total dimension D = sum_{k=0}^{N} n^k of the truncated space.
  long total_dimension() const {
    long total = 0;
    for (int k = 0; k <= N; ++k) total += dim(k);
    return total;
  }

  // Two contexts describe the same space iff (n, q, N) agree; tolerances and
  // seed are execution parameters.
  bool same_space(const FockContext& other) const {
    return n == other.n && q == other.q && N == other.N;
  }
};

}  // namespace qfock
