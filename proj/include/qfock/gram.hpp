#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qfock/basis.hpp"
#include "qfock/context.hpp"
#include "qfock/errors.hpp"

namespace qfock {

template <class S>
using DenseMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// Level-wise Gram matrices of the q-inner product together with their
// symmetric square roots and inverse square roots (the change of basis into
// orthonormal coordinates), plus per-level extreme eigenvalues.
//
// The scalar type is a template parameter: `double` is the default working
// precision; `long double` is used by the identity verifications, where the
// Gram condition number at |q| close to 1 would otherwise push plain-double
// representation error above the verification tolerances.
template <class S>
struct BasicGramFamily {
  FockContext ctx;
  std::vector<DenseMatrix<S>> G;           // levels 0..N
  std::vector<DenseMatrix<S>> G_half;      // G_k^{1/2}
  std::vector<DenseMatrix<S>> G_half_inv;  // G_k^{-1/2}
  std::vector<S> min_eig;                  // smallest eigenvalue per level
  std::vector<S> max_eig;                  // largest eigenvalue per level
  std::vector<int> condition_warnings;     // levels with max/min > 1e12
};

using GramFamily = BasicGramFamily<double>;

// Entry (mu, nu) of the level-k Gram matrix by the defining sum over the
// symmetric group: sum over sigma in S_k of q^{inversions(sigma)} times the
// product of delta(mu_{sigma(m)} = nu_m). For each sigma and nu the matching
// mu is unique, so the cost is k! * n^k * k. Capped at K_ORACLE.
template <class S = double>
DenseMatrix<S> gram_bruteforce(const FockContext& ctx, int k) {
  if (k < 0 || k > ctx.N) {
    throw RangeError("gram_bruteforce: level " + std::to_string(k) +
                     " outside [0, " + std::to_string(ctx.N) + "]");
  }
  const auto perms = enumerate_permutations(k);  // throws past the cap
  const long dim = ctx.dim(k);
  const S q = static_cast<S>(ctx.q);
  DenseMatrix<S> Gk = DenseMatrix<S>::Zero(dim, dim);
  std::vector<int> nu_digits(k), mu_digits(k);
  for (const auto& [perm, inv] : perms) {
    S weight = S(1);
    for (int t = 0; t < inv; ++t) weight *= q;
    for (long c = 0; c < dim; ++c) {
      long rem = c;
      for (int pos = k - 1; pos >= 0; --pos) {
        nu_digits[pos] = static_cast<int>(rem % ctx.n);
        rem /= ctx.n;
      }
      // The only mu pairing with nu under sigma: mu[sigma(m)] = nu[m].
      for (int m = 0; m < k; ++m) mu_digits[perm[m] - 1] = nu_digits[m];
      long r = 0;
      for (int pos = 0; pos < k; ++pos) r = r * ctx.n + mu_digits[pos];
      Gk(r, c) += weight;
    }
  }
  return Gk;
}

// Level-k Gram matrix from the level-(k-1) one: the entry at row i.mu,
// column nu is sum over positions m with nu_m = i of q^{m-1} times
// G_prev(mu, nu with position m deleted). This is the pairing identity the
// annihilation operators satisfy; it must agree with gram_bruteforce, and
// the test suite gates it on that oracle.
template <class S = double>
DenseMatrix<S> gram_recursive(const FockContext& ctx, int k,
                              const DenseMatrix<S>& G_prev) {
  if (k < 1 || k > ctx.N) {
    throw RangeError("gram_recursive: level " + std::to_string(k) +
                     " outside [1, " + std::to_string(ctx.N) + "]");
  }
  const long dim_prev = ctx.dim(k - 1);
  if (G_prev.rows() != dim_prev || G_prev.cols() != dim_prev) {
    throw ValidationError(
        "gram_recursive: G_prev is " + std::to_string(G_prev.rows()) + "x" +
        std::to_string(G_prev.cols()) + " but level " + std::to_string(k - 1) +
        " needs " + std::to_string(dim_prev) + "x" + std::to_string(dim_prev));
  }
  const long dim = ctx.dim(k);
  const S q = static_cast<S>(ctx.q);
  DenseMatrix<S> Gk = DenseMatrix<S>::Zero(dim, dim);
  std::vector<int> nu_digits(k);
  for (long c = 0; c < dim; ++c) {
    long rem = c;
    for (int pos = k - 1; pos >= 0; --pos) {
      nu_digits[pos] = static_cast<int>(rem % ctx.n);
      rem /= ctx.n;
    }
    S weight = S(1);  // q^{m-1} for the 1-based position m = pos + 1
    for (int pos = 0; pos < k; ++pos) {
      const int letter_digit = nu_digits[pos];
      // Index of nu with this position deleted.
      long deleted = 0;
      for (int t = 0; t < k; ++t)
        if (t != pos) deleted = deleted * ctx.n + nu_digits[t];
      // Rows whose word starts with letter i = letter_digit + 1 form the
      // contiguous block [letter_digit * n^{k-1}, (letter_digit+1) * n^{k-1}).
      Gk.block(letter_digit * dim_prev, c, dim_prev, 1) +=
          weight * G_prev.col(deleted);
      weight *= q;
    }
  }
  return Gk;
}

// Factorization of validated Gram matrices into the family with symmetric
// square roots, via symmetric eigendecomposition (we need G^{-1/2} and the
// eigenvalues for conditioning reports, which Cholesky would not give).
// Throws PositivityError naming the level and q if any eigenvalue is at or
// below ctx.tol_spectral; levels whose condition number exceeds 1e12 are
// recorded in condition_warnings rather than failing.
template <class S = double>
BasicGramFamily<S> gram_factorize(const FockContext& ctx,
                                  std::vector<DenseMatrix<S>> G) {
  if (static_cast<int>(G.size()) != ctx.N + 1) {
    throw ValidationError("gram_factorize: expected " +
                          std::to_string(ctx.N + 1) + " levels, got " +
                          std::to_string(G.size()));
  }
  BasicGramFamily<S> family;
  family.ctx = ctx;
  family.G = std::move(G);
  family.G_half.resize(ctx.N + 1);
  family.G_half_inv.resize(ctx.N + 1);
  family.min_eig.resize(ctx.N + 1);
  family.max_eig.resize(ctx.N + 1);
  for (int k = 0; k <= ctx.N; ++k) {
    const auto& Gk = family.G[k];
    if (Gk.rows() != ctx.dim(k) || Gk.cols() != ctx.dim(k)) {
      throw ValidationError("gram_factorize: level " + std::to_string(k) +
                            " matrix has wrong shape");
    }
    const S asym = (Gk - Gk.transpose()).cwiseAbs().maxCoeff();
    if (static_cast<double>(asym) >
        ctx.tol_exact * std::max(1.0, static_cast<double>(
                                          Gk.cwiseAbs().maxCoeff()))) {
      throw ValidationError("gram_factorize: level " + std::to_string(k) +
                            " matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix<S>> eig(
        ((Gk + Gk.transpose()) / S(2)).eval());
    if (eig.info() != Eigen::Success) {
      throw ValidationError("gram_factorize: eigendecomposition failed at level " +
                            std::to_string(k));
    }
    const auto& w = eig.eigenvalues();
    const auto& V = eig.eigenvectors();
    family.min_eig[k] = w(0);
    family.max_eig[k] = w(w.size() - 1);
    if (static_cast<double>(w(0)) <= ctx.tol_spectral) {
      throw PositivityError(
          "positivity failure at level " + std::to_string(k) + ", q = " +
          std::to_string(ctx.q) + ": min eigenvalue " +
          std::to_string(static_cast<double>(w(0))) + " <= tol_spectral " +
          std::to_string(ctx.tol_spectral) +
          " (|q| too close to 1 for this tolerance, or a construction bug)");
    }
    if (static_cast<double>(family.max_eig[k] / family.min_eig[k]) > 1e12) {
      family.condition_warnings.push_back(k);
    }
    DenseMatrix<S> sqrt_w = w.array().sqrt().matrix().asDiagonal();
    DenseMatrix<S> inv_sqrt_w =
        w.array().sqrt().inverse().matrix().asDiagonal();
    family.G_half[k] = V * sqrt_w * V.transpose();
    family.G_half_inv[k] = V * inv_sqrt_w * V.transpose();
  }
  return family;
}

// Convenience: run the recursion from level 0 up to N and factorize.
template <class S = double>
BasicGramFamily<S> build_gram_family(const FockContext& ctx) {
  std::vector<DenseMatrix<S>> G(ctx.N + 1);
  G[0] = DenseMatrix<S>::Ones(1, 1);
  for (int k = 1; k <= ctx.N; ++k) G[k] = gram_recursive<S>(ctx, k, G[k - 1]);
  return gram_factorize<S>(ctx, std::move(G));
}

}  // namespace qfock
