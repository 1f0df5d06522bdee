#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "qfock/context.hpp"
#include "qfock/errors.hpp"
#include "qfock/gram.hpp"
#include "qfock/operator.hpp"
#include "qfock/rng.hpp"

namespace qfock {

enum class Side { Left, Right };

namespace detail {

template <class S>
DenseMatrix<S> kron(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  DenseMatrix<S> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long r = 0; r < a.rows(); ++r)
    for (long c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

inline void check_letter(const FockContext& ctx, int i, const char* who) {
  if (i < 1 || i > ctx.n) {
    throw ValidationError(std::string(who) + ": letter " + std::to_string(i) +
                          " outside alphabet {1.." + std::to_string(ctx.n) +
                          "}");
  }
}

}  // namespace detail

// Left creation L_i: prefix a word by the letter i. Blocks (k+1, k) are 0/1
// matrices for k < N; level N is annihilated (truncation boundary).
template <class S = double>
BasicGradedOperator<S> build_creation_left(const FockContext& ctx,
                                           const BasicGramFamily<S>& gram,
                                           int i) {
  detail::check_letter(ctx, i, "build_creation_left");
  if (!ctx.same_space(gram.ctx))
    throw ValidationError("build_creation_left: context/Gram mismatch");
  BasicGradedOperator<S> op(ctx, "L_" + std::to_string(i));
  for (int k = 0; k + 1 <= ctx.N; ++k) {
    const long dim_in = ctx.dim(k);
    DenseMatrix<S> block = DenseMatrix<S>::Zero(ctx.dim(k + 1), dim_in);
    // Prefixing by i sends word index c to (i-1) * n^k + c.
    for (long c = 0; c < dim_in; ++c) block((i - 1) * dim_in + c, c) = S(1);
    op.set_block(k + 1, k, std::move(block));
  }
  return op;
}

// Right creation R_i: suffix a word by the letter i. Word index c of level k
// goes to c * n + (i - 1) at level k + 1.
template <class S = double>
BasicGradedOperator<S> build_creation_right(const FockContext& ctx,
                                            const BasicGramFamily<S>& gram,
                                            int i) {
  detail::check_letter(ctx, i, "build_creation_right");
  if (!ctx.same_space(gram.ctx))
    throw ValidationError("build_creation_right: context/Gram mismatch");
  BasicGradedOperator<S> op(ctx, "R_" + std::to_string(i));
  for (int k = 0; k + 1 <= ctx.N; ++k) {
    const long dim_in = ctx.dim(k);
    DenseMatrix<S> block = DenseMatrix<S>::Zero(ctx.dim(k + 1), dim_in);
    for (long c = 0; c < dim_in; ++c) block(c * ctx.n + (i - 1), c) = S(1);
    op.set_block(k + 1, k, std::move(block));
  }
  return op;
}

// Tensor-reverse J: the level-k block permutes each word to its reversal.
// An involution, and a q-unitary because reversing both arguments leaves the
// q-inner product unchanged.
template <class S = double>
BasicGradedOperator<S> build_reverse(const FockContext& ctx,
                                     const BasicGramFamily<S>& gram) {
  if (!ctx.same_space(gram.ctx))
    throw ValidationError("build_reverse: context/Gram mismatch");
  BasicGradedOperator<S> op(ctx, "J");
  for (int k = 0; k <= ctx.N; ++k) {
    const long dim = ctx.dim(k);
    DenseMatrix<S> block = DenseMatrix<S>::Zero(dim, dim);
    for (long c = 0; c < dim; ++c) {
      long rem = c, r = 0;
      for (int pos = 0; pos < k; ++pos) {
        // Reading base-n digits least significant first builds the
        // reversed word most significant first.
        r = r * ctx.n + rem % ctx.n;
        rem /= ctx.n;
      }
      block(r, c) = S(1);
    }
    op.set_block(k, k, std::move(block));
  }
  return op;
}

// Middle reversal J_k: on a level-M word with M >= 2k, fixes the first k and
// last k letters and reverses the middle M - 2k; on levels M < 2k it is the
// identity (the formal expression is undefined there, and any finite-rank
// choice leaves the high-level statements unchanged).
template <class S = double>
BasicGradedOperator<S> build_reverse_middle(const FockContext& ctx,
                                            const BasicGramFamily<S>& gram,
                                            int k) {
  if (k < 0) throw RangeError("build_reverse_middle: negative k");
  if (!ctx.same_space(gram.ctx))
    throw ValidationError("build_reverse_middle: context/Gram mismatch");
  BasicGradedOperator<S> op(ctx, "J_" + std::to_string(k));
  std::vector<int> digits;
  for (int M = 0; M <= ctx.N; ++M) {
    const long dim = ctx.dim(M);
    DenseMatrix<S> block = DenseMatrix<S>::Zero(dim, dim);
    if (M < 2 * k) {
      block.setIdentity();
    } else {
      digits.assign(M, 0);
      for (long c = 0; c < dim; ++c) {
        long rem = c;
        for (int pos = M - 1; pos >= 0; --pos) {
          digits[pos] = static_cast<int>(rem % ctx.n);
          rem /= ctx.n;
        }
        std::reverse(digits.begin() + k, digits.end() - k);
        long r = 0;
        for (int pos = 0; pos < M; ++pos) r = r * ctx.n + digits[pos];
        block(r, c) = S(1);
        std::reverse(digits.begin() + k, digits.end() - k);
      }
    }
    op.set_block(M, M, std::move(block));
  }
  return op;
}

// Particle-number operator rho_L = sum_i L_i L_i^dag (or the right-handed
// analogue), built as the literal sum of creation-annihilation products.
// Degree 0, q-self-adjoint, and zero on the vacuum.
template <class S = double>
BasicGradedOperator<S> build_particle_number(const FockContext& ctx,
                                             const BasicGramFamily<S>& gram,
                                             Side side) {
  BasicGradedOperator<S> sum(ctx, side == Side::Left ? "rho_L" : "rho_R");
  for (int i = 1; i <= ctx.n; ++i) {
    const BasicGradedOperator<S> creation =
        side == Side::Left ? build_creation_left<S>(ctx, gram, i)
                           : build_creation_right<S>(ctx, gram, i);
    sum = add(sum, compose(creation, q_adjoint(creation, gram)));
  }
  sum.set_label(side == Side::Left ? "rho_L" : "rho_R");
  return sum;
}

// Level-wise functional calculus on a block-diagonal q-self-adjoint
// operator with zero vacuum block: level 0 maps to zero, and each level
// m >= 1 block is taken to the given power through its eigendecomposition in
// orthonormal coordinates. Negative or fractional powers require all
// eigenvalues > ctx.tol_spectral, else PositivityError.
template <class S = double>
BasicGradedOperator<S> pseudo_power(const BasicGradedOperator<S>& x,
                                    const BasicGramFamily<S>& gram,
                                    double exponent) {
  detail::require_same_space(x, gram, "pseudo_power");
  if (!x.is_block_diagonal())
    throw ValidationError("pseudo_power: operator must be block-diagonal");
  const FockContext& ctx = x.ctx();
  BasicGradedOperator<S> out(ctx, x.label() + "^{" + std::to_string(exponent) +
                                      "}");
  out.set_block(0, 0, DenseMatrix<S>::Zero(1, 1));
  for (int m = 1; m <= ctx.N; ++m) {
    if (!x.has_block(m, m)) continue;
    DenseMatrix<S> ortho =
        gram.G_half[m] * x.block(m, m) * gram.G_half_inv[m];
    ortho = ((ortho + ortho.transpose()) / S(2)).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix<S>> eig(ortho);
    if (eig.info() != Eigen::Success) {
      throw ValidationError("pseudo_power: eigendecomposition failed at level " +
                            std::to_string(m));
    }
    const auto& w = eig.eigenvalues();
    if (static_cast<double>(w(0)) <= gram.ctx.tol_spectral) {
      throw PositivityError(
          "positivity failure at level " + std::to_string(m) + ", q = " +
          std::to_string(ctx.q) + ": min singular value " +
          std::to_string(static_cast<double>(w(0))) +
          " <= tol_spectral in pseudo_power");
    }
    DenseMatrix<S> powered = DenseMatrix<S>::Zero(w.size(), w.size());
    for (long t = 0; t < w.size(); ++t) {
      powered(t, t) = static_cast<S>(
          std::pow(static_cast<long double>(w(t)),
                   static_cast<long double>(exponent)));
    }
    DenseMatrix<S> result =
        eig.eigenvectors() * powered * eig.eigenvectors().transpose();
    out.set_block(m, m, DenseMatrix<S>(gram.G_half_inv[m] * result *
                                       gram.G_half[m]));
  }
  return out;
}

// Pseudo-inverse of a particle-number operator: zero on the vacuum level,
// the inverse block on every level 1..N. rho rho^+ = rho^+ rho = 1 - P_vac.
template <class S = double>
BasicGradedOperator<S> pseudoinverse_particle_number(
    const BasicGradedOperator<S>& rho, const BasicGramFamily<S>& gram) {
  auto out = pseudo_power<S>(rho, gram, -1.0);
  out.set_label(rho.label() + "^+");
  return out;
}

// Rank-one projection onto the vacuum level.
template <class S = double>
BasicGradedOperator<S> build_vacuum_projection(const FockContext& ctx) {
  BasicGradedOperator<S> op(ctx, "P_vac");
  op.set_block(0, 0, DenseMatrix<S>::Ones(1, 1));
  return op;
}

// Identity on every level 0..N.
template <class S = double>
BasicGradedOperator<S> build_identity(const FockContext& ctx) {
  BasicGradedOperator<S> op(ctx, "1");
  for (int k = 0; k <= ctx.N; ++k) {
    op.set_block(k, k, DenseMatrix<S>::Identity(ctx.dim(k), ctx.dim(k)));
  }
  return op;
}

// Gauge unitary U_z for |z| = 1: scalar z^k on level k, so conjugation
// multiplies a degree-d operator by z^d.
template <class S>
BasicGradedOperator<S> build_gauge(const FockContext& ctx, S z) {
  using std::abs;
  if (abs(abs(z) - 1.0) > 1e-12) {
    throw ValidationError("build_gauge: z must have unit modulus");
  }
  BasicGradedOperator<S> op(ctx, "U_z");
  S phase = S(1);
  for (int k = 0; k <= ctx.N; ++k) {
    op.set_block(k, k,
                 DenseMatrix<S>(phase *
                                DenseMatrix<S>::Identity(ctx.dim(k), ctx.dim(k))));
    phase *= z;
  }
  return op;
}

// Deterministic random degree-0 test operator: one dense block per level
// with standard-normal entries, each block scaled to unit spectral norm so
// residuals against it read in absolute operator-norm units.
template <class S = double>
BasicGradedOperator<S> build_random_block_diagonal(const FockContext& ctx,
                                                   std::uint64_t seed) {
  Rng rng(seed);
  BasicGradedOperator<S> out(ctx, "x_random");
  for (int m = 0; m <= ctx.N; ++m) {
    const long dim = ctx.dim(m);
    DenseMatrix<S> block(dim, dim);
    for (long c = 0; c < dim; ++c)
      for (long r = 0; r < dim; ++r) block(r, c) = static_cast<S>(rng.normal());
    const auto norm = detail::spectral_norm<S>(block);
    if (static_cast<double>(norm) > 0) block /= static_cast<S>(norm);
    out.set_block(m, m, std::move(block));
  }
  return out;
}

// 1 (x) x: vacuum to zero; on level m >= 1 the first tensor factor is left
// alone and x's level-(m-1) block acts on the remaining factors. Requires a
// block-diagonal x so the result respects the truncation.
template <class S>
BasicGradedOperator<S> embed_right(const BasicGradedOperator<S>& x) {
  if (!x.is_block_diagonal()) {
    throw ValidationError(
        "embed_right: operator must be block-diagonal (degree 0)");
  }
  const FockContext& ctx = x.ctx();
  BasicGradedOperator<S> out(ctx, "1(x)" + x.label());
  const DenseMatrix<S> eye_n = DenseMatrix<S>::Identity(ctx.n, ctx.n);
  for (int m = 1; m <= ctx.N; ++m) {
    if (!x.has_block(m - 1, m - 1)) continue;
    out.set_block(m, m, detail::kron<S>(eye_n, x.block(m - 1, m - 1)));
  }
  return out;
}

// x (x) 1: mirror image of embed_right, acting on the leading factors.
template <class S>
BasicGradedOperator<S> embed_left(const BasicGradedOperator<S>& x) {
  if (!x.is_block_diagonal()) {
    throw ValidationError(
        "embed_left: operator must be block-diagonal (degree 0)");
  }
  const FockContext& ctx = x.ctx();
  BasicGradedOperator<S> out(ctx, x.label() + "(x)1");
  const DenseMatrix<S> eye_n = DenseMatrix<S>::Identity(ctx.n, ctx.n);
  for (int m = 1; m <= ctx.N; ++m) {
    if (!x.has_block(m - 1, m - 1)) continue;
    out.set_block(m, m, detail::kron<S>(x.block(m - 1, m - 1), eye_n));
  }
  return out;
}

}  // namespace qfock
