#pragma once

// Internal scaffolding shared by the verification and experiment modules:
// all generator blocks conjugated into orthonormal coordinates, where the
// q-adjoint is the plain transpose and residual norms are Euclidean. The
// long-double frame is what keeps identity residuals at the algebraic level
// instead of the geometry's condition number, and it is cached per
// (n, q, N) because building it costs a full eigendecomposition per level.

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "qfock/builders.hpp"
#include "qfock/context.hpp"
#include "qfock/errors.hpp"
#include "qfock/gram.hpp"
#include "qfock/operator.hpp"

namespace qfock::detail {

template <class S>
struct OrthoFrame {
  FockContext ctx;
  BasicGramFamily<S> gram;
  // L[i-1][m], R[i-1][m]: the level m -> m+1 creation block in orthonormal
  // coordinates, for m = 0..N-1.
  std::vector<std::vector<DenseMatrix<S>>> L, R;
  // J[m]: the reversal block on level m, orthonormal coordinates.
  std::vector<DenseMatrix<S>> J;
  // rhoL[m], rhoR[m] for m = 0..N (level 0 entry is the 1x1 zero block);
  // the _plus variants are the inverses on levels 1..N.
  std::vector<DenseMatrix<S>> rhoL, rhoR, rhoL_plus, rhoR_plus;

  // Middle-reversal block on one level, orthonormal coordinates.
  DenseMatrix<S> Jk(int k, int level) const {
    const auto op = build_reverse_middle<S>(ctx, gram, k);
    return gram.G_half[level] * op.block(level, level) *
           gram.G_half_inv[level];
  }
};

template <class S>
std::vector<DenseMatrix<S>> invert_density(
    const FockContext& ctx, const std::vector<DenseMatrix<S>>& rho,
    const char* which) {
  std::vector<DenseMatrix<S>> out(rho.size());
  out[0] = DenseMatrix<S>::Zero(1, 1);
  for (int m = 1; m <= ctx.N; ++m) {
    DenseMatrix<S> sym = ((rho[m] + rho[m].transpose()) / S(2)).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix<S>> eig(sym);
    if (eig.info() != Eigen::Success ||
        static_cast<double>(eig.eigenvalues()(0)) <= ctx.tol_spectral) {
      throw PositivityError(
          "positivity failure at level " + std::to_string(m) + ", q = " +
          std::to_string(ctx.q) + ": " + which +
          " has min eigenvalue <= tol_spectral");
    }
    DenseMatrix<S> inv_diag =
        DenseMatrix<S>::Zero(eig.eigenvalues().size(), eig.eigenvalues().size());
    for (long t = 0; t < eig.eigenvalues().size(); ++t)
      inv_diag(t, t) = S(1) / eig.eigenvalues()(t);
    out[m] = eig.eigenvectors() * inv_diag * eig.eigenvectors().transpose();
  }
  return out;
}

template <class S>
OrthoFrame<S> build_frame(const FockContext& ctx) {
  OrthoFrame<S> frame;
  frame.ctx = ctx;
  frame.gram = build_gram_family<S>(ctx);
  const auto& g = frame.gram;

  frame.L.resize(ctx.n);
  frame.R.resize(ctx.n);
  for (int i = 1; i <= ctx.n; ++i) {
    const auto lw = build_creation_left<S>(ctx, g, i);
    const auto rw = build_creation_right<S>(ctx, g, i);
    frame.L[i - 1].resize(ctx.N);
    frame.R[i - 1].resize(ctx.N);
    for (int m = 0; m < ctx.N; ++m) {
      frame.L[i - 1][m] =
          g.G_half[m + 1] * lw.block(m + 1, m) * g.G_half_inv[m];
      frame.R[i - 1][m] =
          g.G_half[m + 1] * rw.block(m + 1, m) * g.G_half_inv[m];
    }
  }

  const auto jw = build_reverse<S>(ctx, g);
  frame.J.resize(ctx.N + 1);
  for (int m = 0; m <= ctx.N; ++m) {
    frame.J[m] = g.G_half[m] * jw.block(m, m) * g.G_half_inv[m];
  }

  frame.rhoL.assign(ctx.N + 1, DenseMatrix<S>::Zero(1, 1));
  frame.rhoR.assign(ctx.N + 1, DenseMatrix<S>::Zero(1, 1));
  for (int m = 1; m <= ctx.N; ++m) {
    frame.rhoL[m] = DenseMatrix<S>::Zero(ctx.dim(m), ctx.dim(m));
    frame.rhoR[m] = DenseMatrix<S>::Zero(ctx.dim(m), ctx.dim(m));
    for (int i = 0; i < ctx.n; ++i) {
      frame.rhoL[m] += frame.L[i][m - 1] * frame.L[i][m - 1].transpose();
      frame.rhoR[m] += frame.R[i][m - 1] * frame.R[i][m - 1].transpose();
    }
  }
  frame.rhoL_plus = invert_density<S>(ctx, frame.rhoL, "rho_L");
  frame.rhoR_plus = invert_density<S>(ctx, frame.rhoR, "rho_R");
  return frame;
}

// Cached long-double frame, keyed by (n, q bits, N). Tolerances do not enter
// the frame numerics apart from the positivity guard, which uses the ctx
// passed on first construction.
const OrthoFrame<long double>& ld_frame(const FockContext& ctx);

using LongMatrix = DenseMatrix<long double>;

}  // namespace qfock::detail
