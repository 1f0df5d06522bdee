#include "qfock/asymptotic.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "ortho_core.hpp"
#include "qfock/builders.hpp"
#include "qfock/rng.hpp"

namespace qfock {

namespace {

using detail::LongMatrix;
using Matrix = DenseMatrix<double>;

void stamp_series(DecaySeries& series, const FockContext& ctx) {
  series.metadata["n"] = ctx.n;
  series.metadata["q"] = ctx.q;
  series.metadata["N"] = ctx.N;
}

void check_inputs(const FockContext& ctx, const GramFamily& gram,
                  const char* who) {
  if (!ctx.same_space(gram.ctx)) {
    throw ValidationError(std::string(who) +
                          ": context and Gram family disagree on (n, q, N)");
  }
}

void require_window(const FockContext& ctx, int k, const char* who) {
  if (2 * k + 1 > ctx.N - 1) {
    throw RangeError(std::string(who) + ": window [2k+1, N-1] empty for k = " +
                     std::to_string(k) + " at N = " + std::to_string(ctx.N));
  }
}

// Non-increasing within additive slack: the pass rule shared by the decay
// experiments.
bool non_increasing(const std::map<int, double>& values, double slack) {
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [k, v] : values) {
    if (v > prev + slack) return false;
    prev = v;
  }
  return true;
}

// Orthonormal blocks of the level-preserving word-basis operator `op`.
std::vector<Matrix> ortho_diagonal(const GradedOperator& op,
                                   const GramFamily& gram) {
  const FockContext& ctx = gram.ctx;
  std::vector<Matrix> out(ctx.N + 1);
  for (int m = 0; m <= ctx.N; ++m) {
    out[m] = gram.G_half[m] * op.block(m, m) * gram.G_half_inv[m];
  }
  return out;
}

struct LevelSvd {
  Matrix V;        // unitary polar factor W Z^T
  Matrix absU;     // Z S Z^T
  double min_sv;
  double recon;    // || U - V |U| ||
};

LevelSvd polar_of_block(const Matrix& u) {
  LevelSvd out;
  if (u.rows() <= 96) {
    Eigen::JacobiSVD<Matrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.V = svd.matrixU() * svd.matrixV().transpose();
    out.absU = svd.matrixV() * svd.singularValues().asDiagonal() *
               svd.matrixV().transpose();
    out.min_sv = svd.singularValues()(svd.singularValues().size() - 1);
  } else {
    Eigen::BDCSVD<Matrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.V = svd.matrixU() * svd.matrixV().transpose();
    out.absU = svd.matrixV() * svd.singularValues().asDiagonal() *
               svd.matrixV().transpose();
    out.min_sv = svd.singularValues()(svd.singularValues().size() - 1);
  }
  out.recon = detail::spectral_norm<double>(Matrix(u - out.V * out.absU));
  return out;
}

}  // namespace

DecaySeries measure_commutator_decay(const FockContext& ctx,
                                     const GramFamily& gram, int i, int j,
                                     int k_max) {
  check_inputs(ctx, gram, "measure_commutator_decay");
  if (i < 1 || i > ctx.n || j < 1 || j > ctx.n) {
    throw ValidationError("measure_commutator_decay: letter out of range");
  }
  if (k_max < 0) throw RangeError("measure_commutator_decay: negative k_max");
  for (int k = 0; k <= k_max; ++k)
    require_window(ctx, k, "measure_commutator_decay");

  DecaySeries series;
  series.name = "commutator_decay_L" + std::to_string(i) + "_L" +
                std::to_string(j) + "dag";
  series.parameter = "k";
  series.window = "[2k+1, N-1]";
  stamp_series(series, ctx);
  series.metadata["i"] = i;
  series.metadata["j"] = j;

  const auto x = compose(build_creation_left<double>(ctx, gram, i),
                         q_adjoint(build_creation_left<double>(ctx, gram, j), gram));
  for (int k = 0; k <= k_max; ++k) {
    const std::pair<int, int> window{2 * k + 1, ctx.N - 1};
    const auto Jk = build_reverse_middle<double>(ctx, gram, k);
    const double numerator = operator_norm(commutator(Jk, x), gram, window);
    const double denominator = operator_norm(Jk, gram, window);
    series.values[k] = numerator / denominator;
    series.metadata["numerator_" + std::to_string(k)] = numerator;
    series.metadata["denominator_" + std::to_string(k)] = denominator;
  }
  apply_fit(series);
  series.pass = non_increasing(series.values, 1e-12);
  return series;
}

VerificationReport build_Ak_and_verify(const FockContext& ctx,
                                       const GramFamily& gram, int k) {
  check_inputs(ctx, gram, "build_Ak_and_verify");
  if (k < 0) throw RangeError("build_Ak_and_verify: negative k");
  if (2 * k > ctx.N - 2) {
    throw RangeError("build_Ak_and_verify: truncation N = " +
                     std::to_string(ctx.N) + " too small for depth k = " +
                     std::to_string(k) + " (need 2k <= N-2)");
  }
  const auto& frame = detail::ld_frame(ctx);
  VerificationReport rep;
  rep.name = "Ak_recursion";
  rep.tolerance = ctx.tol_exact;
  rep.metadata["n"] = ctx.n;
  rep.metadata["q"] = ctx.q;
  rep.metadata["N"] = ctx.N;
  rep.metadata["k"] = k;

  // A_t blocks per level, built by the recursion in orthonormal
  // coordinates. A_0 is the identity on every level.
  std::vector<LongMatrix> prev(ctx.N + 1), current;
  for (int m = 0; m <= ctx.N; ++m)
    prev[m] = LongMatrix::Identity(ctx.dim(m), ctx.dim(m));
  for (int t = 1; t <= k; ++t) {
    current.assign(ctx.N + 1, LongMatrix());
    for (int m = 2 * t; m <= ctx.N; ++m) {
      // sum_{i,j} R_i L_j A_{t-1} R_j^dag rho_R^+ L_i^dag rho_L^+, grouped
      // as sum_i R_i (sum_j L_j A_{t-1} R_j^dag) rho_R^+ L_i^dag rho_L^+.
      LongMatrix middle = LongMatrix::Zero(ctx.dim(m - 1), ctx.dim(m - 1));
      for (int j = 0; j < ctx.n; ++j) {
        middle += frame.L[j][m - 2] * prev[m - 2] *
                  frame.R[j][m - 2].transpose();
      }
      LongMatrix block = LongMatrix::Zero(ctx.dim(m), ctx.dim(m));
      for (int i = 0; i < ctx.n; ++i) {
        block += frame.R[i][m - 1] *
                 (middle * (frame.rhoR_plus[m - 1] *
                            (frame.L[i][m - 1].transpose() *
                             frame.rhoL_plus[m])));
      }
      current[m] = std::move(block);
    }
    prev = std::move(current);
  }

  for (int m = 2 * k; m <= ctx.N - 2; ++m) {
    const LongMatrix lhs = frame.Jk(k, m);
    const LongMatrix rhs = frame.J[m] * prev[m];
    rep.record(m, static_cast<double>(
                      detail::spectral_norm<long double>(LongMatrix(lhs - rhs))));
  }
  rep.finalize();
  return rep;
}

PolarResult polar_Uk(const FockContext& ctx, const GramFamily& gram, int k) {
  check_inputs(ctx, gram, "polar_Uk");
  if (k < 0) throw RangeError("polar_Uk: negative k");
  require_window(ctx, k, "polar_Uk");

  const auto J_ortho = ortho_diagonal(build_reverse<double>(ctx, gram), gram);
  const auto Jk_ortho =
      ortho_diagonal(build_reverse_middle<double>(ctx, gram, k), gram);

  PolarResult result;
  result.V = GradedOperator(ctx, "V_" + std::to_string(k));
  result.absU = GradedOperator(ctx, "absU_" + std::to_string(k));
  result.min_sv = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= ctx.N; ++m) {
    const Matrix u = J_ortho[m] * Jk_ortho[m];
    const LevelSvd polar = polar_of_block(u);
    result.reconstruction_residual =
        std::max(result.reconstruction_residual, polar.recon);
    if (m >= 2 * k + 1 && m <= ctx.N - 1) {
      result.per_level_min_sv[m] = polar.min_sv;
      result.min_sv = std::min(result.min_sv, polar.min_sv);
    }
    result.V.set_block(
        m, m, Matrix(gram.G_half_inv[m] * polar.V * gram.G_half[m]));
    result.absU.set_block(
        m, m, Matrix(gram.G_half_inv[m] * polar.absU * gram.G_half[m]));
  }
  if (result.min_sv <= ctx.tol_spectral) {
    throw PolarDegeneracyError(
        "polar degeneracy at k = " + std::to_string(k) +
        ": min singular value " + std::to_string(result.min_sv) +
        " <= tol_spectral (truncation too small for this depth)");
  }
  return result;
}

DecaySeries measure_flip_defect(const FockContext& ctx, const GramFamily& gram,
                                int k_max) {
  check_inputs(ctx, gram, "measure_flip_defect");
  if (k_max < 0) throw RangeError("measure_flip_defect: negative k_max");
  for (int k = 0; k <= k_max; ++k) require_window(ctx, k, "measure_flip_defect");

  DecaySeries series;
  series.name = "flip_defect";
  series.parameter = "k";
  series.window = "[2k+1, N-1]";
  stamp_series(series, ctx);

  // Generator blocks x = L_i L_j^dag and the reversal, in orthonormal
  // coordinates (all level-preserving).
  std::vector<std::vector<Matrix>> l(ctx.n);
  for (int i = 1; i <= ctx.n; ++i) {
    const auto lw = build_creation_left<double>(ctx, gram, i);
    l[i - 1].resize(ctx.N);
    for (int m = 0; m < ctx.N; ++m) {
      l[i - 1][m] = gram.G_half[m + 1] * lw.block(m + 1, m) * gram.G_half_inv[m];
    }
  }
  const auto J_ortho = ortho_diagonal(build_reverse<double>(ctx, gram), gram);

  for (int k = 0; k <= k_max; ++k) {
    const auto Jk_ortho =
        ortho_diagonal(build_reverse_middle<double>(ctx, gram, k), gram);
    double defect = 0.0;
    for (int m = 2 * k + 1; m <= ctx.N - 1; ++m) {
      const LevelSvd polar = polar_of_block(Matrix(J_ortho[m] * Jk_ortho[m]));
      for (int i = 0; i < ctx.n; ++i) {
        for (int j = 0; j < ctx.n; ++j) {
          const Matrix x = l[i][m - 1] * l[j][m - 1].transpose();
          const Matrix diff = polar.V.transpose() * x * polar.V -
                              J_ortho[m] * x * J_ortho[m];
          defect = std::max(defect, detail::spectral_norm<double>(diff));
        }
      }
    }
    series.values[k] = defect;
  }
  apply_fit(series);
  series.pass = non_increasing(series.values, 1e-12);
  return series;
}

VerificationReport verify_halfpower_inequality(int trials, int max_dim,
                                               std::uint64_t seed) {
  if (trials < 1) {
    throw ValidationError("verify_halfpower_inequality: trials must be >= 1");
  }
  if (max_dim < 2) {
    throw ValidationError("verify_halfpower_inequality: max_dim must be >= 2");
  }
  VerificationReport rep;
  rep.name = "halfpower_inequality";
  rep.tolerance = 1e-12;
  rep.metadata["trials"] = trials;
  rep.metadata["max_dim"] = max_dim;
  rep.metadata["seed"] = static_cast<double>(seed);

  Rng rng(seed);
  double max_ratio = 0.0, max_linear_ratio = 0.0;
  int skipped = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const int d = static_cast<int>(rng.uniform_int(2, max_dim));
    Matrix m_factor(d, d), b(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m_factor(r, c) = rng.normal();
    // B is swept over twelve decades of scale: the inequality in square-root
    // form is scale-invariant, and the sweep documents that.
    const double b_scale = std::exp(rng.uniform(-8.0, 4.0));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) b(r, c) = b_scale * rng.normal();
    const Matrix a = m_factor * m_factor.transpose();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
    Matrix sqrt_diag = Matrix::Zero(d, d);
    for (int t = 0; t < d; ++t)
      sqrt_diag(t, t) = std::sqrt(std::max(0.0, eig.eigenvalues()(t)));
    const Matrix a_half =
        eig.eigenvectors() * sqrt_diag * eig.eigenvectors().transpose();

    const double lhs =
        detail::spectral_norm<double>(Matrix(a_half * b - b * a_half));
    const double comm =
        detail::spectral_norm<double>(Matrix(a * b - b * a));
    const double norm_b = detail::spectral_norm<double>(b);
    const double denominator = std::sqrt(norm_b * comm);
    if (denominator < 1e-13) {
      ++skipped;  // commuting (or zero) case: both sides vanish
      continue;
    }
    const double ratio = lhs / denominator;
    max_ratio = std::max(max_ratio, ratio);
    if (norm_b * comm > 1e-20) {
      max_linear_ratio = std::max(max_linear_ratio, lhs / (norm_b * comm));
    }
    rep.record(d, std::max(0.0, ratio - 1.25));
  }
  rep.metadata["max_ratio"] = max_ratio;
  rep.metadata["max_linear_ratio_diagnostic"] = max_linear_ratio;
  rep.metadata["skipped_degenerate"] = skipped;
  rep.finalize();
  return rep;
}

DecaySeries measure_uniform_boundedness(const FockContext& ctx,
                                        const GramFamily& gram,
                                        const GradedOperator& x, int k_max) {
  check_inputs(ctx, gram, "measure_uniform_boundedness");
  if (k_max < 0)
    throw RangeError("measure_uniform_boundedness: negative k_max");
  DecaySeries series;
  series.name = "uniform_boundedness";
  series.parameter = "k";
  series.window = "[0, N]";
  stamp_series(series, ctx);

  GradedOperator y = x;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      y = embed_left(embed_right(y));
      if (y.blocks().empty()) break;  // embedded past the truncation
    }
    series.values[k] = operator_norm(y, gram, {0, ctx.N});
  }
  apply_fit(series);

  double earlier_max = 0.0, last = 0.0;
  bool first = true;
  for (const auto& [k, v] : series.values) {
    if (!first) earlier_max = std::max(earlier_max, last);
    last = v;
    first = false;
  }
  series.metadata["C_x"] = std::max(earlier_max, last);
  series.pass = series.values.size() < 2 || last <= 1.1 * earlier_max;
  return series;
}

}  // namespace qfock
