#include "qfock/gauge.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ortho_core.hpp"
#include "qfock/builders.hpp"

namespace qfock {

template <class S>
BasicIsometryFamily<S> build_isometries(const FockContext& ctx,
                                        const BasicGramFamily<S>& gram) {
  if (!ctx.same_space(gram.ctx)) {
    throw ValidationError(
        "build_isometries: context and Gram family disagree on (n, q, N)");
  }
  BasicIsometryFamily<S> fam;
  const auto rho = build_particle_number<S>(ctx, gram, Side::Left);
  const auto root = pseudo_power<S>(rho, gram, -0.5);
  for (int i = 1; i <= ctx.n; ++i) {
    auto s = compose(root, build_creation_left<S>(ctx, gram, i));
    s.set_label("s_" + std::to_string(i));
    fam.s_adj.push_back(q_adjoint(s, gram));
    fam.s.push_back(std::move(s));
  }

  // Orthonormal blocks of each s_i: output level m = 1..N.
  std::vector<std::vector<DenseMatrix<S>>> so(ctx.n);
  for (int i = 0; i < ctx.n; ++i) {
    so[i].resize(ctx.N + 1);
    for (int m = 1; m <= ctx.N; ++m) {
      so[i][m] = gram.G_half[m] * fam.s[i].block(m, m - 1) *
                 gram.G_half_inv[m - 1];
    }
  }

  // The identity that holds on the nose at finite level:
  // sum_i s_i s_i^dag = 1 - P_vac, level by level.
  VerificationReport rep;
  rep.name = "isometry_sum_identity";
  rep.tolerance = ctx.tol_exact;
  rep.metadata["n"] = ctx.n;
  rep.metadata["q"] = ctx.q;
  rep.metadata["N"] = ctx.N;
  rep.per_level[0] = 0.0;  // no s_i block reaches level 0: exact zero there
  for (int m = 1; m <= ctx.N; ++m) {
    DenseMatrix<S> sum = DenseMatrix<S>::Zero(ctx.dim(m), ctx.dim(m));
    for (int i = 0; i < ctx.n; ++i) sum += so[i][m] * so[i][m].transpose();
    sum -= DenseMatrix<S>::Identity(ctx.dim(m), ctx.dim(m));
    rep.record(m, static_cast<double>(detail::spectral_norm<S>(sum)));
  }
  rep.finalize();
  fam.sum_identity = rep;

  // Per-level isometry defect s_i^dag s_j - delta_ij, recorded per input
  // level m (the block mapping level m to itself through level m+1).
  for (int i = 0; i < ctx.n; ++i) {
    for (int j = 0; j < ctx.n; ++j) {
      for (int m = 0; m < ctx.N; ++m) {
        DenseMatrix<S> block = so[i][m + 1].transpose() * so[j][m + 1];
        if (i == j) block -= DenseMatrix<S>::Identity(ctx.dim(m), ctx.dim(m));
        fam.defect_profile[{i + 1, j + 1, m}] =
            static_cast<double>(detail::spectral_norm<S>(block));
      }
    }
  }
  return fam;
}

template BasicIsometryFamily<double> build_isometries(
    const FockContext&, const BasicGramFamily<double>&);
template BasicIsometryFamily<long double> build_isometries(
    const FockContext&, const BasicGramFamily<long double>&);

DecaySeries telescoping_recovery(const FockContext& ctx, const GramFamily& gram,
                                 int k, int L_terms) {
  if (!ctx.same_space(gram.ctx)) {
    throw ValidationError(
        "telescoping_recovery: context and Gram family disagree on (n, q, N)");
  }
  if (k < 1 || k > ctx.n) {
    throw ValidationError("telescoping_recovery: letter " + std::to_string(k) +
                          " outside alphabet {1.." + std::to_string(ctx.n) + "}");
  }
  if (L_terms < 0) {
    throw RangeError("telescoping_recovery: negative term count");
  }

  const auto L1 = build_creation_left<double>(ctx, gram, 1);
  const double norm_L1 = operator_norm(L1, gram, {0, ctx.N - 1});
  const double ratio = std::abs(ctx.q) * norm_L1 * norm_L1;
  if (ratio >= 1.0) {
    throw SeriesDivergenceError(
        "series divergent at this q: |q| * ||L_1||^2 = " +
        std::to_string(ratio) + " >= 1 (computed ||L_1|| = " +
        std::to_string(norm_L1) + ")");
  }

  DecaySeries series;
  series.name = "telescoping_recovery_L" + std::to_string(k);
  series.parameter = "l";
  series.window = "[0, N-1]";
  series.metadata["n"] = ctx.n;
  series.metadata["q"] = ctx.q;
  series.metadata["N"] = ctx.N;
  series.metadata["k"] = k;
  series.metadata["norm_L1"] = norm_L1;
  series.metadata["contraction_ratio"] = ratio;

  const auto Lk = build_creation_left<double>(ctx, gram, k);
  const auto L1_adj = q_adjoint(L1, gram);
  const auto D = compose(L1, L1_adj);   // L_1 L_1^dag
  const auto C = compose(L1_adj, L1);   // L_1^dag L_1
  GradedOperator partial(ctx);          // sum_{l' <= l} (-q)^{l'} D^{l'}
  GradedOperator D_power = build_identity<double>(ctx);
  double coefficient = 1.0;
  for (int l = 0; l <= L_terms; ++l) {
    partial = add(partial, scale(coefficient, D_power));
    const auto S_l = compose(Lk, compose(partial, C));
    series.values[l] = operator_norm(subtract(S_l, Lk), gram, {0, ctx.N - 1});
    coefficient *= -ctx.q;
    D_power = compose(D, D_power);
  }
  apply_fit(series);
  double prev = std::numeric_limits<double>::infinity();
  series.pass = true;
  for (const auto& [l, v] : series.values) {
    if (v > prev + 1e-12) series.pass = false;
    prev = v;
  }
  return series;
}

}  // namespace qfock
