#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "qfock/context.hpp"
#include "qfock/gram.hpp"
#include "qfock/operator.hpp"
#include "qfock/report.hpp"

namespace qfock {

// Projection onto the degree-zero (level-preserving) part: zeroes every
// off-diagonal level block. This is the average of U_z x U_z^{-1} over the
// circle, evaluated exactly. Idempotent, unital, contractive.
template <class S>
BasicGradedOperator<S> conditional_expectation(const BasicGradedOperator<S>& x) {
  BasicGradedOperator<S> out(x.ctx(), "E(" + x.label() + ")");
  for (const auto& [key, block] : x.blocks()) {
    if (key.first == key.second) out.set_block(key.first, key.second, block);
  }
  return out;
}

// The shift isometries s_i = (rho_L^+)^{1/2} L_i together with their
// q-adjoints. At finite truncation s_i^dag s_j - delta_ij is a small
// level-graded defect whose per-level norms are recorded in defect_profile;
// the identity that holds on the nose is sum_i s_i s_i^dag = 1 - P_vac,
// checked into sum_identity.
template <class S>
struct BasicIsometryFamily {
  std::vector<BasicGradedOperator<S>> s;      // s[i-1] is s_i
  std::vector<BasicGradedOperator<S>> s_adj;  // q-adjoints, precomputed
  // (i, j, input level) -> || block of s_i^dag s_j - delta_ij ||
  std::map<std::tuple<int, int, int>, double> defect_profile;
  VerificationReport sum_identity;
};

using IsometryFamily = BasicIsometryFamily<double>;

template <class S = double>
BasicIsometryFamily<S> build_isometries(const FockContext& ctx,
                                        const BasicGramFamily<S>& gram);

// phi(x) = sum_i s_i x s_i^dag. Maps block-diagonal inputs to block-diagonal
// outputs shifted one level up; phi(1) = 1 - P_vac.
template <class S>
BasicGradedOperator<S> phi_endomorphism(const BasicGradedOperator<S>& x,
                                        const BasicIsometryFamily<S>& iso) {
  const FockContext& ctx = x.ctx();
  BasicGradedOperator<S> out(ctx, "phi(" + x.label() + ")");
  for (std::size_t i = 0; i < iso.s.size(); ++i) {
    out = add(out, compose(compose(iso.s[i], x), iso.s_adj[i]));
  }
  out.set_label("phi(" + x.label() + ")");
  return out;
}

// Matrix-unit coordinates: lambda_map(x)(i, j) = s_i^dag x s_j, and
// lambda_inverse(a) = sum_{i,j} s_i a_{ij} s_j^dag. The round trip is
// compression by 1 - P_vac, exactly at finite level.
template <class S>
std::vector<std::vector<BasicGradedOperator<S>>> lambda_map(
    const BasicGradedOperator<S>& x, const BasicIsometryFamily<S>& iso) {
  const int n = static_cast<int>(iso.s.size());
  std::vector<std::vector<BasicGradedOperator<S>>> out(
      n, std::vector<BasicGradedOperator<S>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i][j] = compose(compose(iso.s_adj[i], x), iso.s[j]);
  return out;
}

template <class S>
BasicGradedOperator<S> lambda_inverse(
    const std::vector<std::vector<BasicGradedOperator<S>>>& blocks,
    const BasicIsometryFamily<S>& iso) {
  if (blocks.empty() || blocks.size() != iso.s.size()) {
    throw ValidationError("lambda_inverse: block array must be n x n");
  }
  BasicGradedOperator<S> out(iso.s[0].ctx(), "lambda_inv");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].size() != iso.s.size()) {
      throw ValidationError("lambda_inverse: block array must be n x n");
    }
    for (std::size_t j = 0; j < blocks[i].size(); ++j) {
      out = add(out, compose(compose(iso.s[i], blocks[i][j]), iso.s_adj[j]));
    }
  }
  out.set_label("lambda_inv");
  return out;
}

// Partial sums of the generator-recovery series
//   S_L = L_k . sum_{l=0}^{L} (-q)^l (L_1 L_1^dag)^l . (L_1^dag L_1),
// measured as ||S_L - L_k|| on input levels [0, N-1]. Requires the
// convergence domain |q| ||L_1||^2 < 1 (for the truncated Fock norm this is
// |q| < 1/2); outside it a SeriesDivergenceError cites the computed norm.
DecaySeries telescoping_recovery(const FockContext& ctx, const GramFamily& gram,
                                 int k, int L_terms);

}  // namespace qfock
