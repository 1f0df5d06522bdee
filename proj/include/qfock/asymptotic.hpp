#pragma once

#include <cstdint>
#include <map>

#include "qfock/context.hpp"
#include "qfock/gram.hpp"
#include "qfock/operator.hpp"
#include "qfock/report.hpp"

namespace qfock {

// Quantitative decay experiments on high-level windows. The window
// convention for sweep step k is input levels [2k+1, N-1]: it excludes the
// low levels (where finite-rank corrections live) and the truncation
// boundary. Norms here are relative where a raw norm would conflate the
// decay with the growth of the reference operator across the window.

// ||[J_k, L_i L_j^dag]|| / ||J_k||, both restricted to input levels
// [2k+1, N-1], for k = 0..k_max. The normalization by ||J_k|| on the same
// window makes the sequence a relative commutation defect, which is the
// quantity that decays like |q|^k at finite size; the raw numerator alone
// inherits the window-dependent growth of ||J_k||. The fitted slope
// approximates log|q|.
DecaySeries measure_commutator_decay(const FockContext& ctx,
                                     const GramFamily& gram, int i, int j,
                                     int k_max);

// Builds A_k by the recursion
//   A_0 = 1,  A_k = sum_{i,j} R_i L_j A_{k-1} R_j^dag rho_R^+ L_i^dag rho_L^+
// and verifies ||J_k - J A_k|| <= tol_exact on input levels [2k, N-2] (the
// interior of the recursion's reach). Extended precision internally.
VerificationReport build_Ak_and_verify(const FockContext& ctx,
                                       const GramFamily& gram, int k);

// Polar decomposition of U_k = J J_k in orthonormal coordinates, per level:
// V_k is the unitary polar factor, absU_k = (U_k^dag U_k)^{1/2}, and min_sv
// is the smallest singular value over window levels [2k+1, N-1] (the
// invertibility proxy). Throws PolarDegeneracyError when min_sv <=
// tol_spectral. The returned operators are in word-basis coordinates.
struct PolarResult {
  GradedOperator V;
  GradedOperator absU;
  double min_sv = 0.0;
  double reconstruction_residual = 0.0;     // max over levels 0..N
  std::map<int, double> per_level_min_sv;   // window levels only
};
PolarResult polar_Uk(const FockContext& ctx, const GramFamily& gram, int k);

// For x over the generators L_i L_j^dag: || V_k^dag x V_k - J x J || on
// input levels [2k+1, N-1], maximized over (i, j), for k = 0..k_max. The
// series must decrease on the tested grids.
DecaySeries measure_flip_defect(const FockContext& ctx, const GramFamily& gram,
                                int k_max);

// Randomized property test of the half-power commutator inequality
//   ||[A^{1/2}, B]|| <= (5/4) sqrt(||B|| ||[A, B]||)
// for positive semidefinite A and arbitrary B (the scale-invariant reading:
// both sides scale like the square root under B -> tB, and the bound in this
// form holds with room to spare; the report also carries the linear ratio
// ||[A^{1/2}, B]|| / (||B|| ||[A, B]||) as an unasserted diagnostic, since
// that ratio is scale-variant and unbounded as ||B|| -> 0).
VerificationReport verify_halfpower_inequality(int trials, int max_dim,
                                               std::uint64_t seed);

// Norm of 1^{(x)k} (x) x (x) 1^{(x)k} per k (k-fold two-sided embedding),
// with the no-growth-trend assertion: the last value is at most 1.1 x the
// maximum of the earlier ones.
DecaySeries measure_uniform_boundedness(const FockContext& ctx,
                                        const GramFamily& gram,
                                        const GradedOperator& x, int k_max);

}  // namespace qfock
