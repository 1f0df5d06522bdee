#pragma once

#include "qfock/context.hpp"
#include "qfock/gram.hpp"
#include "qfock/operator.hpp"
#include "qfock/report.hpp"

namespace qfock {

// Exact-identity checks. Each returns a finalized VerificationReport whose
// per_level map covers exactly the interior input levels the identity is
// claimed on. Identity-class residuals are evaluated internally in extended
// precision (long double) so that the reported defect reflects the algebra,
// not the conditioning of the level geometry; tolerances are still judged
// against ctx.tol_exact.

// L_i^dag L_j = delta_ij 1 + q L_j L_i^dag on input levels 0..N-1.
VerificationReport verify_qccr(const FockContext& ctx, const GramFamily& gram);

// [L_i^dag, R_j] = delta_ij q^m on level m, for m = 0..N-1.
VerificationReport verify_shlyakhtenko(const FockContext& ctx,
                                       const GramFamily& gram);

// J L_i J = R_i exactly in the word basis, and J^dag J = 1 in the
// q-geometry.
VerificationReport verify_reverse_conjugation(const FockContext& ctx,
                                              const GramFamily& gram);

// The Gram-conjugation adjoint of L_i (resp. R_i) equals the explicit
// combinatorial letter-removal formula, entry-wise, on every level 1..N.
VerificationReport verify_annihilation_formula(const FockContext& ctx,
                                               const GramFamily& gram);

// ||L_i|| <= 1/sqrt(1-|q|), and the windowed norms are non-decreasing in the
// window top.
VerificationReport verify_norm_bound(const FockContext& ctx,
                                     const GramFamily& gram);

// Spectrum of rho_L: exactly 0 on the vacuum level, bounded away from 0 on
// levels 1..N, and the 0-cluster spectral projection equals the vacuum
// projection.
VerificationReport verify_spectral_gap(const FockContext& ctx,
                                       const GramFamily& gram);

// (1 (x) x) = sum_i L_i x L_i^dag rho_L^+ and (x (x) 1) = sum_i R_i x R_i^dag
// rho_R^+ on input levels 1..N-1, plus the intertwining relations
// (1 (x) x) L_i = L_i x and (x (x) 1) R_i = R_i x. Requires block-diagonal x.
VerificationReport verify_tensor_identities(const FockContext& ctx,
                                            const GramFamily& gram,
                                            const GradedOperator& x);

// The span of {L_mu L_nu^dag : |mu| = |nu| = m} restricted to level m has
// full dimension n^{2m}; the rank is computed honestly from the vectorized
// restrictions.
VerificationReport verify_fixed_point_generators(const FockContext& ctx,
                                                 const GramFamily& gram,
                                                 int m);

// Conjugation by the gauge unitary U_z fixes L_i L_j^dag and multiplies L_i
// by z, for sampled unit-modulus z; the finite 8-point gauge average agrees
// with the degree-zero projection on quadratic test elements.
VerificationReport verify_gauge_invariance(const FockContext& ctx,
                                           const GramFamily& gram,
                                           int samples);

}  // namespace qfock
