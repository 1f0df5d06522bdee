#include "qfock/verify.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ortho_core.hpp"
#include "qfock/basis.hpp"
#include "qfock/builders.hpp"
#include "qfock/gauge.hpp"
#include "qfock/rng.hpp"

namespace qfock {

namespace detail {

const OrthoFrame<long double>& ld_frame(const FockContext& ctx) {
  using Key = std::tuple<int, std::uint64_t, int>;
  static std::mutex mtx;
  static std::map<Key, std::unique_ptr<OrthoFrame<long double>>> cache;
  const Key key{ctx.n, std::bit_cast<std::uint64_t>(ctx.q), ctx.N};
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto frame = std::make_unique<OrthoFrame<long double>>(
        build_frame<long double>(ctx));
    it = cache.emplace(key, std::move(frame)).first;
  }
  return *it->second;
}

}  // namespace detail

namespace {

using detail::LongMatrix;

double norm_of(const LongMatrix& m) {
  return static_cast<double>(detail::spectral_norm<long double>(m));
}

void stamp_context(VerificationReport& rep, const FockContext& ctx) {
  rep.metadata["n"] = ctx.n;
  rep.metadata["q"] = ctx.q;
  rep.metadata["N"] = ctx.N;
}

void check_inputs(const FockContext& ctx, const GramFamily& gram,
                  const char* who) {
  if (!ctx.same_space(gram.ctx)) {
    throw ValidationError(std::string(who) +
                          ": context and Gram family disagree on (n, q, N)");
  }
}

// Base-n digits of a level-k word index, most significant first.
void digits_of(long index, int n, int k, std::vector<int>& out) {
  out.assign(k, 0);
  for (int pos = k - 1; pos >= 0; --pos) {
    out[pos] = static_cast<int>(index % n);
    index /= n;
  }
}

}  // namespace

VerificationReport verify_qccr(const FockContext& ctx, const GramFamily& gram) {
  check_inputs(ctx, gram, "verify_qccr");
  const auto& frame = detail::ld_frame(ctx);
  VerificationReport rep;
  rep.name = "qccr";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);
  const long double q = static_cast<long double>(ctx.q);
  for (int m = 0; m < ctx.N; ++m) {
    const long dim = ctx.dim(m);
    for (int i = 0; i < ctx.n; ++i) {
      for (int j = 0; j < ctx.n; ++j) {
        LongMatrix lhs = frame.L[i][m].transpose() * frame.L[j][m];
        if (i == j) lhs -= LongMatrix::Identity(dim, dim);
        if (m >= 1) {
          lhs -= q * (frame.L[j][m - 1] * frame.L[i][m - 1].transpose());
        }
        rep.record(m, norm_of(lhs));
      }
    }
  }
  rep.finalize();
  return rep;
}

VerificationReport verify_shlyakhtenko(const FockContext& ctx,
                                       const GramFamily& gram) {
  check_inputs(ctx, gram, "verify_shlyakhtenko");
  const auto& frame = detail::ld_frame(ctx);
  VerificationReport rep;
  rep.name = "shlyakhtenko_commutation";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);
  long double q_power = 1.0L;  // q^m
  for (int m = 0; m < ctx.N; ++m) {
    const long dim = ctx.dim(m);
    for (int i = 0; i < ctx.n; ++i) {
      for (int j = 0; j < ctx.n; ++j) {
        // [L_i^dag, R_j] on level m.
        LongMatrix lhs = frame.L[i][m].transpose() * frame.R[j][m];
        if (m >= 1) {
          lhs -= frame.R[j][m - 1] * frame.L[i][m - 1].transpose();
        }
        if (i == j) lhs -= q_power * LongMatrix::Identity(dim, dim);
        rep.record(m, norm_of(lhs));
      }
    }
    q_power *= static_cast<long double>(ctx.q);
  }
  rep.finalize();
  return rep;
}

VerificationReport verify_reverse_conjugation(const FockContext& ctx,
                                              const GramFamily& gram) {
  check_inputs(ctx, gram, "verify_reverse_conjugation");
  VerificationReport rep;
  rep.name = "reverse_conjugation";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);

  // J L_i J = R_i in the word basis: both sides are 0/1 permutation-like
  // blocks, so the comparison is exact.
  const auto J = build_reverse<double>(ctx, gram);
  double conj_worst = 0.0;
  for (int i = 1; i <= ctx.n; ++i) {
    const auto left = compose(compose(J, build_creation_left<double>(ctx, gram, i)), J);
    conj_worst = std::max(
        conj_worst, max_abs_diff(left, build_creation_right<double>(ctx, gram, i)));
  }
  rep.metadata["word_basis_conjugation_max"] = conj_worst;
  rep.max_residual = std::max(rep.max_residual, conj_worst);

  // q-unitarity J^dag J = 1, checked per level in orthonormal coordinates.
  const auto& frame = detail::ld_frame(ctx);
  for (int m = 0; m <= ctx.N; ++m) {
    LongMatrix defect = frame.J[m].transpose() * frame.J[m] -
                        LongMatrix::Identity(ctx.dim(m), ctx.dim(m));
    rep.record(m, norm_of(defect));
  }
  rep.finalize();
  return rep;
}

VerificationReport verify_annihilation_formula(const FockContext& ctx,
                                               const GramFamily& gram) {
  check_inputs(ctx, gram, "verify_annihilation_formula");
  const auto& frame = detail::ld_frame(ctx);
  const auto& G = frame.gram.G;
  VerificationReport rep;
  rep.name = "annihilation_formula";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);

  std::vector<int> digits;
  for (int m = 1; m <= ctx.N; ++m) {
    const long dim_in = ctx.dim(m);
    const long dim_out = ctx.dim(m - 1);
    const Eigen::LLT<LongMatrix> llt(G[m - 1]);
    if (llt.info() != Eigen::Success) {
      throw PositivityError("annihilation formula: Cholesky failed at level " +
                            std::to_string(m - 1));
    }
    // Powers of q up to m - 1.
    std::vector<long double> q_pow(m, 1.0L);
    for (int t = 1; t < m; ++t)
      q_pow[t] = q_pow[t - 1] * static_cast<long double>(ctx.q);

    for (int i = 1; i <= ctx.n; ++i) {
      for (int side = 0; side < 2; ++side) {
        const auto creation =
            side == 0 ? build_creation_left<long double>(ctx, frame.gram, i)
                      : build_creation_right<long double>(ctx, frame.gram, i);
        const LongMatrix block = creation.block(m, m - 1);
        // Adjoint via the geometry: G_{m-1}^{-1} B^T G_m.
        const LongMatrix adj = llt.solve(block.transpose() * G[m]);

        // Explicit letter-removal formula: dropping position p of a word
        // whose p-th letter is i carries weight q^{p-1} (left) or q^{m-p}
        // (right).
        LongMatrix formula = LongMatrix::Zero(dim_out, dim_in);
        for (long c = 0; c < dim_in; ++c) {
          digits_of(c, ctx.n, m, digits);
          long prefix = 0;
          for (int p = 1; p <= m; ++p) {
            if (digits[p - 1] == i - 1) {
              // Index of the word with position p removed: the digits
              // before p, then the digits after p.
              long dropped = prefix;
              for (int t = p; t < m; ++t) dropped = dropped * ctx.n + digits[t];
              formula(dropped, c) += side == 0 ? q_pow[p - 1] : q_pow[m - p];
            }
            prefix = prefix * ctx.n + digits[p - 1];
          }
        }
        const double diff = static_cast<double>(
            (adj - formula).cwiseAbs().maxCoeff());
        rep.record(m, diff);
      }
    }
  }
  rep.finalize();
  return rep;
}

VerificationReport verify_norm_bound(const FockContext& ctx,
                                     const GramFamily& gram) {
  check_inputs(ctx, gram, "verify_norm_bound");
  VerificationReport rep;
  rep.name = "creation_norm_bound";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);
  const double bound = 1.0 / std::sqrt(1.0 - std::abs(ctx.q));
  rep.metadata["bound"] = bound;
  for (int i = 1; i <= ctx.n; ++i) {
    const auto L = build_creation_left<double>(ctx, gram, i);
    double prev = 0.0;
    for (int top = 0; top < ctx.N; ++top) {
      const double norm = operator_norm(L, gram, {0, top});
      // Monotonicity in the window top: a longer window can only reveal
      // more of the operator.
      const double monotone_defect = std::max(0.0, prev - norm);
      const double bound_defect = std::max(0.0, norm - bound);
      rep.record(top, std::max(monotone_defect, bound_defect));
      prev = norm;
    }
    rep.metadata["norm_L_" + std::to_string(i)] = prev;
  }
  rep.finalize();
  return rep;
}

VerificationReport verify_spectral_gap(const FockContext& ctx,
                                       const GramFamily& gram) {
  check_inputs(ctx, gram, "verify_spectral_gap");
  const auto& frame = detail::ld_frame(ctx);
  VerificationReport rep;
  rep.name = "spectral_gap";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);

  // Level 0: the particle-number operator has no block, an exact zero.
  rep.metadata["level0_eigenvalue"] = 0.0;
  rep.per_level[0] = 0.0;

  std::vector<Eigen::SelfAdjointEigenSolver<LongMatrix>> solvers;
  solvers.reserve(ctx.N);
  double min_positive = std::numeric_limits<double>::infinity();
  double prev_min = 0.0, last_min = 0.0;
  for (int m = 1; m <= ctx.N; ++m) {
    LongMatrix sym =
        ((frame.rhoL[m] + frame.rhoL[m].transpose()) / 2.0L).eval();
    solvers.emplace_back(sym);
    const auto& w = solvers.back().eigenvalues();
    const double lo = static_cast<double>(w(0));
    const double hi = static_cast<double>(w(w.size() - 1));
    rep.metadata["C1_level_" + std::to_string(m)] = lo;
    rep.metadata["C2_level_" + std::to_string(m)] = hi;
    min_positive = std::min(min_positive, lo);
    prev_min = last_min;
    last_min = lo;
  }
  rep.metadata["min_positive_eigenvalue"] = min_positive;
  if (ctx.N >= 2 && prev_min > 0.0) {
    rep.metadata["stabilization_rel_change"] =
        std::abs(last_min - prev_min) / prev_min;
  }

  // The gap condition itself: a failure is recorded as a unit residual so
  // the report fails loudly rather than by a near-tolerance value.
  if (!(min_positive > ctx.tol_spectral)) {
    rep.metadata["gap_violation"] = 1.0;
    rep.max_residual = std::max(rep.max_residual, 1.0);
  }

  // Spectral projection onto the 0-cluster (eigenvalues below half the
  // smallest positive one) must be the vacuum projection: the identity on
  // level 0, zero on every level m >= 1.
  const double threshold = min_positive / 2.0;
  for (int m = 1; m <= ctx.N; ++m) {
    const auto& solver = solvers[m - 1];
    const auto& w = solver.eigenvalues();
    LongMatrix projector = LongMatrix::Zero(w.size(), w.size());
    for (long t = 0; t < w.size(); ++t) {
      if (static_cast<double>(w(t)) < threshold) {
        projector += solver.eigenvectors().col(t) *
                     solver.eigenvectors().col(t).transpose();
      }
    }
    rep.record(m, norm_of(projector));
  }
  rep.finalize();
  return rep;
}

VerificationReport verify_tensor_identities(const FockContext& ctx,
                                            const GramFamily& gram,
                                            const GradedOperator& x) {
  check_inputs(ctx, gram, "verify_tensor_identities");
  if (!x.ctx().same_space(ctx)) {
    throw ValidationError("verify_tensor_identities: x lives on a different space");
  }
  if (!x.is_block_diagonal()) {
    throw ValidationError("verify_tensor_identities: x must be block-diagonal");
  }
  const auto& frame = detail::ld_frame(ctx);
  const auto& g = frame.gram;
  VerificationReport rep;
  rep.name = "tensor_identities";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);

  // Word-basis blocks of x in long double, plus their orthonormal forms.
  std::vector<LongMatrix> xw(ctx.N + 1), xo(ctx.N + 1);
  for (int m = 0; m <= ctx.N; ++m) {
    xw[m] = x.block(m, m).cast<long double>();
    xo[m] = g.G_half[m] * xw[m] * g.G_half_inv[m];
  }

  const LongMatrix eye_n = LongMatrix::Identity(ctx.n, ctx.n);
  for (int m = 1; m < ctx.N; ++m) {
    // 1 (x) x against sum_i L_i x L_i^dag rho_L^+.
    LongMatrix emb =
        g.G_half[m] * detail::kron<long double>(eye_n, xw[m - 1]) *
        g.G_half_inv[m];
    LongMatrix rhs = LongMatrix::Zero(ctx.dim(m), ctx.dim(m));
    for (int i = 0; i < ctx.n; ++i) {
      rhs += frame.L[i][m - 1] * xo[m - 1] * frame.L[i][m - 1].transpose();
    }
    rhs *= frame.rhoL_plus[m];
    double residual = norm_of(LongMatrix(emb - rhs));

    // x (x) 1 against sum_i R_i x R_i^dag rho_R^+.
    LongMatrix emb_r =
        g.G_half[m] * detail::kron<long double>(xw[m - 1], eye_n) *
        g.G_half_inv[m];
    LongMatrix rhs_r = LongMatrix::Zero(ctx.dim(m), ctx.dim(m));
    for (int i = 0; i < ctx.n; ++i) {
      rhs_r += frame.R[i][m - 1] * xo[m - 1] * frame.R[i][m - 1].transpose();
    }
    rhs_r *= frame.rhoR_plus[m];
    residual = std::max(residual, norm_of(LongMatrix(emb_r - rhs_r)));
    rep.record(m, residual);
  }

  // Intertwining: (1 (x) x) L_i = L_i x and (x (x) 1) R_i = R_i x, exact in
  // the word basis.
  const auto er = embed_right(x);
  const auto el = embed_left(x);
  double intertwine = 0.0;
  for (int i = 1; i <= ctx.n; ++i) {
    const auto L = build_creation_left<double>(ctx, gram, i);
    const auto R = build_creation_right<double>(ctx, gram, i);
    intertwine = std::max(intertwine,
                          max_abs_diff(compose(er, L), compose(L, x)));
    intertwine = std::max(intertwine,
                          max_abs_diff(compose(el, R), compose(R, x)));
  }
  rep.metadata["intertwine_max"] = intertwine;
  rep.max_residual = std::max(rep.max_residual, intertwine);
  rep.finalize();
  return rep;
}

VerificationReport verify_fixed_point_generators(const FockContext& ctx,
                                                 const GramFamily& gram,
                                                 int m) {
  check_inputs(ctx, gram, "verify_fixed_point_generators");
  if (m < 1 || m > ctx.N - 1) {
    throw RangeError("fixed-point generators: level " + std::to_string(m) +
                     " out of range [1, " + std::to_string(ctx.N - 1) + "]");
  }
  VerificationReport rep;
  rep.name = "fixed_point_generators";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);
  rep.metadata["m"] = m;

  std::vector<GradedOperator> letters;
  for (int i = 1; i <= ctx.n; ++i) {
    letters.push_back(build_creation_left<double>(ctx, gram, i));
  }
  const auto words = enumerate_words(ctx.n, m);
  std::vector<GradedOperator> mu_ops;
  mu_ops.reserve(words.size());
  for (const auto& w : words) {
    GradedOperator acc = letters[w.letters.back() - 1];
    for (int t = static_cast<int>(w.letters.size()) - 2; t >= 0; --t) {
      acc = compose(letters[w.letters[t] - 1], acc);
    }
    mu_ops.push_back(std::move(acc));
  }

  const long dim = ctx.dim(m);
  const long span_dim = dim * dim;  // n^{2m}
  DenseMatrix<double> span = DenseMatrix<double>::Zero(span_dim, span_dim);
  long row = 0;
  for (const auto& mu : mu_ops) {
    for (const auto& nu : mu_ops) {
      const DenseMatrix<double> block =
          compose(mu, q_adjoint(nu, gram)).block(m, m);
      for (long c = 0; c < dim; ++c)
        for (long r = 0; r < dim; ++r)
          span(row, c * dim + r) = block(r, c);
      ++row;
    }
  }
  Eigen::ColPivHouseholderQR<DenseMatrix<double>> qr(span);
  qr.setThreshold(1e-8);
  const long rank = qr.rank();
  rep.metadata["rank"] = static_cast<double>(rank);
  rep.metadata["expected_rank"] = static_cast<double>(span_dim);
  rep.record(m, rank == span_dim ? 0.0 : 1.0);
  rep.finalize();
  return rep;
}

VerificationReport verify_gauge_invariance(const FockContext& ctx,
                                           const GramFamily& gram,
                                           int samples) {
  check_inputs(ctx, gram, "verify_gauge_invariance");
  if (samples < 1) {
    throw ValidationError("verify_gauge_invariance: samples must be >= 1");
  }
  using C = std::complex<double>;
  VerificationReport rep;
  rep.name = "gauge_invariance";
  rep.tolerance = ctx.tol_exact;
  stamp_context(rep, ctx);
  rep.metadata["samples"] = samples;

  const auto zgram = cast_family<C>(gram);
  std::vector<ComplexGradedOperator> L;
  for (int i = 1; i <= ctx.n; ++i) {
    L.push_back(cast_operator<C>(build_creation_left<double>(ctx, gram, i)));
  }
  std::vector<ComplexGradedOperator> quadratics;
  for (int i = 0; i < ctx.n; ++i) {
    for (int j = 0; j < ctx.n; ++j) {
      quadratics.push_back(compose(L[i], q_adjoint(L[j], zgram)));
    }
  }

  const auto record_blocks = [&rep](const ComplexGradedOperator& diff) {
    for (const auto& [key, block] : diff.blocks()) {
      if (block.size() > 0)
        rep.record(key.second, block.cwiseAbs().maxCoeff());
    }
  };

  Rng rng(ctx.seed);
  for (int s = 0; s < samples; ++s) {
    C z;
    if (s == 0) {
      z = C(1.0, 0.0);
    } else if (s == 1) {
      z = C(0.0, 1.0);
    } else {
      const double angle = rng.uniform(0.0, 6.283185307179586);
      z = C(std::cos(angle), std::sin(angle));
    }
    const auto Uz = build_gauge<C>(ctx, z);
    const auto Uz_inv = build_gauge<C>(ctx, std::conj(z));
    for (const auto& x : quadratics) {
      record_blocks(subtract(compose(compose(Uz, x), Uz_inv), x));
    }
    for (const auto& Li : L) {
      record_blocks(subtract(compose(compose(Uz, Li), Uz_inv), scale(z, Li)));
    }
  }

  // Finite gauge average: over 8th roots of unity the average of
  // U_z y U_z^{-1} is exactly the degree-zero projection for quadratic y
  // (the integrand is a trigonometric polynomial of degree < 8).
  ComplexGradedOperator test = add(quadratics[0], L[0]);
  ComplexGradedOperator average(ctx);
  for (int t = 0; t < 8; ++t) {
    const double angle = 6.283185307179586 * t / 8.0;
    const C z(std::cos(angle), std::sin(angle));
    average = add(average, compose(compose(build_gauge<C>(ctx, z), test),
                                   build_gauge<C>(ctx, std::conj(z))));
  }
  average = scale(C(1.0 / 8.0, 0.0), average);
  const double avg_residual =
      max_abs_diff(average, conditional_expectation(test));
  rep.metadata["gauge_average_residual"] = avg_residual;
  rep.max_residual = std::max(rep.max_residual, avg_residual);
  rep.finalize();
  return rep;
}

}  // namespace qfock
