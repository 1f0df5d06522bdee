#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qfock/context.hpp"
#include "qfock/errors.hpp"
#include "qfock/gram.hpp"

namespace qfock {

namespace detail {

template <class S>
struct RealOf {
  using type = S;
};
template <class R>
struct RealOf<std::complex<R>> {
  using type = R;
};

// Largest singular value of a dense block. Jacobi SVD for small blocks;
// eigenvalues of the normal matrix for large ones (we only need the top
// singular value of O(1)-scaled matrices, where squaring costs nothing).
template <class S>
typename RealOf<S>::type spectral_norm(const DenseMatrix<S>& m) {
  using Real = typename RealOf<S>::type;
  if (m.rows() == 0 || m.cols() == 0) return Real(0);
  if (std::max(m.rows(), m.cols()) <= 96) {
    Eigen::JacobiSVD<DenseMatrix<S>> svd(m);
    return svd.singularValues()(0);
  }
  const DenseMatrix<S> normal = m.cols() <= m.rows()
                                    ? DenseMatrix<S>(m.adjoint() * m)
                                    : DenseMatrix<S>(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix<S>> eig(normal,
                                                    Eigen::EigenvaluesOnly);
  const Real top = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  using std::sqrt;
  return sqrt(std::max(Real(0), top));
}

}  // namespace detail

// A level-graded block map on the truncated Fock space: a sparse-by-blocks
// matrix whose (k_out, k_in) block maps level k_in to level k_out. Absent
// blocks are zero. Every operator in the library is one of these.
template <class S>
class BasicGradedOperator {
 public:
  using Scalar = S;
  using Matrix = DenseMatrix<S>;
  using BlockKey = std::pair<int, int>;  // (k_out, k_in)
  using BlockMap = std::map<BlockKey, Matrix>;

  BasicGradedOperator() = default;
  explicit BasicGradedOperator(FockContext ctx, std::string label = "")
      : ctx_(std::move(ctx)), label_(std::move(label)) {}

  const FockContext& ctx() const { return ctx_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  const BlockMap& blocks() const { return blocks_; }

  void set_block(int k_out, int k_in, Matrix block) {
    check_levels(k_out, k_in);
    if (block.rows() != ctx_.dim(k_out) || block.cols() != ctx_.dim(k_in)) {
      throw ValidationError(
          "set_block: block (" + std::to_string(k_out) + ", " +
          std::to_string(k_in) + ") has shape " + std::to_string(block.rows()) +
          "x" + std::to_string(block.cols()) + ", expected " +
          std::to_string(ctx_.dim(k_out)) + "x" + std::to_string(ctx_.dim(k_in)));
    }
    blocks_[{k_out, k_in}] = std::move(block);
  }

  bool has_block(int k_out, int k_in) const {
    return blocks_.count({k_out, k_in}) > 0;
  }

  // The stored block, or a zero block of the right shape if absent.
  Matrix block(int k_out, int k_in) const {
    check_levels(k_out, k_in);
    auto it = blocks_.find({k_out, k_in});
    if (it != blocks_.end()) return it->second;
    return Matrix::Zero(ctx_.dim(k_out), ctx_.dim(k_in));
  }

  // True when every block sits on the diagonal k_out == k_in (the
  // gauge-invariant, level-preserving case).
  bool is_block_diagonal() const {
    for (const auto& [key, block] : blocks_) {
      (void)block;
      if (key.first != key.second) return false;
    }
    return true;
  }

  // If every block has the same degree k_out - k_in, reports it.
  bool is_homogeneous(int* degree = nullptr) const {
    bool first = true;
    int d = 0;
    for (const auto& [key, block] : blocks_) {
      (void)block;
      const int block_degree = key.first - key.second;
      if (first) {
        d = block_degree;
        first = false;
      } else if (block_degree != d) {
        return false;
      }
    }
    if (degree != nullptr) *degree = d;
    return true;
  }

  // Largest absolute entry over all blocks (zero for the zero operator).
  typename detail::RealOf<S>::type max_abs_entry() const {
    typename detail::RealOf<S>::type worst = 0;
    for (const auto& [key, block] : blocks_) {
      (void)key;
      if (block.size() > 0)
        worst = std::max(worst, block.cwiseAbs().maxCoeff());
    }
    return worst;
  }

 private:
  void check_levels(int k_out, int k_in) const {
    if (k_out < 0 || k_out > ctx_.N || k_in < 0 || k_in > ctx_.N) {
      throw RangeError("block (" + std::to_string(k_out) + ", " +
                       std::to_string(k_in) + ") outside levels [0, " +
                       std::to_string(ctx_.N) + "]");
    }
  }

  FockContext ctx_;
  BlockMap blocks_;
  std::string label_;
};

using GradedOperator = BasicGradedOperator<double>;
using ComplexGradedOperator = BasicGradedOperator<std::complex<double>>;

namespace detail {

template <class S>
void require_same_space(const BasicGradedOperator<S>& a,
                        const BasicGradedOperator<S>& b,
                        const char* operation) {
  if (!a.ctx().same_space(b.ctx())) {
    throw ValidationError(std::string(operation) +
                          ": operands live on different Fock spaces");
  }
}

template <class S>
void require_same_space(const BasicGradedOperator<S>& a,
                        const BasicGramFamily<S>& gram, const char* operation) {
  if (!a.ctx().same_space(gram.ctx)) {
    throw ValidationError(std::string(operation) +
                          ": operator and Gram family disagree on (n, q, N)");
  }
}

}  // namespace detail

// a + b, blockwise.
template <class S>
BasicGradedOperator<S> add(const BasicGradedOperator<S>& a,
                           const BasicGradedOperator<S>& b) {
  detail::require_same_space(a, b, "add");
  BasicGradedOperator<S> out(a.ctx());
  for (const auto& [key, block] : a.blocks()) {
    out.set_block(key.first, key.second, block);
  }
  for (const auto& [key, block] : b.blocks()) {
    if (out.has_block(key.first, key.second)) {
      out.set_block(key.first, key.second,
                    DenseMatrix<S>(out.block(key.first, key.second) + block));
    } else {
      out.set_block(key.first, key.second, block);
    }
  }
  return out;
}

// a - b, blockwise.
template <class S>
BasicGradedOperator<S> subtract(const BasicGradedOperator<S>& a,
                                const BasicGradedOperator<S>& b) {
  detail::require_same_space(a, b, "subtract");
  BasicGradedOperator<S> out(a.ctx());
  for (const auto& [key, block] : a.blocks()) {
    out.set_block(key.first, key.second, block);
  }
  for (const auto& [key, block] : b.blocks()) {
    out.set_block(key.first, key.second,
                  DenseMatrix<S>(out.block(key.first, key.second) - block));
  }
  return out;
}

// c * a.
template <class S>
BasicGradedOperator<S> scale(S factor, const BasicGradedOperator<S>& a) {
  BasicGradedOperator<S> out(a.ctx());
  for (const auto& [key, block] : a.blocks()) {
    out.set_block(key.first, key.second, DenseMatrix<S>(factor * block));
  }
  return out;
}

// a . b (apply b first). Blocks whose chain leaves [0, N] are dropped: that
// is the truncation convention, and relation checks stay away from the
// boundary levels where it bites.
template <class S>
BasicGradedOperator<S> compose(const BasicGradedOperator<S>& a,
                               const BasicGradedOperator<S>& b) {
  detail::require_same_space(a, b, "compose");
  BasicGradedOperator<S> out(a.ctx());
  std::map<typename BasicGradedOperator<S>::BlockKey, DenseMatrix<S>> acc;
  for (const auto& [bkey, bblock] : b.blocks()) {
    const auto [mid, k_in] = bkey;
    for (const auto& [akey, ablock] : a.blocks()) {
      if (akey.second != mid) continue;
      const int k_out = akey.first;
      auto it = acc.find({k_out, k_in});
      if (it == acc.end()) {
        acc.emplace(typename BasicGradedOperator<S>::BlockKey{k_out, k_in},
                    DenseMatrix<S>(ablock * bblock));
      } else {
        it->second += ablock * bblock;
      }
    }
  }
  for (auto& [key, block] : acc) {
    out.set_block(key.first, key.second, std::move(block));
  }
  return out;
}

// a b - b a.
template <class S>
BasicGradedOperator<S> commutator(const BasicGradedOperator<S>& a,
                                  const BasicGradedOperator<S>& b) {
  return subtract(compose(a, b), compose(b, a));
}

// The adjoint with respect to the q-inner product: block (k_in, k_out) of
// the result is G_{k_in}^{-1} (block (k_out, k_in))^H G_{k_out}, computed by
// Cholesky solve against G_{k_in}. Involutive, and equal to the plain
// (conjugate) transpose at q = 0.
template <class S>
BasicGradedOperator<S> q_adjoint(const BasicGradedOperator<S>& x,
                                 const BasicGramFamily<S>& gram) {
  detail::require_same_space(x, gram, "q_adjoint");
  BasicGradedOperator<S> out(x.ctx());
  out.set_label(x.label().empty() ? "" : x.label() + "^dag");
  std::map<int, Eigen::LLT<DenseMatrix<S>>> llt_cache;
  for (const auto& [key, block] : x.blocks()) {
    const auto [k_out, k_in] = key;
    auto it = llt_cache.find(k_in);
    if (it == llt_cache.end()) {
      it = llt_cache.emplace(k_in, Eigen::LLT<DenseMatrix<S>>(gram.G[k_in]))
               .first;
      if (it->second.info() != Eigen::Success) {
        throw PositivityError("q_adjoint: Cholesky failed at level " +
                              std::to_string(k_in));
      }
    }
    DenseMatrix<S> rhs = block.adjoint() * gram.G[k_out];
    out.set_block(k_in, k_out, it->second.solve(rhs));
  }
  return out;
}

// Conjugation into orthonormal coordinates: block -> G^{1/2} block G^{-1/2}.
// In these coordinates the q-adjoint is the plain (conjugate) transpose and
// Euclidean singular values are the operator-norm data.
template <class S>
BasicGradedOperator<S> orthonormal_form(const BasicGradedOperator<S>& x,
                                        const BasicGramFamily<S>& gram) {
  detail::require_same_space(x, gram, "orthonormal_form");
  BasicGradedOperator<S> out(x.ctx());
  out.set_label(x.label());
  for (const auto& [key, block] : x.blocks()) {
    const auto [k_out, k_in] = key;
    out.set_block(k_out, k_in,
                  DenseMatrix<S>(gram.G_half[k_out] * block *
                                 gram.G_half_inv[k_in]));
  }
  return out;
}

// Inverse of orthonormal_form: block -> G^{-1/2} block G^{1/2}.
template <class S>
BasicGradedOperator<S> from_orthonormal_form(const BasicGradedOperator<S>& x,
                                             const BasicGramFamily<S>& gram) {
  detail::require_same_space(x, gram, "from_orthonormal_form");
  BasicGradedOperator<S> out(x.ctx());
  out.set_label(x.label());
  for (const auto& [key, block] : x.blocks()) {
    const auto [k_out, k_in] = key;
    out.set_block(k_out, k_in,
                  DenseMatrix<S>(gram.G_half_inv[k_out] * block *
                                 gram.G_half[k_in]));
  }
  return out;
}

// Operator norm of x restricted to input levels in the inclusive window
// [window.first, window.second] (output levels unrestricted): the largest
// singular value of the orthonormal form of that restriction.
//
// When the restricted block pattern is a graded matching (at most one block
// per input level and per output level) the singular values split by block
// and the maximum over blocks is exact; otherwise the restriction is
// assembled densely.
template <class S>
typename detail::RealOf<S>::type operator_norm(
    const BasicGradedOperator<S>& x, const BasicGramFamily<S>& gram,
    std::pair<int, int> window) {
  detail::require_same_space(x, gram, "operator_norm");
  const auto [lo, hi] = window;
  if (lo < 0 || hi > x.ctx().N || lo > hi) {
    throw RangeError("operator_norm: empty or out-of-range window [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  using Real = typename detail::RealOf<S>::type;

  std::vector<typename BasicGradedOperator<S>::BlockKey> keys;
  for (const auto& [key, block] : x.blocks()) {
    (void)block;
    if (key.second >= lo && key.second <= hi) keys.push_back(key);
  }
  if (keys.empty()) return Real(0);

  std::map<int, int> in_seen, out_seen;
  for (const auto& key : keys) {
    ++out_seen[key.first];
    ++in_seen[key.second];
  }
  const bool matching =
      std::all_of(keys.begin(), keys.end(),
                  [&](const auto& key) {
                    return out_seen[key.first] == 1 && in_seen[key.second] == 1;
                  });

  if (matching) {
    Real worst = 0;
    for (const auto& key : keys) {
      const DenseMatrix<S> ortho = gram.G_half[key.first] *
                                   x.block(key.first, key.second) *
                                   gram.G_half_inv[key.second];
      worst = std::max(worst, detail::spectral_norm<S>(ortho));
    }
    return worst;
  }

  // Assemble the dense orthonormal restriction: rows run over all output
  // levels, columns over input levels in the window.
  const FockContext& ctx = x.ctx();
  std::vector<long> row_offset(ctx.N + 2, 0), col_offset(hi - lo + 2, 0);
  for (int k = 0; k <= ctx.N; ++k) row_offset[k + 1] = row_offset[k] + ctx.dim(k);
  for (int k = lo; k <= hi; ++k)
    col_offset[k - lo + 1] = col_offset[k - lo] + ctx.dim(k);
  DenseMatrix<S> dense =
      DenseMatrix<S>::Zero(row_offset[ctx.N + 1], col_offset[hi - lo + 1]);
  for (const auto& key : keys) {
    const DenseMatrix<S> ortho = gram.G_half[key.first] *
                                 x.block(key.first, key.second) *
                                 gram.G_half_inv[key.second];
    dense.block(row_offset[key.first], col_offset[key.second - lo],
                ortho.rows(), ortho.cols()) = ortho;
  }
  return detail::spectral_norm<S>(dense);
}

// Largest absolute entry of a - b across all blocks (word-basis comparison).
template <class S>
typename detail::RealOf<S>::type max_abs_diff(const BasicGradedOperator<S>& a,
                                              const BasicGradedOperator<S>& b) {
  return subtract(a, b).max_abs_entry();
}

// Entry-wise cast between scalar types (e.g. lifting a double operator into
// long double or complex arithmetic).
template <class T, class S>
BasicGradedOperator<T> cast_operator(const BasicGradedOperator<S>& x) {
  BasicGradedOperator<T> out(x.ctx(), x.label());
  for (const auto& [key, block] : x.blocks()) {
    out.set_block(key.first, key.second, block.template cast<T>());
  }
  return out;
}

// Cast of a Gram family between scalar types.
template <class T, class S>
BasicGramFamily<T> cast_family(const BasicGramFamily<S>& gram) {
  BasicGramFamily<T> out;
  out.ctx = gram.ctx;
  const auto cast_all = [](const std::vector<DenseMatrix<S>>& in,
                           std::vector<DenseMatrix<T>>& to) {
    to.reserve(in.size());
    for (const auto& m : in) to.push_back(m.template cast<T>());
  };
  cast_all(gram.G, out.G);
  cast_all(gram.G_half, out.G_half);
  cast_all(gram.G_half_inv, out.G_half_inv);
  out.min_eig.reserve(gram.min_eig.size());
  for (const auto& v : gram.min_eig) out.min_eig.push_back(static_cast<T>(v));
  out.max_eig.reserve(gram.max_eig.size());
  for (const auto& v : gram.max_eig) out.max_eig.push_back(static_cast<T>(v));
  out.condition_warnings = gram.condition_warnings;
  return out;
}

}  // namespace qfock
