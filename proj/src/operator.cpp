#include "qfock/operator.hpp"

// Explicit instantiations for the scalar types the library exercises:
// double for production paths, long double for tight identity checks,
// complex<double> for the gauge action.

namespace qfock {

template class BasicGradedOperator<double>;
template class BasicGradedOperator<long double>;
template class BasicGradedOperator<std::complex<double>>;

#define QFOCK_INSTANTIATE_REAL(S)                                             \
  template BasicGradedOperator<S> add(const BasicGradedOperator<S>&,          \
                                      const BasicGradedOperator<S>&);         \
  template BasicGradedOperator<S> subtract(const BasicGradedOperator<S>&,     \
                                           const BasicGradedOperator<S>&);    \
  template BasicGradedOperator<S> scale(S, const BasicGradedOperator<S>&);    \
  template BasicGradedOperator<S> compose(const BasicGradedOperator<S>&,      \
                                          const BasicGradedOperator<S>&);     \
  template BasicGradedOperator<S> commutator(const BasicGradedOperator<S>&,   \
                                             const BasicGradedOperator<S>&);  \
  template BasicGradedOperator<S> q_adjoint(const BasicGradedOperator<S>&,    \
                                            const BasicGramFamily<S>&);       \
  template BasicGradedOperator<S> orthonormal_form(                           \
      const BasicGradedOperator<S>&, const BasicGramFamily<S>&);              \
  template BasicGradedOperator<S> from_orthonormal_form(                      \
      const BasicGradedOperator<S>&, const BasicGramFamily<S>&);

QFOCK_INSTANTIATE_REAL(double)
QFOCK_INSTANTIATE_REAL(long double)
QFOCK_INSTANTIATE_REAL(std::complex<double>)

#undef QFOCK_INSTANTIATE_REAL

template double operator_norm(const BasicGradedOperator<double>&,
                              const BasicGramFamily<double>&,
                              std::pair<int, int>);
template long double operator_norm(const BasicGradedOperator<long double>&,
                                   const BasicGramFamily<long double>&,
                                   std::pair<int, int>);
template double operator_norm(
    const BasicGradedOperator<std::complex<double>>&,
    const BasicGramFamily<std::complex<double>>&, std::pair<int, int>);

template double max_abs_diff(const BasicGradedOperator<double>&,
                             const BasicGradedOperator<double>&);
template long double max_abs_diff(const BasicGradedOperator<long double>&,
                                  const BasicGradedOperator<long double>&);
template double max_abs_diff(const BasicGradedOperator<std::complex<double>>&,
                             const BasicGradedOperator<std::complex<double>>&);

template BasicGradedOperator<long double> cast_operator(
    const BasicGradedOperator<double>&);
template BasicGradedOperator<double> cast_operator(
    const BasicGradedOperator<long double>&);
template BasicGradedOperator<std::complex<double>> cast_operator(
    const BasicGradedOperator<double>&);

template BasicGramFamily<long double> cast_family(
    const BasicGramFamily<double>&);
template BasicGramFamily<std::complex<double>> cast_family(
    const BasicGramFamily<double>&);

}  // namespace qfock
