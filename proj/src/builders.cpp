#include "qfock/builders.hpp"

namespace qfock {

#define QFOCK_INSTANTIATE_BUILDERS(S)                                        \
  template BasicGradedOperator<S> build_creation_left(                       \
      const FockContext&, const BasicGramFamily<S>&, int);                   \
  template BasicGradedOperator<S> build_creation_right(                      \
      const FockContext&, const BasicGramFamily<S>&, int);                   \
  template BasicGradedOperator<S> build_reverse(const FockContext&,          \
                                                const BasicGramFamily<S>&);  \
  template BasicGradedOperator<S> build_reverse_middle(                      \
      const FockContext&, const BasicGramFamily<S>&, int);                   \
  template BasicGradedOperator<S> build_particle_number(                     \
      const FockContext&, const BasicGramFamily<S>&, Side);                  \
  template BasicGradedOperator<S> pseudo_power(const BasicGradedOperator<S>&,\
                                               const BasicGramFamily<S>&,    \
                                               double);                      \
  template BasicGradedOperator<S> pseudoinverse_particle_number(             \
      const BasicGradedOperator<S>&, const BasicGramFamily<S>&);             \
  template BasicGradedOperator<S> build_vacuum_projection(const FockContext&);\
  template BasicGradedOperator<S> build_identity(const FockContext&);

QFOCK_INSTANTIATE_BUILDERS(double)
QFOCK_INSTANTIATE_BUILDERS(long double)

#undef QFOCK_INSTANTIATE_BUILDERS

template BasicGradedOperator<std::complex<double>> build_gauge(
    const FockContext&, std::complex<double>);

template BasicGradedOperator<double> embed_right(
    const BasicGradedOperator<double>&);
template BasicGradedOperator<double> embed_left(
    const BasicGradedOperator<double>&);
template BasicGradedOperator<long double> embed_right(
    const BasicGradedOperator<long double>&);
template BasicGradedOperator<long double> embed_left(
    const BasicGradedOperator<long double>&);

}  // namespace qfock
