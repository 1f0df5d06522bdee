#include "qfock/gram.hpp"

namespace qfock {

// Explicit instantiations for the two scalar types the library uses:
// double for the measurement paths, long double for identity verification.
template DenseMatrix<double> gram_bruteforce<double>(const FockContext&, int);
template DenseMatrix<long double> gram_bruteforce<long double>(
    const FockContext&, int);

template DenseMatrix<double> gram_recursive<double>(const FockContext&, int,
                                                    const DenseMatrix<double>&);
template DenseMatrix<long double> gram_recursive<long double>(
    const FockContext&, int, const DenseMatrix<long double>&);

template BasicGramFamily<double> gram_factorize<double>(
    const FockContext&, std::vector<DenseMatrix<double>>);
template BasicGramFamily<long double> gram_factorize<long double>(
    const FockContext&, std::vector<DenseMatrix<long double>>);

template BasicGramFamily<double> build_gram_family<double>(const FockContext&);
template BasicGramFamily<long double> build_gram_family<long double>(
    const FockContext&);

}  // namespace qfock
