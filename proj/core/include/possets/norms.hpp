#pragma once

#include <string>

#include "possets/types.hpp"

namespace possets {

enum class NormKind { L1, L2, LInf };

/// dual(L1) = LInf, dual(L2) = L2, dual(LInf) = L1.
NormKind dual_norm_kind(NormKind k);

double vector_norm(const Vec& v, NormKind k);

/// ||v||_* for the norm k, i.e. vector_norm(v, dual_norm_kind(k)).
double dual_vector_norm(const Vec& v, NormKind k);

/// Operator norm of M induced by the vector norm k.  For L2 this is the
/// spectral norm, computed by power iteration on M^T M to tolerance 1e-10;
/// L1 and LInf reduce to column / row absolute sums.
double operator_norm(const Mat& M, NormKind k);

std::string to_string(NormKind k);
NormKind norm_kind_from_string(const std::string& s);

}  // namespace possets
