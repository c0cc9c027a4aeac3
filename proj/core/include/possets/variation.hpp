#pragma once

#include "possets/types.hpp"

namespace possets {

// The variation function g(t) = t - ln t - 1 on t > 0.
//
// g is strictly convex, nonnegative, zero only at t = 1, strictly decreasing
// on (0,1] and strictly increasing on [1,inf), and blows up at both ends of
// its domain. It measures how far a positive ratio deviates from 1 and is
// the building block of every set in this library.

/// g(t) = t - ln t - 1.  Throws domain_error for t <= 0.
double variation(double t);

/// First derivative g'(t) = 1 - 1/t.
double variation_deriv(double t);

/// Applies g coordinatewise.  All entries must be positive.
Vec variation_vec(const Vec& z);

/// Smallest representable argument returned by the inverse branches.  The
/// lower branch saturates here for targets beyond what double can express
/// (g(t) <= ~690 for t >= 1e-300); the saturated result stays strictly
/// positive, which is the property the set model relies on.
inline constexpr double kVariationArgFloor = 1e-300;

/// Unique t in (0,1] with g(t) = y, for y >= 0, to absolute tolerance tol.
/// Safeguarded bisection to a 1e-12 bracket followed by Newton polish;
/// plain Newton stalls near y = 0 because g' vanishes at t = 1.
double variation_inverse_lower(double y, double tol = 1e-12);

/// Unique t in [1,inf) with g(t) = y, for y >= 0.
double variation_inverse_upper(double y, double tol = 1e-12);

}  // namespace possets
