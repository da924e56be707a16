#pragma once

// Positive-root machinery: Descartes' sign rule, exact Sturm counting over
// rational intervals, and bracketed isolation with bisection + Newton polish.

#include <cstddef>
#include <optional>
#include <vector>

#include "wpg/poly.hpp"

namespace wpg {

// Interval (lo, hi]; an empty `hi` means +infinity.
struct RationalInterval {
  mpq_class lo;
  std::optional<mpq_class> hi;
};

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  // Best estimate; always inside [lo, hi].
  double root = 0.0;
  int multiplicity_hint = 1;
  // False when the refinement hit its iteration cap.
  bool polished = true;
};

inline constexpr int kDefaultDegreeCap = 64;

// Sign changes in the nonzero coefficient sequence. Throws InvalidArgument
// for the zero polynomial.
int descartes_bound(const RationalPoly& p);
int descartes_bound(const FloatPoly& p);

// 1 + max |c_i / c_n|: every root has modulus below it.
mpq_class cauchy_bound(const RationalPoly& p);
double cauchy_bound(const FloatPoly& p);

RationalPoly poly_gcd(const RationalPoly& a, const RationalPoly& b);
// p / gcd(p, p'), normalized monic.
RationalPoly square_free_part(const RationalPoly& p);

// Sturm chain of a square-free polynomial, each member scaled by a positive
// rational to a primitive integer polynomial.
std::vector<RationalPoly> sturm_sequence(const RationalPoly& p);

// Exact number of distinct real roots in (lo, hi].
int sturm_count(const RationalPoly& p, const RationalInterval& interval);

// Brackets of width < tol around every distinct root in (lo, hi], ordered
// ascending; the bracket count equals sturm_count.
std::vector<RootBracket> isolate_and_refine(const RationalPoly& p, const RationalInterval& interval,
                                            double tol);

struct FloatIsolationConfig {
  double tol = 1e-13;
  // A local extremum c with |p(c)| <= tangency_rel * sum |a_i| |c|^i is
  // reported as an even-multiplicity root.
  double tangency_rel = 1e-12;
  int max_iter = 400;
};

// Roots of a floating polynomial in the closed interval [lo, hi] (hi empty:
// Cauchy bound). Separates roots with the critical points of p found
// recursively through its derivatives.
std::vector<RootBracket> isolate_and_refine(const FloatPoly& p, double lo, std::optional<double> hi,
                                            const FloatIsolationConfig& config = {});

RationalPoly to_rational(const FloatPoly& p);
FloatPoly to_float(const RationalPoly& p);

}  // namespace wpg
