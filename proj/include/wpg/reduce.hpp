#pragma once

// Exact reduction of the I3-restricted fixed-point system for |A| = k to a
// polynomial in u = f(z2), its factorization by u^2 - 1, the xi = u + 1/u
// substitution on the palindromic quotient, and the classification of
// solution counts as a function of alpha.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wpg/fields.hpp"
#include "wpg/poly.hpp"

namespace wpg {

// u^{2k} - a u^{2k-1} + a^2 u^{k+1} - a^2 u^{k-1} + a u - 1. Requires k >= 2.
AlphaPoly build_poly12(int k);

// Exact quotient by u^2 - 1; throws VerificationError on a nonzero remainder.
AlphaPoly factor_u2_minus_1(const AlphaPoly& p);

bool is_palindromic(const AlphaPoly& p);
bool is_antipalindromic(const AlphaPoly& p);

// For palindromic p of degree 2m, the degree-m q with u^m q(u + 1/u) = p(u).
// Throws InvalidArgument for odd degree or non-palindromic input.
AlphaPoly xi_substitute(const AlphaPoly& p);

// Checks u^m q(u + 1/u) == p(u) by expanding (u^2 + 1)^i u^{m-i} directly.
bool verify_xi_identity(const AlphaPoly& p, const AlphaPoly& q);

// xi_substitute(factor_u2_minus_1(build_poly12(k))), memoized per k.
const AlphaPoly& xi_polynomial(int k);

FloatPoly evaluate_at(const AlphaPoly& p, double alpha);
RationalPoly evaluate_at(const AlphaPoly& p, const mpq_class& alpha);

// Descending powers, alpha written as `a`: e.g. "xi^4 - a*xi^3 - 3*xi^2 + 2*a*xi + a^2 + 1".
std::string to_canonical(const AlphaPoly& p, std::string_view var = "u");
std::string to_canonical(const IntPoly& p, std::string_view var = "a");

// The xi-polynomial is quadratic in alpha; its two roots as functions of xi.
enum class Branch { lower, upper };

std::string to_string(Branch b);

struct BranchFunction {
  int k;
  Branch branch;
  // Left end of the xi-range studied: sqrt(v0) for k = 5, 2 for k = 6.
  double domain_start;

  double operator()(double xi) const;
};

// Closed forms for k in {5, 6}. Throws InvalidArgument for other k or a
// negative square-root argument.
double branch_eval(int k, Branch branch, double xi);
BranchFunction branch_function(int k, Branch branch);

// Unique root v0 > 4 of v^3 - 8 v^2 + 16 v - 4.
double v_cubic_root();

struct BranchMinimum {
  double xi;
  double alpha;
};

// Minimum of the lower branch over [domain_start, inf): (xi1, alpha_cr) for
// k = 5 and (xi0, alpha_c) for k = 6.
BranchMinimum lower_branch_minimum(int k);

// Roots of the xi-polynomial at fixed alpha on [2, inf).
struct XiRoots {
  std::vector<double> above_two;  // distinct roots xi > 2, ascending
  bool root_at_two = false;
  bool tangency = false;  // some root in (2, inf) is a double root
};

XiRoots xi_roots(int k, double alpha);

struct CriticalConfig {
  double alpha_min = 1.0;
  double alpha_max = 100.0;
  int scan_steps = 20000;
  double tol = 1e-6;
};

struct CriticalAlpha {
  int k = 0;
  bool has_transition = false;
  // Polished value (falls back to the bisection midpoint).
  double alpha = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool polished = false;
  double xi_witness = 0.0;
  bool onset_at_xi_two = false;
  // Lower-branch minimum for k in {5, 6}.
  std::optional<BranchMinimum> branch_check;
};

// Infimum of alpha >= alpha_min at which the xi-polynomial has a root xi > 2:
// scan of the root count, bisection on the first change, then a Newton
// polish on {q = 0, dq/dxi = 0} (or q(2, alpha) = 0 when the root enters
// through xi = 2).
CriticalAlpha critical_alpha(int k, const CriticalConfig& config = {});

struct ClassifiedSolution {
  std::optional<double> xi;  // empty for the translation-invariant u = 1
  double u = 1.0;
  FieldVector h;
  double residual = 0.0;    // ||W(h) - h||_inf
  double z_residual = 0.0;  // system8_residual
};

struct RejectedCandidate {
  double xi = 0.0;
  double u = 0.0;
  double z2 = 0.0;
  std::string reason;
};

struct ClassificationReport {
  double alpha = 0.0;
  int k = 0;
  int n_alpha = 0;    // roots xi > 2
  int N_alpha = 0;    // distinct positive roots u of the degree-2k polynomial
  int wp_count = 0;   // verified weakly periodic, non-periodic solutions
  bool boundary_flag = false;
  bool root_at_two = false;
  bool tangency = false;
  std::vector<ClassifiedSolution> solutions;
  std::vector<RejectedCandidate> rejected;
  double max_residual = 0.0;
};

struct ClassifyConfig {
  double verify_tol = 1e-9;
  double boundary_delta = 1e-6;
  bool check_boundary = true;
};

ClassificationReport classify(double alpha, int k, const ClassifyConfig& config = {});

}  // namespace wpg
