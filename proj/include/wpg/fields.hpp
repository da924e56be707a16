#pragma once

// Boundary-field recursion for the Ising model on the Cayley tree: the map
// f(h, theta) = artanh(theta tanh h), the operator W acting on weakly periodic
// quadruples (h1, h2, h3, h4), its invariant sets, and a multistart solver for
// its fixed points.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpg/error.hpp"
#include "wpg/tree.hpp"

namespace wpg {

// (k, J, beta) plus the derived theta = tanh(J beta) and
// alpha = (1 - theta) / (1 + theta). Built from theta or alpha alone, the
// convention beta = 1, J = artanh(theta) is stored; only J*beta enters any
// formula.
class ModelParams {
 public:
  static ModelParams from_coupling(int k, int card_a, double J, double beta);
  static ModelParams from_theta(int k, int card_a, double theta);
  static ModelParams from_alpha(int k, int card_a, double alpha);

  int k() const { return k_; }
  int card_a() const { return card_a_; }
  double J() const { return J_; }
  double beta() const { return beta_; }
  double theta() const { return theta_; }
  double alpha() const { return alpha_; }
  // J * beta.
  double coupling() const { return J_ * beta_; }

  // Same physics with a different |A|.
  ModelParams with_card_a(int card_a) const;

 private:
  ModelParams(int k, int card_a, double J, double beta, double theta, double alpha);

  int k_;
  int card_a_;
  double J_;
  double beta_;
  double theta_;
  double alpha_;
};

double recursion_f(double h, double theta);

// (z + alpha) / (alpha z + 1): the map f in the variables z = exp(2h).
double mobius_f(double z, double alpha);

struct FieldVector {
  std::array<double, 4> h{};

  double& operator[](FieldIndex i) { return h[static_cast<std::size_t>(to_int(i) - 1)]; }
  double operator[](FieldIndex i) const { return h[static_cast<std::size_t>(to_int(i) - 1)]; }
  double h1() const { return h[0]; }
  double h2() const { return h[1]; }
  double h3() const { return h[2]; }
  double h4() const { return h[3]; }

  friend bool operator==(const FieldVector&, const FieldVector&) = default;
};

FieldVector operator-(const FieldVector& v);
double max_abs_diff(const FieldVector& a, const FieldVector& b);

enum class InvariantSet { none, I1, I2, I3 };

std::string to_string(InvariantSet s);
// Accepts none/I1/I2/I3 (case-insensitive); throws InvalidArgument otherwise.
InvariantSet parse_invariant_set(const std::string& s);

inline constexpr double kMembershipTol = 1e-9;

bool in_set(const FieldVector& h, InvariantSet s, double tol = kMembershipTol);

FieldVector apply_W(const FieldVector& h, const ModelParams& params);

// ||W(h) - h||_inf.
double fixed_point_residual(const FieldVector& h, const ModelParams& params);

struct SearchConfig {
  int points_per_axis = 9;
  double damping = 0.5;
  int damped_steps = 60;
  double corrector_tol = 1e-12;
  int corrector_max_iter = 200;
  double residual_tol = 1e-10;
  double dedup_tol = 1e-8;
  // Points closer than this are also merged when the residual stays below
  // residual_tol on the segment between them (degenerate fixed points).
  double merge_radius = 1e-3;
  // Uniform jitter of every grid start, as a fraction of the grid spacing.
  double jitter = 0.1;
  std::uint64_t seed = 0;
};

struct SolveReport {
  // Distinct fixed points, sorted lexicographically on rounded coordinates.
  std::vector<FieldVector> fixed_points;
  std::size_t starts = 0;
  // Starts (by index) where neither corrector run met the residual tolerance.
  std::vector<std::size_t> failed_starts;
};

// Fixed points of W, optionally restricted to an invariant set (the search
// then runs in the reduced coordinates, so the identities hold exactly).
SolveReport fixed_points_W(const ModelParams& params, InvariantSet restrict,
                           const SearchConfig& config = {}, Exec exec = Exec::parallel);

// Sorted real solutions of h = k f(h, theta).
std::vector<double> ti_solutions(const ModelParams& params);

using ZVector = std::array<double, 4>;

ZVector h_to_z(const FieldVector& h);
// Throws InvalidArgument for a non-positive component.
FieldVector z_to_h(const ZVector& z);

// Max |z_i - rhs_i| of the fixed-point system in z-coordinates.
double system8_residual(const ZVector& z, const ModelParams& params);

}  // namespace wpg
