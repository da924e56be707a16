#pragma once

// Finite-volume Gibbs measures on the ball V_n by exhaustive enumeration and
// the compatibility check between consecutive levels.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wpg/error.hpp"
#include "wpg/fields.hpp"
#include "wpg/tree.hpp"

namespace wpg {

// Spins in the vertex order of a Ball (shortlex), each -1 or +1.
struct Configuration {
  std::vector<int> spins;

  // Bit i of `mask` set means vertex i carries spin +1.
  static Configuration from_mask(std::uint64_t mask, std::size_t size);
};

inline constexpr std::size_t kDefaultConfigurationCap = std::size_t{1} << 22;

class FiniteMeasure {
 public:
  FiniteMeasure(Ball ball, std::vector<double> weights, double log_partition);

  int level() const { return ball_.n; }
  const Ball& ball() const { return ball_; }
  // Probability of each configuration, indexed by spin mask.
  const std::vector<double>& weights() const { return weights_; }
  double weight(const Configuration& sigma) const;
  // log Z_n.
  double log_partition() const { return log_z_; }

 private:
  Ball ball_;
  std::vector<double> weights_;
  double log_z_;
};

// -J * sum over L_n of sigma(x) sigma(y). Throws InvalidArgument when the
// configuration does not cover V_n or holds a spin other than +-1.
double hamiltonian(const Ball& ball, const Configuration& sigma, const ModelParams& params);

// mu_n(sigma) proportional to exp(-beta H(sigma) + sum_{x in W_n} h_x sigma(x)),
// with boundary_field aligned with ball.boundary. Throws CapExceeded when
// 2^|V_n| exceeds `cap`.
FiniteMeasure finite_measure(int n, const std::vector<double>& boundary_field, const ModelParams& params,
                             Exec exec = Exec::parallel, std::size_t cap = kDefaultConfigurationCap);

// Weakly periodic boundary field on W_n: h_{field_index(x)}; at n = 0 the
// root takes sum over its k+1 successors of f(h_y, theta).
std::vector<double> weakly_periodic_boundary(const Ball& ball, const FieldVector& h, const SubgroupSpec& sub,
                                             const ModelParams& params);

// max over sigma_{n-1} of |sum_{sigma^(n)} mu_n(sigma_{n-1}, sigma^(n)) - mu_{n-1}(sigma_{n-1})|.
double compatibility_defect(int n, const FieldVector& h, const ModelParams& params, const SubgroupSpec& sub,
                            Exec exec = Exec::parallel, std::size_t cap = kDefaultConfigurationCap);

// Expectation of sigma(x) under mu.
double magnetization(const FiniteMeasure& mu, const TreeWord& x);

}  // namespace wpg
