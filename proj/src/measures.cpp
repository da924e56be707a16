#include "wpg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wpg {

namespace {

// Fixed block count for the normalization sum so the parallel reduction order
// does not depend on the thread count.
constexpr std::size_t kSumBlocks = 256;

struct Energy {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<double> field;  // per vertex; zero off the boundary
  double coupling;            // J * beta

  double log_weight(std::uint64_t mask) const {
    double bond = 0.0;
    for (const auto& [a, b] : edges) bond += (((mask >> a) ^ (mask >> b)) & 1U) ? -1.0 : 1.0;
    double ext = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
      if (field[i] != 0.0) ext += ((mask >> i) & 1U) ? field[i] : -field[i];
    }
    return coupling * bond + ext;
  }
};

std::vector<double> log_weights_serial(const Energy& e, std::size_t count) {
  std::vector<double> lw(count);
  for (std::size_t m = 0; m < count; ++m) lw[m] = e.log_weight(m);
  return lw;
}

std::vector<double> log_weights_parallel(const Energy& e, std::size_t count) {
  std::vector<double> lw(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < n; ++m) lw[static_cast<std::size_t>(m)] = e.log_weight(static_cast<std::uint64_t>(m));
  return lw;
}

double block_sum(const std::vector<double>& v, Exec exec) {
  const std::size_t blocks = std::min(kSumBlocks, v.size());
  const std::size_t per = (v.size() + blocks - 1) / blocks;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
  auto body = [&](std::ptrdiff_t b) {
    const std::size_t lo = static_cast<std::size_t>(b) * per;
    const std::size_t hi = std::min(v.size(), lo + per);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    partial[static_cast<std::size_t>(b)] = s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b) body(b);
  } else {
    for (std::ptrdiff_t b = 0; b < nb; ++b) body(b);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

Configuration Configuration::from_mask(std::uint64_t mask, std::size_t size) {
  Configuration c;
  c.spins.resize(size);
  for (std::size_t i = 0; i < size; ++i) c.spins[i] = ((mask >> i) & 1U) ? 1 : -1;
  return c;
}

FiniteMeasure::FiniteMeasure(Ball ball, std::vector<double> weights, double log_partition)
    : ball_(std::move(ball)), weights_(std::move(weights)), log_z_(log_partition) {}

double FiniteMeasure::weight(const Configuration& sigma) const {
  if (sigma.spins.size() != ball_.vertices.size()) {
    throw InvalidArgument("configuration does not cover V_" + std::to_string(ball_.n));
  }
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < sigma.spins.size(); ++i) {
    if (sigma.spins[i] == 1) {
      mask |= std::uint64_t{1} << i;
    } else if (sigma.spins[i] != -1) {
      throw InvalidArgument("spins must be -1 or +1");
    }
  }
  return weights_[mask];
}

double hamiltonian(const Ball& ball, const Configuration& sigma, const ModelParams& params) {
  if (sigma.spins.size() != ball.vertices.size()) {
    throw InvalidArgument("configuration does not cover V_" + std::to_string(ball.n));
  }
  for (int s : sigma.spins) {
    if (s != 1 && s != -1) throw InvalidArgument("spins must be -1 or +1");
  }
  double sum = 0.0;
  for (const auto& [a, b] : ball.edges) sum += sigma.spins[a] * sigma.spins[b];
  return -params.J() * sum;
}

FiniteMeasure finite_measure(int n, const std::vector<double>& boundary_field, const ModelParams& params,
                             Exec exec, std::size_t cap) {
  Ball ball = enumerate_ball(n, params.k());
  const std::size_t nv = ball.vertices.size();
  if (nv >= 63 || (std::size_t{1} << nv) > cap) {
    throw CapExceeded("2^" + std::to_string(nv) + " configurations exceed the enumeration cap of " +
                      std::to_string(cap));
  }
  if (boundary_field.size() != ball.boundary.size()) {
    throw InvalidArgument("boundary field must have one value per vertex of W_" + std::to_string(n));
  }
  Energy e;
  e.edges = ball.edges;
  e.coupling = params.coupling();
  e.field.assign(nv, 0.0);
  for (std::size_t i = 0; i < boundary_field.size(); ++i) {
    if (!std::isfinite(boundary_field[i])) throw InvalidArgument("boundary field must be finite");
    e.field[ball.boundary_offset + i] = boundary_field[i];
  }
  const std::size_t count = std::size_t{1} << nv;
  std::vector<double> w = exec == Exec::parallel ? log_weights_parallel(e, count) : log_weights_serial(e, count);

  // Log-domain normalization.
  const double shift = *std::max_element(w.begin(), w.end());
  const auto nw = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < nw; ++m) w[static_cast<std::size_t>(m)] = std::exp(w[static_cast<std::size_t>(m)] - shift);
  } else {
    for (double& x : w) x = std::exp(x - shift);
  }
  const double z = block_sum(w, exec);
  const double inv = 1.0 / z;
  for (double& x : w) x *= inv;
  return FiniteMeasure(std::move(ball), std::move(w), shift + std::log(z));
}

std::vector<double> weakly_periodic_boundary(const Ball& ball, const FieldVector& h, const SubgroupSpec& sub,
                                             const ModelParams& params) {
  if (sub.order() != params.k() || ball.k != params.k()) {
    throw InvalidArgument("tree order mismatch between ball, subgroup and parameters");
  }
  std::vector<double> out;
  out.reserve(ball.boundary.size());
  if (ball.n == 0) {
    double root = 0.0;
    for (const TreeWord& y : successors(TreeWord::root(ball.k))) {
      root += recursion_f(h[field_index(y, sub)], params.theta());
    }
    out.push_back(root);
    return out;
  }
  for (const TreeWord& x : ball.boundary) out.push_back(h[field_index(x, sub)]);
  return out;
}

double compatibility_defect(int n, const FieldVector& h, const ModelParams& params, const SubgroupSpec& sub,
                            Exec exec, std::size_t cap) {
  if (n < 1) throw InvalidArgument("compatibility_defect: need n >= 1");
  if (sub.cardinality() != params.card_a()) {
    throw InvalidArgument("compatibility_defect: |A| of the subgroup differs from the parameters");
  }
  const Ball outer_ball = enumerate_ball(n, params.k());
  const Ball inner_ball = enumerate_ball(n - 1, params.k());
  const FiniteMeasure outer =
      finite_measure(n, weakly_periodic_boundary(outer_ball, h, sub, params), params, exec, cap);
  const FiniteMeasure inner =
      finite_measure(n - 1, weakly_periodic_boundary(inner_ball, h, sub, params), params, exec, cap);

  // V_{n-1} is a prefix of V_n in shortlex order, so the inner configuration
  // is the low bits of the outer mask.
  const std::size_t inner_count = inner.weights().size();
  const std::uint64_t low = inner_count - 1;
  std::vector<double> marginal(inner_count, 0.0);
  const std::vector<double>& w = outer.weights();
  for (std::size_t m = 0; m < w.size(); ++m) marginal[m & low] += w[m];
  double defect = 0.0;
  for (std::size_t i = 0; i < inner_count; ++i) {
    defect = std::max(defect, std::abs(marginal[i] - inner.weights()[i]));
  }
  return defect;
}

double magnetization(const FiniteMeasure& mu, const TreeWord& x) {
  const std::size_t idx = mu.ball().index_of(x);
  const std::vector<double>& w = mu.weights();
  double m = 0.0;
  for (std::size_t mask = 0; mask < w.size(); ++mask) m += ((mask >> idx) & 1U) ? w[mask] : -w[mask];
  return m;
}

}  // namespace wpg
