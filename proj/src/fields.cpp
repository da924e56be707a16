#include "wpg/fields.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

namespace wpg {

namespace {

void check_k_card(int k, int card_a) {
  if (k < 1) throw InvalidArgument("tree order k must be >= 1");
  if (card_a < 1 || card_a > k) {
    throw InvalidArgument("|A| must lie in 1..k for the weakly periodic system, got " +
                          std::to_string(card_a));
  }
}

}  // namespace

ModelParams::ModelParams(int k, int card_a, double J, double beta, double theta, double alpha)
    : k_(k), card_a_(card_a), J_(J), beta_(beta), theta_(theta), alpha_(alpha) {}

ModelParams ModelParams::from_coupling(int k, int card_a, double J, double beta) {
  check_k_card(k, card_a);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
  if (!std::isfinite(J)) throw InvalidArgument("J must be finite");
  const double theta = std::tanh(J * beta);
  if (!(std::abs(theta) < 1.0)) throw InvalidArgument("|tanh(J beta)| rounds to 1");
  return ModelParams(k, card_a, J, beta, theta, (1.0 - theta) / (1.0 + theta));
}

ModelParams ModelParams::from_theta(int k, int card_a, double theta) {
  check_k_card(k, card_a);
  if (!(std::abs(theta) < 1.0)) throw InvalidArgument("theta must satisfy |theta| < 1");
  return ModelParams(k, card_a, std::atanh(theta), 1.0, theta, (1.0 - theta) / (1.0 + theta));
}

ModelParams ModelParams::from_alpha(int k, int card_a, double alpha) {
  check_k_card(k, card_a);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
  const double theta = (1.0 - alpha) / (1.0 + alpha);
  if (!(std::abs(theta) < 1.0)) throw InvalidArgument("alpha too extreme: |theta| rounds to 1");
  return ModelParams(k, card_a, std::atanh(theta), 1.0, theta, alpha);
}

ModelParams ModelParams::with_card_a(int card_a) const {
  check_k_card(k_, card_a);
  ModelParams p = *this;
  p.card_a_ = card_a;
  return p;
}

double recursion_f(double h, double theta) {
  if (!(std::abs(theta) < 1.0)) throw InvalidArgument("recursion_f: need |theta| < 1");
  return std::atanh(theta * std::tanh(h));
}

double mobius_f(double z, double alpha) {
  if (!(z > 0.0) || !(alpha > 0.0)) throw InvalidArgument("mobius_f: need z > 0 and alpha > 0");
  return (z + alpha) / (alpha * z + 1.0);
}

FieldVector operator-(const FieldVector& v) {
  return FieldVector{{-v.h[0], -v.h[1], -v.h[2], -v.h[3]}};
}

double max_abs_diff(const FieldVector& a, const FieldVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 4; ++i) m = std::max(m, std::abs(a.h[i] - b.h[i]));
  return m;
}

std::string to_string(InvariantSet s) {
  switch (s) {
    case InvariantSet::none: return "none";
    case InvariantSet::I1: return "I1";
    case InvariantSet::I2: return "I2";
    case InvariantSet::I3: return "I3";
  }
  return "none";
}

InvariantSet parse_invariant_set(const std::string& s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "none") return InvariantSet::none;
  if (t == "i1") return InvariantSet::I1;
  if (t == "i2") return InvariantSet::I2;
  if (t == "i3") return InvariantSet::I3;
  throw InvalidArgument("unknown invariant set '" + s + "' (expected none, I1, I2, I3)");
}

bool in_set(const FieldVector& h, InvariantSet s, double tol) {
  const auto close = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  switch (s) {
    case InvariantSet::none: return true;
    case InvariantSet::I1:
      return close(h.h1(), h.h2()) && close(h.h2(), h.h3()) && close(h.h3(), h.h4());
    case InvariantSet::I2: return close(h.h1(), h.h4()) && close(h.h2(), h.h3());
    case InvariantSet::I3: return close(h.h1(), -h.h4()) && close(h.h2(), -h.h3());
  }
  return false;
}

FieldVector apply_W(const FieldVector& h, const ModelParams& params) {
  const double k = params.k();
  const double a = params.card_a();
  const double t = params.theta();
  const double f1 = recursion_f(h.h1(), t);
  const double f2 = recursion_f(h.h2(), t);
  const double f3 = recursion_f(h.h3(), t);
  const double f4 = recursion_f(h.h4(), t);
  return FieldVector{{
      a * f3 + (k - a) * f1,
      (a - 1.0) * f3 + (k + 1.0 - a) * f1,
      (a - 1.0) * f2 + (k + 1.0 - a) * f4,
      a * f2 + (k - a) * f4,
  }};
}

double fixed_point_residual(const FieldVector& h, const ModelParams& params) {
  return max_abs_diff(apply_W(h, params), h);
}

namespace {

// Coordinates of an invariant set and the embedding into R^4.
struct Reduced {
  InvariantSet set;

  int dim() const {
    switch (set) {
      case InvariantSet::none: return 4;
      case InvariantSet::I1: return 1;
      default: return 2;
    }
  }

  FieldVector embed(const Eigen::VectorXd& x) const {
    switch (set) {
      case InvariantSet::none: return FieldVector{{x[0], x[1], x[2], x[3]}};
      case InvariantSet::I1: return FieldVector{{x[0], x[0], x[0], x[0]}};
      case InvariantSet::I2: return FieldVector{{x[0], x[1], x[1], x[0]}};
      case InvariantSet::I3: return FieldVector{{x[0], x[1], 0.0 - x[1], 0.0 - x[0]}};
    }
    return {};
  }

  Eigen::VectorXd project(const FieldVector& h) const {
    Eigen::VectorXd x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = h.h[static_cast<std::size_t>(i)];
    return x;
  }
};

class ReducedMap {
 public:
  ReducedMap(const ModelParams& params, InvariantSet set) : params_(params), red_{set} {}

  int dim() const { return red_.dim(); }
  const Reduced& reduced() const { return red_; }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
    return red_.project(apply_W(red_.embed(x), params_));
  }

  Eigen::VectorXd defect(const Eigen::VectorXd& x) const { return (*this)(x) - x; }

 private:
  const ModelParams& params_;
  Reduced red_;
};

double inf_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

// Newton on G(x) - x with a central-difference Jacobian and backtracking.
std::optional<Eigen::VectorXd> correct(const ReducedMap& map, Eigen::VectorXd x,
                                       const SearchConfig& cfg) {
  const int n = map.dim();
  Eigen::VectorXd F = map.defect(x);
  double r = inf_norm(F);
  int extra = 0;
  for (int it = 0; it < cfg.corrector_max_iter && r > 0.0; ++it) {
    Eigen::MatrixXd jac(n, n);
    for (int j = 0; j < n; ++j) {
      const double step = 1e-6 * std::max(1.0, std::abs(x[j]));
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      jac.col(j) = (map.defect(xp) - map.defect(xm)) / (2.0 * step);
    }
    const Eigen::VectorXd d = jac.fullPivLu().solve(-F);
    if (!d.allFinite()) break;
    bool accepted = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      const Eigen::VectorXd xn = x + t * d;
      const Eigen::VectorXd Fn = map.defect(xn);
      const double rn = inf_norm(Fn);
      if (rn < r) {
        x = xn;
        F = Fn;
        r = rn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    // Below tolerance: a few more steps while the residual still falls.
    if (r < cfg.corrector_tol && ++extra > 3) break;
    if (r < cfg.corrector_tol) continue;
  }
  if (!(r < cfg.residual_tol)) return std::nullopt;
  return x;
}

struct StartResult {
  std::vector<FieldVector> found;
  bool failed = false;
};

StartResult solve_from(const ReducedMap& map, const Eigen::VectorXd& start,
                       const ModelParams& params, const SearchConfig& cfg) {
  StartResult out;
  const auto keep = [&](const std::optional<Eigen::VectorXd>& x) {
    if (!x) return;
    const FieldVector h = map.reduced().embed(*x);
    if (fixed_point_residual(h, params) < cfg.residual_tol) out.found.push_back(h);
  };
  // Unstable fixed points repel the damped iteration, so the corrector also
  // runs from the raw start.
  keep(correct(map, start, cfg));
  Eigen::VectorXd x = start;
  for (int s = 0; s < cfg.damped_steps; ++s) {
    x = (1.0 - cfg.damping) * x + cfg.damping * map(x);
  }
  keep(correct(map, x, cfg));
  out.failed = out.found.empty();
  return out;
}

std::vector<Eigen::VectorXd> make_starts(int dim, double bound, const SearchConfig& cfg) {
  const int p = std::max(1, cfg.points_per_axis);
  std::vector<double> axis(static_cast<std::size_t>(p), 0.0);
  const double spacing = p > 1 ? 2.0 * bound / (p - 1) : 0.0;
  for (int i = 0; i < p; ++i) axis[static_cast<std::size_t>(i)] = p > 1 ? -bound + i * spacing : 0.0;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(p);
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(total + 1);
  // The origin is always a fixed point; start there exactly so even grids
  // (which skip it) still report it.
  starts.push_back(Eigen::VectorXd::Zero(dim));
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::VectorXd x(dim);
    std::size_t rem = idx;
    for (int d = 0; d < dim; ++d) {
      x[d] = axis[rem % static_cast<std::size_t>(p)] + cfg.jitter * spacing * unit(rng);
      rem /= static_cast<std::size_t>(p);
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

bool lex_less_rounded(const FieldVector& a, const FieldVector& b) {
  for (std::size_t i = 0; i < 4; ++i) {
    const double ra = std::round(a.h[i] * 1e9);
    const double rb = std::round(b.h[i] * 1e9);
    if (ra != rb) return ra < rb;
  }
  return false;
}

}  // namespace

SolveReport fixed_points_W(const ModelParams& params, InvariantSet restrict,
                           const SearchConfig& config, Exec exec) {
  SolveReport report;
  if (params.theta() == 0.0) {
    report.fixed_points.push_back(FieldVector{});
    report.starts = 0;
    return report;
  }
  const ReducedMap map(params, restrict);
  const double bound = params.k() * std::atanh(std::abs(params.theta()));
  const std::vector<Eigen::VectorXd> starts = make_starts(map.dim(), bound, config);
  report.starts = starts.size();

  std::vector<StartResult> results(starts.size());
  const auto n = static_cast<std::ptrdiff_t>(starts.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      results[static_cast<std::size_t>(i)] =
          solve_from(map, starts[static_cast<std::size_t>(i)], params, config);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      results[static_cast<std::size_t>(i)] =
          solve_from(map, starts[static_cast<std::size_t>(i)], params, config);
    }
  }

  struct Candidate {
    FieldVector h;
    double residual;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].failed) report.failed_starts.push_back(i);
    for (const FieldVector& h : results[i].found) candidates.push_back({h, fixed_point_residual(h, params)});
  }
  // Best residual first, so each cluster is represented by its most accurate
  // member. Near a degenerate fixed point Newton stalls around 1e-5 away, and
  // the stalled ends are merged when the residual stays below tolerance on
  // the segment joining them.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.residual < b.residual; });
  auto same_point = [&](const FieldVector& a, const FieldVector& b) {
    const double d = max_abs_diff(a, b);
    if (d < config.dedup_tol) return true;
    if (d >= config.merge_radius) return false;
    for (double t : {0.25, 0.5, 0.75}) {
      FieldVector m;
      for (std::size_t j = 0; j < 4; ++j) m.h[j] = a.h[j] + t * (b.h[j] - a.h[j]);
      if (!(fixed_point_residual(m, params) < config.residual_tol)) return false;
    }
    return true;
  };
  for (const Candidate& c : candidates) {
    const bool seen = std::any_of(report.fixed_points.begin(), report.fixed_points.end(),
                                  [&](const FieldVector& g) { return same_point(g, c.h); });
    if (!seen) report.fixed_points.push_back(c.h);
  }
  std::sort(report.fixed_points.begin(), report.fixed_points.end(), lex_less_rounded);
  return report;
}

std::vector<double> ti_solutions(const ModelParams& params) {
  const double theta = params.theta();
  const double k = params.k();
  std::vector<double> out{0.0};
  if (theta == 0.0) return out;
  const auto g = [&](double h) { return h - k * recursion_f(h, theta); };
  // Every solution lies in |h| <= k artanh|theta|; g is odd, so scan h > 0 and mirror.
  const double bound = k * std::atanh(std::abs(theta));
  constexpr int kGrid = 400;
  std::vector<double> grid;
  grid.reserve(2 * kGrid);
  for (int i = 0; i < kGrid; ++i) grid.push_back(bound * std::pow(10.0, -8.0 + 8.0 * i / kGrid));
  for (int i = 1; i <= kGrid; ++i) grid.push_back(bound * (1.0 + static_cast<double>(i) / kGrid));
  std::sort(grid.begin(), grid.end());

  std::vector<double> positive;
  boost::math::tools::eps_tolerance<double> tol(52);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    const double ga = g(a), gb = g(b);
    if (ga == 0.0) {
      positive.push_back(a);
    } else if ((ga < 0.0) != (gb < 0.0) && gb != 0.0) {
      std::uintmax_t iters = 200;
      const auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
      positive.push_back(0.5 * (lo + hi));
    }
  }
  for (double p : positive) {
    out.push_back(p);
    out.push_back(-p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ZVector h_to_z(const FieldVector& h) {
  ZVector z{};
  for (std::size_t i = 0; i < 4; ++i) z[i] = std::exp(2.0 * h.h[i]);
  return z;
}

FieldVector z_to_h(const ZVector& z) {
  FieldVector h;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(z[i] > 0.0)) throw InvalidArgument("z_to_h: z-coordinates must be positive");
    h.h[i] = 0.5 * std::log(z[i]);
  }
  return h;
}

double system8_residual(const ZVector& z, const ModelParams& params) {
  const double a = params.alpha();
  const int k = params.k();
  const int m = params.card_a();
  const double F1 = mobius_f(z[0], a), F2 = mobius_f(z[1], a);
  const double F3 = mobius_f(z[2], a), F4 = mobius_f(z[3], a);
  const ZVector rhs{
      std::pow(F3, m) * std::pow(F1, k - m),
      std::pow(F3, m - 1) * std::pow(F1, k + 1 - m),
      std::pow(F2, m - 1) * std::pow(F4, k + 1 - m),
      std::pow(F2, m) * std::pow(F4, k - m),
  };
  double r = 0.0;
  for (std::size_t i = 0; i < 4; ++i) r = std::max(r, std::abs(z[i] - rhs[i]));
  return r;
}

}  // namespace wpg
