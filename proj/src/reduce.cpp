#include "wpg/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "wpg/error.hpp"
#include "wpg/roots.hpp"

namespace wpg {

namespace {

const IntPoly kAlpha{mpz_class(0), mpz_class(1)};

IntPoly int_const(long c) { return IntPoly::constant(mpz_class(c)); }

double eval_int_poly(const IntPoly& p, double x) {
  double acc = 0.0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

AlphaPoly alpha_derivative(const AlphaPoly& p) {
  return p.map([](const IntPoly& c) { return c.derivative(); });
}

double eval2(const AlphaPoly& p, double xi, double alpha) { return evaluate_at(p, alpha)(xi); }

// Monomial body without sign, e.g. "3*a^2", "a", "7"; empty string for a
// bare unit coefficient on a non-constant term.
std::string monomial_body(const mpz_class& abs_coeff, std::string_view var, std::size_t power,
                          bool show_unit) {
  std::ostringstream os;
  const bool unit = abs_coeff == 1;
  if (!unit || power == 0 || show_unit) os << abs_coeff.get_str();
  if (power > 0) {
    if (!unit || show_unit) os << '*';
    os << var;
    if (power > 1) os << '^' << power;
  }
  return os.str();
}

}  // namespace

AlphaPoly build_poly12(int k) {
  if (k < 2) throw InvalidArgument("build_poly12: need k >= 2");
  const std::size_t n = static_cast<std::size_t>(2 * k);
  std::vector<IntPoly> c(n + 1);
  const IntPoly a2 = kAlpha * kAlpha;
  c[n] += int_const(1);
  c[n - 1] -= kAlpha;
  c[static_cast<std::size_t>(k + 1)] += a2;
  c[static_cast<std::size_t>(k - 1)] -= a2;
  c[1] += kAlpha;
  c[0] -= int_const(1);
  return AlphaPoly(std::move(c));
}

AlphaPoly factor_u2_minus_1(const AlphaPoly& p) {
  const AlphaPoly divisor{int_const(-1), IntPoly{}, int_const(1)};
  auto [q, r] = divmod_monic(p, divisor);
  if (!r.is_zero()) {
    throw VerificationError("division by u^2 - 1 left remainder " + to_canonical(r));
  }
  return q;
}

bool is_palindromic(const AlphaPoly& p) {
  const int n = p.degree();
  for (int i = 0; i <= n; ++i) {
    if (!(p.coeff(static_cast<std::size_t>(i)) == p.coeff(static_cast<std::size_t>(n - i)))) return false;
  }
  return true;
}

bool is_antipalindromic(const AlphaPoly& p) {
  const int n = p.degree();
  for (int i = 0; i <= n; ++i) {
    if (!(p.coeff(static_cast<std::size_t>(i)) == -p.coeff(static_cast<std::size_t>(n - i)))) return false;
  }
  return true;
}

AlphaPoly xi_substitute(const AlphaPoly& p) {
  if (p.is_zero() || p.degree() % 2 != 0) {
    throw InvalidArgument("xi_substitute: need a polynomial of even degree");
  }
  if (!is_palindromic(p)) throw InvalidArgument("xi_substitute: polynomial is not palindromic");
  const std::size_t m = static_cast<std::size_t>(p.degree() / 2);
  // p(u) / u^m = c_m + sum_j c_{m+j} (u^j + u^-j), and u^j + u^-j = T_j(xi)
  // with T_0 = 2, T_1 = xi, T_{j+1} = xi T_j - T_{j-1}.
  const AlphaPoly xi{IntPoly{}, int_const(1)};
  AlphaPoly t_prev = AlphaPoly::constant(int_const(2));
  AlphaPoly t_cur = xi;
  AlphaPoly q = AlphaPoly::constant(p.coeff(m));
  for (std::size_t j = 1; j <= m; ++j) {
    q += p.coeff(m + j) * t_cur;
    AlphaPoly t_next = xi * t_cur - t_prev;
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return q;
}

bool verify_xi_identity(const AlphaPoly& p, const AlphaPoly& q) {
  const int m = q.degree();
  if (m < 0 || p.degree() != 2 * m) return false;
  const AlphaPoly u2p1{int_const(1), IntPoly{}, int_const(1)};
  AlphaPoly acc;
  AlphaPoly power = AlphaPoly::constant(int_const(1));
  for (int i = 0; i <= m; ++i) {
    const AlphaPoly shift = AlphaPoly::monomial(int_const(1), static_cast<std::size_t>(m - i));
    acc += q.coeff(static_cast<std::size_t>(i)) * (power * shift);
    power = power * u2p1;
  }
  return acc == p;
}

const AlphaPoly& xi_polynomial(int k) {
  static std::mutex mu;
  static std::map<int, AlphaPoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) {
    it = cache.emplace(k, xi_substitute(factor_u2_minus_1(build_poly12(k)))).first;
  }
  return it->second;
}

FloatPoly evaluate_at(const AlphaPoly& p, double alpha) {
  return p.map([alpha](const IntPoly& c) { return eval_int_poly(c, alpha); });
}

RationalPoly evaluate_at(const AlphaPoly& p, const mpq_class& alpha) {
  return p.map([&alpha](const IntPoly& c) {
    mpq_class acc = 0;
    for (auto it = c.coeffs().rbegin(); it != c.coeffs().rend(); ++it) acc = acc * alpha + mpq_class(*it);
    return acc;
  });
}

std::string to_canonical(const IntPoly& p, std::string_view var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const mpz_class& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    const mpz_class mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    os << monomial_body(mag, var, static_cast<std::size_t>(i), false);
    first = false;
  }
  return os.str();
}

std::string to_canonical(const AlphaPoly& p, std::string_view var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const IntPoly& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    const auto power = static_cast<std::size_t>(i);
    std::string powstr;
    if (power > 0) {
      powstr = std::string(var);
      if (power > 1) powstr += "^" + std::to_string(power);
    }
    // Count nonzero alpha-monomials in the coefficient.
    int terms = 0;
    int only = -1;
    for (int j = 0; j <= c.degree(); ++j) {
      if (sgn(c.coeffs()[static_cast<std::size_t>(j)]) != 0) {
        ++terms;
        only = j;
      }
    }
    if (terms == 1) {
      const mpz_class& m = c.coeffs()[static_cast<std::size_t>(only)];
      const bool negative = sgn(m) < 0;
      if (first) {
        if (negative) os << '-';
      } else {
        os << (negative ? " - " : " + ");
      }
      std::string body = monomial_body(abs(m), "a", static_cast<std::size_t>(only), false);
      if (power > 0 && only == 0 && abs(m) == 1) body.clear();
      if (power == 0) {
        os << body;
      } else if (body.empty()) {
        os << powstr;
      } else {
        os << body << '*' << powstr;
      }
    } else if (power == 0) {
      // Trailing constant: spell out the alpha-polynomial without parentheses.
      const bool negative = sgn(c.leading()) < 0;
      if (first) {
        os << to_canonical(c, "a");
      } else {
        os << (negative ? " - " : " + ") << to_canonical(negative ? -c : c, "a");
      }
    } else {
      if (!first) os << " + ";
      os << '(' << to_canonical(c, "a") << ')' << '*' << powstr;
    }
    first = false;
  }
  return os.str();
}

std::string to_string(Branch b) { return b == Branch::lower ? "lower" : "upper"; }

double v_cubic_root() {
  const auto phi = [](double v) { return ((v - 8.0) * v + 16.0) * v - 4.0; };
  double lo = 4.0, hi = 8.0;  // phi(4) = -4 < 0 < phi(8) = 124
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double branch_eval(int k, Branch branch, double xi) {
  double center = 0.0;
  double disc = 0.0;
  double scale = 1.0;
  if (k == 5) {
    const double x2 = xi * xi;
    center = xi * x2 - 2.0 * xi;
    disc = ((x2 - 8.0) * x2 + 16.0) * x2 - 4.0;
    scale = x2 * x2 * x2;
  } else if (k == 6) {
    const double x2 = xi * xi;
    center = x2 * x2 - 3.0 * x2 + 1.0;
    disc = xi * (x2 - 1.0) * (x2 - 3.0) * (xi - 2.0) * (x2 + 2.0 * xi + 2.0) + 1.0;
    scale = std::max(1.0, std::abs(xi) * x2 * x2 * x2 * 2.0);
  } else {
    throw InvalidArgument("branch_eval: closed-form branches exist for k = 5 and k = 6 only");
  }
  if (disc < 0.0) {
    if (disc < -1e-13 * scale) {
      throw InvalidArgument("branch_eval: negative square-root argument at xi = " + std::to_string(xi));
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  return branch == Branch::lower ? 0.5 * (center - root) : 0.5 * (center + root);
}

double BranchFunction::operator()(double xi) const { return branch_eval(k, branch, xi); }

BranchFunction branch_function(int k, Branch branch) {
  if (k == 5) return BranchFunction{5, branch, std::sqrt(v_cubic_root())};
  if (k == 6) return BranchFunction{6, branch, 2.0};
  throw InvalidArgument("branch_function: closed-form branches exist for k = 5 and k = 6 only");
}

BranchMinimum lower_branch_minimum(int k) {
  const BranchFunction f = branch_function(k, Branch::lower);
  std::uintmax_t iters = 500;
  const auto [xi, alpha] =
      boost::math::tools::brent_find_minima(f, f.domain_start, f.domain_start + 8.0, 52, iters);
  return BranchMinimum{xi, alpha};
}

constexpr double kTangencyRel = 1e-12;

XiRoots xi_roots(int k, double alpha) {
  const FloatPoly q = evaluate_at(xi_polynomial(k), alpha);
  XiRoots out;
  for (const RootBracket& b : isolate_and_refine(q, 2.0, std::nullopt)) {
    if (b.root <= 2.0 + 1e-9) {
      out.root_at_two = true;
      continue;
    }
    // Two roots whose midpoint value is at rounding level are one double root
    // split by rounding (alpha at, or within rounding of, a tangency).
    if (!out.above_two.empty()) {
      const double mid = 0.5 * (out.above_two.back() + b.root);
      double scale = 0.0, power = 1.0;
      for (double c : q.coeffs()) {
        scale += std::abs(c) * power;
        power *= mid;
      }
      if (std::abs(q(mid)) <= kTangencyRel * scale) {
        out.above_two.back() = mid;
        out.tangency = true;
        continue;
      }
    }
    out.above_two.push_back(b.root);
    if (b.multiplicity_hint >= 2) out.tangency = true;
  }
  return out;
}

namespace {

int xi_count(int k, double alpha) { return static_cast<int>(xi_roots(k, alpha).above_two.size()); }

// Newton on {q = 0, q_xi = 0} in (xi, alpha).
std::optional<std::pair<double, double>> polish_tangency(int k, double xi, double alpha) {
  const AlphaPoly& q = xi_polynomial(k);
  const AlphaPoly qx = q.derivative();
  const AlphaPoly qa = alpha_derivative(q);
  const AlphaPoly qxx = qx.derivative();
  const AlphaPoly qxa = alpha_derivative(qx);
  for (int it = 0; it < 60; ++it) {
    const double f1 = eval2(q, xi, alpha);
    const double f2 = eval2(qx, xi, alpha);
    const double a11 = eval2(qx, xi, alpha), a12 = eval2(qa, xi, alpha);
    const double a21 = eval2(qxx, xi, alpha), a22 = eval2(qxa, xi, alpha);
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double dxi = (-f1 * a22 + f2 * a12) / det;
    const double da = (-a11 * f2 + a21 * f1) / det;
    xi += dxi;
    alpha += da;
    if (std::abs(dxi) < 1e-15 * std::max(1.0, std::abs(xi)) &&
        std::abs(da) < 1e-15 * std::max(1.0, std::abs(alpha))) {
      break;
    }
  }
  if (!std::isfinite(xi) || !std::isfinite(alpha)) return std::nullopt;
  return std::make_pair(xi, alpha);
}

std::optional<double> polish_at_two(int k, double alpha) {
  const AlphaPoly& q = xi_polynomial(k);
  const AlphaPoly qa = alpha_derivative(q);
  for (int it = 0; it < 60; ++it) {
    const double f = eval2(q, 2.0, alpha);
    const double d = eval2(qa, 2.0, alpha);
    if (d == 0.0) return std::nullopt;
    const double step = f / d;
    alpha -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(alpha))) break;
  }
  if (!std::isfinite(alpha)) return std::nullopt;
  return alpha;
}

}  // namespace

CriticalAlpha critical_alpha(int k, const CriticalConfig& config) {
  if (k < 2) throw InvalidArgument("critical_alpha: need k >= 2");
  if (!(config.alpha_max > config.alpha_min) || config.alpha_min <= 0.0 || config.scan_steps < 1) {
    throw InvalidArgument("critical_alpha: invalid scan bounds");
  }
  CriticalAlpha out;
  out.k = k;
  if (k == 5 || k == 6) out.branch_check = lower_branch_minimum(k);

  const double span = config.alpha_max - config.alpha_min;
  double prev = config.alpha_min;
  if (xi_count(k, prev) > 0) {
    out.has_transition = true;
    out.alpha = out.bracket_lo = out.bracket_hi = prev;
    return out;
  }
  for (int i = 1; i <= config.scan_steps; ++i) {
    const double a = config.alpha_min + span * i / config.scan_steps;
    if (xi_count(k, a) == 0) {
      prev = a;
      continue;
    }
    double lo = prev, hi = a;
    while (hi - lo > config.tol) {
      const double mid = 0.5 * (lo + hi);
      if (xi_count(k, mid) > 0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.has_transition = true;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.alpha = 0.5 * (lo + hi);
    const XiRoots roots = xi_roots(k, hi);
    const double first = roots.above_two.front();
    out.onset_at_xi_two = first < 2.0 + 1e-3;
    if (out.onset_at_xi_two) {
      out.xi_witness = 2.0;
      if (auto p = polish_at_two(k, out.alpha); p && std::abs(*p - out.alpha) < 10 * config.tol) {
        out.alpha = *p;
        out.polished = true;
      }
    } else {
      // Roots are born in pairs at a tangency; start from their midpoint.
      out.xi_witness = roots.above_two.size() >= 2 ? 0.5 * (roots.above_two[0] + roots.above_two[1]) : first;
      if (auto p = polish_tangency(k, out.xi_witness, out.alpha);
          p && std::abs(p->second - out.alpha) < 10 * config.tol && p->first > 2.0) {
        out.xi_witness = p->first;
        out.alpha = p->second;
        out.polished = true;
      }
    }
    return out;
  }
  return out;
}

namespace {

struct Backsub {
  std::optional<ClassifiedSolution> solution;
  std::optional<RejectedCandidate> rejected;
};

// Newton on the I3-reduced system h1 = -k f(h2), h2 = f(h1) - (k-1) f(h2).
// When alpha u - 1 is tiny, z2 inherits the rounding of u; a few steps
// recover full precision. Returns the input if Newton moves it by more than
// 1e-6 relative, so a polish never swaps one solution for another.
FieldVector polish_i3(const FieldVector& start, const ModelParams& params) {
  const double th = params.theta();
  const int k = params.k();
  auto f = [&](double x) { return recursion_f(x, th); };
  auto df = [&](double x) {
    const double t = std::tanh(x);
    return th * (1.0 - t * t) / (1.0 - th * th * t * t);
  };
  double x0 = start.h1(), x1 = start.h2();
  auto res = [&](double a, double b) {
    return std::max(std::abs(-k * f(b) - a), std::abs(f(a) - (k - 1) * f(b) - b));
  };
  double r = res(x0, x1);
  for (int it = 0; it < 30 && r > 0.0; ++it) {
    const double g0 = -k * f(x1) - x0;
    const double g1 = f(x0) - (k - 1) * f(x1) - x1;
    const double a = -1.0, b = -k * df(x1);
    const double c = df(x0), d = -(k - 1) * df(x1) - 1.0;
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double n0 = x0 - (d * g0 - b * g1) / det;
    const double n1 = x1 - (a * g1 - c * g0) / det;
    const double nr = res(n0, n1);
    if (!(nr < r)) break;
    x0 = n0;
    x1 = n1;
    r = nr;
  }
  const double scale = std::max({1.0, std::abs(start.h1()), std::abs(start.h2())});
  if (std::abs(x0 - start.h1()) > 1e-6 * scale || std::abs(x1 - start.h2()) > 1e-6 * scale) return start;
  return FieldVector{{x0, x1, -x1, -x0}};
}

struct ExtendedU {
  double u;
  double z2;
};

// For large k and alpha the small root u sits within rounding of 1/alpha and
// alpha u - 1 cancels in double precision. Refine xi on the exact
// xi-polynomial at 256 bits and form u and z2 there.
ExtendedU extended_u(int k, double alpha, double xi, bool small) {
  constexpr mp_bitcnt_t kBits = 256;
  const RationalPoly q = evaluate_at(xi_polynomial(k), mpq_class(alpha));
  std::vector<mpf_class> c;
  for (const mpq_class& a : q.coeffs()) c.emplace_back(a, kBits);
  mpf_class x(xi, kBits);
  const mpf_class eps = mpf_class(std::ldexp(1.0, -230), kBits);
  for (int it = 0; it < 200; ++it) {
    mpf_class v(0, kBits), d(0, kBits);
    for (auto i = c.size(); i-- > 0;) {
      d = d * x + v;
      v = v * x + c[i];
    }
    if (sgn(d) == 0) break;
    mpf_class step(v / d, kBits);
    x -= step;
    if (abs(step) <= eps * abs(x)) break;
  }
  mpf_class disc(x * x - 4, kBits);
  if (sgn(disc) < 0) disc = 0;
  const mpf_class big(0.5 * (x + sqrt(disc)), kBits);
  const mpf_class u = small ? mpf_class(1 / big, kBits) : big;
  const mpf_class a(alpha, kBits);
  const mpf_class den(a * u - 1, kBits);
  ExtendedU out{u.get_d(), -1.0};
  if (sgn(den) != 0) out.z2 = mpf_class((a - u) / den, kBits).get_d();
  return out;
}

Backsub back_substitute(double xi, bool small, const ModelParams& params, double verify_tol) {
  const double alpha = params.alpha();
  const int k = params.k();
  Backsub out;
  const ExtendedU ext = extended_u(k, alpha, xi, small);
  const double u = ext.u;
  const double z2 = ext.z2;
  if (!(z2 > 0.0) || !std::isfinite(z2)) {
    out.rejected = RejectedCandidate{xi, u, z2, "z2 = (alpha - u)/(alpha u - 1) is not positive"};
    return out;
  }
  const double z1 = std::pow(mobius_f(1.0 / z2, alpha), k);
  const ZVector z{z1, z2, 1.0 / z2, 1.0 / z1};
  ClassifiedSolution s;
  s.xi = xi;
  s.u = u;
  s.h = z_to_h(z);
  // Exact I3 completion in h-coordinates.
  s.h.h[2] = -s.h.h[1];
  s.h.h[3] = -s.h.h[0];
  s.h = polish_i3(s.h, params);
  s.residual = fixed_point_residual(s.h, params);
  s.z_residual = system8_residual(h_to_z(s.h), params);
  if (!(s.residual < verify_tol)) {
    out.rejected = RejectedCandidate{xi, u, z2, "fixed-point residual above tolerance"};
    return out;
  }
  out.solution = s;
  return out;
}

int quick_wp(int k, double alpha) { return 2 * xi_count(k, alpha); }

}  // namespace

ClassificationReport classify(double alpha, int k, const ClassifyConfig& config) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("classify: alpha must be positive");
  if (k < 2) throw InvalidArgument("classify: need k >= 2");
  const ModelParams params = ModelParams::from_alpha(k, k, alpha);

  ClassificationReport rep;
  rep.alpha = alpha;
  rep.k = k;
  const XiRoots roots = xi_roots(k, alpha);
  rep.root_at_two = roots.root_at_two;
  rep.tangency = roots.tangency;
  rep.n_alpha = static_cast<int>(roots.above_two.size());
  rep.N_alpha = 1 + 2 * rep.n_alpha;

  ClassifiedSolution ti;
  ti.u = 1.0;
  ti.residual = fixed_point_residual(ti.h, params);
  ti.z_residual = system8_residual(h_to_z(ti.h), params);
  rep.solutions.push_back(ti);

  for (double xi : roots.above_two) {
    for (bool small : {true, false}) {
      Backsub b = back_substitute(xi, small, params, config.verify_tol);
      if (b.solution) {
        rep.solutions.push_back(*b.solution);
        ++rep.wp_count;
      } else {
        rep.rejected.push_back(*b.rejected);
      }
    }
  }
  for (const ClassifiedSolution& s : rep.solutions) rep.max_residual = std::max(rep.max_residual, s.residual);

  rep.boundary_flag = rep.root_at_two || rep.tangency;
  if (config.check_boundary && !rep.boundary_flag) {
    const int center = 2 * rep.n_alpha;
    const double d = config.boundary_delta;
    if (quick_wp(k, alpha + d) != center || (alpha - d > 0.0 && quick_wp(k, alpha - d) != center)) {
      rep.boundary_flag = true;
    }
  }
  return rep;
}

}  // namespace wpg
