#include "wpg/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wpg/error.hpp"

namespace wpg {

namespace {

template <typename T>
int sign_changes(const std::vector<T>& coeffs) {
  int changes = 0;
  int last = 0;
  for (const T& c : coeffs) {
    int s = 0;
    if constexpr (std::is_same_v<T, double>) {
      s = (c > 0) - (c < 0);
    } else {
      s = sgn(c);
    }
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

void check_degree(int degree) {
  if (degree > kDefaultDegreeCap) {
    throw InvalidArgument("polynomial degree " + std::to_string(degree) + " exceeds the cap of " +
                          std::to_string(kDefaultDegreeCap));
  }
}

// Positive rational multiple of p with coprime integer coefficients.
RationalPoly make_primitive(const RationalPoly& p) {
  if (p.is_zero()) return p;
  mpz_class den = 1;
  for (const mpq_class& c : p.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  mpz_class num = 0;
  for (const mpq_class& c : p.coeffs()) {
    const mpz_class scaled = c.get_num() * (den / c.get_den());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), scaled.get_mpz_t());
  }
  const mpq_class factor(den, num);
  return factor * p;
}

RationalPoly make_monic(const RationalPoly& p) {
  if (p.is_zero()) return p;
  const mpq_class inv = mpq_class(1) / p.leading();
  return inv * p;
}

int sign_of(const mpq_class& v) { return sgn(v); }

int variations_at(const std::vector<RationalPoly>& chain, const mpq_class& x) {
  int changes = 0;
  int last = 0;
  for (const RationalPoly& s : chain) {
    const int v = sign_of(s(x));
    if (v == 0) continue;
    if (last != 0 && v != last) ++changes;
    last = v;
  }
  return changes;
}

int count_with_chain(const std::vector<RationalPoly>& chain, const mpq_class& lo, const mpq_class& hi) {
  if (hi <= lo) return 0;
  return variations_at(chain, lo) - variations_at(chain, hi);
}

double newton_polish(const FloatPoly& p, double lo, double hi, double x) {
  const FloatPoly dp = p.derivative();
  for (int i = 0; i < 8; ++i) {
    const double d = dp(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double xn = x - p(x) / d;
    if (!(xn >= lo && xn <= hi)) break;
    if (xn == x) break;
    x = xn;
  }
  return x;
}

int multiplicity_in(const RationalPoly& p, const mpq_class& lo, const mpq_class& hi) {
  // A root of multiplicity m in p has multiplicity m-1 in gcd(p, p').
  int m = 1;
  RationalPoly g = poly_gcd(p, p.derivative());
  while (g.degree() > 0) {
    const RationalPoly sf = square_free_part(g);
    if (count_with_chain(sturm_sequence(sf), lo, hi) == 0) break;
    ++m;
    g = poly_gcd(g, g.derivative());
  }
  return m;
}

double scale_at(const FloatPoly& p, double x) {
  double s = 0.0;
  double pw = 1.0;
  for (double c : p.coeffs()) {
    s += std::abs(c) * pw;
    pw *= std::abs(x);
  }
  return s;
}

int fsign(double v) { return (v > 0) - (v < 0); }

RootBracket bisect_float(const FloatPoly& p, double lo, double hi, const FloatIsolationConfig& cfg) {
  int slo = fsign(p(lo));
  RootBracket b;
  b.polished = false;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < cfg.tol || mid <= lo || mid >= hi) {
      b.polished = true;
      break;
    }
    const int sm = fsign(p(mid));
    if (sm == 0) {
      lo = hi = mid;
      b.polished = true;
      break;
    }
    if (sm == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  b.lo = lo;
  b.hi = hi;
  b.root = lo == hi ? lo : newton_polish(p, lo, hi, 0.5 * (lo + hi));
  if (b.lo == b.hi) {
    b.lo = std::nextafter(b.root, -std::numeric_limits<double>::infinity());
    b.hi = std::nextafter(b.root, std::numeric_limits<double>::infinity());
  }
  return b;
}

std::vector<RootBracket> float_roots(const FloatPoly& p, double lo, double hi,
                                     const FloatIsolationConfig& cfg) {
  std::vector<RootBracket> out;
  if (p.degree() <= 0 || hi < lo) return out;
  if (p.degree() == 1) {
    const double r = -p.coeff(0) / p.coeff(1);
    if (r >= lo && r <= hi) {
      out.push_back(RootBracket{std::nextafter(r, -INFINITY), std::nextafter(r, INFINITY), r, 1, true});
    }
    return out;
  }
  std::vector<double> pts{lo};
  for (const RootBracket& c : float_roots(p.derivative(), lo, hi, cfg)) {
    if (c.root > lo && c.root < hi) pts.push_back(c.root);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = p(pts[i]);

  std::vector<bool> crossing(pts.size() > 0 ? pts.size() - 1 : 0, false);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    crossing[i] = vals[i] != 0.0 && vals[i + 1] != 0.0 && fsign(vals[i]) != fsign(vals[i + 1]);
    if (crossing[i]) out.push_back(bisect_float(p, pts[i], pts[i + 1], cfg));
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const bool interior = i > 0 && i + 1 < pts.size();
    if (vals[i] == 0.0) {
      out.push_back(RootBracket{std::nextafter(pts[i], -INFINITY), std::nextafter(pts[i], INFINITY),
                                pts[i], interior ? 2 : 1, true});
      continue;
    }
    if (!interior || crossing[i - 1] || crossing[i]) continue;
    if (std::abs(vals[i]) <= cfg.tangency_rel * scale_at(p, pts[i])) {
      out.push_back(RootBracket{std::nextafter(pts[i], -INFINITY), std::nextafter(pts[i], INFINITY),
                                pts[i], 2, true});
    }
  }
  std::sort(out.begin(), out.end(), [](const RootBracket& a, const RootBracket& b) { return a.root < b.root; });
  std::vector<RootBracket> merged;
  for (const RootBracket& b : out) {
    if (!merged.empty() && std::abs(b.root - merged.back().root) <= cfg.tol) continue;
    merged.push_back(b);
  }
  return merged;
}

}  // namespace

int descartes_bound(const RationalPoly& p) {
  if (p.is_zero()) throw InvalidArgument("descartes_bound: zero polynomial");
  return sign_changes(p.coeffs());
}

int descartes_bound(const FloatPoly& p) {
  if (p.is_zero()) throw InvalidArgument("descartes_bound: zero polynomial");
  return sign_changes(p.coeffs());
}

mpq_class cauchy_bound(const RationalPoly& p) {
  if (p.is_zero()) throw InvalidArgument("cauchy_bound: zero polynomial");
  mpq_class m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    mpq_class r = p.coeffs()[static_cast<std::size_t>(i)] / p.leading();
    r = abs(r);
    if (r > m) m = r;
  }
  return m + 1;
}

double cauchy_bound(const FloatPoly& p) {
  if (p.is_zero()) throw InvalidArgument("cauchy_bound: zero polynomial");
  double m = 0.0;
  for (int i = 0; i < p.degree(); ++i) {
    m = std::max(m, std::abs(p.coeffs()[static_cast<std::size_t>(i)] / p.leading()));
  }
  return m + 1.0;
}

RationalPoly poly_gcd(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly x = make_primitive(a);
  RationalPoly y = make_primitive(b);
  while (!y.is_zero()) {
    RationalPoly r = make_primitive(divmod(x, y).remainder);
    x = std::move(y);
    y = std::move(r);
  }
  return make_monic(x);
}

RationalPoly square_free_part(const RationalPoly& p) {
  if (p.degree() <= 0) return make_monic(p);
  const RationalPoly g = poly_gcd(p, p.derivative());
  return make_monic(divmod(p, g).quotient);
}

std::vector<RationalPoly> sturm_sequence(const RationalPoly& p) {
  std::vector<RationalPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(make_primitive(p));
  if (p.degree() == 0) return chain;
  chain.push_back(make_primitive(p.derivative()));
  while (true) {
    const RationalPoly r = divmod(chain[chain.size() - 2], chain.back()).remainder;
    if (r.is_zero()) break;
    chain.push_back(make_primitive(-r));
  }
  return chain;
}

int sturm_count(const RationalPoly& p, const RationalInterval& interval) {
  if (p.is_zero()) throw InvalidArgument("sturm_count: zero polynomial");
  check_degree(p.degree());
  const RationalPoly q = square_free_part(p);
  if (q.degree() <= 0) return 0;
  const mpq_class hi = interval.hi ? *interval.hi : cauchy_bound(q);
  return count_with_chain(sturm_sequence(q), interval.lo, hi);
}

std::vector<RootBracket> isolate_and_refine(const RationalPoly& p, const RationalInterval& interval,
                                            double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("isolate_and_refine: tol must be positive");
  if (p.is_zero()) throw InvalidArgument("isolate_and_refine: zero polynomial");
  check_degree(p.degree());
  std::vector<RootBracket> out;
  const RationalPoly q = square_free_part(p);
  if (q.degree() <= 0) return out;
  const std::vector<RationalPoly> chain = sturm_sequence(q);
  const FloatPoly qf = to_float(q);
  const mpq_class top = interval.hi ? *interval.hi : cauchy_bound(q);
  const mpq_class tol_q(tol);

  struct Piece {
    mpq_class lo, hi;
    int count;
  };
  std::vector<Piece> stack{{interval.lo, top, count_with_chain(chain, interval.lo, top)}};
  std::vector<Piece> isolated;
  while (!stack.empty()) {
    Piece piece = stack.back();
    stack.pop_back();
    if (piece.count == 0) continue;
    if (piece.count == 1) {
      isolated.push_back(piece);
      continue;
    }
    const mpq_class mid = (piece.lo + piece.hi) / 2;
    const int left = count_with_chain(chain, piece.lo, mid);
    stack.push_back({mid, piece.hi, piece.count - left});
    stack.push_back({piece.lo, mid, left});
  }

  for (Piece& piece : isolated) {
    RootBracket b;
    const int mult = multiplicity_in(p, piece.lo, piece.hi);
    if (sgn(q(piece.hi)) == 0) {
      b.root = piece.hi.get_d();
      b.lo = std::nextafter(b.root, -INFINITY);
      b.hi = std::nextafter(b.root, INFINITY);
      b.multiplicity_hint = mult;
      out.push_back(b);
      continue;
    }
    // Move lo off a neighbouring root so that q changes sign across the
    // single root of the square-free part inside (lo, hi).
    while (sgn(q(piece.lo)) == 0) {
      const mpq_class mid = (piece.lo + piece.hi) / 2;
      if (count_with_chain(chain, mid, piece.hi) == 1) {
        piece.lo = mid;
      } else {
        piece.hi = mid;
      }
    }
    const int s_lo = sgn(q(piece.lo));
    bool exact_hit = false;
    int guard = 0;
    while (piece.hi - piece.lo >= tol_q && guard++ < 4096) {
      const mpq_class mid = (piece.lo + piece.hi) / 2;
      const int sm = sgn(q(mid));
      if (sm == 0) {
        piece.lo = piece.hi = mid;
        exact_hit = true;
        break;
      }
      if (sm == s_lo) {
        piece.lo = mid;
      } else {
        piece.hi = mid;
      }
    }
    b.multiplicity_hint = mult;
    if (exact_hit) {
      b.root = piece.lo.get_d();
      b.lo = std::nextafter(b.root, -INFINITY);
      b.hi = std::nextafter(b.root, INFINITY);
    } else {
      b.lo = piece.lo.get_d();
      b.hi = piece.hi.get_d();
      b.root = newton_polish(qf, b.lo, b.hi, 0.5 * (b.lo + b.hi));
      b.polished = piece.hi - piece.lo < tol_q;
    }
    out.push_back(b);
  }
  std::sort(out.begin(), out.end(), [](const RootBracket& a, const RootBracket& b) { return a.root < b.root; });
  return out;
}

std::vector<RootBracket> isolate_and_refine(const FloatPoly& p, double lo, std::optional<double> hi,
                                            const FloatIsolationConfig& config) {
  if (p.is_zero()) throw InvalidArgument("isolate_and_refine: zero polynomial");
  check_degree(p.degree());
  if (!(config.tol > 0.0)) throw InvalidArgument("isolate_and_refine: tol must be positive");
  const double top = hi ? *hi : cauchy_bound(p);
  return float_roots(p, lo, top, config);
}

RationalPoly to_rational(const FloatPoly& p) {
  return p.map([](double c) { return mpq_class(c); });
}

FloatPoly to_float(const RationalPoly& p) {
  return p.map([](const mpq_class& c) { return c.get_d(); });
}

}  // namespace wpg
