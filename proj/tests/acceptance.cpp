// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wpg/fields.hpp"
#include "wpg/measures.hpp"
#include "wpg/reduce.hpp"
#include "wpg/roots.hpp"
#include "wpg/scan.hpp"

using namespace wpg;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// 1. Critical values, each under 5 s.
void critical_values(Outcome& o) {
  struct Case {
    int k;
    double want;
    double tol;
  };
  for (Case c : {Case{4, 6.3716, 1e-3}, Case{5, 2.65, 1e-2}, Case{6, 1.89, 1e-2}}) {
    auto t0 = Clock::now();
    CriticalAlpha r = critical_alpha(c.k);
    double dt = seconds_since(t0);
    o.detail << " k=" << c.k << ":" << fmt("%.6f", r.alpha) << "(" << fmt("%.2f", dt) << "s)";
    o.require(r.has_transition, "k=" + std::to_string(c.k) + " no transition found");
    o.require(std::abs(r.alpha - c.want) <= c.tol, "k=" + std::to_string(c.k) + " outside tolerance");
    o.require(dt < 5.0, "k=" + std::to_string(c.k) + " slower than 5 s");
  }
}

// 2. Auxiliary constants of the k = 5 and k = 6 analyses.
void auxiliary_constants(Outcome& o) {
  const double xi0_5 = std::sqrt(v_cubic_root());
  const double merge_lo = branch_eval(5, Branch::lower, xi0_5);
  const double merge_hi = branch_eval(5, Branch::upper, xi0_5);
  const BranchMinimum m5 = lower_branch_minimum(5);
  const BranchMinimum m6 = lower_branch_minimum(6);
  const double a1 = branch_eval(6, Branch::lower, 2.0);
  const double a2 = branch_eval(6, Branch::upper, 2.0);

  o.detail << " xi0(k=5)=" << fmt("%.6f", xi0_5) << " gamma2(xi0)=" << fmt("%.6f", merge_hi)
           << " xi1=" << fmt("%.6f", m5.xi) << " xi0(k=6)=" << fmt("%.6f", m6.xi) << " alpha1(2)=" << a1
           << " alpha2(2)=" << a2;
  o.require(std::abs(xi0_5 - 2.214) <= 1e-3, "xi0 k=5");
  o.require(std::abs(merge_lo - merge_hi) <= 1e-6, "branches do not meet at xi0");
  // 3.21 is quoted to two decimals; the value itself is pinned to 1e-3 by its
  // closed form (xi0^3 - 2 xi0) / 2 and compared with the quote at the quote's
  // own resolution.
  const double closed = (xi0_5 * xi0_5 * xi0_5 - 2.0 * xi0_5) / 2.0;
  o.require(std::abs(merge_hi - closed) <= 1e-3, "gamma2(xi0) vs closed form");
  o.require(std::abs(merge_hi - 3.21) <= 5e-3, "gamma2(xi0) vs quoted 3.21 at two decimals");
  o.detail << " (|gamma2-3.21|=" << fmt("%.1e", std::abs(merge_hi - 3.21)) << ", quote has 2 decimals)";
  o.require(std::abs(m5.xi - 2.3841) <= 1e-3, "xi1 k=5");
  o.require(std::abs(m6.xi - 2.077) <= 1e-3, "xi0 k=6");
  o.require(a1 == 2.0, "alpha1(2) != 2 exactly");
  o.require(a2 == 3.0, "alpha2(2) != 3 exactly");
}

// 3. Count tables from 400-point scans.
void count_tables(Outcome& o) {
  auto t0 = Clock::now();
  const int steps = 400;
  const double lo = 0.05, hi = 6.0;

  const CriticalAlpha c5 = critical_alpha(5);
  const std::vector<ScanRow> r5 = alpha_scan(5, lo, hi, steps);
  int flagged5 = 0, checked5 = 0, below5 = 0, above5 = 0;
  for (const ScanRow& r : r5) {
    if (r.boundary_flag) {
      ++flagged5;
      continue;
    }
    ++checked5;
    int want = r.alpha < c5.alpha ? 0 : 4;
    (r.alpha < c5.alpha ? below5 : above5)++;
    if (r.wp_count != want) o.require(false, "k=5 alpha=" + fmt("%.6f", r.alpha));
  }
  o.require(below5 > 0 && above5 > 0, "k=5 scan misses a region");
  // At the transition itself the xi-root is a double root: one xi, two measures.
  const ClassificationReport at5 = classify(c5.alpha, 5);
  o.require(at5.wp_count == 2, "k=5 count at alpha_cr is " + std::to_string(at5.wp_count));
  o.require(c5.branch_check && std::abs(c5.alpha - c5.branch_check->alpha) < 1e-4,
            "k=5 alpha_cr not localized to 1e-4");

  const CriticalAlpha c6 = critical_alpha(6);
  const std::vector<ScanRow> r6 = alpha_scan(6, lo, hi, steps);
  int flagged6 = 0, checked6 = 0;
  int region[4] = {0, 0, 0, 0};
  for (const ScanRow& r : r6) {
    if (r.boundary_flag) {
      ++flagged6;
      continue;
    }
    ++checked6;
    int idx = r.alpha < c6.alpha ? 0 : r.alpha < 2.0 ? 1 : r.alpha <= 3.0 ? 2 : 3;
    const int want[4] = {0, 4, 2, 4};
    ++region[idx];
    if (r.wp_count != want[idx]) o.require(false, "k=6 alpha=" + fmt("%.6f", r.alpha));
  }
  for (int i = 0; i < 4; ++i) o.require(region[i] > 0, "k=6 scan misses region " + std::to_string(i));
  for (double a : {c6.alpha, 2.0, 2.5, 3.0}) {
    const ClassificationReport r = classify(a, 6);
    o.require(r.wp_count == 2, "k=6 count at alpha=" + fmt("%.6f", a) + " is " + std::to_string(r.wp_count));
  }

  double dt = seconds_since(t0);
  o.detail << " k=5: " << checked5 << " rows checked, " << flagged5 << " flagged; k=6: " << checked6
           << " rows checked, " << flagged6 << " flagged; point checks at alpha_cr, alpha_c, 2, 3; "
           << fmt("%.2f", dt) << "s";
  o.require(dt < 60.0, "slower than 60 s");
}

// 4. Descartes/Theorem-2 bound on the number of solutions.
void theorem2_bound(Outcome& o) {
  std::mt19937_64 rng(20240601);
  int samples = 0, max_count = 0, max_wp = 0;
  for (int k = 2; k <= 12; ++k) {
    const AlphaPoly& p12 = build_poly12(k);
    for (int i = 0; i < 50; ++i) {
      // alpha = 1 + a/b with a in 1..2000, b in 1..200.
      mpq_class a(static_cast<long>(1 + rng() % 2000), static_cast<long>(1 + rng() % 200));
      a.canonicalize();
      a += 1;
      RationalPoly p = evaluate_at(p12, a);
      int count = sturm_count(p, {mpq_class(0), std::nullopt});
      bool u1 = sgn(p(mpq_class(1))) == 0;
      ClassificationReport rep = classify(a.get_d(), k);
      max_count = std::max(max_count, count);
      max_wp = std::max(max_wp, rep.wp_count);
      ++samples;
      if (count > 5) o.require(false, "k=" + std::to_string(k) + " count " + std::to_string(count));
      if (!u1) o.require(false, "u=1 not a root at k=" + std::to_string(k));
      if (rep.wp_count > 4) o.require(false, "wp_count > 4 at k=" + std::to_string(k));
    }
  }
  o.detail << " " << samples << " samples; max positive roots " << max_count << ", max wp_count " << max_wp;
}

// 5. No non-trivial I3 solutions for k <= 3.
void small_k_trivial(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> logd(0.0, std::log(200.0));
  int runs = 0, points = 0;
  for (int k : {2, 3}) {
    for (int i = 0; i < 20; ++i) {
      double a = std::exp(logd(rng));
      if (a <= 1.0) a = 1.0 + 1e-3;
      SolveReport rep = fixed_points_W(ModelParams::from_alpha(k, k, a), InvariantSet::I3);
      ++runs;
      for (const FieldVector& h : rep.fixed_points) {
        ++points;
        if (!(in_set(h, InvariantSet::I1, 1e-8) && in_set(h, InvariantSet::I3, 1e-8)))
          o.require(false, "k=" + std::to_string(k) + " alpha=" + fmt("%.6f", a));
      }
    }
  }
  o.detail << " " << runs << " solves, " << points << " fixed points, all in I1 and I3";
}

// 6. Exact symbolic identities.
void symbolic_identities(Outcome& o) {
  const AlphaPoly u2m1({IntPoly::constant(mpz_class(-1)), IntPoly(), IntPoly::constant(mpz_class(1))});
  for (int k = 2; k <= 12; ++k) {
    const AlphaPoly p = build_poly12(k);
    const std::string tag = "k=" + std::to_string(k);
    auto dm = divmod_monic(p, u2m1);
    o.require(dm.remainder.is_zero(), tag + " remainder");
    o.require(is_antipalindromic(p), tag + " antipalindromic");
    o.require(is_palindromic(dm.quotient), tag + " palindromic quotient");
    const AlphaPoly x = xi_substitute(dm.quotient);
    o.require(verify_xi_identity(dm.quotient, x), tag + " xi identity");
  }
  o.detail << " k=2..12: remainder 0, antipalindromic, palindromic quotient, xi identity";
}

// 7. Compatibility oracle vs fixed-point residual.
void oracle_equivalence(Outcome& o) {
  auto t0 = Clock::now();
  int certified = 0, certified_ok = 0;
  int perturbed = 0, detected = 0;
  std::map<std::string, int> missed;
  std::size_t max_configs = 0;
  for (int k : {2, 3}) {
    for (int card = 1; card <= k; ++card) {
      const SubgroupSpec sub = SubgroupSpec::leading(k, card);
      for (double alpha : {0.2, 0.5, 2.0, 5.0}) {
        const ModelParams p = ModelParams::from_alpha(k, card, alpha);
        const SolveReport rep = fixed_points_W(p, InvariantSet::none);
        for (const FieldVector& h : rep.fixed_points) {
          for (int n : {1, 2}) {
            max_configs = std::max(max_configs, std::size_t{1} << ball_size(n, k));
            ++certified;
            if (compatibility_defect(n, h, p, sub) < 1e-10) ++certified_ok;
            for (int comp = 0; comp < 4; ++comp) {
              FieldVector g = h;
              g.h[static_cast<std::size_t>(comp)] += 0.2;
              ++perturbed;
              double d = compatibility_defect(n, g, p, sub);
              if (d > 1e-5) {
                ++detected;
              } else {
                std::string cls = n == 1 ? "n=1" : "n=" + std::to_string(n) + " h" + std::to_string(comp + 1) +
                                                       " |A|=" + std::to_string(card);
                ++missed[cls];
              }
            }
          }
        }
      }
    }
  }
  double dt = seconds_since(t0);
  o.detail << " certified " << certified_ok << "/" << certified << " below 1e-10; perturbed " << detected << "/"
           << perturbed << " above 1e-5; largest enumeration 2^" << static_cast<int>(std::log2(max_configs))
           << "; " << fmt("%.2f", dt) << "s";
  o.require(certified_ok == certified, "a certified vector has defect >= 1e-10");
  std::string classes;
  for (const auto& [cls, count] : missed) classes += " " + cls + ": " + std::to_string(count) + ";";
  o.require(detected == perturbed, "undetected perturbations by class:" + classes);
  o.require(dt < 30.0, "slower than 30 s");
}

// 8. Every (xi, u) solution back-substitutes to a verified I3 field vector.
void back_substitution(Outcome& o) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(1.05, 12.0);
  int solutions = 0;
  double worst = 0.0;
  for (int k : {5, 6}) {
    for (int i = 0; i < 20; ++i) {
      const double a = d(rng);
      const ClassificationReport rep = classify(a, k);
      const ModelParams p = ModelParams::from_alpha(k, k, a);
      if (!rep.rejected.empty()) o.require(false, "rejected candidate at k=" + std::to_string(k));
      for (const ClassifiedSolution& s : rep.solutions) {
        ++solutions;
        double r = fixed_point_residual(s.h, p);
        worst = std::max(worst, r);
        if (!in_set(s.h, InvariantSet::I3, 0.0) || !(r < 1e-9))
          o.require(false, "k=" + std::to_string(k) + " alpha=" + fmt("%.6f", a));
      }
    }
  }
  o.detail << " " << solutions << " solutions over 40 (k, alpha) samples; worst residual " << fmt("%.1e", worst);
}

// 9. The k = 6, alpha = 4.1 example.
void figure_example(Outcome& o) {
  RationalPoly p = evaluate_at(build_poly12(6), mpq_class(41, 10));
  int count = sturm_count(p, {mpq_class(0), std::nullopt});
  ClassificationReport rep = classify(4.1, 6);
  o.detail << " positive roots " << count << ", wp_count " << rep.wp_count;
  o.require(count == 5, "positive root count");
  o.require(rep.wp_count == 4, "wp_count");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"critical values", critical_values},
      {"auxiliary constants", auxiliary_constants},
      {"count tables", count_tables},
      {"solution bound", theorem2_bound},
      {"k<=3 only translation-invariant on I3", small_k_trivial},
      {"symbolic identities", symbolic_identities},
      {"compatibility oracle equivalence", oracle_equivalence},
      {"back-substitution soundness", back_substitution},
      {"k=6 alpha=4.1 example", figure_example},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome o;
    auto t0 = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double dt = seconds_since(t0);
    std::printf("%s %d %s (%.2fs):%s\n", o.pass ? "PASS" : "FAIL", index, c.name, dt, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
