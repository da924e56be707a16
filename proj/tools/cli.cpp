#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wpg/error.hpp"
#include "wpg/fields.hpp"
#include "wpg/measures.hpp"
#include "wpg/reduce.hpp"
#include "wpg/scan.hpp"

namespace wpg::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kCompatTol = 1e-10;

std::string num(double v, const char* spec = "%.15g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct ParamOptions {
  int k = 0;
  std::optional<int> card_a;
  std::optional<double> alpha;
  std::optional<double> J;
  std::optional<double> beta;

  void attach(CLI::App* app) {
    app->add_option("--k", k, "tree order k")->required();
    app->add_option("--card-a", card_a, "|A|, size of the generator subset (default k)");
    app->add_option("--alpha", alpha, "alpha = (1 - theta)/(1 + theta)");
    app->add_option("--j", J, "coupling J (with --beta)");
    app->add_option("--beta", beta, "inverse temperature (with --j)");
  }

  ModelParams resolve(std::ostream& err) const {
    const int a = card_a.value_or(k);
    if (alpha) {
      if (J || beta) err << "warning: --alpha given; ignoring --j/--beta\n";
      return ModelParams::from_alpha(k, a, *alpha);
    }
    if (J && beta) return ModelParams::from_coupling(k, a, *J, *beta);
    throw InvalidArgument("give --alpha, or both --j and --beta");
  }
};

struct SearchOptions {
  std::string restrict = "none";
  std::uint64_t seed = 0;
  double jitter = SearchConfig{}.jitter;
  int points = SearchConfig{}.points_per_axis;

  void attach(CLI::App* app) {
    app->add_option("--restrict", restrict, "invariant set: none, I1, I2, I3");
    app->add_option("--seed", seed, "seed for the multistart jitter");
    app->add_option("--jitter", jitter, "jitter as a fraction of the grid spacing");
    app->add_option("--points", points, "grid points per axis");
  }

  SearchConfig config() const {
    if (points < 1) throw InvalidArgument("--points must be >= 1");
    if (!(jitter >= 0.0)) throw InvalidArgument("--jitter must be non-negative");
    SearchConfig c;
    c.seed = seed;
    c.jitter = jitter;
    c.points_per_axis = points;
    return c;
  }
};

std::string check_format(const std::string& f, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw InvalidArgument("unsupported --format '" + f + "'");
}

ordered_json params_json(const ModelParams& p) {
  return {{"k", p.k()}, {"card_a", p.card_a()}, {"alpha", p.alpha()}, {"theta", p.theta()},
          {"J", p.J()}, {"beta", p.beta()}};
}

ordered_json vector_json(const FieldVector& h) { return ordered_json::array({h.h1(), h.h2(), h.h3(), h.h4()}); }

const char* kCosetLegend =
    "# field index -> (coset of x, coset of parent): h1=(H_A,H_A) h2=(H_A,G\\H_A) "
    "h3=(G\\H_A,H_A) h4=(G\\H_A,G\\H_A)\n";

int cmd_solve(const ParamOptions& po, const SearchOptions& so, const std::string& format, std::ostream& out,
              std::ostream& err) {
  check_format(format, {"text", "csv", "json"});
  const ModelParams params = po.resolve(err);
  const InvariantSet set = parse_invariant_set(so.restrict);
  const SolveReport rep = fixed_points_W(params, set, so.config());

  if (format == "json") {
    ordered_json j;
    j["params"] = params_json(params);
    j["restrict"] = to_string(set);
    j["starts"] = rep.starts;
    j["failed_starts"] = rep.failed_starts.size();
    ordered_json pts = ordered_json::array();
    for (const FieldVector& h : rep.fixed_points) {
      pts.push_back({{"h", vector_json(h)},
                     {"residual", fixed_point_residual(h, params)},
                     {"in_I1", in_set(h, InvariantSet::I1)},
                     {"in_I2", in_set(h, InvariantSet::I2)},
                     {"in_I3", in_set(h, InvariantSet::I3)}});
    }
    j["fixed_points"] = pts;
    out << j.dump(2) << '\n';
    return kOk;
  }
  if (format == "text") {
    out << "# solve k=" << params.k() << " |A|=" << params.card_a() << " alpha=" << num(params.alpha())
        << " theta=" << num(params.theta()) << " restrict=" << to_string(set) << " starts=" << rep.starts
        << " failed_starts=" << rep.failed_starts.size() << '\n'
        << kCosetLegend;
  }
  out << "h1,h2,h3,h4,residual,in_I1,in_I2,in_I3\n";
  for (const FieldVector& h : rep.fixed_points) {
    out << num(h.h1()) << ',' << num(h.h2()) << ',' << num(h.h3()) << ',' << num(h.h4()) << ','
        << num(fixed_point_residual(h, params), "%.3e") << ',' << in_set(h, InvariantSet::I1) << ','
        << in_set(h, InvariantSet::I2) << ',' << in_set(h, InvariantSet::I3) << '\n';
  }
  return kOk;
}

int cmd_reduce(int k, const std::string& format, std::ostream& out) {
  check_format(format, {"text", "json"});
  const AlphaPoly p = build_poly12(k);
  const AlphaPoly q = factor_u2_minus_1(p);
  const AlphaPoly xi = xi_substitute(q);
  const bool identity = verify_xi_identity(q, xi);
  if (!identity) throw VerificationError("xi-substitution identity failed");
  if (format == "json") {
    ordered_json j{{"k", k},
                   {"poly", to_canonical(p, "u")},
                   {"antipalindromic", is_antipalindromic(p)},
                   {"quotient", to_canonical(q, "u")},
                   {"remainder", "0"},
                   {"palindromic", is_palindromic(q)},
                   {"xi_poly", to_canonical(xi, "xi")},
                   {"xi_identity", identity}};
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "k: " << k << '\n'
      << "poly: " << to_canonical(p, "u") << '\n'
      << "antipalindromic: " << (is_antipalindromic(p) ? "true" : "false") << '\n'
      << "quotient: " << to_canonical(q, "u") << '\n'
      << "remainder: 0\n"
      << "palindromic: " << (is_palindromic(q) ? "true" : "false") << '\n'
      << "xi_poly: " << to_canonical(xi, "xi") << '\n'
      << "xi_identity: " << (identity ? "true" : "false") << '\n';
  return kOk;
}

int cmd_classify(int k, double alpha, const std::string& format, std::ostream& out) {
  check_format(format, {"text", "json"});
  const ClassificationReport rep = classify(alpha, k);
  if (format == "json") {
    ordered_json sols = ordered_json::array();
    for (const ClassifiedSolution& s : rep.solutions) {
      sols.push_back({{"xi", s.xi ? ordered_json(*s.xi) : ordered_json(nullptr)},
                      {"u", s.u},
                      {"h", vector_json(s.h)},
                      {"residual", s.residual},
                      {"z_residual", s.z_residual}});
    }
    ordered_json rej = ordered_json::array();
    for (const RejectedCandidate& r : rep.rejected) {
      rej.push_back({{"xi", r.xi}, {"u", r.u}, {"z2", r.z2}, {"reason", r.reason}});
    }
    ordered_json j{{"alpha", rep.alpha},          {"k", rep.k},
                   {"n_alpha", rep.n_alpha},      {"N_alpha", rep.N_alpha},
                   {"wp_count", rep.wp_count},    {"boundary_flag", rep.boundary_flag},
                   {"root_at_two", rep.root_at_two}, {"tangency", rep.tangency},
                   {"max_residual", rep.max_residual}, {"solutions", sols},
                   {"rejected", rej}};
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "alpha: " << num(rep.alpha) << '\n'
      << "k: " << rep.k << '\n'
      << "n_alpha: " << rep.n_alpha << '\n'
      << "N_alpha: " << rep.N_alpha << '\n'
      << "wp_count: " << rep.wp_count << '\n'
      << "boundary_flag: " << (rep.boundary_flag ? "true" : "false") << '\n'
      << "max_residual: " << num(rep.max_residual, "%.3e") << '\n'
      << "xi,u,h1,h2,h3,h4,residual\n";
  for (const ClassifiedSolution& s : rep.solutions) {
    out << (s.xi ? num(*s.xi) : std::string("-")) << ',' << num(s.u) << ',' << num(s.h.h1()) << ','
        << num(s.h.h2()) << ',' << num(s.h.h3()) << ',' << num(s.h.h4()) << ',' << num(s.residual, "%.3e")
        << '\n';
  }
  for (const RejectedCandidate& r : rep.rejected) {
    out << "# rejected xi=" << num(r.xi) << " u=" << num(r.u) << ": " << r.reason << '\n';
  }
  return kOk;
}

int cmd_scan(int k, double amin, double amax, int steps, const std::string& path, const std::string& format,
             std::ostream& out) {
  check_format(format, {"csv", "json"});
  const std::vector<ScanRow> rows = alpha_scan(k, amin, amax, steps);
  std::ostringstream buf;
  if (format == "json") {
    write_scan_json(rows, buf);
  } else {
    write_scan_csv(rows, buf);
  }
  if (path.empty() || path == "-") {
    out << buf.str();
    return kOk;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << buf.str();
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
  return kOk;
}

int cmd_critical(int k, double alpha_max, const std::string& format, std::ostream& out) {
  check_format(format, {"text", "json"});
  CriticalConfig cfg;
  cfg.alpha_max = alpha_max;
  const CriticalAlpha c = critical_alpha(k, cfg);
  if (format == "json") {
    ordered_json j{{"k", k}, {"transition", c.has_transition}};
    if (c.has_transition) {
      j["alpha_critical"] = c.alpha;
      j["bracket"] = {c.bracket_lo, c.bracket_hi};
      j["polished"] = c.polished;
      j["xi_witness"] = c.xi_witness;
      j["onset"] = c.onset_at_xi_two ? "xi=2" : "tangency";
    }
    if (c.branch_check) {
      j["branch_minimum_xi"] = c.branch_check->xi;
      j["branch_minimum_alpha"] = c.branch_check->alpha;
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "k: " << k << '\n' << "transition: " << (c.has_transition ? "true" : "false") << '\n';
  if (!c.has_transition) {
    out << "# no root xi > 2 for alpha in [" << num(cfg.alpha_min) << ", " << num(cfg.alpha_max) << "]\n";
    return kOk;
  }
  out << "alpha_critical: " << num(c.alpha) << '\n'
      << "bracket: [" << num(c.bracket_lo) << ", " << num(c.bracket_hi) << "]\n"
      << "polished: " << (c.polished ? "true" : "false") << '\n'
      << "xi_witness: " << num(c.xi_witness) << '\n'
      << "onset: " << (c.onset_at_xi_two ? "xi=2" : "tangency") << '\n';
  if (c.branch_check) {
    out << "branch_minimum_xi: " << num(c.branch_check->xi) << '\n'
        << "branch_minimum_alpha: " << num(c.branch_check->alpha) << '\n'
        << "cross_check_diff: " << num(std::abs(c.branch_check->alpha - c.alpha), "%.3e") << '\n';
  }
  return kOk;
}

int cmd_check_compat(const ParamOptions& po, const SearchOptions& so, int n, const std::string& format,
                     std::ostream& out, std::ostream& err) {
  check_format(format, {"text", "json"});
  const ModelParams params = po.resolve(err);
  const SubgroupSpec sub = SubgroupSpec::leading(params.k(), params.card_a());
  const SolveReport rep = fixed_points_W(params, parse_invariant_set(so.restrict), so.config());
  std::vector<double> defects;
  double worst = 0.0;
  for (const FieldVector& h : rep.fixed_points) {
    defects.push_back(compatibility_defect(n, h, params, sub));
    worst = std::max(worst, defects.back());
  }
  if (format == "json") {
    ordered_json pts = ordered_json::array();
    for (std::size_t i = 0; i < defects.size(); ++i) {
      pts.push_back({{"h", vector_json(rep.fixed_points[i])},
                     {"residual", fixed_point_residual(rep.fixed_points[i], params)},
                     {"defect", defects[i]}});
    }
    ordered_json j{{"params", params_json(params)}, {"n", n}, {"max_defect", worst}, {"fixed_points", pts}};
    out << j.dump(2) << '\n';
  } else {
    out << "# check-compat k=" << params.k() << " |A|=" << params.card_a() << " alpha=" << num(params.alpha())
        << " n=" << n << '\n'
        << "h1,h2,h3,h4,residual,defect\n";
    for (std::size_t i = 0; i < defects.size(); ++i) {
      const FieldVector& h = rep.fixed_points[i];
      out << num(h.h1()) << ',' << num(h.h2()) << ',' << num(h.h3()) << ',' << num(h.h4()) << ','
          << num(fixed_point_residual(h, params), "%.3e") << ',' << num(defects[i], "%.3e") << '\n';
    }
    out << "max_defect: " << num(worst, "%.3e") << '\n';
  }
  if (worst >= kCompatTol) {
    err << "error: compatibility defect " << num(worst, "%.3e") << " exceeds " << num(kCompatTol, "%.0e") << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakly periodic Gibbs measures of the Ising model on Cayley trees"};
  app.require_subcommand(1);

  std::string format = "text";

  ParamOptions solve_params;
  SearchOptions solve_search;
  auto* solve = app.add_subcommand("solve", "fixed points of the weakly periodic operator W");
  solve_params.attach(solve);
  solve_search.attach(solve);
  solve->add_option("--format", format, "text, csv or json");

  int reduce_k = 0;
  auto* reduce = app.add_subcommand("reduce", "exact polynomial reduction on I3 for |A| = k");
  reduce->add_option("--k", reduce_k, "tree order k")->required();
  reduce->add_option("--format", format, "text or json");

  int classify_k = 0;
  double classify_alpha = 0.0;
  auto* classify_cmd = app.add_subcommand("classify", "solution counts on I3 for |A| = k at one alpha");
  classify_cmd->add_option("--k", classify_k, "tree order k")->required();
  classify_cmd->add_option("--alpha", classify_alpha, "alpha")->required();
  classify_cmd->add_option("--format", format, "text or json");

  int scan_k = 0;
  double scan_min = 0.0, scan_max = 0.0;
  int scan_steps = 201;
  std::string scan_out = "-";
  std::string scan_format = "csv";
  auto* scan = app.add_subcommand("scan", "classification over an alpha grid");
  scan->add_option("--k", scan_k, "tree order k")->required();
  scan->add_option("--alpha-min", scan_min, "first alpha")->required();
  scan->add_option("--alpha-max", scan_max, "last alpha")->required();
  scan->add_option("--steps", scan_steps, "number of alpha values (>= 2)");
  scan->add_option("--out", scan_out, "output path, '-' for stdout");
  scan->add_option("--format", scan_format, "csv or json");

  int critical_k = 0;
  double critical_max = CriticalConfig{}.alpha_max;
  auto* critical = app.add_subcommand("critical", "critical alpha for |A| = k on I3");
  critical->add_option("--k", critical_k, "tree order k")->required();
  critical->add_option("--alpha-max", critical_max, "upper end of the alpha scan");
  critical->add_option("--format", format, "text or json");

  ParamOptions compat_params;
  SearchOptions compat_search;
  int compat_n = 1;
  auto* compat = app.add_subcommand("check-compat", "finite-volume compatibility defect of solved fixed points");
  compat_params.attach(compat);
  compat_search.attach(compat);
  compat->add_option("--n", compat_n, "level n >= 1")->required();
  compat->add_option("--format", format, "text or json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*solve) return cmd_solve(solve_params, solve_search, format, out, err);
    if (*reduce) return cmd_reduce(reduce_k, format, out);
    if (*classify_cmd) return cmd_classify(classify_k, classify_alpha, format, out);
    if (*scan) return cmd_scan(scan_k, scan_min, scan_max, scan_steps, scan_out, scan_format, out);
    if (*critical) return cmd_critical(critical_k, critical_max, format, out);
    if (*compat) return cmd_check_compat(compat_params, compat_search, compat_n, format, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const VerificationError& e) {
    err << "verification failure: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kVerificationFailure;
  }
  return kInvalidInput;
}

}  // namespace wpg::cli
