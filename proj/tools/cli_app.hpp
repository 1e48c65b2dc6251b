#pragma once

// hsh4 command-line front end. `run_cli` is separate from main so the test
// suite can drive it in-process.

#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsh4/hsh4.hpp"
#include "hsh4/io.hpp"

namespace hsh4::cli {

enum class Format { json, csv, text };

struct Options {
  Format format = Format::text;
  SeriesControl ctl{};

  // eval / cgc
  std::string family = "c";
  int j = 0;
  int lambda = 0;
  int alpha = 0;
  int mu = 0;
  int nu = 0;
  bool doubled = false;
  std::vector<double> point;
  std::vector<int> q;

  // expand
  double n = 0.0;
  double r1 = 0.0;
  double r2 = 1.0;
  int l_max = 30;

  // verify
  int j_max = 6;
  std::vector<int> grid{64, 64, 128};
  std::uint64_t seed = 20240611;
  int l_proj = 4;
};

/// Flag or value errors detected after parsing; reported with exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string num(double x) { return format_double(x); }

inline void print_checks(const std::vector<CheckResult>& checks, const Options& o, std::ostream& out) {
  if (o.format == Format::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) arr.push_back(to_json(c));
    out << arr.dump(2) << "\n";
    return;
  }
  if (o.format == Format::csv) {
    out << "check,expected,observed,abs_err,rel_err,pass\n";
    for (const auto& c : checks)
      out << c.check << "," << num(c.expected) << "," << num(c.observed) << "," << num(c.abs_err) << ","
          << num(c.rel_err) << "," << (c.pass ? "true" : "false") << "\n";
    return;
  }
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.check;
    for (const auto& [k, v] : c.params) out << " " << k << "=" << num(v);
    out << " expected=" << num(c.expected) << " observed=" << num(c.observed) << " abs_err=" << num(c.abs_err)
        << "\n";
  }
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

inline Vec4 parse_point(const std::vector<double>& p) {
  if (p.size() != 4) throw UsageError("--point expects four numbers x,y,z,z0");
  return {p[0], p[1], p[2], p[3]};
}

inline int cmd_eval(const Options& o, std::ostream& out) {
  const Vec4 v = parse_point(o.point);
  cplx value;
  nlohmann::json idx;
  if (o.family == "c") {
    value = hsh_c({o.j, o.lambda, o.alpha}, v);
    idx = {{"j", o.j}, {"lambda", o.lambda}, {"alpha", o.alpha}};
  } else {
    if (!o.doubled) throw UsageError("--family h needs --doubled with --mu/--nu given as 2*mu, 2*nu");
    value = hsh_h({o.j, TwiceInt(o.mu), TwiceInt(o.nu)}, v);
    idx = {{"j", o.j}, {"twice_mu", o.mu}, {"twice_nu", o.nu}};
  }
  if (o.format == Format::json) {
    out << nlohmann::json{{"family", o.family}, {"index", idx}, {"re", value.real()}, {"im", value.imag()}}.dump(2)
        << "\n";
  } else if (o.format == Format::csv) {
    out << "re,im\n" << num(value.real()) << "," << num(value.imag()) << "\n";
  } else {
    out << num(value.real()) << " " << num(value.imag()) << "\n";
  }
  return 0;
}

inline int cmd_cgc(const Options& o, std::ostream& out) {
  if (o.q.size() != 9) throw UsageError("--q expects nine integers");
  const auto& q = o.q;
  double value = 0.0;
  nlohmann::json closed = nlohmann::json::array();
  if (o.family == "c") {
    const CgcQueryC query{q[0], q[1], q[2], q[3], q[4], q[5], q[6], q[7], q[8]};
    value = cgc4_c(query);
    for (ClosedForm f : applicable_closed_forms(query)) {
      const double cf = cgc4_c_closed(query, f);
      closed.push_back({{"form", std::string(to_string(f))}, {"value", cf}, {"difference", cf - value}});
    }
  } else {
    if (!o.doubled) throw UsageError("--family h needs --doubled; projections in --q are 2*mu, 2*nu");
    value = cgc4_h({q[0], TwiceInt(q[1]), TwiceInt(q[2]), q[3], TwiceInt(q[4]), TwiceInt(q[5]), q[6], TwiceInt(q[7]),
                    TwiceInt(q[8])});
  }
  if (o.format == Format::json) {
    out << nlohmann::json{{"family", o.family}, {"q", q}, {"value", value}, {"closed_forms", closed}}.dump(2) << "\n";
  } else if (o.format == Format::csv) {
    out << "form,value,difference\n" << "direct," << num(value) << ",0\n";
    for (const auto& c : closed)
      out << c["form"].get<std::string>() << "," << num(c["value"].get<double>()) << ","
          << num(c["difference"].get<double>()) << "\n";
  } else {
    out << num(value) << "\n";
    for (const auto& c : closed)
      out << "  " << c["form"].get<std::string>() << " " << num(c["value"].get<double>()) << " diff "
          << num(c["difference"].get<double>()) << "\n";
  }
  return 0;
}

inline int cmd_ninej(const Options& o, std::ostream& out) {
  if (o.q.size() != 9) throw UsageError("--q expects nine ranks");
  const auto& q = o.q;
  const double value = ninej4(q[0], q[1], q[2], q[3], q[4], q[5], q[6], q[7], q[8]);
  if (o.format == Format::json)
    out << nlohmann::json{{"q", q}, {"value", value}}.dump(2) << "\n";
  else if (o.format == Format::csv)
    out << "value\n" << num(value) << "\n";
  else
    out << num(value) << "\n";
  return 0;
}

inline int cmd_expand(const Options& o, std::ostream& out) {
  const ExpansionSpec spec{o.n, o.j, o.r1, o.r2, o.l_max, o.ctl};
  const CoeffTable table = expand_translated(spec);
  if (o.format == Format::json)
    out << to_json(table).dump(2) << "\n";
  else
    out << to_csv(table);
  return 0;
}

inline std::vector<CheckResult> suite_orthogonality(const Options& o) {
  if (o.grid.size() != 3) throw UsageError("--grid expects three node counts");
  const auto grid = build_grid(o.grid[0], o.grid[1], o.grid[2]);
  const auto rep = orthogonality_report(o.j_max, grid);
  const std::map<std::string, double> params{{"j_max", o.j_max},
                                             {"n0", o.grid[0]},
                                             {"n1", o.grid[1]},
                                             {"n2", o.grid[2]}};
  constexpr double tol = 1e-10;
  return {make_check("orthogonality.c.diagonal", params, 0.0, rep.c_family.max_diag_error, tol),
          make_check("orthogonality.c.offdiagonal", params, 0.0, rep.c_family.max_offdiag_error, tol),
          make_check("orthogonality.h.diagonal", params, 0.0, rep.h_family.max_diag_error, tol),
          make_check("orthogonality.h.offdiagonal", params, 0.0, rep.h_family.max_offdiag_error, tol),
          make_check("orthogonality.family_gap", params, 0.0, rep.max_diag_family_gap, tol)};
}

inline std::vector<CheckResult> suite_expansion(const Options& o) {
  const double r1 = 0.5, r2 = 1.0;
  const std::vector<std::pair<double, int>> specs{{1, 1}, {2, 0}, {2, 2}, {3, 1}, {4, 0}, {-2, 0}, {-3, 1}, {-4, 2}};
  ProjectionOptions popt;
  popt.seed = o.seed;
  std::vector<CheckResult> checks;
  for (const auto& [n, j] : specs) {
    std::vector<LPair> pairs;
    for (int l = 0; l <= o.l_proj; ++l)
      for (int lp = 0; lp <= l + j; ++lp)
        if (is_admissible(j, l, lp)) pairs.emplace_back(l, lp);
    const auto proj = project_multipole_batch(n, j, r1, r2, pairs, popt);
    const ExpansionSpec spec{n, j, r1, r2, std::max(j, o.l_proj), o.ctl};
    for (const auto& [l, lp] : pairs) {
      auto c = make_check("expansion.projection",
                          {{"n", n}, {"j", j}, {"l", l}, {"lp", lp}, {"r1", r1}, {"r2", r2},
                           {"seed", static_cast<double>(o.seed)}},
                          b_coeff(spec, l, lp), proj.values.at({l, lp}), 1e-8);
      c.pass = c.pass && proj.consistent;
      checks.push_back(std::move(c));
    }
  }
  return checks;
}

inline std::vector<CheckResult> suite_coupling(const Options&) {
  constexpr double tol = 1e-12;
  double closed_err = 0.0, ortho_err = 0.0, ninej_err = 0.0;
  int closed_count = 0;
  for (int j1 = 0; j1 <= 4; ++j1)
    for (int j2 = 0; j2 <= 4; ++j2)
      for (int j = std::abs(j1 - j2); j <= j1 + j2; j += 2)
        for (int l1 = 0; l1 <= j1; ++l1)
          for (int a1 = -l1; a1 <= l1; ++a1)
            for (int l2 = 0; l2 <= j2; ++l2)
              for (int a2 = -l2; a2 <= l2; ++a2)
                for (int l = 0; l <= j; ++l) {
                  const int a = a1 + a2;
                  if (std::abs(a) > l) continue;
                  const CgcQueryC query{j1, l1, a1, j2, l2, a2, j, l, a};
                  const double v = cgc4_c(query);
                  for (ClosedForm f : applicable_closed_forms(query)) {
                    closed_err = std::max(closed_err, std::abs(cgc4_c_closed(query, f) - v));
                    ++closed_count;
                  }
                }
  // sum over (lambda1 alpha1 lambda2 alpha2) of C^{j l a} C^{j l a} = 1
  for (int j1 = 0; j1 <= 3; ++j1)
    for (int j2 = 0; j2 <= 3; ++j2)
      for (int j = std::abs(j1 - j2); j <= j1 + j2; j += 2)
        for (int l = 0; l <= j; ++l) {
          double s = 0.0;
          for (int l1 = 0; l1 <= j1; ++l1)
            for (int a1 = -l1; a1 <= l1; ++a1)
              for (int l2 = 0; l2 <= j2; ++l2) {
                const int a2 = l - a1;
                if (std::abs(a2) > l2) continue;
                const double c = cgc4_c({j1, l1, a1, j2, l2, a2, j, l, l});
                s += c * c;
              }
          ortho_err = std::max(ortho_err, std::abs(s - 1.0));
        }
  for (int j = 0; j <= 6; ++j)
    for (int l = 0; l <= 6; ++l)
      for (int lp = 0; lp <= 6; ++lp)
        for (int k = 0; k <= l; ++k) {
          if (j - l + k < 0) continue;
          const double direct = ninej4(k, k, 0, l - k, j - l + k, j, l, lp, j);
          ninej_err = std::max(ninej_err, std::abs(direct - ninej4_closed(j, l, lp, k)));
        }
  return {make_check("coupling.closed_forms", {{"queries", closed_count}}, 0.0, closed_err, tol),
          make_check("coupling.orthogonality", {}, 0.0, ortho_err, tol),
          make_check("coupling.ninej_closed", {}, 0.0, ninej_err, tol)};
}

inline std::optional<double> env_tolerance() {
  const char* s = std::getenv("HSH4_TOL");
  if (s == nullptr || *s == '\0') return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || !(v > 0.0)) throw UsageError("HSH4_TOL must be a positive number");
  return v;
}

}  // namespace detail

/// Runs one CLI invocation. Exit status: 0 success, 1 failed verification,
/// 2 flag or domain errors.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hsh4: four-dimensional hyperspherical harmonics, O(4) coupling and multipole expansions"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::string format = "text";
  std::optional<double> tol_flag;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--tol", tol_flag, "Series tolerance (default 1e-14, or HSH4_TOL)");
  app.add_option("--max-terms", o.ctl.max_terms, "Series term budget")->check(CLI::PositiveNumber);

  const auto family_check = CLI::IsMember({"c", "h"});
  auto* eval = app.add_subcommand("eval", "Evaluate one harmonic at a point");
  eval->add_option("--family", o.family, "c (j, lambda, alpha) or h (j, 2mu, 2nu)")->check(family_check);
  eval->add_option("--j", o.j, "Rank j")->required();
  eval->add_option("--lambda", o.lambda, "C-family lambda");
  eval->add_option("--alpha", o.alpha, "C-family alpha");
  eval->add_option("--mu", o.mu, "H-family 2*mu (requires --doubled)");
  eval->add_option("--nu", o.nu, "H-family 2*nu (requires --doubled)");
  eval->add_flag("--doubled", o.doubled, "Half-integer projections are given as doubled integers");
  eval->add_option("--point", o.point, "Point x,y,z,z0")->required()->delimiter(',');

  auto* cgc = app.add_subcommand("cgc", "O(4) Clebsch-Gordan coefficient");
  cgc->add_option("--family", o.family, "c or h")->check(family_check);
  cgc->add_option("--q", o.q, "c: j1,l1,a1,j2,l2,a2,j,l,a; h: j1,2mu1,2nu1,j2,2mu2,2nu2,j,2mu,2nu")
      ->required()
      ->delimiter(',');
  cgc->add_flag("--doubled", o.doubled, "Half-integer projections are given as doubled integers");

  auto* ninej = app.add_subcommand("ninej", "4D recoupling coefficient [a b c; d e f; g h k]");
  ninej->add_option("--q", o.q, "a,b,c,d,e,f,g,h,k")->required()->delimiter(',');

  auto* expand = app.add_subcommand("expand", "Multipole coefficients B(n,j) of r^n C_j for r = r1 + r2");
  expand->add_option("--n", o.n, "Power n")->required();
  expand->add_option("--j", o.j, "Rank j")->required()->check(CLI::NonNegativeNumber);
  expand->add_option("--r1", o.r1, "|r1|")->required();
  expand->add_option("--r2", o.r2, "|r2|")->required();
  expand->add_option("--lmax", o.l_max, "Truncation order for infinite series");

  auto* verify = app.add_subcommand("verify", "Numerical verification suites");
  verify->require_subcommand(1);
  auto* v_orth = verify->add_subcommand("orthogonality", "Overlap integrals over S^3, both families");
  v_orth->add_option("--jmax", o.j_max, "Largest rank")->check(CLI::NonNegativeNumber);
  v_orth->add_option("--grid", o.grid, "Node counts n0,n1,n2")->delimiter(',');
  auto* v_exp = verify->add_subcommand("expansion", "Projection oracle against B(n,j) coefficients");
  v_exp->add_option("--seed", o.seed, "Seed of the projection oracle");
  v_exp->add_option("--lmax", o.l_proj, "Largest l projected")->check(CLI::NonNegativeNumber);
  auto* v_coup = verify->add_subcommand("coupling", "Closed forms, orthogonality and 9j closed form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    o.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::text;
    if (const auto env = detail::env_tolerance()) o.ctl.tol = *env;
    if (tol_flag) o.ctl.tol = *tol_flag;
    o.ctl.validate();

    if (*eval) return detail::cmd_eval(o, out);
    if (*cgc) return detail::cmd_cgc(o, out);
    if (*ninej) return detail::cmd_ninej(o, out);
    if (*expand) return detail::cmd_expand(o, out);
    std::vector<CheckResult> checks;
    if (*v_orth) checks = detail::suite_orthogonality(o);
    if (*v_exp) checks = detail::suite_expansion(o);
    if (*v_coup) checks = detail::suite_coupling(o);
    detail::print_checks(checks, o, out);
    return detail::all_pass(checks) ? 0 : 1;
  } catch (const DivergentExpansion& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hsh4::cli
