#pragma once

// Command dispatch for the `ncfree` tool. Every subcommand is a thin wrapper
// over library calls; JSON goes to `out` with sorted keys.
//
// Exit codes: 0 success, 1 numerical failure (or a failed verification),
// 2 precondition violation, 3 parse error.

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncfree/domains.hpp"
#include "ncfree/errors.hpp"
#include "ncfree/girard.hpp"
#include "ncfree/json_io.hpp"
#include "ncfree/parse.hpp"
#include "ncfree/sqrtlib.hpp"
#include "ncfree/symbasis.hpp"
#include "ncfree/verify.hpp"

namespace ncfree {

enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitPrecondition = 2, kExitParse = 3 };

namespace cli_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline cd parse_constant(const std::string& text) {
  const FreePoly p = parse_polynomial(text);
  if (p.degree() > 0) throw ParseError("expected a constant, got '" + text + "'", 0);
  return p.coefficient({});
}

inline std::vector<cd> parse_centers(const std::string& text) {
  std::vector<cd> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_constant(s));
  return out;
}

/// Rows separated by ';', entries by ','.
inline PolyMatrix parse_delta(const std::string& text) {
  PolyMatrix out;
  for (const auto& row : split(text, ';')) {
    std::vector<FreePoly> r;
    for (const auto& e : split(row, ',')) {
      FreePoly p = parse_polynomial(e);
      r.push_back(p.chart() == Chart::uv ? from_uv(p) : p);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

inline double smallest_singular_value(const CMatrix& x) {
  const Eigen::VectorXd s = singular_values(x);
  return s(s.size() - 1);
}

/// min |l_i + l_j| over eigenvalue pairs (i <= j); zero iff sigma(x) meets sigma(-x).
inline double q_margin(const CMatrix& x) {
  const auto ev = spectrum(x).eigenvalues;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i; j < ev.size(); ++j) m = std::min(m, std::abs(ev[i] + ev[j]));
  return m;
}

}  // namespace cli_detail

/// Runs the tool on argv; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free noncommutative symmetric functions, square-root branches and Newton-Girard identities", "ncfree"};
  app.require_subcommand(1);

  int girard_n = 0;
  bool girard_verify = false;
  std::vector<int> girard_levels{2, 3};
  int girard_trials = 20;
  std::uint64_t seed = 0;
  auto* girard_cmd = app.add_subcommand("girard", "Print P_n in alpha, beta, gamma");
  girard_cmd->add_option("--n", girard_n, "Index n (any integer)")->required();
  girard_cmd->add_flag("--verify", girard_verify, "Check x^n + y^n = P_n(pi(x, y)) on random pairs");
  girard_cmd->add_option("--levels", girard_levels, "Matrix sizes for --verify")->delimiter(',');
  girard_cmd->add_option("--trials", girard_trials, "Samples per level for --verify");
  girard_cmd->add_option("--seed", seed, "Random seed");

  std::string expr;
  auto* decompose_cmd = app.add_subcommand("decompose", "Rewrite a symmetric polynomial over U, M_j and alpha, beta, gamma");
  decompose_cmd->add_option("--expr", expr, "Polynomial in x, y (or u, v)")->required();

  std::string matrix_file;
  bool enumerate = false;
  auto* sqrt_cmd = app.add_subcommand("sqrt", "Existence and enumeration of free square roots");
  sqrt_cmd->add_option("--matrix", matrix_file, "Matrix tuple JSON with d = 1")->required();
  sqrt_cmd->add_flag("--enumerate", enumerate, "List all roots in alg(x)");

  std::string input;
  auto* pi_cmd = app.add_subcommand("pi", "Evaluate pi(w) = (u, v^2, v u v)");
  pi_cmd->add_option("--input", input, "Matrix tuple JSON with d = 2")->required();

  double fiber_tol = 1e-8;
  auto* fiber_cmd = app.add_subcommand("fiber", "All w' with pi(w') = pi(w)");
  fiber_cmd->add_option("--input", input, "Matrix tuple JSON with d = 2")->required();
  fiber_cmd->add_option("--tol", fiber_tol, "Relative tolerance on v' u v' = v u v");

  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--seed", seed, "Random seed");

  std::string pred, centers_text, delta_text;
  double radius = 0.0, tol = kDefaultTol;
  auto* domain_cmd = app.add_subcommand("check-domain", "Membership in a domain or matrix class");
  domain_cmd->add_option("--pred", pred, "Predicate")->required()->check(CLI::IsMember({"Bdelta", "D", "Q", "I", "So", "Ugamma"}));
  domain_cmd->add_option("--input", input, "Matrix tuple JSON")->required();
  domain_cmd->add_option("--centers", centers_text, "Comma-separated disc centers (D, Ugamma)");
  domain_cmd->add_option("--radius", radius, "Disc radius (default: half of min(min|c|, separation/4))");
  domain_cmd->add_option("--delta", delta_text, "Polynomial matrix for Bdelta: rows ';', entries ','");
  domain_cmd->add_option("--tol", tol, "Tolerance for rank-type decisions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitPrecondition;
  }

  try {
    if (girard_cmd->parsed()) {
      out << girard_text(girard_n) << '\n';
      if (!girard_verify) return kExitOk;
      if (girard_trials < 1) throw PreconditionError("--trials must be positive");
      Rng rng(seed);
      Report rep;
      rep.seed = seed;
      const double t = girard_n >= 0 ? 1e-8 : 1e-7;
      for (int level : girard_levels) {
        if (level < 1) throw DimensionError("levels must be positive");
        for (int k = 0; k < girard_trials; ++k) {
          const MatrixTuple w = girard_n >= 0 ? sample_pair_v_invertible(level, rng) : sample_negative_admissible(level, rng);
          const Report one = verify_girard(girard_n, w, t);
          rep.append(one, "trial=" + std::to_string(k) + ".");
        }
      }
      cli_detail::emit(out, to_json(rep));
      return rep.passed() ? kExitOk : kExitNumerical;
    }

    if (decompose_cmd->parsed()) {
      const FreePoly p = parse_polynomial(expr);
      const FreePoly px = p.chart() == Chart::uv ? from_uv(p) : p.with_chart(Chart::xy);
      const GenPoly g = decompose_symmetric(px);
      cli_detail::emit(out, {{"generators", to_text(g)}, {"reduced", to_text(reduce_to_pi(g))}, {"uv", to_text(expand_back(g))}});
      return kExitOk;
    }

    if (sqrt_cmd->parsed()) {
      const MatrixTuple t = read_tuple_file(matrix_file);
      if (t.d() != 1) throw DimensionError("sqrt expects a tuple with d = 1");
      const bool exists = sqrt_exists(t[0]);
      json j{{"exists", exists}};
      if (enumerate && exists) j["roots"] = root_set_to_json(all_square_roots(t[0]));
      cli_detail::emit(out, j);
      return kExitOk;
    }

    if (pi_cmd->parsed()) {
      const PiValue p = pi(read_tuple_file(input));
      cli_detail::emit(out, {{"alpha", matrix_to_json(p.alpha)}, {"beta", matrix_to_json(p.beta)}, {"gamma", matrix_to_json(p.gamma)}});
      return kExitOk;
    }

    if (fiber_cmd->parsed()) {
      FiberOptions opt;
      opt.tol = fiber_tol;
      const auto f = fiber(read_tuple_file(input), opt);
      json list = json::array();
      for (const auto& w : f) list.push_back(tuple_to_json(w));
      cli_detail::emit(out, {{"count", f.size()}, {"fiber", list}});
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      const Report rep = run_suite(suite, seed);
      cli_detail::emit(out, to_json(rep));
      return rep.passed() ? kExitOk : kExitNumerical;
    }

    if (domain_cmd->parsed()) {
      const MatrixTuple t = read_tuple_file(input);
      json j{{"pred", pred}};
      json res = json::object();
      bool member = false;
      auto simple_set = [&] {
        if (centers_text.empty()) throw PreconditionError("--centers is required for " + pred);
        const auto c = cli_detail::parse_centers(centers_text);
        SimpleSet s{c, radius > 0.0 ? radius : default_radius(c)};
        return s;
      };
      if (pred == "Bdelta") {
        if (delta_text.empty()) throw PreconditionError("--delta is required for Bdelta");
        const double norm = op_norm(eval_delta(cli_detail::parse_delta(delta_text), t));
        member = norm < 1.0;
        res["norm"] = norm;
      } else if (pred == "D") {
        if (t.d() != 1) throw DimensionError("D expects a tuple with d = 1");
        const SimpleSet s = simple_set();
        member = in_D_gamma(t[0], s);
        double worst = 0.0;
        for (cd z : spectrum(t[0]).eigenvalues) {
          double best = std::numeric_limits<double>::infinity();
          for (cd c : s.centers) best = std::min(best, std::abs(z - c));
          worst = std::max(worst, best);
        }
        res["max_center_distance"] = worst;
        res["radius"] = s.radius;
      } else if (pred == "Q") {
        if (t.d() != 1) throw DimensionError("Q expects a tuple with d = 1");
        member = in_Q(t[0], tol);
        res["min_eigenvalue_pair_sum"] = cli_detail::q_margin(t[0]);
      } else if (pred == "I") {
        if (t.d() != 1) throw DimensionError("I expects a tuple with d = 1");
        member = in_I(t[0], tol);
        res["min_singular_value"] = cli_detail::smallest_singular_value(t[0]);
      } else if (pred == "So") {
        member = in_S_o(t, tol);
        res["min_eigenvalue_pair_sum"] = cli_detail::q_margin(v_part(t));
      } else if (pred == "Ugamma") {
        if (t.d() != 2) throw DimensionError("Ugamma expects the pair (u, x)");
        const SimpleSet s = simple_set();
        member = in_U_gamma(t[0], t[1], s);
        json per = json::array();
        if (in_D_gamma(t[1], s)) {
          BranchSpec spec{s.centers, s.radius, {}};
          for (const auto& tau : all_taus(s.centers.size())) {
            spec.tau = tau;
            if (spec.tau_constant()) continue;
            per.push_back({{"tau", tau}, {"commutator", variety_residual_V(t[0], t[1], spec)}});
          }
        }
        res["variety_residuals"] = per;
      }
      j["member"] = member;
      j["residuals"] = res;
      cli_detail::emit(out, j);
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace ncfree
