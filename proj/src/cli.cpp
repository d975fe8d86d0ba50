#include "dmlimits/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dmlimits/chain_io.hpp"
#include "dmlimits/dm_bounds.hpp"
#include "dmlimits/finite_chain.hpp"
#include "dmlimits/gaussian_ar.hpp"
#include "dmlimits/mala.hpp"
#include "dmlimits/report.hpp"

namespace dmlimits {

namespace {

using nlohmann::json;

// Every flag any subcommand may read. Unset optionals mean "not given".
struct Flags {
  std::string format = "json";
  std::string kind;
  std::optional<double> lambda, K, eps, beta, eta, L, d, eps_c, pi_c;
  std::optional<std::string> file, builtin, export_path, out_path;
  std::optional<double> n, theta, delta, k, gamma, gamma_prime, G, M, h, lambda_prime, K_prime;
  std::vector<std::size_t> set, set1, set2;
  std::vector<double> V, nu, V1, V2, n_list;
  std::optional<int> dim;
  std::optional<std::uint64_t> steps, seed;
};

template <class T>
T need(const std::optional<T>& v, const std::string& flag, const std::string& command) {
  if (!v) throw ParseError(command + " requires --" + flag);
  return *v;
}

int need_int(const std::optional<double>& v, const std::string& flag, const std::string& command) {
  const double x = need(v, flag, command);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ParseError("--" + flag + " must be an integer");
  return static_cast<int>(x);
}

json bound_json(const BoundReport& r) {
  json j;
  j["value"] = r.value.value();
  j["gap"] = r.gap;
  j["branch"] = std::string(to_string(r.branch));
  if (r.alpha_star) j["alpha_star"] = *r.alpha_star;
  if (r.alpha_floor) j["alpha_floor"] = *r.alpha_floor;
  if (r.lambda_tilde) j["lambda_tilde"] = *r.lambda_tilde;
  if (r.K_tilde) j["K_tilde"] = *r.K_tilde;
  if (r.alpha_double_star) j["alpha_double_star"] = *r.alpha_double_star;
  return j;
}

json set_json(const StateSet& s) { return json(s); }

void put_optional(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

// ---------------------------------------------------------------- bound

Report cmd_bound(const Flags& f) {
  Report r;
  r.command = "bound " + f.kind;
  const std::string& cmd = r.command;
  put_optional(r.inputs, "lambda", f.lambda);
  put_optional(r.inputs, "K", f.K);
  put_optional(r.inputs, "eps", f.eps);
  put_optional(r.inputs, "beta", f.beta);
  put_optional(r.inputs, "eta", f.eta);
  put_optional(r.inputs, "L", f.L);
  put_optional(r.inputs, "d", f.d);
  put_optional(r.inputs, "eps_c", f.eps_c);
  put_optional(r.inputs, "pi_c", f.pi_c);

  auto params_A = [&] {
    return DmParamsA(need(f.lambda, "lambda", cmd), need(f.K, "K", cmd), need(f.eps, "eps", cmd), f.beta.value_or(1.0));
  };
  if (f.kind == "baxendale") {
    r.outputs["baxendale_bound"] = bound_json(baxendale_bound(params_A()));
  } else if (f.kind == "paraoptima") {
    r.outputs["paraoptima_lower"] = bound_json(paraoptima_lower(params_A()));
  } else if (f.kind == "rosenthal") {
    const DmParamsB p(f.eta.value_or(0.0), f.L.value_or(0.0), need(f.eps, "eps", cmd), need(f.d, "d", cmd));
    r.outputs["rosenthal_bound"] = bound_json(rosenthal_bound(p));
    r.outputs["rosenthal_paraoptima_lower"] = rosenthal_paraoptima_lower(p).value();
  } else if (f.kind == "pic1") {
    r.outputs["pic1_stationary_mass_lower"] =
        pic1_stationary_mass_lower(need(f.lambda, "lambda", cmd), need(f.K, "K", cmd)).value();
  } else if (f.kind == "chain-lower-a") {
    r.outputs["chain_specific_lower_A"] =
        chain_specific_lower_A(Probability(need(f.eps_c, "eps-c", cmd)), Probability(need(f.pi_c, "pi-c", cmd)))
            .value();
  } else {
    r.outputs["chain_specific_lower_B"] = chain_specific_lower_B(Probability(need(f.eps_c, "eps-c", cmd))).value();
  }
  return r;
}

// ---------------------------------------------------------------- chain

struct Source {
  FiniteChain chain;
  std::optional<DriftSpecA> spec_A;  // witness drift spec, when the builtin has one
};

Source load_source(const Flags& f, Report& r) {
  const std::string& cmd = r.command;
  if (f.file && f.builtin) throw ParseError("give either --file or --builtin, not both");
  if (f.file) {
    r.inputs["file"] = *f.file;
    return {load_chain_file(*f.file), std::nullopt};
  }
  const std::string b = need(f.builtin, "file or --builtin", cmd);
  r.inputs["builtin"] = b;
  if (b == "figure1") {
    const DmParamsA p(need(f.lambda, "lambda", cmd), need(f.K, "K", cmd), need(f.eps, "eps", cmd), f.beta.value_or(1.0));
    auto w = witness_figure1(p);
    return {std::move(w.chain), std::move(w.spec)};
  }
  if (b == "two-state") {
    const double lambda = need(f.lambda, "lambda", cmd), delta = need(f.delta, "delta", cmd);
    r.inputs["delta"] = delta;
    return {witness_two_state(lambda, delta), witness_two_state_spec(lambda, delta)};
  }
  if (b == "rosenthal-2") return {witness_rosenthal(need(f.eps, "eps", cmd)), std::nullopt};
  const int n = need_int(f.n, "n", cmd);
  r.inputs["n"] = n;
  if (b == "cycle") return {cycle_walk(n), std::nullopt};
  const double theta = need(f.theta, "theta", cmd);
  r.inputs["theta"] = theta;
  return {star_walk(n, theta), std::nullopt};
}

json distribution_json(const Distribution& d) { return json(d.weights()); }

json verification_json(const Verification& v) {
  json j;
  j["holds"] = v.holds;
  if (!v.holds) {
    j["condition"] = v.condition;
    j["message"] = v.message;
    if (v.state) j["state"] = *v.state;
  }
  return j;
}

json floor_json(const SubsetFloor& s) {
  return {{"value", s.value}, {"best_set", set_json(s.best_set)}, {"pi_C", s.pi_C},
          {"eps_C", s.eps_C}, {"sets_scanned", s.sets_scanned}};
}

Report cmd_chain(const Flags& f) {
  Report r;
  r.command = "chain " + f.kind;
  const std::string& cmd = r.command;
  put_optional(r.inputs, "lambda", f.lambda);
  put_optional(r.inputs, "K", f.K);
  put_optional(r.inputs, "eps", f.eps);
  put_optional(r.inputs, "beta", f.beta);
  Source src = load_source(f, r);
  const FiniteChain& chain = src.chain;
  const std::size_t n = chain.size();
  auto states = [&](const std::vector<std::size_t>& v) { return make_state_set(v, n); };
  auto all_states = [&] {
    StateSet s(n);
    for (std::size_t x = 0; x < n; ++x) s[x] = x;
    return s;
  };

  if (f.kind == "load") {
    json P = json::array();
    for (std::size_t x = 0; x < n; ++x) {
      json row = json::array();
      for (std::size_t y = 0; y < n; ++y) row.push_back(chain(x, y));
      P.push_back(std::move(row));
    }
    r.outputs["chain"] = {{"n_states", n}, {"P", P}, {"labels", chain.labels()}};
    if (f.export_path) {
      save_chain_json(chain, *f.export_path);
      r.inputs["export"] = *f.export_path;
    }
  } else if (f.kind == "stationary") {
    const auto st = stationary_distribution(chain);
    json j{{"pi", distribution_json(st.pi)}, {"unique", st.unique}, {"closed_classes", st.closed_classes}};
    const bool rev = is_reversible(chain, st.pi);
    j["reversible"] = rev;
    if (rev) j["nonneg_definite"] = is_nonneg_definite(chain, st.pi);
    j["trivial_on_support"] = trivial_on_support(st.pi);
    if (!st.unique) r.warnings.push_back("stationary law is not unique; reporting the one on the first closed class");
    r.outputs["stationary_distribution"] = j;
  } else if (f.kind == "rate") {
    const auto t = true_rate(chain);
    json j{{"rate", t.rate}, {"cross_checked", t.cross_checked}, {"agrees", t.agrees}};
    j["power_estimate"] = t.power_estimate;
    if (!t.cross_checked) r.warnings.push_back("power-iteration cross-check had no usable TV decay to fit");
    else if (!t.agrees) r.warnings.push_back("spectral and power-iteration estimates differ by more than 1e-3");
    r.outputs["true_rate"] = j;
  } else if (f.kind == "epsc") {
    if (f.set.empty()) throw ParseError(cmd + " requires --set");
    const auto C = states(f.set);
    r.inputs["set"] = set_json(C);
    const auto e = epsilon_C(chain, C);
    json j{{"value", e.value.value()}};
    if (e.nu) j["nu"] = distribution_json(*e.nu);
    r.outputs["epsilon_C"] = j;
  } else if (f.kind == "verify-a") {
    DriftSpecA spec;
    if (!f.V.empty() || !src.spec_A) {
      if (f.V.empty() || f.set.empty()) throw ParseError(cmd + " requires --V and --set for this chain");
      spec.V = f.V;
      spec.C = states(f.set);
      if (!f.nu.empty()) spec.nu = Distribution(f.nu, 1e-9);
    } else {
      spec = *src.spec_A;
    }
    const DmParamsA p(need(f.lambda, "lambda", cmd), need(f.K, "K", cmd), need(f.eps, "eps", cmd), f.beta.value_or(1.0));
    const auto v = verify_A(chain, spec, p);
    json j = verification_json(v);
    j["V"] = spec.V;
    j["C"] = set_json(spec.C);
    r.outputs["verify_A"] = j;
    const auto st = stationary_distribution(chain);
    r.outputs["stationary_mass_C"] = st.pi.mass(spec.C);
    r.outputs["pic1_stationary_mass_lower"] = pic1_stationary_mass_lower(p.lambda, p.K).value();
  } else if (f.kind == "verify-b") {
    DriftSpecB spec{f.V.empty() ? std::vector<double>(n, 0.0) : f.V, need(f.d, "d", cmd)};
    const DmParamsB p(f.eta.value_or(0.0), f.L.value_or(0.0), need(f.eps, "eps", cmd), spec.d);
    r.inputs["d"] = spec.d;
    r.inputs["eta"] = p.eta;
    r.inputs["L"] = p.L;
    const auto v = verify_B(chain, spec, p);
    const auto C = spec.level_set();
    json j = verification_json(v);
    j["level_set"] = set_json(C);
    r.outputs["verify_B"] = j;
    r.outputs["stationary_mass_C"] = stationary_distribution(chain).pi.mass(C);
  } else if (f.kind == "verify-bivariate") {
    if (f.V1.empty() || f.V2.empty()) throw ParseError(cmd + " requires --V1 and --V2");
    const auto spec = BivariateDriftSpec::product(f.V1, f.V2, f.set1.empty() ? all_states() : states(f.set1),
                                                  f.set2.empty() ? all_states() : states(f.set2),
                                                  need(f.lambda_prime, "lambda-prime", cmd),
                                                  need(f.K_prime, "K-prime", cmd));
    const auto v = verify_bivariate(chain, spec);
    json j{{"holds", v.holds}, {"mass_sum", v.mass_sum}};
    if (v.violating_pair) j["violating_pair"] = {v.violating_pair->first, v.violating_pair->second};
    r.outputs["verify_bivariate"] = j;
  } else if (f.kind == "m0") {
    r.outputs["min_majority_cardinality"] = min_majority_cardinality(stationary_distribution(chain).pi);
  } else if (f.kind == "m1") {
    r.outputs["max_degree"] = max_degree(adjacency_of(chain));
  } else if (f.kind == "floor-a" || f.kind == "floor-b") {
    const bool a = f.kind == "floor-a";
    const auto s = a ? chain_floor_A(chain) : chain_floor_B(chain);
    r.outputs[a ? "chain_floor_A" : "chain_floor_B"] = floor_json(s);
    r.warnings.insert(r.warnings.end(), s.warnings.begin(), s.warnings.end());
  }
  return r;
}

// ---------------------------------------------------------------- gaussian

std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::ostringstream os;
  os.precision(kReportDigits);
  os << "n,rho_n_star,rosenthal_side_lower,baxendale_optimum\n";
  for (const auto& row : rows)
    os << row.n << ',' << row.rho_n_star << ',' << row.rosenthal_side_lower << ',' << row.baxendale_optimum << '\n';
  return os.str();
}

struct Outcome {
  Report report;
  std::optional<std::string> csv;
};

Outcome cmd_gaussian(const Flags& f) {
  Outcome o;
  Report& r = o.report;
  r.command = "gaussian " + f.kind;
  const std::string& cmd = r.command;
  const double k = f.k.value_or(100.0);
  if (f.kind == "curve") {
    if (f.n_list.empty()) throw ParseError(cmd + " requires --n-list");
    std::vector<int> ns;
    for (double x : f.n_list) ns.push_back(need_int(std::optional<double>(x), "n-list", cmd));
    r.inputs["n_list"] = ns;
    r.inputs["k"] = k;
    const auto rows = curve(ns, k);
    json arr = json::array();
    for (const auto& row : rows)
      arr.push_back({{"n", row.n},
                     {"rho_n_star", row.rho_n_star},
                     {"rosenthal_side_lower", row.rosenthal_side_lower},
                     {"baxendale_optimum", row.baxendale_optimum}});
    r.outputs["curve"] = arr;
    o.csv = curve_csv(rows);
    if (f.out_path) {
      std::ofstream out(*f.out_path);
      if (!out) throw ParseError("cannot write " + *f.out_path);
      out << *o.csv;
    }
    return o;
  }
  const int n = need_int(f.n, "n", cmd);
  r.inputs["n"] = n;
  if (f.kind == "optimize") {
    r.inputs["k"] = k;
    const auto opt = optimize_baxendale(GaussianArConfig(n, k));
    json j = bound_json(opt.best);
    j["a"] = opt.a;
    j["d"] = opt.d;
    r.outputs["optimize_baxendale"] = j;
    r.outputs["true_rate_reference"] = true_rate_reference().value();
    if (opt.best.value.value() == 1.0) r.warnings.push_back("bound rounds to 1 in double precision; see gap");
  } else if (f.kind == "floor") {
    const auto rho = rho_star_lower(n);
    r.outputs["rho_star_lower"] = {{"value", rho.rho.value()}, {"gap", rho.gap}, {"argmin_D", rho.argmin_D}};
    r.outputs["true_rate_reference"] = true_rate_reference().value();
  } else {
    r.outputs["rosenthal_side_lower"] = {{"value", rosenthal_side_lower(n).value()},
                                         {"chi_square_median", chi_square_median(n)}};
  }
  return o;
}

// ---------------------------------------------------------------- mala

std::string table_csv(const std::vector<AsymptoticRow>& rows) {
  std::ostringstream os;
  os.precision(kReportDigits);
  os << "n,floor_A,floor_B,scaled_gap_A,scaled_gap_B\n";
  for (const auto& row : rows)
    os << row.n << ',' << row.floor_A << ',' << row.floor_B << ',' << row.scaled_gap_A << ',' << row.scaled_gap_B
       << '\n';
  return os.str();
}

Outcome cmd_mala(const Flags& f) {
  Outcome o;
  Report& r = o.report;
  r.command = "mala " + f.kind;
  const std::string& cmd = r.command;
  if (f.kind == "simulate") {
    const int dim = need(f.dim, "dim", cmd);
    const double h = need(f.h, "h", cmd);
    const auto steps = need(f.steps, "steps", cmd);
    const auto seed = need(f.seed, "seed", cmd);
    r.inputs = {{"dim", dim}, {"h", h}, {"steps", steps}, {"seed", seed}, {"target", "standard_normal"}};
    const auto s = simulate(MalaTarget::standard_normal(dim, h), steps, seed);
    r.outputs["simulate"] = {{"n_steps", s.n_steps},   {"accept_rate", s.accept_rate}, {"mean", s.mean},
                             {"variance", s.variance}, {"ks_stat", s.ks_stat}};
    return o;
  }
  const double gamma = need(f.gamma, "gamma", cmd), G = need(f.G, "G", cmd), M = need(f.M, "M", cmd);
  r.inputs = {{"gamma", gamma}, {"G", G}, {"M", M}};
  if (f.kind == "table") {
    if (f.n_list.empty()) throw ParseError(cmd + " requires --n-list");
    const double gp = need(f.gamma_prime, "gamma-prime", cmd);
    r.inputs["gamma_prime"] = gp;
    r.inputs["n_list"] = f.n_list;
    const auto rows = asymptotic_table(gamma, gp, G, M, f.n_list);
    json arr = json::array();
    for (const auto& row : rows) {
      arr.push_back({{"n", row.n},
                     {"floor_A", row.floor_A},
                     {"floor_B", row.floor_B},
                     {"scaled_gap_A", row.scaled_gap_A},
                     {"scaled_gap_B", row.scaled_gap_B}});
      if (row.scaled_gap_A == 0.0 || row.scaled_gap_B == 0.0)
        r.warnings.push_back("floor gap underflows to 0 at n = " + std::to_string(static_cast<long long>(row.n)));
    }
    r.outputs["asymptotic_table"] = arr;
    o.csv = table_csv(rows);
    return o;
  }
  const double n = need(f.n, "n", cmd);
  r.inputs["n"] = n;
  if (f.kind == "floor-a") {
    const auto a = rho_opt_lower_A(n, gamma, G, M);
    r.outputs["rho_opt_lower_A"] = {{"value", a.value.value()}, {"gap", a.gap}, {"argmin_D", a.argmin_D}};
    r.outputs["regional_floor"] = regional_floor(n, gamma, G).value();
  } else {
    const auto b = rho_opt_lower_B(n, gamma, G, M);
    r.outputs["rho_opt_lower_B"] = {{"value", b.value.value()},
                                    {"gap", b.gap},
                                    {"simplified", b.simplified.value()},
                                    {"simplified_gap", b.simplified_gap},
                                    {"simplified_below", b.simplified_below}};
    if (!b.simplified_below)
      r.warnings.push_back("1 - hM < 1/sqrt(2): the simplified floor is not guaranteed to lie below the stated one");
  }
  return o;
}

// ---------------------------------------------------------------- wiring

void add_list(CLI::App* app, const std::string& name, std::vector<double>& target, const std::string& help) {
  app->add_option(name, target, help)->delimiter(',');
}

void add_set(CLI::App* app, const std::string& name, std::vector<std::size_t>& target, const std::string& help) {
  app->add_option(name, target, help)->delimiter(',');
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Drift-and-minorization convergence-rate bounds and their limits", "dmlimits"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", f.format, "Output format for tables")->check(CLI::IsMember({"json", "csv"}));

  auto* bound = app.add_subcommand("bound", "Closed-form drift-and-minorization bounds");
  bound->add_option("kind", f.kind)
      ->required()
      ->check(CLI::IsMember({"baxendale", "rosenthal", "paraoptima", "pic1", "chain-lower-a", "chain-lower-b"}));
  bound->add_option("--lambda", f.lambda);
  bound->add_option("--K", f.K);
  bound->add_option("--eps", f.eps);
  bound->add_option("--beta", f.beta);
  bound->add_option("--eta", f.eta);
  bound->add_option("--L", f.L);
  bound->add_option("--d", f.d);
  bound->add_option("--eps-c", f.eps_c);
  bound->add_option("--pi-c", f.pi_c);

  auto* chain = app.add_subcommand("chain", "Finite chains: witnesses, verification, exact rates");
  chain->add_option("action", f.kind)
      ->required()
      ->check(CLI::IsMember({"load", "stationary", "rate", "epsc", "verify-a", "verify-b", "verify-bivariate", "m0",
                             "m1", "floor-a", "floor-b"}));
  chain->add_option("--file", f.file, "Chain file (.json or CSV)");
  chain->add_option("--builtin", f.builtin)
      ->check(CLI::IsMember({"figure1", "two-state", "rosenthal-2", "cycle", "star"}));
  chain->add_option("--export", f.export_path, "Write the chain as JSON (load only)");
  chain->add_option("--lambda", f.lambda);
  chain->add_option("--K", f.K);
  chain->add_option("--eps", f.eps);
  chain->add_option("--beta", f.beta);
  chain->add_option("--eta", f.eta);
  chain->add_option("--L", f.L);
  chain->add_option("--d", f.d);
  chain->add_option("--n", f.n);
  chain->add_option("--theta", f.theta);
  chain->add_option("--delta", f.delta);
  chain->add_option("--lambda-prime", f.lambda_prime);
  chain->add_option("--K-prime", f.K_prime);
  add_set(chain, "--set", f.set, "Comma-separated state indices");
  add_set(chain, "--set1", f.set1, "First projection of the product set");
  add_set(chain, "--set2", f.set2, "Second projection of the product set");
  add_list(chain, "--V", f.V, "Drift function values");
  add_list(chain, "--nu", f.nu, "Minorization measure");
  add_list(chain, "--V1", f.V1, "First bivariate drift function");
  add_list(chain, "--V2", f.V2, "Second bivariate drift function");

  auto* gaussian = app.add_subcommand("gaussian", "Gaussian autoregressive case study");
  gaussian->add_option("action", f.kind)
      ->required()
      ->check(CLI::IsMember({"optimize", "floor", "rosenthal-floor", "curve"}));
  gaussian->add_option("--n", f.n);
  gaussian->add_option("--k", f.k);
  add_list(gaussian, "--n-list", f.n_list, "Comma-separated dimensions");
  gaussian->add_option("--out", f.out_path, "Also write the curve CSV here");

  auto* mala = app.add_subcommand("mala", "MALA floors, tables and simulation");
  mala->set_help_flag("--help", "Print this help message and exit");
  mala->add_option("action", f.kind)->required()->check(CLI::IsMember({"floor-a", "floor-b", "table", "simulate"}));
  mala->add_option("--n", f.n);
  mala->add_option("--gamma", f.gamma);
  mala->add_option("--gamma-prime", f.gamma_prime);
  mala->add_option("--G", f.G);
  mala->add_option("--M", f.M);
  add_list(mala, "--n-list", f.n_list, "Comma-separated dimensions");
  mala->add_option("--dim", f.dim);
  mala->add_option("--h", f.h);
  mala->add_option("--steps", f.steps);
  mala->add_option("--seed", f.seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 1;
  }

  try {
    Outcome o;
    if (bound->parsed()) o.report = cmd_bound(f);
    else if (chain->parsed()) o.report = cmd_chain(f);
    else if (gaussian->parsed()) o = cmd_gaussian(f);
    else o = cmd_mala(f);

    if (f.format == "csv") {
      if (!o.csv) throw ParseError("--format csv is only available for tables (gaussian curve, mala table)");
      out << *o.csv;
    } else {
      out << o.report.to_json() << '\n';
    }
    for (const auto& w : o.report.warnings) err << "warning: " << w << '\n';
    return 0;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dmlimits
