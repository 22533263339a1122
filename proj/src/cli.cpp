#include "jsr/cli.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "jsr/bounds.hpp"
#include "jsr/cocycle.hpp"
#include "jsr/errors.hpp"
#include "jsr/io.hpp"
#include "jsr/norm.hpp"

namespace jsr {

namespace {

using nlohmann::json;

struct Outcome {
  std::string csv;
  json meta = json::object();
  int code = kExitOk;
  std::string kind;
  std::string reason;
  std::uint64_t multiplications = 0;
};

json config_echo(const RunConfig& c) {
  json gamma = json::array();
  for (const auto& g : c.gamma) gamma.push_back(format_rational(g));
  return {{"command", command_name(c.command)},
          {"input", c.input},
          {"out", c.out},
          {"max_depth", c.max_depth},
          {"norm", c.norm},
          {"adapted_depth", c.adapted_depth},
          {"rho_hat", c.rho_hat ? json(*c.rho_hat) : json(nullptr)},
          {"delta", c.delta},
          {"gamma", gamma},
          {"seed", c.seed},
          {"workers", c.workers},
          {"word", c.word},
          {"svg", c.svg},
          {"budget", c.budget}};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

NormSpec make_norm(const RunConfig& c, const MatrixSet& set, json& meta) {
  if (c.norm == "euclidean") return NormSpec::euclidean();
  require(c.norm == "adapted", "unknown norm '" + c.norm + "' (expected euclidean or adapted)");
  double rho = 0.0;
  if (c.rho_hat) {
    rho = *c.rho_hat;
  } else {
    const PrunedBounds pb = pruned_bounds(set, c.delta, std::max<std::size_t>(c.max_depth, 1), c.budget);
    rho = 0.5 * (pb.lower + pb.upper);
  }
  require(rho > 0.0, "rho-hat must be positive");
  meta["rho_hat_used"] = rho;
  return NormSpec::adapted(set, rho, c.adapted_depth, c.budget);
}

Outcome run_bounds(const RunConfig& c, bool fit) {
  const MatrixSet set = load_matrix_set(c.input);
  Outcome o;
  const NormSpec norm = make_norm(c, set, o.meta);
  EnumerationOptions opts;
  opts.budget = c.budget;
  opts.workers = c.workers;
  BoundsReport report = sandwich(set, c.max_depth, norm, opts);
  o.multiplications = report.multiplications;
  o.meta["norm_used"] = report.norm_used;
  o.meta["rows"] = report.rows.size();
  o.meta["truncated"] = report.truncated;

  if (fit) {
    require(report.rows.size() >= 6, "convergence needs at least 6 rows (max-depth >= 6 within budget)");
    const RateFit rate = fit_rate(report);
    report.fitted_rate = rate.r_hat;
    o.meta["fitted_rate"] = rate.r_hat ? json(*rate.r_hat) : json(nullptr);
    o.meta["fit_r_squared"] = rate.r_squared ? json(*rate.r_squared) : json(nullptr);
    o.meta["exact_convergence"] = rate.exact_convergence;
    o.meta["fit_points"] = rate.points;
  }
  o.csv = bounds_csv(report);
  if (c.svg) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : report.rows) pts.emplace_back(static_cast<double>(row.n), row.gap);
    write_atomic(c.out + ".svg", loglog_svg(pts, "gap vs n", "n", "gap"));
  }
  if (report.truncated) {
    o.code = kExitInconclusive;
    o.kind = "budget_exceeded";
    o.reason = "budget of " + std::to_string(c.budget) + " multiplications stopped the run at n = " +
               std::to_string(report.rows.size());
  }
  return o;
}

Outcome run_pruned(const RunConfig& c) {
  require(c.delta > 0.0, "delta must be positive");
  const MatrixSet set = load_matrix_set(c.input);
  const PrunedBounds pb = pruned_bounds(set, c.delta, c.max_depth, c.budget);
  Outcome o;
  o.multiplications = pb.products;
  o.csv = "lower,upper,width,conclusive,depth_reached,products,lower_witness\n" + format_number(pb.lower) + ',' +
          format_number(pb.upper) + ',' + format_number(pb.upper - pb.lower) + ',' +
          (pb.conclusive ? "true" : "false") + ',' + std::to_string(pb.depth_reached) + ',' +
          std::to_string(pb.products) + ',' + format_word(pb.lower_witness) + '\n';
  o.meta["conclusive"] = pb.conclusive;
  if (!pb.conclusive) {
    o.code = kExitInconclusive;
    o.kind = "inconclusive";
    o.reason = "gap " + format_number(pb.upper - pb.lower) + " still exceeds delta at depth " +
               std::to_string(pb.depth_reached);
  }
  return o;
}

Outcome run_splitting(const RunConfig& c) {
  const MatrixSet raw = load_matrix_set(c.input);
  const PeriodicWord x(parse_word(c.word));
  x.validate(raw);
  require(c.max_depth >= 1, "max-depth must be >= 1");
  Outcome o;
  double rho = 0.0;
  if (c.rho_hat) {
    rho = *c.rho_hat;
  } else {
    rho = pruned_bounds(raw, c.delta, std::max<std::size_t>(c.max_depth, 1), c.budget).lower;
  }
  require(rho > 0.0, "rho-hat must be positive");
  const MatrixSet set = raw.scaled(1.0 / rho);
  o.meta["rho_hat_used"] = rho;

  const std::size_t r = x.period();
  const ExponentEstimate exps = detect_p(set, x, std::max<std::size_t>(4 * r, 32));
  const SplittingResult split = finite_splitting(set, x, exps.p, c.max_depth);
  const SplittingDiagnostics diag = splitting_residuals(set, x, split, c.max_depth);

  o.meta["p"] = exps.p;
  o.meta["theta"] = exps.theta;
  o.meta["principal_angle"] = split.principal_angle;
  o.meta["invariance_residual"] = diag.invariance_residual;
  o.meta["fixed_horizon_invariance"] = diag.fixed_horizon_invariance;
  o.meta["commutation_residual"] = diag.commutation_residual;
  o.meta["delta_hat"] = std::isfinite(diag.delta_hat) ? json(diag.delta_hat) : json(nullptr);
  o.meta["delta0_hat"] = std::isfinite(diag.delta0_hat) ? json(diag.delta0_hat) : json(nullptr);
  auto fit_json = [](const LogLinearFit& f) {
    return json{{"rate", f.rate ? json(*f.rate) : json(nullptr)},
                {"constant", f.constant ? json(*f.constant) : json(nullptr)},
                {"r_squared", f.r_squared ? json(*f.r_squared) : json(nullptr)},
                {"exact", f.exact}};
  };
  o.meta["contraction_fit"] = fit_json(diag.contraction_fit);
  o.meta["cauchy_fit"] = fit_json(diag.cauchy_fit);

  o.csv = "m,contraction,cauchy\n";
  for (std::size_t m = 0; m < diag.contraction.size(); ++m) {
    o.csv += std::to_string(m + 1) + ',' + format_number(diag.contraction[m]) + ',' + format_number(diag.cauchy[m]) + '\n';
  }
  return o;
}

OrbitClosure sturmian_closure(const RunConfig& c) {
  if (!c.gamma.empty()) return OrbitClosure::sturmian(c.gamma);
  require(!c.input.empty(), "either --gamma or an orbit-closure --input is required");
  return load_orbit_closure(c.input);
}

Outcome run_sturmian(const RunConfig& c) {
  const OrbitClosure z = sturmian_closure(c);
  require(z.kind() == OrbitClosure::Kind::sturmian, "sturmian: input must describe a Sturmian closure");
  const Rational& finest = z.convergents().back();
  const ShiftPoint w = sturmian_word(finest, Rational{0, 1}, c.max_depth);
  Outcome o;
  o.csv = "i,symbol\n";
  for (std::size_t i = 0; i < w.symbols.size(); ++i) o.csv += std::to_string(i) + ',' + std::to_string(w.symbols[i]) + '\n';
  o.meta["gamma"] = format_rational(finest);
  o.meta["balanced"] = is_balanced(w.symbols, w.symbols.size());
  return o;
}

Outcome run_epsilon(const RunConfig& c) {
  const OrbitClosure z = sturmian_closure(c);
  Outcome o;
  o.csv = "n,epsilon,agreement,period,orbit,exact\n";
  bool all_exact = true;
  for (std::size_t n = 1; n <= c.max_depth; ++n) {
    const EpsilonResult e = epsilon_of_n(z, n, c.budget);
    all_exact = all_exact && e.exact;
    o.csv += std::to_string(n) + ',' + format_number(e.value) + ',' +
             (e.value == 0.0 ? std::string("inf") : std::to_string(e.agreement)) + ',' +
             std::to_string(e.orbit.period()) + ',' + format_word(e.orbit.cycle()) + ',' +
             (e.exact ? "true" : "false") + '\n';
  }
  o.meta["certified_upper_bounds_only"] = !all_exact;
  return o;
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == '"') ch = '\'';
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "bounds") return Command::bounds;
  if (name == "pruned") return Command::pruned;
  if (name == "splitting") return Command::splitting;
  if (name == "sturmian") return Command::sturmian;
  if (name == "epsilon") return Command::epsilon;
  if (name == "convergence") return Command::convergence;
  throw ValueError("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::bounds: return "bounds";
    case Command::pruned: return "pruned";
    case Command::splitting: return "splitting";
    case Command::sturmian: return "sturmian";
    case Command::epsilon: return "epsilon";
    case Command::convergence: return "convergence";
  }
  return "unknown";
}

int run(const RunConfig& config, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  bool produced = false;
  try {
    require(!config.out.empty(), "--out is required");
    require(config.max_depth >= 1, "max-depth must be >= 1");
    switch (config.command) {
      case Command::bounds: o = run_bounds(config, false); break;
      case Command::convergence: o = run_bounds(config, true); break;
      case Command::pruned: o = run_pruned(config); break;
      case Command::splitting: o = run_splitting(config); break;
      case Command::sturmian: o = run_sturmian(config); break;
      case Command::epsilon: o = run_epsilon(config); break;
    }
    produced = true;
  } catch (const InvariantViolation& e) {
    o.code = kExitInvariant, o.kind = "invariant_violation", o.reason = e.what();
  } catch (const BudgetExceeded& e) {
    o.code = kExitInconclusive, o.kind = "budget_exceeded", o.reason = e.what();
  } catch (const AmbiguityError& e) {
    o.code = kExitInconclusive, o.kind = "ambiguous", o.reason = e.what();
  } catch (const DegenerateSplittingError& e) {
    o.code = kExitInconclusive, o.kind = "degenerate_splitting", o.reason = e.what();
  } catch (const ParseError& e) {
    o.code = kExitInput, o.kind = "parse_error", o.reason = e.what();
  } catch (const SchemaError& e) {
    o.code = kExitInput, o.kind = "schema_error", o.reason = e.what();
  } catch (const Error& e) {
    o.code = kExitInput, o.kind = "input_error", o.reason = e.what();
  } catch (const std::invalid_argument& e) {
    o.code = kExitInput, o.kind = "input_error", o.reason = e.what();
  } catch (const std::exception& e) {
    o.code = kExitInvariant, o.kind = "internal", o.reason = e.what();
  }

  if (produced) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json meta = {{"tool", "jsrkit"},
                 {"version", kToolVersion},
                 {"config", config_echo(config)},
                 {"budget", {{"limit", config.budget}, {"multiplications", o.multiplications}}},
                 {"wall_time_seconds", wall},
                 {"exit_code", o.code}};
    if (!o.meta.contains("fitted_rate")) meta["fitted_rate"] = nullptr;
    for (auto it = o.meta.begin(); it != o.meta.end(); ++it) meta[it.key()] = it.value();
    try {
      write_atomic(config.out, o.csv);
      write_atomic(config.out + ".json", meta.dump(2) + "\n");
    } catch (const std::exception& e) {
      o.code = kExitInput, o.kind = "output_error", o.reason = e.what();
    }
  }
  if (o.code != kExitOk) {
    err << "jsrkit: exit=" << o.code << " kind=" << o.kind << " message=\"" << sanitize(o.reason) << "\"\n";
  }
  return o.code;
}

}  // namespace jsr
