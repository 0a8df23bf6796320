// rough_error_lab: batch command-line front end.
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "roughlab/config.hpp"
#include "roughlab/errors.hpp"
#include "roughlab/experiments.hpp"
#include "roughlab/interpolation.hpp"
#include "roughlab/output.hpp"

using namespace roughlab;
using nlohmann::json;

namespace {

struct ColumnDoc {
  std::string name;
  std::string type;
  std::string description;
};

struct Context {
  ExperimentConfig cfg;
  int threads = 1;
  std::uint64_t seed = 42;
};

struct Option {
  std::string key;
  std::string help;
  bool list = false;
};

struct Command {
  std::string name;
  std::string description;
  std::vector<Option> options;
  std::vector<ColumnDoc> schema;
  bool record = false;  // single-row result; JSON renders as one object
  std::function<Table(const Context&)> run;
};

std::string num(double x) { return format_number(x); }
std::string num(long x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }
std::string num(std::size_t x) { return std::to_string(x); }

int to_int(const ExperimentConfig& c, const std::string& key, long fallback) {
  const long v = c.integer(key, fallback);
  require(v >= -1000000000L && v <= 1000000000L, key + ": out of range");
  return static_cast<int>(v);
}

std::size_t to_count(const ExperimentConfig& c, const std::string& key, long fallback) {
  const long v = c.integer(key, fallback);
  require(v >= 1, key + ": must be >= 1");
  return static_cast<std::size_t>(v);
}

OmegaGate parse_gate(const std::string& s) {
  if (s == "none") return OmegaGate::None;
  if (s == "enforce") return OmegaGate::Enforce;
  throw ValidationError("gate: expected 'none' or 'enforce', got '" + s + "'");
}

bool to_bool(const ExperimentConfig& c, const std::string& key, bool fallback) {
  if (!c.has(key)) return fallback;
  const json& v = c.values().at(key);
  require(v.is_boolean(), key + ": expected true or false");
  return v.get<bool>();
}

HurstConfig hurst_config(const Context& ctx, int level, int dim) {
  HurstConfig h;
  h.hurst = ctx.cfg.real("hurst", 0.4);
  h.h_minus = ctx.cfg.real("h_minus", 0.0);
  h.level = level;
  h.driver_dim = dim;
  h.validate();
  return h;
}

// Flag text to a typed JSON value.
json flag_value(const std::string& text, bool list) {
  auto scalar = [](const std::string& s) -> json {
    long long iv = 0;
    auto ri = std::from_chars(s.data(), s.data() + s.size(), iv);
    if (ri.ec == std::errc() && ri.ptr == s.data() + s.size()) return iv;
    double dv = 0.0;
    auto rd = std::from_chars(s.data(), s.data() + s.size(), dv);
    if (rd.ec == std::errc() && rd.ptr == s.data() + s.size()) return dv;
    if (s == "true") return true;
    if (s == "false") return false;
    return s;
  };
  if (!list) return scalar(text);
  json arr = json::array();
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(',', start);
    arr.push_back(scalar(text.substr(start, end == std::string::npos ? std::string::npos : end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return arr;
}

const Option kHurst{"hurst", "Hurst parameter H in (1/3, 1/2]"};
const Option kHMinus{"h_minus", "Hölder exponent below H; default is the admissible midpoint"};
const Option kScheme{"scheme", "im | cn | fe | m"};
const Option kField{"field", "tanh2 | tanh1 | additive2 | linear1 | ode1"};
const Option kXi{"xi", "initial value, comma-separated", true};
const Option kPaths{"paths", "number of Monte Carlo paths"};
const Option kKappa{"kappa", "lift refinement levels below the finest grid"};
const Option kRefOffset{"ref_offset", "reference level minus the scheme level"};

std::vector<double> xi_of(const Context& ctx) { return ctx.cfg.reals("xi"); }

std::vector<Command> commands() {
  std::vector<Command> out;

  out.push_back({"rho-table",
                 "fBm unit-lag increment correlations",
                 {kHurst, {"kmax", "largest lag"}},
                 {{"k", "int", "lag"},
                  {"rho", "float", "correlation of unit increments at lag k"},
                  {"rho_sq", "float", "rho squared"}},
                 false,
                 [](const Context& ctx) {
                   const double h = ctx.cfg.real("hurst", 0.4);
                   validate_exponents(h, HurstConfig::default_h_minus(h));
                   const int kmax = to_int(ctx.cfg, "kmax", 20);
                   require(kmax >= 0, "kmax: must be >= 0");
                   Table t({"k", "rho", "rho_sq"});
                   for (int k = 0; k <= kmax; ++k) {
                     const double r = rho(h, k);
                     t.add_row({num(k), num(r), num(r * r)});
                   }
                   return t;
                 }});

  out.push_back({"tilde-rho",
                 "Covariances of unit-block iterated integrals by extrapolated Young sums",
                 {kHurst, {"kmax", "largest lag"}, {"tol", "stopping tolerance of the extrapolation"},
                  {"initial_grid", "first quadrature grid size"}},
                 {{"k", "int", "lag"},
                  {"tilde_rho", "float", "covariance of the unit-block areas at lag k"},
                  {"grid", "int", "finest quadrature grid used"},
                  {"last_change", "float", "difference of the last two extrapolated values"}},
                 false,
                 [](const Context& ctx) {
                   const double h = ctx.cfg.real("hurst", 0.4);
                   const int kmax = to_int(ctx.cfg, "kmax", 5);
                   require(kmax >= 0, "kmax: must be >= 0");
                   QuadratureOptions q;
                   q.tolerance = ctx.cfg.real("tol", 1e-6);
                   q.initial_grid = ctx.cfg.integer("initial_grid", 16);
                   Table t({"k", "tilde_rho", "grid", "last_change"});
                   for (int k = 0; k <= kmax; ++k) {
                     const QuadratureResult r = tilde_rho(h, k, q);
                     const auto& e = r.extrapolated;
                     t.add_row({num(k), num(r.value), num(r.grid), num(std::abs(e[e.size() - 1] - e[e.size() - 2]))});
                   }
                   return t;
                 }});

  out.push_back({"constant-c",
                 "Limit constant C with truncation and tail bound",
                 {kHurst, {"tol", "bound on the neglected tail of C squared"}},
                 {{"C", "float", "limit constant"},
                  {"C_squared", "float", "C squared"},
                  {"K", "int", "truncation lag"},
                  {"tail_bound", "float", "bound on the neglected tail of C squared"},
                  {"q_tilde", "float", "variance limit of the scaled area sum"},
                  {"q_hat", "float", "variance limit of the scaled half-product sum"},
                  {"q_check", "float", "variance limit of the scaled centred-square sum"}},
                 true,
                 [](const Context& ctx) {
                   const double h = ctx.cfg.real("hurst", 0.4);
                   const LimitConstant c = constant_C(h, ctx.cfg.real("tol", 1e-4));
                   Table t({"C", "C_squared", "K", "tail_bound", "q_tilde", "q_hat", "q_check"});
                   t.add_row({num(c.value), num(c.c_squared), num(c.truncation), num(c.tail_bound),
                              num(c.q_tilde_limit()), num(c.q_hat_limit()), num(c.q_check_limit())});
                   return t;
                 }});

  out.push_back({"simulate",
                 "One scheme path on the dyadic grid",
                 {kScheme, kField, kHurst, kHMinus, {"m", "grid level"}, kKappa, kXi,
                  {"path", "path index within the seed"}, {"gate", "none | enforce (CN only)"}},
                 {{"k", "int", "grid index"},
                  {"t", "float", "time k 2^-m"},
                  {"component", "int", "state component"},
                  {"value", "float", "scheme value"},
                  {"driver", "float", "driver component of the same index at t, empty beyond the driver dimension"}},
                 false,
                 [](const Context& ctx) {
                   const auto field = make_field(ctx.cfg.text("field", "tanh2"));
                   const int m = to_int(ctx.cfg, "m", 8);
                   const int kappa = to_int(ctx.cfg, "kappa", 6);
                   require(kappa >= 0 && m + kappa <= 24, "kappa: need kappa >= 0 and m + kappa <= 24");
                   const HurstConfig hc = hurst_config(ctx, m + kappa, field->driver_dim());
                   const auto p = static_cast<std::uint64_t>(ctx.cfg.seed("path", 0));
                   const FbmSample s = sample_fbm(hc, ctx.seed, p);
                   const RoughIncrements lift = lift_levy_area(s, m);
                   std::vector<double> xv = xi_of(ctx);
                   Eigen::VectorXd xi = default_xi(*field);
                   if (!xv.empty()) {
                     require(xv.size() == static_cast<std::size_t>(field->state_dim()),
                             "xi: length must equal the state dimension of the field");
                     xi = Eigen::Map<const Eigen::VectorXd>(xv.data(), static_cast<long>(xv.size()));
                   }
                   SolveOptions o;
                   o.hurst = hc.hurst;
                   o.h_minus = hc.effective_h_minus();
                   o.omega_gate = parse_gate(ctx.cfg.text("gate", "none"));
                   const Scheme sc = parse_scheme(ctx.cfg.text("scheme", "im"));
                   const DiscreteSolution sol = solve(sc, *field, lift, xi, o);
                   Table t({"k", "t", "component", "value", "driver"});
                   for (std::size_t k = 0; k <= lift.blocks(); ++k) {
                     const Eigen::VectorXd b = lift.value(k);
                     for (int i = 0; i < field->state_dim(); ++i)
                       t.add_row({num(k), num(k * lift.step()), num(i), num(sol.path.at(k)(i)),
                                  i < b.size() ? num(b(i)) : std::string()});
                   }
                   return t;
                 }});

  out.push_back({"convergence",
                 "Strong error against a fine Milstein reference across levels",
                 {kScheme, kField, kHurst, kHMinus, {"m_range", "levels lo:hi"}, kPaths, kRefOffset,
                  kKappa, kXi, {"gate", "none | enforce (CN only)"},
                  {"limit", "compare the terminal variance with the conditional Gaussian limit"}},
                 {{"row", "str", "level | slope | terminal"},
                  {"m", "int", "level (terminal row: the finest level)"},
                  {"l2_error", "float", "L2 norm of the terminal error"},
                  {"mean_sq_error", "float", "mean squared terminal error"},
                  {"std_error", "float", "standard error of mean_sq_error"},
                  {"remainder_median", "float", "median over paths of the max remainder of the first-order error expansion"},
                  {"slope", "float", "OLS slope of log2 l2_error against m"},
                  {"slope_half_width", "float", "95% half-width of the slope"},
                  {"intercept", "float", "OLS intercept"},
                  {"terminal_variance", "float", "summed component variances of the scaled terminal error"},
                  {"terminal_variance_se", "float", "standard error of terminal_variance"},
                  {"limit_variance", "float", "mean trace of the conditional covariance of the limit"},
                  {"limit_variance_se", "float", "standard error of limit_variance"},
                  {"C", "float", "limit constant used by the limit draw"},
                  {"excluded", "int", "paths outside the CN gate"}},
                 false,
                 [](const Context& ctx) {
                   ConvergenceSpec s;
                   s.scheme = parse_scheme(ctx.cfg.text("scheme", "im"));
                   s.field = ctx.cfg.text("field", "tanh2");
                   s.xi = xi_of(ctx);
                   s.hurst = ctx.cfg.real("hurst", 0.4);
                   s.h_minus = ctx.cfg.real("h_minus", 0.0);
                   std::tie(s.m_min, s.m_max) = ctx.cfg.range("m_range", {6, 11});
                   s.paths = to_count(ctx.cfg, "paths", 2000);
                   s.seed = ctx.seed;
                   s.ref_offset = to_int(ctx.cfg, "ref_offset", 6);
                   s.kappa = to_int(ctx.cfg, "kappa", 3);
                   s.threads = ctx.threads;
                   s.limit_compare = to_bool(ctx.cfg, "limit", true);
                   s.omega_gate = parse_gate(ctx.cfg.text("gate", "none"));
                   const ConvergenceReport r = run_convergence(s);
                   Table t({"row", "m", "l2_error", "mean_sq_error", "std_error", "remainder_median", "slope",
                            "slope_half_width", "intercept", "terminal_variance", "terminal_variance_se",
                            "limit_variance", "limit_variance_se", "C", "excluded"});
                   for (std::size_t i = 0; i < r.report.estimates.size(); ++i) {
                     const McEstimate& e = r.report.estimates[i];
                     t.add_row({"level", num(e.level), num(e.estimate), num(e.mean), num(e.std_error),
                                num(r.remainder_median[i])});
                   }
                   t.add_row({"slope", "", "", "", "", "", num(r.report.fit.slope), num(r.report.fit.half_width),
                              num(r.report.fit.intercept)});
                   t.add_row({"terminal", num(s.m_max), "", "", "", "", "", "", "", num(r.terminal_variance),
                              num(r.terminal_variance_se), num(r.limit_variance), num(r.limit_variance_se), num(r.c),
                              num(r.excluded)});
                   return t;
                 }});

  out.push_back({"levy-var",
                 "Scaled variances of the area, product and square sums against their limits",
                 {kHurst, {"m", "grid level"}, kPaths, kKappa},
                 {{"statistic", "str", "q_tilde | q_hat | q_check | q"},
                  {"scaled_variance", "float", "(2^m)^(4H-1) times the sample variance of the sum over [0,1]"},
                  {"std_error", "float", "standard error of scaled_variance"},
                  {"target", "float", "variance limit"},
                  {"rel_diff", "float", "(scaled_variance - target) / target"}},
                 false,
                 [](const Context& ctx) {
                   LevyVarSpec s;
                   s.hurst = ctx.cfg.real("hurst", 0.4);
                   s.m = to_int(ctx.cfg, "m", 10);
                   s.paths = to_count(ctx.cfg, "paths", 4000);
                   s.kappa = to_int(ctx.cfg, "kappa", 10);
                   s.seed = ctx.seed;
                   s.threads = ctx.threads;
                   Table t({"statistic", "scaled_variance", "std_error", "target", "rel_diff"});
                   for (const LevyVarRow& r : run_levy_var(s))
                     t.add_row({r.statistic, num(r.scaled_variance), num(r.std_error), num(r.target),
                                num((r.scaled_variance - r.target) / r.target)});
                   return t;
                 }});

  out.push_back({"interp-check",
                 "Per-path structural checks of the interpolation between reference and scheme",
                 {kScheme, kField, kHurst, kHMinus, {"m", "grid level"}, kPaths, kRefOffset, kKappa,
                  {"nodes", "Gauss-Legendre nodes in rho"}, kXi},
                 {{"path", "int", "path index"},
                  {"identity_residual", "float", "max_k |yhat_k - y_k - integral of z over rho|"},
                  {"identity_scale", "float", "max_k (1 + |yhat_k|)"},
                  {"node_doubling", "float", "change of identity_residual when the nodes are doubled"},
                  {"z_agreement", "float", "relative gap of direct and variation-of-constants z at rho = 1/2"},
                  {"resubstitution", "float", "largest per-step scheme residual relative to the step"},
                  {"group_law", "float", "relative Jacobian composition error"},
                  {"endpoint", "float", "rho = 0 and rho = 1 paths against reference and scheme"}},
                 false,
                 [](const Context& ctx) {
                   InterpCheckSpec s;
                   s.scheme = parse_scheme(ctx.cfg.text("scheme", "im"));
                   s.field = ctx.cfg.text("field", "tanh2");
                   s.xi = xi_of(ctx);
                   s.hurst = ctx.cfg.real("hurst", 0.4);
                   s.h_minus = ctx.cfg.real("h_minus", 0.0);
                   s.m = to_int(ctx.cfg, "m", 8);
                   s.paths = to_count(ctx.cfg, "paths", 100);
                   s.ref_offset = to_int(ctx.cfg, "ref_offset", 6);
                   s.kappa = to_int(ctx.cfg, "kappa", 3);
                   s.nodes = to_int(ctx.cfg, "nodes", 8);
                   s.seed = ctx.seed;
                   s.threads = ctx.threads;
                   Table t({"path", "identity_residual", "identity_scale", "node_doubling", "z_agreement",
                            "resubstitution", "group_law", "endpoint"});
                   for (const InterpCheckRow& r : run_interp_check(s))
                     t.add_row({num(r.path), num(r.identity_residual), num(r.identity_scale), num(r.node_doubling),
                                num(r.z_agreement), num(r.resubstitution), num(r.group_law), num(r.endpoint)});
                   return t;
                 }});

  out.push_back({"nbeta",
                 "Greedy N_beta counts of the control function of one lifted path",
                 {kHurst, kHMinus, {"m", "grid level"}, kKappa, {"path", "path index within the seed"},
                  {"beta", "thresholds, comma-separated", true}},
                 {{"beta", "float", "threshold"},
                  {"n_beta", "int", "greedy count for w"},
                  {"n_beta_tilde", "int", "greedy count for w plus elapsed time"}},
                 false,
                 [](const Context& ctx) {
                   const int m = to_int(ctx.cfg, "m", 8);
                   const int kappa = to_int(ctx.cfg, "kappa", 6);
                   require(m >= 1 && m <= 12, "m: nbeta supports 1 <= m <= 12");
                   require(kappa >= 0 && m + kappa <= 24, "kappa: need kappa >= 0 and m + kappa <= 24");
                   const HurstConfig hc = hurst_config(ctx, m + kappa, 2);
                   const auto p = static_cast<std::uint64_t>(ctx.cfg.seed("path", 0));
                   const RoughIncrements lift = lift_levy_area(sample_fbm(hc, ctx.seed, p), m);
                   const ControlFunction w(lift, hc.effective_h_minus());
                   std::vector<double> betas = ctx.cfg.reals("beta");
                   if (betas.empty()) betas = {0.1, 0.5, 1.0, 2.0};
                   Table t({"beta", "n_beta", "n_beta_tilde"});
                   for (double b : betas)
                     t.add_row({num(b), num(n_beta(w, b).count), num(n_beta(w, b, true).count)});
                   return t;
                 }});
  return out;
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

json schema_doc(const Command& c) {
  json cols = json::array();
  for (const auto& col : c.schema)
    cols.push_back({{"name", col.name}, {"type", col.type}, {"description", col.description}});
  return json{{"command", c.name}, {"columns", cols}};
}

void check_columns(const Command& c, const Table& t) {
  std::set<std::string> documented;
  for (const auto& col : c.schema) documented.insert(col.name);
  for (const auto& col : t.columns())
    if (!documented.count(col)) throw std::logic_error("undocumented column '" + col + "' in " + c.name);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "out: cannot open '" + path + "' for writing");
  f << text;
  require(static_cast<bool>(f), "out: write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error analysis lab for rough differential equation schemes driven by fBm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ROUGHLAB_VERSION);
  const std::vector<Command> cmds = commands();

  struct Bound {
    const Command* cmd;
    CLI::App* sub;
    std::map<std::string, std::string> values;
    std::string config;
    std::string out;
    std::string format;
    std::string seed;
    std::optional<int> threads;
    bool schema = false;
  };
  std::vector<Bound> bound(cmds.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    Bound& b = bound[i];
    b.cmd = &cmds[i];
    b.sub = app.add_subcommand(cmds[i].name, cmds[i].description);
    for (const Option& o : cmds[i].options) b.sub->add_option(flag_name(o.key), b.values[o.key], o.help);
    b.sub->add_option("--config", b.config, "flat JSON config file; keys may not repeat flags");
    b.sub->add_option("--out", b.out, "output path (default: stdout)");
    b.sub->add_option("--format", b.format, "csv | json");
    b.sub->add_option("--seed", b.seed, "master seed (default 42)");
    b.sub->add_option("--threads", b.threads, "worker threads (default: ROUGH_ERROR_LAB_THREADS or 1)");
    b.sub->add_flag("--schema", b.schema, "print the column schema and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (Bound& b : bound) {
      if (!b.sub->parsed()) continue;
      const Command& cmd = *b.cmd;
      if (b.schema) {
        emit(schema_doc(cmd).dump(2) + "\n", b.out);
        return 0;
      }
      json flags = json::object();
      std::vector<std::string> allowed{"seed", "out", "format"};
      for (const Option& o : cmd.options) {
        allowed.push_back(o.key);
        if (b.sub->count(flag_name(o.key)) > 0) flags[o.key] = flag_value(b.values[o.key], o.list);
      }
      if (b.sub->count("--seed") > 0) flags["seed"] = flag_value(b.seed, false);
      if (b.sub->count("--out") > 0) flags["out"] = b.out;
      if (b.sub->count("--format") > 0) flags["format"] = b.format;
      const json file = b.config.empty() ? json() : ExperimentConfig::load_file(b.config);
      if (file.is_object())
        for (const Option& o : cmd.options)
          if (o.list && file.contains(o.key) && file[o.key].is_number())
            throw ValidationError(o.key + ": expected an array");

      Context ctx;
      ctx.cfg = ExperimentConfig::merge(flags, file, allowed);
      ctx.seed = ctx.cfg.seed("seed", 42);
      if (b.threads) require(*b.threads >= 1, "threads: must be >= 1");
      ctx.threads = resolve_threads(b.threads);
      const std::string format = ctx.cfg.text("format", cmd.record ? "json" : "csv");
      require(format == "csv" || format == "json", "format: expected 'csv' or 'json', got '" + format + "'");
      const std::string out_path = ctx.cfg.text("out", "");

      const Table table = cmd.run(ctx);
      check_columns(cmd, table);
      const Metadata meta{{"command", cmd.name},
                          {"version", ROUGHLAB_VERSION},
                          {"seed", std::to_string(ctx.seed)},
                          {"config_hash", ctx.cfg.hash()}};
      std::string text;
      if (format == "csv")
        text = render_csv(meta, table);
      else
        text = cmd.record ? render_json_record(meta, table) : render_json(meta, table);
      emit(text, out_path);
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
