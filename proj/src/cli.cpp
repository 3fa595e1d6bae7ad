#include "geoinf/cli.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "geoinf/baselines.hpp"
#include "geoinf/bounds.hpp"
#include "geoinf/error.hpp"
#include "geoinf/influence.hpp"
#include "geoinf/report.hpp"
#include "geoinf/rotation.hpp"
#include "geoinf/russo.hpp"
#include "geoinf/set_spec.hpp"

namespace geoinf::cli {
namespace {

struct Common {
  std::string set;
  std::string measure = "gaussian";
  std::size_t n = 0;
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string output = "-";
  std::string format = "csv";
  std::string baselines = Baselines::default_path();
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_output(CLI::App* sub, Common& c) {
  sub->add_option("-o,--output", c.output, "report path, - for stdout")->capture_default_str();
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_mc(CLI::App* sub, Common& c) {
  sub->add_option("--samples", c.samples, "Monte Carlo samples (>= 100)")->capture_default_str();
  sub->add_option("--seed", c.seed, "64-bit seed (required)");
  sub->add_option("--workers", c.workers, "worker threads, 0 = all cores")->capture_default_str();
}

void add_set(CLI::App* sub, Common& c, bool required) {
  auto* o = sub->add_option("--set", c.set, "set spec, e.g. halfspace:u=1,0;b=0");
  if (required) o->required();
  sub->add_option("--measure", c.measure, "gaussian | gaussian:mean=..;var=.. | boltzmann:rho=.. | uniform")
      ->capture_default_str();
}

McConfig mc(const Common& c) {
  if (!c.seed) throw Usage("missing --seed (seeds are always explicit)");
  if (c.samples < 100) throw Usage("--samples must be at least 100");
  unsigned w = c.workers;
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return McConfig(*c.seed, c.samples, w);
}

std::optional<std::size_t> dim_hint(const Common& c) {
  return c.n ? std::optional<std::size_t>(c.n) : std::nullopt;
}

SetDescriptor load_set(const Common& c) {
  SetDescriptor a = parse_set(c.set, dim_hint(c));
  if (c.n && a.dim() != c.n) throw Usage("--n disagrees with the dimension of --set");
  return a;
}

Regime regime_of(const Measure1D& m) {
  switch (m.family()) {
    case Measure1D::Family::gaussian: return Regime::standard_gaussian();
    case Measure1D::Family::boltzmann: return Regime::boltzmann(m.rho());
    default: throw Usage("bounds need a gaussian or boltzmann measure");
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k];
  return s;
}

void echo_config(const CLI::App* sub, RunManifest& man) {
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_name() == "--help") continue;
    std::string v = o->count() ? join(o->results()) : o->get_default_str();
    man.config.emplace_back(o->get_name(), v);
  }
}

void add_report_checks(const std::vector<BoundReport>& reps, RunManifest& man) {
  for (const auto& r : reps) man.checks.push_back({r.name + "." + r.context.regime, r.pass});
}

// ------------------------------------------------------------ commands

Table cmd_influence(const Common& c, const std::string& profile, RunManifest&) {
  const SetDescriptor a = load_set(c);
  const Measure1D m = parse_measure(c.measure);
  const ProductSpace p = ProductSpace::homogeneous(m, a.dim());
  const McConfig cfg = mc(c);
  InfluenceProfile prof;
  if (profile == "geometric") prof = influence_profile(a, p, cfg);
  else if (profile == "entropy") prof = h_profile(a, p, HProfile::entropy(), cfg);
  else if (profile == "variance") prof = h_profile(a, p, HProfile::variance(), cfg);
  else prof = h_profile(a, p, HProfile::iso_profile(m), cfg);
  Table t;
  t.columns = {"i", "value", "stderr"};
  for (const auto& e : prof.coords) t.add({static_cast<std::int64_t>(e.coordinate), e.value, e.std_error});
  return t;
}

Table cmd_bounds(const Common& c, bool transitive, const std::vector<double>& r_schedule, RunManifest& man) {
  const SetDescriptor a = load_set(c);
  const Measure1D m = parse_measure(c.measure);
  const Regime reg = regime_of(m);
  const ProductSpace p = ProductSpace::homogeneous(m, a.dim());
  const McConfig cfg = mc(c);
  const Baselines base = Baselines::load(c.baselines);
  const InfluenceProfile prof = influence_profile(a, p, cfg);
  const double t = std::clamp(measure_mc(a, p, cfg).value, 0.0, 1.0);
  const std::vector<double> inf = prof.values();
  std::vector<BoundReport> reps;
  if (a.dim() >= 2) reps.push_back(check_kkl(inf, t, reg, base, cfg.seed));
  reps.push_back(check_talagrand_sum(inf, t, reg, base, cfg.seed));
  if (prof.max > 0.0) reps.push_back(check_lowmax_sum(inf, t, std::min(1.0, prof.max), reg, base, cfg.seed));
  if (transitive) reps.push_back(check_transitive_iso(a, p, r_schedule, cfg, reg, base).report);
  add_report_checks(reps, man);
  return bound_table(reps);
}

Table cmd_russo(const Common& c, const std::vector<double>& alphas, RunManifest& man) {
  const SetDescriptor a = load_set(c);
  const Measure1D m = parse_measure(c.measure);
  const McConfig cfg = mc(c);
  const ThresholdCurve curve = measure_curve(a, m, alphas, cfg);
  Table t;
  t.columns = {"alpha", "value", "stderr", "derivative", "derivative_stderr", "influence_sum",
               "influence_stderr", "discrepancy", "combined_stderr", "pass"};
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const RussoCheck r = russo_check(a, m, alphas[k], cfg);
    t.add({alphas[k], curve.values[k].value, curve.values[k].std_error, r.finite_difference, r.fd_std_error,
           r.influence_sum, r.influence_std_error, r.discrepancy, r.combined_std_error, r.pass});
    man.checks.push_back({"russo.alpha=" + format_real(alphas[k]), r.pass});
  }
  return t;
}

Table cmd_threshold(const Common& c, const std::vector<std::size_t>& ns, double eps, const std::vector<double>& deltas,
                    RunManifest& man) {
  const Baselines base = Baselines::load(c.baselines);
  Table t;
  if (!c.set.empty()) {
    if (ns.size() > 1) throw Usage("threshold --set takes a single --n");
    Common cc = c;
    cc.n = ns.empty() ? 0 : ns[0];
    const SetDescriptor a = load_set(cc);
    const Measure1D m = parse_measure(c.measure);
    const McConfig cfg = mc(c);
    if (!deltas.empty()) {
      t.columns = {"delta", "alpha"};
      for (double d : deltas) t.add({d, threshold_alpha(a, m, d, cfg)});
      return t;
    }
    const BoundReport r = width_check(a, eps, cfg, base);
    add_report_checks({r}, man);
    return bound_table({r});
  }
  t.columns = {"n", "width", "rhs", "implied_c", "baseline", "pass"};
  for (std::size_t n : ns) {
    const BoundReport r = width_report(max_threshold_width(n, eps), n, eps, base);
    t.add({static_cast<std::int64_t>(n), r.lhs, r.rhs_at_c1, r.implied_constant, r.baseline_constant, r.pass});
    man.checks.push_back({"width.n=" + std::to_string(n), r.pass});
  }
  return t;
}

Table cmd_power(const Common& c, double theta0, std::optional<double> theta1, double beta,
                const std::vector<std::size_t>& ns, bool check, RunManifest& man) {
  Table t;
  t.columns = {"theta0", "theta1", "beta", "n", "K", "power"};
  std::optional<double> cfit;
  if (check) {
    t.columns.push_back("target");
    t.columns.push_back("pass");
    cfit = Baselines::load(c.baselines).get("power.c");
  } else if (!theta1) {
    throw Usage("power needs --theta1 (or --check)");
  }
  for (std::size_t n : ns) {
    const double th1 = check ? theta0 + power_separation(*cfit, beta, n) : *theta1;
    const PowerReport r = max_test_power(theta0, th1, beta, n);
    std::vector<Cell> row{r.theta0, r.theta1, r.beta, static_cast<std::int64_t>(r.n), r.critical, r.power};
    if (check) {
      const bool ok = r.power >= 1.0 - beta;
      row.push_back(1.0 - beta);
      row.push_back(ok);
      man.checks.push_back({"power.n=" + std::to_string(n), ok});
    }
    t.add(std::move(row));
  }
  return t;
}

Table cmd_rotate(const Common& c, std::size_t rotations, RunManifest& man) {
  const SetDescriptor a = load_set(c);
  if (parse_measure(c.measure) != Measure1D::gaussian()) throw Usage("rotate uses the standard gaussian measure");
  const McConfig cfg = mc(c);
  const RotationScan scan = rotation_scan(a, rotations, cfg, Baselines::load(c.baselines));
  Table t;
  t.columns = {"rotation_index", "influence_sum", "stderr"};
  for (std::size_t j = 0; j < scan.sums.size(); ++j) {
    t.add({static_cast<std::int64_t>(j), scan.sums[j].value, scan.sums[j].std_error});
  }
  add_report_checks({scan.report}, man);
  return t;
}

Table cmd_iso(const Common& c, const std::string& uni, std::size_t random, const std::vector<double>& radii,
              RunManifest& man) {
  const Measure1D m = parse_measure(c.measure);
  Table t;
  if (random > 0) {
    if (!c.seed) throw Usage("missing --seed (seeds are always explicit)");
    t.columns = {"cases", "violations", "max_shortfall"};
    std::int64_t cases = 0, bad = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < random; ++k) {
      const IntervalUnion s = random_interval_union(*c.seed, k);
      for (double r : radii) {
        const BoundReport rep = check_1d_iso(s, m, r);
        ++cases;
        if (!rep.pass) ++bad;
        worst = std::max(worst, rep.rhs_at_c1 - rep.lhs);
      }
    }
    t.add({cases, bad, worst});
    man.checks.push_back({"iso_1d.random", bad == 0});
    return t;
  }
  if (uni.empty()) throw Usage("iso needs --union or --random");
  const IntervalUnion s = parse_interval_union(uni);
  t.columns = {"r", "t", "lhs", "rhs", "pass"};
  for (double r : radii) {
    const BoundReport rep = check_1d_iso(s, m, r);
    t.add({r, rep.context.t, rep.lhs, rep.rhs_at_c1, rep.pass});
    man.checks.push_back({"iso_1d.r=" + format_real(r), rep.pass});
  }
  return t;
}

Table cmd_box_table(const Common& c, std::size_t nmin, std::size_t nmax) {
  const Measure1D m = parse_measure(c.measure);
  const Regime reg = regime_of(m);
  if (nmin < 2 || nmax < nmin) throw Usage("box-table needs 2 <= nmin <= nmax");
  Table t;
  t.columns = {"n", "a_n", "influence", "sum", "scaled"};
  for (std::size_t n = nmin; n <= nmax; n *= 2) {
    const BoxExact b = box_exact(n, m);
    const double scaled = b.sum / std::pow(std::log(static_cast<double>(n)), reg.exponent());
    t.add({static_cast<std::int64_t>(n), b.a_n, b.influence, b.sum, scaled});
    if (n > nmax / 2) break;
  }
  return t;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"geometric influences of sets under product measures"};
  app.set_version_flag("--version", artifact_version());
  app.require_subcommand(1);
  Common c;

  auto* s_inf = app.add_subcommand("influence", "per-coordinate influences of a set");
  add_set(s_inf, c, true);
  s_inf->add_option("--n", c.n, "dimension (when the set spec does not fix it)");
  add_mc(s_inf, c);
  add_output(s_inf, c);
  std::string profile = "geometric";
  s_inf->add_option("--profile", profile, "geometric | entropy | variance | iso")
      ->check(CLI::IsMember({"geometric", "entropy", "variance", "iso"}))
      ->capture_default_str();

  auto* s_bounds = app.add_subcommand("bounds", "influence inequalities against baseline constants");
  add_set(s_bounds, c, true);
  s_bounds->add_option("--n", c.n, "dimension");
  add_mc(s_bounds, c);
  add_output(s_bounds, c);
  s_bounds->add_option("--baselines", c.baselines, "baseline constants file")->capture_default_str();
  bool transitive = false;
  s_bounds->add_flag("--transitive", transitive, "also check the transitive-set bound");
  std::vector<double> r_schedule = default_r_schedule();
  s_bounds->add_option("--r-schedule", r_schedule, "decreasing enlargement radii")->delimiter(',');

  auto* s_russo = app.add_subcommand("russo", "derivative of the shifted measure against the influence sum");
  add_set(s_russo, c, true);
  s_russo->add_option("--n", c.n, "dimension");
  add_mc(s_russo, c);
  add_output(s_russo, c);
  std::vector<double> alphas{0.0};
  s_russo->add_option("--alpha", alphas, "shift values")->delimiter(',');

  auto* s_thr = app.add_subcommand("threshold", "threshold locations and widths");
  add_set(s_thr, c, false);
  add_mc(s_thr, c);
  add_output(s_thr, c);
  s_thr->add_option("--baselines", c.baselines, "baseline constants file")->capture_default_str();
  std::vector<std::size_t> thr_ns{10, 100, 1000, 10000};
  s_thr->add_option("--n", thr_ns, "dimensions")->delimiter(',');
  double eps = 0.1;
  s_thr->add_option("--eps", eps, "width parameter in (0, 1/2)")->capture_default_str();
  std::vector<double> deltas;
  s_thr->add_option("--delta", deltas, "measure levels to locate (with --set)")->delimiter(',');

  auto* s_pow = app.add_subcommand("power", "power of the max test");
  add_output(s_pow, c);
  s_pow->add_option("--baselines", c.baselines, "baseline constants file")->capture_default_str();
  double theta0 = 0.0, beta = 0.05;
  std::optional<double> theta1;
  std::vector<std::size_t> pow_ns{100};
  bool pow_check = false;
  s_pow->add_option("--theta0", theta0, "null mean")->capture_default_str();
  s_pow->add_option("--theta1", theta1, "alternative mean");
  s_pow->add_option("--beta", beta, "level")->capture_default_str();
  s_pow->add_option("--n", pow_ns, "sample sizes")->delimiter(',');
  s_pow->add_flag("--check", pow_check, "use the fitted separation c log(1/2beta)/sqrt(log n)");

  auto* s_rot = app.add_subcommand("rotate", "influence sums over Haar rotations");
  add_set(s_rot, c, true);
  s_rot->add_option("--n", c.n, "dimension");
  add_mc(s_rot, c);
  add_output(s_rot, c);
  s_rot->add_option("--baselines", c.baselines, "baseline constants file")->capture_default_str();
  std::size_t rotations = 20;
  s_rot->add_option("--rotations", rotations, "number of rotations")->capture_default_str();

  auto* s_iso = app.add_subcommand("iso", "one-dimensional isoperimetry");
  s_iso->add_option("--measure", c.measure, "symmetric measure")->capture_default_str();
  add_output(s_iso, c);
  std::string uni;
  std::size_t random = 0;
  std::vector<double> radii{0.01, 0.1, 1.0};
  s_iso->add_option("--union", uni, "interval union, e.g. [-1,1];[2,inf)");
  s_iso->add_option("--random", random, "number of random unions");
  s_iso->add_option("--seed", c.seed, "seed for --random");
  s_iso->add_option("--r", radii, "radii")->delimiter(',');

  auto* s_box = app.add_subcommand("box-table", "exact influences of the half-measure box");
  add_output(s_box, c);
  std::optional<double> rho;
  std::size_t nmin = 2, nmax = 4096;
  s_box->add_option("--rho", rho, "Boltzmann parameter (default: --measure)");
  s_box->add_option("--measure", c.measure, "measure when --rho is absent")->capture_default_str();
  s_box->add_option("--nmin", nmin, "smallest n (powers of two)")->capture_default_str();
  s_box->add_option("--nmax", nmax, "largest n")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  RunManifest man;
  man.version = artifact_version();
  for (int k = 0; k < argc; ++k) man.argv.emplace_back(argv[k]);
  try {
    CLI::App* sub = app.get_subcommands().front();
    man.command = sub->get_name();
    echo_config(sub, man);
    const Format fmt = parse_format(c.format);
    Table t;
    if (sub == s_inf) t = cmd_influence(c, profile, man);
    else if (sub == s_bounds) t = cmd_bounds(c, transitive, r_schedule, man);
    else if (sub == s_russo) t = cmd_russo(c, alphas, man);
    else if (sub == s_thr) t = cmd_threshold(c, thr_ns, eps, deltas, man);
    else if (sub == s_pow) t = cmd_power(c, theta0, theta1, beta, pow_ns, pow_check, man);
    else if (sub == s_rot) t = cmd_rotate(c, rotations, man);
    else if (sub == s_iso) t = cmd_iso(c, uni, random, radii, man);
    else {
      if (rho) c.measure = "boltzmann:rho=" + format_real(*rho);
      t = cmd_box_table(c, nmin, nmax);
    }
    emit(t, fmt, c.output);
    man.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(man, c.output);
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const SpecError& e) {
    std::cerr << "error: bad specification: " << e.what() << '\n';
    return 1;
  } catch (const CapabilityError& e) {
    std::cerr << "error: unsupported operation: " << e.what() << '\n';
    return 1;
  } catch (const FiberResolutionError& e) {
    std::cerr << "error: fiber resolution: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return man.all_pass() ? 0 : 2;
}

}  // namespace geoinf::cli
