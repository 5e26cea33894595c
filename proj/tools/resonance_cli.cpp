#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resonance/characters.hpp"
#include "resonance/constants.hpp"
#include "resonance/error.hpp"
#include "resonance/experiments.hpp"
#include "resonance/lfunctions.hpp"
#include "resonance/report_io.hpp"

using namespace resonance;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x, int digits = 10) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

Theorem theorem_from(int t) {
  if (t < 1 || t > 4) throw UsageError("--theorem must be 1, 2, 3 or 4");
  return static_cast<Theorem>(t);
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("--primes expects A..B, got " + text);
  try {
    return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("--primes expects A..B, got " + text);
  }
}

void emit(const std::string& out_dir, const std::string& stem, const std::string& json,
          const std::string& csv) {
  if (out_dir.empty()) {
    std::cout << csv;
    return;
  }
  std::filesystem::create_directories(out_dir);
  const auto base = std::filesystem::path(out_dir) / stem;
  write_file(base.string() + ".json", json);
  write_file(base.string() + ".csv", csv);
  std::cerr << "wrote " << base.string() << ".json and " << base.string() << ".csv\n";
}

std::string rows_csv(const std::vector<TheoremReport>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

// ---- constants ----------------------------------------------------------

struct ConstantsArgs {
  std::vector<long> ells{1};
  std::vector<double> sigmas;
  std::vector<int> theorems;
  std::string out;
};

int cmd_constants(const ConstantsArgs& a) {
  if (a.ells.empty()) throw UsageError("--ell list must not be empty");
  bool want_sigma = !a.sigmas.empty();
  for (int t : a.theorems) {
    theorem_from(t);
    if ((t == 2 || t == 4) && a.sigmas.empty()) {
      throw UsageError("theorem " + std::to_string(t) + " constants need a non-empty --sigma list");
    }
  }
  for (double s : a.sigmas) {
    if (!(s > 0.5 && s < 1.0)) throw UsageError("--sigma values must lie in (1/2, 1), got " + fmt(s));
  }
  for (long ell : a.ells) {
    if (ell < 1) throw UsageError("--ell values must be at least 1");
  }

  std::ostringstream csv;
  csv << "ell,C,Q";
  if (want_sigma) csv << ",sigma,S,H,c,kappa_upper,eta_upper,eta_epsilon,omega,beta_min";
  csv << "\r\n";
  auto sigma_list = want_sigma ? a.sigmas : std::vector<double>{std::nan("")};
  for (long ell : a.ells) {
    for (double s : sigma_list) {
      csv << ell << ',' << fmt(c_ell(ell), 12) << ',' << fmt(q_ell(ell), 12);
      if (want_sigma) {
        const auto kappa = kappa_range(s);
        const auto eta = eta_range(s);
        csv << ',' << fmt(s) << ',' << fmt(s_sigma_ell(s, ell), 12) << ','
            << fmt(h_sigma_ell(s, ell), 12) << ',' << fmt(c_sigma(s), 12) << ','
            << (kappa.empty ? "" : fmt(kappa.upper, 12)) << ','
            << (eta.empty ? "" : fmt(eta.upper, 12)) << ',' << fmt(eta_default_epsilon(s));
        try {
          const auto p = approximation_params(s, ell);
          csv << ',' << fmt(p.omega, 12) << ',' << fmt(p.beta_min, 12);
        } catch (const Error&) {
          csv << ",,";
        }
      }
      csv << "\r\n";
    }
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::filesystem::create_directories(a.out);
    write_file((std::filesystem::path(a.out) / "constants.csv").string(), csv.str());
  }
  return kExitOk;
}

// ---- run ----------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::optional<int> theorem;
  std::optional<std::uint64_t> q, Y;
  std::optional<long> ell;
  std::optional<double> sigma, X, delta, tau, kappa, eta, margin;
  bool oracle = false;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  ConfigDocument doc;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw Error(ErrorKind::Validation, "cannot open config file " + a.config);
    std::ostringstream text;
    text << in.rdbuf();
    try {
      doc = parse_config_document(text.str());
    } catch (const Error& e) {
      throw Error(e.kind(), a.config + ": " + e.what());
    }
  } else if (!a.theorem || !a.q) {
    throw UsageError("run needs a config file or both --theorem and --q");
  }
  ExperimentConfig& c = doc.config;
  if (a.theorem) c.theorem = theorem_from(*a.theorem);
  if (a.q) c.q = *a.q;
  if (a.ell) c.ell = *a.ell;
  if (a.sigma) c.sigma = a.sigma;
  if (a.Y) c.Y = *a.Y;
  if (a.X) {
    c.X = *a.X;
    doc.has_X = true;
  }
  if (a.delta) doc.delta = a.delta;
  if (a.tau) doc.tau = a.tau;
  if (a.kappa) doc.kappa = a.kappa;
  if (a.eta) doc.eta = a.eta;
  if (a.margin) doc.margin = a.margin;
  if (a.oracle) c.oracle = true;

  const ExperimentConfig config = resolve(doc);
  const TheoremReport report = run_theorem(config);
  const std::string out = a.out.empty() ? config.output : a.out;
  emit(out, "report", report_json(report), rows_csv({report}));
  if (!report.passed()) {
    std::cerr << "FAIL " << report.failure << '\n';
    return kExitCheckFailed;
  }
  std::cerr << "PASS theorem " << static_cast<int>(config.theorem) << " q=" << config.q
            << " ell=" << config.ell << " margin=" << fmt(report.margin) << '\n';
  return kExitOk;
}

// ---- sweep --------------------------------------------------------------

struct SweepArgs {
  int theorem = 1;
  std::string primes = "100..500";
  long ell = 1;
  std::optional<double> sigma, X, margin;
  std::uint64_t Y = 1000;
  unsigned jobs = 1;
  std::string out;
};

int cmd_sweep(const SweepArgs& a) {
  SweepOptions o;
  o.theorem = theorem_from(a.theorem);
  std::tie(o.q_min, o.q_max) = parse_range(a.primes);
  o.ell = a.ell;
  o.sigma = a.sigma;
  o.fixed_X = a.X;
  if (a.margin) o.margin = *a.margin;
  o.Y = a.Y;
  o.jobs = std::max(1u, a.jobs);
  if ((o.theorem == Theorem::Two || o.theorem == Theorem::Four) && !o.sigma) {
    throw UsageError("theorems 2 and 4 need --sigma");
  }
  const SweepResult result = sweep(o);
  emit(a.out, "sweep", sweep_json(result), rows_csv(result.rows));
  for (const auto& b : result.buckets) {
    std::cerr << "bucket [" << b.lower << ", " << b.upper << ") n=" << b.count
              << " mean_normalized=" << fmt(b.mean_normalized)
              << " max_normalized=" << fmt(b.max_normalized) << '\n';
  }
  std::size_t failed = 0;
  for (const auto& r : result.rows) {
    if (!r.passed()) {
      ++failed;
      std::cerr << "FAIL q=" << r.config.q << ' ' << r.failure << '\n';
    }
  }
  std::cerr << (failed ? "FAIL " : "PASS ") << result.rows.size() - failed << '/'
            << result.rows.size() << " rows\n";
  return failed ? kExitCheckFailed : kExitOk;
}

// ---- oracle -------------------------------------------------------------

struct OracleArgs {
  std::uint64_t q = 5;
  double sigma = 1.0;
  std::vector<std::uint64_t> Ys{1000, 10000, 100000, 1000000};
  std::string out;
};

int cmd_oracle(const OracleArgs& a) {
  if (!(a.sigma > 0.5 && a.sigma <= 1.0)) throw UsageError("--sigma must lie in (1/2, 1]");
  if (a.q < 3 || !is_prime(a.q)) throw UsageError("--q must be an odd prime");
  const OracleTable t = oracle_comparison(a.q, a.sigma, a.Ys);
  std::ostringstream csv;
  csv << "index,exact_re,exact_im";
  for (auto Y : t.Ys) csv << ",rel_error_Y" << Y;
  csv << "\r\n";
  for (const auto& row : t.rows) {
    csv << row.index << ',' << fmt(row.exact.real(), 17) << ',' << fmt(row.exact.imag(), 17);
    for (double e : row.rel_errors) csv << ',' << fmt(e, 17);
    csv << "\r\n";
  }
  emit(a.out, "oracle", oracle_json(t), csv.str());
  for (std::size_t i = 0; i < t.Ys.size(); ++i) {
    std::cerr << "Y=" << t.Ys[i] << " max_rel_error=" << fmt(t.max_error[i]) << '\n';
  }
  if (!t.near_zero.empty()) std::cerr << t.near_zero.size() << " near-zero characters excluded\n";
  return kExitOk;
}

// ---- verify -------------------------------------------------------------

struct Battery {
  int failures = 0;
  int total = 0;
  void check(bool ok, const std::string& name, const std::string& detail = "") {
    ++total;
    if (!ok) ++failures;
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << '\n';
  }
};

int cmd_verify(bool quick) {
  Battery b;
  const std::vector<std::uint64_t> qs =
      quick ? std::vector<std::uint64_t>{5, 7, 11, 101}
            : std::vector<std::uint64_t>{5, 7, 11, 101, 211, 499, 1009};
  const PrimeTable primes = sieve_primes(100000);

  for (std::uint64_t q : qs) {
    const CharacterGroup g(q);
    double worst = 0;
    if (q <= 211) {
      for (std::uint64_t m = 0; m < q; ++m)
        for (std::uint64_t n = 0; n < q; ++n) {
          const double expected = (m == n && n != 0) ? static_cast<double>(q - 1) : 0.0;
          worst = std::max(worst, std::abs(orthogonality_sum(g, m, n) - expected));
        }
      b.check(worst <= 1e-9 * static_cast<double>(q - 1), "orthogonality q=" + std::to_string(q),
              "max error " + fmt(worst, 3));
    }

    const ResonanceKernel k = LinearKernel{3};
    const double direct = s1(g, k);
    const auto oracle = s1_congruence_oracle(g, k, 1ULL << 40);
    b.check(std::fabs(direct - oracle.value) <= oracle.tail_bound + 1e-10 * direct,
            "S1 congruence oracle q=" + std::to_string(q),
            "enumeration " + fmt(direct, 15) + ", oracle " + fmt(oracle.value, 15));

    for (int t = 1; t <= 4; ++t) {
      for (long ell = 1; ell <= 3; ++ell) {
        for (double X : {3.0, 20.0}) {
          ExperimentConfig c;
          c.theorem = static_cast<Theorem>(t);
          c.q = q;
          c.ell = ell;
          c.X = X;
          c.Y = 1000;
          if (t == 2 || t == 4) c.sigma = 0.9;
          if (t == 4 && !theorem4_admissible(ell, 0.9)) continue;
          if (eligible(g, ell).members.empty()) continue;
          const auto r = run_theorem(c, primes);
          const std::string name = "theorem " + std::to_string(t) + " q=" + std::to_string(q) +
                                   " ell=" + std::to_string(ell) + " X=" + fmt(X);
          b.check(r.inequality_ok, name + " inequality", "margin " + fmt(r.margin, 4));
          b.check(r.certificate_max >= r.eligible_mean - 1e-12 * std::max(1.0, std::fabs(r.eligible_mean)),
                  name + " eligible weighted mean");
          if (r.certificate_max >= 0) {
            b.check(r.certificate_ok, name + " certificate");
          } else {
            std::cout << "SKIP " << name << " certificate (max functional " << fmt(r.certificate_max, 4)
                      << " is negative, so the excluded-term bound does not apply)\n";
          }
        }
      }
    }
  }

  const CharacterGroup g5(5), g3(3);
  const double e5 = std::abs(exact_L(g5.character(2), 1.0).value - 0.4304089409640);
  const double e3 = std::abs(exact_L(g3.character(1), 1.0).value - 0.6045997880781);
  b.check(e5 < 1e-8 && e3 < 1e-8, "class number values", "errors " + fmt(e5, 2) + ", " + fmt(e3, 2));
  const auto table = oracle_comparison(5, 1.0, {100000});
  b.check(table.max_error[0] < 1e-2, "truncation q=5 Y=1e5", "max rel error " + fmt(table.max_error[0], 3));

  double identity_gap = 0;
  for (double s : {0.6, 0.75, 0.9}) {
    for (long j = 0; j <= 10; ++j) identity_gap = std::max(identity_gap, beta_identity_check(j, s).gap);
    for (long ell = 1; ell <= 10; ++ell)
      identity_gap = std::max(identity_gap, std::fabs(s_sigma_ell(s, ell) - s_sigma_ell_expanded(s, ell)));
  }
  b.check(identity_gap < 1e-10, "constant identities", "max gap " + fmt(identity_gap, 3));
  b.check(std::fabs(q_coefficient() + 0.659) < 1e-3, "Q coefficient", fmt(q_coefficient(), 6));

  std::cout << (b.failures ? "FAIL " : "PASS ") << b.total - b.failures << '/' << b.total
            << " checks\n";
  return b.failures ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance-method experiments for Dirichlet L-functions mod a prime"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  ConstantsArgs constants_args;
  auto* constants = app.add_subcommand("constants", "Print C, Q, S, H, c and parameter ranges");
  constants->add_option("--ell", constants_args.ells, "ell values")->delimiter(',');
  constants->add_option("--sigma", constants_args.sigmas, "sigma values in (1/2, 1)")->delimiter(',');
  constants->add_option("--theorem", constants_args.theorems, "theorems whose columns are required")
      ->delimiter(',');
  constants->add_option("--out", constants_args.out, "output directory");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("config", run_args.config, "JSON config file");
  run->add_option("--theorem", run_args.theorem);
  run->add_option("--q", run_args.q);
  run->add_option("--ell", run_args.ell);
  run->add_option("--sigma", run_args.sigma);
  run->add_option("--X", run_args.X);
  run->add_option("--Y", run_args.Y);
  run->add_option("--delta", run_args.delta);
  run->add_option("--tau", run_args.tau);
  run->add_option("--kappa", run_args.kappa);
  run->add_option("--eta", run_args.eta);
  run->add_option("--margin", run_args.margin, "relative distance of the parameter from its endpoint");
  run->add_flag("--oracle", run_args.oracle, "compare the extremal character with the exact oracle");
  run->add_option("--out", run_args.out, "output directory");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a theorem over a range of primes");
  sweep_cmd->add_option("--theorem", sweep_args.theorem)->capture_default_str();
  sweep_cmd->add_option("--primes", sweep_args.primes, "prime range A..B")->capture_default_str();
  sweep_cmd->add_option("--ell", sweep_args.ell)->capture_default_str();
  sweep_cmd->add_option("--sigma", sweep_args.sigma);
  sweep_cmd->add_option("--X", sweep_args.X, "fixed X instead of the default formula");
  sweep_cmd->add_option("--margin", sweep_args.margin);
  sweep_cmd->add_option("--Y", sweep_args.Y)->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep_args.jobs, "concurrent per-prime runs")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out, "output directory");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Truncated vs exact L-values for every character");
  oracle->add_option("--q", oracle_args.q)->capture_default_str();
  oracle->add_option("--sigma", oracle_args.sigma)->capture_default_str();
  oracle->add_option("--Y", oracle_args.Ys, "truncation points")->delimiter(',');
  oracle->add_option("--out", oracle_args.out, "output directory");

  bool quick = false;
  auto* verify = app.add_subcommand("verify", "Run the property battery");
  verify->add_flag("--quick", quick, "small moduli only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*constants) return cmd_constants(constants_args);
    if (*run) return cmd_run(run_args);
    if (*sweep_cmd) return cmd_sweep(sweep_args);
    if (*oracle) return cmd_oracle(oracle_args);
    if (*verify) return cmd_verify(quick);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == ErrorKind::Validation || e.kind() == ErrorKind::Domain ? kExitUsage
                                                                              : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
