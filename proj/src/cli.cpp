#include "kolmo/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "kolmo/baseline.hpp"
#include "kolmo/bench.hpp"
#include "kolmo/dist.hpp"
#include "kolmo/errors.hpp"
#include "kolmo/oracle.hpp"
#include "kolmo/quantile.hpp"
#include "kolmo/smirnov.hpp"

namespace kolmo::cli {

namespace {

enum class Format { Text, Csv, Json };

// Reported as usage errors (exit 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> comments;  // emitted as '# ' lines in text/csv
};

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string cell_text(const Cell& c, int precision) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d, precision);
  if (const auto* i = std::get_if<long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

void emit(std::ostream& out, const Table& t, Format format, int precision) {
  switch (format) {
    case Format::Csv: {
      for (const auto& c : t.comments) out << "# " << c << '\n';
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << t.columns[i];
      }
      out << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          out << (i ? "," : "") << cell_text(row[i], precision);
        }
        out << '\n';
      }
      break;
    }
    case Format::Json: {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
          const Cell& c = row[i];
          if (const auto* d = std::get_if<double>(&c)) {
            // JSON has no inf/nan; keep them as strings.
            if (std::isfinite(*d)) {
              obj[t.columns[i]] = *d;
            } else {
              obj[t.columns[i]] = format_number(*d, precision);
            }
          } else if (const auto* l = std::get_if<long>(&c)) {
            obj[t.columns[i]] = *l;
          } else {
            obj[t.columns[i]] = std::get<std::string>(c);
          }
        }
        rows.push_back(std::move(obj));
      }
      out << rows.dump(2) << '\n';
      break;
    }
    case Format::Text: {
      for (const auto& c : t.comments) out << "# " << c << '\n';
      std::vector<std::vector<std::string>> cells;
      std::vector<std::size_t> width(t.columns.size());
      for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
      for (const auto& row : t.rows) {
        auto& r = cells.emplace_back();
        for (std::size_t i = 0; i < row.size(); ++i) {
          r.push_back(cell_text(row[i], precision));
          width[i] = std::max(width[i], r.back().size());
        }
      }
      auto put = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (i) out << "  ";
          out << std::string(width[i] - r[i].size(), ' ') << r[i];
        }
        out << '\n';
      };
      put(t.columns);
      for (const auto& r : cells) put(r);
      break;
    }
  }
}

double parse_number(const std::string& token, const char* what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || std::isnan(v)) {
    throw UsageError(std::string("invalid ") + what + ": '" + token + "'");
  }
  return v;
}

double parse_probability(const std::string& token) {
  const double p = parse_number(token, "probability");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("probability out of range [0, 1]: '" + token + "'");
  }
  return p;
}

struct Common {
  std::string format = "text";
  int precision = 17;

  Format fmt() const {
    if (format == "csv") return Format::Csv;
    if (format == "json") return Format::Json;
    return Format::Text;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--precision", common.precision, "Significant digits")
      ->check(CLI::Range(1, 40))
      ->capture_default_str();
}

// --- eval -------------------------------------------------------------------

int cmd_eval(const std::vector<std::string>& tokens, const std::string& engine, double eps,
             const Common& common, std::ostream& out) {
  std::vector<double> xs;
  xs.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const double x = parse_number(tok, "x");
    if (!std::isfinite(x)) throw UsageError("x must be finite: '" + tok + "'");
    xs.push_back(x);
  }
  Table t;
  t.columns = {"x", "sf", "cdf", "pdf", "terms"};
  for (double x : xs) {
    if (engine == "baseline") {
      if (x <= 0.0) {
        t.rows.push_back({x, 1.0, 0.0, std::nan(""), 0L});
        continue;
      }
      const baseline::BaselineResult b = baseline::baseline_sf(x);
      t.rows.push_back({x, b.value, 1.0 - b.value, std::nan(""), long{b.terms_or_iters}});
    } else {
      const DistTriple d = kolmogorov(x, eps);
      t.rows.push_back({x, d.sf, d.cdf, d.pdf, long{d.terms}});
    }
  }
  if (engine == "baseline") t.comments.push_back("legacy engine: unclipped SF, no PDF");
  emit(out, t, common.fmt(), common.precision);
  return kOk;
}

// --- invert -----------------------------------------------------------------

int cmd_invert(const std::vector<std::string>& sf_tokens,
               const std::vector<std::string>& cdf_tokens, const std::string& engine,
               const Common& common, std::ostream& out, std::ostream& err) {
  if (sf_tokens.empty() && cdf_tokens.empty()) {
    throw UsageError("invert: give at least one --sf or --cdf probability");
  }
  struct Request {
    const char* side;
    double p;
    ProbPair pair;
  };
  std::vector<Request> requests;
  for (const auto& tok : sf_tokens) {
    const double p = parse_probability(tok);
    requests.push_back({"sf", p, ProbPair::from_sf(p)});
  }
  for (const auto& tok : cdf_tokens) {
    const double p = parse_probability(tok);
    requests.push_back({"cdf", p, ProbPair::from_cdf(p)});
  }

  Table t;
  t.columns = {"side", "p", "x", "iterations", "converged"};
  bool all_converged = true;
  for (const Request& r : requests) {
    if (engine == "baseline") {
      const double p_sf = r.pair.sf();
      double x = 0.0;
      long iters = 0;
      bool ok = true;
      if (p_sf == 0.0) {
        x = std::numeric_limits<double>::infinity();
      } else if (p_sf < 1.0) {
        const baseline::BaselineIsfResult b = baseline::baseline_isf(p_sf);
        x = b.value;
        iters = b.terms_or_iters;
        ok = !b.hit_cap;
      }
      all_converged = all_converged && ok;
      t.rows.push_back({std::string(r.side), r.p, x, iters, std::string(ok ? "yes" : "no")});
    } else {
      const QuantileResult q = kolmogi(r.pair);
      all_converged = all_converged && q.report.converged;
      t.rows.push_back({std::string(r.side), r.p, q.x, long{q.report.iterations},
                        std::string(q.report.converged ? "yes" : "no")});
    }
  }
  emit(out, t, common.fmt(), common.precision);
  if (!all_converged) {
    err << "invert: root-finding did not converge for at least one input\n";
    return kNoConvergence;
  }
  return kOk;
}

// --- smirnov ----------------------------------------------------------------

int cmd_smirnov(int n, const std::vector<std::string>& tokens, const Common& common,
                std::ostream& out) {
  Table t;
  t.columns = {"n", "x", "sf_exact", "sf_limit", "sf_maag_dicaire"};
  for (const auto& tok : tokens) {
    const double x = parse_number(tok, "x");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("x must lie in [0, 1]: '" + tok + "'");
    t.rows.push_back({long{n}, x, smirnov::smirnov_sf_exact(n, x),
                      smirnov::smirnov_sf_limit(x * std::sqrt(static_cast<double>(n))),
                      smirnov::maag_dicaire_sf(n, x)});
  }
  t.comments.push_back("P(D_n^+ >= x); sf_limit evaluated at sqrt(n) * x");
  emit(out, t, common.fmt(), common.precision);
  return kOk;
}

// --- kstest -----------------------------------------------------------------

std::vector<double> read_pit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("kstest: cannot open data file '" + path + "'");
  std::vector<double> values;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    double v;
    try {
      v = parse_number(token, "value");
    } catch (const UsageError&) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": malformed value '" + token + "'");
    }
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": value outside [0, 1]: '" +
                        token + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError("kstest: no values in '" + path + "'");
  return values;
}

int cmd_kstest(const std::string& path, int n_override, const Common& common,
               std::ostream& out) {
  const std::vector<double> values = read_pit_file(path);
  const smirnov::EcdfStats s = smirnov::ecdf_statistics(values);
  const int n = n_override > 0 ? n_override : s.n;
  const double p_two = kolmogorov(std::sqrt(static_cast<double>(n)) * s.d).sf;
  const double p_exact = n <= smirnov::kMaxExactN ? smirnov::smirnov_sf_exact(n, s.d_plus)
                                                  : std::nan("");
  const double p_maag = smirnov::maag_dicaire_sf(n, s.d_plus);

  Table t;
  t.comments.push_back("input: probability-integral-transformed sample (values in [0, 1])");
  t.comments.push_back("p_two_sided uses the n -> infinity limit; one-sided p-values refer to D_n^+");
  t.columns = {"n", "d", "d_plus", "d_minus", "p_two_sided_asymptotic", "p_one_sided_exact",
               "p_one_sided_maag"};
  t.rows.push_back({long{n}, s.d, s.d_plus, s.d_minus, p_two, p_exact, p_maag});
  emit(out, t, common.fmt(), common.precision);
  return kOk;
}

// --- table ------------------------------------------------------------------

int cmd_table(const std::vector<std::string>& alpha_tokens, const std::vector<int>& ns,
              const Common& common, std::ostream& out, std::ostream& err) {
  std::vector<double> alphas;
  for (const auto& tok : alpha_tokens) {
    const double a = parse_number(tok, "alpha");
    if (!(a > 0.0 && a < 1.0)) throw DomainError("alpha must lie in (0, 1): '" + tok + "'");
    alphas.push_back(a);
  }
  for (int n : ns) {
    if (n < 1) throw DomainError("n must be positive");
  }
  Table t;
  t.comments.push_back("asymptotic critical values: c = K^-1(alpha) / sqrt(n), P(D_n >= c) ~ alpha");
  t.columns = {"alpha", "n", "c"};
  bool ok = true;
  for (double a : alphas) {
    const QuantileResult q = kolmogi(ProbPair::from_sf(a));
    ok = ok && q.report.converged;
    for (int n : ns) {
      t.rows.push_back({a, long{n}, q.x / std::sqrt(static_cast<double>(n))});
    }
  }
  emit(out, t, common.fmt(), common.precision);
  if (!ok) {
    err << "table: root-finding did not converge for at least one alpha\n";
    return kNoConvergence;
  }
  return kOk;
}

// --- bench ------------------------------------------------------------------

int cmd_bench(const std::string& suite, const std::string& engine, bool audit, int digits,
              const Common& common, std::ostream& out) {
  std::vector<bench::Engine> engines;
  if (engine == "improved" || engine == "both") engines.push_back(bench::Engine::Improved);
  if (engine == "baseline" || engine == "both") engines.push_back(bench::Engine::Baseline);
  bench::AuditOptions opts;
  opts.enabled = audit;
  opts.digits = digits;

  std::vector<bench::SweepSummary> rows;
  if (suite == "sf" || suite == "all") {
    for (auto e : engines) rows.push_back(bench::sweep_sf(e, bench::kSfGrid, opts));
  }
  if (suite == "isf" || suite == "all") {
    for (auto e : engines) rows.push_back(bench::sweep_isf(e, bench::kIsfGrid, opts));
  }
  switch (common.fmt()) {
    case Format::Csv:
      bench::write_csv(out, rows, common.precision);
      break;
    case Format::Text:
      bench::write_table(out, rows);
      break;
    case Format::Json: {
      Table t;
      t.columns = {"engine", "metric", "mean", "std", "max", "failure_rate", "tol_rate"};
      for (const auto& s : rows) {
        t.rows.push_back({bench::to_string(s.engine), bench::to_string(s.metric), s.mean, s.std,
                          long{s.max}, s.failure_rate, s.tolerance_exceed_rate});
      }
      emit(out, t, Format::Json, common.precision);
      break;
    }
  }
  return kOk;
}

// --- oracle-eval ------------------------------------------------------------

int cmd_oracle(const std::vector<std::string>& tokens, int digits, const Common& common,
               std::ostream& out) {
  Table t;
  t.columns = {"x", "cdf", "sf", "pdf"};
  const int shown = std::min(digits, std::max(common.precision, 17));
  for (const auto& tok : tokens) {
    const double x = parse_number(tok, "x");
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("x must be positive: '" + tok + "'");
    t.rows.push_back({x, oracle::cdf(x, digits).to_string(shown),
                      oracle::sf(x, digits).to_string(shown),
                      oracle::pdf(x, digits).to_string(shown)});
  }
  t.comments.push_back("working precision: " + std::to_string(digits) + " digits");
  emit(out, t, common.fmt(), common.precision);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limiting Kolmogorov distribution: evaluation, inversion and tests", "kolmo"};
  app.require_subcommand(1);

  Common common;

  auto* eval = app.add_subcommand("eval", "SF, CDF and PDF at each x");
  std::vector<std::string> eval_x;
  std::string eval_engine = "improved";
  double eps = kMachineEpsilon;
  eval->add_option("x", eval_x, "Points")->required()->allow_extra_args();
  eval->add_option("--engine", eval_engine)
      ->check(CLI::IsMember({"improved", "baseline"}))
      ->capture_default_str();
  eval->add_option("--eps", eps, "Relative tolerance of the series")->check(CLI::Range(1e-300, 0.5));
  add_common(eval, common);

  auto* invert = app.add_subcommand("invert", "Quantiles from SF and/or CDF probabilities");
  std::vector<std::string> inv_sf, inv_cdf;
  std::string inv_engine = "improved";
  invert->add_option("--sf", inv_sf, "Survival probability (repeatable)")->allow_extra_args(false);
  invert->add_option("--cdf", inv_cdf, "Cumulative probability (repeatable)")->allow_extra_args(false);
  invert->add_option("--engine", inv_engine)
      ->check(CLI::IsMember({"improved", "baseline"}))
      ->capture_default_str();
  add_common(invert, common);

  auto* smir = app.add_subcommand("smirnov", "One-sided D_n^+ survival function");
  int smir_n = 0;
  std::vector<std::string> smir_x;
  smir->add_option("--n", smir_n, "Sample size")->required()->check(CLI::Range(1, smirnov::kMaxExactN));
  smir->add_option("x", smir_x, "Points in [0, 1]")->required();
  add_common(smir, common);

  auto* ks = app.add_subcommand("kstest", "Kolmogorov-Smirnov test on PIT values");
  std::string ks_path;
  int ks_n = 0;
  ks->add_option("--data", ks_path, "File with one PIT value per line")->required();
  ks->add_option("--n-override", ks_n, "Sample size used for the p-values")->check(CLI::PositiveNumber);
  add_common(ks, common);

  auto* table = app.add_subcommand("table", "Asymptotic critical values");
  std::vector<std::string> alphas{"0.1", "0.05", "0.01", "0.001"};
  std::vector<int> ns{1, 10, 100, 1000};
  table->add_option("--alpha", alphas, "Significance levels")->capture_default_str();
  table->add_option("--n", ns, "Sample sizes")->capture_default_str();
  add_common(table, common);

  auto* bench_cmd = app.add_subcommand("bench", "Reproduce the term/iteration tables");
  std::string suite = "all";
  std::string bench_engine = "both";
  bool no_audit = false;
  int bench_digits = 60;
  bench_cmd->add_option("--suite", suite)->check(CLI::IsMember({"sf", "isf", "all"}))->capture_default_str();
  bench_cmd->add_option("--engine", bench_engine)
      ->check(CLI::IsMember({"improved", "baseline", "both"}))
      ->capture_default_str();
  bench_cmd->add_flag("--no-audit", no_audit, "Skip the extended-precision accuracy audit");
  bench_cmd->add_option("--digits", bench_digits, "Oracle precision for the audit")
      ->check(CLI::Range(oracle::kMinDigits, 2000))
      ->capture_default_str();
  add_common(bench_cmd, common);

  auto* orc = app.add_subcommand("oracle-eval", "Extended-precision reference values");
  std::vector<std::string> orc_x;
  int orc_digits = oracle::kDefaultDigits;
  orc->add_option("x", orc_x, "Points")->required();
  orc->add_option("--digits", orc_digits)->check(CLI::Range(oracle::kMinDigits, 5000))->capture_default_str();
  add_common(orc, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_x, eval_engine, eps, common, out);
    if (*invert) return cmd_invert(inv_sf, inv_cdf, inv_engine, common, out, err);
    if (*smir) return cmd_smirnov(smir_n, smir_x, common, out);
    if (*ks) return cmd_kstest(ks_path, ks_n, common, out);
    if (*table) return cmd_table(alphas, ns, common, out, err);
    if (*bench_cmd) return cmd_bench(suite, bench_engine, !no_audit, bench_digits, common, out);
    if (*orc) return cmd_oracle(orc_x, orc_digits, common, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const InvalidPairError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}

}  // namespace kolmo::cli
