#include "kolmo/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "kolmo/baseline.hpp"
#include "kolmo/dist.hpp"
#include "kolmo/oracle.hpp"
#include "kolmo/quantile.hpp"

namespace kolmo::bench {

std::size_t GridSpec::size() const {
  if (!(step > 0.0) || stop < start) return stop == start ? 1 : 0;
  return static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
}

double GridSpec::at(std::size_t i) const { return start + static_cast<double>(i) * step; }

namespace {

PointRecord sf_point(Engine engine, double x, const AuditOptions& audit) {
  PointRecord rec;
  rec.arg = x;
  if (!(x > 0.0)) return rec;  // degenerate point, zero cost

  if (engine == Engine::Improved) {
    const DistTriple d = kolmogorov(x);
    rec.cost = d.terms;
    if (audit.enabled) {
      // Judge the smaller of the two probabilities.
      const oracle::BigReal cdf = oracle::cdf(x, audit.digits);
      rec.rel_error = mpfr_cmp_d(cdf.raw(), 0.5) < 0
                          ? oracle::relative_error(d.cdf, cdf)
                          : oracle::relative_error(d.sf, oracle::sf(x, audit.digits));
    }
  } else {
    const baseline::BaselineResult b = baseline::baseline_sf(x);
    rec.cost = b.terms_or_iters;
    rec.failed = b.hit_cap;
    // The legacy routine only produces the SF.
    if (audit.enabled) rec.rel_error = oracle::relative_error(b.value, oracle::sf(x, audit.digits));
  }
  rec.exceeded = audit.enabled && !(rec.rel_error <= audit.rel_tol);
  return rec;
}

PointRecord isf_point(Engine engine, double p, const AuditOptions& audit) {
  PointRecord rec;
  rec.arg = p;
  if (!(p > 0.0 && p < 1.0)) return rec;  // special cases: 0 or +inf directly

  double x = 0.0;
  if (engine == Engine::Improved) {
    const QuantileResult r = kolmogi(ProbPair::from_sf(p));
    rec.cost = r.report.iterations;
    rec.failed = !r.report.converged;
    x = r.x;
  } else {
    const baseline::BaselineIsfResult r = baseline::baseline_isf(p);
    rec.cost = r.terms_or_iters;
    rec.failed = r.hit_cap;
    x = r.value;
  }
  if (audit.enabled) {
    rec.rel_error = oracle::relative_error(x, oracle::quantile_sf(p, audit.digits));
    rec.exceeded = !(rec.rel_error <= audit.rel_tol);
  }
  return rec;
}

template <typename PointFn>
std::vector<PointRecord> run_parallel(GridSpec grid, PointFn&& fn) {
  std::vector<PointRecord> out(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = fn(grid.at(static_cast<std::size_t>(i)));
  }
  return out;
}

template <typename PointFn>
std::vector<PointRecord> run_serial(GridSpec grid, PointFn&& fn) {
  std::vector<PointRecord> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(grid.at(i));
  return out;
}

}  // namespace

std::vector<PointRecord> sf_records(Engine engine, GridSpec grid, AuditOptions audit) {
  return run_parallel(grid, [&](double x) { return sf_point(engine, x, audit); });
}

std::vector<PointRecord> sf_records_serial(Engine engine, GridSpec grid, AuditOptions audit) {
  return run_serial(grid, [&](double x) { return sf_point(engine, x, audit); });
}

std::vector<PointRecord> isf_records(Engine engine, GridSpec grid, AuditOptions audit) {
  return run_parallel(grid, [&](double p) { return isf_point(engine, p, audit); });
}

std::vector<PointRecord> isf_records_serial(Engine engine, GridSpec grid, AuditOptions audit) {
  return run_serial(grid, [&](double p) { return isf_point(engine, p, audit); });
}

SweepSummary summarize(std::span<const PointRecord> records, Engine engine,
                       Metric metric, GridSpec grid, bool audited) {
  SweepSummary s;
  s.engine = engine;
  s.metric = metric;
  s.grid = grid;
  s.points = records.size();
  s.audited = audited;
  if (records.empty()) return s;

  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t ok = 0;
  std::size_t failed = 0;
  std::size_t exceeded = 0;
  for (const PointRecord& r : records) {
    if (r.exceeded) ++exceeded;
    if (r.failed) {
      ++failed;
      continue;
    }
    ++ok;
    sum += r.cost;
    sum_sq += static_cast<double>(r.cost) * r.cost;
    s.max = std::max(s.max, r.cost);
  }
  const double total = static_cast<double>(records.size());
  s.failure_rate = static_cast<double>(failed) / total;
  s.tolerance_exceed_rate = static_cast<double>(exceeded) / total;
  if (ok > 0) {
    const double n = static_cast<double>(ok);
    s.mean = sum / n;
    // Sample standard deviation.
    s.std = ok > 1 ? std::sqrt(std::max(0.0, (sum_sq - n * s.mean * s.mean) / (n - 1.0))) : 0.0;
  }
  return s;
}

SweepSummary sweep_sf(Engine engine, GridSpec grid, AuditOptions audit) {
  const auto records = sf_records(engine, grid, audit);
  return summarize(records, engine, Metric::Terms, grid, audit.enabled);
}

SweepSummary sweep_isf(Engine engine, GridSpec grid, AuditOptions audit) {
  const auto records = isf_records(engine, grid, audit);
  return summarize(records, engine, Metric::Iterations, grid, audit.enabled);
}

std::string to_string(Engine e) { return e == Engine::Improved ? "improved" : "baseline"; }

std::string to_string(Metric m) { return m == Metric::Terms ? "terms" : "iterations"; }

void write_csv(std::ostream& os, std::span<const SweepSummary> rows, int precision) {
  os << kCsvHeader << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return std::string(buf);
  };
  for (const SweepSummary& s : rows) {
    os << to_string(s.engine) << ',' << to_string(s.metric) << ',' << num(s.mean) << ','
       << num(s.std) << ',' << s.max << ',' << num(s.failure_rate) << ','
       << num(s.tolerance_exceed_rate) << '\n';
  }
}

void write_table(std::ostream& os, std::span<const SweepSummary> rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-10s %8s %8s %6s %9s %10s\n", "engine", "metric",
                "mean", "std", "max", "failure", "tolerance");
  os << line;
  for (const SweepSummary& s : rows) {
    char tol[16];
    if (s.audited) {
      std::snprintf(tol, sizeof tol, "%.1f%%", 100.0 * s.tolerance_exceed_rate);
    } else {
      std::snprintf(tol, sizeof tol, "n/a");
    }
    std::snprintf(line, sizeof line, "%-10s %-10s %8.1f %8.1f %6d %8.1f%% %10s\n",
                  to_string(s.engine).c_str(), to_string(s.metric).c_str(), s.mean, s.std,
                  s.max, 100.0 * s.failure_rate, tol);
    os << line;
  }
}

}  // namespace kolmo::bench
