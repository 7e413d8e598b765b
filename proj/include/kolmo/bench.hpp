#pragma once

// Grid sweeps that tabulate evaluation cost (series terms for the SF/CDF,
// Newton iterations for the ISF) together with cap failures and an
// extended-precision accuracy audit.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kolmo::bench {

enum class Engine { Improved, Baseline };
enum class Metric { Terms, Iterations };

struct GridSpec {
  double start;
  double step;
  double stop;

  // Inclusive of both ends.
  std::size_t size() const;
  double at(std::size_t i) const;
};

inline constexpr GridSpec kSfGrid{0.0, 0.001, 1.7};
inline constexpr GridSpec kIsfGrid{0.0, 0.001, 1.0};

struct AuditOptions {
  bool enabled = true;
  int digits = 60;
  double rel_tol = 1e-9;
};

// Per grid point.
struct PointRecord {
  double arg = 0.0;
  int cost = 0;
  bool failed = false;
  bool exceeded = false;
  double rel_error = 0.0;  // 0 when not audited
};

struct SweepSummary {
  Engine engine = Engine::Improved;
  Metric metric = Metric::Terms;
  // Mean, std and max over points that did not fail.
  double mean = 0.0;
  double std = 0.0;
  int max = 0;
  double failure_rate = 0.0;
  double tolerance_exceed_rate = 0.0;
  GridSpec grid{0.0, 0.0, 0.0};
  std::size_t points = 0;
  bool audited = false;
};

// Term counts of the SF/CDF over the grid (x values).
SweepSummary sweep_sf(Engine engine, GridSpec grid = kSfGrid, AuditOptions audit = {});
// Iteration counts of the ISF over the grid (p_sf values).
SweepSummary sweep_isf(Engine engine, GridSpec grid = kIsfGrid, AuditOptions audit = {});

// Per-point records; the OpenMP kernel and its serial reference.
std::vector<PointRecord> sf_records(Engine engine, GridSpec grid, AuditOptions audit);
std::vector<PointRecord> sf_records_serial(Engine engine, GridSpec grid, AuditOptions audit);
std::vector<PointRecord> isf_records(Engine engine, GridSpec grid, AuditOptions audit);
std::vector<PointRecord> isf_records_serial(Engine engine, GridSpec grid, AuditOptions audit);

SweepSummary summarize(std::span<const PointRecord> records, Engine engine,
                       Metric metric, GridSpec grid, bool audited);

std::string to_string(Engine e);
std::string to_string(Metric m);

inline constexpr const char* kCsvHeader =
    "engine,metric,mean,std,max,failure_rate,tol_rate";

void write_csv(std::ostream& os, std::span<const SweepSummary> rows,
               int precision = 17);
void write_table(std::ostream& os, std::span<const SweepSummary> rows);

}  // namespace kolmo::bench
