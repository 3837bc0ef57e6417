#pragma once

// Parameter sweeps over (N, mu, encode_len, t_L, t_R) grids.
//
// Configuration is a JSON document:
//
//   {
//     "model":      {"q": 4, "v": 0.95, "beta": 1.0, "N": [1000, "inf"]},
//     "protocol":   {"mu": [-0.05, 0.05], "encode_len": [1]},
//     "grid":       {"t_L": {"min": 0, "max": 3, "count": 201}, "t_R": "diagonal"},
//     "quadrature": {"node_count": 64, "refinement_limit": 4, "rel_tol": 1e-10,
//                    "abs_floor": 1e-14, "rule": "log_trapezoid"},
//     "output":     {"format": "csv", "path": "out.csv", "units": "nats"},
//     "threads":    "auto"
//   }
//
// quadrature, output and threads are optional. Rows come out in the
// lexicographic order N, mu, encode_len, t_L, t_R whatever the thread count.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "scramblon/correlators.hpp"
#include "scramblon/model.hpp"
#include "scramblon/quadrature.hpp"

namespace scramblon {

struct GridRange {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double at(int i) const;
};

enum class OutputFormat { Csv, Json };
enum class InfoUnits { Nats, Bits };

struct SweepConfig {
  int q = 4;
  double v = 0.95;
  double beta = 1.0;
  std::vector<SystemSize> sizes;
  std::vector<double> mus;
  std::vector<int> encode_lens{1};
  GridRange t_left;
  bool diagonal = true;
  GridRange t_right;  // ignored when diagonal
  QuadratureSpec quadrature;
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // empty: standard output, no sidecar
  InfoUnits units = InfoUnits::Nats;
  int threads = 0;   // 0 = hardware concurrency

  // Throws ConfigError.
  void validate() const;
  std::size_t row_count() const;
  int resolved_threads() const;
};

SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::string& path);
std::string config_to_json(const SweepConfig& cfg, int indent = 2);

// fig4, fig5, fig6 or fig7. Throws ConfigError for anything else.
SweepConfig preset(const std::string& name);
const std::vector<std::string>& preset_names();

enum class RowStatus { Ok, Clamped, NonPhysical, NoConvergence, Domain };
const char* status_name(RowStatus s);

struct SweepRow {
  double t_left = 0.0;
  double t_right = 0.0;
  double mu = 0.0;
  SystemSize size = SystemSize::infinite();
  int encode_len = 1;
  CorrelatorSet correlators;
  double rho2 = 0.0;
  double rho4 = 0.0;
  double mutual_info = 0.0;  // nats
  double negativity = 0.0;
  RowStatus status = RowStatus::Ok;

  bool failed() const noexcept {
    return status != RowStatus::Ok && status != RowStatus::Clamped;
  }
};

struct SweepResult {
  std::vector<SweepRow> rows;

  std::size_t failed_count() const;
};

// One grid point, with failures recorded in the row status.
SweepRow evaluate_row(const ModelParams& params, const ProtocolPoint& pt,
                      const QuadratureSpec& spec);

SweepResult run_sweep(const SweepConfig& cfg);

extern const char* const kCsvHeader;

void write_csv(const SweepResult& result, const SweepConfig& cfg, std::ostream& os);
void write_json(const SweepResult& result, const SweepConfig& cfg, std::ostream& os);

// Writes cfg.path in cfg.format plus <path>.meta.json, or the table alone to
// standard output when cfg.path is empty. Throws IoError.
void emit(const SweepResult& result, const SweepConfig& cfg);

// Every intermediate quantity of one point, as a JSON document.
std::string point_report(const ModelParams& params, const ProtocolPoint& pt,
                         const QuadratureSpec& spec);

}  // namespace scramblon
