#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iqb/csv.hpp"
#include "iqb/measurement.hpp"
#include "iqb/rfc3339.hpp"
#include "iqb/types.hpp"

namespace iqb {

// Maps one dataset export layout onto the canonical record form: column
// renames plus unit conversion factors. Long format only: one measurement
// per row.
struct AdapterSpec {
  // When set, every row belongs to this dataset; when empty, column_map must
  // map a dataset_id column.
  std::string dataset;
  Granularity granularity = Granularity::PerTest;
  std::map<std::string, std::string> column_map;  // source column -> canonical field
  // Extra source-unit tokens and their factors to the canonical unit, applied
  // after the built-in table (kbps, Gbps, s, us, percent, ...).
  std::map<std::string, double> unit_conversions;
};

// Identity adapters for the canonical CSV schemas:
//   per-test:        region_id,dataset_id,metric,value,unit,timestamp
//   pre-aggregated:  region_id,dataset_id,metric,statistic,value,unit,sample_count
AdapterSpec canonical_per_test_adapter();
AdapterSpec canonical_pre_aggregated_adapter();

// True when every source column the adapter needs is present in `header`.
bool adapter_matches(const AdapterSpec& spec, const std::vector<std::string>& header);

// Loads an adapter spec from a JSON document; throws std::runtime_error on
// unknown keys, unknown tokens, or a column_map that does not cover the
// required canonical fields for the declared granularity.
AdapterSpec parse_adapter_spec(const std::string& text);
AdapterSpec load_adapter_spec(const std::string& path);

// One excluded input row; row numbers are 1-based over data rows (the header
// is row 0).
struct RejectRow {
  std::size_t row_number = 0;
  std::string reason;

  friend bool operator==(const RejectRow&, const RejectRow&) = default;
};

struct PerTestParseResult {
  std::vector<MeasurementRecord> records;
  std::vector<RejectRow> rejects;
  std::vector<Finding> notes;  // e.g. count of window-filtered rows
};

// Maps and unit-converts each row; malformed rows land in rejects with a row
// number and reason and never abort the batch. Rows outside `window` are
// rejected with reason "outside time window" so records + rejects always
// equals the number of input rows. Throws std::runtime_error only when the
// input as a whole is unusable (adapter columns missing from the header).
PerTestParseResult parse_per_test(const CsvTable& input, const AdapterSpec& spec,
                                  const std::optional<TimeWindow>& window = {});

struct PreAggregatedParseResult {
  std::vector<AggregateStat> stats;
  std::vector<RejectRow> rejects;
  std::vector<Finding> notes;
};

// Pre-aggregated rows become Provided stats carrying the source's declared
// statistic token. A missing sample_count becomes 0 plus a warning on the
// stat. Duplicate (region, dataset, metric) rows are rejected.
PreAggregatedParseResult parse_pre_aggregated(const CsvTable& input,
                                              const AdapterSpec& spec);

// Converts `value` in `unit` to the metric's canonical unit using the
// built-in table plus adapter-specific factors. Nullopt for unknown units.
std::optional<double> convert_unit(Metric metric, const std::string& unit, double value,
                                   const std::map<std::string, double>& extra);

// Serialization back to the canonical CSV schemas.
std::string format_measurement_csv(const std::vector<MeasurementRecord>& records);
std::string format_aggregate_csv_header();
std::string format_aggregate_csv_row(const AggregateStat& stat);
std::string format_reject_csv(const std::vector<RejectRow>& rejects);

}  // namespace iqb
