#pragma once

#include <map>
#include <string>
#include <vector>

#include "iqb/rfc3339.hpp"
#include "iqb/scoring.hpp"

namespace iqb {

// Provenance record embedded in score reports so published numbers are
// auditable and reproducible. Two runs with equal manifests (timestamps
// aside) produce byte-identical reports.
struct RunManifest {
  std::string tool_version;
  std::string config_digest;
  std::vector<std::pair<std::string, std::string>> input_digests;  // (path, digest)
  Instant started_at = 0;
  std::map<std::string, std::string> parameters;  // resolved flag values
};

// Score report JSON: {"manifest": {...}, "reports": [...]}; reports are
// ordered by region id, arrays inside each report token-lexicographically.
// All score and threshold values are serialized with 6 decimal places.
std::string render_reports_json(const RunManifest& manifest,
                                const std::vector<ScoreReport>& reports);

// Flat CSV export: one row per (region, use_case, metric, dataset).
std::string render_reports_csv(const std::vector<ScoreReport>& reports);

// Contribution table for the explain command: one row per (u, r, d) cell with
// the realized term w'_u * w'_{u,r} * w'_{u,r,d} * S, sorted by contribution
// descending (ties broken by key), plus a footer restating s_iqb. `use_case`
// filters rows when non-null.
std::string render_explain(const ScoreReport& report, const UseCase* use_case);

// "0.950980" — the fixed 6-decimal form used across report surfaces.
std::string format_score(double value);

}  // namespace iqb
