#include "iqb/report.hpp"

#include <algorithm>
#include <cstdio>

#include "iqb/csv.hpp"

namespace iqb {
namespace {

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string quoted(std::string_view s) { return "\"" + json_escape(s) + "\""; }

void append_warnings(std::string& out, const std::vector<Finding>& warnings,
                     const std::string& indent) {
  if (warnings.empty()) {
    out += "[]";
    return;
  }
  out += "[\n";
  for (std::size_t i = 0; i < warnings.size(); ++i) {
    const auto& w = warnings[i];
    out += indent + "  {\"severity\": ";
    out += quoted(w.severity == Finding::Severity::Error ? "error" : "warning");
    out += ", \"code\": " + quoted(w.code);
    out += ", \"key\": " + quoted(w.key);
    out += ", \"message\": " + quoted(w.message) + "}";
    out += i + 1 < warnings.size() ? ",\n" : "\n";
  }
  out += indent + "]";
}

void append_report(std::string& out, const ScoreReport& report,
                   const std::string& indent) {
  out += indent + "{\n";
  out += indent + "  \"region_id\": " + quoted(report.region_id) + ",\n";
  out += indent + "  \"quality_level\": " + quoted(to_token(report.quality_level)) + ",\n";
  out += indent + "  \"s_iqb\": " + format_score(report.s_iqb) + ",\n";
  out += indent + "  \"use_cases\": [\n";
  for (std::size_t i = 0; i < report.use_cases.size(); ++i) {
    const auto& uc = report.use_cases[i];
    out += indent + "    {\n";
    out += indent + "      \"use_case\": " + quoted(to_token(uc.use_case)) + ",\n";
    out += indent + "      \"score\": " + format_score(uc.score) + ",\n";
    out += indent + "      \"requirements\": [\n";
    for (std::size_t j = 0; j < uc.requirements.size(); ++j) {
      const auto& req = uc.requirements[j];
      out += indent + "        {\n";
      out += indent + "          \"metric\": " + quoted(to_token(req.metric)) + ",\n";
      out += indent + "          \"score\": " + format_score(req.score) + ",\n";
      out += indent + "          \"datasets\": [\n";
      for (std::size_t k = 0; k < req.datasets.size(); ++k) {
        const auto& ds = req.datasets[k];
        out += indent + "            {\"dataset\": " + quoted(ds.dataset_id);
        out += ", \"binary_score\": " + std::to_string(ds.binary_score);
        out += ", \"aggregate_value\": " + format_score(ds.aggregate_value);
        out += ", \"threshold\": " + format_score(ds.threshold);
        out += ", \"contribution\": " + format_score(ds.contribution) + "}";
        out += k + 1 < req.datasets.size() ? ",\n" : "\n";
      }
      out += indent + "          ]\n";
      out += indent + "        }";
      out += j + 1 < uc.requirements.size() ? ",\n" : "\n";
    }
    out += indent + "      ]\n";
    out += indent + "    }";
    out += i + 1 < report.use_cases.size() ? ",\n" : "\n";
  }
  out += indent + "  ],\n";
  out += indent + "  \"warnings\": ";
  append_warnings(out, report.warnings, indent + "  ");
  out += "\n" + indent + "}";
}

}  // namespace

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string render_reports_json(const RunManifest& manifest,
                                const std::vector<ScoreReport>& reports) {
  std::string out = "{\n";
  out += "  \"manifest\": {\n";
  out += "    \"tool_version\": " + quoted(manifest.tool_version) + ",\n";
  out += "    \"config_digest\": " + quoted(manifest.config_digest) + ",\n";
  out += "    \"input_digests\": [\n";
  for (std::size_t i = 0; i < manifest.input_digests.size(); ++i) {
    out += "      {\"path\": " + quoted(manifest.input_digests[i].first) +
           ", \"digest\": " + quoted(manifest.input_digests[i].second) + "}";
    out += i + 1 < manifest.input_digests.size() ? ",\n" : "\n";
  }
  out += "    ],\n";
  out += "    \"started_at\": " + quoted(format_rfc3339(manifest.started_at)) + ",\n";
  out += "    \"parameters\": {";
  std::size_t i = 0;
  for (const auto& [key, value] : manifest.parameters) {
    out += quoted(key) + ": " + quoted(value);
    if (++i < manifest.parameters.size()) out += ", ";
  }
  out += "}\n";
  out += "  },\n";
  out += "  \"reports\": [\n";
  for (std::size_t r = 0; r < reports.size(); ++r) {
    append_report(out, reports[r], "    ");
    out += r + 1 < reports.size() ? ",\n" : "\n";
  }
  out += "  ]\n";
  out += "}\n";
  return out;
}

std::string render_reports_csv(const std::vector<ScoreReport>& reports) {
  std::string out =
      "region_id,quality_level,use_case,metric,dataset,binary_score,aggregate_value,"
      "threshold,contribution,requirement_score,use_case_score,s_iqb\n";
  for (const auto& report : reports) {
    for (const auto& uc : report.use_cases) {
      for (const auto& req : uc.requirements) {
        for (const auto& ds : req.datasets) {
          out += format_csv_row({report.region_id,
                                 std::string(to_token(report.quality_level)),
                                 std::string(to_token(uc.use_case)),
                                 std::string(to_token(req.metric)), ds.dataset_id,
                                 std::to_string(ds.binary_score),
                                 format_score(ds.aggregate_value),
                                 format_score(ds.threshold),
                                 format_score(ds.contribution), format_score(req.score),
                                 format_score(uc.score), format_score(report.s_iqb)});
        }
      }
    }
  }
  return out;
}

std::string render_explain(const ScoreReport& report, const UseCase* use_case) {
  struct Row {
    std::string use_case;
    std::string metric;
    std::string dataset;
    double weight_share;
    int binary_score;
    double realized;
  };
  std::vector<Row> rows;
  double satisfied_total = 0.0;
  for (const auto& uc : report.use_cases) {
    for (const auto& req : uc.requirements) {
      for (const auto& ds : req.datasets) {
        const double realized = ds.contribution * ds.binary_score;
        satisfied_total += realized;
        if (use_case && uc.use_case != *use_case) continue;
        rows.push_back({std::string(to_token(uc.use_case)),
                        std::string(to_token(req.metric)), ds.dataset_id,
                        ds.contribution, ds.binary_score, realized});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.realized != b.realized) return a.realized > b.realized;
    return std::tie(a.use_case, a.metric, a.dataset) <
           std::tie(b.use_case, b.metric, b.dataset);
  });

  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-20s %-20s %-12s %10s %6s %14s\n", "use_case",
                "metric", "dataset", "weight", "score", "contribution");
  out += line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%-20s %-20s %-12s %10s %6d %14s\n",
                  row.use_case.c_str(), row.metric.c_str(), row.dataset.c_str(),
                  format_score(row.weight_share).c_str(), row.binary_score,
                  format_score(row.realized).c_str());
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "s_iqb = %s for region %s at %s quality (sum of satisfied "
                "contributions = %s)\n",
                format_score(report.s_iqb).c_str(), report.region_id.c_str(),
                std::string(to_token(report.quality_level)).c_str(),
                format_score(satisfied_total).c_str());
  out += line;
  return out;
}

}  // namespace iqb
