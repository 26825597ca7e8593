#pragma once

#include <string>
#include <vector>

#include "nirspec/cross_validation.hpp"

namespace nirspec {

/// "0.851 ± 0.017" with three decimals.
std::string format_mean_std(double mean, double std_dev);

std::string eval_report_to_json(const EvalReport& report);
EvalReport eval_report_from_json(const std::string& text);
void write_eval_report(const EvalReport& report, const std::string& path);
EvalReport read_eval_report(const std::string& path);

/// One table row: an algorithm and its cross-validation report.
struct ReportRow {
  std::string label;
  EvalReport report;
};

/// Renders rows grouped by (augmentation, preprocessing) arm, one table per
/// group, columns ACC / BACC / Recall / Precision / F-Score as mean ± std.
std::string render_report_text(const std::vector<ReportRow>& rows);
std::string render_report_markdown(const std::vector<ReportRow>& rows);
std::string render_report_csv(const std::vector<ReportRow>& rows);

}  // namespace nirspec
