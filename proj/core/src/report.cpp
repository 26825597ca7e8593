#include "nirspec/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nirspec {

std::string format_mean_std(double mean, double std_dev) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f ± %.3f", mean, std_dev);
  return buf;
}

namespace {

nlohmann::json metric_set_to_json(const MetricSet& m) {
  return {{"acc", m.acc},
          {"bacc", m.bacc},
          {"recall", m.recall},
          {"precision", m.precision},
          {"f_score", m.f_score},
          {"specificity", m.specificity},
          {"degenerate_ratio", m.degenerate_ratio}};
}

MetricSet metric_set_from_json(const nlohmann::json& j) {
  MetricSet m;
  m.acc = j.at("acc").get<double>();
  m.bacc = j.at("bacc").get<double>();
  m.recall = j.at("recall").get<double>();
  m.precision = j.at("precision").get<double>();
  m.f_score = j.at("f_score").get<double>();
  m.specificity = j.value("specificity", 0.0);
  m.degenerate_ratio = j.value("degenerate_ratio", false);
  return m;
}

}  // namespace

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["preprocess"] = std::string(preprocess_arm_name(report.preprocess));
  j["augment"] = std::string(augment_arm_name(report.augment));
  j["model"] = std::string(model_kind_name(report.model));
  j["arm_code"] = arm_code(report.augment, report.preprocess);
  j["k"] = report.k;
  j["seed"] = report.seed;
  j["statistic_source"] = "cv_validation";
  j["leakage_violations"] = report.leakage_violations;
  j["degenerate_ratio_warning"] = report.degenerate_ratio_warning;
  j["folds"] = nlohmann::json::array();
  for (const FoldResult& f : report.folds) {
    j["folds"].push_back({{"fold", f.fold},
                          {"tp", f.counts.tp},
                          {"tn", f.counts.tn},
                          {"fp", f.counts.fp},
                          {"fn", f.counts.fn},
                          {"metrics", metric_set_to_json(f.metrics)}});
  }
  j["mean"] = metric_set_to_json(report.mean);
  j["stddev"] = metric_set_to_json(report.stddev);
  return j.dump(2) + "\n";
}

EvalReport eval_report_from_json(const std::string& text) {
  EvalReport report;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    report.preprocess = preprocess_arm_from_name(j.at("preprocess").get<std::string>());
    report.augment = augment_arm_from_name(j.at("augment").get<std::string>());
    report.model = model_kind_from_name(j.at("model").get<std::string>());
    report.k = j.at("k").get<int>();
    report.seed = j.value("seed", std::uint64_t{0});
    report.leakage_violations = j.value("leakage_violations", 0);
    report.degenerate_ratio_warning = j.value("degenerate_ratio_warning", false);
    for (const auto& fj : j.at("folds")) {
      FoldResult f;
      f.fold = fj.at("fold").get<int>();
      f.counts.tp = fj.at("tp").get<long>();
      f.counts.tn = fj.at("tn").get<long>();
      f.counts.fp = fj.at("fp").get<long>();
      f.counts.fn = fj.at("fn").get<long>();
      f.metrics = metric_set_from_json(fj.at("metrics"));
      report.folds.push_back(std::move(f));
    }
    report.mean = metric_set_from_json(j.at("mean"));
    report.stddev = metric_set_from_json(j.at("stddev"));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("eval report JSON: ") + e.what());
  }
  return report;
}

void write_eval_report(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << eval_report_to_json(report);
  if (!out) throw IoError("write to '" + path + "' failed");
}

EvalReport read_eval_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return eval_report_from_json(buf.str());
}

namespace {

constexpr const char* kMetricHeaders[5] = {"ACC", "BACC", "Recall", "Precision", "F-Score"};

std::array<std::string, 5> row_cells(const EvalReport& r) {
  return {format_mean_std(r.mean.acc, r.stddev.acc),
          format_mean_std(r.mean.bacc, r.stddev.bacc),
          format_mean_std(r.mean.recall, r.stddev.recall),
          format_mean_std(r.mean.precision, r.stddev.precision),
          format_mean_std(r.mean.f_score, r.stddev.f_score)};
}

std::string group_title(const EvalReport& r) {
  return arm_code(r.augment, r.preprocess) + ": " + std::string(augment_arm_name(r.augment)) +
         " augmentation, " + std::string(preprocess_arm_name(r.preprocess)) +
         " preprocessing (CV validation, k=" + std::to_string(r.k) + ")";
}

/// Rows grouped by arm pair, preserving first-seen group order.
std::vector<std::vector<const ReportRow*>> group_rows(const std::vector<ReportRow>& rows) {
  std::vector<std::vector<const ReportRow*>> groups;
  std::map<std::pair<int, int>, std::size_t> index;
  for (const ReportRow& row : rows) {
    const auto key = std::make_pair(static_cast<int>(row.report.augment),
                                    static_cast<int>(row.report.preprocess));
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, groups.size());
      groups.push_back({&row});
    } else {
      groups[it->second].push_back(&row);
    }
  }
  return groups;
}

}  // namespace

std::string render_report_text(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw InvalidConfigError("no report rows");
  std::ostringstream out;
  for (const auto& group : group_rows(rows)) {
    out << group_title(group.front()->report) << '\n';
    std::size_t label_width = 9;  // "Algorithm"
    for (const ReportRow* row : group) label_width = std::max(label_width, row->label.size());
    const int cell_width = 16;  // fits "0.851 ± 0.017"

    out << std::string(label_width, ' ');
    for (const char* h : kMetricHeaders) {
      out << "  " << h << std::string(cell_width - std::string(h).size(), ' ');
    }
    out << '\n';
    for (const ReportRow* row : group) {
      out << row->label << std::string(label_width - row->label.size(), ' ');
      for (const std::string& cell : row_cells(row->report)) {
        // The ± glyph is two bytes in UTF-8; pad on display width.
        const std::size_t display = cell.size() - 1;
        out << "  " << cell
            << std::string(cell_width > display ? cell_width - display : 1, ' ');
      }
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

std::string render_report_markdown(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw InvalidConfigError("no report rows");
  std::ostringstream out;
  for (const auto& group : group_rows(rows)) {
    out << "### " << group_title(group.front()->report) << "\n\n";
    out << "| Algorithm |";
    for (const char* h : kMetricHeaders) out << ' ' << h << " |";
    out << "\n|---|";
    for (int i = 0; i < 5; ++i) out << "---|";
    out << '\n';
    for (const ReportRow* row : group) {
      out << "| " << row->label << " |";
      for (const std::string& cell : row_cells(row->report)) out << ' ' << cell << " |";
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

std::string render_report_csv(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw InvalidConfigError("no report rows");
  std::ostringstream out;
  out << "arm,augment,preprocess,algorithm,acc_mean,acc_std,bacc_mean,bacc_std,"
         "recall_mean,recall_std,precision_mean,precision_std,f_score_mean,f_score_std\n";
  char buf[32];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  for (const ReportRow& row : rows) {
    const EvalReport& r = row.report;
    out << arm_code(r.augment, r.preprocess) << ',' << augment_arm_name(r.augment) << ','
        << preprocess_arm_name(r.preprocess) << ',' << row.label << ',' << num(r.mean.acc)
        << ',' << num(r.stddev.acc) << ',' << num(r.mean.bacc) << ',' << num(r.stddev.bacc)
        << ',' << num(r.mean.recall) << ',' << num(r.stddev.recall) << ','
        << num(r.mean.precision) << ',' << num(r.stddev.precision) << ','
        << num(r.mean.f_score) << ',' << num(r.stddev.f_score) << '\n';
  }
  return out.str();
}

}  // namespace nirspec
