#pragma once

#include <cstdint>
#include <string>

#include "setcast/evaluation.hpp"

namespace setcast {

/// Run metadata printed alongside a report.
struct ReportContext {
  std::string model;  // e.g. "naive_bayes", "svm linear C=1"
  std::string data;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::uint64_t fold_digest = 0;
};

/// Summary, detailed accuracy by class and confusion matrix, in that order.
std::string render_text(const eval::EvaluationReport& report, const ReportContext& ctx);

/// `key = value` lines holding every report field at full precision.
std::string render_machine(const eval::EvaluationReport& report, const ReportContext& ctx);

struct ComparisonReport {
  ReportContext nb_context;
  eval::EvaluationReport nb;
  ReportContext svm_context;
  eval::EvaluationReport svm;
};

/// Side-by-side accuracy, MAE, RMSE, RAE, RRSE, then both confusion matrices.
std::string render_comparison_text(const ComparisonReport& cmp);
std::string render_comparison_machine(const ComparisonReport& cmp);

std::string hex_digest(std::uint64_t v);

}  // namespace setcast
