#include "setcast/report.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "setcast/keyvalue.hpp"

namespace setcast {

namespace {

std::string printf_string(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

std::string printf_string(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

std::string stat(double v) { return std::isnan(v) ? std::string("?") : printf_string("%.3f", v); }

std::string lower(Direction d) { return d == Direction::Up ? "up" : "down"; }

void append_matrix(std::string& out, const eval::ConfusionMatrix& m) {
  out += "   a   b   <-- classified as\n";
  const char* letters = "ab";
  for (auto d : kDirections) {
    out += printf_string(" %3zu %3zu |   %c = %s\n", m.at(d, Direction::Up), m.at(d, Direction::Down),
                         letters[index(d)], std::string(to_string(d)).c_str());
  }
}

void put_stats(KeyValueWriter& w, const std::string& prefix, const eval::ClassStats& s) {
  w.put(prefix + "tp_rate", s.tp_rate);
  w.put(prefix + "fp_rate", s.fp_rate);
  w.put(prefix + "precision", s.precision);
  w.put(prefix + "recall", s.recall);
  w.put(prefix + "f_measure", s.f_measure);
  w.put(prefix + "roc_area", s.roc_area);
}

void put_report(KeyValueWriter& w, const std::string& p, const eval::EvaluationReport& r, const ReportContext& ctx) {
  w.put(p + "model", ctx.model);
  w.put(p + "data", ctx.data);
  w.put(p + "folds", ctx.folds);
  w.put(p + "seed", static_cast<std::int64_t>(ctx.seed));
  w.put(p + "fold_digest", hex_digest(ctx.fold_digest));
  w.put(p + "n", r.n);
  w.put(p + "correct", r.matrix.trace());
  w.put(p + "incorrect", r.n - r.matrix.trace());
  w.put(p + "accuracy", r.accuracy);
  w.put(p + "kappa", r.kappa);
  w.put(p + "mae", r.mae);
  w.put(p + "rmse", r.rmse);
  w.put(p + "rae", r.rae);
  w.put(p + "rrse", r.rrse);
  for (auto a : kDirections) {
    for (auto q : kDirections) w.put(p + "confusion." + lower(a) + "." + lower(q), r.matrix.at(a, q));
  }
  for (auto c : kDirections) {
    put_stats(w, p + "class." + lower(c) + ".", r.per_class[index(c)]);
    w.put(p + "class." + lower(c) + ".never_predicted", r.per_class[index(c)].never_predicted);
  }
  put_stats(w, p + "weighted.", r.weighted);
  w.put(p + "warnings", r.warnings.size());
  for (std::size_t i = 0; i < r.warnings.size(); ++i) w.put(p + "warning." + std::to_string(i), r.warnings[i]);
}

}  // namespace

std::string hex_digest(std::uint64_t v) { return printf_string("%016llx", static_cast<unsigned long long>(v)); }

std::string render_text(const eval::EvaluationReport& r, const ReportContext& ctx) {
  std::string out;
  out += "=== Run information ===\n\n";
  out += "Scheme:       " + ctx.model + "\n";
  out += "Data:         " + ctx.data + "\n";
  out += printf_string("Instances:    %zu\n", r.n);
  out += printf_string("Test mode:    %zu-fold stratified cross-validation, seed %llu\n", ctx.folds,
                       static_cast<unsigned long long>(ctx.seed));
  out += "Fold digest:  " + hex_digest(ctx.fold_digest) + "\n\n";

  const double n = static_cast<double>(r.n);
  const std::size_t correct = r.matrix.trace();
  out += "=== Stratified cross-validation ===\n=== Summary ===\n\n";
  out += printf_string("Correctly Classified Instances       %5zu     %9.4f %%\n", correct,
                       100.0 * static_cast<double>(correct) / n);
  out += printf_string("Incorrectly Classified Instances     %5zu     %9.4f %%\n", r.n - correct,
                       100.0 * static_cast<double>(r.n - correct) / n);
  out += printf_string("Kappa statistic                      %10.4f\n", r.kappa);
  out += printf_string("Mean absolute error                  %10.4f\n", r.mae);
  out += printf_string("Root mean squared error              %10.4f\n", r.rmse);
  out += printf_string("Relative absolute error              %10.4f %%\n", r.rae);
  out += printf_string("Root relative squared error          %10.4f %%\n", r.rrse);
  out += printf_string("Total Number of Instances            %5zu\n\n", r.n);

  out += "=== Detailed Accuracy By Class ===\n\n";
  out += "               TP Rate  FP Rate  Precision  Recall  F-Measure  ROC Area  Class\n";
  auto row = [&](const std::string& label, const eval::ClassStats& s, const std::string& cls) {
    out += printf_string("%-14s %7s  %7s  %9s  %6s  %9s  %8s  %s\n", label.c_str(), stat(s.tp_rate).c_str(),
                         stat(s.fp_rate).c_str(), stat(s.precision).c_str(), stat(s.recall).c_str(),
                         stat(s.f_measure).c_str(), stat(s.roc_area).c_str(), cls.c_str());
  };
  for (auto c : kDirections) row("", r.per_class[index(c)], std::string(to_string(c)));
  row("Weighted Avg.", r.weighted, "");
  out += "\n=== Confusion Matrix ===\n\n";
  append_matrix(out, r.matrix);
  for (const auto& w : r.warnings) out += "\nwarning: " + w;
  if (!r.warnings.empty()) out += "\n";
  return out;
}

std::string render_machine(const eval::EvaluationReport& r, const ReportContext& ctx) {
  KeyValueWriter w;
  put_report(w, "", r, ctx);
  return w.str();
}

std::string render_comparison_text(const ComparisonReport& cmp) {
  std::string out;
  out += printf_string("%zu-fold stratified cross-validation, seed %llu, fold digest %s\n\n", cmp.nb_context.folds,
                       static_cast<unsigned long long>(cmp.nb_context.seed),
                       hex_digest(cmp.nb_context.fold_digest).c_str());
  out += printf_string("%-34s %12s %12s\n", "", "SVM", "Naive Bayes");
  out += printf_string("%-34s %10.2f %% %10.2f %%\n", "Correctly classified instances", 100.0 * cmp.svm.accuracy,
                       100.0 * cmp.nb.accuracy);
  out += printf_string("%-34s %12.4f %12.4f\n", "Mean absolute error", cmp.svm.mae, cmp.nb.mae);
  out += printf_string("%-34s %12.4f %12.4f\n", "Root mean squared error", cmp.svm.rmse, cmp.nb.rmse);
  out += printf_string("%-34s %10.2f %% %10.2f %%\n", "Relative absolute error", cmp.svm.rae, cmp.nb.rae);
  out += printf_string("%-34s %10.2f %% %10.2f %%\n", "Root relative squared error", cmp.svm.rrse, cmp.nb.rrse);
  out += "\nConfusion matrix for SVM (" + cmp.svm_context.model + "):\n\n";
  append_matrix(out, cmp.svm.matrix);
  out += "\nConfusion matrix for naive Bayes (" + cmp.nb_context.model + "):\n\n";
  append_matrix(out, cmp.nb.matrix);
  return out;
}

std::string render_comparison_machine(const ComparisonReport& cmp) {
  KeyValueWriter w;
  put_report(w, "nb.", cmp.nb, cmp.nb_context);
  put_report(w, "svm.", cmp.svm, cmp.svm_context);
  return w.str();
}

}  // namespace setcast
