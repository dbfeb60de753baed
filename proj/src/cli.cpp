#include "setcast/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "setcast/dataset.hpp"
#include "setcast/error.hpp"
#include "setcast/evaluation.hpp"
#include "setcast/keyvalue.hpp"
#include "setcast/learners.hpp"
#include "setcast/report.hpp"

#ifndef SETCAST_DATA_DIR_DEFAULT
#define SETCAST_DATA_DIR_DEFAULT "data"
#endif

namespace setcast::cli {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SETCAST_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return SETCAST_DATA_DIR_DEFAULT;
}

namespace {

// Raw flag values before validation; kernel and priors are turned into typed options later.
struct Flags {
  std::string data;
  std::string model = "nb";
  std::string kernel = "linear";
  int degree = 2;
  double delta_sq = 1.0;
  double cost = 1.0;
  double kkt_tol = 1e-3;
  std::size_t max_passes = 100;
  bool standardize = false;
  std::string priors = "frequency";
  std::string smoothing = "add-one";
  std::string estimator = "resolution";
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string output;
  std::size_t jobs = 1;
};

void add_data_flag(CLI::App* cmd, Flags& f) {
  cmd->add_option("--data", f.data, "Labeled-sample CSV (default: $SETCAST_DATA_DIR/appendix_b.csv)");
}

void add_model_flags(CLI::App* cmd, Flags& f, bool with_selector) {
  if (with_selector) {
    cmd->add_option("--model", f.model, "Classifier")->check(CLI::IsMember({"nb", "svm"}));
  }
  cmd->add_option("--kernel", f.kernel, "SVM kernel")->check(CLI::IsMember({"linear", "poly", "rbf"}));
  cmd->add_option("--degree", f.degree, "Polynomial kernel degree");
  cmd->add_option("--delta-sq", f.delta_sq, "RBF bandwidth");
  cmd->add_option("--cost", f.cost, "SVM box constraint C");
  cmd->add_option("--kkt-tol", f.kkt_tol, "SMO KKT tolerance");
  cmd->add_option("--max-passes", f.max_passes, "SMO full-sweep limit");
  cmd->add_flag("--standardize", f.standardize, "Z-score features before SVM training");
  cmd->add_option("--priors", f.priors, "Naive Bayes class priors")->check(CLI::IsMember({"frequency", "uniform"}));
  cmd->add_option("--smoothing", f.smoothing, "Categorical smoothing")->check(CLI::IsMember({"add-one", "paper"}));
  cmd->add_option("--estimator", f.estimator, "Continuous attribute estimator")
      ->check(CLI::IsMember({"resolution", "population", "sample"}));
  cmd->add_option("--seed", f.seed, "Random seed");
}

void add_eval_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--folds", f.folds, "Cross-validation folds");
  cmd->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"text", "machine"}));
  cmd->add_option("--jobs", f.jobs, "Folds trained concurrently")->check(CLI::PositiveNumber);
}

ExperimentConfig to_config(const Flags& f) {
  ExperimentConfig c;
  c.data = f.data.empty() ? default_data_dir() / "appendix_b.csv" : std::filesystem::path(f.data);
  c.model = f.model == "svm" ? ModelKind::Svm : ModelKind::NaiveBayes;
  c.nb.priors = f.priors == "uniform" ? nb::PriorMode::Uniform : nb::PriorMode::Frequency;
  c.nb.smoothing = f.smoothing == "paper" ? nb::Smoothing::PaperFallback : nb::Smoothing::AddOne;
  c.nb.estimator = f.estimator == "population" ? nb::NumericEstimator::Population
                   : f.estimator == "sample"   ? nb::NumericEstimator::Sample
                                               : nb::NumericEstimator::Resolution;
  if (f.kernel == "poly") {
    c.kernel = svm::KernelSpec::polynomial(f.degree);
  } else if (f.kernel == "rbf") {
    c.kernel = svm::KernelSpec::rbf(f.delta_sq);
  }
  c.svm.cost = f.cost;
  c.svm.kkt_tol = f.kkt_tol;
  c.svm.max_passes = f.max_passes;
  c.svm.seed = f.seed;
  c.svm.standardize = f.standardize;
  c.svm.validate();
  c.folds = f.folds;
  if (c.folds < 2) throw InvalidArgument("--folds must be at least 2");
  c.seed = f.seed;
  c.format = f.format == "machine" ? ReportFormat::Machine : ReportFormat::Text;
  c.output = f.output;
  c.jobs = f.jobs;
  return c;
}

std::string describe(const ExperimentConfig& c, ModelKind kind) {
  if (kind == ModelKind::NaiveBayes) {
    std::string s = "naive_bayes";
    s += c.nb.priors == nb::PriorMode::Uniform ? " priors=uniform" : " priors=frequency";
    s += c.nb.estimator == nb::NumericEstimator::Resolution   ? " estimator=resolution"
         : c.nb.estimator == nb::NumericEstimator::Population ? " estimator=population"
                                                              : " estimator=sample";
    return s;
  }
  return "svm kernel=" + c.kernel.describe() + " C=" + format_real(c.svm.cost) +
         (c.svm.standardize ? " standardized" : "");
}

eval::Learner learner_for(const ExperimentConfig& c, ModelKind kind) {
  return kind == ModelKind::NaiveBayes ? naive_bayes_learner(c.nb) : svm_learner(c.kernel, c.svm);
}

void emit(const std::string& text, const std::filesystem::path& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  file << text;
  file.flush();
  if (!file) throw IoError("write failed: " + path.string());
}

// --- subcommands ------------------------------------------------------------------

int cmd_ingest(const std::string& input, const std::string& output, std::ostream& out) {
  const auto series = load_raw_series(input);
  const auto table = build_training_table(series);
  std::ostringstream text;
  write_samples(text, table);
  emit(text.str(), output, out);
  return kOk;
}

int cmd_cv(const ExperimentConfig& c, std::ostream& out) {
  const auto data = load_samples(c.data);
  const auto result = eval::cross_validate(learner_for(c, c.model), data, c.folds, c.seed, c.jobs);
  const ReportContext ctx{describe(c, c.model), c.data.string(), c.folds, c.seed, result.folds.digest()};
  emit(c.format == ReportFormat::Machine ? render_machine(result.report, ctx) : render_text(result.report, ctx),
       c.output, out);
  return kOk;
}

int cmd_compare(const ExperimentConfig& c, std::ostream& out) {
  const auto data = load_samples(c.data);
  // Validated before any model is trained; both runs share this assignment.
  const auto folds = stratified_folds(data, c.folds, c.seed);
  const auto nb_run = eval::cross_validate(learner_for(c, ModelKind::NaiveBayes), data, folds, c.jobs);
  const auto svm_run = eval::cross_validate(learner_for(c, ModelKind::Svm), data, folds, c.jobs);
  ComparisonReport cmp{
      {describe(c, ModelKind::NaiveBayes), c.data.string(), c.folds, c.seed, nb_run.folds.digest()},
      nb_run.report,
      {describe(c, ModelKind::Svm), c.data.string(), c.folds, c.seed, svm_run.folds.digest()},
      svm_run.report,
  };
  emit(c.format == ReportFormat::Machine ? render_comparison_machine(cmp) : render_comparison_text(cmp), c.output,
       out);
  return kOk;
}

int cmd_train(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const auto data = load_samples(c.data);
  std::ostringstream text;
  if (c.model == ModelKind::NaiveBayes) {
    nb::train(data, nb::all_continuous(data.dimension()), c.nb).save(text);
  } else {
    const auto model = svm::train_smo(data, c.kernel, c.svm);
    if (!model.converged()) err << "warning: SMO did not converge within " << c.svm.max_passes << " passes\n";
    model.save(text);
  }
  emit(text.str(), c.output, out);
  return kOk;
}

int cmd_predict(const std::string& model_path, const std::string& samples_path, const std::string& output,
                std::ostream& out) {
  std::ifstream model_file(model_path, std::ios::binary);
  if (!model_file) throw IoError("cannot open model " + model_path);
  std::stringstream buffer;
  buffer << model_file.rdbuf();
  const std::string model_text = buffer.str();
  const auto kind = KeyValueReader::parse(model_text).text("model");

  eval::Predictor predict;
  std::size_t dimension = 0;
  if (kind == "naive_bayes") {
    std::istringstream in(model_text);
    auto model = std::make_shared<const nb::NaiveBayesModel>(nb::NaiveBayesModel::load(in));
    dimension = model->dimension();
    predict = [model](std::span<const double> x) { return nb::predict_distribution(*model, x); };
  } else if (kind == "svm") {
    std::istringstream in(model_text);
    auto model = std::make_shared<const svm::SvmModel>(svm::SvmModel::load(in));
    dimension = model->dimension();
    predict = [model](std::span<const double> x) { return svm::hard_distribution(*model, x); };
  } else {
    throw InvalidArgument("unknown model type '" + kind + "'");
  }

  const auto table = load_query_table(samples_path);
  std::string text;
  if (!table.rows.empty()) {
    const std::size_t width = table.rows.front().size();
    if (width != dimension) {
      throw InvalidArgument("dimension mismatch: model expects " + std::to_string(dimension) +
                            " features, samples have " + std::to_string(width));
    }
    const bool labeled = table.labels.front().has_value();
    text = labeled ? "row,predicted,p_up,p_down,actual\n" : "row,predicted,p_up,p_down\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto dist = predict(table.rows[i]);
      text += std::to_string(i + 1) + "," + std::string(to_string(dist.argmax())) + "," +
              format_real(dist[Direction::Up]) + "," + format_real(dist[Direction::Down]);
      if (labeled) text += "," + std::string(to_string(*table.labels[i]));
      text += "\n";
    }
  }
  emit(text, output, out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Direction forecasting with naive Bayes and SVM classifiers"};
  app.require_subcommand(1);

  Flags flags;

  std::string ingest_input;
  std::string ingest_output;
  auto* ingest = app.add_subcommand("ingest", "Turn a raw price series CSV into labeled samples");
  ingest->add_option("raw", ingest_input, "Raw series CSV")->required();
  ingest->add_option("--output", ingest_output, "Labeled-sample CSV (default: stdout)");

  auto* train = app.add_subcommand("train", "Train a model on the full dataset and write it to a file");
  add_data_flag(train, flags);
  add_model_flags(train, flags, true);
  train->add_option("--output", flags.output, "Model file (default: stdout)");

  std::string model_path;
  std::string samples_path;
  std::string predict_output;
  auto* predict = app.add_subcommand("predict", "Apply a saved model to a sample CSV");
  predict->add_option("--model-file", model_path, "Model written by 'train'")->required();
  predict->add_option("--samples", samples_path, "Sample CSV")->required();
  predict->add_option("--output", predict_output, "Prediction CSV (default: stdout)");

  auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation of one model");
  add_data_flag(cv, flags);
  add_model_flags(cv, flags, true);
  add_eval_flags(cv, flags);
  cv->add_option("--output", flags.output, "Report file (default: stdout)");

  auto* compare = app.add_subcommand("compare", "Cross-validate naive Bayes and SVM on identical folds");
  add_data_flag(compare, flags);
  add_model_flags(compare, flags, false);
  add_eval_flags(compare, flags);
  compare->add_option("--output", flags.output, "Report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_input, ingest_output, out);
    if (*predict) return cmd_predict(model_path, samples_path, predict_output, out);
    const auto config = to_config(flags);
    if (*train) return cmd_train(config, out, err);
    if (*cv) return cmd_cv(config, out);
    if (*compare) return cmd_compare(config, out);
  } catch (const TrainingError& e) {
    err << "training failed: " << e.what() << "\n";
    return kTraining;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace setcast::cli
