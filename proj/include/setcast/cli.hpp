#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "setcast/naive_bayes.hpp"
#include "setcast/svm.hpp"

namespace setcast::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,     // bad flags or violated precondition
  kIo = 3,
  kTraining = 4,
};

enum class ModelKind { NaiveBayes, Svm };
enum class ReportFormat { Text, Machine };

struct ExperimentConfig {
  std::filesystem::path data;
  ModelKind model = ModelKind::NaiveBayes;
  nb::TrainOptions nb;
  svm::KernelSpec kernel = svm::KernelSpec::linear();
  svm::TrainerConfig svm;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  ReportFormat format = ReportFormat::Text;
  std::filesystem::path output;  // empty: standard output
  std::size_t jobs = 1;
};

/// Directory holding appendix_b.csv: $SETCAST_DATA_DIR, else the build-time default.
std::filesystem::path default_data_dir();

/// Runs one subcommand (ingest, train, predict, cv, compare) and returns its exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace setcast::cli
