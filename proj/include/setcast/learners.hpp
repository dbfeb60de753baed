#pragma once

#include "setcast/evaluation.hpp"
#include "setcast/naive_bayes.hpp"
#include "setcast/svm.hpp"

namespace setcast {

/// Naive Bayes over an all-continuous schema of the training data's width.
eval::Learner naive_bayes_learner(const nb::TrainOptions& options = {});

/// SVM with one-hot (hard) output distributions.
eval::Learner svm_learner(const svm::KernelSpec& kernel = svm::KernelSpec::linear(),
                          const svm::TrainerConfig& config = {});

}  // namespace setcast
