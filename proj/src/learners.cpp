#include "setcast/learners.hpp"

#include <memory>

namespace setcast {

eval::Learner naive_bayes_learner(const nb::TrainOptions& options) {
  return {"naive_bayes", [options](const Dataset& train) -> eval::Predictor {
            auto model = std::make_shared<const nb::NaiveBayesModel>(
                nb::train(train, nb::all_continuous(train.dimension()), options));
            return [model](std::span<const double> x) { return nb::predict_distribution(*model, x); };
          }};
}

eval::Learner svm_learner(const svm::KernelSpec& kernel, const svm::TrainerConfig& config) {
  return {"svm", [kernel, config](const Dataset& train) -> eval::Predictor {
            auto model = std::make_shared<const svm::SvmModel>(svm::train_smo(train, kernel, config));
            return [model](std::span<const double> x) { return svm::hard_distribution(*model, x); };
          }};
}

}  // namespace setcast
