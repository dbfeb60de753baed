#include "setcast/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "setcast/error.hpp"
#include "setcast/keyvalue.hpp"

namespace setcast::nb {

// --- Gaussian estimation -------------------------------------------------------

double snap_to_resolution(double x, double resolution) {
  if (!(resolution > 0.0)) return x;
  return std::nearbyint(x / resolution) * resolution;
}

double attribute_resolution(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double gap_sum = 0.0;
  std::size_t gaps = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] != sorted[i - 1]) {
      gap_sum += sorted[i] - sorted[i - 1];
      ++gaps;
    }
  }
  return gaps > 0 ? gap_sum / static_cast<double>(gaps) : kDefaultResolution;
}

GaussianParams fit_gaussian(std::span<const double> values, const GaussianFitOptions& options) {
  if (values.empty()) throw InvalidArgument("fit_gaussian: no values");

  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += snap_to_resolution(v, options.resolution);
  const double mu = sum / n;

  // Two-pass sum of squared deviations.
  double ss = 0.0;
  for (double v : values) {
    const double d = snap_to_resolution(v, options.resolution) - mu;
    ss += d * d;
  }
  double sigma = 0.0;
  if (options.convention == SigmaConvention::Population) {
    sigma = std::sqrt(ss / n);
  } else if (values.size() > 1) {
    sigma = std::sqrt(ss / (n - 1.0));
  }

  double floor = kSigmaFloor;
  if (options.resolution > 0.0) floor = std::max(floor, options.resolution / 6.0);
  return {mu, std::max(sigma, floor)};
}

double log_gaussian_pdf(double x, const GaussianParams& params) {
  const double z = (x - params.mu) / params.sigma;
  return -0.5 * z * z - std::log(params.sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double gaussian_pdf(double x, const GaussianParams& params) {
  const double z = (x - params.mu) / params.sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * params.sigma);
}

// --- priors -------------------------------------------------------------------------

ClassPriors estimate_priors(const Dataset& dataset) {
  if (dataset.empty()) throw TrainingError("cannot estimate priors from an empty dataset");
  const auto counts = dataset.class_counts();
  ClassPriors priors;
  for (auto d : kDirections) {
    if (counts[index(d)] == 0) {
      throw TrainingError("class " + std::string(to_string(d)) + " has no training samples");
    }
    priors.p[index(d)] = static_cast<double>(counts[index(d)]) / static_cast<double>(dataset.size());
  }
  return priors;
}

ClassPriors uniform_priors() noexcept {
  ClassPriors priors;
  priors.p.fill(1.0 / static_cast<double>(kNumClasses));
  return priors;
}

// --- categorical tables ----------------------------------------------------------------

void CategoricalTable::add(double value, Direction label) {
  ++counts_[value][index(label)];
  ++totals_[index(label)];
}

std::size_t CategoricalTable::count(double value, Direction label) const {
  auto it = counts_.find(value);
  return it == counts_.end() ? 0 : it->second[index(label)];
}

std::size_t CategoricalTable::overall_count(double value) const {
  auto it = counts_.find(value);
  if (it == counts_.end()) return 0;
  std::size_t total = 0;
  for (auto c : it->second) total += c;
  return total;
}

double CategoricalTable::probability(double value, Direction label, Smoothing smoothing) const {
  const auto in_class = static_cast<double>(count(value, label));
  const auto class_size = static_cast<double>(class_total(label));
  if (smoothing == Smoothing::AddOne) {
    return (in_class + 1.0) / (class_size + static_cast<double>(distinct_categories()));
  }
  if (in_class > 0.0) return in_class / class_size;
  const auto overall = overall_count(value);
  // Never seen in T: the factor would be the same for every class, so it is neutral.
  return overall > 0 ? 1.0 / static_cast<double>(overall) : 1.0;
}

// --- model ------------------------------------------------------------------------------------

NaiveBayesModel::NaiveBayesModel(ClassPriors priors, std::vector<AttributeModel> attributes, Smoothing smoothing)
    : priors_(priors), attributes_(std::move(attributes)), smoothing_(smoothing) {
  for (double p : priors_.p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("class priors must lie in (0, 1)");
  }
}

const GaussianParams& NaiveBayesModel::gaussian(std::size_t attribute, Direction label) const {
  const auto& a = attributes_.at(attribute);
  if (a.kind != AttributeKind::Continuous) {
    throw InvalidArgument("attribute " + a.name + " is not continuous");
  }
  return a.gaussian[index(label)];
}

std::array<double, kNumClasses> NaiveBayesModel::log_scores(std::span<const double> features) const {
  if (features.size() != attributes_.size()) {
    throw InvalidArgument("schema mismatch: model has " + std::to_string(attributes_.size()) +
                          " attributes, sample has " + std::to_string(features.size()));
  }
  std::array<double, kNumClasses> scores{};
  for (auto d : kDirections) {
    double s = std::log(priors_[d]);
    for (std::size_t k = 0; k < attributes_.size(); ++k) {
      const auto& a = attributes_[k];
      if (a.kind == AttributeKind::Continuous) {
        s += log_gaussian_pdf(snap_to_resolution(features[k], a.resolution), a.gaussian[index(d)]);
      } else {
        s += std::log(a.table.probability(features[k], d, smoothing_));
      }
    }
    scores[index(d)] = s;
  }
  return scores;
}

NaiveBayesModel train(const Dataset& dataset, const Schema& schema, const TrainOptions& options) {
  if (dataset.empty()) throw TrainingError("cannot train on an empty dataset");
  if (schema.size() != dataset.dimension()) {
    throw InvalidArgument("schema has " + std::to_string(schema.size()) + " attributes, dataset has " +
                          std::to_string(dataset.dimension()));
  }
  // Fails loudly on a missing class even when uniform priors are requested.
  const ClassPriors frequency = estimate_priors(dataset);
  const ClassPriors priors = options.priors == PriorMode::Uniform ? uniform_priors() : frequency;

  std::vector<AttributeModel> attributes(schema.size());
  for (std::size_t k = 0; k < schema.size(); ++k) {
    auto& a = attributes[k];
    a.name = dataset.attributes()[k];
    a.kind = schema[k];
    if (a.kind == AttributeKind::Categorical) {
      for (const auto& s : dataset.samples()) a.table.add(s.features[k], s.label);
      continue;
    }
    GaussianFitOptions fit;
    if (options.estimator == NumericEstimator::Sample) fit.convention = SigmaConvention::Sample;
    if (options.estimator == NumericEstimator::Resolution) {
      const auto col = dataset.column(k);
      fit.resolution = attribute_resolution(col);
      a.resolution = fit.resolution;
    }
    for (auto d : kDirections) {
      std::vector<double> values;
      for (const auto& s : dataset.samples()) {
        if (s.label == d) values.push_back(s.features[k]);
      }
      a.gaussian[index(d)] = fit_gaussian(values, fit);
    }
  }
  return NaiveBayesModel(priors, std::move(attributes), options.smoothing);
}

double categorical_likelihood(const NaiveBayesModel& model, Direction label, std::size_t attribute, double value) {
  if (attribute >= model.dimension()) {
    throw InvalidArgument("unknown attribute index " + std::to_string(attribute));
  }
  const auto& a = model.attributes()[attribute];
  if (a.kind != AttributeKind::Categorical) throw InvalidArgument("attribute " + a.name + " is not categorical");
  return a.table.probability(value, label, model.smoothing());
}

ClassDistribution predict_distribution(const NaiveBayesModel& model, std::span<const double> features) {
  const auto scores = model.log_scores(features);
  const double top = *std::max_element(scores.begin(), scores.end());
  ClassDistribution dist;
  double total = 0.0;
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    dist.p[i] = std::exp(scores[i] - top);
    total += dist.p[i];
  }
  for (auto& v : dist.p) v /= total;
  return dist;
}

Direction classify(const NaiveBayesModel& model, std::span<const double> features) {
  return predict_distribution(model, features).argmax();
}

// --- serialization -------------------------------------------------------------------------------

namespace {

std::string smoothing_name(Smoothing s) { return s == Smoothing::AddOne ? "add-one" : "paper"; }

std::string lower(Direction d) { return d == Direction::Up ? "up" : "down"; }

}  // namespace

void NaiveBayesModel::save(std::ostream& out) const {
  KeyValueWriter w;
  w.put("model", "naive_bayes");
  w.put("smoothing", smoothing_name(smoothing_));
  for (auto d : kDirections) w.put("prior." + lower(d), priors_[d]);
  w.put("attributes", attributes_.size());
  for (std::size_t k = 0; k < attributes_.size(); ++k) {
    const auto& a = attributes_[k];
    const std::string p = "attr." + std::to_string(k) + ".";
    w.put(p + "name", a.name);
    if (a.kind == AttributeKind::Continuous) {
      w.put(p + "kind", "continuous");
      w.put(p + "resolution", a.resolution);
      for (auto d : kDirections) {
        w.put(p + lower(d) + ".mu", a.gaussian[index(d)].mu);
        w.put(p + lower(d) + ".sigma", a.gaussian[index(d)].sigma);
      }
    } else {
      w.put(p + "kind", "categorical");
      w.put(p + "categories", a.table.counts().size());
      std::size_t c = 0;
      for (const auto& [value, counts] : a.table.counts()) {
        const std::string q = p + "cat." + std::to_string(c++) + ".";
        w.put(q + "value", value);
        for (auto d : kDirections) w.put(q + lower(d), counts[index(d)]);
      }
    }
  }
  out << w.str();
}

NaiveBayesModel NaiveBayesModel::load(std::istream& in) {
  const auto kv = KeyValueReader::parse(in);
  if (kv.text("model") != "naive_bayes") throw InvalidArgument("not a naive Bayes model file");

  Smoothing smoothing;
  const auto& sm = kv.text("smoothing");
  if (sm == "add-one") {
    smoothing = Smoothing::AddOne;
  } else if (sm == "paper") {
    smoothing = Smoothing::PaperFallback;
  } else {
    throw InvalidArgument("unknown smoothing '" + sm + "'");
  }

  ClassPriors priors;
  for (auto d : kDirections) priors.p[index(d)] = kv.real("prior." + lower(d));

  const auto n = kv.count("attributes");
  std::vector<AttributeModel> attributes(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto& a = attributes[k];
    const std::string p = "attr." + std::to_string(k) + ".";
    a.name = kv.text(p + "name");
    const auto& kind = kv.text(p + "kind");
    if (kind == "continuous") {
      a.kind = AttributeKind::Continuous;
      a.resolution = kv.real(p + "resolution");
      for (auto d : kDirections) {
        a.gaussian[index(d)] = {kv.real(p + lower(d) + ".mu"), kv.real(p + lower(d) + ".sigma")};
        if (!(a.gaussian[index(d)].sigma > 0.0)) throw InvalidArgument("sigma must be positive in " + p);
      }
    } else if (kind == "categorical") {
      a.kind = AttributeKind::Categorical;
      const auto cats = kv.count(p + "categories");
      for (std::size_t c = 0; c < cats; ++c) {
        const std::string q = p + "cat." + std::to_string(c) + ".";
        const double value = kv.real(q + "value");
        for (auto d : kDirections) {
          const auto times = kv.count(q + lower(d));
          for (std::size_t t = 0; t < times; ++t) a.table.add(value, d);
        }
      }
    } else {
      throw InvalidArgument("unknown attribute kind '" + kind + "'");
    }
  }
  return NaiveBayesModel(priors, std::move(attributes), smoothing);
}

}  // namespace setcast::nb
