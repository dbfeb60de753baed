#include "setcast/svm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "csv_util.hpp"
#include "setcast/error.hpp"
#include "setcast/keyvalue.hpp"
#include "setcast/random.hpp"

namespace setcast::svm {

void TrainerConfig::validate() const {
  if (!(cost > 0.0) || !std::isfinite(cost)) throw InvalidArgument("cost C must be > 0");
  if (!(kkt_tol > 0.0)) throw InvalidArgument("kkt_tol must be > 0");
  if (max_passes == 0) throw InvalidArgument("max_passes must be positive");
}

// --- standardization -----------------------------------------------------------

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  if (!active()) return out;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (out[j] - mean[j]) / scale[j];
  return out;
}

Standardizer Standardizer::fit(const Dataset& dataset) {
  Standardizer s;
  const double n = static_cast<double>(dataset.size());
  for (std::size_t j = 0; j < dataset.dimension(); ++j) {
    const auto col = dataset.column(j);
    double mu = 0.0;
    for (double v : col) mu += v;
    mu /= n;
    double ss = 0.0;
    for (double v : col) ss += (v - mu) * (v - mu);
    const double sd = std::sqrt(ss / n);
    s.mean.push_back(mu);
    s.scale.push_back(sd > 0.0 ? sd : 1.0);
  }
  return s;
}

// --- model --------------------------------------------------------------------------

SvmModel::SvmModel(KernelSpec kernel, double cost, double bias, std::size_t dimension,
                   std::vector<SupportVector> svs, Standardizer standardizer, bool converged)
    : kernel_(kernel),
      cost_(cost),
      bias_(bias),
      dimension_(dimension),
      svs_(std::move(svs)),
      standardizer_(std::move(standardizer)),
      converged_(converged) {
  for (const auto& sv : svs_) {
    if (sv.x.size() != dimension_) throw InvalidArgument("support vector dimension mismatch");
    if (sv.label != 1 && sv.label != -1) throw InvalidArgument("support vector label must be +1 or -1");
  }
  if (standardizer_.active() &&
      (standardizer_.mean.size() != dimension_ || standardizer_.scale.size() != dimension_)) {
    throw InvalidArgument("standardizer dimension mismatch");
  }
}

std::vector<double> SvmModel::weight_vector() const {
  if (!kernel_.is_linear()) throw InvalidArgument("weight vector requires a linear kernel");
  std::vector<double> w(dimension_, 0.0);
  for (const auto& sv : svs_) {
    for (std::size_t j = 0; j < dimension_; ++j) w[j] += sv.alpha * sv.label * sv.x[j];
  }
  return w;
}

double decision_value(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) {
    throw InvalidArgument("dimension mismatch: model expects " + std::to_string(model.dimension()) +
                          " features, got " + std::to_string(x.size()));
  }
  const auto z = model.standardizer().apply(x);
  double f = model.bias();
  for (const auto& sv : model.support_vectors()) f += sv.alpha * sv.label * model.kernel()(sv.x, z);
  return f;
}

Direction classify(const SvmModel& model, std::span<const double> x) {
  return decision_value(model, x) > 0.0 ? Direction::Up : Direction::Down;
}

ClassDistribution hard_distribution(const SvmModel& model, std::span<const double> x) {
  return ClassDistribution::one_hot(classify(model, x));
}

// --- SMO ----------------------------------------------------------------------------------

namespace {

class SmoSolver {
 public:
  SmoSolver(std::vector<std::vector<double>> x, std::vector<int> y, const KernelSpec& kernel,
            const TrainerConfig& config)
      : x_(std::move(x)),
        y_(std::move(y)),
        n_(x_.size()),
        c_(config.cost),
        tol_(config.kkt_tol),
        max_passes_(config.max_passes),
        rng_(config.seed),
        gram_(n_ * n_),
        alpha_(n_, 0.0),
        error_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) gram_[i * n_ + j] = gram_[j * n_ + i] = kernel(x_[i], x_[j]);
    }
    // alpha = 0, b = 0: f = 0 everywhere.
    for (std::size_t i = 0; i < n_; ++i) error_[i] = -y_[i];
  }

  void run() {
    // The loop checks KKT against the running threshold; the final threshold
    // is re-estimated from all free vectors, so resume from it until both agree.
    while (true) {
      optimize();
      finalize_bias();
      for (std::size_t i = 0; i < n_; ++i) error_[i] = kernel_sum(i) + b_ - y_[i];
      if (max_violation() <= tol_ || passes_ >= max_passes_) break;
      settled_ = false;
    }
  }

  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double bias() const noexcept { return b_; }
  std::size_t passes() const noexcept { return passes_; }
  bool settled() const noexcept { return settled_; }

 private:
  void optimize() {
    bool examine_all = true;
    std::size_t changed = 0;
    while ((changed > 0 || examine_all) && passes_ < max_passes_) {
      changed = 0;
      if (examine_all) {
        ++passes_;
        for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
      } else {
        // Sweep the free set until it settles; bounded so a numerical cycle cannot spin forever.
        std::size_t sweeps = 0;
        do {
          changed = 0;
          for (std::size_t i = 0; i < n_; ++i) {
            if (is_free(i)) changed += examine(i);
          }
        } while (changed > 0 && ++sweeps < 10 * n_ + 10);
      }
      if (examine_all) {
        examine_all = false;
        if (changed == 0) {
          settled_ = true;
          break;
        }
      } else {
        examine_all = true;
      }
    }
  }

  double max_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = error_[i] * y_[i];
      const double v = alpha_[i] <= 0.0 ? -r : alpha_[i] >= c_ ? r : std::abs(r);
      worst = std::max(worst, v);
    }
    return worst;
  }

  double k(std::size_t i, std::size_t j) const { return gram_[i * n_ + j]; }
  bool is_free(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < c_; }

  // sum_j alpha_j y_j K_ij, i.e. f_i - b.
  double kernel_sum(std::size_t i) const {
    double v = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (alpha_[j] != 0.0) v += alpha_[j] * y_[j] * k(i, j);
    }
    return v;
  }

  std::size_t examine(std::size_t i2) {
    const double r2 = error_[i2] * y_[i2];
    const double a2 = alpha_[i2];
    if (!((r2 < -tol_ && a2 < c_) || (r2 > tol_ && a2 > 0.0))) return 0;

    std::size_t free_count = 0;
    std::size_t best = n_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!is_free(i)) continue;
      ++free_count;
      const double gap = std::abs(error_[i] - error_[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (free_count > 1 && best != n_ && take_step(best, i2)) return 1;

    const std::size_t start_free = static_cast<std::size_t>(rng_.below(n_));
    for (std::size_t t = 0; t < n_; ++t) {
      const std::size_t i1 = (start_free + t) % n_;
      if (is_free(i1) && take_step(i1, i2)) return 1;
    }
    const std::size_t start_all = static_cast<std::size_t>(rng_.below(n_));
    for (std::size_t t = 0; t < n_; ++t) {
      const std::size_t i1 = (start_all + t) % n_;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1];
    const double a2 = alpha_[i2];
    const int y1 = y_[i1];
    const int y2 = y_[i2];
    const double e1 = error_[i1];
    const double e2 = error_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    }
    if (!(hi > lo)) return false;

    const double k11 = k(i1, i1);
    const double k12 = k(i1, i2);
    const double k22 = k(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2new;
    if (eta > 1e-12) {
      a2new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Objective is linear (or concave-up) along the constraint line: take the better end.
      const double v1 = e1 + y1 - b_;
      const double v2 = e2 + y2 - b_;
      auto gain = [&](double cand) {
        const double d2 = cand - a2;
        const double d1 = -s * d2;
        return d1 + d2 - d1 * y1 * v1 - d2 * y2 * v2 -
               0.5 * (d1 * d1 * k11 + d2 * d2 * k22 + 2.0 * d1 * d2 * s * k12);
      };
      const double g_lo = gain(lo);
      const double g_hi = gain(hi);
      if (g_lo > g_hi + 1e-12) {
        a2new = lo;
      } else if (g_hi > g_lo + 1e-12) {
        a2new = hi;
      } else {
        return false;
      }
    }

    if (std::abs(a2new - a2) < 1e-12 * (a2new + a2 + 1e-12)) return false;

    // Snap to the box so rounding never leaves a bound vector looking free;
    // the partner absorbs the difference to keep sum alpha_i y_i unchanged.
    const double eps = 1e-10 * c_;
    if (a2new < eps) a2new = 0.0;
    if (a2new > c_ - eps) a2new = c_;
    double a1new = a1 + s * (a2 - a2new);
    if (a1new < eps) {
      a2new += s * a1new;
      a1new = 0.0;
    } else if (a1new > c_ - eps) {
      a2new += s * (a1new - c_);
      a1new = c_;
    }
    a2new = std::clamp(a2new, 0.0, c_);
    const double d1 = a1new - a1;
    const double d2 = a2new - a2;

    const double b1 = b_ - e1 - y1 * d1 * k11 - y2 * d2 * k12;
    const double b2 = b_ - e2 - y1 * d1 * k12 - y2 * d2 * k22;
    double bnew;
    if (a1new > 0.0 && a1new < c_) {
      bnew = b1;
    } else if (a2new > 0.0 && a2new < c_) {
      bnew = b2;
    } else {
      bnew = 0.5 * (b1 + b2);
    }
    const double db = bnew - b_;
    for (std::size_t i = 0; i < n_; ++i) error_[i] += y1 * d1 * k(i1, i) + y2 * d2 * k(i2, i) + db;
    alpha_[i1] = a1new;
    alpha_[i2] = a2new;
    b_ = bnew;
    return true;
  }

  // Recomputes b from the free vectors (mean of y_i - v_i), or from the
  // feasible interval implied by the bound vectors when none are free.
  void finalize_bias() {
    double sum = 0.0;
    std::size_t free_count = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = kernel_sum(i);
      const double target = y_[i] - v;  // b that puts sample i exactly on the margin
      if (is_free(i)) {
        sum += target;
        ++free_count;
      } else if ((alpha_[i] == 0.0) == (y_[i] > 0)) {
        lower = std::max(lower, target);
      } else {
        upper = std::min(upper, target);
      }
    }
    if (free_count > 0) {
      b_ = sum / static_cast<double>(free_count);
    } else if (std::isfinite(lower) && std::isfinite(upper)) {
      b_ = 0.5 * (lower + upper);
    } else if (std::isfinite(lower)) {
      b_ = lower;
    } else if (std::isfinite(upper)) {
      b_ = upper;
    }
  }

  std::vector<std::vector<double>> x_;
  std::vector<int> y_;
  std::size_t n_;
  double c_;
  double tol_;
  std::size_t max_passes_;
  SeededRng rng_;
  std::vector<double> gram_;
  std::vector<double> alpha_;
  std::vector<double> error_;  // f(x_i) - y_i
  double b_ = 0.0;
  std::size_t passes_ = 0;
  bool settled_ = false;
};

}  // namespace

SmoResult fit_smo(const Dataset& dataset, const KernelSpec& kernel, const TrainerConfig& config) {
  config.validate();
  if (dataset.size() < 2) throw TrainingError("SVM training needs at least 2 samples");
  const auto counts = dataset.class_counts();
  for (auto d : kDirections) {
    if (counts[index(d)] == 0) throw TrainingError("SVM training needs both classes; " +
                                                   std::string(to_string(d)) + " is missing");
  }

  Standardizer standardizer;
  if (config.standardize) standardizer = Standardizer::fit(dataset);

  std::vector<std::vector<double>> x;
  std::vector<int> y;
  x.reserve(dataset.size());
  for (const auto& s : dataset.samples()) {
    x.push_back(standardizer.apply(s.features));
    y.push_back(sign_of(s.label));
  }

  SmoSolver solver(x, y, kernel, config);
  solver.run();

  std::vector<SupportVector> svs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (solver.alpha()[i] > 0.0) svs.push_back({x[i], solver.alpha()[i], y[i]});
  }

  SvmModel provisional(kernel, config.cost, solver.bias(), dataset.dimension(), svs, standardizer, true);
  const double violation = kkt_violation(provisional, dataset, solver.alpha());
  const bool converged = solver.settled() && violation <= config.kkt_tol;

  return SmoResult{SvmModel(kernel, config.cost, solver.bias(), dataset.dimension(), std::move(svs),
                            std::move(standardizer), converged),
                   solver.alpha(), solver.passes(), converged, violation};
}

double dual_objective(const Dataset& dataset, const KernelSpec& kernel, std::span<const double> alpha) {
  if (alpha.size() != dataset.size()) throw InvalidArgument("alpha size must match dataset size");
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < dataset.size(); ++j) {
      quad += alpha[i] * alpha[j] * sign_of(dataset[i].label) * sign_of(dataset[j].label) *
              kernel(dataset[i].features, dataset[j].features);
    }
  }
  return linear - 0.5 * quad;
}

double kkt_violation(const SvmModel& model, const Dataset& dataset, std::span<const double> alpha) {
  if (alpha.size() != dataset.size()) throw InvalidArgument("alpha size must match dataset size");
  double worst = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double margin = sign_of(dataset[i].label) * decision_value(model, dataset[i].features) - 1.0;
    double v;
    if (alpha[i] <= 0.0) {
      v = std::max(0.0, -margin);
    } else if (alpha[i] >= model.cost()) {
      v = std::max(0.0, margin);
    } else {
      v = std::abs(margin);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

// --- serialization ----------------------------------------------------------------------------

void SvmModel::save(std::ostream& out) const {
  KeyValueWriter w;
  w.put("model", "svm");
  std::visit(
      [&w](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearKernel>) {
          w.put("kernel", "linear");
        } else if constexpr (std::is_same_v<K, PolynomialKernel>) {
          w.put("kernel", "poly");
          w.put("kernel.degree", k.degree);
        } else {
          w.put("kernel", "rbf");
          w.put("kernel.delta_sq", k.delta_sq);
        }
      },
      kernel_.variant());
  w.put("cost", cost_);
  w.put("bias", bias_);
  w.put("dimension", dimension_);
  w.put("converged", converged_);
  w.put("standardize", standardizer_.active());
  for (std::size_t j = 0; standardizer_.active() && j < dimension_; ++j) {
    w.put("scale." + std::to_string(j) + ".mean", standardizer_.mean[j]);
    w.put("scale." + std::to_string(j) + ".sd", standardizer_.scale[j]);
  }
  w.put("support_vectors", svs_.size());
  for (std::size_t i = 0; i < svs_.size(); ++i) {
    const std::string p = "sv." + std::to_string(i) + ".";
    w.put(p + "alpha", svs_[i].alpha);
    w.put(p + "label", svs_[i].label);
    std::string xs;
    for (std::size_t j = 0; j < svs_[i].x.size(); ++j) {
      if (j) xs += ',';
      xs += format_real(svs_[i].x[j]);
    }
    w.put(p + "x", xs);
  }
  out << w.str();
}

SvmModel SvmModel::load(std::istream& in) {
  const auto kv = KeyValueReader::parse(in);
  if (kv.text("model") != "svm") throw InvalidArgument("not an SVM model file");

  KernelSpec kernel;
  const auto& kind = kv.text("kernel");
  if (kind == "linear") {
    kernel = KernelSpec::linear();
  } else if (kind == "poly") {
    kernel = KernelSpec::polynomial(static_cast<int>(kv.integer("kernel.degree")));
  } else if (kind == "rbf") {
    kernel = KernelSpec::rbf(kv.real("kernel.delta_sq"));
  } else {
    throw InvalidArgument("unknown kernel '" + kind + "'");
  }

  const auto dim = kv.count("dimension");
  Standardizer standardizer;
  if (kv.text("standardize") == "true") {
    for (std::size_t j = 0; j < dim; ++j) {
      standardizer.mean.push_back(kv.real("scale." + std::to_string(j) + ".mean"));
      standardizer.scale.push_back(kv.real("scale." + std::to_string(j) + ".sd"));
    }
  }

  std::vector<SupportVector> svs(kv.count("support_vectors"));
  for (std::size_t i = 0; i < svs.size(); ++i) {
    const std::string p = "sv." + std::to_string(i) + ".";
    svs[i].alpha = kv.real(p + "alpha");
    svs[i].label = static_cast<int>(kv.integer(p + "label"));
    for (auto field : detail::split_fields(kv.text(p + "x"))) {
      auto v = detail::parse_number(field);
      if (!v) throw InvalidArgument("bad support vector coordinate in " + p + "x");
      svs[i].x.push_back(*v);
    }
  }
  return SvmModel(kernel, kv.real("cost"), kv.real("bias"), dim, std::move(svs), std::move(standardizer),
                  kv.text("converged") == "true");
}

}  // namespace setcast::svm
