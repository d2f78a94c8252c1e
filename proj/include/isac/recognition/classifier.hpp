#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "isac/recognition/dataset.hpp"

namespace isac {

struct ClassifierHyper {
  int grid = 16;            // feature grid is grid x grid block averages
  double l2 = 1e-4;
  int max_epochs = 2000;
  double tolerance = 1e-6;  // stop when an epoch lowers the loss by less than this
};

/// Block-average pooling of an image onto a grid x grid map, pixel values in [0, 1].
inline Eigen::VectorXd pooled_features(const GrayImage& img, int grid) {
  if (img.rows < static_cast<std::size_t>(grid) || img.cols < static_cast<std::size_t>(grid))
    throw InvalidArgument("pooled_features: image smaller than the feature grid");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(grid * grid);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(grid * grid);
  for (std::size_t r = 0; r < img.rows; ++r) {
    const auto br = static_cast<Eigen::Index>(r * grid / img.rows);
    for (std::size_t c = 0; c < img.cols; ++c) {
      const auto bc = static_cast<Eigen::Index>(c * grid / img.cols);
      sum(br * grid + bc) += img.at(r, c) / 255.0;
      count(br * grid + bc) += 1.0;
    }
  }
  return sum.cwiseQuotient(count);
}

/// Multinomial logistic regression on standardized pooled features.
class LogisticClassifier {
 public:
  static LogisticClassifier train(const LabeledDataset& data, const ClassifierHyper& hyper = {}) {
    Eigen::MatrixXd x = feature_matrix(data, hyper.grid);
    std::vector<int> y;
    for (const auto& s : data.samples) y.push_back(s.label);
    return train(x, y, data.num_classes(), hyper, data.samples.front().image.rows, data.samples.front().image.cols);
  }

  /// Trains on raw feature rows (one sample per row).
  static LogisticClassifier train(const Eigen::MatrixXd& raw, const std::vector<int>& labels, int classes,
                                  const ClassifierHyper& hyper = {}, std::size_t rows = 0, std::size_t cols = 0) {
    if (classes < 2) throw InvalidArgument("train_classifier: need at least two classes");
    if (raw.rows() != static_cast<Eigen::Index>(labels.size()) || raw.rows() == 0)
      throw InvalidArgument("train_classifier: one label per sample required");
    std::vector<int> per_class(classes, 0);
    for (int l : labels) {
      if (l < 0 || l >= classes) throw InvalidArgument("train_classifier: label out of range");
      ++per_class[l];
    }
    if (std::count_if(per_class.begin(), per_class.end(), [](int n) { return n > 0; }) < 2)
      throw InvalidArgument("train_classifier: degenerate dataset (a single class present)");

    LogisticClassifier m;
    m.classes_ = classes;
    m.hyper_ = hyper;
    m.rows_ = rows;
    m.cols_ = cols;
    const Eigen::Index n = raw.rows(), f = raw.cols();
    m.mean_ = raw.colwise().mean().transpose();
    m.scale_ = ((raw.rowwise() - m.mean_.transpose()).array().square().colwise().mean().sqrt()).transpose();
    for (Eigen::Index j = 0; j < f; ++j)
      if (m.scale_(j) < 1e-8) m.scale_(j) = 1.0;

    Eigen::MatrixXd x(n, f + 1);
    x.leftCols(f) = m.standardize(raw);
    x.col(f).setOnes();
    Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, classes);
    for (Eigen::Index i = 0; i < n; ++i) onehot(i, labels[i]) = 1.0;

    // Step 1/L with L = lambda_max(X^T X / n) / 2 + l2 bounds the softmax
    // cross-entropy curvature, so every full-batch step lowers the loss.
    const Eigen::MatrixXd gram = x.transpose() * x / static_cast<double>(n);
    const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    const double step = 1.0 / (0.5 * lmax + hyper.l2);

    m.weights_ = Eigen::MatrixXd::Zero(f + 1, classes);
    double loss = m.objective(x, onehot);
    m.losses_.push_back(loss);
    for (int epoch = 0; epoch < hyper.max_epochs; ++epoch) {
      const Eigen::MatrixXd p = softmax(x * m.weights_);
      Eigen::MatrixXd grad = x.transpose() * (p - onehot) / static_cast<double>(n);
      grad.topRows(f) += hyper.l2 * m.weights_.topRows(f);
      m.weights_ -= step * grad;
      const double next = m.objective(x, onehot);
      m.losses_.push_back(next);
      const double drop = loss - next;
      loss = next;
      if (drop < hyper.tolerance) break;
    }
    return m;
  }

  static Eigen::MatrixXd feature_matrix(const LabeledDataset& data, int grid) {
    if (data.samples.empty()) throw InvalidArgument("feature_matrix: empty dataset");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(data.size()), grid * grid);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& img = data.samples[i].image;
      if (img.rows != data.samples.front().image.rows || img.cols != data.samples.front().image.cols)
        throw InvalidArgument("feature_matrix: spectrograms differ in shape");
      x.row(static_cast<Eigen::Index>(i)) = pooled_features(img, grid).transpose();
    }
    return x;
  }

  int predict_features(const Eigen::VectorXd& raw) const {
    Eigen::VectorXd z = weights_.bottomRows(1).transpose();
    z += weights_.topRows(raw.size()).transpose() * ((raw - mean_).cwiseQuotient(scale_));
    Eigen::Index best = 0;
    z.maxCoeff(&best);
    return static_cast<int>(best);
  }

  int predict(const GrayImage& img) const {
    if (rows_ != 0 && (img.rows != rows_ || img.cols != cols_))
      throw InvalidArgument("predict: spectrogram shape differs from the training shape");
    return predict_features(pooled_features(img, hyper_.grid));
  }

  int num_classes() const { return classes_; }
  const std::vector<double>& losses() const { return losses_; }
  const Eigen::MatrixXd& weights() const { return weights_; }

 private:
  Eigen::MatrixXd standardize(const Eigen::MatrixXd& raw) const {
    return (raw.rowwise() - mean_.transpose()).array().rowwise() / scale_.transpose().array();
  }

  static Eigen::MatrixXd softmax(const Eigen::MatrixXd& z) {
    Eigen::MatrixXd p = z.colwise() - z.rowwise().maxCoeff();
    p = p.array().exp();
    return p.array().colwise() / p.rowwise().sum().array();
  }

  double objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& onehot) const {
    const Eigen::MatrixXd z = x * weights_;
    const Eigen::VectorXd zmax = z.rowwise().maxCoeff();
    const Eigen::VectorXd lse = ((z.colwise() - zmax).array().exp().rowwise().sum().log()).matrix() + zmax;
    const double nll = (lse - (z.cwiseProduct(onehot)).rowwise().sum()).mean();
    const auto f = weights_.rows() - 1;
    return nll + 0.5 * hyper_.l2 * weights_.topRows(f).squaredNorm();
  }

  int classes_ = 0;
  ClassifierHyper hyper_;
  std::size_t rows_ = 0, cols_ = 0;
  Eigen::VectorXd mean_, scale_;
  Eigen::MatrixXd weights_;
  std::vector<double> losses_;
};

struct AccuracyPoint {
  std::size_t cycles = 0;  // C
  double accuracy = 0.0;   // A
  std::size_t n_test = 0;
};

inline AccuracyPoint evaluate_accuracy(const LogisticClassifier& model, const LabeledDataset& test) {
  if (test.samples.empty()) throw InvalidArgument("evaluate_accuracy: empty test set");
  std::size_t correct = 0;
  for (const auto& s : test.samples) correct += model.predict(s.image) == s.label;
  return {test.samples.front().cycles, static_cast<double>(correct) / static_cast<double>(test.size()), test.size()};
}

struct AccuracySweep {
  std::vector<MotionLabel> labels = adult_motion_labels();
  std::size_t n_train = 50;  // per class
  std::size_t n_test = 25;   // per class
  double window_fraction = 0.5;  // W = min(params.window, C * fraction); 0 keeps params.window
  ClassifierHyper hyper;
};

/// One independent generate/train/evaluate run per C (ascending). The STFT
/// window grows with the observation up to params.window. Streams
/// rng.child("C<c>/train") and rng.child("C<c>/test").
inline std::vector<AccuracyPoint> accuracy_vs_cycles(const std::vector<std::size_t>& cycles, const Scene& base,
                                                     const PipelineParams& params, const AccuracySweep& sweep,
                                                     const RngStream& rng, unsigned threads = 1) {
  if (cycles.empty()) throw InvalidArgument("accuracy_vs_cycles: empty C list");
  for (std::size_t i = 1; i < cycles.size(); ++i)
    if (cycles[i] <= cycles[i - 1]) throw InvalidArgument("accuracy_vs_cycles: C list must be ascending");
  std::vector<AccuracyPoint> out;
  for (std::size_t c : cycles) {
    PipelineParams p = params;
    p.cycles = c;
    if (sweep.window_fraction > 0.0)
      p.window = std::clamp<std::size_t>(static_cast<std::size_t>(static_cast<double>(c) * sweep.window_fraction), 1,
                                         params.window);
    const std::string tag = "C" + std::to_string(c);
    const auto train = generate_dataset(sweep.labels, sweep.n_train, base, p, rng.child(tag + "/train"), threads);
    const auto test = generate_dataset(sweep.labels, sweep.n_test, base, p, rng.child(tag + "/test"), threads);
    out.push_back(evaluate_accuracy(LogisticClassifier::train(train, sweep.hyper), test));
  }
  return out;
}

/// CSV `C,A,n_test`.
inline void write_accuracy_csv(std::ostream& out, const std::vector<AccuracyPoint>& pts) {
  out << "C,A,n_test\n";
  out.precision(12);
  for (const auto& p : pts) out << p.cycles << ',' << p.accuracy << ',' << p.n_test << '\n';
}

}  // namespace isac
