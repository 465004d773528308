// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/eval/metrics.hpp"

#include <numeric>

#include "herbclf/error.hpp"
#include "herbclf/train/trainer.hpp"

namespace herbclf::eval
{

ConfusionMatrix::ConfusionMatrix(int k) : num_classes(k)
{
  if (k < 1)
  {
    throw UsageError("confusion matrix needs at least one class");
  }
  cells.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0);
}

std::int64_t ConfusionMatrix::total() const { return std::accumulate(cells.begin(), cells.end(), std::int64_t{0}); }

std::int64_t ConfusionMatrix::trace() const
{
  std::int64_t sum = 0;
  for (int c = 0; c < num_classes; ++c) sum += at(c, c);
  return sum;
}

std::int64_t ConfusionMatrix::row_sum(int truth) const
{
  std::int64_t sum = 0;
  for (int p = 0; p < num_classes; ++p) sum += at(truth, p);
  return sum;
}

std::int64_t ConfusionMatrix::column_sum(int predicted) const
{
  std::int64_t sum = 0;
  for (int t = 0; t < num_classes; ++t) sum += at(t, predicted);
  return sum;
}

void ConfusionMatrix::Merge(const ConfusionMatrix &other)
{
  if (other.num_classes != num_classes)
  {
    throw Error("cannot merge confusion matrices of different sizes");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] += other.cells[i];
}

ConfusionMatrix Confusion(std::span<const int> predictions, std::span<const int> labels, int num_classes)
{
  if (predictions.size() != labels.size())
  {
    throw DataError(std::to_string(predictions.size()) + " predictions for " + std::to_string(labels.size()) +
                    " labels");
  }
  ConfusionMatrix m(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i)
  {
    const int t = labels[i], p = predictions[i];
    if (t < 0 || t >= num_classes || p < 0 || p >= num_classes)
    {
      throw DataError("class index outside [0, " + std::to_string(num_classes) + ") at position " + std::to_string(i));
    }
    ++m.at(t, p);
  }
  return m;
}

EvaluationReport MetricsFromConfusion(const ConfusionMatrix &matrix, const std::vector<std::string> &class_names)
{
  const int k = matrix.num_classes;
  if (!class_names.empty() && class_names.size() != static_cast<std::size_t>(k))
  {
    throw DataError(std::to_string(class_names.size()) + " class names for a " + std::to_string(k) +
                    "-class confusion matrix");
  }
  EvaluationReport r;
  r.num_samples = matrix.total();
  if (r.num_samples == 0)
  {
    throw DataError("cannot compute metrics from an empty confusion matrix");
  }
  r.accuracy = static_cast<double>(matrix.trace()) / static_cast<double>(r.num_samples);
  int included = 0;
  for (int c = 0; c < k; ++c)
  {
    ClassMetrics m;
    m.name = class_names.empty() ? std::to_string(c) : class_names[static_cast<std::size_t>(c)];
    const auto tp = static_cast<double>(matrix.at(c, c));
    const auto predicted = matrix.column_sum(c);
    m.support = matrix.row_sum(c);
    m.precision = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
    m.recall = m.support > 0 ? tp / static_cast<double>(m.support) : 0.0;
    m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    if (m.support > 0)
    {
      r.macro_precision += m.precision;
      r.macro_recall += m.recall;
      r.macro_f1 += m.f1;
      ++included;
    }
    r.per_class.push_back(std::move(m));
  }
  r.macro_precision /= included;
  r.macro_recall /= included;
  r.macro_f1 /= included;
  return r;
}

template <typename T>
Evaluation EvaluateModel(zoo::Model<T> &model, const data::LabeledImages &images, const data::PreprocessConfig &config,
                         const std::vector<std::string> &class_names, std::size_t batch_size)
{
  const int k = model.spec().num_classes;
  if (!class_names.empty() && class_names.size() != static_cast<std::size_t>(k))
  {
    throw DataError("dataset has " + std::to_string(class_names.size()) + " classes but the model predicts " +
                    std::to_string(k));
  }
  const auto pass = train::EvaluatePass(model, images, config, batch_size);
  Evaluation out;
  out.loss = pass.loss;
  out.confusion = Confusion(pass.predictions, images.labels, k);
  out.report = MetricsFromConfusion(out.confusion, class_names);
  return out;
}

template Evaluation EvaluateModel(zoo::Model<float> &, const data::LabeledImages &, const data::PreprocessConfig &,
                                  const std::vector<std::string> &, std::size_t);
template Evaluation EvaluateModel(zoo::Model<double> &, const data::LabeledImages &, const data::PreprocessConfig &,
                                  const std::vector<std::string> &, std::size_t);

}  // namespace herbclf::eval
