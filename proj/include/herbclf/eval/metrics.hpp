// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_EVAL_METRICS_HPP
#define HERBCLF_EVAL_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "herbclf/data/preprocess.hpp"
#include "herbclf/zoo/model.hpp"

namespace herbclf::eval
{

// cells[t * K + p] counts samples of true class t predicted as p.
struct ConfusionMatrix
{
  int num_classes = 0;
  std::vector<std::int64_t> cells;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int k);

  std::int64_t at(int truth, int predicted) const { return cells[Index(truth, predicted)]; }
  std::int64_t &at(int truth, int predicted) { return cells[Index(truth, predicted)]; }
  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(int truth) const;
  std::int64_t column_sum(int predicted) const;

  // Element-wise sum; both matrices must have the same K.
  void Merge(const ConfusionMatrix &other);

  friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) = default;

private:
  std::size_t Index(int t, int p) const
  {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(num_classes) + static_cast<std::size_t>(p);
  }
};

ConfusionMatrix Confusion(std::span<const int> predictions, std::span<const int> labels, int num_classes);

struct ClassMetrics
{
  std::string name;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::int64_t support = 0;

  friend bool operator==(const ClassMetrics &, const ClassMetrics &) = default;
};

// Per class: precision = tp / column sum (0 when nothing was predicted as the
// class), recall = tp / row sum, f1 = 2PR / (P + R) (0 when P + R = 0).
// Macro values average over classes with non-zero support only; macro F1 is
// the mean of per-class F1.
struct EvaluationReport
{
  double accuracy = 0;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  std::int64_t num_samples = 0;
  std::vector<ClassMetrics> per_class;

  friend bool operator==(const EvaluationReport &, const EvaluationReport &) = default;
};

// Class names default to "0", "1", ... when not given. Throws DataError when
// the matrix is empty.
EvaluationReport MetricsFromConfusion(const ConfusionMatrix &matrix, const std::vector<std::string> &class_names = {});

struct Evaluation
{
  EvaluationReport report;
  ConfusionMatrix confusion;
  double loss = 0;
};

// Full inference pass in evaluation mode with no parameter updates.
template <typename T>
Evaluation EvaluateModel(zoo::Model<T> &model, const data::LabeledImages &images, const data::PreprocessConfig &config,
                         const std::vector<std::string> &class_names = {}, std::size_t batch_size = 32);

}  // namespace herbclf::eval

#endif  // HERBCLF_EVAL_METRICS_HPP
