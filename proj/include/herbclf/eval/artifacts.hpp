// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_EVAL_ARTIFACTS_HPP
#define HERBCLF_EVAL_ARTIFACTS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "herbclf/eval/metrics.hpp"
#include "herbclf/train/trainer.hpp"

namespace herbclf::eval
{

inline constexpr const char *kMetricsCsv = "metrics.csv";
inline constexpr const char *kReportJson = "report.json";
inline constexpr const char *kConfusionCsv = "confusion.csv";
inline constexpr const char *kLossCurve = "loss_curve.svg";
inline constexpr const char *kAccuracyCurve = "accuracy_curve.svg";

// Header epoch,lr,train_loss,train_acc,test_loss,test_acc; values printed
// with enough digits to round-trip.
void WriteMetricsCsv(const std::filesystem::path &path, const std::vector<train::EpochMetrics> &history);
std::vector<train::EpochMetrics> ReadMetricsCsv(const std::filesystem::path &path);

nlohmann::ordered_json ToJson(const EvaluationReport &report);
EvaluationReport ReportFromJson(const nlohmann::json &doc);
void WriteReportJson(const std::filesystem::path &path, const EvaluationReport &report);
EvaluationReport ReadReportJson(const std::filesystem::path &path);

// Header row of class names, then one row of counts per true class.
void WriteConfusionCsv(const std::filesystem::path &path, const ConfusionMatrix &matrix,
                       const std::vector<std::string> &class_names);
ConfusionMatrix ReadConfusionCsv(const std::filesystem::path &path, std::vector<std::string> *class_names = nullptr);

struct Series
{
  std::string label;
  std::vector<double> values;  // one per epoch; NaN entries are skipped
};

// Line chart over epochs 0..n-1. The root element records the plotted
// domain as data-x-min / data-x-max / data-y-min / data-y-max.
std::string CurveSvg(const std::string &title, const std::string &y_label, const std::vector<Series> &series,
                     bool unit_interval);

void WriteLossCurve(const std::filesystem::path &path, const std::vector<train::EpochMetrics> &history);
void WriteAccuracyCurve(const std::filesystem::path &path, const std::vector<train::EpochMetrics> &history);

// Writes metrics CSV, both curves, report JSON and confusion CSV into
// out_dir and returns the paths in that order.
std::vector<std::filesystem::path> EmitArtifacts(const std::vector<train::EpochMetrics> &history,
                                                 const Evaluation &evaluation,
                                                 const std::vector<std::string> &class_names,
                                                 const std::filesystem::path &out_dir);

// Creates the directory or throws DataError.
void EnsureDirectory(const std::filesystem::path &dir);

}  // namespace herbclf::eval

#endif  // HERBCLF_EVAL_ARTIFACTS_HPP
