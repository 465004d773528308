// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/eval/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "herbclf/error.hpp"

namespace herbclf::eval
{

namespace
{

std::string Num(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Short(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string CsvField(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (char c : s)
  {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

std::vector<std::string> SplitCsvLine(const std::string &line)
{
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    const char c = line[i];
    if (quoted)
    {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
      {
        out.back() += '"';
        ++i;
      }
      else if (c == '"')
      {
        quoted = false;
      }
      else
      {
        out.back() += c;
      }
    }
    else if (c == '"')
    {
      quoted = true;
    }
    else if (c == ',')
    {
      out.emplace_back();
    }
    else if (c != '\r')
    {
      out.back() += c;
    }
  }
  return out;
}

std::ofstream OpenOut(const std::filesystem::path &path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw DataError("cannot write " + path.string());
  }
  return out;
}

void Finish(std::ofstream &out, const std::filesystem::path &path)
{
  out.flush();
  if (!out)
  {
    throw DataError("failed writing " + path.string());
  }
}

std::vector<std::vector<std::string>> ReadCsv(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw DataError("cannot open " + path.string());
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line))
  {
    if (!line.empty())
    {
      rows.push_back(SplitCsvLine(line));
    }
  }
  return rows;
}

double ParseDouble(const std::string &s, const std::filesystem::path &path)
{
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0')
  {
    throw DataError(path.string() + ": bad number '" + s + "'");
  }
  return v;
}

std::string Escape(const std::string &s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void EnsureDirectory(const std::filesystem::path &dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
  {
    throw DataError("cannot create directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

void WriteMetricsCsv(const std::filesystem::path &path, const std::vector<train::EpochMetrics> &history)
{
  auto out = OpenOut(path);
  out << "epoch,lr,train_loss,train_acc,test_loss,test_acc\n";
  for (const auto &m : history)
  {
    out << m.epoch << ',' << Num(m.lr) << ',' << Num(m.train_loss) << ',' << Num(m.train_accuracy) << ','
        << Num(m.test_loss) << ',' << Num(m.test_accuracy) << '\n';
  }
  Finish(out, path);
}

std::vector<train::EpochMetrics> ReadMetricsCsv(const std::filesystem::path &path)
{
  const auto rows = ReadCsv(path);
  const std::vector<std::string> header{"epoch", "lr", "train_loss", "train_acc", "test_loss", "test_acc"};
  if (rows.empty() || rows[0] != header)
  {
    throw DataError(path.string() + ": unexpected metrics header");
  }
  std::vector<train::EpochMetrics> out;
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    const auto &r = rows[i];
    if (r.size() != header.size())
    {
      throw DataError(path.string() + ": row " + std::to_string(i) + " has " + std::to_string(r.size()) + " fields");
    }
    train::EpochMetrics m;
    m.epoch = static_cast<int>(ParseDouble(r[0], path));
    m.lr = ParseDouble(r[1], path);
    m.train_loss = ParseDouble(r[2], path);
    m.train_accuracy = ParseDouble(r[3], path);
    m.test_loss = ParseDouble(r[4], path);
    m.test_accuracy = ParseDouble(r[5], path);
    out.push_back(m);
  }
  return out;
}

nlohmann::ordered_json ToJson(const EvaluationReport &report)
{
  nlohmann::ordered_json doc;
  doc["accuracy"] = report.accuracy;
  doc["macro_precision"] = report.macro_precision;
  doc["macro_recall"] = report.macro_recall;
  doc["macro_f1"] = report.macro_f1;
  doc["num_samples"] = report.num_samples;
  auto &rows = doc["per_class"] = nlohmann::ordered_json::array();
  for (const auto &c : report.per_class)
  {
    nlohmann::ordered_json row;
    row["class"] = c.name;
    row["precision"] = c.precision;
    row["recall"] = c.recall;
    row["f1"] = c.f1;
    row["support"] = c.support;
    rows.push_back(std::move(row));
  }
  return doc;
}

EvaluationReport ReportFromJson(const nlohmann::json &doc)
{
  try
  {
    EvaluationReport r;
    r.accuracy = doc.at("accuracy").get<double>();
    r.macro_precision = doc.at("macro_precision").get<double>();
    r.macro_recall = doc.at("macro_recall").get<double>();
    r.macro_f1 = doc.at("macro_f1").get<double>();
    r.num_samples = doc.at("num_samples").get<std::int64_t>();
    for (const auto &row : doc.at("per_class"))
    {
      r.per_class.push_back({row.at("class").get<std::string>(), row.at("precision").get<double>(),
                             row.at("recall").get<double>(), row.at("f1").get<double>(),
                             row.at("support").get<std::int64_t>()});
    }
    return r;
  }
  catch (const nlohmann::json::exception &e)
  {
    throw DataError(std::string("malformed evaluation report: ") + e.what());
  }
}

void WriteReportJson(const std::filesystem::path &path, const EvaluationReport &report)
{
  auto out = OpenOut(path);
  out << ToJson(report).dump(2) << '\n';
  Finish(out, path);
}

EvaluationReport ReadReportJson(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw DataError("cannot open " + path.string());
  }
  try
  {
    return ReportFromJson(nlohmann::json::parse(in));
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteConfusionCsv(const std::filesystem::path &path, const ConfusionMatrix &matrix,
                       const std::vector<std::string> &class_names)
{
  if (class_names.size() != static_cast<std::size_t>(matrix.num_classes))
  {
    throw Error("confusion CSV needs one name per class");
  }
  auto out = OpenOut(path);
  for (std::size_t c = 0; c < class_names.size(); ++c)
  {
    out << (c ? "," : "") << CsvField(class_names[c]);
  }
  out << '\n';
  for (int t = 0; t < matrix.num_classes; ++t)
  {
    for (int p = 0; p < matrix.num_classes; ++p)
    {
      out << (p ? "," : "") << matrix.at(t, p);
    }
    out << '\n';
  }
  Finish(out, path);
}

ConfusionMatrix ReadConfusionCsv(const std::filesystem::path &path, std::vector<std::string> *class_names)
{
  const auto rows = ReadCsv(path);
  if (rows.empty())
  {
    throw DataError(path.string() + " is empty");
  }
  const auto k = static_cast<int>(rows[0].size());
  if (rows.size() != static_cast<std::size_t>(k) + 1)
  {
    throw DataError(path.string() + ": expected " + std::to_string(k) + " count rows");
  }
  ConfusionMatrix m(k);
  for (int t = 0; t < k; ++t)
  {
    const auto &r = rows[static_cast<std::size_t>(t) + 1];
    if (r.size() != static_cast<std::size_t>(k))
    {
      throw DataError(path.string() + ": row " + std::to_string(t + 1) + " has the wrong width");
    }
    for (int p = 0; p < k; ++p)
    {
      m.at(t, p) = static_cast<std::int64_t>(ParseDouble(r[static_cast<std::size_t>(p)], path));
    }
  }
  if (class_names)
  {
    *class_names = rows[0];
  }
  return m;
}

std::string CurveSvg(const std::string &title, const std::string &y_label, const std::vector<Series> &series,
                     bool unit_interval)
{
  std::size_t n = 0;
  double y_max = unit_interval ? 1.0 : 0.0;
  for (const auto &s : series)
  {
    n = std::max(n, s.values.size());
    for (double v : s.values)
    {
      if (std::isfinite(v)) y_max = std::max(y_max, v);
    }
  }
  if (n == 0)
  {
    throw Error("cannot plot an empty history");
  }
  if (y_max <= 0) y_max = 1.0;
  const double x_min = 0, x_max = static_cast<double>(n - 1);
  const double w = 720, h = 440, left = 70, right = 150, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  auto sx = [&](double x) { return left + (x_max > x_min ? (x - x_min) / (x_max - x_min) : 0.5) * pw; };
  auto sy = [&](double y) { return top + ph - y / y_max * ph; };

  static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << ' ' << h << "\" data-x-min=\"" << x_min << "\" data-x-max=\"" << x_max << "\" data-y-min=\"0\" data-y-max=\""
      << Num(y_max) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << Escape(title) << "</text>\n";
  svg << "<g stroke=\"black\" stroke-width=\"1\"><line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\""
      << left + pw << "\" y2=\"" << top + ph << "\"/><line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + ph << "\"/></g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const std::size_t x_ticks = std::min<std::size_t>(n, 10);
  for (std::size_t i = 0; i < x_ticks; ++i)
  {
    const double x = x_ticks > 1 ? std::round(x_max * static_cast<double>(i) / static_cast<double>(x_ticks - 1)) : 0;
    svg << "<line x1=\"" << sx(x) << "\" y1=\"" << top + ph << "\" x2=\"" << sx(x) << "\" y2=\"" << top + ph + 5
        << "\" stroke=\"black\"/><text x=\"" << sx(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << x << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i)
  {
    const double y = y_max * i / 5.0;
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(y) << "\" x2=\"" << left << "\" y2=\"" << sy(y)
        << "\" stroke=\"black\"/><text x=\"" << left - 8 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">"
        << Short(y) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 18 << "\" text-anchor=\"middle\">epoch</text>\n";
  svg << "<text transform=\"translate(18 " << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << Escape(y_label) << "</text>\n</g>\n";

  for (std::size_t s = 0; s < series.size(); ++s)
  {
    const char *color = colors[s % 4];
    svg << "<polyline class=\"series\" data-label=\"" << Escape(series[s].label) << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < series[s].values.size(); ++i)
    {
      const double v = series[s].values[i];
      if (!std::isfinite(v)) continue;
      svg << (first ? "" : " ") << sx(static_cast<double>(i)) << ',' << sy(v);
      first = false;
    }
    svg << "\"/>\n";
    const double ly = top + 20 + 20.0 * static_cast<double>(s);
    svg << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << Escape(series[s].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace
{

void WriteText(const std::filesystem::path &path, const std::string &text)
{
  auto out = OpenOut(path);
  out << text;
  Finish(out, path);
}

std::vector<Series> Collect(const std::vector<train::EpochMetrics> &history, double train::EpochMetrics::*train_field,
                            double train::EpochMetrics::*test_field)
{
  Series tr{"train", {}}, te{"test", {}};
  for (const auto &m : history)
  {
    tr.values.push_back(m.*train_field);
    te.values.push_back(m.*test_field);
  }
  return {tr, te};
}

}  // namespace

void WriteLossCurve(const std::filesystem::path &path, const std::vector<train::EpochMetrics> &history)
{
  WriteText(path, CurveSvg("Loss", "cross-entropy loss",
                           Collect(history, &train::EpochMetrics::train_loss, &train::EpochMetrics::test_loss), false));
}

void WriteAccuracyCurve(const std::filesystem::path &path, const std::vector<train::EpochMetrics> &history)
{
  WriteText(path, CurveSvg("Accuracy", "accuracy",
                           Collect(history, &train::EpochMetrics::train_accuracy, &train::EpochMetrics::test_accuracy),
                           true));
}

std::vector<std::filesystem::path> EmitArtifacts(const std::vector<train::EpochMetrics> &history,
                                                 const Evaluation &evaluation,
                                                 const std::vector<std::string> &class_names,
                                                 const std::filesystem::path &out_dir)
{
  if (history.empty())
  {
    throw Error("cannot emit artifacts for an empty history");
  }
  EnsureDirectory(out_dir);
  const std::vector<std::filesystem::path> files{out_dir / kMetricsCsv, out_dir / kLossCurve,
                                                 out_dir / kAccuracyCurve, out_dir / kReportJson,
                                                 out_dir / kConfusionCsv};
  WriteMetricsCsv(files[0], history);
  WriteLossCurve(files[1], history);
  WriteAccuracyCurve(files[2], history);
  WriteReportJson(files[3], evaluation.report);
  WriteConfusionCsv(files[4], evaluation.confusion, class_names);
  return files;
}

}  // namespace herbclf::eval
