#pragma once

#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dataset_io.hpp"
#include "eval.hpp"
#include "record.hpp"
#include "tasks.hpp"

namespace cello {

struct Bucket {
  size_t n = 0;
  size_t correct = 0;
  std::array<size_t, 4> errors{};  // indexed by ErrorClass order

  double accuracy() const { return n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0; }
};

/// Accuracy and error breakdown of one evaluation run, keyed every way the
/// benchmark reports: task, rung, structure kind, and format. Buckets exist
/// for every key even when empty, so reports from different corpora share a
/// schema and can be correlated.
struct ScoreReport {
  std::string model;
  std::string plan;
  std::string prompt_version;
  size_t records = 0;
  std::map<TaskKind, Bucket> by_task;
  std::map<Rung, Bucket> by_rung;
  std::map<GraphKind, Bucket> by_graph_kind;
  std::map<std::string, Bucket> by_format;  // "BIN", "MCQ", "ALL"
  std::array<size_t, 4> error_histogram{};
};

inline const std::vector<GraphKind>& all_graph_kinds() {
  static const std::vector<GraphKind> kAll = {GraphKind::Direct, GraphKind::Confounding,
                                              GraphKind::Collision, GraphKind::Chain};
  return kAll;
}

inline ScoreReport score(const std::vector<Record>& records,
                         const std::vector<EvalOutcome>& outcomes, const std::string& model,
                         const std::string& plan) {
  if (records.size() != outcomes.size())
    fail(ErrorKind::SchemaViolation, "outcome count does not match record count");
  ScoreReport rep;
  rep.model = model;
  rep.plan = plan;
  rep.prompt_version = kPromptVersion;
  rep.records = records.size();
  for (TaskKind t : all_tasks()) rep.by_task[t];
  for (Rung r : all_rungs()) rep.by_rung[r];
  for (GraphKind k : all_graph_kinds()) rep.by_graph_kind[k];
  for (const char* f : {"BIN", "MCQ", "ALL"}) rep.by_format[f];

  for (size_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    const EvalOutcome& o = outcomes[i];
    auto tally = [&](Bucket& b) {
      ++b.n;
      if (o.correct) ++b.correct;
      if (o.error) ++b.errors[static_cast<size_t>(*o.error)];
    };
    tally(rep.by_task[r.task]);
    tally(rep.by_rung[rung_of(r.task)]);
    tally(rep.by_graph_kind[r.graph_kind]);
    tally(rep.by_format[r.format()]);
    tally(rep.by_format["ALL"]);
    if (o.error) ++rep.error_histogram[static_cast<size_t>(*o.error)];
  }
  return rep;
}

/// Chance accuracy: 1/|options| per task, unweighted means upward.
struct BaselineRow {
  std::map<TaskKind, double> by_task;
  std::map<Rung, double> by_rung;
  double bin = 0.0;
  double mcq = 0.0;
  double all = 0.0;
};

inline BaselineRow random_baseline() {
  BaselineRow row;
  for (TaskKind t : all_tasks()) row.by_task[t] = is_binary(t) ? 0.5 : 0.25;
  for (Rung r : all_rungs()) {
    double sum = 0.0;
    auto tasks = tasks_of_rung(r);
    for (TaskKind t : tasks) sum += row.by_task[t];
    row.by_rung[r] = sum / static_cast<double>(tasks.size());
  }
  row.bin = 0.5;
  row.mcq = 0.25;
  double sum = 0.0;
  for (TaskKind t : all_tasks()) sum += row.by_task[t];
  row.all = sum / 12.0;
  return row;
}

namespace detail {

inline Json bucket_to_json(const Bucket& b) {
  Json doc;
  doc["n"] = b.n;
  doc["correct"] = b.correct;
  doc["accuracy"] = b.accuracy();
  doc["errors"] = Json::object();
  for (ErrorClass e : all_error_classes())
    doc["errors"][to_string(e)] = b.errors[static_cast<size_t>(e)];
  return doc;
}

inline Bucket bucket_from_json(const Json& doc) {
  Bucket b;
  b.n = doc.at("n").get<size_t>();
  b.correct = doc.at("correct").get<size_t>();
  for (ErrorClass e : all_error_classes())
    b.errors[static_cast<size_t>(e)] = doc.at("errors").at(to_string(e)).get<size_t>();
  return b;
}

}  // namespace detail

inline Json report_to_json(const ScoreReport& rep) {
  Json doc;
  doc["model"] = rep.model;
  doc["plan"] = rep.plan;
  doc["prompt_version"] = rep.prompt_version;
  doc["records"] = rep.records;
  doc["by_task"] = Json::object();
  for (TaskKind t : all_tasks()) doc["by_task"][to_string(t)] = detail::bucket_to_json(rep.by_task.at(t));
  doc["by_rung"] = Json::object();
  for (Rung r : all_rungs()) doc["by_rung"][to_string(r)] = detail::bucket_to_json(rep.by_rung.at(r));
  doc["by_graph_kind"] = Json::object();
  for (GraphKind k : all_graph_kinds())
    doc["by_graph_kind"][to_string(k)] = detail::bucket_to_json(rep.by_graph_kind.at(k));
  doc["by_format"] = Json::object();
  for (const char* f : {"BIN", "MCQ", "ALL"})
    doc["by_format"][f] = detail::bucket_to_json(rep.by_format.at(f));
  doc["errors"] = Json::object();
  for (ErrorClass e : all_error_classes())
    doc["errors"][to_string(e)] = rep.error_histogram[static_cast<size_t>(e)];
  BaselineRow base = random_baseline();
  doc["random_baseline"] = Json::object();
  doc["random_baseline"]["by_task"] = Json::object();
  for (TaskKind t : all_tasks())
    doc["random_baseline"]["by_task"][to_string(t)] = base.by_task[t];
  doc["random_baseline"]["by_rung"] = Json::object();
  for (Rung r : all_rungs()) doc["random_baseline"]["by_rung"][to_string(r)] = base.by_rung[r];
  doc["random_baseline"]["BIN"] = base.bin;
  doc["random_baseline"]["MCQ"] = base.mcq;
  doc["random_baseline"]["ALL"] = base.all;
  return doc;
}

inline ScoreReport report_from_json(const Json& doc) {
  ScoreReport rep;
  try {
    rep.model = doc.at("model").get<std::string>();
    rep.plan = doc.at("plan").get<std::string>();
    rep.prompt_version = doc.at("prompt_version").get<std::string>();
    rep.records = doc.at("records").get<size_t>();
    for (TaskKind t : all_tasks())
      rep.by_task[t] = detail::bucket_from_json(doc.at("by_task").at(to_string(t)));
    for (Rung r : all_rungs())
      rep.by_rung[r] = detail::bucket_from_json(doc.at("by_rung").at(to_string(r)));
    for (GraphKind k : all_graph_kinds())
      rep.by_graph_kind[k] = detail::bucket_from_json(doc.at("by_graph_kind").at(to_string(k)));
    for (const char* f : {"BIN", "MCQ", "ALL"})
      rep.by_format[f] = detail::bucket_from_json(doc.at("by_format").at(f));
    for (ErrorClass e : all_error_classes())
      rep.error_histogram[static_cast<size_t>(e)] =
          doc.at("errors").at(to_string(e)).get<size_t>();
  } catch (const Json::exception& e) {
    fail(ErrorKind::SchemaViolation, std::string("malformed score report: ") + e.what());
  }
  return rep;
}

namespace detail {

inline std::string pad(const std::string& s, size_t width) {
  return s + std::string(s.size() < width ? width - s.size() : 1, ' ');
}

}  // namespace detail

inline std::string render_report(const ScoreReport& rep) {
  std::ostringstream os;
  os << "model: " << rep.model << "   plan: " << rep.plan << "   prompt: " << rep.prompt_version
     << "   records: " << rep.records << "\n\n";
  BaselineRow base = random_baseline();
  os << "task    n       acc    random\n";
  for (TaskKind t : all_tasks()) {
    const Bucket& b = rep.by_task.at(t);
    os << detail::pad(to_string(t), 8) << detail::pad(std::to_string(b.n), 8)
       << detail::pad(detail::fixed2(b.accuracy()), 7)
       << detail::fixed2(base.by_task[t]) << "\n";
  }
  os << "\nrung            n       acc    random\n";
  for (Rung r : all_rungs()) {
    const Bucket& b = rep.by_rung.at(r);
    os << detail::pad(to_string(r), 16) << detail::pad(std::to_string(b.n), 8)
       << detail::pad(detail::fixed2(b.accuracy()), 7)
       << detail::fixed2(base.by_rung[r]) << "\n";
  }
  os << "\ngraph kind    n       acc\n";
  for (GraphKind k : all_graph_kinds()) {
    const Bucket& b = rep.by_graph_kind.at(k);
    os << detail::pad(to_string(k), 14) << detail::pad(std::to_string(b.n), 8)
       << detail::fixed2(b.accuracy()) << "\n";
  }
  os << "\nformat  n       acc    random\n";
  std::map<std::string, double> fmt_base = {{"BIN", base.bin}, {"MCQ", base.mcq}, {"ALL", base.all}};
  for (const char* f : {"BIN", "MCQ", "ALL"}) {
    const Bucket& b = rep.by_format.at(f);
    os << detail::pad(f, 8) << detail::pad(std::to_string(b.n), 8)
       << detail::pad(detail::fixed2(b.accuracy()), 7) << detail::fixed2(fmt_base[f])
       << "\n";
  }
  os << "\nerrors: ";
  bool first = true;
  for (ErrorClass e : all_error_classes()) {
    if (!first) os << ", ";
    os << to_string(e) << " " << rep.error_histogram[static_cast<size_t>(e)];
    first = false;
  }
  os << "\n";
  return os.str();
}

/// Pearson correlation between task accuracy vectors across model reports.
/// Degenerate (zero-variance) pairs fall back to 1 on the diagonal and 0
/// elsewhere. Needs at least three reports to be meaningful.
inline std::vector<std::vector<double>> task_correlation(const std::vector<ScoreReport>& reports) {
  if (reports.size() < 3)
    fail(ErrorKind::InsufficientModels, "task correlation needs at least 3 model reports, got " +
                                            std::to_string(reports.size()));
  const auto tasks = all_tasks();
  const size_t nt = tasks.size();
  const size_t nm = reports.size();
  std::vector<std::vector<double>> acc(nt, std::vector<double>(nm));
  for (size_t ti = 0; ti < nt; ++ti)
    for (size_t mi = 0; mi < nm; ++mi) acc[ti][mi] = reports[mi].by_task.at(tasks[ti]).accuracy();

  std::vector<std::vector<double>> corr(nt, std::vector<double>(nt, 0.0));
  for (size_t i = 0; i < nt; ++i) {
    corr[i][i] = 1.0;
    for (size_t j = i + 1; j < nt; ++j) {
      double mi = 0.0, mj = 0.0;
      for (size_t m = 0; m < nm; ++m) {
        mi += acc[i][m];
        mj += acc[j][m];
      }
      mi /= static_cast<double>(nm);
      mj /= static_cast<double>(nm);
      double sij = 0.0, sii = 0.0, sjj = 0.0;
      for (size_t m = 0; m < nm; ++m) {
        double di = acc[i][m] - mi;
        double dj = acc[j][m] - mj;
        sij += di * dj;
        sii += di * di;
        sjj += dj * dj;
      }
      double denom = std::sqrt(sii) * std::sqrt(sjj);
      double r = denom == 0.0 ? 0.0 : sij / denom;
      corr[i][j] = r;
      corr[j][i] = r;
    }
  }
  return corr;
}

inline std::string render_correlation(const std::vector<std::vector<double>>& corr) {
  std::ostringstream os;
  const auto tasks = all_tasks();
  os << detail::pad("", 6);
  for (TaskKind t : tasks) os << detail::pad(to_string(t), 7);
  os << "\n";
  for (size_t i = 0; i < tasks.size(); ++i) {
    os << detail::pad(to_string(tasks[i]), 6);
    for (size_t j = 0; j < tasks.size(); ++j) {
      std::ostringstream cell;
      cell.setf(std::ios::fixed);
      cell.precision(2);
      cell << corr[i][j];
      os << detail::pad(cell.str(), 7);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace cello
