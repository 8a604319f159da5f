#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "record.hpp"
#include "rng.hpp"
#include "tasks.hpp"
#include "text.hpp"

namespace cello {

inline size_t write_records(std::ostream& out, const std::vector<Record>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  if (!out) fail(ErrorKind::IoFailure, "write failed");
  return records.size();
}

inline size_t write_dataset(const std::string& path, const std::vector<Record>& records) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoFailure, "cannot open " + path + " for writing");
  return write_records(out, records);
}

inline std::vector<Record> read_records(std::istream& in) {
  std::vector<Record> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    Json doc = Json::parse(t, nullptr, false);
    if (doc.is_discarded())
      fail(ErrorKind::SchemaViolation, "line " + std::to_string(lineno) + ": invalid JSON");
    try {
      out.push_back(record_from_json(doc));
    } catch (const Error& e) {
      fail(ErrorKind::SchemaViolation, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<Record> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoFailure, "cannot open dataset " + path);
  return read_records(in);
}

struct TaskStats {
  size_t count = 0;
  size_t question_tokens = 0;
  size_t answer_tokens = 0;  // gold option tokens; reported only for MCQ
  size_t binary_yes = 0;

  double mean_question_tokens() const {
    return count ? static_cast<double>(question_tokens) / static_cast<double>(count) : 0.0;
  }
  double mean_answer_tokens() const {
    return count ? static_cast<double>(answer_tokens) / static_cast<double>(count) : 0.0;
  }
};

/// Corpus statistics in the benchmark's reference layout: totals, per-rung
/// and per-task rows with mean token lengths, and a per-structure block.
/// All accumulators are integers, so the result is permutation-invariant.
struct DatasetStats {
  size_t total = 0;
  size_t robustness_count = 0;
  std::map<Rung, size_t> by_rung;
  std::map<TaskKind, TaskStats> by_task;
  std::map<GraphKind, size_t> by_graph_kind;
  std::map<GraphKind, std::map<TaskKind, size_t>> graph_task;
  size_t binary_count = 0;
  size_t binary_yes = 0;

  double binary_yes_rate() const {
    return binary_count ? static_cast<double>(binary_yes) / static_cast<double>(binary_count) : 0.0;
  }
};

inline DatasetStats compute_stats(const std::vector<Record>& records) {
  DatasetStats s;
  for (const auto& r : records) {
    ++s.total;
    if (r.robustness) ++s.robustness_count;
    ++s.by_rung[rung_of(r.task)];
    TaskStats& ts = s.by_task[r.task];
    ++ts.count;
    ts.question_tokens += tokenize(r.question).size();
    ts.answer_tokens += tokenize(r.gold).size();
    ++s.by_graph_kind[r.graph_kind];
    ++s.graph_task[r.graph_kind][r.task];
    if (is_binary(r.task)) {
      ++s.binary_count;
      if (lower(r.gold) == "yes") {
        ++s.binary_yes;
        ++ts.binary_yes;
      }
    }
  }
  return s;
}

inline Json stats_to_json(const DatasetStats& s) {
  Json doc;
  doc["total"] = s.total;
  doc["robustness"] = s.robustness_count;
  doc["by_rung"] = Json::object();
  for (Rung r : all_rungs()) {
    auto it = s.by_rung.find(r);
    doc["by_rung"][to_string(r)] = it == s.by_rung.end() ? 0 : it->second;
  }
  doc["by_task"] = Json::object();
  for (TaskKind t : all_tasks()) {
    Json row;
    auto it = s.by_task.find(t);
    const TaskStats ts = it == s.by_task.end() ? TaskStats{} : it->second;
    row["count"] = ts.count;
    row["mean_question_tokens"] = ts.mean_question_tokens();
    if (is_binary(t))
      row["mean_answer_tokens"] = nullptr;
    else
      row["mean_answer_tokens"] = ts.mean_answer_tokens();
    doc["by_task"][to_string(t)] = std::move(row);
  }
  doc["by_graph_kind"] = Json::object();
  for (GraphKind k : {GraphKind::Direct, GraphKind::Confounding, GraphKind::Collision, GraphKind::Chain}) {
    Json row;
    auto it = s.by_graph_kind.find(k);
    row["count"] = it == s.by_graph_kind.end() ? 0 : it->second;
    row["tasks"] = Json::object();
    auto git = s.graph_task.find(k);
    if (git != s.graph_task.end())
      for (const auto& [t, n] : git->second) row["tasks"][to_string(t)] = n;
    doc["by_graph_kind"][to_string(k)] = std::move(row);
  }
  doc["binary_count"] = s.binary_count;
  doc["binary_yes_rate"] = s.binary_yes_rate();
  return doc;
}

namespace detail {

inline std::string fixed2(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

}  // namespace detail

inline std::string render_stats(const DatasetStats& s) {
  std::ostringstream os;
  os << "total records: " << s.total << "\n";
  os << "robustness records: " << s.robustness_count << "\n\n";
  os << "rung            count\n";
  for (Rung r : all_rungs()) {
    auto it = s.by_rung.find(r);
    size_t n = it == s.by_rung.end() ? 0 : it->second;
    std::string name = to_string(r);
    os << name << std::string(name.size() < 16 ? 16 - name.size() : 1, ' ') << n << "\n";
  }
  os << "\ntask   count   q_tokens   a_tokens\n";
  for (TaskKind t : all_tasks()) {
    auto it = s.by_task.find(t);
    const TaskStats ts = it == s.by_task.end() ? TaskStats{} : it->second;
    std::string name = to_string(t);
    os << name << std::string(7 - name.size(), ' ');
    std::string count = std::to_string(ts.count);
    os << count << std::string(count.size() < 8 ? 8 - count.size() : 1, ' ');
    std::string q = detail::fixed2(ts.mean_question_tokens());
    os << q << std::string(q.size() < 11 ? 11 - q.size() : 1, ' ');
    os << (is_binary(t) ? "-" : detail::fixed2(ts.mean_answer_tokens())) << "\n";
  }
  os << "\ngraph kind    count   tasks\n";
  for (GraphKind k : {GraphKind::Direct, GraphKind::Confounding, GraphKind::Collision, GraphKind::Chain}) {
    std::string name = to_string(k);
    os << name << std::string(name.size() < 14 ? 14 - name.size() : 1, ' ');
    auto it = s.by_graph_kind.find(k);
    std::string count = std::to_string(it == s.by_graph_kind.end() ? 0 : it->second);
    os << count << std::string(count.size() < 8 ? 8 - count.size() : 1, ' ');
    auto git = s.graph_task.find(k);
    if (git != s.graph_task.end()) {
      bool first = true;
      for (TaskKind t : all_tasks()) {
        auto tit = git->second.find(t);
        if (tit == git->second.end()) continue;
        if (!first) os << ", ";
        os << to_string(t) << " " << tit->second;
        first = false;
      }
    }
    os << "\n";
  }
  if (s.binary_count) {
    os << "\nbinary yes-rate: " << detail::fixed2(s.binary_yes_rate()) << " over "
       << s.binary_count << " records\n";
  }
  return os.str();
}

/// Draws exactly per_task records for each of the twelve tasks, seeded and
/// independent of input order: candidates are sorted by id, shuffled with a
/// per-task stream, and the selection is emitted sorted by id within the
/// canonical task order. Robustness records are not eligible; they form
/// their own evaluation axis.
inline std::vector<Record> sample_test_set(const std::vector<Record>& records, size_t per_task,
                                           uint64_t seed) {
  std::vector<Record> out;
  if (per_task == 0) return out;
  std::map<TaskKind, std::vector<const Record*>> pools;
  for (const auto& r : records)
    if (!r.robustness) pools[r.task].push_back(&r);
  for (TaskKind t : all_tasks()) {
    auto& pool = pools[t];
    if (pool.size() < per_task)
      fail(ErrorKind::InsufficientRecords,
           std::string("task ") + to_string(t) + " has " + std::to_string(pool.size()) +
               " records, need " + std::to_string(per_task));
    std::sort(pool.begin(), pool.end(),
              [](const Record* a, const Record* b) { return a->id < b->id; });
    Rng rng(mix(seed, fnv1a(to_string(t))));
    rng.shuffle(pool);
    std::vector<const Record*> chosen(pool.begin(), pool.begin() + per_task);
    std::sort(chosen.begin(), chosen.end(),
              [](const Record* a, const Record* b) { return a->id < b->id; });
    for (const Record* r : chosen) out.push_back(*r);
  }
  return out;
}

}  // namespace cello
