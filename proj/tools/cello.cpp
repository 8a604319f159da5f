// Command-line front end for the benchmark toolkit: scene ingestion through
// question generation, dataset statistics, text-diversity metrics, and model
// evaluation. Exit codes: 0 success, 1 validation or configuration problem,
// 2 I/O or endpoint failure.

#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cello/cello.hpp>

using namespace cello;

namespace {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::IoFailure:
    case ErrorKind::ClientUnavailable:
      return 2;
    default:
      return 1;
  }
}

/// Flags shared by the corpus-producing commands.
struct CommonFlags {
  std::string config_file;
  std::string seed;
  std::string lexicon;
  std::string templates;
  std::string text_distractors;
  bool array_input = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_generation) {
  cmd->add_option("--config", f.config_file, "config file with key = value lines");
  cmd->add_option("--lexicon", f.lexicon, "predicate lexicon file (default: built in)");
  if (with_generation) {
    cmd->add_option("--seed", f.seed, "global generation seed");
    cmd->add_option("--templates", f.templates, "question template file (default: built in)");
    cmd->add_option("--text-distractors", f.text_distractors,
                    "text distractor lexicon file (default: built in)");
  }
  cmd->add_flag("--array", f.array_input, "input is one JSON array, not NDJSON");
}

/// Every tunable key with its default, so one config file serves every
/// subcommand; each command still logs only the keys it acts on.
Config full_config() {
  Config cfg;
  cfg.set_default("seed", "0");
  cfg.set_default("lexicon", "");
  cfg.set_default("templates", "");
  cfg.set_default("text-distractors", "");
  cfg.set_default("window", "50");
  cfg.set_default("threshold", "0.72");
  cfg.set_default("sample", "42");
  cfg.set_default("plan", "s1,s2,s3,s4");
  cfg.set_default("parallelism", "1");
  cfg.set_default("retries", "2");
  cfg.set_default("backoff-ms", "250");
  cfg.set_default("per-task", "0");
  cfg.set_default("stub", "");
  cfg.set_default("host", "127.0.0.1");
  cfg.set_default("port", "8080");
  cfg.set_default("endpoint", "/generate");
  cfg.set_default("model", "default");
  cfg.set_default("timeout-ms", "30000");
  cfg.set_default("max-tokens", "512");
  return cfg;
}

/// Moves flags the user actually passed into the flag layer. The environment
/// still wins over them; the layering lives in Config::resolve.
void apply_flags(Config& cfg, const CLI::App* cmd,
                 std::initializer_list<std::pair<const char*, const std::string*>> flags) {
  for (const auto& [name, value] : flags) {
    const CLI::Option* o = cmd->get_option_no_throw(std::string("--") + name);
    if (o && o->count()) cfg.set_flag(name, *value);
  }
}

void log_config(const Config& cfg, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    auto [value, source] = cfg.resolve(key);
    std::cerr << key << " = " << value << " (" << source << ")\n";
  }
}

PredicateLexicon lexicon_from(const Config& cfg) {
  std::string path = cfg.get("lexicon");
  return path.empty() ? PredicateLexicon::defaults() : PredicateLexicon::load(path);
}

GenOptions gen_options_from(const Config& cfg) {
  GenOptions opt;
  opt.seed = cfg.get_u64("seed");
  std::string templates = cfg.get("templates");
  if (!templates.empty()) opt.templates = QuestionTemplates::load(templates);
  std::string distractors = cfg.get("text-distractors");
  if (!distractors.empty()) opt.text_lexicon = TextDistractorLexicon::load(distractors);
  return opt;
}

void write_out(const std::string& path, const std::vector<Record>& records) {
  if (path == "-")
    write_records(std::cout, records);
  else
    write_dataset(path, records);
}

// ingest: parse and normalize scene graphs

int run_ingest(const std::string& input, const std::string& output, bool array_input) {
  std::vector<SceneGraph> scenes = load_scene_graphs(input, !array_input);
  size_t entities = 0, relations = 0, regions = 0;
  for (const auto& s : scenes) {
    entities += s.objects.size();
    relations += s.relationships.size();
    regions += s.regions.size();
  }
  std::cerr << "scenes: " << scenes.size() << "  entities: " << entities
            << "  relations: " << relations << "  regions: " << regions << "\n";
  if (!output.empty()) {
    if (output == "-") {
      for (const auto& s : scenes) std::cout << serialize_scene_graph(s).dump() << "\n";
    } else {
      std::ofstream out(output);
      if (!out) fail(ErrorKind::IoFailure, "cannot open " + output + " for writing");
      for (const auto& s : scenes) out << serialize_scene_graph(s).dump() << "\n";
    }
  }
  return 0;
}

// extract: causal graphs and template structures per scene

int run_extract(const std::string& input, const Config& cfg, bool array_input, bool as_json) {
  PredicateLexicon lexicon = lexicon_from(cfg);
  std::vector<SceneGraph> scenes = load_scene_graphs(input, !array_input);
  Json rows = Json::array();
  size_t total_edges = 0, total_matches = 0, total_warnings = 0;
  for (const auto& scene : scenes) {
    SceneAnalysis a = analyze_scene(scene, lexicon);
    std::map<std::string, size_t> kinds;
    for (const auto& m : a.matches) ++kinds[to_string(m.kind)];
    total_edges += a.extraction.edges_added;
    total_matches += a.matches.size();
    total_warnings += a.extraction.warnings.size();
    if (as_json) {
      Json row;
      row["image_id"] = scene.image_id;
      row["nodes"] = a.graph.nodes().size();
      row["edges"] = a.extraction.edges_added;
      row["relations_seen"] = a.extraction.relations_seen;
      row["warnings"] = a.extraction.warnings.size();
      row["structures"] = kinds;
      rows.push_back(std::move(row));
    } else {
      std::cout << scene.image_id << ": " << a.graph.nodes().size() << " nodes, "
                << a.extraction.edges_added << " edges";
      if (!kinds.empty()) {
        std::cout << ", structures:";
        for (const auto& [kind, n] : kinds) std::cout << " " << kind << " x" << n;
      }
      if (!a.extraction.warnings.empty())
        std::cout << " (" << a.extraction.warnings.size() << " warnings)";
      std::cout << "\n";
    }
  }
  if (as_json) {
    std::cout << rows.dump(2) << "\n";
  } else {
    std::cerr << "scenes: " << scenes.size() << "  edges: " << total_edges
              << "  structures: " << total_matches << "  warnings: " << total_warnings << "\n";
  }
  return 0;
}

// generate: the full question corpus

int run_generate(const std::string& input, const std::string& output, const Config& cfg,
                 bool array_input) {
  PredicateLexicon lexicon = lexicon_from(cfg);
  GenOptions opt = gen_options_from(cfg);
  std::vector<SceneGraph> scenes = load_scene_graphs(input, !array_input);
  CorpusGeneration out = generate_corpus(scenes, lexicon, opt);
  write_out(output, out.records);
  std::cerr << "scenes: " << out.scenes << "  with structures: " << out.scenes_with_structures
            << "\nrecords: " << out.records.size() << "  leakage dropped: "
            << out.report.leakage_dropped << "  without context: " << out.report.missing_context
            << "  image fallbacks: " << out.report.image_fallbacks
            << "  skipped: " << out.report.skipped.size() << "\n";
  return 0;
}

// robustness: reformulate an existing corpus

int run_robustness(const std::string& scenes_path, const std::string& dataset,
                   const std::string& output, const Config& cfg, bool array_input) {
  PredicateLexicon lexicon = lexicon_from(cfg);
  GenOptions opt = gen_options_from(cfg);
  std::vector<SceneGraph> scenes = load_scene_graphs(scenes_path, !array_input);
  std::vector<Record> records = read_dataset(dataset);
  CorpusGeneration out = robustness_corpus(scenes, lexicon, records, opt);
  write_out(output, out.records);
  std::cerr << "records in: " << records.size() << "  reformulated: " << out.records.size()
            << "  skipped: " << out.report.skipped.size() << "\n";
  return 0;
}

// stats: corpus statistics

int run_stats(const std::string& dataset, bool as_json) {
  DatasetStats s = compute_stats(read_dataset(dataset));
  if (as_json)
    std::cout << stats_to_json(s).dump(2) << "\n";
  else
    std::cout << render_stats(s);
  return 0;
}

// quality: lexical-diversity metrics

int run_quality(const std::string& dataset, const Config& cfg, const std::string& metric,
                const std::string& field) {
  std::vector<Record> records = read_dataset(dataset);
  if (records.empty()) fail(ErrorKind::EmptyInput, "dataset holds no records");
  std::vector<std::string> tokens;
  auto take = [&](const std::string& text) {
    for (auto& t : lexical_tokens(text)) tokens.push_back(std::move(t));
  };
  for (const auto& r : records) {
    if (field == "question" || field == "all") take(r.question);
    if (field == "options" || field == "all")
      for (const auto& o : r.options) take(o.text);
    if (field == "rationale" || field == "all")
      for (const auto& line : r.rationale) take(line);
  }
  if (tokens.empty()) fail(ErrorKind::EmptyInput, "no tokens in field " + field);
  std::cout << std::fixed << std::setprecision(6);
  std::cout << "tokens: " << tokens.size() << "\n";
  if (metric == "mattr" || metric == "all")
    std::cout << "mattr = " << mattr(tokens, cfg.get_u64("window")) << "\n";
  if (metric == "mtld" || metric == "all")
    std::cout << "mtld = " << mtld(tokens, cfg.get_double("threshold")) << "\n";
  if (metric == "hdd" || metric == "all") {
    Rational r = hdd_exact(tokens, cfg.get_u64("sample"));
    std::cout << "hdd = " << r.value() << " (exact " << r.num.str() << "/" << r.den.str()
              << ")\n";
  }
  if (metric != "mattr" && metric != "mtld" && metric != "hdd" && metric != "all")
    fail(ErrorKind::ConfigError, "unknown metric '" + metric + "'");
  return 0;
}

// evaluate: run a model or stub over a dataset and score it

int run_evaluate(const std::string& dataset, const Config& cfg, const CLI::App* cmd,
                 const std::string& output) {
  std::vector<Record> records = read_dataset(dataset);
  size_t per_task = cfg.get_u64("per-task");
  if (per_task > 0) records = sample_test_set(records, per_task, cfg.get_u64("seed"));
  if (records.empty()) fail(ErrorKind::EmptyInput, "nothing to evaluate");

  PromptPlan plan = PromptPlan::parse(cfg.get("plan"));
  EvalConfig ecfg;
  ecfg.parallelism = cfg.get_u64("parallelism");
  ecfg.retries = cfg.get_int("retries");
  ecfg.backoff_ms = cfg.get_int("backoff-ms");

  std::unique_ptr<ModelClient> owned;
  std::string stub = cfg.get("stub");
  if (cmd->count("--http")) {
    HttpClientConfig hcfg;
    hcfg.host = cfg.get("host");
    hcfg.port = cfg.get_int("port");
    hcfg.path = cfg.get("endpoint");
    hcfg.model = cfg.get("model");
    hcfg.timeout_ms = cfg.get_int("timeout-ms");
    hcfg.max_tokens = cfg.get_int("max-tokens");
    owned = std::make_unique<HttpModelClient>(hcfg);
  } else if (!stub.empty()) {
    owned = make_stub(stub, records);
  } else {
    fail(ErrorKind::ConfigError, "pick a model: --stub <kind> or --http");
  }

  std::vector<EvalOutcome> outcomes = run_eval(records, *owned, plan, ecfg);
  size_t transport_failures = 0;
  for (const auto& o : outcomes)
    if (o.raw.rfind("transport failure: ", 0) == 0) ++transport_failures;
  if (transport_failures == outcomes.size())
    fail(ErrorKind::ClientUnavailable, "every request failed; endpoint unreachable");
  ScoreReport rep = score(records, outcomes, owned->name(), plan.to_string());
  std::cout << render_report(rep);
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) fail(ErrorKind::IoFailure, "cannot open " + output + " for writing");
    out << report_to_json(rep).dump(2) << "\n";
  }
  return 0;
}

// report: re-render saved score reports; correlate three or more

int run_report(const std::vector<std::string>& paths, bool correlation) {
  std::vector<ScoreReport> reports;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoFailure, "cannot open report " + path);
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) fail(ErrorKind::SchemaViolation, path + ": invalid JSON");
    reports.push_back(report_from_json(doc));
  }
  for (size_t i = 0; i < reports.size(); ++i) {
    if (i) std::cout << "\n";
    std::cout << render_report(reports[i]);
  }
  if (correlation) {
    std::cout << "\ntask accuracy correlation over " << reports.size() << " models\n";
    std::cout << render_correlation(task_correlation(reports));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scene-graph causal question benchmark toolkit"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse and normalize scene graphs");
  std::string in_input, in_output;
  bool in_array = false;
  ingest->add_option("input", in_input, "scene graph file (NDJSON)")->required();
  ingest->add_option("-o,--output", in_output, "write normalized scenes ('-' for stdout)");
  ingest->add_flag("--array", in_array, "input is one JSON array, not NDJSON");

  // extract
  auto* extract = app.add_subcommand("extract", "show causal graphs and structures");
  std::string ex_input;
  bool ex_json = false;
  CommonFlags ex_flags;
  extract->add_option("input", ex_input, "scene graph file")->required();
  extract->add_flag("--json", ex_json, "machine-readable output");
  add_common(extract, ex_flags, false);

  // generate
  auto* generate = app.add_subcommand("generate", "generate the question corpus");
  std::string gen_input, gen_output = "-";
  CommonFlags gen_flags;
  generate->add_option("input", gen_input, "scene graph file")->required();
  generate->add_option("-o,--output", gen_output, "output dataset ('-' for stdout)");
  add_common(generate, gen_flags, true);

  // robustness
  auto* robust = app.add_subcommand("robustness", "reformulate a corpus as fetch requests");
  std::string rob_scenes, rob_dataset, rob_output = "-";
  CommonFlags rob_flags;
  robust->add_option("scenes", rob_scenes, "scene graph file")->required();
  robust->add_option("dataset", rob_dataset, "generated dataset")->required();
  robust->add_option("-o,--output", rob_output, "output dataset ('-' for stdout)");
  add_common(robust, rob_flags, true);

  // stats
  auto* stats = app.add_subcommand("stats", "dataset statistics");
  std::string st_dataset;
  bool st_json = false;
  stats->add_option("dataset", st_dataset, "dataset file")->required();
  stats->add_flag("--json", st_json, "machine-readable output");

  // quality
  auto* quality = app.add_subcommand("quality", "lexical diversity metrics");
  std::string q_dataset, q_metric = "all", q_field = "question";
  std::string q_window, q_threshold, q_sample;
  CommonFlags q_flags;
  quality->add_option("dataset", q_dataset, "dataset file")->required();
  quality->add_option("--metric", q_metric, "mattr, mtld, hdd, or all");
  quality->add_option("--field", q_field, "question, options, rationale, or all");
  quality->add_option("--window", q_window, "moving-average window");
  quality->add_option("--threshold", q_threshold, "factor threshold");
  quality->add_option("--sample", q_sample, "hypergeometric sample size");
  quality->add_option("--config", q_flags.config_file, "config file");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "run a model over a dataset and score it");
  std::string ev_dataset, ev_output;
  std::string ev_stub, ev_plan, ev_parallelism, ev_retries, ev_backoff, ev_per_task, ev_seed;
  std::string ev_host, ev_port, ev_endpoint, ev_model, ev_timeout, ev_max_tokens, ev_config;
  bool ev_http = false;
  evaluate->add_option("dataset", ev_dataset, "dataset file")->required();
  evaluate->add_option("-o,--output", ev_output, "write the score report JSON here");
  evaluate->add_option("--stub", ev_stub, "offline stub: gold, wrong, yes, no, idk, ood, garbage");
  evaluate->add_flag("--http", ev_http, "use the HTTP endpoint");
  evaluate->add_option("--plan", ev_plan, "prompt step plan, e.g. s1,s2,s3,s4");
  evaluate->add_option("--parallelism", ev_parallelism, "worker threads");
  evaluate->add_option("--retries", ev_retries, "retry budget per record");
  evaluate->add_option("--backoff-ms", ev_backoff, "initial retry backoff");
  evaluate->add_option("--per-task", ev_per_task, "sample this many records per task first");
  evaluate->add_option("--seed", ev_seed, "sampling seed");
  evaluate->add_option("--host", ev_host, "endpoint host");
  evaluate->add_option("--port", ev_port, "endpoint port");
  evaluate->add_option("--endpoint", ev_endpoint, "endpoint path");
  evaluate->add_option("--model", ev_model, "model name sent to the endpoint");
  evaluate->add_option("--timeout-ms", ev_timeout, "request timeout");
  evaluate->add_option("--max-tokens", ev_max_tokens, "response token budget");
  evaluate->add_option("--config", ev_config, "config file");

  // report
  auto* report = app.add_subcommand("report", "render saved score reports");
  std::vector<std::string> rp_paths;
  bool rp_corr = false;
  report->add_option("reports", rp_paths, "score report JSON files")->required();
  report->add_flag("--correlation", rp_corr, "print the task correlation matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (ingest->parsed()) return run_ingest(in_input, in_output, in_array);
    if (extract->parsed()) {
      Config cfg = full_config();
      if (!ex_flags.config_file.empty()) cfg.load_file(ex_flags.config_file);
      apply_flags(cfg, extract, {{"lexicon", &ex_flags.lexicon}});
      log_config(cfg, {"lexicon"});
      return run_extract(ex_input, cfg, ex_flags.array_input, ex_json);
    }
    if (generate->parsed()) {
      Config cfg = full_config();
      if (!gen_flags.config_file.empty()) cfg.load_file(gen_flags.config_file);
      apply_flags(cfg, generate,
                  {{"seed", &gen_flags.seed},
                   {"lexicon", &gen_flags.lexicon},
                   {"templates", &gen_flags.templates},
                   {"text-distractors", &gen_flags.text_distractors}});
      log_config(cfg, {"seed", "lexicon", "templates", "text-distractors"});
      return run_generate(gen_input, gen_output, cfg, gen_flags.array_input);
    }
    if (robust->parsed()) {
      Config cfg = full_config();
      if (!rob_flags.config_file.empty()) cfg.load_file(rob_flags.config_file);
      apply_flags(cfg, robust,
                  {{"seed", &rob_flags.seed},
                   {"lexicon", &rob_flags.lexicon},
                   {"templates", &rob_flags.templates},
                   {"text-distractors", &rob_flags.text_distractors}});
      log_config(cfg, {"seed", "lexicon", "templates", "text-distractors"});
      return run_robustness(rob_scenes, rob_dataset, rob_output, cfg, rob_flags.array_input);
    }
    if (stats->parsed()) return run_stats(st_dataset, st_json);
    if (quality->parsed()) {
      Config cfg = full_config();
      if (!q_flags.config_file.empty()) cfg.load_file(q_flags.config_file);
      apply_flags(cfg, quality,
                  {{"window", &q_window}, {"threshold", &q_threshold}, {"sample", &q_sample}});
      log_config(cfg, {"window", "threshold", "sample"});
      return run_quality(q_dataset, cfg, q_metric, q_field);
    }
    if (evaluate->parsed()) {
      Config cfg = full_config();
      if (!ev_config.empty()) cfg.load_file(ev_config);
      apply_flags(cfg, evaluate,
                  {{"stub", &ev_stub},
                   {"plan", &ev_plan},
                   {"parallelism", &ev_parallelism},
                   {"retries", &ev_retries},
                   {"backoff-ms", &ev_backoff},
                   {"per-task", &ev_per_task},
                   {"seed", &ev_seed},
                   {"host", &ev_host},
                   {"port", &ev_port},
                   {"endpoint", &ev_endpoint},
                   {"model", &ev_model},
                   {"timeout-ms", &ev_timeout},
                   {"max-tokens", &ev_max_tokens}});
      log_config(cfg, {"stub", "plan", "parallelism", "retries", "backoff-ms", "per-task",
                       "seed"});
      if (evaluate->count("--http"))
        log_config(cfg, {"host", "port", "endpoint", "model", "timeout-ms", "max-tokens"});
      return run_evaluate(ev_dataset, cfg, evaluate, ev_output);
    }
    if (report->parsed()) return run_report(rp_paths, rp_corr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
