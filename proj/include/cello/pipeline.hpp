#pragma once

#include <string>
#include <vector>

#include "causal_graph.hpp"
#include "extraction.hpp"
#include "question_gen.hpp"
#include "robustness.hpp"
#include "scene_graph.hpp"
#include "template_match.hpp"

namespace cello {

/// Everything derived from one scene before question generation.
struct SceneAnalysis {
  SceneGraph scene;
  CausalGraph graph;
  ExtractionReport extraction;
  std::vector<TemplateMatch> matches;
};

inline SceneAnalysis analyze_scene(const SceneGraph& scene, const PredicateLexicon& lexicon) {
  SceneAnalysis a;
  a.scene = scene;
  Extraction ex = extract_causal_graph(scene, lexicon);
  a.graph = std::move(ex.graph);
  a.extraction = std::move(ex.report);
  a.matches = find_template_matches(a.graph);
  return a;
}

struct CorpusGeneration {
  std::vector<Record> records;
  GenerationReport report;
  size_t scenes = 0;
  size_t scenes_with_structures = 0;
  size_t relations_seen = 0;
  size_t edges_added = 0;
  size_t extraction_warnings = 0;
};

/// Full generation pass over a scene list. Scenes are processed in input
/// order and each record depends only on its own scene and the global seed,
/// so output is deterministic and insensitive to batching.
inline CorpusGeneration generate_corpus(const std::vector<SceneGraph>& scenes,
                                        const PredicateLexicon& lexicon, const GenOptions& opt) {
  CorpusGeneration out;
  for (const auto& scene : scenes) {
    ++out.scenes;
    SceneAnalysis a = analyze_scene(scene, lexicon);
    out.relations_seen += a.extraction.relations_seen;
    out.edges_added += a.extraction.edges_added;
    out.extraction_warnings += a.extraction.warnings.size();
    if (a.matches.empty()) continue;
    ++out.scenes_with_structures;
    Generation gen = generate_questions(a.scene, a.graph, a.matches, opt);
    for (auto& r : gen.records) out.records.push_back(std::move(r));
    out.report.produced += gen.report.produced;
    out.report.leakage_dropped += gen.report.leakage_dropped;
    out.report.missing_context += gen.report.missing_context;
    out.report.image_fallbacks += gen.report.image_fallbacks;
    for (auto& s : gen.report.skipped) out.report.skipped.push_back(std::move(s));
  }
  return out;
}

/// Robustness pass: re-derives each scene's structures, then reformulates the
/// given records scene by scene. `records` may span many scenes; each is
/// visited once under its own image id.
inline CorpusGeneration robustness_corpus(const std::vector<SceneGraph>& scenes,
                                          const PredicateLexicon& lexicon,
                                          const std::vector<Record>& records,
                                          const GenOptions& opt) {
  CorpusGeneration out;
  for (const auto& scene : scenes) {
    ++out.scenes;
    SceneAnalysis a = analyze_scene(scene, lexicon);
    if (a.matches.empty()) continue;
    ++out.scenes_with_structures;
    Generation gen = reformulate_corpus(a.scene, a.graph, a.matches, records, opt);
    for (auto& r : gen.records) out.records.push_back(std::move(r));
    out.report.produced += gen.report.produced;
    for (auto& s : gen.report.skipped) out.report.skipped.push_back(std::move(s));
  }
  return out;
}

}  // namespace cello
