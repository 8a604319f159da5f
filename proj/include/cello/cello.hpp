#pragma once

#include "brute_force.hpp"
#include "causal_graph.hpp"
#include "config.hpp"
#include "cot.hpp"
#include "dataset_io.hpp"
#include "diversity.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "extraction.hpp"
#include "http_client.hpp"
#include "oracle.hpp"
#include "pipeline.hpp"
#include "question_gen.hpp"
#include "record.hpp"
#include "rng.hpp"
#include "robustness.hpp"
#include "scene_graph.hpp"
#include "score.hpp"
#include "tasks.hpp"
#include "template_match.hpp"
#include "templates.hpp"
#include "text.hpp"
