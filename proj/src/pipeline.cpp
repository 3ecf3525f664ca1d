#include "ecot/pipeline.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "ecot/error.hpp"

namespace ecot {

namespace fs = std::filesystem;

namespace {

bool reaches(Command stage, Command needed) {
  const auto rank = [](Command c) {
    switch (c) {
      case Command::BuildGraph: return 0;
      case Command::Align: return 1;
      case Command::Predict:
      case Command::Eval:
      case Command::Pipeline: return 2;
    }
    return 2;
  };
  return rank(stage) >= rank(needed);
}

json hyperparams_to_json(const HyperParams& hp) {
  return {{"window", hp.window},
          {"tau_s", hp.tau_s},
          {"tau_e", hp.tau_e},
          {"tau_r", hp.tau_r},
          {"alpha", hp.alpha},
          {"beta", hp.beta},
          {"epsilon", hp.epsilon},
          {"lambda_ee", hp.lambda_ee},
          {"lambda_ce", hp.lambda_ce},
          {"lambda_ot", hp.lambda_ot},
          {"layers", hp.layers},
          {"outer_iters", hp.outer_iters},
          {"sinkhorn_iters", hp.sinkhorn_iters},
          {"sinkhorn_tol", hp.sinkhorn_tol},
          {"outer_tol", hp.outer_tol},
          {"decision_threshold", hp.decision_threshold}};
}

template <typename T>
void read_key(const json& doc, const char* key, T& dst) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::vector<ConversationPrediction> to_eval_input(const Corpus& corpus,
                                                  const std::vector<ConversationResult>& results) {
  std::vector<ConversationPrediction> out;
  for (std::size_t c = 0; c < results.size(); ++c) {
    const PairPredictionSet& p = *results[c].predictions;
    ConversationPrediction cp{corpus.conversations[c].conversation_id, p.decisions, {}, {}};
    for (const auto& probs : p.ee_probs) cp.emotion_predicted.push_back(is_positive(probs));
    for (const auto& probs : p.ce_probs) cp.cause_predicted.push_back(is_positive(probs));
    out.push_back(std::move(cp));
  }
  return out;
}

std::string eval_artifacts(const Corpus& corpus, const std::vector<ConversationPrediction>& preds,
                           std::string* table) {
  const EvalReport all = score_pairs(preds, corpus.conversations);

  const Corpus subset = multi_cause_subset(corpus);
  std::vector<ConversationPrediction> subset_preds;
  for (const auto& conv : subset.conversations) {
    for (const auto& p : preds)
      if (p.conversation_id == conv.conversation_id) subset_preds.push_back(p);
  }
  const EvalReport multi = score_pairs(subset_preds, subset.conversations);

  json multi_json = eval_to_json(multi);
  multi_json["conversations"] = subset.conversations.size();
  json doc = {{"all", eval_to_json(all)}, {"multi_cause", std::move(multi_json)}};
  if (table) *table = format_eval_table({{"all", all}, {"multi-cause", multi}});
  return dump_json(doc);
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "build-graph") return Command::BuildGraph;
  if (name == "align") return Command::Align;
  if (name == "predict") return Command::Predict;
  if (name == "eval") return Command::Eval;
  if (name == "pipeline") return Command::Pipeline;
  throw ConfigError("unknown command '" + name + "'");
}

const char* command_name(Command c) {
  switch (c) {
    case Command::BuildGraph: return "build-graph";
    case Command::Align: return "align";
    case Command::Predict: return "predict";
    case Command::Eval: return "eval";
    case Command::Pipeline: return "pipeline";
  }
  return "?";
}

void RunConfig::validate() const {
  if (corpus_path.empty()) throw ConfigError("a corpus path is required");
  if (!fs::exists(corpus_path)) throw ConfigError("corpus '" + corpus_path.string() + "' does not exist");
  if (params_path && !fs::exists(*params_path))
    throw ConfigError("params '" + params_path->string() + "' does not exist");
  if (predictions_path && !fs::exists(*predictions_path))
    throw ConfigError("predictions '" + predictions_path->string() + "' does not exist");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (speaker_dim == 0) throw ConfigError("d_s must be positive");
  hyperparams.validate();
}

void apply_config_json(const json& doc, RunConfig& config) {
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  static const char* const kKnown[] = {
      "window", "tau_s", "tau_e", "tau_r", "alpha", "beta", "epsilon", "lambda_ee", "lambda_ce",
      "lambda_ot", "layers", "outer_iters", "sinkhorn_iters", "sinkhorn_tol", "outer_tol",
      "decision_threshold", "seed", "threads", "d_s", "out"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown))
      throw ConfigError("unknown config key '" + key + "'");
  }
  HyperParams& hp = config.hyperparams;
  read_key(doc, "window", hp.window);
  read_key(doc, "tau_s", hp.tau_s);
  read_key(doc, "tau_e", hp.tau_e);
  read_key(doc, "tau_r", hp.tau_r);
  read_key(doc, "alpha", hp.alpha);
  read_key(doc, "beta", hp.beta);
  read_key(doc, "epsilon", hp.epsilon);
  read_key(doc, "lambda_ee", hp.lambda_ee);
  read_key(doc, "lambda_ce", hp.lambda_ce);
  read_key(doc, "lambda_ot", hp.lambda_ot);
  read_key(doc, "layers", hp.layers);
  read_key(doc, "outer_iters", hp.outer_iters);
  read_key(doc, "sinkhorn_iters", hp.sinkhorn_iters);
  read_key(doc, "sinkhorn_tol", hp.sinkhorn_tol);
  read_key(doc, "outer_tol", hp.outer_tol);
  read_key(doc, "decision_threshold", hp.decision_threshold);
  read_key(doc, "seed", config.seed);
  read_key(doc, "threads", config.threads);
  read_key(doc, "d_s", config.speaker_dim);
  if (doc.contains("out")) {
    std::string out;
    read_key(doc, "out", out);
    config.output_dir = out;
  }
}

ConversationResult process_conversation(const ConversationRecord& conv, const ModelParams& params,
                                        const HyperParams& hp, Command stage) {
  ConversationResult r;
  r.graph = build_graph(conv, params, hp);
  if (!reaches(stage, Command::Align)) return r;

  r.emotion = encode(r.graph, params, SemanticSpace::Emotion, hp.layers);
  r.cause = encode(r.graph, params, SemanticSpace::Cause, hp.layers);
  r.alignment = fgw_align(r.emotion->hidden, r.cause->hidden, r.emotion->induced_adjacency,
                          r.cause->induced_adjacency, hp);
  if (!reaches(stage, Command::Predict)) return r;

  r.predictions = predict_pairs(r.emotion->hidden, r.cause->hidden, r.alignment->sharpened, params, hp);
  r.losses = losses(*r.predictions, r.alignment->sharpened, conv, hp);
  return r;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count && !failed; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

ModelParams resolve_params(const RunConfig& config, std::size_t d_u) {
  ParamsFile file;
  if (config.params_path) file = load_params_file(*config.params_path);
  const std::size_t d_s = file.d_s.value_or(config.speaker_dim);
  const std::uint64_t seed = file.seed.value_or(config.seed);
  return ModelParams::materialize(d_u, d_s, config.hyperparams.layers, seed, file.tensors);
}

Artifacts compute_artifacts(const RunConfig& config) {
  config.validate();
  const HyperParams& hp = config.hyperparams;
  const Corpus corpus = load_corpus(config.corpus_path);
  Artifacts out;

  if (config.command == Command::Eval && config.predictions_path) {
    const auto preds = parse_predictions(read_json_file(*config.predictions_path));
    std::string table;
    out["eval.json"] = eval_artifacts(corpus, preds, config.write_table ? &table : nullptr);
    if (config.write_table) out["eval.txt"] = table;
    return out;
  }

  const ModelParams params = resolve_params(config, corpus.d_u);
  const std::size_t n = corpus.conversations.size();
  std::vector<ConversationResult> results(n);
  parallel_for(n, config.threads, [&](std::size_t k) {
    try {
      results[k] = process_conversation(corpus.conversations[k], params, hp, config.command);
    } catch (const ContractViolation& e) {
      throw CorpusFormatError("conversation '" + corpus.conversations[k].conversation_id +
                              "': " + e.what());
    }
  });

  const json header = {{"seed", params.seed()}, {"hyperparams", hyperparams_to_json(hp)}};

  if (config.command == Command::BuildGraph) {
    json doc = header;
    doc["conversations"] = json::array();
    for (std::size_t k = 0; k < n; ++k)
      doc["conversations"].push_back(graph_to_json(corpus.conversations[k].conversation_id, results[k].graph));
    out["graphs.json"] = dump_json(doc);
    return out;
  }

  if (config.command == Command::Align || config.command == Command::Pipeline) {
    json doc = header;
    doc["conversations"] = json::array();
    for (std::size_t k = 0; k < n; ++k) {
      json entry = plan_to_json(*results[k].alignment);
      entry["id"] = corpus.conversations[k].conversation_id;
      doc["conversations"].push_back(std::move(entry));
    }
    out["alignments.json"] = dump_json(doc);
  }

  if (config.dump_encoder) {
    json doc = header;
    doc["conversations"] = json::array();
    for (std::size_t k = 0; k < n; ++k) {
      doc["conversations"].push_back({{"id", corpus.conversations[k].conversation_id},
                                      {"E", encoder_to_json(*results[k].emotion)},
                                      {"C", encoder_to_json(*results[k].cause)}});
    }
    out["encoders.json"] = dump_json(doc);
  }

  if (config.command == Command::Align) return out;

  if (config.command != Command::Eval) {
    json doc = header;
    doc["conversations"] = json::array();
    for (std::size_t k = 0; k < n; ++k) {
      doc["conversations"].push_back({{"id", corpus.conversations[k].conversation_id},
                                      {"predictions", predictions_to_json(*results[k].predictions)},
                                      {"losses", losses_to_json(*results[k].losses)}});
    }
    out["predictions.json"] = dump_json(doc);
  }

  if (config.command == Command::Eval || config.command == Command::Pipeline) {
    std::string table;
    out["eval.json"] =
        eval_artifacts(corpus, to_eval_input(corpus, results), config.write_table ? &table : nullptr);
    if (config.write_table) out["eval.txt"] = table;
  }
  return out;
}

void write_artifacts(const Artifacts& artifacts, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  try {
    for (const auto& [name, contents] : artifacts) {
      const fs::path target = dir / name;
      const fs::path staging = dir / (name + ".partial");
      {
        std::ofstream f(staging, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write '" + staging.string() + "'");
        written.push_back(staging);
        f << contents;
        if (!f.flush()) throw std::runtime_error("write to '" + staging.string() + "' failed");
      }
      fs::rename(staging, target);
      written.back() = target;
    }
  } catch (...) {
    std::error_code ignored;
    for (const auto& p : written) fs::remove(p, ignored);
    throw;
  }
}

void run(const RunConfig& config) { write_artifacts(compute_artifacts(config), config.output_dir); }

}  // namespace ecot
