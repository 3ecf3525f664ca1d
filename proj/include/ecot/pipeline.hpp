#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecot/align.hpp"
#include "ecot/encoder.hpp"
#include "ecot/eval.hpp"
#include "ecot/graph.hpp"
#include "ecot/hyperparams.hpp"
#include "ecot/io.hpp"
#include "ecot/params.hpp"
#include "ecot/predict.hpp"

namespace ecot {

enum class Command { BuildGraph, Align, Predict, Eval, Pipeline };

Command parse_command(const std::string& name);
const char* command_name(Command c);

struct RunConfig {
  Command command = Command::Pipeline;
  std::filesystem::path corpus_path;
  std::optional<std::filesystem::path> params_path;
  std::optional<std::filesystem::path> predictions_path;  // eval input
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  std::size_t speaker_dim = kDefaultSpeakerDim;
  int threads = 1;
  bool dump_encoder = false;
  bool write_table = false;
  HyperParams hyperparams;

  // Paths exist and hyperparameters satisfy their constraints.
  void validate() const;
};

// Applies the keys of a JSON config object onto `config`. Keys mirror the
// HyperParams field names plus "seed", "threads", "d_s" and "out".
void apply_config_json(const json& doc, RunConfig& config);

// Everything computed for one conversation, up to the requested stage.
struct ConversationResult {
  ConversationGraph graph;
  std::optional<EncoderOutput> emotion;
  std::optional<EncoderOutput> cause;
  std::optional<TransportPlan> alignment;
  std::optional<PairPredictionSet> predictions;
  std::optional<LossReport> losses;
};

ConversationResult process_conversation(const ConversationRecord& conv, const ModelParams& params,
                                        const HyperParams& hp, Command stage);

// Runs fn(0) .. fn(count - 1) on up to `threads` workers. The first
// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

ModelParams resolve_params(const RunConfig& config, std::size_t d_u);

// File name -> contents for every artifact the command writes.
using Artifacts = std::map<std::string, std::string>;

// Pure in (corpus, params, config): the same inputs give byte-identical
// artifacts for any thread count.
Artifacts compute_artifacts(const RunConfig& config);

// Writes artifacts into config.output_dir. On failure, files written by this
// call are removed before the exception propagates.
void write_artifacts(const Artifacts& artifacts, const std::filesystem::path& dir);

void run(const RunConfig& config);

}  // namespace ecot
