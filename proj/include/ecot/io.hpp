#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "ecot/align.hpp"
#include "ecot/encoder.hpp"
#include "ecot/eval.hpp"
#include "ecot/graph.hpp"
#include "ecot/params.hpp"
#include "ecot/predict.hpp"
#include "ecot/types.hpp"

namespace ecot {

using json = nlohmann::json;

// Corpus schema:
//   { "d_u": int,
//     "conversations": [ { "id": str,
//                          "utterances": [ { "index": int, "speaker": int,
//                                            "embedding": [float], "emotion": 0|1,
//                                            "cause": 0|1, "text": str? } ],
//                          "gold_pairs": [[e, c], ...] } ] }
Corpus parse_corpus(const json& doc);
json corpus_to_json(const Corpus& corpus);
Corpus load_corpus(const std::filesystem::path& path);

// Params file:
//   { "seed": int?, "d_s": int?,
//     "tensors": { "<block name>": { "shape": [rows, cols] | [n], "data": [...] } } }
// Block names: speaker.<id>, encoder.{E,C}.layer<l>.{W,a},
// {pair,ee,ce}_mlp.{W1,b1,W2,b2}.
struct ParamsFile {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> d_s;
  TensorBlocks tensors;
};
ParamsFile parse_params(const json& doc);
json params_to_json(const ModelParams& params);
ParamsFile load_params_file(const std::filesystem::path& path);

json matrix_to_json(const DenseMatrix& m);   // nested rows
DenseMatrix matrix_from_json(const json& j);  // nested rows

json graph_to_json(const std::string& id, const ConversationGraph& graph);
json encoder_to_json(const EncoderOutput& out);
json plan_to_json(const TransportPlan& plan);
json pairs_to_json(const std::vector<UtterancePair>& pairs);
json predictions_to_json(const PairPredictionSet& preds);
json losses_to_json(const LossReport& losses);
json eval_to_json(const EvalReport& report);

// Reads the "conversations" array written by the predict / pipeline commands.
std::vector<ConversationPrediction> parse_predictions(const json& doc);

json read_json_file(const std::filesystem::path& path);

// Pretty-printed with 2-space indent and a trailing newline. Doubles use the
// shortest representation that round-trips exactly.
std::string dump_json(const json& doc);

}  // namespace ecot
