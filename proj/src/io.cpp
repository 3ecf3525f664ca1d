#include "ecot/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ecot/error.hpp"

namespace ecot {

namespace {

[[noreturn]] void corpus_error(const std::string& where, const std::string& what) {
  throw CorpusFormatError(where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) corpus_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) corpus_error(where, std::string("missing field '") + key + "'");
  return *it;
}

long long as_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) corpus_error(where, "expected an integer");
  return j.get<long long>();
}

bool as_flag(const json& j, const std::string& where) {
  if (j.is_boolean()) return j.get<bool>();
  const long long v = as_integer(j, where);
  if (v != 0 && v != 1) corpus_error(where, "expected 0 or 1");
  return v == 1;
}

std::vector<double> as_reals(const json& j, const std::string& where) {
  if (!j.is_array()) corpus_error(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) corpus_error(where, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Utterance parse_utterance(const json& j, const std::string& where) {
  Utterance u;
  u.index = static_cast<int>(as_integer(field(j, "index", where), where + ".index"));
  u.speaker_id = static_cast<int>(as_integer(field(j, "speaker", where), where + ".speaker"));
  u.embedding = as_reals(field(j, "embedding", where), where + ".embedding");
  u.emotion_label = as_flag(field(j, "emotion", where), where + ".emotion");
  u.cause_label = as_flag(field(j, "cause", where), where + ".cause");
  if (auto it = j.find("text"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) corpus_error(where + ".text", "expected a string");
    u.text = it->get<std::string>();
  }
  return u;
}

ConversationRecord parse_conversation(const json& j, std::size_t position) {
  ConversationRecord conv;
  const std::string at = "conversations[" + std::to_string(position) + "]";
  const json& id = field(j, "id", at);
  if (!id.is_string()) corpus_error(at + ".id", "expected a string");
  conv.conversation_id = id.get<std::string>();
  const std::string where = "conversation '" + conv.conversation_id + "'";

  const json& utts = field(j, "utterances", where);
  if (!utts.is_array()) corpus_error(where + ": utterances", "expected an array");
  for (std::size_t k = 0; k < utts.size(); ++k)
    conv.utterances.push_back(parse_utterance(utts[k], where + ": utterances[" + std::to_string(k) + "]"));

  const json& pairs = field(j, "gold_pairs", where);
  if (!pairs.is_array()) corpus_error(where + ": gold_pairs", "expected an array");
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string pw = where + ": gold_pairs[" + std::to_string(k) + "]";
    const json& p = pairs[k];
    if (!p.is_array() || p.size() != 2) corpus_error(pw, "expected [emotion, cause]");
    conv.gold_pairs.push_back({static_cast<int>(as_integer(p[0], pw)),
                               static_cast<int>(as_integer(p[1], pw))});
  }
  std::sort(conv.gold_pairs.begin(), conv.gold_pairs.end());
  return conv;
}

DenseMatrix parse_tensor(const json& j, const std::string& name) {
  const std::string where = "params block '" + name + "'";
  const json& shape = field(j, "shape", where);
  if (!shape.is_array() || shape.empty() || shape.size() > 2)
    corpus_error(where + ".shape", "expected [rows, cols] or [n]");
  const long long rows = shape.size() == 2 ? as_integer(shape[0], where + ".shape") : 1;
  const long long cols = as_integer(shape.back(), where + ".shape");
  if (rows <= 0 || cols <= 0) corpus_error(where + ".shape", "dimensions must be positive");
  std::vector<double> data = as_reals(field(j, "data", where), where + ".data");
  if (data.size() != static_cast<std::size_t>(rows * cols))
    corpus_error(where + ".data", "has " + std::to_string(data.size()) + " values for shape " +
                                      std::to_string(rows) + "x" + std::to_string(cols));
  if (!std::all_of(data.begin(), data.end(), [](double x) { return std::isfinite(x); }))
    corpus_error(where + ".data", "non-finite value");
  return DenseMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(data));
}

json tensor_to_json(const DenseMatrix& m) {
  json shape = m.rows() == 1 ? json::array({m.cols()}) : json::array({m.rows(), m.cols()});
  return {{"shape", std::move(shape)}, {"data", m.entries()}};
}

json probs_to_json(const std::vector<BinaryProbs>& probs) {
  json out = json::array();
  for (const auto& p : probs) out.push_back({p[0], p[1]});
  return out;
}

}  // namespace

Corpus parse_corpus(const json& doc) {
  Corpus corpus;
  const long long d_u = as_integer(field(doc, "d_u", "corpus"), "corpus.d_u");
  if (d_u <= 0) corpus_error("corpus.d_u", "must be positive");
  corpus.d_u = static_cast<std::size_t>(d_u);
  const json& convs = field(doc, "conversations", "corpus");
  if (!convs.is_array()) corpus_error("corpus.conversations", "expected an array");
  for (std::size_t k = 0; k < convs.size(); ++k) {
    corpus.conversations.push_back(parse_conversation(convs[k], k));
    validate_conversation(corpus.conversations.back(), corpus.d_u);
  }
  return corpus;
}

json corpus_to_json(const Corpus& corpus) {
  json convs = json::array();
  for (const auto& c : corpus.conversations) {
    json utts = json::array();
    for (const auto& u : c.utterances) {
      json ju = {{"index", u.index},
                 {"speaker", u.speaker_id},
                 {"embedding", u.embedding},
                 {"emotion", u.emotion_label ? 1 : 0},
                 {"cause", u.cause_label ? 1 : 0}};
      if (u.text) ju["text"] = *u.text;
      utts.push_back(std::move(ju));
    }
    convs.push_back({{"id", c.conversation_id},
                     {"utterances", std::move(utts)},
                     {"gold_pairs", pairs_to_json(c.gold_pairs)}});
  }
  return {{"d_u", corpus.d_u}, {"conversations", std::move(convs)}};
}

Corpus load_corpus(const std::filesystem::path& path) { return parse_corpus(read_json_file(path)); }

ParamsFile parse_params(const json& doc) {
  if (!doc.is_object()) corpus_error("params", "expected an object");
  ParamsFile out;
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0))
      corpus_error("params.seed", "expected a nonnegative integer");
    out.seed = it->get<std::uint64_t>();
  }
  if (auto it = doc.find("d_s"); it != doc.end()) {
    const long long d_s = as_integer(*it, "params.d_s");
    if (d_s <= 0) corpus_error("params.d_s", "must be positive");
    out.d_s = static_cast<std::size_t>(d_s);
  }
  if (auto it = doc.find("tensors"); it != doc.end()) {
    if (!it->is_object()) corpus_error("params.tensors", "expected an object");
    for (const auto& [name, block] : it->items()) out.tensors.emplace(name, parse_tensor(block, name));
  }
  return out;
}

json params_to_json(const ModelParams& params) {
  json tensors = json::object();
  for (const auto& [name, block] : params.blocks()) tensors[name] = tensor_to_json(block);
  return {{"seed", params.seed()}, {"d_s", params.d_s()}, {"tensors", std::move(tensors)}};
}

ParamsFile load_params_file(const std::filesystem::path& path) {
  return parse_params(read_json_file(path));
}

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

DenseMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) corpus_error("matrix", "expected an array of rows");
  if (j.empty()) return DenseMatrix();
  const std::size_t cols = j[0].size();
  std::vector<double> data;
  for (const auto& row : j) {
    std::vector<double> r = as_reals(row, "matrix row");
    if (r.size() != cols) corpus_error("matrix", "ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return DenseMatrix(j.size(), cols, std::move(data));
}

json graph_to_json(const std::string& id, const ConversationGraph& graph) {
  json edges = json::array();
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = 0; j < graph.size(); ++j) {
      const EdgeTypeSet types = graph.types(i, j);
      if (types.empty()) continue;
      json names = json::array();
      for (EdgeType t : kAllEdgeTypes)
        if (types.contains(t)) names.push_back(edge_type_name(t));
      edges.push_back({i + 1, j + 1, std::move(names)});
    }
  }
  return {{"id", id},
          {"n", graph.size()},
          {"adjacency", matrix_to_json(graph.adjacency)},
          {"edge_types", std::move(edges)}};
}

json encoder_to_json(const EncoderOutput& out) {
  return {{"H", matrix_to_json(out.hidden)}, {"A_induced", matrix_to_json(out.induced_adjacency)}};
}

json plan_to_json(const TransportPlan& plan) {
  return {{"T", matrix_to_json(plan.plan)},
          {"T_tilde", matrix_to_json(plan.sharpened)},
          {"objective_trace", plan.objective_trace},
          {"iterations_used", plan.iterations_used}};
}

json pairs_to_json(const std::vector<UtterancePair>& pairs) {
  json out = json::array();
  for (const auto& p : pairs) out.push_back({p.emotion, p.cause});
  return out;
}

json predictions_to_json(const PairPredictionSet& preds) {
  return {{"s", matrix_to_json(preds.local_scores)},
          {"y_hat", matrix_to_json(preds.fused)},
          {"decisions", pairs_to_json(preds.decisions)},
          {"ee_probs", probs_to_json(preds.ee_probs)},
          {"ce_probs", probs_to_json(preds.ce_probs)}};
}

json losses_to_json(const LossReport& l) {
  return {{"l_pair", l.l_pair}, {"l_ot", l.l_ot},         {"l_ee", l.l_ee},
          {"l_ce", l.l_ce},     {"l_ecpec", l.l_ecpec},   {"l_total", l.l_total}};
}

json eval_to_json(const EvalReport& r) {
  json per_k = json::object();
  for (const auto& [k, b] : r.per_cause_count_recall)
    per_k[std::to_string(k)] = {{"emotions", b.emotions}, {"recalled", b.recalled}, {"recall", b.recall}};
  return {{"ecpec", {{"p", r.ecpec.precision}, {"r", r.ecpec.recall}, {"f1", r.ecpec.f1}}},
          {"counts", {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"fn", r.counts.fn}}},
          {"ee_f1", r.ee_f1},
          {"ce_f1", r.ce_f1},
          {"per_cause_count_recall", std::move(per_k)}};
}

std::vector<ConversationPrediction> parse_predictions(const json& doc) {
  const json& convs = field(doc, "conversations", "predictions");
  if (!convs.is_array()) corpus_error("predictions.conversations", "expected an array");
  std::vector<ConversationPrediction> out;
  for (std::size_t k = 0; k < convs.size(); ++k) {
    const std::string at = "predictions.conversations[" + std::to_string(k) + "]";
    const json& c = convs[k];
    ConversationPrediction p;
    const json& id = field(c, "id", at);
    if (!id.is_string()) corpus_error(at + ".id", "expected a string");
    p.conversation_id = id.get<std::string>();
    const std::string where = "predictions for '" + p.conversation_id + "'";
    const json& preds = field(c, "predictions", where);
    for (const auto& d : field(preds, "decisions", where)) {
      if (!d.is_array() || d.size() != 2) corpus_error(where + ".decisions", "expected [emotion, cause]");
      p.decisions.push_back({static_cast<int>(as_integer(d[0], where + ".decisions")),
                             static_cast<int>(as_integer(d[1], where + ".decisions"))});
    }
    const auto flags = [&](const char* key, std::vector<bool>& dst) {
      if (auto it = preds.find(key); it != preds.end())
        for (const auto& pr : *it) {
          const std::vector<double> v = as_reals(pr, where + "." + key);
          if (v.size() != 2) corpus_error(where + "." + key, "expected [p_negative, p_positive]");
          dst.push_back(is_positive({v[0], v[1]}));
        }
    };
    flags("ee_probs", p.emotion_predicted);
    flags("ce_probs", p.cause_predicted);
    out.push_back(std::move(p));
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusFormatError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw CorpusFormatError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace ecot
