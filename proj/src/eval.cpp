#include "ecot/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "ecot/error.hpp"

namespace ecot {

namespace {

double safe_ratio(long num, long den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Matches predictions to gold by id, in gold order.
std::vector<const ConversationPrediction*> align_predictions(
    const std::vector<ConversationPrediction>& predictions,
    const std::vector<ConversationRecord>& gold) {
  std::unordered_map<std::string, const ConversationPrediction*> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.conversation_id, &p).second)
      throw EvalInputError("duplicate prediction for conversation '" + p.conversation_id + "'");
  }
  std::vector<const ConversationPrediction*> out;
  out.reserve(gold.size());
  for (const auto& g : gold) {
    auto it = by_id.find(g.conversation_id);
    if (it == by_id.end())
      throw EvalInputError("no prediction for conversation '" + g.conversation_id + "'");
    out.push_back(it->second);
    by_id.erase(it);
  }
  if (!by_id.empty())
    throw EvalInputError("prediction for unknown conversation '" + by_id.begin()->first + "'");
  return out;
}

void count_flags(const std::vector<bool>& predicted, const ConversationRecord& conv,
                 bool Utterance::*label, PairCounts& counts) {
  if (predicted.empty()) return;
  if (predicted.size() != conv.size())
    throw EvalInputError("conversation '" + conv.conversation_id +
                         "': utterance prediction count does not match utterances");
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool gold = conv.utterances[i].*label;
    if (predicted[i] && gold) ++counts.tp;
    else if (predicted[i]) ++counts.fp;
    else if (gold) ++counts.fn;
  }
}

}  // namespace

PrfScores prf_from_counts(const PairCounts& c) {
  PrfScores s;
  s.precision = safe_ratio(c.tp, c.tp + c.fp);
  s.recall = safe_ratio(c.tp, c.tp + c.fn);
  const double denom = s.precision + s.recall;
  s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
  return s;
}

PairCounts count_pairs(const std::vector<UtterancePair>& decisions,
                       const std::vector<UtterancePair>& gold) {
  const std::set<UtterancePair> predicted(decisions.begin(), decisions.end());
  const std::set<UtterancePair> truth(gold.begin(), gold.end());
  PairCounts c;
  for (const auto& p : predicted) (truth.contains(p) ? c.tp : c.fp) += 1;
  for (const auto& p : truth)
    if (!predicted.contains(p)) ++c.fn;
  return c;
}

std::map<int, CauseCountBucket> per_cause_count_recall(
    const std::vector<ConversationPrediction>& predictions,
    const std::vector<ConversationRecord>& gold) {
  const auto matched = align_predictions(predictions, gold);
  std::map<int, CauseCountBucket> buckets;
  for (std::size_t c = 0; c < gold.size(); ++c) {
    const std::set<UtterancePair> predicted(matched[c]->decisions.begin(),
                                            matched[c]->decisions.end());
    std::map<int, std::vector<UtterancePair>> by_emotion;
    for (const auto& p : gold[c].gold_pairs) by_emotion[p.emotion].push_back(p);
    for (const auto& [emotion, pairs] : by_emotion) {
      auto& bucket = buckets[static_cast<int>(pairs.size())];
      ++bucket.emotions;
      if (std::all_of(pairs.begin(), pairs.end(),
                      [&](const UtterancePair& p) { return predicted.contains(p); }))
        ++bucket.recalled;
    }
  }
  for (auto& [k, bucket] : buckets) bucket.recall = safe_ratio(bucket.recalled, bucket.emotions);
  return buckets;
}

EvalReport score_pairs(const std::vector<ConversationPrediction>& predictions,
                       const std::vector<ConversationRecord>& gold) {
  const auto matched = align_predictions(predictions, gold);
  EvalReport report;
  PairCounts ee, ce;
  for (std::size_t c = 0; c < gold.size(); ++c) {
    report.counts += count_pairs(matched[c]->decisions, gold[c].gold_pairs);
    count_flags(matched[c]->emotion_predicted, gold[c], &Utterance::emotion_label, ee);
    count_flags(matched[c]->cause_predicted, gold[c], &Utterance::cause_label, ce);
  }
  report.ecpec = prf_from_counts(report.counts);
  report.ee_f1 = prf_from_counts(ee).f1;
  report.ce_f1 = prf_from_counts(ce).f1;
  report.per_cause_count_recall = per_cause_count_recall(predictions, gold);
  return report;
}

bool has_multi_cause_emotion(const ConversationRecord& conv) {
  std::map<int, std::set<int>> causes;
  for (const auto& p : conv.gold_pairs) {
    if (causes[p.emotion].insert(p.cause).second && causes[p.emotion].size() >= 2) return true;
  }
  return false;
}

Corpus multi_cause_subset(const Corpus& corpus) {
  Corpus out;
  out.d_u = corpus.d_u;
  std::copy_if(corpus.conversations.begin(), corpus.conversations.end(),
               std::back_inserter(out.conversations), has_multi_cause_emotion);
  return out;
}

std::string format_eval_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::size_t width = 6;
  for (const auto& [name, _] : rows) width = std::max(width, name.size());
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %7s %7s %7s\n", static_cast<int>(width), "Method", "P", "R",
                "F1");
  out += line;
  out += std::string(width + 24, '-') + "\n";
  for (const auto& [name, r] : rows) {
    std::snprintf(line, sizeof line, "%-*s %7.2f %7.2f %7.2f\n", static_cast<int>(width),
                  name.c_str(), 100.0 * r.ecpec.precision, 100.0 * r.ecpec.recall,
                  100.0 * r.ecpec.f1);
    out += line;
  }
  return out;
}

}  // namespace ecot
