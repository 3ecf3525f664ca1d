#pragma once

#include <map>
#include <string>
#include <vector>

#include "ecot/types.hpp"

namespace ecot {

struct PairCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  PairCounts& operator+=(const PairCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Any zero denominator yields 0 for that score.
PrfScores prf_from_counts(const PairCounts& c);

struct CauseCountBucket {
  long emotions = 0;  // emotions with exactly k gold causes
  long recalled = 0;  // of those, emotions whose k pairs were all predicted
  double recall = 0.0;
};

// What a predictor emitted for one conversation. The utterance-level flags
// may be left empty when only pair decisions are available.
struct ConversationPrediction {
  std::string conversation_id;
  std::vector<UtterancePair> decisions;
  std::vector<bool> emotion_predicted;
  std::vector<bool> cause_predicted;
};

struct EvalReport {
  PrfScores ecpec;
  PairCounts counts;
  double ee_f1 = 0.0;
  double ce_f1 = 0.0;
  std::map<int, CauseCountBucket> per_cause_count_recall;
};

// tp / fp / fn for one conversation's decisions against its gold pairs.
PairCounts count_pairs(const std::vector<UtterancePair>& decisions,
                       const std::vector<UtterancePair>& gold);

// Emotions with exactly k gold causes are recalled only when every one of
// their k gold pairs is among the decisions.
std::map<int, CauseCountBucket> per_cause_count_recall(
    const std::vector<ConversationPrediction>& predictions,
    const std::vector<ConversationRecord>& gold);

// Micro-averaged corpus evaluation. Predictions are matched to gold by
// conversation id; a missing, extra or duplicated id throws EvalInputError.
EvalReport score_pairs(const std::vector<ConversationPrediction>& predictions,
                       const std::vector<ConversationRecord>& gold);

// True when some emotion index has two or more distinct gold causes.
bool has_multi_cause_emotion(const ConversationRecord& conv);

// Keeps the conversations for which has_multi_cause_emotion holds, in order.
Corpus multi_cause_subset(const Corpus& corpus);

// Plain-text P / R / F1 table in percent, one row per entry.
std::string format_eval_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace ecot
