#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ecot {

// 1-based utterance indices, matching the corpus file.
struct UtterancePair {
  int emotion = 0;
  int cause = 0;

  friend auto operator<=>(const UtterancePair&, const UtterancePair&) = default;
};

struct Utterance {
  int index = 0;
  int speaker_id = 0;
  std::vector<double> embedding;
  bool emotion_label = false;
  bool cause_label = false;
  std::optional<std::string> text;
};

struct ConversationRecord {
  std::string conversation_id;
  std::vector<Utterance> utterances;
  std::vector<UtterancePair> gold_pairs;  // sorted, unique

  std::size_t size() const { return utterances.size(); }
  std::vector<int> speakers() const;
};

struct Corpus {
  std::size_t d_u = 0;
  std::vector<ConversationRecord> conversations;
};

// Checks the record invariants (contiguous 1..N indices, embedding width
// d_u, gold pairs in range and unique). Throws CorpusFormatError naming the
// conversation and field.
void validate_conversation(const ConversationRecord& conv, std::size_t d_u);

}  // namespace ecot
