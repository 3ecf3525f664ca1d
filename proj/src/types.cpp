#include "ecot/types.hpp"

#include <algorithm>
#include <cmath>

#include "ecot/error.hpp"

namespace ecot {

std::vector<int> ConversationRecord::speakers() const {
  std::vector<int> out;
  out.reserve(utterances.size());
  for (const auto& u : utterances) out.push_back(u.speaker_id);
  return out;
}

void validate_conversation(const ConversationRecord& conv, std::size_t d_u) {
  const auto fail = [&](const std::string& field, const std::string& what) {
    throw CorpusFormatError("conversation '" + conv.conversation_id + "': " + field + ": " + what);
  };
  if (conv.utterances.empty()) fail("utterances", "conversation has no utterances");
  for (std::size_t k = 0; k < conv.utterances.size(); ++k) {
    const auto& u = conv.utterances[k];
    const std::string where = "utterances[" + std::to_string(k) + "]";
    if (u.index != static_cast<int>(k) + 1)
      fail(where + ".index", "expected " + std::to_string(k + 1) + ", got " + std::to_string(u.index));
    if (u.embedding.size() != d_u)
      fail(where + ".embedding", "length " + std::to_string(u.embedding.size()) +
                                     " does not match d_u=" + std::to_string(d_u));
    if (!std::all_of(u.embedding.begin(), u.embedding.end(), [](double x) { return std::isfinite(x); }))
      fail(where + ".embedding", "non-finite value");
  }
  const int n = static_cast<int>(conv.utterances.size());
  for (std::size_t k = 0; k < conv.gold_pairs.size(); ++k) {
    const auto& p = conv.gold_pairs[k];
    if (p.emotion < 1 || p.emotion > n || p.cause < 1 || p.cause > n)
      fail("gold_pairs[" + std::to_string(k) + "]", "index out of range 1.." + std::to_string(n));
    if (k > 0 && !(conv.gold_pairs[k - 1] < p))
      fail("gold_pairs[" + std::to_string(k) + "]", "pairs must be unique");
  }
}

}  // namespace ecot
