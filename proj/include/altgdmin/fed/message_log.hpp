#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace altgdmin {

enum class MessageDirection { kUp, kDown };

/// Only factor-level summaries ever travel; raw measurements and B columns
/// have no payload kind by design.
enum class PayloadKind {
  kPartialGradient,
  kBasisBroadcast,
  kPowerIterate,
  kScalarStat,
};

std::string_view to_string(MessageDirection d);
std::string_view to_string(PayloadKind k);

struct Message {
  int round = 0;
  MessageDirection direction = MessageDirection::kUp;
  int node = 0;
  PayloadKind kind = PayloadKind::kPartialGradient;
  std::uint64_t elements = 0;
  std::uint64_t bytes = 0;  // always 8 * elements (f64 payloads)
};

/// Append-only message ledger with derived byte counts.
class MessageLog {
 public:
  void record(int round, MessageDirection direction, int node,
              PayloadKind kind, std::uint64_t elements) {
    messages_.push_back(
        {round, direction, node, kind, elements, 8 * elements});
  }

  const std::vector<Message>& messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }

  std::uint64_t total_bytes() const;
  std::uint64_t total_elements() const;

  /// Sum of uploaded elements for one node (direction == up).
  std::uint64_t upload_elements(int node) const;
  std::uint64_t upload_bytes(int node) const;

  /// CSV with header `round,direction,node,kind,elements,bytes`.
  std::string to_csv() const;

 private:
  std::vector<Message> messages_;
};

}  // namespace altgdmin
