#include "altgdmin/fed/message_log.hpp"

#include "altgdmin/core/io.hpp"

namespace altgdmin {

std::string_view to_string(MessageDirection d) {
  return d == MessageDirection::kUp ? "up" : "down";
}

std::string_view to_string(PayloadKind k) {
  switch (k) {
    case PayloadKind::kPartialGradient:
      return "partial-gradient";
    case PayloadKind::kBasisBroadcast:
      return "basis-broadcast";
    case PayloadKind::kPowerIterate:
      return "power-iterate";
    case PayloadKind::kScalarStat:
      return "scalar-stat";
  }
  return "unknown";
}

std::uint64_t MessageLog::total_bytes() const {
  std::uint64_t total = 0;
  for (const Message& m : messages_) total += m.bytes;
  return total;
}

std::uint64_t MessageLog::total_elements() const {
  std::uint64_t total = 0;
  for (const Message& m : messages_) total += m.elements;
  return total;
}

std::uint64_t MessageLog::upload_elements(int node) const {
  std::uint64_t total = 0;
  for (const Message& m : messages_)
    if (m.direction == MessageDirection::kUp && m.node == node)
      total += m.elements;
  return total;
}

std::uint64_t MessageLog::upload_bytes(int node) const {
  return 8 * upload_elements(node);
}

std::string MessageLog::to_csv() const {
  CsvWriter csv("round,direction,node,kind,elements,bytes");
  for (const Message& m : messages_) {
    csv.add_cell(static_cast<std::int64_t>(m.round));
    csv.add_cell(std::string(to_string(m.direction)));
    csv.add_cell(static_cast<std::int64_t>(m.node));
    csv.add_cell(std::string(to_string(m.kind)));
    csv.add_cell(m.elements);
    csv.add_cell(m.bytes);
    csv.end_row();
  }
  return csv.str();
}

}  // namespace altgdmin
