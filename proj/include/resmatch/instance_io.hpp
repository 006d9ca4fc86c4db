#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "resmatch/choice.hpp"
#include "resmatch/cop.hpp"
#include "resmatch/model.hpp"

namespace resmatch {

// Unreadable or malformed instance text.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance document (JSON):
//
//   {
//     "horizontal_types": [{"id": "women", "label": "Women"}],
//     "institutions": [{"id": "s", "capacity": 2,
//                       "vertical_reservations": {"SC": 1, "ST": 0, "OBC": 0},
//                       "scores": {"i": "90", "j": "80"}}],
//     "individuals": [{"id": "i", "category": "SC", "declared": "SC",
//                      "horizontal_types": ["women"],
//                      "preferences": [{"institution": "s", "category": "SC"}]}],
//     "reservations": [{"institution": "s", "category": "GC",
//                       "type": "women", "count": 1}]
//   }
//
// Scores are decimal strings (plain numbers are accepted on input). "category"
// and "declared" may be omitted or null for GC-only individuals.
Market parse_market(const std::string& text);
Market load_market(const std::filesystem::path& path);
std::string serialize_market(const Market& market);

std::string serialize_matching(const Market& market, std::span<const Contract> matching);
std::string serialize_trace(const Market& market, ChoicePolicy policy, const CopResult& result);

// Shortest decimal text that reads back to the same double.
std::string format_score(double score);

}  // namespace resmatch
