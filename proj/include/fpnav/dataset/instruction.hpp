#pragma once

#include <array>
#include <string>
#include <string_view>

namespace fpnav::dataset {

struct TraceEntry;
struct RegionTrace;

inline constexpr int kTemplateCount = 10;

struct Instruction {
  int template_id = 0;
  std::string start_type;
  int start_id = 0;
  std::string goal_type;
  int goal_id = 0;
  std::string stop_condition;  // empty selects the variant without a stop clause
  std::string rendered;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct InstructionTemplate {
  std::string_view with_stop;
  std::string_view without_stop;
};

// Placeholders: {start_type} {start_id} {goal_type} {goal_id} {stop}.
const std::array<InstructionTemplate, kTemplateCount>& instruction_templates();

// Instantiates a template. Throws SchemaError for an unknown template id,
// a region type containing digits or punctuation, or a stop condition that
// would not survive parsing.
Instruction make_instruction(int template_id, std::string start_type, int start_id, std::string goal_type,
                             int goal_id, std::string stop_condition);

// Start region is the first compressed trace entry. Throws SchemaError on
// an empty trace.
Instruction gen_instruction(const RegionTrace& trace, std::string stop_condition, int template_id, int goal_id,
                            std::string goal_type);

// Inverse of make_instruction. Throws ParseError naming the nearest
// template when the text matches none.
Instruction parse_instruction(std::string_view text);

}  // namespace fpnav::dataset
