#include "fpnav/dataset/instruction.hpp"

#include <algorithm>
#include <regex>
#include <vector>

#include "fpnav/dataset/trace.hpp"
#include "fpnav/error.hpp"

namespace fpnav::dataset {

namespace {

constexpr std::array<InstructionTemplate, kTemplateCount> kTemplates = {{
    {"You are in {start_type} {start_id}. Go to {goal_type} {goal_id} and stop {stop}.",
     "You are in {start_type} {start_id}. Go to {goal_type} {goal_id}."},
    {"Starting from {start_type} {start_id}, navigate to {goal_type} {goal_id} and stop {stop}.",
     "Starting from {start_type} {start_id}, navigate to {goal_type} {goal_id}."},
    {"Leave {start_type} {start_id} and head to {goal_type} {goal_id}, then stop {stop}.",
     "Leave {start_type} {start_id} and head to {goal_type} {goal_id}."},
    {"From {start_type} {start_id}, walk to {goal_type} {goal_id} and wait {stop}.",
     "From {start_type} {start_id}, walk to {goal_type} {goal_id}."},
    {"Begin in {start_type} {start_id}. Your destination is {goal_type} {goal_id}; stop {stop}.",
     "Begin in {start_type} {start_id}. Your destination is {goal_type} {goal_id}."},
    {"Exit {start_type} {start_id} and find {goal_type} {goal_id}. Stop {stop}.",
     "Exit {start_type} {start_id} and find {goal_type} {goal_id}."},
    {"You start in {start_type} {start_id}. Reach {goal_type} {goal_id} and halt {stop}.",
     "You start in {start_type} {start_id}. Reach {goal_type} {goal_id}."},
    {"Move from {start_type} {start_id} to {goal_type} {goal_id} and come to a stop {stop}.",
     "Move from {start_type} {start_id} to {goal_type} {goal_id}."},
    {"Go from {start_type} {start_id} into {goal_type} {goal_id}, stopping {stop}.",
     "Go from {start_type} {start_id} into {goal_type} {goal_id}."},
    {"Your current location is {start_type} {start_id}. Proceed to {goal_type} {goal_id} and stop {stop}.",
     "Your current location is {start_type} {start_id}. Proceed to {goal_type} {goal_id}."},
}};

const std::regex kTypePattern("[A-Za-z]+( [A-Za-z]+)*");

enum class Slot { start_type, start_id, goal_type, goal_id, stop };

struct Compiled {
  int template_id;
  bool with_stop;
  std::regex pattern;
  std::vector<Slot> slots;
};

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::string_view(".^$|()[]{}*+?\\").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

Compiled compile(int id, bool with_stop, std::string_view tmpl) {
  static const std::pair<std::string_view, Slot> kSlots[] = {
      {"{start_type}", Slot::start_type}, {"{start_id}", Slot::start_id}, {"{goal_type}", Slot::goal_type},
      {"{goal_id}", Slot::goal_id},       {"{stop}", Slot::stop},
  };
  std::string re = "^";
  std::vector<Slot> slots;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      re += escape(tmpl.substr(pos));
      break;
    }
    re += escape(tmpl.substr(pos, open - pos));
    const std::size_t close = tmpl.find('}', open);
    const std::string_view name = tmpl.substr(open, close - open + 1);
    for (const auto& [key, slot] : kSlots) {
      if (key != name) continue;
      slots.push_back(slot);
      switch (slot) {
        case Slot::start_type:
        case Slot::goal_type: re += "([A-Za-z]+(?: [A-Za-z]+)*)"; break;
        case Slot::start_id:
        case Slot::goal_id: re += "(-?[0-9]+)"; break;
        case Slot::stop: re += "(.+)"; break;
      }
    }
    pos = close + 1;
  }
  re += "$";
  return {id, with_stop, std::regex(re), std::move(slots)};
}

// Stop-clause variants are tried first so that text with a stop clause
// never falls through to a shorter variant.
const std::vector<Compiled>& compiled_templates() {
  static const std::vector<Compiled> kCompiled = [] {
    std::vector<Compiled> out;
    for (int i = 0; i < kTemplateCount; ++i) out.push_back(compile(i, true, kTemplates[i].with_stop));
    for (int i = 0; i < kTemplateCount; ++i) out.push_back(compile(i, false, kTemplates[i].without_stop));
    return out;
  }();
  return kCompiled;
}

std::string fill(std::string_view tmpl, const Instruction& in) {
  std::string out(tmpl);
  auto replace = [&](std::string_view key, const std::string& value) {
    const std::size_t at = out.find(key);
    if (at != std::string::npos) out.replace(at, key.size(), value);
  };
  replace("{start_type}", in.start_type);
  replace("{start_id}", std::to_string(in.start_id));
  replace("{goal_type}", in.goal_type);
  replace("{goal_id}", std::to_string(in.goal_id));
  replace("{stop}", in.stop_condition);
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string strip_placeholders(std::string_view tmpl) {
  std::string out;
  bool in_slot = false;
  for (char c : tmpl) {
    if (c == '{') in_slot = true;
    if (!in_slot) out += c;
    if (c == '}') in_slot = false;
  }
  return out;
}

}  // namespace

const std::array<InstructionTemplate, kTemplateCount>& instruction_templates() { return kTemplates; }

Instruction make_instruction(int template_id, std::string start_type, int start_id, std::string goal_type,
                             int goal_id, std::string stop_condition) {
  if (template_id < 0 || template_id >= kTemplateCount) {
    throw SchemaError("unknown instruction template " + std::to_string(template_id));
  }
  for (const std::string* t : {&start_type, &goal_type}) {
    if (!std::regex_match(*t, kTypePattern)) {
      throw SchemaError("region type \"" + *t + "\" must be letters separated by single spaces");
    }
  }
  if (!stop_condition.empty()) {
    if (stop_condition.front() == ' ' || stop_condition.back() == ' ' || stop_condition.back() == '.' ||
        stop_condition.find('\n') != std::string::npos) {
      throw SchemaError("stop condition must be a single trimmed clause without a final period");
    }
  }
  Instruction in{template_id, std::move(start_type), start_id, std::move(goal_type), goal_id,
                 std::move(stop_condition), {}};
  const auto& t = kTemplates[static_cast<std::size_t>(template_id)];
  in.rendered = fill(in.stop_condition.empty() ? t.without_stop : t.with_stop, in);
  bool survives = false;
  try {
    survives = parse_instruction(in.rendered) == in;
  } catch (const ParseError&) {
  }
  if (!survives) throw SchemaError("instruction \"" + in.rendered + "\" does not parse back to its fields");
  return in;
}

Instruction gen_instruction(const RegionTrace& trace, std::string stop_condition, int template_id, int goal_id,
                            std::string goal_type) {
  if (trace.compressed.empty()) throw SchemaError("cannot build an instruction from an empty region trace");
  const TraceEntry& start = trace.compressed.front();
  return make_instruction(template_id, start.region_type, start.region_id, std::move(goal_type), goal_id,
                          std::move(stop_condition));
}

Instruction parse_instruction(std::string_view text) {
  const std::string s(text);
  std::smatch m;
  for (const Compiled& c : compiled_templates()) {
    if (!std::regex_match(s, m, c.pattern)) continue;
    Instruction in;
    in.template_id = c.template_id;
    for (std::size_t k = 0; k < c.slots.size(); ++k) {
      const std::string v = m[k + 1].str();
      switch (c.slots[k]) {
        case Slot::start_type: in.start_type = v; break;
        case Slot::start_id: in.start_id = std::stoi(v); break;
        case Slot::goal_type: in.goal_type = v; break;
        case Slot::goal_id: in.goal_id = std::stoi(v); break;
        case Slot::stop: in.stop_condition = v; break;
      }
    }
    in.rendered = s;
    return in;
  }

  int nearest = 0;
  std::size_t best = static_cast<std::size_t>(-1);
  for (int i = 0; i < kTemplateCount; ++i) {
    for (std::string_view t : {kTemplates[i].with_stop, kTemplates[i].without_stop}) {
      const std::size_t d = edit_distance(s, strip_placeholders(t));
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
  }
  throw ParseError("instruction matches no template; nearest is template " + std::to_string(nearest) + ": \"" +
                   std::string(kTemplates[nearest].with_stop) + "\"");
}

}  // namespace fpnav::dataset
