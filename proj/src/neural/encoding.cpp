#include "pdl/neural/encoding.hpp"

#include <algorithm>

#include "pdl/candidates.hpp"

namespace pdl::neural {

std::size_t EncodingLayout::action_slot(const std::string& action) const {
  const auto it = std::lower_bound(actions.begin(), actions.end(), action);
  if (it == actions.end() || *it != action) throw EncodingError("action '" + action + "' is not in the layout");
  return static_cast<std::size_t>(it - actions.begin());
}

std::optional<std::size_t> EncodingLayout::ref_slot(std::size_t action, const LiftedRef& ref) const {
  const auto& block = blocks.at(action);
  const auto it = std::lower_bound(block.begin(), block.end(), ref);
  if (it == block.end() || *it != ref) return std::nullopt;
  return offsets[action] + static_cast<std::size_t>(it - block.begin());
}

std::uint64_t EncodingLayout::hash() const {
  std::string text = std::to_string(d) + "/" + std::to_string(n);
  for (std::size_t a = 0; a < actions.size(); ++a) {
    text += "|" + actions[a];
    for (const auto& r : blocks[a]) {
      text += " " + r.predicate;
      for (auto b : r.binding) text += "," + std::to_string(b);
    }
  }
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

EncodingLayout build_layout(const DomainSchema& schema) {
  EncodingLayout layout;
  layout.n = schema.actions().size();
  std::size_t offset = layout.n;
  for (const auto& sig : schema.actions()) {
    layout.actions.push_back(sig.name);
    auto refs = relevant_predicates(sig, schema.predicates());
    std::sort(refs.begin(), refs.end());
    layout.offsets.push_back(offset);
    offset += refs.size();
    layout.blocks.push_back(std::move(refs));
  }
  layout.d = offset;
  return layout;
}

std::size_t batch_len(std::span<const PlanTrace> traces) {
  std::size_t len = 0;
  for (const auto& t : traces) len = std::max(len, t.length());
  return len;
}

namespace {

template <typename SlotFn>
EncodedSequence encode(const PlanTrace& trace, const EncodingLayout& layout, std::size_t batch_len, SlotFn&& set_slots) {
  if (trace.length() > batch_len) {
    throw EncodingError("trace has " + std::to_string(trace.length()) + " actions, batch length is " +
                        std::to_string(batch_len));
  }
  EncodedSequence seq{Matrix(batch_len, layout.d), Matrix(batch_len, layout.n), trace.length(), {}};
  std::vector<std::size_t> slots;
  for (std::size_t t = 0; t < trace.length(); ++t) {
    slots.push_back(layout.action_slot(trace.actions()[t].action));
  }
  for (std::size_t t = 0; t < trace.length(); ++t) {
    seq.inputs.at(t, slots[t]) = 1.0;
    set_slots(t, slots[t], seq.inputs.row(t));
    if (t + 1 < trace.length()) {
      seq.targets.at(t, slots[t + 1]) = 1.0;
      seq.labels.push_back(slots[t + 1]);
    }
  }
  return seq;
}

}  // namespace

EncodedSequence encode_training(const PlanTrace& trace, const EncodingLayout& layout, std::size_t batch_len) {
  return encode(trace, layout, batch_len, [&](std::size_t t, std::size_t a, double* row) {
    const auto& ga = trace.actions()[t];
    const auto& before = trace.states()[t];
    const auto& after = trace.states()[t + 1];
    for (std::size_t i = 0; i < layout.blocks[a].size(); ++i) {
      const auto atom = ground(layout.blocks[a][i], ga);
      if (before.contains(atom) || after.contains(atom)) row[layout.offsets[a] + i] = 1.0;
    }
  });
}

EncodedSequence encode_validation(const PlanTrace& trace, const EncodingLayout& layout, const ActionModel& model,
                                  std::size_t batch_len) {
  return encode(trace, layout, batch_len, [&](std::size_t, std::size_t a, double* row) {
    const auto& entry = model.entry(layout.actions[a]);
    for (const RefSet* list : {&entry.pre(), &entry.add(), &entry.del()}) {
      for (const auto& ref : *list) {
        const auto slot = layout.ref_slot(a, ref);
        if (!slot) throw EncodingError("model ref of '" + layout.actions[a] + "' is not in the layout");
        row[*slot] = 1.0;
      }
    }
  });
}

}  // namespace pdl::neural
