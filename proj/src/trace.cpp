#include "stgkit/trace.hpp"

namespace stgkit {

std::size_t DerivationTrace::operation_count() const {
  std::size_t n = 0;
  for (const TraceStep& step : steps) {
    if (!std::holds_alternative<InstantiateStep>(step)) ++n;
  }
  return n;
}

SyntaxTree replay_trace(const DerivationTrace& trace, const TraceOps& ops) {
  if (trace.steps.empty()) throw Error(ErrorCode::InvalidTrace, "empty trace");
  std::vector<SyntaxTree> results;
  results.reserve(trace.steps.size());
  auto earlier = [&](std::size_t id) -> const SyntaxTree& {
    if (id >= results.size()) {
      throw Error(ErrorCode::InvalidTrace, "step " + std::to_string(results.size()) +
                                               " refers to step " + std::to_string(id));
    }
    return results[id];
  };
  for (const TraceStep& step : trace.steps) {
    if (const auto* inst = std::get_if<InstantiateStep>(&step)) {
      results.push_back(ops.instantiate(*inst));
    } else if (const auto* sub = std::get_if<SubstituteStep>(&step)) {
      results.push_back(ops.substitute(earlier(sub->host), *sub, earlier(sub->filler)));
    } else {
      const auto& adj = std::get<AdjoinStep>(step);
      if (!ops.adjoin) throw Error(ErrorCode::InvalidTrace, "adjoining is not available here");
      results.push_back(ops.adjoin(earlier(adj.host), adj));
    }
  }
  return results.back();
}

std::vector<std::string> format_trace(const DerivationTrace& trace) {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    std::string line = std::to_string(i) + " ";
    const TraceStep& step = trace.steps[i];
    if (const auto* inst = std::get_if<InstantiateStep>(&step)) {
      line += "instantiate " + inst->tree;
      if (!inst->repetitions.empty()) {
        line += " reps=[";
        for (std::size_t k = 0; k < inst->repetitions.size(); ++k) {
          if (k) line += ',';
          line += std::to_string(inst->repetitions[k]);
        }
        line += ']';
      }
    } else if (const auto* sub = std::get_if<SubstituteStep>(&step)) {
      line += "substitute host=" + std::to_string(sub->host) + " at=" + sub->address.to_string() +
              " filler=" + std::to_string(sub->filler);
      if (sub->path_labels) {
        line += " path={";
        bool first = true;
        for (const std::string& label : *sub->path_labels) {
          if (!first) line += ',';
          line += label;
          first = false;
        }
        line += '}';
      }
    } else {
      const auto& adj = std::get<AdjoinStep>(step);
      line += "adjoin host=" + std::to_string(adj.host) + " at=" + adj.address.to_string() + " aux=" + adj.aux;
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace stgkit
