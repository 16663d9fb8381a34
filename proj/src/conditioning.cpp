#include "linrel/conditioning.hpp"

#include "linrel/types.hpp"

namespace linrel {

namespace {
thread_local ConditioningScope* current_scope = nullptr;
}  // namespace

ConditioningScope::ConditioningScope() : parent_(current_scope) { current_scope = this; }

ConditioningScope::~ConditioningScope() { current_scope = parent_; }

void note_rank_decision(double relative_value, double cut) {
  if (current_scope == nullptr) {
    return;
  }
  const double low = cut * 0.1;
  if (relative_value > low && relative_value < tol::kAmbiguousHigh) {
    for (auto* s = current_scope; s != nullptr; s = s->parent_) {
      ++s->stats_.ambiguous_ranks;
    }
  }
}

void note_containment(double gap) {
  if (current_scope == nullptr) {
    return;
  }
  if (gap > tol::kAmbiguousLow && gap < tol::kAmbiguousHigh) {
    for (auto* s = current_scope; s != nullptr; s = s->parent_) {
      ++s->stats_.ambiguous_containments;
    }
  }
}

}  // namespace linrel
