#pragma once

namespace linrel {

/// Counts of numerically ambiguous decisions seen while a scope was active.
struct ConditioningStats {
  int ambiguous_ranks = 0;
  int ambiguous_containments = 0;

  [[nodiscard]] bool clean() const noexcept { return ambiguous_ranks == 0 && ambiguous_containments == 0; }
};

/// Collects rank and containment decisions that landed close to their cut
/// on the current thread. Scopes nest; a decision is recorded in every
/// enclosing scope. Not movable: it registers its own address.
class ConditioningScope {
 public:
  ConditioningScope();
  ~ConditioningScope();
  ConditioningScope(const ConditioningScope&) = delete;
  ConditioningScope& operator=(const ConditioningScope&) = delete;

  [[nodiscard]] const ConditioningStats& stats() const noexcept { return stats_; }
  [[nodiscard]] bool clean() const noexcept { return stats_.clean(); }

 private:
  friend void note_rank_decision(double, double);
  friend void note_containment(double);
  ConditioningStats stats_;
  ConditioningScope* parent_;
};

/// relative_value is a singular value divided by the largest one; cut is
/// the relative rank tolerance in force.
void note_rank_decision(double relative_value, double cut);
void note_containment(double gap);

}  // namespace linrel
