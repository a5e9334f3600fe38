#pragma once

#include "sched/instance.hpp"
#include "sched/sim.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sched {

struct BlockingParams {
  Rat epsilon;                     // as given
  Rat epsilon_eff;                 // min(epsilon, 1); the algorithm runs with this
  std::optional<Rat> delta_input;  // from the delta-commitment model
  Rat delta;                       // delta' = max(delta_input, epsilon_eff/2)
  Rat gamma;                       // delta'/16
  Rat beta;                        // 16/delta'
  Rat eq1_value;                   // completion-condition value, must be >= 1
};

// Derives (delta', gamma, beta) from the slack and commitment model, clamps
// epsilon to 1, and re-verifies the completion condition
//   (beta/2)/(beta/2 + (1+2d)) * (1 + d - 2(1+2d)*gamma) >= 1.
// Throws std::invalid_argument for an undefined model (delta >= epsilon) or
// when the condition cannot hold for the derived delta'.
BlockingParams derive_params(const Rat& epsilon, const CommitmentModel& model);

// --- interval bookkeeping, shared by the policy and the verify replay ---

struct IntervalRecord {
  int job = -1;
  int machine = -1;
  std::optional<int> parent;
  Rat admit;                                  // a_j
  Rat end;                                    // e_j
  std::vector<std::pair<Rat, Rat>> blocking;  // disjoint ascending [start, end)
};

struct IntervalState {
  std::map<int, IntervalRecord> records;     // by job id
  std::vector<std::vector<int>> by_machine;  // admission order per machine

  explicit IntervalState(int machines)
      : by_machine(static_cast<std::size_t>(machines)) {}
};

bool blocking_contains(const std::vector<std::pair<Rat, Rat>>& pieces, const Rat& tau);

// Applies one admission at time tau. Roots (parent == nullopt) get an empty
// blocking period. Children trigger the case split on e_j* vs e_parent:
// either a blocking period [e_j*, min(e_parent, e_j* + beta p)) is attached,
// or all chain intervals containing tau are extended to e_j* and their
// blocking periods rebuilt. In both cases the blocking periods of the
// admitter's other children are displaced out of the new footprint: the part
// of a live piece at or after tau moves by (1+delta'+beta)p, clipped at the
// admitter's interval end. Ids of records whose intervals changed are
// appended to `changed`.
void apply_admission(IntervalState& st, const Instance& inst, const BlockingParams& prm,
                     int job, int machine, std::optional<int> parent, const Rat& tau,
                     std::vector<int>* changed);

class BlockingPolicy : public Policy {
 public:
  BlockingPolicy(const Instance& inst, BlockingParams prm);

  bool completion_triggers() const override { return false; }
  void on_event(SimEngine& eng, EventKind kind, int machine, int job,
                std::uint64_t version) override;
  void on_completion(SimEngine&, int, int) override {}
  AdmissionLog admission_log() const override;

  const BlockingParams& params() const { return prm_; }
  const IntervalState& intervals() const { return st_; }

 private:
  void admission_routine(SimEngine& eng);
  std::optional<int> shortest_available(const SimEngine& eng, int machine) const;
  void sync_events(SimEngine& eng, const std::vector<int>& changed);

  const Instance& inst_;
  BlockingParams prm_;
  IntervalState st_;
  std::vector<int> order_;                // admission order
  std::map<int, std::uint64_t> version_;  // per-record event validity stamp
};

struct RunResult {
  ScheduleTrace trace;
  AdmissionLog log;
};

RunResult run_blocking(const Instance& inst, const CommitmentModel& model);

struct CommitViolation {
  int job = -1;
  std::string clause;
};

// Post-run commitment soundness: every admitted job completed with
// C_j <= d_j and C_j <= a_j + (1+delta')p_ij; under delta-commitment
// additionally a_j <= d_j - (1+delta_input)p_ij.
std::vector<CommitViolation> commit_check(const Instance& inst, const BlockingParams& prm,
                                          const CommitmentModel& model,
                                          const AdmissionLog& log,
                                          const ScheduleTrace& trace);

}  // namespace sched
