#pragma once

#include "sched/blocking.hpp"
#include "sched/instance.hpp"
#include "sched/oracle.hpp"
#include "sched/region.hpp"
#include "sched/sim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sched {

enum class PolicyKind { Blocking, Region };

std::string policy_name(PolicyKind k);

// Piecewise-constant, right-continuous threshold for one machine.
// values[k] holds on [breakpoints[k-1], breakpoints[k]); the first and last
// values extend to -infinity and +infinity. nullopt encodes an infinite
// threshold.
struct MachineTimeline {
  std::vector<Rat> breakpoints;
  std::vector<std::optional<Rat>> values;  // size == breakpoints.size() + 1

  std::optional<Rat> value_at(const Rat& tau) const;
  std::size_t segment_count() const { return values.size(); }

  bool operator==(const MachineTimeline&) const = default;
};

struct ThresholdTimeline {
  std::vector<MachineTimeline> machines;

  bool operator==(const ThresholdTimeline&) const = default;
};

// Which policy produced a run and with which effective parameters.
struct VerifyParams {
  PolicyKind kind = PolicyKind::Blocking;
  Rat epsilon_eff;
  Rat avail_delta;  // delta' (blocking) or epsilon_eff/2 (region)
  Rat gamma;        // blocking only
  Rat beta;         // blocking only

  static VerifyParams blocking(const BlockingParams& p);
  static VerifyParams region(const RegionParams& p);
};

// Retrospective threshold: for the blocking policy u = p_ik/2 inside a
// blocking period, otherwise gamma times the smallest p over scheduling
// intervals containing tau (min over the empty set = infinity). For the
// region policy u = (epsilon/4) p of the running job, infinity when idle.
ThresholdTimeline extract_threshold(const Instance& inst, const AdmissionLog& log,
                                    const ScheduleTrace& trace, const VerifyParams& vp);

struct CheckResult {
  bool ok = true;
  std::vector<std::string> problems;

  void fail(std::string what) {
    ok = false;
    problems.push_back(std::move(what));
  }
  void merge(const CheckResult& other) {
    ok = ok && other.ok;
    problems.insert(problems.end(), other.problems.begin(), other.problems.end());
  }
};

// (P1) every admitted job was available at its admission time. (P2) at every
// breakpoint and release time, an available job not (yet) admitted has
// p_ij >= u. The finite grid suffices: both sides are piecewise constant
// between breakpoints and releases.
CheckResult check_p1_p2(const Instance& inst, const AdmissionLog& log,
                        const ThresholdTimeline& tl, const VerifyParams& vp);

// Volume lemma against the oracle witness. For every witness job x on
// machine i not admitted by the algorithm, every completion-order prefix Y
// (an under-approximation of the lemma's universal quantifier) and grid pair
// theta1 <= theta2 with theta1 <= min release and r_x <= theta2: whenever
// sum_Y p_iy >= eps/(eps-delta) (theta2-theta1), job x must satisfy
// p_ix >= u at theta2. Witness completion times come from a per-machine EDF
// realization.
CheckResult check_volume_lemma(const Instance& inst, const AdmissionLog& log,
                               const ThresholdTimeline& tl, const VerifyParams& vp,
                               const OptResult& witness);

struct BoundReport {
  PolicyKind kind = PolicyKind::Blocking;
  int admitted = 0;
  int on_time = 0;
  int opt = 0;
  Rat factor;                // alpha + 5 (blocking) or 8/eps + 4 (region)
  Rat bound;                 // factor * admitted
  bool opt_within_bound = false;
  bool completion_ok = false;  // blocking: F == J; region: 2F >= J
  std::optional<Rat> ratio;    // OPT / F when F > 0
};

// Exact rational evaluation of the competitive bound and the completion
// guarantee against an exact OPT value.
BoundReport check_bounds(const Instance& inst, const VerifyParams& vp,
                         const AdmissionLog& log, const ScheduleTrace& trace, int opt);

// Structural invariants of blocking admission records: interval spans within
// [(1+d)p, (1+2d)p], descendant containment, child size rule, blocking-size
// rule, sibling S/B disjointness, commitment feasibility of a_j.
CheckResult check_interval_structure(const Instance& inst, const BlockingParams& prm,
                                     const AdmissionLog& log);

// Re-derives all intervals from the admission sequence through the update
// rules and compares endpoints exactly; any perturbed endpoint is caught.
CheckResult check_log_consistency(const Instance& inst, const BlockingParams& prm,
                                  const AdmissionLog& log);

// Trace invariants: per-machine chronological non-overlapping segments,
// non-migration, exact work conservation, completion at last segment end.
CheckResult check_trace(const Instance& inst, const ScheduleTrace& trace);

// The admission log and the trace describe the same run: same jobs, same
// machines, same admission times.
CheckResult check_log_trace_agreement(const AdmissionLog& log, const ScheduleTrace& trace);

// Threshold timelines have at most 3|J_i|+1 segments per machine for the
// blocking policy and 2|J_i|+1 for the region policy.
CheckResult check_segment_counts(const Instance& inst, const AdmissionLog& log,
                                 const ThresholdTimeline& tl, const VerifyParams& vp);

}  // namespace sched
