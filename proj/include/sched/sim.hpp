#pragma once

#include "sched/instance.hpp"
#include "sched/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

namespace sched {

// Event kinds in queue priority order at equal times. Completion is
// engine-internal; the other four are the decision triggers. Release fires
// before interval ends so that a job released exactly when an interval ends
// sees the post-release world.
enum class EventKind : int {
  Completion = 0,
  Release = 1,
  EndBlockingPeriod = 2,
  EndSchedulingInterval = 3,
  AdmissionFollowUp = 4,
};

struct Segment {
  int machine = -1;
  int job = -1;
  Rat start;
  Rat end;
};

// Shared admission-log record for both policies. The region policy leaves
// interval_end/commit_time unset and blocking empty.
struct AdmissionRecord {
  int job = -1;
  int machine = -1;
  std::optional<int> parent;
  Rat admit_time;                              // a_j
  std::optional<Rat> interval_end;             // e_j
  std::optional<Rat> commit_time;
  std::vector<std::pair<Rat, Rat>> blocking;   // disjoint ascending [start, end)
};

using AdmissionLog = std::vector<AdmissionRecord>;  // in admission order

struct ScheduleTrace {
  std::vector<Segment> segments;                   // per machine chronological
  std::map<int, Rat> completions;                  // job -> C_j
  std::map<int, std::pair<int, Rat>> admissions;   // job -> (machine, a_j)
  std::set<int> on_time;                           // completed with C_j <= d_j

  int admitted_count() const { return static_cast<int>(admissions.size()); }
  int on_time_count() const { return static_cast<int>(on_time.size()); }
};

class SimEngine;

// Admission policy plugged into the engine. The engine owns machine state,
// dispatching and the trace; the policy decides admissions and may schedule
// EndBlockingPeriod / EndSchedulingInterval / AdmissionFollowUp events.
class Policy {
 public:
  virtual ~Policy() = default;

  // Whether job completions invoke on_completion (region: yes, blocking: no).
  virtual bool completion_triggers() const = 0;

  virtual void on_event(SimEngine& eng, EventKind kind, int machine, int job,
                        std::uint64_t version) = 0;
  virtual void on_completion(SimEngine& eng, int machine, int job) = 0;

  virtual AdmissionLog admission_log() const = 0;
};

// Deterministic event-driven simulator. Between events every machine runs
// the admitted uncompleted job with the smallest (p_ij, id); admitted jobs
// keep running after their deadline until they complete. Exact rational
// clock, no discretization.
class SimEngine {
 public:
  SimEngine(const Instance& inst, Policy& policy);

  // Processes all events; afterwards every admitted job has completed.
  void run();

  const ScheduleTrace& trace() const { return trace_; }
  const Instance& instance() const { return inst_; }
  const Rat& now() const { return now_; }

  // --- policy-facing interface ---

  // Admits `job` to `machine` at the current time. Throws std::logic_error
  // when the machine is not eligible or the job was already admitted.
  void admit(int job, int machine);

  bool admitted(int job) const { return admitted_.count(job) != 0; }

  // Released, not yet admitted job ids, ascending.
  const std::vector<int>& released_pool() const { return pool_; }

  // Job currently processed on the machine, if any.
  std::optional<int> running_job(int machine) const;

  void schedule(EventKind kind, const Rat& time, int machine, int job,
                std::uint64_t version);

 private:
  struct QEvent {
    Rat time;
    int prio;
    std::uint64_t seq;
    int machine;
    int job;
    std::uint64_t version;
  };
  struct QCmp {
    bool operator()(const QEvent& a, const QEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.prio != b.prio) return a.prio > b.prio;
      return a.seq > b.seq;
    }
  };

  struct MachineState {
    std::vector<int> active;        // admitted, uncompleted job ids
    std::map<int, Rat> remaining;
    std::optional<int> running;
    Rat seg_start;
    std::uint64_t completion_version = 0;
  };

  void advance_to(const Rat& t);
  void recompute_running(int machine);
  void handle_completion(const QEvent& ev);
  void close_segment(int machine);

  const Instance& inst_;
  Policy& policy_;
  Rat now_;
  std::vector<MachineState> machines_;
  std::vector<int> pool_;
  std::set<int> admitted_;
  ScheduleTrace trace_;
  std::priority_queue<QEvent, std::vector<QEvent>, QCmp> queue_;
  std::uint64_t seq_ = 0;
};

}  // namespace sched
