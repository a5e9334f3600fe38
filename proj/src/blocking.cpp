#include "sched/blocking.hpp"

#include "sched/check.hpp"

#include <algorithm>
#include <stdexcept>

namespace sched {

BlockingParams derive_params(const Rat& epsilon, const CommitmentModel& model) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  BlockingParams prm;
  prm.epsilon = epsilon;
  prm.epsilon_eff = std::min(epsilon, Rat(1));
  if (model.kind == CommitmentKind::DeltaCommitment) {
    if (!(model.delta > 0 && model.delta < epsilon)) {
      throw std::invalid_argument("delta-commitment requires 0 < delta < epsilon");
    }
    prm.delta_input = model.delta;
  }
  const Rat half_eps = prm.epsilon_eff / 2;
  prm.delta = (prm.delta_input && *prm.delta_input > half_eps) ? *prm.delta_input : half_eps;
  prm.gamma = prm.delta / 16;
  prm.beta = Rat(16) / prm.delta;

  const Rat half_beta = prm.beta / 2;
  const Rat one_plus_2d = Rat(1) + 2 * prm.delta;
  prm.eq1_value =
      half_beta / (half_beta + one_plus_2d) * (Rat(1) + prm.delta - 2 * one_plus_2d * prm.gamma);
  if (prm.eq1_value < 1) {
    // Only reachable for epsilon > 1 combined with a delta-commitment
    // parameter above 3/2; the standard gamma/beta choice cannot guarantee
    // completion there.
    throw std::invalid_argument("completion condition fails for delta' = " + to_frac(prm.delta));
  }
  return prm;
}

bool blocking_contains(const std::vector<std::pair<Rat, Rat>>& pieces, const Rat& tau) {
  for (const auto& [s, f] : pieces) {
    if (s <= tau && tau < f) return true;
  }
  return false;
}

namespace {

// Displaces the blocking periods of the admitter's children out of the
// footprint a new admission at tau occupies. The part of a live piece at or
// after tau moves by `shift`; the moved part is clipped at the admitter's
// current interval end (so it can shrink or vanish, [e, f) = empty if f <= e).
void shift_children_blocking(IntervalState& st, int machine, int admitter, int new_job,
                             const Rat& tau, const Rat& shift, const Rat& clip,
                             std::vector<int>* changed) {
  for (int k : st.by_machine[static_cast<std::size_t>(machine)]) {
    if (k == new_job) continue;
    IntervalRecord& r = st.records.at(k);
    if (!r.parent || *r.parent != admitter) continue;
    if (r.blocking.empty()) continue;

    std::vector<std::pair<Rat, Rat>> out;
    int live = 0;
    bool touched = false;
    for (const auto& piece : r.blocking) {
      if (piece.second <= tau) {
        out.push_back(piece);
        continue;
      }
      ++live;
      touched = true;
      if (piece.first < tau) out.push_back({piece.first, tau});
      const Rat s = std::max(piece.first, tau) + shift;
      const Rat f = std::min(clip, piece.second + shift);
      if (s < f) out.push_back({s, f});
    }
    SCHED_CHECK(live <= 1, "blocking period with several live pieces");
    if (touched) {
      r.blocking = std::move(out);
      if (changed) changed->push_back(k);
    }
  }
}

}  // namespace

void apply_admission(IntervalState& st, const Instance& inst, const BlockingParams& prm,
                     int job, int machine, std::optional<int> parent, const Rat& tau,
                     std::vector<int>* changed) {
  const Rat& p = *inst.job(job).proc_on(machine);
  IntervalRecord rec;
  rec.job = job;
  rec.machine = machine;
  rec.parent = parent;
  rec.admit = tau;
  rec.end = tau + (Rat(1) + prm.delta) * p;

  if (!parent) {
    SCHED_CHECK(st.records.emplace(job, std::move(rec)).second, "duplicate admission");
    st.by_machine[static_cast<std::size_t>(machine)].push_back(job);
    if (changed) changed->push_back(job);
    return;
  }

  IntervalRecord& par = st.records.at(*parent);
  SCHED_CHECK(par.machine == machine, "parent on a different machine");
  SCHED_CHECK(par.admit <= tau && tau < par.end, "admission outside parent interval");
  const Rat shift = (Rat(1) + prm.delta + prm.beta) * p;

  if (rec.end <= par.end) {
    const Rat f = std::min(par.end, rec.end + prm.beta * p);
    if (f > rec.end) rec.blocking.push_back({rec.end, f});
    SCHED_CHECK(st.records.emplace(job, std::move(rec)).second, "duplicate admission");
    st.by_machine[static_cast<std::size_t>(machine)].push_back(job);
    if (changed) changed->push_back(job);
    shift_children_blocking(st, machine, *parent, job, tau, shift,
                            st.records.at(*parent).end, changed);
    return;
  }

  // e_j* ends past the admitter's interval: extend every chain interval that
  // contains tau and ends earlier, then rebuild their blocking periods from
  // the new endpoints. The new job keeps an empty blocking period.
  const Rat new_end = rec.end;
  SCHED_CHECK(st.records.emplace(job, std::move(rec)).second, "duplicate admission");
  st.by_machine[static_cast<std::size_t>(machine)].push_back(job);
  if (changed) changed->push_back(job);

  std::vector<int> extended;
  for (int k : st.by_machine[static_cast<std::size_t>(machine)]) {
    if (k == job) continue;
    IntervalRecord& r = st.records.at(k);
    if (r.admit <= tau && tau < r.end && r.end < new_end) extended.push_back(k);
  }
  for (int k : extended) st.records.at(k).end = new_end;
  for (int k : extended) {
    IntervalRecord& r = st.records.at(k);
    r.blocking.clear();
    if (r.parent) {
      const Rat& pk = *inst.job(k).proc_on(machine);
      const Rat fk = std::min(st.records.at(*r.parent).end, r.end + prm.beta * pk);
      if (fk > r.end) r.blocking.push_back({r.end, fk});
    }
    if (changed) changed->push_back(k);
  }
  // The admitter is part of the extended set, so its interval end is already
  // the new one; displaced children are clipped against it.
  shift_children_blocking(st, machine, *parent, job, tau, shift,
                          st.records.at(*parent).end, changed);
}

BlockingPolicy::BlockingPolicy(const Instance& inst, BlockingParams prm)
    : inst_(inst), prm_(std::move(prm)), st_(inst.machines) {}

std::optional<int> BlockingPolicy::shortest_available(const SimEngine& eng,
                                                      int machine) const {
  const Rat& tau = eng.now();
  const Rat one_plus_d = Rat(1) + prm_.delta;
  std::optional<int> best;
  for (int id : eng.released_pool()) {
    const Job& j = inst_.job(id);
    const Rat* p = j.proc_on(machine);
    if (p == nullptr) continue;
    if (j.deadline - tau < one_plus_d * (*p)) continue;
    if (!best) {
      best = id;
      continue;
    }
    const Rat& pb = *inst_.job(*best).proc_on(machine);
    if (*p < pb) best = id;  // ties stay with the smaller id (pool is ascending)
  }
  return best;
}

void BlockingPolicy::on_event(SimEngine& eng, EventKind kind, int /*machine*/, int job,
                              std::uint64_t version) {
  if (kind == EventKind::EndBlockingPeriod || kind == EventKind::EndSchedulingInterval) {
    auto it = version_.find(job);
    if (it == version_.end() || it->second != version) return;  // stale endpoint
  }
  admission_routine(eng);
}

void BlockingPolicy::sync_events(SimEngine& eng, const std::vector<int>& changed) {
  for (int id : changed) {
    const IntervalRecord& r = st_.records.at(id);
    const std::uint64_t v = ++version_[id];
    if (r.end >= eng.now()) {
      eng.schedule(EventKind::EndSchedulingInterval, r.end, r.machine, id, v);
    }
    for (const auto& [s, f] : r.blocking) {
      if (f >= eng.now()) eng.schedule(EventKind::EndBlockingPeriod, f, r.machine, id, v);
    }
  }
}

void BlockingPolicy::admission_routine(SimEngine& eng) {
  const Rat tau = eng.now();
  bool restart = true;
  while (restart) {
    restart = false;
    for (int i = 0; i < inst_.machines && !restart; ++i) {
      const auto js = shortest_available(eng, i);
      if (!js) continue;
      const Rat& pstar = *inst_.job(*js).proc_on(i);
      const auto& on_machine = st_.by_machine[static_cast<std::size_t>(i)];

      // Smallest job whose scheduling interval contains tau, if any.
      std::optional<int> admitter;
      for (int k : on_machine) {
        const IntervalRecord& r = st_.records.at(k);
        if (!(r.admit <= tau && tau < r.end)) continue;
        if (!admitter) {
          admitter = k;
          continue;
        }
        const Rat& pa = *inst_.job(*admitter).proc_on(i);
        const Rat& pk = *inst_.job(k).proc_on(i);
        if (pk < pa || (pk == pa && k < *admitter)) admitter = k;
      }

      if (admitter) {
        const Rat& pj = *inst_.job(*admitter).proc_on(i);
        if (!(pstar < prm_.gamma * pj)) continue;
        bool blocked = false;
        for (int k : on_machine) {
          const IntervalRecord& r = st_.records.at(k);
          const Rat& pk = *inst_.job(k).proc_on(i);
          if (pk <= 2 * pstar && blocking_contains(r.blocking, tau)) {
            blocked = true;
            break;
          }
        }
        if (blocked) continue;
      }

      std::vector<int> changed;
      apply_admission(st_, inst_, prm_, *js, i, admitter, tau, &changed);
      order_.push_back(*js);
      eng.admit(*js, i);
      sync_events(eng, changed);
      // The admission itself is an event: re-enter the routine after any
      // remaining same-time events have been processed.
      eng.schedule(EventKind::AdmissionFollowUp, tau, -1, -1, 0);
      restart = true;
    }
  }
}

AdmissionLog BlockingPolicy::admission_log() const {
  AdmissionLog log;
  for (int id : order_) {
    const IntervalRecord& r = st_.records.at(id);
    AdmissionRecord rec;
    rec.job = r.job;
    rec.machine = r.machine;
    rec.parent = r.parent;
    rec.admit_time = r.admit;
    rec.interval_end = r.end;
    rec.commit_time = r.admit;  // the algorithm commits upon admission
    rec.blocking = r.blocking;
    log.push_back(std::move(rec));
  }
  return log;
}

RunResult run_blocking(const Instance& inst, const CommitmentModel& model) {
  BlockingPolicy policy(inst, derive_params(inst.epsilon, model));
  SimEngine eng(inst, policy);
  eng.run();
  return {eng.trace(), policy.admission_log()};
}

std::vector<CommitViolation> commit_check(const Instance& inst, const BlockingParams& prm,
                                          const CommitmentModel& model,
                                          const AdmissionLog& log,
                                          const ScheduleTrace& trace) {
  std::vector<CommitViolation> out;
  for (const AdmissionRecord& r : log) {
    const Job& j = inst.job(r.job);
    const Rat& p = *j.proc_on(r.machine);
    auto done = trace.completions.find(r.job);
    if (done == trace.completions.end()) {
      out.push_back({r.job, "admitted job never completed"});
      continue;
    }
    if (done->second > j.deadline) {
      out.push_back({r.job, "completed after deadline: C=" + to_frac(done->second)});
    }
    if (done->second > r.admit_time + (Rat(1) + prm.delta) * p) {
      out.push_back({r.job, "completed after a_j + (1+delta')p_ij"});
    }
    if (!r.commit_time || *r.commit_time != r.admit_time) {
      out.push_back({r.job, "commit time differs from admission time"});
    }
    if (model.kind == CommitmentKind::DeltaCommitment) {
      if (r.admit_time > j.deadline - (Rat(1) + model.delta) * p) {
        out.push_back({r.job, "admitted after the delta-commitment cutoff"});
      }
    }
  }
  return out;
}

}  // namespace sched
