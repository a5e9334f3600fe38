#include "sched/sim.hpp"

#include "sched/check.hpp"

#include <algorithm>

namespace sched {

SimEngine::SimEngine(const Instance& inst, Policy& policy)
    : inst_(inst), policy_(policy), now_(0) {
  machines_.resize(static_cast<std::size_t>(inst.machines));
}

void SimEngine::schedule(EventKind kind, const Rat& time, int machine, int job,
                         std::uint64_t version) {
  SCHED_CHECK(time >= now_, "event scheduled in the past");
  queue_.push(QEvent{time, static_cast<int>(kind), seq_++, machine, job, version});
}

std::optional<int> SimEngine::running_job(int machine) const {
  return machines_.at(static_cast<std::size_t>(machine)).running;
}

void SimEngine::close_segment(int machine) {
  MachineState& ms = machines_[static_cast<std::size_t>(machine)];
  if (ms.running && ms.seg_start < now_) {
    trace_.segments.push_back({machine, *ms.running, ms.seg_start, now_});
  }
}

void SimEngine::recompute_running(int machine) {
  MachineState& ms = machines_[static_cast<std::size_t>(machine)];
  std::optional<int> best;
  for (int job : ms.active) {
    if (!best) {
      best = job;
      continue;
    }
    const Rat& pb = *inst_.job(*best).proc_on(machine);
    const Rat& pj = *inst_.job(job).proc_on(machine);
    if (pj < pb || (pj == pb && job < *best)) best = job;
  }
  if (best == ms.running) return;
  close_segment(machine);
  ms.running = best;
  ms.seg_start = now_;
  ++ms.completion_version;
  if (ms.running) {
    schedule(EventKind::Completion, now_ + ms.remaining.at(*ms.running), machine,
             *ms.running, ms.completion_version);
  }
}

void SimEngine::admit(int job, int machine) {
  const Job& j = inst_.job(job);
  const Rat* p = j.proc_on(machine);
  if (p == nullptr) {
    throw std::logic_error("policy admitted job " + std::to_string(job) +
                           " to non-eligible machine " + std::to_string(machine));
  }
  if (admitted_.count(job)) {
    throw std::logic_error("job " + std::to_string(job) + " admitted twice");
  }
  SCHED_CHECK(j.release <= now_, "admission before release");
  admitted_.insert(job);
  auto it = std::lower_bound(pool_.begin(), pool_.end(), job);
  SCHED_CHECK(it != pool_.end() && *it == job, "admitted job not in released pool");
  pool_.erase(it);
  trace_.admissions[job] = {machine, now_};
  MachineState& ms = machines_[static_cast<std::size_t>(machine)];
  ms.active.push_back(job);
  ms.remaining[job] = *p;
  recompute_running(machine);
}

void SimEngine::advance_to(const Rat& t) {
  if (t == now_) return;
  SCHED_CHECK(t > now_, "time going backwards");
  const Rat delta = t - now_;
  for (auto& ms : machines_) {
    if (!ms.running) continue;
    Rat& rem = ms.remaining.at(*ms.running);
    rem -= delta;
    SCHED_CHECK(rem >= 0, "advanced past a completion event");
  }
  now_ = t;
}

void SimEngine::handle_completion(const QEvent& ev) {
  MachineState& ms = machines_[static_cast<std::size_t>(ev.machine)];
  if (ev.version != ms.completion_version) return;  // stale
  SCHED_CHECK(ms.running && *ms.running == ev.job, "completion for non-running job");
  SCHED_CHECK(ms.remaining.at(ev.job) == 0, "completion with remaining work");
  close_segment(ev.machine);
  ms.active.erase(std::find(ms.active.begin(), ms.active.end(), ev.job));
  ms.remaining.erase(ev.job);
  ms.running.reset();
  ++ms.completion_version;
  trace_.completions[ev.job] = now_;
  if (now_ <= inst_.job(ev.job).deadline) trace_.on_time.insert(ev.job);
  recompute_running(ev.machine);
  if (policy_.completion_triggers()) policy_.on_completion(*this, ev.machine, ev.job);
}

void SimEngine::run() {
  // Releases are enqueued in job-id order; the queue's seq field makes
  // simultaneous releases pop deterministically by id.
  std::vector<const Job*> by_release;
  for (const Job& j : inst_.jobs) by_release.push_back(&j);
  std::stable_sort(by_release.begin(), by_release.end(),
                   [](const Job* a, const Job* b) { return a->release < b->release; });
  for (const Job* j : by_release) {
    queue_.push(QEvent{j->release, static_cast<int>(EventKind::Release), seq_++, -1,
                       j->id, 0});
  }

  while (!queue_.empty()) {
    const QEvent ev = queue_.top();
    queue_.pop();
    advance_to(ev.time);
    switch (static_cast<EventKind>(ev.prio)) {
      case EventKind::Completion:
        handle_completion(ev);
        break;
      case EventKind::Release: {
        auto it = std::lower_bound(pool_.begin(), pool_.end(), ev.job);
        pool_.insert(it, ev.job);
        policy_.on_event(*this, EventKind::Release, ev.machine, ev.job, ev.version);
        break;
      }
      case EventKind::EndBlockingPeriod:
      case EventKind::EndSchedulingInterval:
      case EventKind::AdmissionFollowUp:
        policy_.on_event(*this, static_cast<EventKind>(ev.prio), ev.machine, ev.job,
                         ev.version);
        break;
    }
  }

  for (std::size_t i = 0; i < machines_.size(); ++i) {
    SCHED_CHECK(machines_[i].active.empty(), "engine drained with unfinished jobs");
  }
}

}  // namespace sched
