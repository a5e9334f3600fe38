#pragma once

#include "sched/instance.hpp"
#include "sched/oracle.hpp"
#include "sched/sim.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace sched {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical instance JSON: {"epsilon": "p/q", "jobs": [...], "machines": m}
// with every rational a string ("p" or "p/q") and proc keyed by machine
// index as a string. save(load(x)) reproduces the canonical bytes exactly.
std::string instance_to_json(const Instance& inst);

// Accepts rationals as strings or plain JSON integers; floats are rejected
// so values stay exact. Throws ParseError with field context on malformed
// input and when the parsed instance fails validation.
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

// Trace CSV: header machine,job,start,end with rationals as p/q tokens,
// ordered by (machine, start).
std::string trace_to_csv(const ScheduleTrace& trace);

// Run summary: {"admitted": [...], "completions": {id: "p/q"}, "on_time": [...]}.
std::string summary_to_json(const ScheduleTrace& trace);

// Admission log as a JSON list in admission order; the region policy leaves
// interval fields empty.
std::string admission_log_to_json(const AdmissionLog& log);

// {"exact": bool, "opt": k, "witness": [[ids...], ...] | null}
std::string oracle_to_json(int opt, bool exact, const OptResult* witness);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace sched
