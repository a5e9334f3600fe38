#include "sched/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sched {

using nlohmann::json;

namespace {

json rat_json(const Rat& r) { return to_frac(r); }

Rat rat_from_json(const json& v, const std::string& where) {
  if (v.is_string()) {
    auto r = try_parse_frac(v.get<std::string>());
    if (!r) throw ParseError(where + ": not a rational \"p/q\": '" + v.get<std::string>() + "'");
    return *r;
  }
  if (v.is_number_integer()) return Rat(v.get<long long>());
  throw ParseError(where + ": rationals must be strings \"p/q\" (floats are not exact)");
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json out;
  out["machines"] = inst.machines;
  out["epsilon"] = rat_json(inst.epsilon);
  json jobs = json::array();
  for (const Job& j : inst.jobs) {
    json jj;
    jj["id"] = j.id;
    jj["release"] = rat_json(j.release);
    jj["deadline"] = rat_json(j.deadline);
    json proc = json::object();
    for (const auto& [machine, p] : j.proc) proc[std::to_string(machine)] = rat_json(p);
    jj["proc"] = proc;
    jobs.push_back(jj);
  }
  out["jobs"] = jobs;
  return out.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  if (!in.is_object()) throw ParseError("instance JSON: top level must be an object");
  Instance inst;
  if (!in.contains("machines") || !in["machines"].is_number_integer()) {
    throw ParseError("machines: required integer field");
  }
  inst.machines = in["machines"].get<int>();
  if (!in.contains("epsilon")) throw ParseError("epsilon: required field");
  inst.epsilon = rat_from_json(in["epsilon"], "epsilon");
  if (!in.contains("jobs") || !in["jobs"].is_array()) {
    throw ParseError("jobs: required array field");
  }
  std::size_t idx = 0;
  for (const json& jj : in["jobs"]) {
    const std::string where = "jobs[" + std::to_string(idx) + "]";
    if (!jj.is_object()) throw ParseError(where + ": must be an object");
    Job job;
    if (!jj.contains("id") || !jj["id"].is_number_integer()) {
      throw ParseError(where + ".id: required integer field");
    }
    job.id = jj["id"].get<int>();
    if (!jj.contains("release")) throw ParseError(where + ".release: required field");
    job.release = rat_from_json(jj["release"], where + ".release");
    if (job.release < 0) throw ParseError(where + ".release: must be nonnegative");
    if (!jj.contains("deadline")) throw ParseError(where + ".deadline: required field");
    job.deadline = rat_from_json(jj["deadline"], where + ".deadline");
    if (!jj.contains("proc") || !jj["proc"].is_object()) {
      throw ParseError(where + ".proc: required object field");
    }
    for (const auto& [key, val] : jj["proc"].items()) {
      int machine = -1;
      try {
        std::size_t pos = 0;
        machine = std::stoi(key, &pos);
        if (pos != key.size()) machine = -1;
      } catch (...) {
        machine = -1;
      }
      if (machine < 0) throw ParseError(where + ".proc: bad machine key '" + key + "'");
      job.proc[machine] = rat_from_json(val, where + ".proc[" + key + "]");
    }
    inst.jobs.push_back(std::move(job));
    ++idx;
  }
  const ValidationReport rep = validate(inst);
  if (!rep.ok()) throw ParseError("instance invalid:\n" + rep.describe());
  return inst;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  write_file(path, instance_to_json(inst));
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_file(path));
}

std::string trace_to_csv(const ScheduleTrace& trace) {
  std::vector<Segment> segs = trace.segments;
  std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
    if (a.machine != b.machine) return a.machine < b.machine;
    return a.start < b.start;
  });
  std::ostringstream os;
  os << "machine,job,start,end\n";
  for (const Segment& s : segs) {
    os << s.machine << "," << s.job << "," << to_frac(s.start) << "," << to_frac(s.end)
       << "\n";
  }
  return os.str();
}

std::string summary_to_json(const ScheduleTrace& trace) {
  json out;
  json admitted = json::array();
  for (const auto& [job, where] : trace.admissions) {
    (void)where;
    admitted.push_back(job);
  }
  out["admitted"] = admitted;
  json comps = json::object();
  for (const auto& [job, c] : trace.completions) comps[std::to_string(job)] = rat_json(c);
  out["completions"] = comps;
  json on_time = json::array();
  for (int job : trace.on_time) on_time.push_back(job);
  out["on_time"] = on_time;
  return out.dump(2) + "\n";
}

std::string admission_log_to_json(const AdmissionLog& log) {
  json out = json::array();
  for (const AdmissionRecord& r : log) {
    json jr;
    jr["job"] = r.job;
    jr["machine"] = r.machine;
    jr["parent"] = r.parent ? json(*r.parent) : json(nullptr);
    jr["admit"] = rat_json(r.admit_time);
    jr["end"] = r.interval_end ? json(rat_json(*r.interval_end)) : json(nullptr);
    jr["commit"] = r.commit_time ? json(rat_json(*r.commit_time)) : json(nullptr);
    json blocks = json::array();
    for (const auto& [s, f] : r.blocking) blocks.push_back(json::array({rat_json(s), rat_json(f)}));
    jr["blocking"] = blocks;
    out.push_back(jr);
  }
  return out.dump(2) + "\n";
}

std::string oracle_to_json(int opt, bool exact, const OptResult* witness) {
  json out;
  out["opt"] = opt;
  out["exact"] = exact;
  if (witness) {
    json w = json::array();
    for (const auto& ids : witness->witness) w.push_back(ids);
    out["witness"] = w;
  } else {
    out["witness"] = nullptr;
  }
  return out.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
}

}  // namespace sched
