#include "sched/generator.hpp"

#include "sched/check.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace sched {

std::string profile_name(Profile p) {
  switch (p) {
    case Profile::Uniform:
      return "uniform";
    case Profile::Bursty:
      return "bursty";
    case Profile::Nested:
      return "nested";
    case Profile::TightSlack:
      return "tight-slack";
  }
  return "?";
}

Profile parse_profile(const std::string& s) {
  if (s == "uniform") return Profile::Uniform;
  if (s == "bursty") return Profile::Bursty;
  if (s == "nested") return Profile::Nested;
  if (s == "tight-slack") return Profile::TightSlack;
  throw std::invalid_argument("unknown profile '" + s + "'");
}

namespace {

// Processing times are integer multiples of this grid step.
constexpr long kProcDen = 960;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform integer in [lo, hi], unbiased via rejection. Implemented by hand
  // so the sampled sequence depends only on mt19937_64, not on library
  // distribution internals.
  long range(long lo, long hi) {
    SCHED_CHECK(lo <= hi, "rng range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
  }

  bool chance(long num, long den) { return range(1, den) <= num; }

  // Rational in [lo, hi] with denominator dividing `den`.
  Rat rat(const Rat& lo, const Rat& hi, long den) {
    const BigInt lo_k = numerator(lo * den) / denominator(lo * den);
    const BigInt hi_k = numerator(hi * den) / denominator(hi * den);
    long a = lo_k.convert_to<long>();
    long b = hi_k.convert_to<long>();
    if (a > b) b = a;
    return Rat(range(a, b), den);
  }

 private:
  std::mt19937_64 eng_;
};

// Grid-quantized processing time: k/960 with k in [lo_k, hi_k].
Rat proc_time(Rng& rng, long lo_k, long hi_k) {
  return Rat(rng.range(std::max<long>(1, lo_k), std::max<long>(1, hi_k)), kProcDen);
}

// Scales a /960 processing time by num/den, rounding down to the grid but
// never below 1/960.
Rat proc_scaled(const Rat& p, long num, long den) {
  BigInt k = numerator(p * kProcDen);  // p is a multiple of 1/960
  BigInt scaled = k * num / den;
  if (scaled < 1) scaled = 1;
  return Rat(scaled, kProcDen);
}

// Random nonempty machine subset with per-machine processing-time variation
// around a base value.
void assign_machines(Rng& rng, Job& job, int m, const Rat& base) {
  std::vector<int> chosen;
  for (int i = 0; i < m; ++i) {
    if (rng.chance(3, 4)) chosen.push_back(i);
  }
  if (chosen.empty()) chosen.push_back(static_cast<int>(rng.range(0, m - 1)));
  for (int i : chosen) {
    // factor in [1/2, 2]
    job.proc[i] = proc_scaled(base, rng.range(8, 32), 16);
  }
}

Rat max_proc(const Job& j) {
  Rat best = 0;
  for (const auto& [_, p] : j.proc) best = std::max(best, p);
  return best;
}

void fill_uniform(Rng& rng, Instance& inst, int n, int m, bool bursty) {
  const Rat one_plus_eps = Rat(1) + inst.epsilon;
  const long horizon = std::max(2L, 3L * n / std::max(1, m));

  std::vector<Rat> bursts;
  if (bursty) {
    const int nb = std::max(1, n / 5);
    for (int b = 0; b < nb; ++b) bursts.push_back(rng.rat(Rat(0), Rat(horizon), 4));
  }

  for (int id = 0; id < n; ++id) {
    Job j;
    j.id = id;
    const Rat base = proc_time(rng, kProcDen / 2, 8 * kProcDen);  // [1/2, 8]
    assign_machines(rng, j, m, base);
    if (bursty) {
      const Rat& center = bursts[static_cast<std::size_t>(rng.range(0, static_cast<long>(bursts.size()) - 1))];
      j.release = center + rng.rat(Rat(0), Rat(1, 4), 16);
    } else {
      j.release = rng.rat(Rat(0), Rat(horizon), 8);
    }
    const Rat stretch = rng.rat(Rat(1), Rat(2), 8);
    j.deadline = j.release + one_plus_eps * max_proc(j) * stretch;
    inst.jobs.push_back(std::move(j));
  }
}

void fill_tight(Rng& rng, Instance& inst, int n, int m) {
  const Rat one_plus_eps = Rat(1) + inst.epsilon;
  const long horizon = std::max(2L, 3L * n / std::max(1, m));
  for (int id = 0; id < n; ++id) {
    Job j;
    j.id = id;
    const Rat base = proc_time(rng, kProcDen / 2, 8 * kProcDen);
    assign_machines(rng, j, m, base);
    j.release = rng.rat(Rat(0), Rat(horizon), 8);
    j.deadline = j.release + one_plus_eps * max_proc(j);  // exact boundary
    inst.jobs.push_back(std::move(j));
  }
}

// Nests: a large job with a near-tight window plus a cascade of much smaller
// jobs released inside its execution. Small jobs sit on the same single
// machine as the nest root so that preemption pressure is concentrated.
void fill_nested(Rng& rng, Instance& inst, int n, int m) {
  const Rat eps = inst.epsilon;
  const Rat eps_eff = std::min(eps, Rat(1));
  const Rat one_plus_eps = Rat(1) + eps;
  int id = 0;
  int machine = 0;
  Rat cursor = 0;
  while (id < n) {
    const int nest = std::min(n - id, 1 + static_cast<int>(rng.range(6, 9)));
    // Root: p in [8, 16], window stretched by at most 1/16 beyond the minimum.
    Job root;
    root.id = id++;
    const Rat p_root = proc_time(rng, 8 * kProcDen, 16 * kProcDen);
    root.proc[machine] = p_root;
    root.release = cursor + rng.rat(Rat(0), Rat(2), 4);
    root.deadline = root.release + one_plus_eps * p_root * rng.rat(Rat(1), Rat(17, 16), 16);
    const Rat root_release = root.release;
    inst.jobs.push_back(std::move(root));

    // Children sized just below eps/4 of the root (the region algorithm's
    // preemption threshold); a slice of them is also below gamma = eps/32 so
    // that the blocking algorithm's nesting machinery gets exercised. The
    // combined child volume is tuned to overrun the root's slack.
    Rat offset = Rat(1, 32);
    for (int c = 1; c < nest && id < n; ++c) {
      Job child;
      child.id = id++;
      long u_num = rng.chance(1, 5) ? rng.range(2, 3) : rng.range(22, 30);  // /32
      // p_child = p_root * (eps_eff/4) * (u_num/32)
      const Rat frac = eps_eff * Rat(u_num, 128);
      const Rat p_child = proc_scaled(p_root, numerator(frac).convert_to<long>(),
                                      denominator(frac).convert_to<long>());
      child.proc[machine] = p_child;
      child.release = root_release + offset;
      offset += rng.rat(Rat(1, 16), Rat(1, 2), 16);
      const Rat stretch = rng.rat(Rat(4), Rat(8), 4);
      child.deadline = child.release + one_plus_eps * p_child * stretch;
      inst.jobs.push_back(std::move(child));
    }
    machine = (machine + 1) % m;
    if (machine == 0) cursor += Rat(rng.range(4, 30));
  }
}

}  // namespace

Instance generate(std::uint64_t seed, int n, int m, const Rat& epsilon, Profile profile) {
  SCHED_CHECK(n >= 1 && m >= 1, "generate() needs n, m >= 1");
  SCHED_CHECK(epsilon > 0, "generate() needs epsilon > 0");
  // Profile is mixed into the stream so that equal seeds with different
  // profiles do not share a prefix.
  Rng rng(seed * 4 + static_cast<std::uint64_t>(profile) + 0x9e3779b97f4a7c15ull);
  Instance inst;
  inst.machines = m;
  inst.epsilon = epsilon;
  switch (profile) {
    case Profile::Uniform:
      fill_uniform(rng, inst, n, m, /*bursty=*/false);
      break;
    case Profile::Bursty:
      fill_uniform(rng, inst, n, m, /*bursty=*/true);
      break;
    case Profile::Nested:
      fill_nested(rng, inst, n, m);
      break;
    case Profile::TightSlack:
      fill_tight(rng, inst, n, m);
      break;
  }
  const ValidationReport rep = validate(inst);
  SCHED_CHECK(rep.ok(), "generator produced an invalid instance: " + rep.describe());
  return inst;
}

}  // namespace sched
