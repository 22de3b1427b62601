#include "thetagw/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <sstream>
#include <thread>

#include "thetagw/errors.hpp"
#include "thetagw/pgf.hpp"
#include "thetagw/rng.hpp"

namespace thetagw {

namespace {

constexpr double kNegligibleExtinction = 1e-12;
constexpr double kCensorWarning = 0.10;

struct Outcome {
  TrajectoryStatus status = TrajectoryStatus::CensoredHorizon;
  double time = 0.0;  // absorption time, or the last time T is known to exceed
};

Rng stream_for(const SimConfig& cfg, std::uint64_t index) {
  if (cfg.antithetic) return Rng(cfg.master_seed, index / 2, index % 2 == 1);
  return Rng(cfg.master_seed, index);
}

// A regular process that overshoots the cap goes extinct with probability
// below q^z_cap; such runs are counted as never absorbed.
bool cap_means_survival(const ThetaParams& p, std::uint64_t z_cap) {
  if (!p.regular() || p.q() >= 1.0) return false;
  if (p.q() == 0.0) return true;
  return static_cast<double>(z_cap) * std::log(p.q()) < std::log(kNegligibleExtinction);
}

EmpiricalTails aggregate(const std::vector<Outcome>& outcomes, int n_max, double dt,
                         bool cap_survives) {
  EmpiricalTails e;
  e.dt = dt;
  e.n_max = n_max;
  e.replicates = static_cast<std::int64_t>(outcomes.size());
  const auto len = static_cast<std::size_t>(n_max) + 1;
  e.at_risk.assign(len, 0);
  e.t0_gt.assign(len, 0);
  e.t1_gt.assign(len, 0);
  e.t_gt.assign(len, 0);

  for (const Outcome& o : outcomes) {
    switch (o.status) {
      case TrajectoryStatus::Extinct:
      case TrajectoryStatus::Exploded: {
        const bool extinct = o.status == TrajectoryStatus::Extinct;
        (extinct ? e.extinct : e.exploded) += 1;
        e.sum_t += o.time;
        e.sum_t2 += o.time * o.time;
        for (std::size_t n = 0; n < len; ++n) {
          const bool alive = o.time > static_cast<double>(n) * dt;
          e.at_risk[n] += 1;
          e.t0_gt[n] += (!extinct || alive) ? 1 : 0;
          e.t1_gt[n] += (extinct || alive) ? 1 : 0;
          e.t_gt[n] += alive ? 1 : 0;
        }
        break;
      }
      case TrajectoryStatus::CensoredHorizon:
      case TrajectoryStatus::CensoredCap: {
        const bool cap = o.status == TrajectoryStatus::CensoredCap;
        (cap ? e.censored_cap : e.censored_horizon) += 1;
        const bool forever = cap && cap_survives;
        if (forever) e.cap_treated_as_surviving += 1;
        for (std::size_t n = 0; n < len; ++n) {
          if (!forever && static_cast<double>(n) * dt > o.time) break;
          e.at_risk[n] += 1;
          e.t0_gt[n] += 1;
          e.t1_gt[n] += 1;
          e.t_gt[n] += 1;
        }
        break;
      }
    }
  }

  const double frac = e.censored_fraction();
  if (frac > kCensorWarning) {
    std::ostringstream os;
    os << "censored fraction " << frac << " exceeds " << kCensorWarning;
    e.warnings.push_back(os.str());
  }
  return e;
}

template <typename Fn>
std::vector<Outcome> run_parallel(std::int64_t replicates, unsigned workers, Fn make_worker) {
  std::vector<Outcome> out(static_cast<std::size_t>(replicates));
  const unsigned w = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(replicates)));
  std::vector<std::exception_ptr> errors(w);
  auto body = [&](unsigned id) {
    try {
      auto step = make_worker();
      for (std::int64_t i = id; i < replicates; i += w) {
        out[static_cast<std::size_t>(i)] = step(static_cast<std::uint64_t>(i));
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (w == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned id = 0; id < w; ++id) pool.emplace_back(body, id);
    for (auto& t : pool) t.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return out;
}

}  // namespace

void validate_config(const SimConfig& cfg) {
  if (cfg.replicates < 1) throw DomainError("replicates must be >= 1");
  if (cfg.n_max < 1) throw DomainError("n_max must be >= 1");
  if (cfg.z_cap < 1) throw DomainError("z_cap must be >= 1");
}

const char* status_name(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Extinct: return "extinct";
    case TrajectoryStatus::Exploded: return "exploded";
    case TrajectoryStatus::CensoredHorizon: return "censored_horizon";
    case TrajectoryStatus::CensoredCap: return "censored_cap";
  }
  return "unknown";
}

TrajectoryRecord simulate_trajectory(const SimConfig& cfg, std::uint64_t replicate_index) {
  OffspringSampler sampler = OffspringSampler::for_params(cfg.params, cfg.k_max);
  return simulate_trajectory(cfg, replicate_index, sampler);
}

TrajectoryRecord simulate_trajectory(const SimConfig& cfg, std::uint64_t replicate_index,
                                     OffspringSampler& sampler) {
  validate_config(cfg);
  Rng rng = stream_for(cfg, replicate_index);
  TrajectoryRecord rec;
  rec.sizes.push_back(1);
  std::uint64_t z = 1;
  for (int gen = 1; gen <= cfg.n_max; ++gen) {
    std::uint64_t total = 0;
    bool over_cap = false;
    for (std::uint64_t k = 0; k < z; ++k) {
      // Past the cap only the explosion check matters.
      const std::uint64_t limit = over_cap ? 0 : cfg.z_cap - total;
      const OffspringDraw d = sampler.sample(rng, limit);
      if (d.kind == OffspringDraw::Kind::Infinite) {
        rec.status = TrajectoryStatus::Exploded;
        rec.absorb_n = gen;
        return rec;
      }
      if (over_cap) continue;
      if (d.kind == OffspringDraw::Kind::AboveLimit) {
        over_cap = true;
      } else {
        total += d.count;
      }
    }
    if (over_cap) {
      rec.status = TrajectoryStatus::CensoredCap;
      rec.censor_n = gen;
      return rec;
    }
    rec.sizes.push_back(total);
    z = total;
    if (z == 0) {
      rec.status = TrajectoryStatus::Extinct;
      rec.absorb_n = gen;
      return rec;
    }
  }
  rec.status = TrajectoryStatus::CensoredHorizon;
  rec.censor_n = cfg.n_max;
  return rec;
}

// ---------------------------------------------------------------------------

double EmpiricalTails::survival_t0(int n) const {
  return at_risk[n] > 0 ? static_cast<double>(t0_gt[n]) / static_cast<double>(at_risk[n]) : 0.0;
}

double EmpiricalTails::survival_t1(int n) const {
  return at_risk[n] > 0 ? static_cast<double>(t1_gt[n]) / static_cast<double>(at_risk[n]) : 0.0;
}

double EmpiricalTails::survival_t(int n) const {
  return at_risk[n] > 0 ? static_cast<double>(t_gt[n]) / static_cast<double>(at_risk[n]) : 0.0;
}

double EmpiricalTails::standard_error(int n) const {
  if (at_risk[n] == 0) return 0.0;
  const double s = survival_t(n);
  return std::sqrt(s * (1.0 - s) / static_cast<double>(at_risk[n]));
}

double EmpiricalTails::censored_fraction() const {
  if (replicates == 0) return 0.0;
  const auto unresolved = censored_horizon + censored_cap - cap_treated_as_surviving;
  return static_cast<double>(unresolved) / static_cast<double>(replicates);
}

double EmpiricalTails::mean_absorption() const {
  const auto m = absorbed();
  return m > 0 ? sum_t / static_cast<double>(m) : 0.0;
}

double EmpiricalTails::mean_absorption_se() const {
  const auto m = absorbed();
  if (m < 2) return 0.0;
  const double mean = mean_absorption();
  const double var = (sum_t2 - static_cast<double>(m) * mean * mean) / static_cast<double>(m - 1);
  return std::sqrt(std::max(0.0, var) / static_cast<double>(m));
}

EmpiricalTails estimate_tails(const SimConfig& cfg) {
  validate_config(cfg);
  auto outcomes = run_parallel(cfg.replicates, cfg.workers, [&cfg]() {
    auto sampler = std::make_shared<OffspringSampler>(
        OffspringSampler::for_params(cfg.params, cfg.k_max));
    return [&cfg, sampler](std::uint64_t i) {
      const TrajectoryRecord r = simulate_trajectory(cfg, i, *sampler);
      Outcome o;
      o.status = r.status;
      o.time = r.absorb_n ? *r.absorb_n : r.censor_n;
      return o;
    };
  });
  return aggregate(outcomes, cfg.n_max, 1.0, cap_means_survival(cfg.params, cfg.z_cap));
}

KsDistance ks_distance(const EmpiricalTails& emp, const AbsorptionTails& analytic, int n_lo,
                       int n_hi) {
  if (emp.dt != 1.0) throw DomainError("ks_distance needs a unit time grid");
  KsDistance k;
  const int hi = std::min(n_hi, emp.n_max);
  for (int n = std::max(0, n_lo); n <= hi; ++n) {
    if (emp.at_risk[n] == 0) continue;
    k.t0 = std::max(k.t0, std::abs(emp.survival_t0(n) - analytic.survival_t0(n)));
    k.t1 = std::max(k.t1, std::abs(emp.survival_t1(n) - analytic.survival_t1(n)));
    k.t = std::max(k.t, std::abs(emp.survival_t(n) - analytic.survival_t(n)));
  }
  k.max = std::max({k.t0, k.t1, k.t});
  return k;
}

KsDistance ks_distance_semigroup(const EmpiricalTails& emp, const ThetaParams& p, int n_lo,
                                 int n_hi) {
  KsDistance k;
  const int hi = std::min(n_hi, emp.n_max);
  for (int n = std::max(0, n_lo); n <= hi; ++n) {
    if (emp.at_risk[n] == 0) continue;
    const double t = n * emp.dt;
    const double at0 = eval_fn(p, t, 0.0);
    const double at1 = p.regular() ? 1.0 : eval_fn(p, t, 1.0);
    k.t0 = std::max(k.t0, std::abs(emp.survival_t0(n) - (1.0 - at0)));
    k.t1 = std::max(k.t1, std::abs(emp.survival_t1(n) - at1));
    k.t = std::max(k.t, std::abs(emp.survival_t(n) - (at1 - at0)));
  }
  k.max = std::max({k.t0, k.t1, k.t});
  return k;
}

EmpiricalTails simulate_ct_skeleton(const Embedding& e, const SimConfig& cfg, double dt) {
  validate_config(cfg);
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  const double t_max = cfg.n_max;
  const int grid = static_cast<int>(std::floor(t_max / dt));

  const double h1 = h_eval(e, 1.0);
  auto make_sampler = [&e, h1]() {
    return std::make_shared<OffspringSampler>(
        [&e](std::size_t K) { return h_coeffs(e, K).coeffs; }, h1, 64, std::size_t{1} << 16U);
  };

  auto outcomes = run_parallel(cfg.replicates, cfg.workers, [&]() {
    auto sampler = make_sampler();
    return [&cfg, &e, sampler, t_max](std::uint64_t i) {
      Rng rng = stream_for(cfg, i);
      std::uint64_t z = 1;
      double t = 0.0;
      for (;;) {
        const double wait = rng.exponential(e.lambda * static_cast<double>(z));
        if (t + wait > t_max) return Outcome{TrajectoryStatus::CensoredHorizon, t_max};
        t += wait;
        const OffspringDraw d = sampler->sample(rng, cfg.z_cap + 1 - z);
        if (d.kind == OffspringDraw::Kind::Infinite) return Outcome{TrajectoryStatus::Exploded, t};
        if (d.kind == OffspringDraw::Kind::AboveLimit) {
          return Outcome{TrajectoryStatus::CensoredCap, t};
        }
        z = z - 1 + d.count;
        if (z == 0) return Outcome{TrajectoryStatus::Extinct, t};
      }
    };
  });

  EmpiricalTails out =
      aggregate(outcomes, std::max(grid, 0), dt, cap_means_survival(cfg.params, cfg.z_cap));
  if (grid < 1) {
    out.warnings.push_back("time grid has fewer than two points; every run is censored at the budget");
  }
  return out;
}

}  // namespace thetagw
