#include "mrta/exact_solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

namespace mrta {

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kOptimal: return "optimal";
    case SolverStatus::kFeasibleTimeout: return "feasible-timeout";
    case SolverStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

SolverStatus solver_status_from_string(const std::string& text) {
  if (text == "optimal") return SolverStatus::kOptimal;
  if (text == "feasible-timeout") return SolverStatus::kFeasibleTimeout;
  if (text == "infeasible") return SolverStatus::kInfeasible;
  throw InvalidInput("unknown solver status '" + text + "'");
}

std::vector<std::uint32_t> minimal_covering_coalitions(const ProblemInstance& instance,
                                                       std::size_t task) {
  const std::size_t n = instance.num_robots();
  if (n > 20) throw InvalidInput("coalition enumeration supports at most 20 robots");
  const SkillSet& need = instance.task(task).required;
  auto covers = [&](std::uint32_t mask) {
    SkillSet team(instance.skill_count());
    for (std::size_t r = 0; r < n; ++r)
      if (mask >> r & 1u) team = team | instance.robot(r).capabilities;
    return team.covers(need);
  };

  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (!covers(mask)) continue;
    bool minimal = true;
    for (std::size_t r = 0; r < n && minimal; ++r)
      if ((mask >> r & 1u) && covers(mask & ~(1u << r))) minimal = false;
    if (minimal) out.push_back(mask);
  }
  auto members = [n](std::uint32_t mask) {
    std::vector<std::size_t> v;
    for (std::size_t r = 0; r < n; ++r)
      if (mask >> r & 1u) v.push_back(r);
    return v;
  };
  std::sort(out.begin(), out.end(),
            [&](std::uint32_t a, std::uint32_t b) { return members(a) < members(b); });
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Improvements smaller than this are treated as ties.
constexpr double kImproveEps = 1e-9;

class BranchAndBound {
 public:
  BranchAndBound(const ProblemInstance& inst, double time_limit)
      : inst_(inst),
        n_(inst.num_robots()),
        m_(inst.num_tasks()),
        deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(time_limit))) {
    // Locations: tasks 0..M-1, robot start depots M..M+N-1.
    const std::size_t locs = m_ + n_;
    auto loc_point = [&](std::size_t l) {
      return l < m_ ? inst.task(l).position : inst.start_positions()[l - m_];
    };
    to_task_ = Matrix<double>(locs, m_);
    to_end_ = Matrix<double>(locs, n_);
    for (std::size_t l = 0; l < locs; ++l) {
      for (std::size_t j = 0; j < m_; ++j)
        to_task_(l, j) = inst.travel(loc_point(l), inst.task(j).position);
      for (std::size_t r = 0; r < n_; ++r)
        to_end_(l, r) = inst.travel(loc_point(l), inst.end_positions()[r]);
    }

    coalitions_.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) coalitions_[j] = minimal_covering_coalitions(inst, j);

    for (std::size_t j = 0; j < m_; ++j) pred_mask_.push_back(mask_of(inst.predecessors(j)));

    // Remaining critical path from the start of each task, including the
    // shortest possible return of a contributing robot.
    tail_.assign(m_, 0.0);
    const auto& topo = inst.topological_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      const std::size_t j = *it;
      double ret = kInf;
      for (std::size_t r = 0; r < n_; ++r) {
        if ((inst.robot(r).capabilities & inst.task(j).required).empty()) continue;
        ret = std::min(ret, to_end_(j, r));
      }
      double after = ret;
      for (auto s : inst.successors(j)) after = std::max(after, tail_[s]);
      tail_[j] = inst.task(j).duration + after;
    }

    for (std::size_t s = 0; s < inst.skill_count(); ++s) {
      std::vector<std::size_t> holders;
      for (std::size_t r = 0; r < n_; ++r)
        if (inst.robot(r).capabilities.has(s)) holders.push_back(r);
      skill_holders_.push_back(std::move(holders));
    }

    free_.resize(n_);
    loc_.resize(n_);
    for (std::size_t r = 0; r < n_; ++r) {
      free_[r] = inst.robot(r).remaining_duration;
      loc_[r] = m_ + r;
    }
    finish_.assign(m_, 0.0);
    est_.assign(m_, 0.0);
  }

  SolverResult run() {
    const auto t0 = Clock::now();
    SolverResult result;
    for (std::size_t j = 0; j < m_; ++j) {
      if (coalitions_[j].empty()) {
        result.status = SolverStatus::kInfeasible;
        result.wall_time = seconds_since(t0);
        return result;
      }
    }
    dfs(-kInf, m_);
    result.explored_nodes = nodes_;
    result.incumbents = trace_;
    result.status = timed_out_ ? SolverStatus::kFeasibleTimeout : SolverStatus::kOptimal;
    result.schedule = materialize();
    result.wall_time = seconds_since(t0);
    return result;
  }

 private:
  struct Step {
    std::size_t task;
    std::uint32_t coalition;
    double start;
  };

  static std::uint64_t mask_of(const std::vector<std::size_t>& tasks) {
    std::uint64_t mk = 0;
    for (auto t : tasks) mk |= (1ull << t);
    return mk;
  }

  static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  double lower_bound(double last_start) {
    double lb = 0.0;
    for (std::size_t r = 0; r < n_; ++r) lb = std::max(lb, free_[r] + to_end_(loc_[r], r));

    for (auto j : inst_.topological_order()) {
      if (scheduled_ >> j & 1ull) continue;
      double est = last_start;
      for (auto p : inst_.predecessors(j)) {
        est = std::max(est, (scheduled_ >> p & 1ull) ? finish_[p]
                                                     : est_[p] + inst_.task(p).duration);
      }
      const SkillSet& need = inst_.task(j).required;
      for (std::size_t s = 0; s < skill_holders_.size(); ++s) {
        if (!need.has(s)) continue;
        double arrive = kInf;
        for (auto r : skill_holders_[s])
          arrive = std::min(arrive, free_[r] + to_task_(loc_[r], j));
        est = std::max(est, arrive);
      }
      est_[j] = est;
      lb = std::max(lb, est + tail_[j]);
    }

    // Work requiring skill s must be carried by the robots holding s.
    for (std::size_t s = 0; s < skill_holders_.size(); ++s) {
      double work = 0.0;
      for (std::size_t j = 0; j < m_; ++j)
        if (!(scheduled_ >> j & 1ull) && inst_.task(j).required.has(s))
          work += inst_.task(j).duration;
      if (work == 0.0 || skill_holders_[s].empty()) continue;
      double avail = 0.0;
      for (auto r : skill_holders_[s]) avail += std::max(free_[r], last_start);
      lb = std::max(lb, (avail + work) / static_cast<double>(skill_holders_[s].size()));
    }
    return lb;
  }

  void dfs(double last_start, std::size_t last_task) {
    ++nodes_;
    if (timed_out_) return;
    if (have_incumbent_ && (nodes_ & 1023u) == 0 && Clock::now() > deadline_) {
      timed_out_ = true;
      return;
    }

    if (path_.size() == m_) {
      double ms = 0.0;
      for (std::size_t r = 0; r < n_; ++r) ms = std::max(ms, free_[r] + to_end_(loc_[r], r));
      if (!have_incumbent_ || ms < best_ - kImproveEps) {
        best_ = ms;
        best_path_ = path_;
        have_incumbent_ = true;
        trace_.push_back({nodes_, ms});
      }
      return;
    }

    if (have_incumbent_ && lower_bound(last_start) >= best_ - kImproveEps) return;

    for (std::size_t j = 0; j < m_; ++j) {
      if (scheduled_ >> j & 1ull) continue;
      if ((pred_mask_[j] & scheduled_) != pred_mask_[j]) continue;
      double ready = 0.0;
      for (auto p : inst_.predecessors(j)) ready = std::max(ready, finish_[p]);

      for (std::uint32_t coalition : coalitions_[j]) {
        double start = ready;
        for (std::size_t r = 0; r < n_; ++r)
          if (coalition >> r & 1u) start = std::max(start, free_[r] + to_task_(loc_[r], j));
        // Canonical order: non-decreasing (start, task index).
        if (start < last_start || (start == last_start && j < last_task)) continue;

        const double end = start + inst_.task(j).duration;
        std::vector<std::pair<double, std::size_t>> saved;
        saved.reserve(n_);
        for (std::size_t r = 0; r < n_; ++r) {
          if (!(coalition >> r & 1u)) continue;
          saved.emplace_back(free_[r], loc_[r]);
          free_[r] = end;
          loc_[r] = j;
        }
        scheduled_ |= (1ull << j);
        finish_[j] = end;
        path_.push_back({j, coalition, start});

        dfs(start, j);

        path_.pop_back();
        scheduled_ &= ~(1ull << j);
        std::size_t k = 0;
        for (std::size_t r = 0; r < n_; ++r) {
          if (!(coalition >> r & 1u)) continue;
          free_[r] = saved[k].first;
          loc_[r] = saved[k].second;
          ++k;
        }
        if (timed_out_) return;
      }
    }
  }

  Schedule materialize() const {
    Schedule s;
    for (const auto& step : best_path_) {
      const double end = step.start + inst_.task(step.task).duration;
      for (std::size_t r = 0; r < n_; ++r)
        if (step.coalition >> r & 1u) s.entries.push_back({r, step.task, step.start, end});
    }
    sort_entries(s);
    s.makespan = m_ == 0 ? makespan(s, inst_) : best_;
    return s;
  }

  const ProblemInstance& inst_;
  std::size_t n_;
  std::size_t m_;
  Clock::time_point deadline_;

  Matrix<double> to_task_;
  Matrix<double> to_end_;
  std::vector<std::vector<std::uint32_t>> coalitions_;
  std::vector<std::uint64_t> pred_mask_;
  std::vector<double> tail_;
  std::vector<std::vector<std::size_t>> skill_holders_;

  std::vector<double> free_;
  std::vector<std::size_t> loc_;
  std::vector<double> finish_;
  std::vector<double> est_;
  std::uint64_t scheduled_ = 0;
  std::vector<Step> path_;

  bool have_incumbent_ = false;
  double best_ = kInf;
  std::vector<Step> best_path_;
  std::vector<IncumbentUpdate> trace_;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace

SolverResult solve_optimal(const ProblemInstance& instance, double time_limit_seconds) {
  if (instance.num_tasks() > 64) throw InvalidInput("exact solver supports at most 64 tasks");
  if (instance.num_robots() > 20) throw InvalidInput("exact solver supports at most 20 robots");
  if (!(time_limit_seconds > 0.0)) throw InvalidInput("time limit must be positive");
  BranchAndBound bb(instance, time_limit_seconds);
  return bb.run();
}

}  // namespace mrta
