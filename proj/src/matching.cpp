#include "mrta/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mrta {
namespace {

constexpr std::size_t kNoColumn = std::numeric_limits<std::size_t>::max();

struct Option {
  std::size_t col = kNoColumn;  // kNoColumn = robot left unassigned
  double value = 0.0;
  double adjusted = 0.0;
  bool solo = true;             // robot covers the task on its own (or non-task option)
  std::uint32_t missing = 0;    // required skills the robot lacks
};

bool covers(std::uint32_t have, std::uint32_t need) { return (need & ~have) == 0; }

std::string shape_text(std::size_t rows, std::size_t cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

// Depth-first branch-and-bound over available robots. Each robot picks
// nothing, idle, or one eligible task. Two upper bounds are combined: the sum
// of remaining row maxima, and a Lagrangian bound in which every coverage
// constraint "robot k on task j needs a holder of skill s on j" is priced by a
// multiplier. Holders of s are paid what robots lacking s are charged, so the
// priced rewards separate per robot and bound every feasible completion.
class Matcher {
 public:
  Matcher(const RewardMatrix& reward, const std::vector<RobotState>& robots,
          const std::vector<TaskSpec>& tasks, const MatchOptions& options)
      : reward_(reward), robots_(robots), tasks_(tasks), m_(tasks.size()) {
    const std::size_t n = robots.size();
    if (reward.rows() != n || reward.cols() != m_ + 1) {
      throw InvalidInput("reward matrix has shape " + shape_text(reward.rows(), reward.cols()) +
                         ", expected N x (M+1) = " + shape_text(n, m_ + 1));
    }
    std::uint32_t team = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!robots[i].available) continue;
      avail_.push_back(i);
      team |= robots[i].capabilities.bits();
      for (std::size_t j = 0; j <= m_; ++j) {
        if (!std::isfinite(reward(i, j))) {
          throw InvalidInput("reward matrix has a non-finite entry at row " + std::to_string(i) +
                             ", column " + std::to_string(j));
        }
      }
    }
    std::vector<std::size_t> eligible;
    for (std::size_t j = 0; j < m_; ++j) {
      if (tasks[j].status.schedulable() && covers(team, tasks[j].required.bits())) {
        eligible.push_back(j);
      }
    }
    for (std::size_t i : avail_) {
      std::vector<Option> opts;
      opts.push_back(Option{});
      if (options.allow_idle) opts.push_back(Option{m_, reward(i, m_), reward(i, m_), true, 0});
      const std::uint32_t cap = robots[i].capabilities.bits();
      for (std::size_t j : eligible) {
        const std::uint32_t miss = tasks[j].required.bits() & ~cap;
        opts.push_back(Option{j, reward(i, j), reward(i, j), miss == 0, miss});
      }
      for (const auto& o : opts) scale_ = std::max(scale_, std::abs(o.value));
      options_.push_back(std::move(opts));
    }
    tol_ = 1e-12 * scale_;
    skill_bits_ = 32 - std::countl_zero(team);
  }

  AssignmentMatrix run(MatchStats* stats) {
    const std::size_t a = avail_.size();
    // Best option that needs no partner.
    std::vector<std::size_t> solo_choice(a, 0);
    for (std::size_t k = 0; k < a; ++k) {
      for (std::size_t o = 1; o < options_[k].size(); ++o) {
        const Option& opt = options_[k][o];
        if (opt.solo && opt.value > options_[k][solo_choice[k]].value) solo_choice[k] = o;
      }
    }
    offer_incumbent(solo_choice);

    bool needs_pricing = false;
    for (std::size_t k = 0; k < a && !needs_pricing; ++k)
      for (const Option& opt : options_[k])
        if (!opt.solo && opt.value > options_[k][solo_choice[k]].value) needs_pricing = true;
    if (needs_pricing && a >= 2) price_coverage(solo_choice);

    order_.resize(a);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<double> max_raw(a), max_adj(a), gap(a);
    for (std::size_t k = 0; k < a; ++k) {
      max_raw[k] = max_adj[k] = 0.0;
      for (const Option& opt : options_[k]) {
        max_raw[k] = std::max(max_raw[k], opt.value);
        max_adj[k] = std::max(max_adj[k], opt.adjusted);
      }
      gap[k] = max_adj[k] - options_[k][solo_choice[k]].value;
      std::stable_sort(options_[k].begin(), options_[k].end(),
                       [&](const Option& x, const Option& y) {
                         if (x.adjusted != y.adjusted) return x.adjusted > y.adjusted;
                         return penalty(k, x) < penalty(k, y);
                       });
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t x, std::size_t y) { return gap[x] > gap[y]; });
    suffix_raw_.assign(a + 1, 0.0);
    suffix_adj_.assign(a + 1, 0.0);
    suffix_cap_.assign(a + 1, 0);
    for (std::size_t d = a; d-- > 0;) {
      const std::size_t k = order_[d];
      suffix_raw_[d] = suffix_raw_[d + 1] + max_raw[k];
      suffix_adj_[d] = suffix_adj_[d + 1] + max_adj[k];
      suffix_cap_[d] = suffix_cap_[d + 1] | robots_[avail_[k]].capabilities.bits();
    }
    lagrange_slack_ = 1e-9 * std::max(scale_, 1.0);

    cover_.assign(m_ + 1, 0);
    count_.assign(m_ + 1, 0);
    current_.assign(a, nullptr);
    leaf_cols_.assign(a, kNoColumn);
    search(0, 0.0, 0.0, 0);

    AssignmentMatrix out(robots_.size(), m_ + 1, 0);
    for (std::size_t k = 0; k < a; ++k) {
      if (best_cols_[k] != kNoColumn) out(avail_[k], best_cols_[k]) = 1;
    }
    if (stats) {
      stats->nodes = nodes_;
      stats->objective = best_value_;
      stats->root_bound = std::min(suffix_raw_[0], suffix_adj_[0]);
    }
    return out;
  }

 private:
  std::uint64_t penalty(std::size_t k, const Option& opt) const {
    if (opt.col == kNoColumn) return 0;
    return static_cast<std::uint64_t>(avail_[k]) * (m_ + 1) + opt.col + 1;
  }

  // choice[k] indexes options_[k]; the assignment must be feasible.
  void offer_incumbent(const std::vector<std::size_t>& choice) {
    double value = 0.0;
    std::uint64_t pen = 0;
    for (std::size_t k = 0; k < choice.size(); ++k) {
      value += options_[k][choice[k]].value;
      pen += penalty(k, options_[k][choice[k]]);
    }
    std::vector<std::size_t> cols(choice.size());
    for (std::size_t k = 0; k < choice.size(); ++k) cols[k] = options_[k][choice[k]].col;
    if (!have_best_ || better(value, pen, cols)) {
      have_best_ = true;
      best_value_ = value;
      best_penalty_ = pen;
      best_cols_ = std::move(cols);
    }
  }

  // Column key for the final tie-break: "none" sorts first, then by column.
  static std::size_t column_key(std::size_t col) { return col == kNoColumn ? 0 : col + 1; }

  bool better(double value, std::uint64_t pen, const std::vector<std::size_t>& cols) const {
    if (value > best_value_ + tol_) return true;
    if (value < best_value_ - tol_) return false;
    if (pen != best_penalty_) return pen < best_penalty_;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] != best_cols_[k]) return column_key(cols[k]) < column_key(best_cols_[k]);
    }
    return false;
  }

  void compute_adjusted(const std::vector<double>& lambda) {
    const std::size_t a = avail_.size();
    const std::size_t s_count = skill_bits_;
    std::vector<double> paid((m_ + 1) * s_count, 0.0);
    for (std::size_t k = 0; k < a; ++k)
      for (const Option& opt : options_[k])
        for (std::size_t s = 0; s < s_count; ++s)
          if ((opt.missing >> s) & 1u) paid[opt.col * s_count + s] += lambda_at(lambda, k, opt.col, s);
    for (std::size_t k = 0; k < a; ++k) {
      const std::uint32_t cap = robots_[avail_[k]].capabilities.bits();
      for (Option& opt : options_[k]) {
        opt.adjusted = opt.value;
        if (opt.col == kNoColumn || opt.col == m_) continue;
        const std::uint32_t req = tasks_[opt.col].required.bits();
        for (std::size_t s = 0; s < s_count; ++s) {
          if ((opt.missing >> s) & 1u) opt.adjusted -= lambda_at(lambda, k, opt.col, s);
          else if ((req >> s) & 1u && (cap >> s) & 1u) opt.adjusted += paid[opt.col * s_count + s];
        }
      }
    }
  }

  double lambda_at(const std::vector<double>& lambda, std::size_t k, std::size_t j,
                   std::size_t s) const {
    return lambda[(k * m_ + j) * skill_bits_ + s];
  }

  // Subgradient ascent on the multipliers; leaves the best bound's priced
  // rewards in Option::adjusted and offers repaired relaxed solutions as
  // incumbents.
  void price_coverage(const std::vector<std::size_t>& solo_choice) {
    const std::size_t a = avail_.size();
    const std::size_t s_count = skill_bits_;
    std::vector<double> lambda(a * m_ * s_count, 0.0);
    std::vector<double> best_lambda = lambda;
    double best_bound = std::numeric_limits<double>::infinity();
    double theta = 1.0;
    int stall = 0;
    std::vector<std::size_t> pick(a);
    std::vector<int> holders((m_ + 1) * s_count);
    std::vector<std::uint32_t> union_caps(m_ + 1);
    for (int iter = 0; iter < 300; ++iter) {
      compute_adjusted(lambda);
      double bound = 0.0;
      for (std::size_t k = 0; k < a; ++k) {
        pick[k] = 0;
        for (std::size_t o = 1; o < options_[k].size(); ++o)
          if (options_[k][o].adjusted > options_[k][pick[k]].adjusted) pick[k] = o;
        bound += options_[k][pick[k]].adjusted;
      }
      if (bound < best_bound - 1e-12 * std::max(scale_, 1.0)) {
        best_bound = bound;
        best_lambda = lambda;
        stall = 0;
      } else if (++stall >= 8) {
        theta *= 0.5;
        stall = 0;
      }

      // Repair: robots on uncovered tasks fall back to their solo choice.
      std::fill(union_caps.begin(), union_caps.end(), 0);
      for (std::size_t k = 0; k < a; ++k) {
        const Option& opt = options_[k][pick[k]];
        if (opt.col != kNoColumn) union_caps[opt.col] |= robots_[avail_[k]].capabilities.bits();
      }
      std::vector<std::size_t> repaired = pick;
      for (std::size_t k = 0; k < a; ++k) {
        const Option& opt = options_[k][pick[k]];
        if (opt.col == kNoColumn || opt.col == m_) continue;
        if (!covers(union_caps[opt.col], tasks_[opt.col].required.bits())) {
          repaired[k] = solo_choice[k];
        }
      }
      offer_incumbent(repaired);

      const double gap = best_bound - best_value_;
      if (gap <= tol_ || theta < 1e-4) break;

      std::fill(holders.begin(), holders.end(), 0);
      for (std::size_t k = 0; k < a; ++k) {
        const Option& opt = options_[k][pick[k]];
        if (opt.col == kNoColumn || opt.col == m_) continue;
        const std::uint32_t cap = robots_[avail_[k]].capabilities.bits();
        for (std::size_t s = 0; s < s_count; ++s)
          if ((cap >> s) & 1u) ++holders[opt.col * s_count + s];
      }
      double norm = 0.0;
      std::vector<double> grad(lambda.size(), 0.0);
      for (std::size_t k = 0; k < a; ++k) {
        for (std::size_t o = 0; o < options_[k].size(); ++o) {
          const Option& opt = options_[k][o];
          if (opt.missing == 0) continue;
          for (std::size_t s = 0; s < s_count; ++s) {
            if (!((opt.missing >> s) & 1u)) continue;
            const std::size_t idx = (k * m_ + opt.col) * s_count + s;
            const double g = (o == pick[k] ? 1.0 : 0.0) - holders[opt.col * s_count + s];
            if (g < 0.0 && lambda[idx] <= 0.0) continue;
            grad[idx] = g;
            norm += g * g;
          }
        }
      }
      if (norm == 0.0) break;
      const double step = theta * std::max(gap, 1e-9 * std::max(scale_, 1.0)) / norm;
      for (std::size_t idx = 0; idx < lambda.size(); ++idx)
        if (grad[idx] != 0.0) lambda[idx] = std::max(0.0, lambda[idx] + step * grad[idx]);
    }
    compute_adjusted(best_lambda);
  }

  void search(std::size_t depth, double raw, double adj, std::uint64_t pen) {
    ++nodes_;
    const std::uint32_t rest = suffix_cap_[depth];
    for (std::size_t j : touched_) {
      if (j != m_ && !covers(cover_[j] | rest, tasks_[j].required.bits())) return;
    }
    if (depth == order_.size()) {
      for (std::size_t k = 0; k < current_.size(); ++k) leaf_cols_[k] = current_[k]->col;
      if (better(raw, pen, leaf_cols_)) {
        best_value_ = raw;
        best_penalty_ = pen;
        best_cols_ = leaf_cols_;
      }
      return;
    }
    const double bound =
        std::min(raw + suffix_raw_[depth], adj + suffix_adj_[depth] + lagrange_slack_);
    if (bound < best_value_ - tol_) return;
    if (bound <= best_value_ + tol_ && pen > best_penalty_) return;

    const std::size_t k = order_[depth];
    const std::uint32_t cap = robots_[avail_[k]].capabilities.bits();
    const std::uint32_t later = suffix_cap_[depth + 1];
    for (const Option& opt : options_[k]) {
      const std::size_t j = opt.col;
      if (j != kNoColumn && j != m_ &&
          !covers(cover_[j] | cap | later, tasks_[j].required.bits())) {
        continue;
      }
      current_[k] = &opt;
      if (j == kNoColumn) {
        search(depth + 1, raw, adj, pen);
        continue;
      }
      const std::uint32_t saved = cover_[j];
      cover_[j] |= cap;
      if (count_[j]++ == 0) touched_.push_back(j);
      search(depth + 1, raw + opt.value, adj + opt.adjusted, pen + penalty(k, opt));
      if (--count_[j] == 0) touched_.pop_back();
      cover_[j] = saved;
    }
  }

  const RewardMatrix& reward_;
  const std::vector<RobotState>& robots_;
  const std::vector<TaskSpec>& tasks_;
  std::size_t m_;
  std::vector<std::size_t> avail_;
  std::vector<std::vector<Option>> options_;
  double scale_ = 0.0;
  double tol_ = 0.0;
  double lagrange_slack_ = 0.0;
  std::size_t skill_bits_ = 0;

  std::vector<std::size_t> order_;
  std::vector<double> suffix_raw_;
  std::vector<double> suffix_adj_;
  std::vector<std::uint32_t> suffix_cap_;

  std::vector<std::uint32_t> cover_;
  std::vector<int> count_;
  std::vector<std::size_t> touched_;
  std::vector<const Option*> current_;
  std::uint64_t nodes_ = 0;

  bool have_best_ = false;
  double best_value_ = 0.0;
  std::uint64_t best_penalty_ = 0;
  std::vector<std::size_t> leaf_cols_;
  std::vector<std::size_t> best_cols_;
};

}  // namespace

AssignmentMatrix match(const RewardMatrix& reward, const std::vector<RobotState>& robots,
                       const std::vector<TaskSpec>& tasks, const MatchOptions& options,
                       MatchStats* stats) {
  Matcher matcher(reward, robots, tasks, options);
  return matcher.run(stats);
}

double assignment_value(const AssignmentMatrix& assignment, const RewardMatrix& reward) {
  if (assignment.rows() != reward.rows() || assignment.cols() != reward.cols()) {
    throw InvalidInput("assignment and reward shapes differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < reward.rows(); ++i)
    for (std::size_t j = 0; j < reward.cols(); ++j)
      if (assignment(i, j)) total += reward(i, j);
  return total;
}

std::optional<std::string> find_assignment_violation(const AssignmentMatrix& assignment,
                                                     const std::vector<RobotState>& robots,
                                                     const std::vector<TaskSpec>& tasks) {
  const std::size_t n = robots.size();
  const std::size_t m = tasks.size();
  if (assignment.rows() != n || assignment.cols() != m + 1) {
    return "assignment has shape " + shape_text(assignment.rows(), assignment.cols()) +
           ", expected " + shape_text(n, m + 1);
  }
  std::vector<std::uint32_t> union_caps(m, 0);
  std::vector<bool> used(m, false);
  for (std::size_t i = 0; i < n; ++i) {
    int row_sum = 0;
    for (std::size_t j = 0; j <= m; ++j) {
      const auto v = assignment(i, j);
      if (v > 1) return "assignment entry (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") is not binary";
      if (!v) continue;
      ++row_sum;
      if (!robots[i].available) {
        return "robot " + std::to_string(i) + " is assigned but not available";
      }
      if (j < m) {
        if (!tasks[j].status.schedulable()) {
          return "task " + std::to_string(j) + " is assigned but not schedulable";
        }
        used[j] = true;
        union_caps[j] |= robots[i].capabilities.bits();
      }
    }
    if (row_sum > 1) return "robot " + std::to_string(i) + " is assigned more than one column";
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (used[j] && !covers(union_caps[j], tasks[j].required.bits())) {
      return "coalition for task " + std::to_string(j) + " does not cover its required skills";
    }
  }
  return std::nullopt;
}

AssignmentMatrix prune_redundant(const AssignmentMatrix& assignment,
                                 const std::vector<RobotState>& robots,
                                 const std::vector<TaskSpec>& tasks, double speed) {
  AssignmentMatrix out = assignment;
  for (std::size_t j = 0; j < tasks.size(); ++j) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < out.rows(); ++i)
      if (out(i, j)) members.push_back(i);
    auto far_first = [&](std::size_t x, std::size_t y) {
      const double tx = travel_time(robots[x].position, tasks[j].position, speed);
      const double ty = travel_time(robots[y].position, tasks[j].position, speed);
      return tx != ty ? tx > ty : x > y;
    };
    std::sort(members.begin(), members.end(), far_first);
    bool removed = true;
    while (removed) {
      removed = false;
      for (std::size_t c = 0; c < members.size(); ++c) {
        std::uint32_t rest = 0;
        for (std::size_t o = 0; o < members.size(); ++o)
          if (o != c) rest |= robots[members[o]].capabilities.bits();
        if (covers(rest, tasks[j].required.bits())) {
          out(members[c], j) = 0;
          members.erase(members.begin() + static_cast<std::ptrdiff_t>(c));
          removed = true;
          break;
        }
      }
    }
  }
  return out;
}

std::size_t premove_target(const RewardMatrix& reward, std::size_t robot) {
  if (robot >= reward.rows() || reward.cols() == 0) {
    throw InvalidInput("premove_target: robot index out of range");
  }
  std::size_t best = kNoColumn;
  for (std::size_t j = 0; j + 1 < reward.cols(); ++j) {
    const double v = reward(robot, j);
    if (!std::isfinite(v)) continue;
    if (best == kNoColumn || v > reward(robot, best)) best = j;
  }
  if (best == kNoColumn) {
    throw InvalidInput("premove_target: robot " + std::to_string(robot) +
                       " has no finite task reward");
  }
  return best;
}

}  // namespace mrta
