#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cpc {

struct BanditArm {
  std::string label;
  double total_reward = 0.0;
  double pulled_time = 0.0;  // n_i, seconds
};

/// UCB1 over arms whose pull counts are measured in construction seconds.
struct BanditState {
  std::vector<BanditArm> arms;
  double total_time = 0.0;  // n

  static BanditState with_labels(std::vector<std::string> labels);

  void remove_arm(std::size_t index);
  int find(const std::string& label) const;
};

/// Minimum time credited per pull.
inline constexpr double kMinPullTime = 0.001;

/// x_i + sqrt(2 ln n / n_i). Requires n_i > 0.
double ucb1_score(const BanditArm& arm, double total_time);

/// Unpulled arms first (lowest index), else the highest score, ties to the
/// lowest index. Requires at least one arm.
std::size_t ucb1_select(const BanditState& bandit);

/// Credits max(elapsed, kMinPullTime) seconds to the arm and the total; an
/// accepted pull adds a reward of 1.
void update_bandit(BanditState& bandit, std::size_t arm, double elapsed_seconds, bool accepted);

}  // namespace cpc
