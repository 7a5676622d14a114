#include "cpc/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpc {

BanditState BanditState::with_labels(std::vector<std::string> labels) {
  BanditState b;
  for (auto& l : labels) b.arms.push_back({std::move(l), 0.0, 0.0});
  return b;
}

void BanditState::remove_arm(std::size_t index) {
  total_time -= arms.at(index).pulled_time;
  arms.erase(arms.begin() + static_cast<std::ptrdiff_t>(index));
}

int BanditState::find(const std::string& label) const {
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

double ucb1_score(const BanditArm& arm, double total_time) {
  const double mean = arm.total_reward / arm.pulled_time;
  // ln n is negative below one second of total time; the bonus bottoms out at 0.
  return mean + std::sqrt(2.0 * std::max(std::log(total_time), 0.0) / arm.pulled_time);
}

std::size_t ucb1_select(const BanditState& bandit) {
  if (bandit.arms.empty()) throw std::invalid_argument("ucb1_select: no arms");
  for (std::size_t i = 0; i < bandit.arms.size(); ++i) {
    if (bandit.arms[i].pulled_time == 0.0) return i;
  }
  std::size_t best = 0;
  double best_score = ucb1_score(bandit.arms[0], bandit.total_time);
  for (std::size_t i = 1; i < bandit.arms.size(); ++i) {
    const double s = ucb1_score(bandit.arms[i], bandit.total_time);
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

void update_bandit(BanditState& bandit, std::size_t arm, double elapsed_seconds, bool accepted) {
  const double t = std::max(elapsed_seconds, kMinPullTime);
  BanditArm& a = bandit.arms.at(arm);
  a.pulled_time += t;
  bandit.total_time += t;
  if (accepted) a.total_reward += 1.0;
}

}  // namespace cpc
