#include "botcorr/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "botcorr/errors.hpp"

namespace botcorr {
namespace {

bool is_constant(std::span<const double> values) {
  return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

double classic_d2(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum_d2 += d * d;
  }
  return 1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0));
}

}  // namespace

std::string_view to_string(SpearmanMethod method) noexcept {
  switch (method) {
    case SpearmanMethod::RankPearson: return "rank-pearson";
    case SpearmanMethod::ClassicD2: return "classic-d2";
  }
  return {};
}

std::vector<double> rank_average(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t lhs, std::size_t rhs) { return values[lhs] < values[rhs]; });

  std::vector<double> ranks(values.size());
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
    // positions start..end-1 hold ranks start+1..end
    const double mean_rank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = mean_rank;
    start = end;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b, SpearmanMethod method) {
  if (a.size() != b.size()) {
    throw ContractError("spearman: series lengths differ (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  }
  const bool a_constant = is_constant(a);
  const bool b_constant = is_constant(b);
  if (a_constant && b_constant) return 1.0;
  if (a_constant || b_constant) return 0.0;

  const auto rank_a = rank_average(a);
  const auto rank_b = rank_average(b);
  const double rho =
      method == SpearmanMethod::RankPearson ? pearson(rank_a, rank_b) : classic_d2(rank_a, rank_b);
  return std::clamp(rho, -1.0, 1.0);
}

CorrelationResult correlate_pair(const SignalPair& pair, SpearmanMethod method, IdlePolicy idle) {
  const auto& a = pair.a().values;
  const auto& b = pair.b().values;
  if (a.empty()) throw ContractError("correlate_pair needs at least one window");

  CorrelationResult result;
  result.label_a = pair.a().label;
  result.label_b = pair.b().label;
  result.method = method;
  result.n_with = a.size();
  result.rho_with_zeros = spearman(a, b, method);

  const auto active = remove_idle(pair, idle);
  result.n_without = active.a().values.size();
  if (result.n_without >= 2) {
    result.rho_without_zeros = spearman(active.a().values, active.b().values, method);
  } else {
    // Too few windows to rank; only the constancy of the full series can decide.
    const bool a_constant = is_constant(a);
    const bool b_constant = is_constant(b);
    if (a_constant && b_constant) {
      result.rho_without_zeros = 1.0;
    } else if (a_constant != b_constant) {
      result.rho_without_zeros = 0.0;
    }
  }
  return result;
}

}  // namespace botcorr
