#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botcorr/windowing.hpp"

namespace botcorr {

/// RankPearson: Pearson correlation of average ranks (tie-correct).
/// ClassicD2: 1 - 6 * sum(d^2) / (n (n^2 - 1)) on average ranks.
enum class SpearmanMethod { RankPearson, ClassicD2 };

std::string_view to_string(SpearmanMethod method) noexcept;

/// Ranks 1..n; each tie group receives the mean of the positions it spans.
std::vector<double> rank_average(std::span<const double> values);

/// Spearman's rho in [-1, 1].
///
/// Constant inputs follow fixed conventions instead of the undefined 0/0: both constant
/// gives 1.0, exactly one constant gives 0.0. Inputs shorter than two are both constant.
/// Throws ContractError on a length mismatch.
double spearman(std::span<const double> a, std::span<const double> b,
                SpearmanMethod method = SpearmanMethod::RankPearson);

struct CorrelationResult {
  std::string label_a;
  std::string label_b;
  double rho_with_zeros = 0.0;
  /// Empty when fewer than two windows survive idle removal and the constant-series
  /// conventions do not decide the value.
  std::optional<double> rho_without_zeros;
  std::size_t n_with = 0;
  std::size_t n_without = 0;
  SpearmanMethod method = SpearmanMethod::RankPearson;
};

/// rho over the full pair (with zeros) and over the idle-removed pair (without zeros).
CorrelationResult correlate_pair(const SignalPair& pair,
                                 SpearmanMethod method = SpearmanMethod::RankPearson,
                                 IdlePolicy idle = IdlePolicy::BothZero);

}  // namespace botcorr
