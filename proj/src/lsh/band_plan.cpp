#include <cmath>

#include <fmt/format.h>

#include "corpusdedup/error.hpp"
#include "corpusdedup/lsh.hpp"

namespace corpusdedup {
namespace {

constexpr double kStep = 0.001;
// Objectives closer than this are ties, settled by the (r, b) order.
constexpr double kTie = 1e-12;

double area(double lo, double hi, auto&& f) {
  const auto n = std::max<long>(1, std::lround(std::ceil((hi - lo) / kStep - 1e-9)));
  const double dx = (hi - lo) / static_cast<double>(n);
  double sum = 0.0;
  for (long i = 0; i < n; ++i) sum += f(lo + (static_cast<double>(i) + 0.5) * dx);
  return sum * dx;
}

}  // namespace

double candidate_probability(double s, const BandPlan& plan) noexcept {
  return 1.0 - std::pow(1.0 - std::pow(s, plan.rows), plan.bands);
}

BandPlan optimal_bands(double threshold, std::size_t k) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::InvalidThreshold, fmt::format("threshold {} outside (0, 1)", threshold));
  }
  if (k == 0) throw Error(ErrorCode::InvalidK, "k must be at least 1");

  BandPlan best{1, 1, threshold};
  double best_err = INFINITY;
  for (std::size_t r = 1; r <= k; ++r) {
    for (std::size_t b = 1; b * r <= k; ++b) {
      const BandPlan p{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(r), threshold};
      const double fp = area(0.0, threshold, [&](double s) { return candidate_probability(s, p); });
      const double fn = area(threshold, 1.0, [&](double s) { return 1.0 - candidate_probability(s, p); });
      if (fp + fn < best_err - kTie) {
        best_err = fp + fn;
        best = p;
      }
    }
  }
  return best;
}

}  // namespace corpusdedup
