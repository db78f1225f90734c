#include "ultrajet/trend.hpp"

#include <cmath>
#include <vector>

#include "ultrajet/error.hpp"

namespace ultrajet {

const char* to_string(Trend t) noexcept {
  switch (t) {
    case Trend::Bounded: return "bounded";
    case Trend::Diverging: return "diverging";
    case Trend::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Trend classify_log_trend(std::span<const double> w, const TrendOptions& opts) {
  if (w.size() < 2) throw Error(ErrorKind::InvalidArgument, "trend window needs >= 2 samples");
  const double growth = w.back() - w.front();
  if (growth <= std::log1p(opts.growth_tol)) return Trend::Bounded;
  const double slack = std::log1p(opts.noise);
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] < w[i - 1] - slack) return Trend::Inconclusive;
  }
  return Trend::Diverging;
}

Trend classify_trend(std::span<const double> w, const TrendOptions& opts) {
  std::vector<double> logs;
  logs.reserve(w.size());
  for (double v : w) {
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, "trend samples must be positive");
    logs.push_back(std::log(v));
  }
  return classify_log_trend(logs, opts);
}

}  // namespace ultrajet
