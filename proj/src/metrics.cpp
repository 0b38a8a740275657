#include "locality_sched/metrics.hpp"

#include <stdexcept>

namespace locsched {

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::Stable: return "stable";
    case StabilityVerdict::Suspect: return "suspect";
    case StabilityVerdict::Unstable: return "unstable";
  }
  return "?";
}

StabilityEstimate stability_estimate(std::span<const std::int64_t> slots,
                                     std::span<const std::uint64_t> totals, std::int64_t horizon,
                                     double eps) {
  if (slots.size() != totals.size())
    throw std::invalid_argument("stability_estimate: slot/value size mismatch");
  const std::int64_t window_start = horizon / 2;
  double sum_t = 0.0, sum_y = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] < window_start) continue;
    sum_t += static_cast<double>(slots[i]);
    sum_y += static_cast<double>(totals[i]);
    ++n;
  }
  if (n < 100)
    throw std::invalid_argument(
        "stability_estimate: trace too short (needs >= 100 samples in the final half, got " +
        std::to_string(n) + ")");
  const double mean_t = sum_t / static_cast<double>(n);
  const double mean_y = sum_y / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] < window_start) continue;
    const double dt = static_cast<double>(slots[i]) - mean_t;
    sxx += dt * dt;
    sxy += dt * (static_cast<double>(totals[i]) - mean_y);
  }
  StabilityEstimate est;
  est.slope = sxy / sxx;
  if (est.slope < eps)
    est.verdict = StabilityVerdict::Stable;
  else if (est.slope > 10.0 * eps)
    est.verdict = StabilityVerdict::Unstable;
  else
    est.verdict = StabilityVerdict::Suspect;
  return est;
}

double lyapunov_value(std::span<const std::uint64_t> sub_qlen, const ServiceModel& svc) {
  if (sub_qlen.size() % 3 != 0)
    throw std::invalid_argument("lyapunov_value: expects 3 sub-queue lengths per server");
  double v = 0.0;
  for (std::size_t s = 0; s * 3 < sub_qlen.size(); ++s) {
    double w = static_cast<double>(sub_qlen[3 * s]) / svc.alpha() +
               static_cast<double>(sub_qlen[3 * s + 2]) / svc.gamma();
    if (sub_qlen[3 * s + 1] > 0) w += static_cast<double>(sub_qlen[3 * s + 1]) / svc.beta();
    v += w * w;
  }
  return v;
}

void record_departure(MetricsBundle& bundle, std::int64_t arrival_slot,
                      std::int64_t service_start_slot, LocalityClass cls,
                      std::int64_t departure_slot) {
  if (departure_slot < arrival_slot)
    throw std::logic_error("record_departure: departure precedes arrival");
  ++bundle.departures_total;
  if (arrival_slot < bundle.warmup) return;
  ++bundle.departures_post_warmup;
  bundle.completion_time_sum += static_cast<double>(departure_slot - arrival_slot + 1);
  const auto c = static_cast<std::size_t>(cls);
  ++bundle.completions_by_class[c];
  bundle.service_time_sum[c] += static_cast<double>(departure_slot - service_start_slot);
  ++bundle.service_count[c];
}

void finalize_metrics(MetricsBundle& bundle) {
  if (bundle.departures_post_warmup > 0)
    bundle.mean_completion_time =
        bundle.completion_time_sum / static_cast<double>(bundle.departures_post_warmup);
  for (std::size_t c = 0; c < 3; ++c)
    if (bundle.service_count[c] > 0)
      bundle.mean_service_by_class[c] =
          bundle.service_time_sum[c] / static_cast<double>(bundle.service_count[c]);
}

double MetricsBundle::local_share() const {
  return departures_post_warmup == 0
             ? 0.0
             : static_cast<double>(completions_by_class[0]) /
                   static_cast<double>(departures_post_warmup);
}

double MetricsBundle::rack_share() const {
  return departures_post_warmup == 0
             ? 0.0
             : static_cast<double>(completions_by_class[1]) /
                   static_cast<double>(departures_post_warmup);
}

double MetricsBundle::remote_share() const {
  return departures_post_warmup == 0
             ? 0.0
             : static_cast<double>(completions_by_class[2]) /
                   static_cast<double>(departures_post_warmup);
}

}  // namespace locsched
