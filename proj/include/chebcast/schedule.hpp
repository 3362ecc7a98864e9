#pragma once

#include <string>
#include <vector>

namespace chebcast {

/// Unified activation-schedule parameters.
///
/// n_steps   total discretization steps N
/// interval  length of the first forecast interval
/// warmup    number of leading steps that always run the full denoiser
/// alpha     quadratic growth rate of the interval (0 gives a fixed interval)
struct ScheduleParams {
    int n_steps = 50;
    int interval = 1;
    int warmup = 1;
    double alpha = 0.0;

    /// Throws InvalidArgument unless 1 <= warmup <= n_steps, interval >= 1, alpha >= 0.
    void validate() const;
};

/// Partition of the 1-based step indices {1..N} into full passes and forecasts.
class ActivationSchedule {
public:
    [[nodiscard]] int n_steps() const noexcept { return n_steps_; }
    [[nodiscard]] const std::vector<int>& full_pass_indices() const noexcept { return full_; }
    [[nodiscard]] const std::vector<int>& forecast_indices() const noexcept { return forecast_; }
    [[nodiscard]] bool is_full_pass(int step) const;

    /// Every step is a full pass.
    static ActivationSchedule all_full(int n_steps);

    friend bool operator==(const ActivationSchedule&, const ActivationSchedule&) = default;

private:
    friend ActivationSchedule adaptive_schedule(const ScheduleParams&);
    ActivationSchedule(int n, std::vector<bool> mask);

    int n_steps_ = 0;
    std::vector<bool> mask_;  // mask_[j - 1] is true for full passes
    std::vector<int> full_;
    std::vector<int> forecast_;
};

/// Full passes at {1..W} and at W + floor((r+1) N + alpha r(r+1)/2) for r = 0, 1, ...
[[nodiscard]] ActivationSchedule adaptive_schedule(const ScheduleParams& params);

/// adaptive_schedule with alpha = 0.
[[nodiscard]] ActivationSchedule uniform_schedule(int n_steps, int interval, int warmup);

[[nodiscard]] int nfe(const ActivationSchedule& schedule);

/// N / NFE.
[[nodiscard]] double speedup_ratio(const ActivationSchedule& schedule);

/// Comma-separated 1-based full-pass indices, e.g. "1,2,3,4,5,7,12,20,31,45".
[[nodiscard]] std::string format_indices(const ActivationSchedule& schedule);

}  // namespace chebcast
