#include "chebcast/schedule.hpp"

#include <cmath>

#include "chebcast/error.hpp"

namespace chebcast {

void ScheduleParams::validate() const {
    if (n_steps < 1) throw InvalidArgument("schedule needs at least one step");
    if (interval < 1) throw InvalidArgument("schedule interval must be >= 1");
    if (warmup < 1 || warmup > n_steps)
        throw InvalidArgument("schedule warmup must lie in [1, n_steps]");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("schedule alpha must be finite and >= 0");
}

ActivationSchedule::ActivationSchedule(int n, std::vector<bool> mask)
    : n_steps_(n), mask_(std::move(mask)) {
    for (int j = 1; j <= n; ++j) (mask_[j - 1] ? full_ : forecast_).push_back(j);
}

bool ActivationSchedule::is_full_pass(int step) const {
    if (step < 1 || step > n_steps_) throw InvalidArgument("step index outside schedule");
    return mask_[step - 1];
}

ActivationSchedule ActivationSchedule::all_full(int n_steps) {
    return uniform_schedule(n_steps, 1, 1);
}

ActivationSchedule adaptive_schedule(const ScheduleParams& params) {
    params.validate();
    const int n = params.n_steps;
    std::vector<bool> mask(static_cast<std::size_t>(n), false);
    for (int j = 1; j <= params.warmup; ++j) mask[j - 1] = true;
    // j grows strictly with r because interval >= 1, so the first j > N ends the scan.
    for (long r = 0;; ++r) {
        const double offset = static_cast<double>(r + 1) * params.interval +
                              params.alpha * static_cast<double>(r * (r + 1)) / 2.0;
        const double j = params.warmup + std::floor(offset);
        if (j > n) break;
        mask[static_cast<std::size_t>(j) - 1] = true;
    }
    return ActivationSchedule(n, std::move(mask));
}

ActivationSchedule uniform_schedule(int n_steps, int interval, int warmup) {
    return adaptive_schedule(ScheduleParams{n_steps, interval, warmup, 0.0});
}

int nfe(const ActivationSchedule& schedule) {
    return static_cast<int>(schedule.full_pass_indices().size());
}

double speedup_ratio(const ActivationSchedule& schedule) {
    return static_cast<double>(schedule.n_steps()) / nfe(schedule);
}

std::string format_indices(const ActivationSchedule& schedule) {
    std::string out;
    for (int j : schedule.full_pass_indices()) {
        if (!out.empty()) out += ',';
        out += std::to_string(j);
    }
    return out;
}

}  // namespace chebcast
