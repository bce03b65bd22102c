#pragma once

#include <cmath>
#include <cstdint>

namespace sawecho {

/// Running mean and variance (Welford), mergeable with Chan's pairwise rule.
class RunningStats {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningStats& other) {
        if (other.count_ == 0) return;
        if (count_ == 0) {
            *this = other;
            return;
        }
        const double n1 = static_cast<double>(count_);
        const double n2 = static_cast<double>(other.count_);
        const double delta = other.mean_ - mean_;
        const double total = n1 + n2;
        mean_ += delta * n2 / total;
        m2_ += other.m2_ + delta * delta * n1 * n2 / total;
        count_ += other.count_;
    }

    std::int64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }

    /// Sample standard deviation; 0 for fewer than two values.
    double stddev() const noexcept {
        return count_ > 1 ? std::sqrt(std::max(m2_, 0.0) / static_cast<double>(count_ - 1)) : 0.0;
    }

    double standard_error() const noexcept {
        return count_ > 0 ? stddev() / std::sqrt(static_cast<double>(count_)) : 0.0;
    }

private:
    std::int64_t count_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

}  // namespace sawecho
