#pragma once

namespace fracml::detail {

/// Kahan-Babuska accumulator; works for real and complex T.
template <typename T>
class CompensatedSum {
public:
    void add(const T& x) {
        const T y = x - carry_;
        const T t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    const T& value() const { return sum_; }

private:
    T sum_{};
    T carry_{};
};

}  // namespace fracml::detail
