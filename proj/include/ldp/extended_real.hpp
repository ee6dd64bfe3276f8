#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ldp {

// A value in R u {-inf, +inf}. Backed by an IEEE double, which already
// carries both infinities with the right total order; NaN is excluded at
// every entry point. Opposite infinities never cancel: adding +inf to -inf
// throws instead of producing NaN.
class ExtendedReal {
  public:
    constexpr ExtendedReal() noexcept : v_(0.0) {}

    ExtendedReal(double v) : v_(v) {
        if (std::isnan(v))
            throw std::invalid_argument("ExtendedReal: NaN is not a value");
    }

    static constexpr ExtendedReal pos_inf() noexcept {
        return ExtendedReal(tag_pos_inf{});
    }
    static constexpr ExtendedReal neg_inf() noexcept {
        return ExtendedReal(tag_neg_inf{});
    }

    bool is_finite() const noexcept { return std::isfinite(v_); }
    bool is_pos_inf() const noexcept {
        return v_ == std::numeric_limits<double>::infinity();
    }
    bool is_neg_inf() const noexcept {
        return v_ == -std::numeric_limits<double>::infinity();
    }

    // Finite payload; querying an infinity is a logic error.
    double value() const {
        if (!is_finite())
            throw std::logic_error("ExtendedReal: value() on an infinity");
        return v_;
    }

    // Raw double, infinities included. The carrier for comparisons and IO.
    double as_double() const noexcept { return v_; }

    ExtendedReal operator-() const noexcept {
        ExtendedReal r;
        r.v_ = -v_;
        return r;
    }

    ExtendedReal& operator+=(ExtendedReal o) {
        if ((is_pos_inf() && o.is_neg_inf()) || (is_neg_inf() && o.is_pos_inf()))
            throw std::logic_error("ExtendedReal: +inf and -inf do not add");
        v_ += o.v_;
        return *this;
    }

    friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        a += b;
        return a;
    }
    friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) {
        a += -b;
        return a;
    }

    // Scaling by a positive factor; keeps infinities on their side.
    friend ExtendedReal scale(double c, ExtendedReal a) {
        if (!(c > 0.0))
            throw std::invalid_argument("scale: factor must be positive");
        ExtendedReal r;
        r.v_ = c * a.v_;
        return r;
    }

    friend bool operator==(ExtendedReal a, ExtendedReal b) noexcept {
        return a.v_ == b.v_;
    }
    friend bool operator!=(ExtendedReal a, ExtendedReal b) noexcept {
        return a.v_ != b.v_;
    }
    friend bool operator<(ExtendedReal a, ExtendedReal b) noexcept {
        return a.v_ < b.v_;
    }
    friend bool operator<=(ExtendedReal a, ExtendedReal b) noexcept {
        return a.v_ <= b.v_;
    }
    friend bool operator>(ExtendedReal a, ExtendedReal b) noexcept {
        return a.v_ > b.v_;
    }
    friend bool operator>=(ExtendedReal a, ExtendedReal b) noexcept {
        return a.v_ >= b.v_;
    }

  private:
    struct tag_pos_inf {};
    struct tag_neg_inf {};
    constexpr explicit ExtendedReal(tag_pos_inf) noexcept
        : v_(std::numeric_limits<double>::infinity()) {}
    constexpr explicit ExtendedReal(tag_neg_inf) noexcept
        : v_(-std::numeric_limits<double>::infinity()) {}

    double v_;
};

} // namespace ldp
