#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>

#include "mcsp/errors.hpp"

namespace mcsp {

using Value = int32_t;

/// One weight plus n-1 additive costs; index 0 is the weight.
/// All criteria are non-negative integers so dominance is exact.
class CostVector {
public:
    static constexpr int max_criteria = 6;

    CostVector() = default;

    explicit CostVector(int n, Value fill = 0) : size_(static_cast<int8_t>(n)) {
        require(n >= 1 && n <= max_criteria, ErrorCode::InvalidValue, "criteria count out of range");
        v_.fill(0);
        for (int i = 0; i < n; ++i) v_[i] = fill;
    }

    CostVector(std::initializer_list<Value> init) : size_(static_cast<int8_t>(init.size())) {
        require(init.size() >= 1 && init.size() <= max_criteria, ErrorCode::InvalidValue,
                "criteria count out of range");
        v_.fill(0);
        int i = 0;
        for (Value x : init) v_[i++] = x;
    }

    int size() const { return size_; }
    Value operator[](int i) const { return v_[static_cast<size_t>(i)]; }
    Value& operator[](int i) { return v_[static_cast<size_t>(i)]; }
    Value weight() const { return v_[0]; }

    friend bool operator==(const CostVector& a, const CostVector& b) {
        if (a.size_ != b.size_) return false;
        for (int i = 0; i < a.size_; ++i)
            if (a.v_[i] != b.v_[i]) return false;
        return true;
    }
    friend bool operator!=(const CostVector& a, const CostVector& b) { return !(a == b); }

    std::string to_string() const {
        std::string s = "(";
        for (int i = 0; i < size_; ++i) {
            if (i) s += ",";
            s += std::to_string(v_[i]);
        }
        return s + ")";
    }

private:
    std::array<Value, max_criteria> v_{};
    int8_t size_ = 0;
};

/// Strict dominance: a <= b component-wise and a != b.
inline bool dominates(const CostVector& a, const CostVector& b) {
    require(a.size() == b.size(), ErrorCode::InvalidValue, "dominance on mismatched lengths");
    bool strict = false;
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

/// a <= b component-wise (equality allowed everywhere).
inline bool leq_all(const CostVector& a, const CostVector& b) {
    for (int i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

/// Canonical order: weight ascending, ties by lexicographic cost order.
/// Index 0 is the weight, so this is plain lexicographic comparison.
inline bool canonical_less(const CostVector& a, const CostVector& b) {
    int n = a.size() < b.size() ? a.size() : b.size();
    for (int i = 0; i < n; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

/// Component-wise sum; overflow past Value range is an error.
inline CostVector checked_add(const CostVector& a, const CostVector& b) {
    require(a.size() == b.size(), ErrorCode::InvalidValue, "sum of mismatched lengths");
    CostVector out(a.size());
    for (int i = 0; i < a.size(); ++i) {
        int64_t s = static_cast<int64_t>(a[i]) + b[i];
        require(s <= INT32_MAX, ErrorCode::ArithmeticOverflow, "cost component overflow");
        out[i] = static_cast<Value>(s);
    }
    return out;
}

inline CostVector component_min(const CostVector& a, const CostVector& b) {
    CostVector out(a.size());
    for (int i = 0; i < a.size(); ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
    return out;
}

inline CostVector component_max(const CostVector& a, const CostVector& b) {
    CostVector out(a.size());
    for (int i = 0; i < a.size(); ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
    return out;
}

}  // namespace mcsp
