#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "trinv/tridiag.hpp"

namespace trinv::analytics {

struct RowSumVector {
    enum class Case { c2_b1, general };
    std::vector<double> s;
    Case case_tag = Case::general;
};

// Row sums of Q^{-1} in O(n) from the factor vectors.  The c = 2, b = +1
// combination has its own closed form; every other case (including c = 2
// with b = -1) shares the general one.
RowSumVector row_sums(const TridiagSpec& spec);

// Value held as mantissa * exp(log_scale) so partial sums of kappa_i^2 stay
// usable past the double range.
struct ScaledValue {
    double mantissa = 0.0;
    double log_scale = 0.0;
    double value() const { return mantissa * std::exp(log_scale); }
};

// zeta_j = sum_{i=0}^{j-1} kappa_i^2, c > 2 only.
double zeta(const TridiagSpec& spec, std::int64_t j);
ScaledValue zeta_scaled(const TridiagSpec& spec, std::int64_t j);

// tr(Q^{-1}): closed form for c >= 2, direct O(n) summation below.
double trace_inverse(const TridiagSpec& spec);

// tr(Q^{-2}): closed form for c > 2, prefix-sum direct evaluation otherwise.
double trace_inverse_squared(const TridiagSpec& spec);

// Large-n limits of tr(Q^{-1})/n and tr(Q^{-2})/n^2; both require c > 2.
double limit_normalized_trace(const TridiagSpec& spec);
double limit_normalized_trace_sq(const TridiagSpec& spec);

struct TraceReport {
    double trace_inv = 0.0;
    double trace_inv_sq = 0.0;
    std::int64_t n = 0;
    double normalized_trace = 0.0;    // trace_inv / n
    double normalized_trace_sq = 0.0; // trace_inv_sq / n^2
    std::optional<double> limit_normalized_trace;    // present iff c > 2
    std::optional<double> limit_normalized_trace_sq; // present iff c > 2
};
TraceReport trace_report(const TridiagSpec& spec);

} // namespace trinv::analytics
