#pragma once

#include <utility>

namespace trinv::chebyshev {

// Chebyshev polynomial of the second kind U_n(x), for any real x and any
// integer index.  Negative indices follow U_{-1} = 0 and U_{-n} = -U_{n-2}.
//
// For |x| > 1 the magnitude grows like exp(n * acosh|x|); overflow to +/-inf
// for very large n is deliberate.  Callers that need bounded quantities in
// that regime must work with normalized ratios instead of raw values.
double eval_U(long long n, double x);

// (U_n(x), U_{n-1}(x)) with the argument-dependent setup done once, so hot
// loops pay for a single acos/log per evaluation point.
std::pair<double, double> eval_U_pair(long long n, double x);

} // namespace trinv::chebyshev
