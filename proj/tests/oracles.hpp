#pragma once

// Reference implementations the tests compare the library against. They
// are written independently of core/ and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Local time elapsed over dt true ns at a fixed rate error, floor-rounded.
// Splits dt into whole seconds so no 128-bit arithmetic is needed.
inline std::int64_t elapsed_local(std::int64_t dt_ns, std::int64_t rate_ppb)
{
    const std::int64_t secs = dt_ns / 1'000'000'000;
    const std::int64_t frac = dt_ns % 1'000'000'000;
    // frac * (1e9 + rate) / 1e9 = frac + frac * rate / 1e9
    const long double extra = static_cast<long double>(frac) * static_cast<long double>(rate_ppb) / 1e9L;
    return secs * (1'000'000'000 + rate_ppb) + frac + static_cast<std::int64_t>(std::floor(extra));
}

// max - min over every window of tau + 1 consecutive samples.
inline std::int64_t mtie(const std::vector<std::int64_t>& x, std::size_t tau)
{
    std::int64_t best = 0;
    for (std::size_t i = 0; i + tau < x.size(); ++i) {
        std::vector<std::int64_t> w(x.begin() + static_cast<std::ptrdiff_t>(i),
                                    x.begin() + static_cast<std::ptrdiff_t>(i + tau + 1));
        std::sort(w.begin(), w.end());
        best = std::max(best, w.back() - w.front());
    }
    return best;
}

// Closed-form OLS slope.
inline double ols_slope(const std::vector<double>& t, const std::vector<double>& y)
{
    const double n = static_cast<double>(t.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace oracle
