#include "flexagg/bates.hpp"

#include "flexagg/error.hpp"

#include <algorithm>
#include <cmath>

namespace flexagg {

namespace {

using Real = long double;

struct NeumaierSum {
    Real sum = 0.0L;
    Real compensation = 0.0L;

    void add(Real x) noexcept {
        const Real t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            compensation += (sum - t) + x;
        else
            compensation += (x - t) + sum;
        sum = t;
    }
    Real value() const noexcept { return sum + compensation; }
};

// sum_{k=0}^{floor(s)} (-1)^k C(n,k) (s-k)^power / power!, for s <= n/2.
Real one_sided_sum(Real s, int n, int power) {
    NeumaierSum acc;
    Real binom = 1.0L;
    const int k_max = std::min(n, static_cast<int>(std::floor(s)));
    for (int k = 0; k <= k_max; ++k) {
        const Real base = s - k;
        Real term = binom;
        for (int i = 1; i <= power; ++i) term *= base / i;
        acc.add((k % 2 == 0) ? term : -term);
        binom = binom * (n - k) / (k + 1);
    }
    return acc.value();
}

}  // namespace

void BatesParams::validate() const {
    if (n < 1) throw InvalidArgument("Bates n must be >= 1");
    if (!(a < b)) throw InvalidArgument("Bates interval requires a < b");
}

double irwin_hall_pdf(double s, int n) {
    if (n < 1) throw InvalidArgument("Irwin-Hall n must be >= 1");
    if (!(s >= 0.0 && s <= n)) return 0.0;
    Real x = s;
    if (x > 0.5L * n) x = n - x;
    return static_cast<double>(std::max(Real{0}, one_sided_sum(x, n, n - 1)));
}

double irwin_hall_cdf(double s, int n) {
    if (n < 1) throw InvalidArgument("Irwin-Hall n must be >= 1");
    if (s <= 0.0) return 0.0;
    if (s >= n) return 1.0;
    const Real half = 0.5L * n;
    if (static_cast<Real>(s) <= half)
        return static_cast<double>(std::clamp(one_sided_sum(s, n, n), Real{0}, Real{1}));
    const Real mirrored = one_sided_sum(n - static_cast<Real>(s), n, n);
    return static_cast<double>(std::clamp(1.0L - mirrored, Real{0}, Real{1}));
}

double bates_pdf(double x, const BatesParams& params) {
    params.validate();
    if (!(x >= params.a && x <= params.b)) return 0.0;
    const double width = params.b - params.a;
    const double s = params.n * (x - params.a) / width;
    return params.n / width * irwin_hall_pdf(std::clamp(s, 0.0, static_cast<double>(params.n)), params.n);
}

double bates_cdf(double x, const BatesParams& params) {
    params.validate();
    if (x <= params.a) return 0.0;
    if (x >= params.b) return 1.0;
    const double s = params.n * (x - params.a) / (params.b - params.a);
    return irwin_hall_cdf(s, params.n);
}

}  // namespace flexagg
