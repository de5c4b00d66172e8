#include "flexagg/stats.hpp"

#include "flexagg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace flexagg {

BatesParams predicted_ipf_distribution(const GridModel& grid) {
    double total = 0.0;
    for (const auto& der : grid.ders) total += der.p_inst_kw;
    BatesParams out{grid.n_nodes(), -total, total};
    out.validate();
    return out;
}

double EmpiricalDensity::peak() const {
    return densities.empty() ? 0.0 : *std::max_element(densities.begin(), densities.end());
}

EmpiricalDensity frequency_density(std::span<const double> values, int bins) {
    if (values.size() < 2) throw InvalidArgument("frequency density needs at least two values");
    if (bins < 1) throw InvalidArgument("bin count must be >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) throw InvalidArgument("frequency density of constant input is undefined");

    EmpiricalDensity out;
    out.sample_count = values.size();
    out.bin_edges.resize(bins + 1);
    const double width = (hi - lo) / bins;
    for (int i = 0; i <= bins; ++i) out.bin_edges[i] = lo + width * i;
    out.bin_edges.back() = hi;

    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        auto idx = static_cast<std::ptrdiff_t>(std::floor((v - lo) / width));
        idx = std::clamp<std::ptrdiff_t>(idx, 0, bins - 1);
        ++counts[idx];
    }
    out.densities.resize(bins);
    const double n = static_cast<double>(values.size());
    for (int i = 0; i < bins; ++i) out.densities[i] = counts[i] / (n * out.bin_width(i));
    return out;
}

double ks_distance(std::span<const double> values, const std::function<double(double)>& cdf) {
    if (values.empty()) throw InvalidArgument("KS distance needs at least one value");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        // Ties: step the ECDF over the whole run of equal values at once.
        // The left limit of the reference is sampled one ulp below, so a
        // step reference is compared jump for jump.
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double x = sorted[i];
        const double below = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
        d = std::max({d, below - i / n, j / n - cdf(x)});
        i = j;
    }
    return d;
}

double ks_distance(std::span<const double> values, const BatesParams& reference) {
    reference.validate();
    return ks_distance(values, [&](double x) { return bates_cdf(x, reference); });
}

double ks_critical_value(std::size_t n, double alpha) {
    if (n == 0) throw InvalidArgument("KS critical value needs n >= 1");
    double c = 0.0;
    if (alpha == 0.10)
        c = 1.224;
    else if (alpha == 0.05)
        c = 1.358;
    else if (alpha == 0.01)
        c = 1.628;
    else
        throw InvalidArgument("supported KS significance levels are 0.1, 0.05 and 0.01");
    return c / std::sqrt(static_cast<double>(n));
}

double mean(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("mean of empty input");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
    if (values.size() < 2) throw InvalidArgument("standard deviation needs at least two values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace flexagg
