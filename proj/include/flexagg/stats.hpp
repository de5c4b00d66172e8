#pragma once

#include "flexagg/bates.hpp"
#include "flexagg/grid_model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace flexagg {

/// Loss-free prediction of the active interconnection flow: the mean of N
/// uniforms on [-P_inst, +P_inst] scaled by N, i.e. Bates(N, -P_inst, +P_inst).
BatesParams predicted_ipf_distribution(const GridModel& grid);

struct EmpiricalDensity {
    std::vector<double> bin_edges;   // strictly increasing, size = bins + 1
    std::vector<double> densities;   // per unit of the value axis
    std::size_t sample_count = 0;

    std::size_t bins() const noexcept { return densities.size(); }
    double bin_width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
    double bin_center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
    double peak() const;
};

/// Equal-width histogram over [min, max] of the values, normalized to
/// integrate to one. Rejects fewer than two values, bins < 1 and constant
/// input.
EmpiricalDensity frequency_density(std::span<const double> values, int bins);

/// Sup-norm distance between the empirical CDF and a reference CDF.
double ks_distance(std::span<const double> values, const std::function<double(double)>& cdf);
double ks_distance(std::span<const double> values, const BatesParams& reference);

/// Asymptotic two-sided KS critical value c(alpha)/sqrt(n), alpha in {0.1, 0.05, 0.01}.
double ks_critical_value(std::size_t n, double alpha);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> values);

}  // namespace flexagg
