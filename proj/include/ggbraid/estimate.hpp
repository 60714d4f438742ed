#pragma once

#include <map>
#include <string>
#include <vector>

#include "ggbraid/cochains.hpp"
#include "ggbraid/flows.hpp"
#include "ggbraid/predict.hpp"
#include "ggbraid/regions.hpp"

namespace ggbraid {

struct McOptions {
    long long n_samples = 100000;
    std::uint64_t seed = 1;
    int workers = 0;              // 0 = hardware concurrency (capped at 8)
    double audit_fraction = 0.02; // share of good disc samples re-derived numerically
    double delta_sep = kDefaultSep;
    // Optional variance-reduction mode: the good-set contribution is summed
    // in closed form (type volumes are multinomial products of the region
    // areas and the per-type values are exact), and all n_samples go to
    // rejection-sampled bad configurations.  Audits are skipped.
    bool stratified = false;
};

struct TypeStats {
    long long count = 0;
    double sum = 0.0;    // of the cochain values (contribution to the mean is sum/n)
    double sumsq = 0.0;
};

// Monte Carlo estimate of the averaged cochain on a tuple of quotient-group
// elements.  Good samples evaluate the cochain on the symbolic predictions
// (valid because the test cochains are conjugation invariant); bad samples on
// the disc evaluate it on numerically extracted braids and enter the mean,
// while off the disc they only feed the error budget.
struct EstimateReport {
    Surface surface = Surface::Disc;
    double epsilon = 0.0;
    long long n_samples = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<std::string> elements;
    std::string cochain_note;

    double mean = 0.0;
    double standard_error = 0.0;
    bool stratified = false;
    std::map<TypeSignature, TypeStats> per_type;
    std::map<TypeSignature, double> exact_fractions;  // stratified mode only
    long long bad_count = 0;
    double bad_fraction = 0.0;
    double bad_fraction_theory = 0.0;  // 1 - (1-eps)^m
    double bad_sum = 0.0, bad_sumsq = 0.0, bad_abs_max = 0.0;
    bool bad_in_mean = false;
    long long audited = 0;
    std::string region_json;

    double type_volume_fraction(const TypeSignature& t) const;
    double type_partial_mean(const TypeSignature& t) const;    // contribution to mean
    double type_partial_stderr(const TypeSignature& t) const;  // se of that contribution
    std::string to_json() const;
};

EstimateReport mc_gamma_hat(const CochainHandle& c, const std::vector<BraidWord>& elements,
                            const RegionSpec& r, const McOptions& opt);

struct SweepResult {
    std::vector<double> eps_list;
    std::vector<EstimateReport> reports;
    double reference_value = 0.0;          // cochain on the element tuple itself
    std::vector<double> lambda_eps;        // m! * prod(areas)
    std::vector<double> deviation;         // |mean - lambda_eps * reference|
    std::vector<double> budget;            // (1-(1-eps)^m) * M + 3 * stderr
    double bad_abs_max = 0.0;              // M, across the sweep
    bool all_within_budget = false;
    bool trend_decreasing = false;         // deviation(last) < deviation(first)

    std::string to_json() const;
    std::string to_csv() const;  // one row per (epsilon, type)
};

SweepResult epsilon_sweep(const CochainHandle& c, const std::vector<BraidWord>& elements,
                          Surface surface, const std::vector<double>& eps_list,
                          const McOptions& opt);

struct LambdaConstant {
    Surface surface = Surface::Disc;
    double value = 0.0;
    std::vector<double> formula_terms;  // the limiting per-region areas
};

// m! * prod(area(U_i)) in the equal-split limit: 2/9, 3/32, 1/2.
LambdaConstant lambda_constant(Surface s);
double lambda_epsilon(Surface s, double eps);

}  // namespace ggbraid
