#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ltl {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_ci_lo = 0.0;
    double slope_ci_hi = 0.0;
};

// OLS of ln y on ln h with a heteroscedasticity-robust (HC) slope interval.
FitResult fit_loglog(const std::vector<std::pair<double, double>>& points);

struct ExperimentConfig {
    std::string experiment;  // riesz-scaling | modulus-scaling | variance-table-1d |
                             // variance-table-2d | appendix-sweep | mixture-diagnostic
    std::map<std::string, std::string> parameters;
    std::string output_path;  // directory for CSV/JSON artifacts

    static ExperimentConfig from_file(const std::string& path);
    double num(const std::string& key, double fallback) const;
    std::int64_t integer(const std::string& key, std::int64_t fallback) const;
    std::string str(const std::string& key, const std::string& fallback) const;
    std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;
};

struct ScalingReport {
    std::vector<std::array<double, 3>> points;  // (h, statistic, std_error)
    double slope = 0.0;
    double slope_ci_lo = 0.0;
    double slope_ci_hi = 0.0;
    double target_slope = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Dispatches to the owning modules, writes <output>/data.csv and
// <output>/report.json, returns the in-memory report when the experiment is a
// scaling fit. Deterministic given the config (seed included).
ScalingReport run_experiment(const ExperimentConfig& config);

struct MixtureDiagnostic {
    double regression_slope = 0.0;
    double regression_t = 0.0;
    double skewness = 0.0;        // of fluctuation / sqrt(alpha)
    double excess_kurtosis = 0.0;
    std::int64_t n_paths = 0;
};

MixtureDiagnostic mixture_diagnostic(const ExperimentConfig& config);

}  // namespace ltl
