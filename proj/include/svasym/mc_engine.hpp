#pragma once

#include "svasym/csv.hpp"
#include "svasym/params.hpp"
#include "svasym/schemes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace svasym::mc {

/// Number of contiguous path blocks used for reduction and the jackknife.
inline constexpr int kBlocks = 100;

struct McConfig {
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    bool antithetic = false;

    void validate() const;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_eff = 0;
    /// mean is log of a positive statistic and std_error the standard error of that log.
    bool log_space = false;
    /// Top 10 samples carry more than half of the absolute sum.
    bool tail_warning = false;
    /// Paths excluded because S_n == 0.
    std::uint64_t excluded = 0;
};

/// E[S_n^q] (q may be any real for a positive asset, a nonnegative integer otherwise).
Estimate estimate_moment(SchemeKind kind, double q, const ModelParams& p, const McConfig& cfg);

/// E[(1/n) log|S_n|].
Estimate estimate_lln(SchemeKind kind, const ModelParams& p, const McConfig& cfg);

/// Var[(log|S_n| - slope n) / sqrt(n)] with a jackknife standard error over path blocks.
Estimate estimate_clt_variance(SchemeKind kind, const ModelParams& p, const McConfig& cfg, double slope);

/// Rows estimator,value,std_error,n_paths,seed.
class EstimateTable {
public:
    EstimateTable() : table_({"estimator", "value", "std_error", "n_paths", "seed"}) {}
    void add(const std::string& name, const Estimate& e, const McConfig& cfg);
    const csv::Table& table() const { return table_; }

private:
    csv::Table table_;
};

}  // namespace svasym::mc
