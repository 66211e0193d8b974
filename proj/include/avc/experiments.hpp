#ifndef AVC_EXPERIMENTS_HPP
#define AVC_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "avc/estimator.hpp"
#include "avc/jammers.hpp"
#include "avc/model.hpp"

namespace avc {

// A spec fully determines a run; re-executing an equal spec reproduces the
// CSV byte for byte under any worker-thread count.
struct ExperimentSpec {
    std::string name;
    ChannelParams channel;
    double delta0 = 0.05;
    std::vector<int> block_lengths;  // achievability: n values for the trend
    std::vector<double> rates;       // achievability rates
    double rate = 0.1;               // converse / phase rate
    std::vector<double> ratios;      // phase transition P/Lambda grid
    std::vector<JammerSpec> strategies;
    std::uint64_t trials = 1000;
    std::uint64_t message_sample = 4; // used once enumeration is off the table
    std::uint64_t fake_sample = 8;    // converse: per-fake buckets
    std::uint64_t seed = 1;

    std::string canonical() const;  // text form hashed into spec_hash
    std::string spec_hash() const;  // 16 hex chars, FNV-1a 64
};

// one CSV row; columns fixed by the schema below
struct ResultRow {
    std::string name;
    int n = 0;
    double P = 0, Lambda = 0, sigma2 = 0;
    double R = 0, delta0 = 0;
    std::string strategy;
    std::string mode;
    std::uint64_t trials = 0, errors = 0;
    double p_hat = 0, ci_low = 0, ci_high = 0;
    std::uint64_t seed = 0;
    std::string spec_hash;
};

inline constexpr const char* kResultHeader =
    "name,n,P,Lambda,sigma2,R,delta0,strategy,mode,trials,errors,p_hat,ci_low,ci_high,"
    "seed,spec_hash";

std::string result_row_csv(const ResultRow& r);
void write_rows(std::ostream& os, const std::vector<ResultRow>& rows);
void write_rows_file(const std::string& path, const std::vector<ResultRow>& rows);

// committed experiment definitions (fixed seeds and grids)
ExperimentSpec achievability_spec();
ExperimentSpec converse_spec();
ExperimentSpec phase_transition_spec();
ExperimentSpec committed_spec(const std::string& name);
std::vector<std::string> committed_spec_names();

// worst-of-sampled-messages error per (n, rate, strategy), both counting
// modes per cell
std::vector<ResultRow> run_achievability(const ExperimentSpec& spec);

// impersonation attack: grand average over (message, fake) pairs plus
// per-fake buckets and their max
std::vector<ResultRow> run_converse(const ExperimentSpec& spec);

// attack catalog across P/Lambda ratios straddling 1
std::vector<ResultRow> run_phase_transition(const ExperimentSpec& spec);

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

} // namespace avc

#endif
