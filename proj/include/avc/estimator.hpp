#ifndef AVC_ESTIMATOR_HPP
#define AVC_ESTIMATOR_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "avc/codebook.hpp"
#include "avc/jammers.hpp"
#include "avc/model.hpp"

namespace avc {

enum class CountMode {
    operational, // decode-based: nearest wrong-row word beats the own row
    predicate    // inner-product event; never smaller than operational
};

std::string count_mode_name(CountMode m);
CountMode parse_count_mode(const std::string& s);

// Wilson score interval
std::pair<double, double> wilson_ci(std::uint64_t errors, std::uint64_t trials,
                                    double confidence);

struct ErrorEstimate {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double p_hat = 0;
    double ci_low = 0;
    double ci_high = 0; // 99% Wilson
    CountMode mode = CountMode::operational;
    std::uint64_t seed = 0;
    bool sampled_max = false; // estimate_emax sampled messages (lower bound)
    bool ensemble = false;    // wrong rows handled by the ensemble model
};

// Both counting modes accumulated over one shared trial stream.
struct TrialCounts {
    std::uint64_t operational = 0;
    std::uint64_t predicate = 0;
    std::uint64_t trials = 0;
    bool ensemble = false;
};

// How wrong-row codewords enter a trial:
//  - exhaustive scans every realized codeword of the committed codebook;
//  - ensemble realizes only the transmitted row and integrates the wrong
//    rows in closed form over the iid spherical construction (exact cap
//    tail plus one Bernoulli thinning draw per trial).  Used when the
//    codebook is too large to enumerate; the estimate then targets the
//    construction-averaged error.
enum class CompetitorModel { automatic, exhaustive, ensemble };

struct EstimatorOptions {
    CompetitorModel competitors = CompetitorModel::automatic;
    // exhaustive is chosen automatically only below this many codewords
    std::uint64_t max_words = std::uint64_t{1} << 20;
    bool parallel = true;
    // when set, per-trial outcomes are recorded (operational, predicate)
    std::vector<std::pair<bool, bool>>* trace = nullptr;
};

// Per-trial randomness comes from substreams derived from
// (seed, tag, message, trial), so results are independent of scheduling
// and identical for any thread count.
TrialCounts run_trials(const Codebook& cb, std::uint64_t message, const PreparedJammer& pj,
                       std::uint64_t trials, std::uint64_t seed,
                       const EstimatorOptions& opt = {});

ErrorEstimate estimate_error(const Codebook& cb, std::uint64_t message, const JammerSpec& spec,
                             std::uint64_t trials, std::uint64_t seed, CountMode mode,
                             const EstimatorOptions& opt = {});

// single-threaded reference path, kept for testing
ErrorEstimate estimate_error_serial(const Codebook& cb, std::uint64_t message,
                                    const JammerSpec& spec, std::uint64_t trials,
                                    std::uint64_t seed, CountMode mode);

// all messages, or a deterministic uniform sample of them
struct MessageSample {
    bool all = true;
    std::uint64_t count = 0;
    static MessageSample everything() { return {true, 0}; }
    static MessageSample of(std::uint64_t k) { return {false, k}; }
};

// worst sampled message and its estimate; enumeration is mandatory for
// M <= 1024 and the sampled variant flags itself as a lower bound
std::pair<std::uint64_t, ErrorEstimate> estimate_emax(const Codebook& cb, const JammerSpec& spec,
                                                      std::uint64_t trials,
                                                      const MessageSample& sample,
                                                      std::uint64_t seed, CountMode mode,
                                                      const EstimatorOptions& opt = {});

struct SweepRow {
    double R = 0;
    std::uint64_t m = 0;
    std::uint64_t worst_message = 0;
    ErrorEstimate estimate;
    bool skipped = false;
    std::string skip_reason;
};

// one estimate_emax per rate, fresh codebook per rate from derived seeds
std::vector<SweepRow> rate_sweep(const ChannelParams& params, const std::vector<double>& rates,
                                 double delta0, const JammerSpec& spec, std::uint64_t trials,
                                 const MessageSample& sample, std::uint64_t seed, CountMode mode,
                                 const EstimatorOptions& opt = {});

} // namespace avc

#endif
