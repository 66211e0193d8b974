#ifndef AVC_JAMMERS_HPP
#define AVC_JAMMERS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avc/codebook.hpp"
#include "avc/model.hpp"

namespace avc {

// The jammer sees the public code and the transmitted message, never the
// realized key or the noise: the generation signature is
// (codebook, message, random stream) -> s, which enforces that shape.
enum class JammerKind {
    zero,
    gaussianIID,
    sphereUniform,
    symmetrize,
    rowMeanAligned,
    fixedVector,
    candidateSearch
};

JammerKind parse_jammer_kind(const std::string& s);
std::string jammer_kind_name(JammerKind k);

struct JammerSpec {
    JammerKind kind = JammerKind::zero;
    // symmetrize: impersonated message; 0 draws a fresh uniform fake per emission
    std::uint64_t fake = 0;
    // fixedVector payload
    RealVector fixed;
    // candidateSearch controls
    std::string source = "sphere"; // "sphere" or "net"
    double epsilon = 0.5;          // net radius / hill-climb step
    std::uint64_t candidates = 8;
    std::uint64_t trials_per_candidate = 200;
    std::uint64_t hill_climb_rounds = 0;

    std::string label() const;
};

// Per-message prepared form: deterministic strategies resolve their state
// vector once, so trial emission stays cheap and pure.
struct PreparedJammer {
    JammerSpec spec;
    std::optional<RealVector> fixed_state;
    // set per emission by symmetrize: the codebook row its state came from
    // (lets the ensemble competitor model treat that word exactly)
    bool emits_codeword() const { return spec.kind == JammerKind::symmetrize; }
};

struct Emission {
    RealVector s;
    std::uint64_t impostor_row = 0; // nonzero when s is a codebook word
};

// Resolve a spec against (codebook, message); runs the candidate search
// when the spec asks for one.  seed feeds only search randomness.
PreparedJammer prepare_jammer(const JammerSpec& spec, const Codebook& cb, std::uint64_t message,
                              std::uint64_t seed);

// one state-sequence emission; always satisfies |s|^2 <= n*Lambda
Emission emit_state(const PreparedJammer& pj, const Codebook& cb, std::uint64_t message,
                    Rng& rng);

// iid N(0, Lambda) rescaled onto the ball boundary when it lands outside
RealVector jam_gaussian(Rng& rng, const ChannelParams& params);

// impersonation: a codeword of the fake row drawn with jammer-owned key
// randomness, independent of the encoder's key
RealVector jam_symmetrize(const Codebook& cb, std::uint64_t fake, Rng& rng);

// s = -sqrt(n*Lambda) * mean(row i) / |mean(row i)|
RealVector jam_row_mean(const Codebook& cb, std::uint64_t i);

// Finite covering of the jammer ball B(0, sqrt(n*Lambda)).  Cubic lattice
// with pitch 2*eps/sqrt(n); lattice points whose cell touches the ball are
// kept, those outside are radially projected onto it (projection onto a
// convex set is nonexpansive, so the epsilon covering radius survives).
struct EpsilonNet {
    double epsilon = 0;
    double pitch = 0;
    std::vector<RealVector> points;
};

EpsilonNet build_net(const ChannelParams& params, double epsilon, std::uint64_t max_points);

struct AttackResult {
    RealVector best_state;
    std::size_t best_index = 0;
    double p_hat = 0;
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double ci_low = 0;
    double ci_high = 0;
};

// max over the candidate list of the Monte Carlo error estimate for one
// message; candidates must respect the jammer budget
AttackResult attack_search(const Codebook& cb, std::uint64_t message,
                           const std::vector<RealVector>& candidates,
                           std::uint64_t trials_per_candidate, std::uint64_t seed);

// joint variant: maximizes the sampled worst-message estimate
AttackResult attack_search_joint(const Codebook& cb, const std::vector<RealVector>& candidates,
                                 std::uint64_t message_sample, std::uint64_t trials_per_candidate,
                                 std::uint64_t seed);

} // namespace avc

#endif
