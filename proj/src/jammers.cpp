#include "avc/jammers.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "avc/errors.hpp"
#include "avc/estimator.hpp"
#include "avc/rng.hpp"

namespace avc {

JammerKind parse_jammer_kind(const std::string& s) {
    if (s == "zero") return JammerKind::zero;
    if (s == "gaussianIID") return JammerKind::gaussianIID;
    if (s == "sphereUniform") return JammerKind::sphereUniform;
    if (s == "symmetrize") return JammerKind::symmetrize;
    if (s == "rowMeanAligned") return JammerKind::rowMeanAligned;
    if (s == "fixedVector") return JammerKind::fixedVector;
    if (s == "candidateSearch") return JammerKind::candidateSearch;
    throw ConfigError("unknown jammer kind: " + s);
}

std::string jammer_kind_name(JammerKind k) {
    switch (k) {
        case JammerKind::zero: return "zero";
        case JammerKind::gaussianIID: return "gaussianIID";
        case JammerKind::sphereUniform: return "sphereUniform";
        case JammerKind::symmetrize: return "symmetrize";
        case JammerKind::rowMeanAligned: return "rowMeanAligned";
        case JammerKind::fixedVector: return "fixedVector";
        case JammerKind::candidateSearch: return "candidateSearch";
    }
    return "?";
}

std::string JammerSpec::label() const {
    switch (kind) {
        case JammerKind::symmetrize:
            return fake == 0 ? "symmetrize:uniform"
                             : "symmetrize:fake=" + std::to_string(fake);
        case JammerKind::candidateSearch:
            return "candidateSearch:" + source;
        default:
            return jammer_kind_name(kind);
    }
}

RealVector jam_gaussian(Rng& rng, const ChannelParams& params) {
    RealVector s(static_cast<std::size_t>(params.n), 0.0);
    if (params.Lambda == 0) return s;
    const double sd = std::sqrt(params.Lambda);
    double nrm2 = 0;
    for (int i = 0; i < params.n; ++i) {
        s[i] = sd * rng.next_gaussian();
        nrm2 += s[i] * s[i];
    }
    const double budget = params.jam_energy();
    if (nrm2 > budget) {
        const double scale = std::sqrt(budget / nrm2);
        for (double& c : s) c *= scale;
    }
    return s;
}

RealVector jam_symmetrize(const Codebook& cb, std::uint64_t fake, Rng& rng) {
    const auto& p = cb.params();
    if (p.P > p.Lambda)
        throw ConstraintError("P <= Lambda", "impersonation exceeds the jammer budget");
    const std::uint64_t key = 1 + rng.next_below(cb.code().keys_per_row);
    return cb.word(fake, key);
}

RealVector jam_row_mean(const Codebook& cb, std::uint64_t i) {
    const auto& p = cb.params();
    RealVector mean(static_cast<std::size_t>(p.n), 0.0);
    RealVector buf(static_cast<std::size_t>(p.n));
    const std::uint64_t keys = cb.code().keys_per_row;
    for (std::uint64_t t = 1; t <= keys; ++t) {
        cb.get_word(i, t, buf.data());
        for (int c = 0; c < p.n; ++c) mean[c] += buf[c];
    }
    for (double& c : mean) c /= static_cast<double>(keys);
    const double nrm = std::sqrt(norm2(mean));
    if (nrm == 0.0) throw DomainError("jam_row_mean: zero row centroid");
    const double scale = -std::sqrt(p.jam_energy()) / nrm;
    for (double& c : mean) c *= scale;
    return mean;
}

namespace {

void enumerate_lattice(int dim, int n, double pitch, double r, double r2,
                       RealVector& point, double partial_min2,
                       const std::function<void(const RealVector&)>& sink) {
    // partial_min2 accumulates the squared distance from the origin to the
    // nearest point of the cell's remaining-coordinate slab
    const int span = static_cast<int>(std::floor((r + pitch) / pitch)) + 1;
    for (int k = -span; k <= span; ++k) {
        const double c = k * pitch;
        const double edge = std::max(std::fabs(c) - pitch / 2.0, 0.0);
        const double next_min2 = partial_min2 + edge * edge;
        if (next_min2 > r2) continue; // cell cannot touch the ball
        point[dim] = c;
        if (dim + 1 == n) {
            sink(point);
        } else {
            enumerate_lattice(dim + 1, n, pitch, r, r2, point, next_min2, sink);
        }
    }
}

} // namespace

EpsilonNet build_net(const ChannelParams& params, double epsilon, std::uint64_t max_points) {
    params.validate();
    if (!(epsilon > 0)) throw ConstraintError("epsilon > 0");
    EpsilonNet net;
    net.epsilon = epsilon;
    net.pitch = 2.0 * epsilon / std::sqrt(static_cast<double>(params.n));
    const double r = std::sqrt(params.jam_energy());
    const double r2 = r * r;
    if (r == 0.0) {
        net.points.push_back(RealVector(static_cast<std::size_t>(params.n), 0.0));
        return net;
    }
    std::uint64_t count = 0;
    RealVector point(static_cast<std::size_t>(params.n), 0.0);
    enumerate_lattice(0, params.n, net.pitch, r, r2, point, 0.0,
                      [&](const RealVector& p) {
                          ++count;
                          if (count > max_points) return;
                          RealVector q = p;
                          const double nn = norm2(q);
                          if (nn > r2) { // project onto the ball boundary
                              const double scale = r / std::sqrt(nn);
                              for (double& c : q) c *= scale;
                          }
                          net.points.push_back(std::move(q));
                      });
    if (count > max_points) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "net needs %llu points but maxPoints is %llu",
                      static_cast<unsigned long long>(count),
                      static_cast<unsigned long long>(max_points));
        throw ConfigError(msg);
    }
    return net;
}

PreparedJammer prepare_jammer(const JammerSpec& spec, const Codebook& cb, std::uint64_t message,
                              std::uint64_t seed) {
    const auto& p = cb.params();
    PreparedJammer pj;
    pj.spec = spec;
    switch (spec.kind) {
        case JammerKind::zero:
            pj.fixed_state = RealVector(static_cast<std::size_t>(p.n), 0.0);
            break;
        case JammerKind::rowMeanAligned:
            pj.fixed_state = jam_row_mean(cb, message);
            break;
        case JammerKind::fixedVector:
            if (spec.fixed.size() != static_cast<std::size_t>(p.n))
                throw DimensionError("fixedVector: state length != n");
            if (!check_power(spec.fixed, p.Lambda))
                throw ConstraintError("|s|^2 <= n*Lambda", "fixedVector exceeds the budget");
            pj.fixed_state = spec.fixed;
            break;
        case JammerKind::candidateSearch: {
            std::vector<RealVector> cands;
            if (spec.source == "net") {
                EpsilonNet net = build_net(p, spec.epsilon, 200000);
                cands = std::move(net.points);
            } else if (spec.source == "sphere") {
                Rng rng(derive_seed(seed, seed_tag::attack, message, 0x5f));
                const double r = std::sqrt(p.jam_energy());
                cands.push_back(RealVector(static_cast<std::size_t>(p.n), 0.0));
                for (std::uint64_t k = 1; k < spec.candidates; ++k)
                    cands.push_back(sample_sphere(rng, p.n, r));
            } else {
                throw ConfigError("candidateSearch source must be \"net\" or \"sphere\"");
            }
            AttackResult best = attack_search(cb, message, cands, spec.trials_per_candidate,
                                              derive_seed(seed, seed_tag::attack, message, 1));
            // optional coordinate-wise greedy refinement, step epsilon,
            // projected back onto the ball (heuristic, not exhaustive)
            const double r = std::sqrt(p.jam_energy());
            for (std::uint64_t round = 0; round < spec.hill_climb_rounds; ++round) {
                for (int c = 0; c < p.n; ++c) {
                    for (double dir : {+1.0, -1.0}) {
                        RealVector cand = best.best_state;
                        cand[c] += dir * spec.epsilon;
                        const double nn = norm2(cand);
                        if (nn > r * r) {
                            const double scale = r / std::sqrt(nn);
                            for (double& v : cand) v *= scale;
                        }
                        AttackResult probe = attack_search(
                            cb, message, {cand}, spec.trials_per_candidate,
                            derive_seed(seed, seed_tag::attack, message,
                                        2 + round * p.n * 2 + c * 2 + (dir > 0)));
                        if (probe.errors > best.errors) {
                            best.best_state = cand;
                            best.errors = probe.errors;
                            best.p_hat = probe.p_hat;
                        }
                    }
                }
            }
            pj.fixed_state = best.best_state;
            break;
        }
        case JammerKind::symmetrize:
            if (p.P > p.Lambda)
                throw ConstraintError("P <= Lambda", "impersonation exceeds the jammer budget");
            if (spec.fake != 0 && spec.fake > cb.code().m)
                throw IndexError("symmetrize: fake message out of range");
            break;
        case JammerKind::gaussianIID:
        case JammerKind::sphereUniform:
            break;
    }
    return pj;
}

Emission emit_state(const PreparedJammer& pj, const Codebook& cb, std::uint64_t message,
                    Rng& rng) {
    (void)message;
    const auto& p = cb.params();
    Emission e;
    switch (pj.spec.kind) {
        case JammerKind::gaussianIID:
            e.s = jam_gaussian(rng, p);
            break;
        case JammerKind::sphereUniform:
            if (p.Lambda == 0) {
                e.s.assign(static_cast<std::size_t>(p.n), 0.0);
            } else {
                e.s = sample_sphere(rng, p.n, std::sqrt(p.jam_energy()));
            }
            break;
        case JammerKind::symmetrize: {
            std::uint64_t fake = pj.spec.fake;
            if (fake == 0) fake = 1 + rng.next_below(cb.code().m);
            e.s = jam_symmetrize(cb, fake, rng);
            e.impostor_row = fake;
            break;
        }
        default:
            e.s = *pj.fixed_state;
            break;
    }
    return e;
}

AttackResult attack_search(const Codebook& cb, std::uint64_t message,
                           const std::vector<RealVector>& candidates,
                           std::uint64_t trials_per_candidate, std::uint64_t seed) {
    if (candidates.empty()) throw ConfigError("attack_search: empty candidate list");
    const auto& p = cb.params();
    for (const auto& c : candidates)
        if (!check_power(c, p.Lambda))
            throw ConstraintError("|s|^2 <= n*Lambda", "candidate exceeds the jammer budget");
    AttackResult best;
    bool have = false;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        JammerSpec fs;
        fs.kind = JammerKind::fixedVector;
        fs.fixed = candidates[k];
        ErrorEstimate est =
            estimate_error(cb, message, fs, trials_per_candidate,
                           derive_seed(seed, seed_tag::attack, k), CountMode::operational);
        if (!have || est.errors > best.errors) {
            have = true;
            best.best_state = candidates[k];
            best.best_index = k;
            best.errors = est.errors;
            best.trials = est.trials;
            best.p_hat = est.p_hat;
            best.ci_low = est.ci_low;
            best.ci_high = est.ci_high;
        }
    }
    return best;
}

AttackResult attack_search_joint(const Codebook& cb, const std::vector<RealVector>& candidates,
                                 std::uint64_t message_sample, std::uint64_t trials_per_candidate,
                                 std::uint64_t seed) {
    if (candidates.empty()) throw ConfigError("attack_search: empty candidate list");
    AttackResult best;
    bool have = false;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        JammerSpec fs;
        fs.kind = JammerKind::fixedVector;
        fs.fixed = candidates[k];
        auto [worst, est] =
            estimate_emax(cb, fs, trials_per_candidate, MessageSample::of(message_sample),
                          derive_seed(seed, seed_tag::attack, k), CountMode::operational);
        (void)worst;
        if (!have || est.errors > best.errors) {
            have = true;
            best.best_state = candidates[k];
            best.best_index = k;
            best.errors = est.errors;
            best.trials = est.trials;
            best.p_hat = est.p_hat;
            best.ci_low = est.ci_low;
            best.ci_high = est.ci_high;
        }
    }
    return best;
}

} // namespace avc
