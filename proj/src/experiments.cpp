#include "avc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "avc/csv.hpp"
#include "avc/errors.hpp"

namespace avc {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string strategy_canonical(const JammerSpec& s) {
    std::string out = s.label();
    if (s.kind == JammerKind::fixedVector) {
        out += "[";
        for (double v : s.fixed) out += format_double(v) + ";";
        out += "]";
    }
    if (s.kind == JammerKind::candidateSearch) {
        out += "{eps=" + format_double(s.epsilon) +
               ",cand=" + std::to_string(s.candidates) +
               ",tpc=" + std::to_string(s.trials_per_candidate) +
               ",hc=" + std::to_string(s.hill_climb_rounds) + "}";
    }
    return out;
}

} // namespace

std::string ExperimentSpec::canonical() const {
    std::ostringstream os;
    os << "name=" << name << "|P=" << format_double(channel.P)
       << "|Lambda=" << format_double(channel.Lambda)
       << "|sigma2=" << format_double(channel.sigma2) << "|n=" << channel.n
       << "|delta0=" << format_double(delta0) << "|rate=" << format_double(rate);
    os << "|ns=";
    for (int n : block_lengths) os << n << ";";
    os << "|rates=";
    for (double r : rates) os << format_double(r) << ";";
    os << "|ratios=";
    for (double r : ratios) os << format_double(r) << ";";
    os << "|strategies=";
    for (const auto& s : strategies) os << strategy_canonical(s) << ";";
    os << "|trials=" << trials << "|msample=" << message_sample
       << "|fsample=" << fake_sample << "|seed=" << seed;
    return os.str();
}

std::string ExperimentSpec::spec_hash() const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
}

std::string result_row_csv(const ResultRow& r) {
    std::ostringstream os;
    os << r.name << "," << r.n << "," << format_double(r.P) << ","
       << format_double(r.Lambda) << "," << format_double(r.sigma2) << ","
       << format_double(r.R) << "," << format_double(r.delta0) << "," << r.strategy << ","
       << r.mode << "," << r.trials << "," << r.errors << "," << format_double(r.p_hat) << ","
       << format_double(r.ci_low) << "," << format_double(r.ci_high) << "," << r.seed << ","
       << r.spec_hash;
    return os.str();
}

void write_rows(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kResultHeader << "\n";
    for (const auto& r : rows) os << result_row_csv(r) << "\n";
}

void write_rows_file(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + path);
    write_rows(f, rows);
}

ExperimentSpec achievability_spec() {
    ExperimentSpec s;
    s.name = "achievability";
    s.channel = {64, 8.0, 1.0, 1.0};
    s.delta0 = 0.05;
    s.block_lengths = {16, 32, 64};
    s.rates = {0.15, 1.2};
    JammerSpec zero;
    zero.kind = JammerKind::zero;
    JammerSpec gauss;
    gauss.kind = JammerKind::gaussianIID;
    s.strategies = {zero, gauss};
    s.trials = 2000;
    s.message_sample = 4;
    s.seed = 101;
    return s;
}

ExperimentSpec converse_spec() {
    ExperimentSpec s;
    s.name = "converse";
    s.channel = {64, 1.0, 1.0, 0.1};
    s.delta0 = 0.05;
    s.rate = 0.1;
    JammerSpec sym;
    sym.kind = JammerKind::symmetrize;
    sym.fake = 0; // uniform fake per trial
    s.strategies = {sym};
    s.trials = 10000;
    s.fake_sample = 8;
    s.seed = 202;
    return s;
}

ExperimentSpec phase_transition_spec() {
    ExperimentSpec s;
    s.name = "phase";
    s.channel = {64, 1.0, 1.0, 0.1};
    s.delta0 = 0.02;
    s.rate = 0.1;
    s.ratios = {0.8, 1.0, 1.25, 4.0};
    JammerSpec zero;
    zero.kind = JammerKind::zero;
    JammerSpec gauss;
    gauss.kind = JammerKind::gaussianIID;
    JammerSpec sphere;
    sphere.kind = JammerKind::sphereUniform;
    JammerSpec sym;
    sym.kind = JammerKind::symmetrize;
    JammerSpec rowmean;
    rowmean.kind = JammerKind::rowMeanAligned;
    JammerSpec fixed;
    fixed.kind = JammerKind::fixedVector;
    fixed.fixed = RealVector(64, 1.0); // |s|^2 = 64 = n*Lambda
    JammerSpec search;
    search.kind = JammerKind::candidateSearch;
    search.source = "sphere";
    search.candidates = 4;
    search.trials_per_candidate = 100;
    search.hill_climb_rounds = 0;
    s.strategies = {zero, gauss, sphere, sym, rowmean, fixed, search};
    s.trials = 100;
    s.message_sample = 8;
    s.seed = 303;
    return s;
}

ExperimentSpec committed_spec(const std::string& name) {
    if (name == "achievability") return achievability_spec();
    if (name == "converse") return converse_spec();
    if (name == "phase" || name == "phase_transition") return phase_transition_spec();
    throw ConfigError("unknown experiment: " + name);
}

std::vector<std::string> committed_spec_names() {
    return {"achievability", "converse", "phase"};
}

namespace {

struct EmaxBoth {
    std::uint64_t op_msg = 0, pred_msg = 0;
    TrialCounts op_counts, pred_counts;
    bool sampled = false;
    bool ensemble = false;
};

std::vector<std::uint64_t> pick_messages(std::uint64_t m, std::uint64_t want,
                                         std::uint64_t seed, bool& sampled) {
    std::vector<std::uint64_t> messages;
    if (m <= 1024) { // enumeration is mandatory at this size
        sampled = false;
        for (std::uint64_t i = 1; i <= m; ++i) messages.push_back(i);
        return messages;
    }
    sampled = true;
    const std::uint64_t k = std::min<std::uint64_t>(std::max<std::uint64_t>(want, 1), m);
    Rng rng(derive_seed(seed, seed_tag::message_sample));
    std::set<std::uint64_t> picked;
    while (picked.size() < k) picked.insert(1 + rng.next_below(m));
    messages.assign(picked.begin(), picked.end());
    return messages;
}

EmaxBoth emax_both_modes(const Codebook& cb, const JammerSpec& spec, std::uint64_t trials,
                         std::uint64_t want, std::uint64_t seed) {
    EmaxBoth out;
    auto messages = pick_messages(cb.code().m, want, seed, out.sampled);
    bool have = false;
    for (std::uint64_t msg : messages) {
        PreparedJammer pj = prepare_jammer(spec, cb, msg, seed);
        TrialCounts tc = run_trials(cb, msg, pj, trials, seed);
        out.ensemble = tc.ensemble;
        if (!have || tc.operational > out.op_counts.operational) {
            out.op_msg = msg;
            out.op_counts = tc;
        }
        if (!have || tc.predicate > out.pred_counts.predicate) {
            out.pred_msg = msg;
            out.pred_counts = tc;
        }
        have = true;
    }
    return out;
}

ResultRow base_row(const ExperimentSpec& spec, const ChannelParams& p, double rate,
                   double delta0) {
    ResultRow r;
    r.name = spec.name;
    r.n = p.n;
    r.P = p.P;
    r.Lambda = p.Lambda;
    r.sigma2 = p.sigma2;
    r.R = rate;
    r.delta0 = delta0;
    r.seed = spec.seed;
    r.spec_hash = spec.spec_hash();
    return r;
}

void fill_estimate(ResultRow& r, std::uint64_t errors, std::uint64_t trials, bool ensemble,
                   CountMode mode) {
    r.trials = trials;
    r.errors = errors;
    r.p_hat = static_cast<double>(errors) / static_cast<double>(trials);
    auto [lo, hi] = wilson_ci(errors, trials, 0.99);
    r.ci_low = lo;
    r.ci_high = hi;
    r.mode = count_mode_name(mode) + (ensemble ? std::string("-ensemble") : std::string());
}

Codebook build_auto(std::uint64_t cb_seed, const ChannelParams& params, const CodeParams& code) {
    EstimatorOptions opt;
    const bool exhaustive =
        code.m_exact &&
        static_cast<unsigned __int128>(code.m) * code.keys_per_row <= opt.max_words;
    return Codebook::build(cb_seed, params, code,
                           exhaustive ? Storage::materialized : Storage::on_demand);
}

} // namespace

std::vector<ResultRow> run_achievability(const ExperimentSpec& spec) {
    std::vector<ResultRow> rows;
    for (std::size_t ni = 0; ni < spec.block_lengths.size(); ++ni) {
        ChannelParams params = spec.channel;
        params.n = spec.block_lengths[ni];
        for (std::size_t ri = 0; ri < spec.rates.size(); ++ri) {
            const double rate = spec.rates[ri];
            CodeParams code = CodeParams::make(params.n, rate, spec.delta0);
            const std::uint64_t cb_seed =
                derive_seed(spec.seed, seed_tag::sweep_codebook, ni, ri);
            Codebook cb = build_auto(cb_seed, params, code);
            for (const auto& strat : spec.strategies) {
                EmaxBoth em =
                    emax_both_modes(cb, strat, spec.trials, spec.message_sample, cb_seed);
                ResultRow op = base_row(spec, params, rate, spec.delta0);
                op.strategy = strat.label();
                fill_estimate(op, em.op_counts.operational, em.op_counts.trials, em.ensemble,
                              CountMode::operational);
                rows.push_back(op);
                ResultRow pr = base_row(spec, params, rate, spec.delta0);
                pr.strategy = strat.label();
                fill_estimate(pr, em.pred_counts.predicate, em.pred_counts.trials, em.ensemble,
                              CountMode::predicate);
                rows.push_back(pr);
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_converse(const ExperimentSpec& spec) {
    ChannelParams params = spec.channel;
    params.validate();
    if (params.P > params.Lambda)
        throw ConstraintError("P <= Lambda", "the impersonation attack needs P <= Lambda");
    CodeParams code = CodeParams::make(params.n, spec.rate, spec.delta0);
    const std::uint64_t cb_seed = derive_seed(spec.seed, seed_tag::sweep_codebook, 0);
    Codebook cb = build_auto(cb_seed, params, code);
    const std::uint64_t m = cb.code().m;

    JammerSpec sym;
    sym.kind = JammerKind::symmetrize;
    sym.fake = 0;
    PreparedJammer pj = prepare_jammer(sym, cb, 1, cb_seed);

    std::vector<ResultRow> rows;

    // grand average over uniform (message, fake) pairs
    {
        std::uint64_t op = 0, pred = 0;
        const std::int64_t nt = static_cast<std::int64_t>(spec.trials);
#pragma omp parallel for schedule(static) reduction(+ : op, pred)
        for (std::int64_t k = 0; k < nt; ++k) {
            Rng pick(derive_seed(spec.seed, seed_tag::converse, 1, static_cast<std::uint64_t>(k)));
            const std::uint64_t msg = 1 + pick.next_below(m);
            EstimatorOptions o;
            o.parallel = false;
            TrialCounts tc = run_trials(
                cb, msg, pj, 1,
                derive_seed(spec.seed, seed_tag::converse, 2, static_cast<std::uint64_t>(k)), o);
            op += tc.operational;
            pred += tc.predicate;
        }
        for (CountMode mode : {CountMode::operational, CountMode::predicate}) {
            ResultRow r = base_row(spec, params, spec.rate, spec.delta0);
            r.name = spec.name + "_avg";
            r.strategy = sym.label();
            fill_estimate(r, mode == CountMode::operational ? op : pred, spec.trials, false, mode);
            rows.push_back(r);
        }
    }

    // per-fake buckets and their max
    {
        const std::uint64_t want = std::min<std::uint64_t>(std::max<std::uint64_t>(spec.fake_sample, 1), m);
        Rng frng(derive_seed(spec.seed, seed_tag::converse, 3));
        std::set<std::uint64_t> picked;
        while (picked.size() < want) picked.insert(1 + frng.next_below(m));
        std::vector<std::uint64_t> fakes(picked.begin(), picked.end());
        const std::uint64_t per = std::max<std::uint64_t>(spec.trials / fakes.size(), 1);
        std::uint64_t best_errors = 0, best_fake = fakes.front();
        for (std::size_t fi = 0; fi < fakes.size(); ++fi) {
            JammerSpec fixed_fake;
            fixed_fake.kind = JammerKind::symmetrize;
            fixed_fake.fake = fakes[fi];
            PreparedJammer pjf = prepare_jammer(fixed_fake, cb, 1, cb_seed);
            std::uint64_t op = 0, pred = 0;
            const std::int64_t nt = static_cast<std::int64_t>(per);
#pragma omp parallel for schedule(static) reduction(+ : op, pred)
            for (std::int64_t k = 0; k < nt; ++k) {
                Rng pick(derive_seed(spec.seed, seed_tag::converse, 100 + fi,
                                     static_cast<std::uint64_t>(k)));
                const std::uint64_t msg = 1 + pick.next_below(m);
                EstimatorOptions o;
                o.parallel = false;
                TrialCounts tc =
                    run_trials(cb, msg, pjf, 1,
                               derive_seed(spec.seed, seed_tag::converse, 200 + fi,
                                           static_cast<std::uint64_t>(k)),
                               o);
                op += tc.operational;
                pred += tc.predicate;
            }
            ResultRow r = base_row(spec, params, spec.rate, spec.delta0);
            r.name = spec.name + "_fake";
            r.strategy = fixed_fake.label();
            fill_estimate(r, op, per, false, CountMode::operational);
            rows.push_back(r);
            if (op > best_errors) {
                best_errors = op;
                best_fake = fakes[fi];
            }
        }
        ResultRow r = base_row(spec, params, spec.rate, spec.delta0);
        r.name = spec.name + "_max_fake";
        r.strategy = "symmetrize:fake=" + std::to_string(best_fake);
        fill_estimate(r, best_errors, per, false, CountMode::operational);
        rows.push_back(r);
    }
    return rows;
}

std::vector<ResultRow> run_phase_transition(const ExperimentSpec& spec) {
    std::vector<ResultRow> rows;
    for (std::size_t gi = 0; gi < spec.ratios.size(); ++gi) {
        ChannelParams params = spec.channel;
        params.P = spec.ratios[gi] * params.Lambda;
        CodeParams code = CodeParams::make(params.n, spec.rate, spec.delta0);
        const std::uint64_t cb_seed = derive_seed(spec.seed, seed_tag::sweep_codebook, gi);
        Codebook cb = build_auto(cb_seed, params, code);
        double best_p = -1.0;
        std::string best_label;
        for (const auto& strat : spec.strategies) {
            if (strat.kind == JammerKind::symmetrize && params.P > params.Lambda)
                continue; // impersonation infeasible above the budget
            if (strat.kind == JammerKind::candidateSearch) {
                // one joint search over sampled messages
                Rng crng(derive_seed(cb_seed, seed_tag::attack, gi));
                std::vector<RealVector> cands;
                cands.push_back(RealVector(static_cast<std::size_t>(params.n), 0.0));
                const double r = std::sqrt(params.jam_energy());
                for (std::uint64_t k = 1; k < strat.candidates; ++k)
                    cands.push_back(sample_sphere(crng, params.n, r));
                AttackResult ar = attack_search_joint(cb, cands, spec.message_sample,
                                                      strat.trials_per_candidate, cb_seed);
                ResultRow row = base_row(spec, params, spec.rate, spec.delta0);
                row.strategy = strat.label();
                fill_estimate(row, ar.errors, ar.trials, false, CountMode::operational);
                rows.push_back(row);
                if (row.p_hat > best_p) {
                    best_p = row.p_hat;
                    best_label = row.strategy;
                }
                continue;
            }
            EmaxBoth em = emax_both_modes(cb, strat, spec.trials, spec.message_sample, cb_seed);
            ResultRow op = base_row(spec, params, spec.rate, spec.delta0);
            op.strategy = strat.label();
            fill_estimate(op, em.op_counts.operational, em.op_counts.trials, em.ensemble,
                          CountMode::operational);
            rows.push_back(op);
            ResultRow pr = base_row(spec, params, spec.rate, spec.delta0);
            pr.strategy = strat.label();
            fill_estimate(pr, em.pred_counts.predicate, em.pred_counts.trials, em.ensemble,
                          CountMode::predicate);
            rows.push_back(pr);
            if (op.p_hat > best_p) {
                best_p = op.p_hat;
                best_label = op.strategy;
            }
        }
        ResultRow best = base_row(spec, params, spec.rate, spec.delta0);
        best.name = spec.name + "_best";
        best.strategy = "best:" + best_label;
        best.mode = "operational";
        best.trials = spec.trials;
        best.errors = 0;
        best.p_hat = best_p;
        best.ci_low = 0;
        best.ci_high = 0;
        rows.push_back(best);
    }
    return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    if (spec.name == "achievability") return run_achievability(spec);
    if (spec.name == "converse") return run_converse(spec);
    if (spec.name == "phase" || spec.name == "phase_transition")
        return run_phase_transition(spec);
    throw ConfigError("unknown experiment: " + spec.name);
}

} // namespace avc
