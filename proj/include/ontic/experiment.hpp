// experiment.hpp
// Seeded Monte Carlo of the n-device protocol: each device prepares psi or
// phi at random, the joint system is measured once. Trials run under quantum
// statistics or under a finite ontic model, with optional correlated-device
// variants (shared randomness between the devices' lambda draws).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ontic/antidistinguish.hpp"
#include "ontic/common.hpp"
#include "ontic/ontic_model.hpp"
#include "ontic/quantum.hpp"
#include "ontic/rng.hpp"

namespace ontic {

enum class CorrelationKind { independent, shared_randomness, common_supply };

inline const char* to_string(CorrelationKind c) {
    switch (c) {
        case CorrelationKind::independent: return "independent";
        case CorrelationKind::shared_randomness: return "shared_randomness";
        default: return "common_supply";
    }
}

struct DeviceConfig {
    std::size_t n = 2;
    std::vector<double> choice_bias;  // per device; a single entry broadcasts
    CorrelationKind correlation = CorrelationKind::independent;
    double strength = 0.0;

    double bias(std::size_t device) const {
        if (choice_bias.empty()) return 0.5;
        if (choice_bias.size() == 1) return choice_bias.front();
        return choice_bias.at(device);
    }

    void validate() const {
        if (n < 2) throw validation_error("device_count", "need n > 1 devices");
        for (std::size_t j = 0; j < n; ++j)
            if (bias(j) < 0.0 || bias(j) > 1.0)
                throw validation_error("choice_bias", "choice bias must lie in [0,1]");
        if (correlation == CorrelationKind::independent && strength != 0.0)
            throw validation_error("correlation_strength",
                                   "independent devices have zero strength");
        if (strength < 0.0 || strength > 1.0)
            throw validation_error("correlation_strength", "strength must lie in [0,1]");
    }
};

struct TrialRecord {
    ProductStateIndex chosen;
    std::size_t outcome = 0;
    bool forbidden = false;
};

struct SimulationSummary {
    std::size_t trials = 0;
    std::size_t devices = 0;
    std::size_t outcomes = 0;
    std::uint64_t seed = 0;
    std::string rng_id = kRngId;
    DeviceConfig config;
    std::vector<std::size_t> prepared_counts;        // per k
    std::vector<std::vector<std::size_t>> counts;    // [k][m]
    std::vector<double> choice_probs;                // analytic p(k)
    std::vector<std::vector<double>> predicted;      // [k][m] conditional on k
    std::size_t forbidden_count = 0;
    double forbidden_frequency = 0.0;
    double chi_square = 0.0;
    double chi_p_value = 1.0;
    std::size_t chi_dof = 0;
    std::vector<TrialRecord> records;                // filled when requested

    double empirical_joint(std::size_t k, std::size_t m) const {
        return trials ? double(counts[k][m]) / double(trials) : 0.0;
    }
};

namespace detail {

// Regularized upper incomplete gamma Q(a, x); series for small x, Lentz
// continued fraction otherwise.
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) return 1.0;
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a, sum = term;
        for (int i = 1; i < 500; ++i) {
            term *= x / (a + i);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

inline double chi_p_value(double chi2, std::size_t dof) {
    if (dof == 0) return 1.0;
    return gamma_q(double(dof) / 2.0, chi2 / 2.0);
}

// Probability of each bit pattern under the mixture of independent and
// comonotone (common-uniform) device choices.
inline std::vector<double> choice_distribution(const DeviceConfig& cfg) {
    const std::size_t count = std::size_t{1} << cfg.n;
    const double alpha = cfg.correlation == CorrelationKind::independent ? 0.0 : cfg.strength;
    std::vector<double> p(count, 0.0);
    for (std::size_t k = 1; k <= count; ++k) {
        const auto idx = ProductStateIndex::from_k(k, cfg.n);
        double prod = 1.0, lo = 0.0, hi = 1.0;
        for (std::size_t j = 0; j < cfg.n; ++j) {
            const double b = cfg.bias(j);
            if (idx.bits[j] == 0) {
                prod *= b;
                hi = std::min(hi, b);  // u < bias selects psi
            } else {
                prod *= 1.0 - b;
                lo = std::max(lo, b);
            }
        }
        p[k - 1] = (1.0 - alpha) * prod + alpha * std::max(0.0, hi - lo);
    }
    return p;
}

inline void fill_chi_square(SimulationSummary& s) {
    s.chi_square = 0.0;
    s.chi_dof = 0;
    for (std::size_t k = 0; k < s.counts.size(); ++k) {
        std::size_t included = 0;
        double chi = 0.0;
        for (std::size_t m = 0; m < s.counts[k].size(); ++m) {
            const double expect = double(s.prepared_counts[k]) * s.predicted[k][m];
            if (expect < 5.0) continue;
            const double diff = double(s.counts[k][m]) - expect;
            chi += diff * diff / expect;
            ++included;
        }
        if (included >= 2) {
            s.chi_square += chi;
            s.chi_dof += included - 1;
        }
    }
    s.chi_p_value = chi_p_value(s.chi_square, s.chi_dof);
}

constexpr std::size_t kChunk = 8192;

// Per-trial draw order is fixed (mode, common u, device u's, outcome u) so
// streams stay aligned regardless of configuration.
template <typename OutcomeSampler>
void run_trials(const DeviceConfig& cfg, std::size_t trials, std::uint64_t seed,
                bool keep_records, SimulationSummary& s, OutcomeSampler&& sample_outcome) {
    const double alpha =
        cfg.correlation == CorrelationKind::independent ? 0.0 : cfg.strength;
    for (std::size_t start = 0; start < trials; start += kChunk) {
        Xoshiro256 rng = Xoshiro256::stream(seed, start / kChunk);
        const std::size_t stop = std::min(trials, start + kChunk);
        for (std::size_t trial = start; trial < stop; ++trial) {
            const double mode_u = rng.u01();
            const double common_u = rng.u01();
            ProductStateIndex idx;
            idx.bits.resize(cfg.n);
            const bool common = mode_u < alpha;
            for (std::size_t j = 0; j < cfg.n; ++j) {
                const double u = rng.u01();
                idx.bits[j] = ((common ? common_u : u) < cfg.bias(j)) ? 0 : 1;
            }
            const std::size_t k = idx.k() - 1;
            const std::size_t m = sample_outcome(k, rng);
            ++s.prepared_counts[k];
            ++s.counts[k][m];
            const bool forbidden = (m == k);
            s.forbidden_count += forbidden;
            if (keep_records) s.records.push_back({idx, m, forbidden});
        }
    }
    s.forbidden_frequency = trials ? double(s.forbidden_count) / double(trials) : 0.0;
}

} // namespace detail

// Quantum-statistics run: device choices per configuration, outcome sampled
// from the Born distribution of the prepared product. The measurement is
// verified to antidistinguish the products before any sampling.
inline SimulationSummary simulate_quantum(const PureState& psi, const PureState& phi,
                                          const Measurement& meas, const DeviceConfig& cfg,
                                          std::size_t trials, std::uint64_t seed,
                                          bool keep_records = false) {
    cfg.validate();
    auto products = enumerate_product_states(psi, phi, cfg.n);
    std::vector<PureState> states;
    for (auto& [idx, st] : products) states.push_back(st);
    const auto rep = verify_antidistinguishing(meas, states, 1e-8);
    if (!rep.pass)
        throw validation_error("measurement_not_antidistinguishing",
                               "measurement residual " + format17(rep.max_residual) +
                                   " exceeds 1e-8");

    SimulationSummary s;
    s.trials = trials;
    s.devices = cfg.n;
    s.outcomes = meas.outcome_count();
    s.seed = seed;
    s.config = cfg;
    s.prepared_counts.assign(states.size(), 0);
    s.counts.assign(states.size(), std::vector<std::size_t>(s.outcomes, 0));
    s.choice_probs = detail::choice_distribution(cfg);
    for (const auto& st : states)
        s.predicted.push_back(born_distribution(st, meas).probabilities);

    detail::run_trials(cfg, trials, seed, keep_records, s,
                       [&](std::size_t k, Xoshiro256& rng) {
                           return rng.categorical(s.predicted[k]);
                       });
    detail::fill_chi_square(s);
    return s;
}

// Correlated-device variant of a product-structured model: the joint
// epistemic vector of every scenario joint becomes the mixture
// alpha * comonotone coupling + (1 - alpha) * product of factor marginals.
inline OnticModel correlated_variant(const OnticModel& model, const std::string& mid,
                                     const DeviceConfig& cfg) {
    if (cfg.correlation == CorrelationKind::independent || cfg.strength == 0.0) return model;
    if (!model.space.has_product_structure())
        throw structure_error("correlated devices need a product-structured ontic space");
    auto it = model.scenarios.find(mid);
    if (it == model.scenarios.end())
        throw missing_pair_error("no scenario recorded for measurement '" + mid + "'");
    OnticModel out = model;
    const double alpha = cfg.strength;
    // Fixtures that define the psi/phi context vectors as aliases of the
    // all-psi / all-phi joints keep that convention under the coupling.
    const bool psi_aliased =
        model.epistemic.at(mid).at(it->second.psi_id) ==
        model.epistemic.at(mid).at(it->second.joint_ids.front());
    const bool phi_aliased =
        model.epistemic.at(mid).at(it->second.phi_id) ==
        model.epistemic.at(mid).at(it->second.joint_ids.back());
    for (const auto& jid : it->second.joint_ids) {
        const auto* joint = model.find_preparation(jid);
        if (!joint || joint->factor_ids.size() != model.space.factors.size())
            throw structure_error("joint preparation '" + jid + "' lacks factor links");
        std::vector<const std::vector<double>*> marg;
        for (const auto& fid : joint->factor_ids)
            marg.push_back(&model.factor_epistemic_vec(mid, fid));
        std::vector<double> mixed(model.space.size, 0.0);
        // Independent part: product measure over the factor marginals.
        std::vector<std::size_t> tuple(marg.size(), 0);
        while (true) {
            double prod = 1.0;
            for (std::size_t j = 0; j < marg.size(); ++j) prod *= (*marg[j])[tuple[j]];
            mixed[out.space.flatten(tuple)] += (1.0 - alpha) * prod;
            std::size_t j = tuple.size();
            bool done = false;
            while (j-- > 0) {
                if (++tuple[j] < out.space.factors[j]) break;
                tuple[j] = 0;
                if (j == 0) done = true;
            }
            if (done) break;
        }
        // Comonotone part: all devices share one uniform quantile.
        if (alpha > 0.0) {
            std::vector<double> cum;
            for (const auto* m : marg) {
                double c = 0.0;
                for (double x : *m)
                    if (x > 0.0) cum.push_back(c += x);
            }
            cum.push_back(1.0);
            std::sort(cum.begin(), cum.end());
            double lo = 0.0;
            for (double hi : cum) {
                if (hi - lo > 1e-15) {
                    const double mid_u = 0.5 * (lo + hi);
                    std::vector<std::size_t> atom(marg.size(), 0);
                    for (std::size_t j = 0; j < marg.size(); ++j) {
                        double c = 0.0;
                        std::size_t pick = marg[j]->size() - 1;
                        for (std::size_t l = 0; l < marg[j]->size(); ++l) {
                            c += (*marg[j])[l];
                            if (mid_u < c) {
                                pick = l;
                                break;
                            }
                        }
                        atom[j] = pick;
                    }
                    mixed[out.space.flatten(atom)] += alpha * (hi - lo);
                }
                lo = hi;
            }
        }
        out.epistemic[mid][jid] = std::move(mixed);
    }
    if (psi_aliased)
        out.epistemic[mid][it->second.psi_id] =
            out.epistemic[mid][it->second.joint_ids.front()];
    if (phi_aliased)
        out.epistemic[mid][it->second.phi_id] =
            out.epistemic[mid][it->second.joint_ids.back()];
    out.measurement_independent = model.epistemic.size() <= 1 && model.measurement_independent;
    return out;
}

// Model-statistics run: sample the joint preparation from the device
// choices, then lambda from its epistemic vector, then the outcome from the
// response row.
inline SimulationSummary simulate_model(const OnticModel& model_in, const std::string& mid,
                                        const DeviceConfig& cfg, std::size_t trials,
                                        std::uint64_t seed, bool keep_records = false) {
    cfg.validate();
    const OnticModel model = correlated_variant(model_in, mid, cfg);
    auto it = model.scenarios.find(mid);
    if (it == model.scenarios.end())
        throw missing_pair_error("no scenario recorded for measurement '" + mid + "'");
    const auto& scen = it->second;
    const auto& table = model.response_table(mid);
    const std::size_t outcomes = table.labels.size();
    if (scen.joint_ids.size() != outcomes)
        throw structure_error("scenario joints do not match the outcome count");
    if ((std::size_t{1} << cfg.n) != outcomes)
        throw structure_error("device count does not match the outcome count");

    SimulationSummary s;
    s.trials = trials;
    s.devices = cfg.n;
    s.outcomes = outcomes;
    s.seed = seed;
    s.config = cfg;
    s.prepared_counts.assign(outcomes, 0);
    s.counts.assign(outcomes, std::vector<std::size_t>(outcomes, 0));
    // Choices stay independent here; the correlation acts on the lambda draws.
    DeviceConfig choice_cfg = cfg;
    choice_cfg.correlation = CorrelationKind::independent;
    choice_cfg.strength = 0.0;
    s.choice_probs = detail::choice_distribution(choice_cfg);
    std::vector<const std::vector<double>*> joint_epi;
    for (const auto& jid : scen.joint_ids) {
        joint_epi.push_back(&model.epistemic_vec(mid, jid));
        s.predicted.push_back(predicted_statistics(model, jid, mid).probabilities);
    }

    detail::run_trials(choice_cfg, trials, seed, keep_records, s,
                       [&](std::size_t k, Xoshiro256& rng) {
                           const std::size_t lambda = rng.categorical(*joint_epi[k]);
                           return rng.categorical(table.rows[lambda]);
                       });
    detail::fill_chi_square(s);
    return s;
}

// Empirical error rate of the optimal two-outcome discrimination measurement
// (projector onto the positive eigenspace of the density-operator
// difference) with equal priors.
inline double estimate_discrimination_error(const PureState& psi, const PureState& phi,
                                            std::size_t trials, std::uint64_t seed) {
    if (psi.dim() != phi.dim())
        throw dimension_mismatch("psi and phi have different dimensions");
    const std::size_t d = psi.dim();
    CMat diff(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            diff.at(i, j) = psi[i] * std::conj(psi[j]) - phi[i] * std::conj(phi[j]);
    const auto eig = hermitian_eigen(diff);
    CMat plus(d);
    for (std::size_t e = 0; e < d; ++e)
        if (eig.values[e] > 1e-12) plus += CMat::outer(eig.vectors[e]);

    const double p_psi_plus = plus.quad_form(psi.amplitudes());
    const double p_phi_plus = plus.quad_form(phi.amplitudes());
    std::size_t errors = 0;
    for (std::size_t start = 0; start < trials; start += detail::kChunk) {
        Xoshiro256 rng = Xoshiro256::stream(seed, start / detail::kChunk);
        const std::size_t stop = std::min(trials, start + detail::kChunk);
        for (std::size_t trial = start; trial < stop; ++trial) {
            const bool truth_psi = rng.u01() < 0.5;
            const double p_plus = clamp01(truth_psi ? p_psi_plus : p_phi_plus);
            const bool guess_psi = rng.u01() < p_plus;
            errors += (guess_psi != truth_psi);
        }
    }
    return trials ? double(errors) / double(trials) : 0.0;
}

} // namespace ontic
