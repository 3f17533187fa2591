// nogo.hpp
// Decision procedures for the two overlap no-go theorems on finite models,
// and a linear-programming layer that maximizes epistemic overlap subject to
// relaxed antidistinguishing statistics (the epsilon-robustness bound).

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ontic/common.hpp"
#include "ontic/ontic_model.hpp"
#include "ontic/quantum.hpp"
#include "ontic/simplex.hpp"

namespace ontic {

enum class NoGoStatus { overlap_zero, witness_found, hypotheses_not_met, inconclusive };

inline const char* to_string(NoGoStatus s) {
    switch (s) {
        case NoGoStatus::overlap_zero: return "overlap_zero";
        case NoGoStatus::witness_found: return "witness_found";
        case NoGoStatus::hypotheses_not_met: return "hypotheses_not_met";
        default: return "inconclusive";
    }
}

enum class WitnessKind { response_row_deficit, zero_constraint_violation, compatibility_violation };

inline const char* to_string(WitnessKind k) {
    switch (k) {
        case WitnessKind::response_row_deficit: return "response_row_deficit";
        case WitnessKind::zero_constraint_violation: return "zero_constraint_violation";
        default: return "compatibility_violation";
    }
}

struct ContradictionWitness {
    std::size_t lambda = 0;
    WitnessKind kind = WitnessKind::response_row_deficit;
    double magnitude = 0.0;
    std::optional<std::size_t> outcome;
};

struct HypothesisReport {
    CheckVerdict completeness;
    std::vector<CheckVerdict> compatibility;     // one verdict per joint preparation
    std::vector<double> forbidden_statistics;    // p(k | M, P_{Psi_k})
    bool statistics_pass = true;
    double max_statistic = 0.0;
    std::optional<CheckVerdict> measurement_independence;  // theorem 2 only

    bool pass() const {
        if (!completeness.pass || !statistics_pass) return false;
        for (const auto& c : compatibility)
            if (!c.pass) return false;
        if (measurement_independence && !measurement_independence->pass) return false;
        return true;
    }
};

struct NoGoVerdict {
    int theorem = 1;
    NoGoStatus status = NoGoStatus::inconclusive;
    double overlap_value = 0.0;
    SupportSet support;
    std::optional<ContradictionWitness> witness;
    HypothesisReport hypotheses;
    std::string measurement;
    // For theorem 2 the single-measurement verdict is kept alongside.
    std::shared_ptr<const NoGoVerdict> theorem1;
};

namespace detail {

// Steps shared by the plain and the local variant once the support set S is
// fixed: per-lambda zero constraints, then the row-sum contradiction.
inline std::optional<ContradictionWitness> scan_support(
    const OnticModel& model, const std::string& mid,
    const std::vector<std::string>& joint_ids, const SupportSet& s, double zero_tol) {
    const auto& table = model.response_table(mid);
    for (std::size_t l : s.indices) {
        for (std::size_t k = 0; k < joint_ids.size(); ++k) {
            const double weight = model.epistemic_vec(mid, joint_ids[k])[l];
            if (!(weight > 0.0)) continue;
            const double bound = zero_tol / weight;
            const double entry = table.rows[l][k];
            if (entry > bound + 1e-12) {
                ContradictionWitness w;
                w.lambda = l;
                w.kind = WitnessKind::zero_constraint_violation;
                w.magnitude = entry - bound;
                w.outcome = k;
                return w;
            }
        }
    }
    for (std::size_t l : s.indices) {
        double row_sum = 0.0;
        for (double x : table.rows[l]) row_sum += x;
        if (row_sum < 1.0 - 1e-9) {
            ContradictionWitness w;
            w.lambda = l;
            w.kind = WitnessKind::response_row_deficit;
            w.magnitude = 1.0 - row_sum;
            return w;
        }
    }
    return std::nullopt;
}

} // namespace detail

// Executes the theorem-1 proof on a finite model: verify the hypotheses
// (statistical completeness, compatibility for every joint preparation, and
// the per-outcome zero statistics), compute the shared support S, then force
// the row-sum contradiction on S.
inline NoGoVerdict theorem1_check(const OnticModel& model, const std::string& mid,
                                  const std::string& psi_id, const std::string& phi_id,
                                  const std::vector<std::string>& joint_ids,
                                  double zero_tol = 1e-12) {
    NoGoVerdict v;
    v.theorem = 1;
    v.measurement = mid;
    const auto& table = model.response_table(mid);
    if (joint_ids.size() != table.labels.size())
        throw structure_error("need one joint preparation per measurement outcome");

    v.hypotheses.completeness = check_statistical_completeness(model);
    for (const auto& jid : joint_ids) {
        const auto* joint = model.find_preparation(jid);
        if (!joint) throw missing_pair_error("unknown joint preparation '" + jid + "'");
        v.hypotheses.compatibility.push_back(
            check_compatibility(model, mid, joint->factor_ids, jid));
    }
    v.hypotheses.forbidden_statistics.resize(joint_ids.size());
    for (std::size_t k = 0; k < joint_ids.size(); ++k) {
        const double stat = predicted_statistics(model, joint_ids[k], mid).probabilities[k];
        v.hypotheses.forbidden_statistics[k] = stat;
        v.hypotheses.max_statistic = std::max(v.hypotheses.max_statistic, stat);
        if (stat > zero_tol) v.hypotheses.statistics_pass = false;
    }

    const auto ov = overlap(model, mid, psi_id, phi_id);
    v.overlap_value = ov.value;
    v.support = ov.support;

    if (!v.hypotheses.pass()) {
        v.status = NoGoStatus::hypotheses_not_met;
        for (const auto& c : v.hypotheses.compatibility) {
            if (!c.pass && c.lambda && v.support.contains(*c.lambda)) {
                ContradictionWitness w;
                w.lambda = *c.lambda;
                w.kind = WitnessKind::compatibility_violation;
                w.magnitude = c.magnitude;
                v.witness = w;
                break;
            }
        }
        return v;
    }

    if (v.support.empty()) {
        v.status = NoGoStatus::overlap_zero;
        return v;
    }
    if (auto w = detail::scan_support(model, mid, joint_ids, v.support, zero_tol)) {
        v.status = NoGoStatus::witness_found;
        v.witness = w;
        return v;
    }
    // Reachable only when zero_tol is loose enough to make the zero
    // constraints vacuous; the theorem then has no force on this model.
    v.status = NoGoStatus::inconclusive;
    return v;
}

// Product-space variant: local compatibility replaces compatibility and S
// becomes the diagonal set of tuples with jointly supported equal components.
inline NoGoVerdict theorem1_check_local(const OnticModel& model, const std::string& mid,
                                        const std::string& psi_id, const std::string& phi_id,
                                        const std::vector<std::string>& joint_ids,
                                        double zero_tol = 1e-12) {
    if (!model.space.has_product_structure())
        throw structure_error("local variant needs a product-structured ontic space");
    for (std::size_t f : model.space.factors)
        if (f != model.space.factors.front())
            throw structure_error("diagonal support set needs equal factor sizes");

    NoGoVerdict v;
    v.theorem = 1;
    v.measurement = mid;
    const auto& table = model.response_table(mid);
    if (joint_ids.size() != table.labels.size())
        throw structure_error("need one joint preparation per measurement outcome");

    v.hypotheses.completeness = check_statistical_completeness(model);
    for (const auto& jid : joint_ids) {
        const auto* joint = model.find_preparation(jid);
        if (!joint) throw missing_pair_error("unknown joint preparation '" + jid + "'");
        v.hypotheses.compatibility.push_back(
            check_local_compatibility(model, mid, joint->factor_ids, jid));
    }
    v.hypotheses.forbidden_statistics.resize(joint_ids.size());
    for (std::size_t k = 0; k < joint_ids.size(); ++k) {
        const double stat = predicted_statistics(model, joint_ids[k], mid).probabilities[k];
        v.hypotheses.forbidden_statistics[k] = stat;
        v.hypotheses.max_statistic = std::max(v.hypotheses.max_statistic, stat);
        if (stat > zero_tol) v.hypotheses.statistics_pass = false;
    }

    const auto& psi_marg = model.factor_epistemic_vec(mid, psi_id);
    const auto& phi_marg = model.factor_epistemic_vec(mid, phi_id);
    const std::size_t n = model.space.factors.size();
    for (std::size_t l = 0; l < model.space.factors.front(); ++l) {
        v.overlap_value += psi_marg[l] * phi_marg[l];
        if (psi_marg[l] > model.support_tol && phi_marg[l] > model.support_tol)
            v.support.indices.push_back(
                model.space.flatten(std::vector<std::size_t>(n, l)));
    }

    if (!v.hypotheses.pass()) {
        v.status = NoGoStatus::hypotheses_not_met;
        return v;
    }
    if (v.support.empty()) {
        v.status = NoGoStatus::overlap_zero;
        return v;
    }
    if (auto w = detail::scan_support(model, mid, joint_ids, v.support, zero_tol)) {
        v.status = NoGoStatus::witness_found;
        v.witness = w;
        return v;
    }
    v.status = NoGoStatus::inconclusive;
    return v;
}

// Theorem 2 layers measurement independence over theorem 1; when it holds
// the epistemic vectors are measurement-free and the reported overlap is
// valid for every measurement.
inline NoGoVerdict theorem2_check(const OnticModel& model, const std::string& scenario_mid,
                                  const std::string& psi_id, const std::string& phi_id,
                                  const std::vector<std::string>& joint_ids,
                                  double zero_tol = 1e-12) {
    NoGoVerdict inner = theorem1_check(model, scenario_mid, psi_id, phi_id, joint_ids, zero_tol);
    NoGoVerdict v;
    v.theorem = 2;
    v.measurement = scenario_mid;
    v.hypotheses = inner.hypotheses;
    v.hypotheses.measurement_independence = check_measurement_independence(model);
    v.overlap_value = inner.overlap_value;
    v.support = inner.support;
    v.witness = inner.witness;
    v.theorem1 = std::make_shared<NoGoVerdict>(inner);
    if (!v.hypotheses.measurement_independence->pass || inner.status == NoGoStatus::hypotheses_not_met)
        v.status = NoGoStatus::hypotheses_not_met;
    else
        v.status = inner.status;
    return v;
}

// ---------------------------------------------------------------------------
// Epsilon-robustness LP
// ---------------------------------------------------------------------------

struct MaxOverlapOptions {
    double floor_c = 1e-6;  // quantitative compatibility floor linking joints to t
    int rounds = 50;        // alternating epistemic/response rounds
};

struct MaxOverlapResult {
    bool feasible = false;
    double value = 0.0;     // best certified sum_lambda min(q_psi, q_phi)
    double epsilon = 0.0;
    std::size_t lambda_count = 0;
    OnticModel model;
    int rounds_used = 0;
};

namespace detail {

struct LpScenario {
    std::size_t lambdas = 0;
    std::size_t outcomes = 0;
    std::vector<ProductStateIndex> indices;
};

// Maximize sum_lambda t subject to t <= q_psi, t <= q_phi, normalizations,
// the compatibility floor q_k >= c*t and the epsilon statistics constraint,
// with the response table held fixed.
inline LpResult epistemic_step(const LpScenario& sc,
                               const std::vector<std::vector<double>>& resp, double epsilon,
                               double floor_c) {
    const std::size_t L = sc.lambdas, K = sc.outcomes;
    const auto t_var = [&](std::size_t l) { return l; };
    const auto psi_var = [&](std::size_t l) { return L + l; };
    const auto phi_var = [&](std::size_t l) { return 2 * L + l; };
    const auto joint_var = [&](std::size_t k, std::size_t l) { return 3 * L + k * L + l; };

    LpBuilder lp(3 * L + K * L);
    for (std::size_t l = 0; l < L; ++l) lp.set_objective(t_var(l), 1.0);
    for (std::size_t l = 0; l < L; ++l) {
        lp.add_le({{t_var(l), 1.0}, {psi_var(l), -1.0}}, 0.0);
        lp.add_le({{t_var(l), 1.0}, {phi_var(l), -1.0}}, 0.0);
    }
    std::vector<std::pair<std::size_t, double>> sum_psi, sum_phi;
    for (std::size_t l = 0; l < L; ++l) {
        sum_psi.emplace_back(psi_var(l), 1.0);
        sum_phi.emplace_back(phi_var(l), 1.0);
    }
    lp.add_eq(sum_psi, 1.0);
    lp.add_eq(sum_phi, 1.0);
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<std::pair<std::size_t, double>> sum_k;
        for (std::size_t l = 0; l < L; ++l) sum_k.emplace_back(joint_var(k, l), 1.0);
        lp.add_eq(sum_k, 1.0);
        // Compatibility floor. Pure joints sit above their own factor support;
        // mixed joints sit above t, which the objective drives to
        // min(q_psi, q_phi).
        const std::size_t zeros = sc.indices[k].zero_bits();
        for (std::size_t l = 0; l < L; ++l) {
            std::size_t ref = t_var(l);
            if (zeros == sc.indices[k].n()) ref = psi_var(l);
            else if (zeros == 0) ref = phi_var(l);
            lp.add_le({{ref, floor_c}, {joint_var(k, l), -1.0}}, 0.0);
        }
        std::vector<std::pair<std::size_t, double>> stat;
        for (std::size_t l = 0; l < L; ++l)
            if (resp[l][k] != 0.0) stat.emplace_back(joint_var(k, l), resp[l][k]);
        lp.add_le(stat, epsilon);
    }
    return lp.maximize();
}

// Minimize the worst per-outcome forbidden statistic over response tables,
// with the epistemic side held fixed.
inline std::vector<std::vector<double>> response_step(
    const LpScenario& sc, const std::vector<std::vector<double>>& joints) {
    const std::size_t L = sc.lambdas, K = sc.outcomes;
    const auto r_var = [&](std::size_t l, std::size_t k) { return l * K + k; };
    const std::size_t z_var = L * K;

    LpBuilder lp(L * K + 1);
    lp.set_objective(z_var, -1.0);
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t k = 0; k < K; ++k) row.emplace_back(r_var(l, k), 1.0);
        lp.add_eq(row, 1.0);
    }
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<std::pair<std::size_t, double>> stat;
        for (std::size_t l = 0; l < L; ++l)
            if (joints[k][l] != 0.0) stat.emplace_back(r_var(l, k), joints[k][l]);
        stat.emplace_back(z_var, -1.0);
        lp.add_le(stat, 0.0);
    }
    auto res = lp.maximize();
    std::vector<std::vector<double>> resp(L, std::vector<double>(K, 0.0));
    if (res.status != LpResult::Status::optimal) return resp;
    for (std::size_t l = 0; l < L; ++l) {
        double sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            resp[l][k] = std::max(res.x[r_var(l, k)], 0.0);
            sum += resp[l][k];
        }
        if (sum <= 0.0) {
            resp[l].assign(K, 1.0 / double(K));
        } else {
            for (double& x : resp[l]) x /= sum;
        }
    }
    return resp;
}

inline std::vector<double> clean_distribution(std::vector<double> v) {
    double sum = 0.0;
    for (double& x : v) {
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (sum <= 0.0) {
        v.assign(v.size(), 1.0 / double(v.size()));
        return v;
    }
    for (double& x : v) x /= sum;
    return v;
}

} // namespace detail

// Alternating LP maximization of the epistemic overlap between the psi and
// phi preparations over all models whose forbidden statistics stay below
// epsilon. Returns a certified lower bound plus the realizing model. At
// epsilon = 0 any positive value would contradict the zero-overlap theorem,
// so the reported value must vanish.
inline MaxOverlapResult max_overlap_lp(const PureState& psi, const PureState& phi,
                                       const std::vector<std::string>& outcome_labels,
                                       std::size_t lambda_count, double epsilon,
                                       const MaxOverlapOptions& opts = {},
                                       const std::vector<std::vector<double>>* warm_response =
                                           nullptr) {
    if (lambda_count < 2)
        throw validation_error("lambda_count", "need at least two ontic states");
    if (epsilon < 0.0)
        throw validation_error("epsilon", "epsilon must be nonnegative");

    detail::LpScenario sc;
    sc.lambdas = lambda_count;
    sc.outcomes = outcome_labels.size();
    std::size_t n = 0;
    while ((std::size_t{1} << n) < sc.outcomes) ++n;
    if ((std::size_t{1} << n) != sc.outcomes)
        throw validation_error("outcome_count", "measurement needs 2^n outcomes");
    for (std::size_t k = 1; k <= sc.outcomes; ++k)
        sc.indices.push_back(ProductStateIndex::from_k(k, n));

    // Initial response: lambda deterministically reports outcome lambda mod K.
    std::vector<std::vector<double>> resp(sc.lambdas,
                                          std::vector<double>(sc.outcomes, 0.0));
    for (std::size_t l = 0; l < sc.lambdas; ++l) resp[l][l % sc.outcomes] = 1.0;
    if (warm_response && warm_response->size() == sc.lambdas) resp = *warm_response;

    MaxOverlapResult best;
    best.epsilon = epsilon;
    best.lambda_count = lambda_count;
    best.value = -1.0;
    std::vector<double> best_psi, best_phi;
    std::vector<std::vector<double>> best_joints, best_resp;

    for (int round = 0; round < opts.rounds; ++round) {
        auto lp = detail::epistemic_step(sc, resp, epsilon, opts.floor_c);
        if (lp.status != LpResult::Status::optimal) break;
        const std::size_t L = sc.lambdas, K = sc.outcomes;
        std::vector<double> q_psi(lp.x.begin() + L, lp.x.begin() + 2 * L);
        std::vector<double> q_phi(lp.x.begin() + 2 * L, lp.x.begin() + 3 * L);
        std::vector<std::vector<double>> joints(K);
        for (std::size_t k = 0; k < K; ++k)
            joints[k].assign(lp.x.begin() + 3 * L + k * L, lp.x.begin() + 3 * L + (k + 1) * L);

        // Independent re-validation of the epsilon constraint.
        bool ok = true;
        for (std::size_t k = 0; k < K && ok; ++k) {
            double stat = 0.0;
            for (std::size_t l = 0; l < L; ++l) stat += resp[l][k] * std::max(joints[k][l], 0.0);
            if (stat > epsilon + 1e-9) ok = false;
        }
        if (ok && lp.objective > best.value) {
            best.value = std::max(lp.objective, 0.0);
            best.feasible = true;
            best_psi = q_psi;
            best_phi = q_phi;
            best_joints = joints;
            best_resp = resp;
        }
        best.rounds_used = round + 1;
        auto next = detail::response_step(sc, joints);
        if (next == resp) break;  // alternation reached a fixed point
        resp = std::move(next);
    }

    if (!best.feasible) {
        best.value = 0.0;
        return best;
    }

    // Assemble the realizing model.
    OnticModel model;
    model.space.size = sc.lambdas;
    model.measurement_independent = true;
    model.preparations.push_back({"P_psi", psi, {}});
    model.preparations.push_back({"P_phi", phi, {}});
    const std::string mid = "M";
    model.epistemic[mid]["P_psi"] = detail::clean_distribution(best_psi);
    model.epistemic[mid]["P_phi"] = detail::clean_distribution(best_phi);
    Scenario scen;
    scen.psi_id = "P_psi";
    scen.phi_id = "P_phi";
    for (std::size_t k = 0; k < sc.outcomes; ++k) {
        const auto& idx = sc.indices[k];
        std::vector<PureState> factors;
        std::vector<std::string> fids;
        for (int b : idx.bits) {
            factors.push_back(b == 0 ? psi : phi);
            fids.push_back(b == 0 ? "P_psi" : "P_phi");
        }
        const std::string jid = "P_joint" + std::to_string(k + 1);
        model.preparations.push_back({jid, tensor_product(factors), fids});
        model.epistemic[mid][jid] = detail::clean_distribution(best_joints[k]);
        scen.joint_ids.push_back(jid);
    }
    ResponseTable table;
    table.labels = outcome_labels;
    table.rows = best_resp;
    for (auto& row : table.rows) row = detail::clean_distribution(row);
    model.response[mid] = std::move(table);
    model.scenarios[mid] = std::move(scen);
    best.model = std::move(model);
    return best;
}

// Epsilon-grid sweep with warm carry: each epsilon starts from the previous
// best response table and inherits its certified value, which makes the
// reported column nondecreasing.
inline std::vector<MaxOverlapResult> max_overlap_grid(
    const PureState& psi, const PureState& phi,
    const std::vector<std::string>& outcome_labels, std::size_t lambda_count,
    const std::vector<double>& eps_grid, const MaxOverlapOptions& opts = {}) {
    std::vector<MaxOverlapResult> out;
    const std::vector<std::vector<double>>* warm = nullptr;
    std::vector<std::vector<double>> carry;
    for (double eps : eps_grid) {
        auto res = max_overlap_lp(psi, phi, outcome_labels, lambda_count, eps, opts, warm);
        if (!out.empty() && out.back().feasible && res.value < out.back().value) {
            // The previous solution stays feasible when epsilon grows.
            res.value = out.back().value;
            res.model = out.back().model;
            res.feasible = true;
        }
        if (res.feasible) {
            carry = res.model.response_table("M").rows;
            warm = &carry;
        }
        out.push_back(std::move(res));
    }
    return out;
}

inline MaxOverlapResult max_overlap_lp(const PureState& psi, const PureState& phi,
                                       const Measurement& meas, std::size_t lambda_count,
                                       double epsilon, const MaxOverlapOptions& opts = {}) {
    return max_overlap_lp(psi, phi, meas.labels, lambda_count, epsilon, opts);
}

inline std::vector<MaxOverlapResult> max_overlap_grid(
    const PureState& psi, const PureState& phi, const Measurement& meas,
    std::size_t lambda_count, const std::vector<double>& eps_grid,
    const MaxOverlapOptions& opts = {}) {
    return max_overlap_grid(psi, phi, meas.labels, lambda_count, eps_grid, opts);
}

} // namespace ontic
