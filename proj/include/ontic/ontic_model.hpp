// ontic_model.hpp
// Finite ontological models: an ontic space Lambda, epistemic distributions
// p(lambda|M,P) indexed by (measurement, preparation) pairs, and response
// functions p(m|M,lambda). Each structural assumption (statistical
// completeness, compatibility, local compatibility, factorisability,
// measurement independence) is a decidable checker returning a verdict with
// a concrete witness on failure.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontic/common.hpp"
#include "ontic/quantum.hpp"

namespace ontic {

struct OnticSpace {
    std::size_t size = 0;
    std::vector<std::size_t> factors;  // empty when there is no product structure

    bool has_product_structure() const { return !factors.empty(); }

    void validate() const {
        if (size < 1) throw validation_error("ontic_space", "ontic space must be nonempty");
        if (!factors.empty()) {
            std::size_t prod = 1;
            for (std::size_t f : factors) prod *= f;
            if (prod != size)
                throw validation_error("ontic_space",
                                       "factor sizes do not multiply to the space size");
        }
    }

    std::size_t flatten(const std::vector<std::size_t>& tuple) const {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < factors.size(); ++j) idx = idx * factors[j] + tuple[j];
        return idx;
    }

    std::vector<std::size_t> unflatten(std::size_t idx) const {
        std::vector<std::size_t> tuple(factors.size());
        for (std::size_t j = factors.size(); j-- > 0;) {
            tuple[j] = idx % factors[j];
            idx /= factors[j];
        }
        return tuple;
    }
};

// Binds a preparation procedure to the state it prepares. Joint preparations
// carry explicit links to their factor preparations.
struct PreparationLabel {
    std::string id;
    PureState state;
    std::vector<std::string> factor_ids;  // empty for elementary preparations
};

struct ResponseTable {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;  // rows[lambda][outcome]
};

// Which preparations play the psi/phi/joint roles for a measurement, with
// joints listed in product-state index order.
struct Scenario {
    std::string psi_id;
    std::string phi_id;
    std::vector<std::string> joint_ids;
};

enum class Validation { strict, relaxed };

struct SupportSet {
    std::vector<std::size_t> indices;

    bool contains(std::size_t i) const {
        return std::binary_search(indices.begin(), indices.end(), i);
    }
    bool empty() const { return indices.empty(); }
    std::size_t size() const { return indices.size(); }
};

inline SupportSet support_of(const std::vector<double>& v, double tol) {
    SupportSet s;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] > tol) s.indices.push_back(i);
    return s;
}

struct OnticModel {
    OnticSpace space;
    std::vector<PreparationLabel> preparations;
    // response[mid].rows[lambda][m] = p(m|M,lambda)
    std::map<std::string, ResponseTable> response;
    // epistemic[mid][pid][lambda] = p(lambda|M,P)
    std::map<std::string, std::map<std::string, std::vector<double>>> epistemic;
    // factor_epistemic[mid][pid][lambda_j]: factor-space vector for
    // product-structured models (the same vector serves any device slot).
    std::map<std::string, std::map<std::string, std::vector<double>>> factor_epistemic;
    // Imported models may carry preparation-indexed response tables; the
    // statistical-completeness checker compares them.
    std::map<std::string, std::map<std::string, ResponseTable>> response_by_preparation;
    std::map<std::string, Scenario> scenarios;
    bool measurement_independent = false;
    double support_tol = 0.0;
    Validation validation = Validation::strict;

    const PreparationLabel* find_preparation(const std::string& pid) const {
        for (const auto& p : preparations)
            if (p.id == pid) return &p;
        return nullptr;
    }

    const std::vector<double>& epistemic_vec(const std::string& mid,
                                             const std::string& pid) const {
        auto m = epistemic.find(mid);
        if (m == epistemic.end())
            throw missing_pair_error("no epistemic data for measurement '" + mid + "'");
        auto p = m->second.find(pid);
        if (p == m->second.end())
            throw missing_pair_error("no epistemic vector for (" + mid + ", " + pid + ")");
        return p->second;
    }

    const std::vector<double>& factor_epistemic_vec(const std::string& mid,
                                                    const std::string& pid) const {
        auto m = factor_epistemic.find(mid);
        if (m == factor_epistemic.end())
            throw missing_pair_error("no factor epistemic data for measurement '" + mid + "'");
        auto p = m->second.find(pid);
        if (p == m->second.end())
            throw missing_pair_error("no factor epistemic vector for (" + mid + ", " + pid +
                                     ")");
        return p->second;
    }

    const ResponseTable& response_table(const std::string& mid) const {
        auto it = response.find(mid);
        if (it == response.end())
            throw missing_pair_error("no response table for measurement '" + mid + "'");
        return it->second;
    }

    std::vector<std::string> measurement_ids() const {
        std::vector<std::string> out;
        for (const auto& [mid, table] : response) out.push_back(mid);
        return out;
    }

    void validate_model() const {
        space.validate();
        for (const auto& p : preparations) {
            if (!p.factor_ids.empty()) {
                std::vector<PureState> parts;
                for (const auto& fid : p.factor_ids) {
                    const auto* f = find_preparation(fid);
                    if (!f)
                        throw validation_error("unknown_factor",
                                               "preparation '" + p.id +
                                                   "' links to unknown factor '" + fid + "'");
                    parts.push_back(f->state);
                }
                const PureState prod = tensor_product(parts);
                if (!prod.equal_up_to_phase(p.state))
                    throw validation_error("factor_state_mismatch",
                                           "preparation '" + p.id +
                                               "' state differs from its factor product");
            }
        }
        for (const auto& [mid, table] : response) {
            if (table.rows.size() != space.size)
                throw validation_error("response_shape",
                                       "response table for '" + mid +
                                           "' must have one row per ontic state");
            for (const auto& row : table.rows) {
                if (row.size() != table.labels.size())
                    throw validation_error("response_shape",
                                           "response row width differs from label count");
                double s = 0.0;
                for (double x : row) {
                    if (x < 0.0)
                        throw validation_error("response_negative",
                                               "response probabilities must be nonnegative");
                    s += x;
                }
                if (validation == Validation::strict && std::abs(s - 1.0) > kProbSumTol)
                    throw validation_error("response_row_sum",
                                           "response row for '" + mid + "' sums to " +
                                               format17(s));
            }
        }
        for (const auto& [mid, per_prep] : epistemic) {
            for (const auto& [pid, vec] : per_prep) {
                if (vec.size() != space.size)
                    throw validation_error("epistemic_shape",
                                           "epistemic vector for (" + mid + ", " + pid +
                                               ") has wrong length");
                double s = 0.0;
                for (double x : vec) {
                    if (x < 0.0)
                        throw validation_error("epistemic_negative",
                                               "epistemic probabilities must be nonnegative");
                    s += x;
                }
                if (std::abs(s - 1.0) > kProbSumTol)
                    throw validation_error("epistemic_sum", "epistemic vector for (" + mid +
                                                                ", " + pid + ") sums to " +
                                                                format17(s));
            }
        }
        if (!factor_epistemic.empty() && !space.has_product_structure())
            throw validation_error("factor_epistemic",
                                   "factor-level vectors need a product-structured space");
        if (measurement_independent) {
            for (const auto& p : preparations) {
                const std::vector<double>* ref = nullptr;
                for (const auto& [mid, per_prep] : epistemic) {
                    auto it = per_prep.find(p.id);
                    if (it == per_prep.end()) continue;
                    if (!ref) {
                        ref = &it->second;
                        continue;
                    }
                    for (std::size_t l = 0; l < ref->size(); ++l)
                        if (std::abs((*ref)[l] - it->second[l]) > 1e-12)
                            throw validation_error(
                                "measurement_dependence",
                                "model flagged measurement-independent but epistemic "
                                "vectors for '" +
                                    p.id + "' differ across measurements");
                }
            }
        }
    }
};

// Verdict shared by all assumption checkers. On failure the fields identify
// the offending location.
struct CheckVerdict {
    bool pass = true;
    double magnitude = 0.0;
    std::string measurement;
    std::string prep_a;
    std::string prep_b;
    std::optional<std::size_t> lambda;
    std::vector<std::size_t> tuple;
    std::optional<std::size_t> outcome;
    std::string note;
};

// p(m|M,P) = sum_lambda p(m|M,lambda) p(lambda|M,P).
inline OutcomeDistribution predicted_statistics(const OnticModel& model,
                                                const std::string& pid,
                                                const std::string& mid) {
    const auto& epi = model.epistemic_vec(mid, pid);
    const auto& table = model.response_table(mid);
    OutcomeDistribution dist;
    dist.labels = table.labels;
    dist.probabilities.assign(table.labels.size(), 0.0);
    for (std::size_t l = 0; l < epi.size(); ++l) {
        if (epi[l] == 0.0) continue;
        for (std::size_t m = 0; m < dist.probabilities.size(); ++m)
            dist.probabilities[m] += table.rows[l][m] * epi[l];
    }
    for (double& p : dist.probabilities) p = std::max(p, 0.0);
    return dist;
}

// Canonical models index responses by (M, lambda) only, which is the
// representation-level form of statistical completeness; imported models
// with preparation-indexed tables are checked for coincidence.
inline CheckVerdict check_statistical_completeness(const OnticModel& model,
                                                   double tol = 1e-10) {
    CheckVerdict v;
    for (const auto& [mid, per_prep] : model.response_by_preparation) {
        const ResponseTable* ref = nullptr;
        std::string ref_pid = "(canonical)";
        auto canonical = model.response.find(mid);
        if (canonical != model.response.end()) ref = &canonical->second;
        for (const auto& [pid, table] : per_prep) {
            if (!ref) {
                ref = &table;
                ref_pid = pid;
                continue;
            }
            for (std::size_t l = 0; l < table.rows.size(); ++l) {
                for (std::size_t m = 0; m < table.rows[l].size(); ++m) {
                    const double dev = std::abs(table.rows[l][m] - ref->rows[l][m]);
                    if (dev > v.magnitude) {
                        v.magnitude = dev;
                        v.measurement = mid;
                        v.prep_a = ref_pid;
                        v.prep_b = pid;
                        v.lambda = l;
                        v.outcome = m;
                    }
                }
            }
        }
    }
    if (v.magnitude > tol) {
        v.pass = false;
        v.note = "response tables differ across preparations";
    }
    return v;
}

inline bool compatible(const OnticModel& model, std::size_t lambda,
                       const std::string& mid, const std::string& pid) {
    return model.epistemic_vec(mid, pid).at(lambda) > model.support_tol;
}

// Every lambda compatible with all factor preparations must be compatible
// with the joint preparation.
inline CheckVerdict check_compatibility(const OnticModel& model, const std::string& mid,
                                        const std::vector<std::string>& factor_preps,
                                        const std::string& joint_prep) {
    const auto* joint = model.find_preparation(joint_prep);
    if (!joint || joint->factor_ids.empty())
        throw structure_error("joint preparation '" + joint_prep + "' has no factor links");
    {
        auto a = joint->factor_ids;
        auto b = factor_preps;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            throw structure_error("factor list does not match the joint preparation's links");
    }
    std::set<std::string> distinct(factor_preps.begin(), factor_preps.end());
    const auto& joint_vec = model.epistemic_vec(mid, joint_prep);
    CheckVerdict v;
    v.measurement = mid;
    v.prep_a = joint_prep;
    for (std::size_t l = 0; l < model.space.size; ++l) {
        bool in_all = true;
        for (const auto& pid : distinct) {
            if (!(model.epistemic_vec(mid, pid)[l] > model.support_tol)) {
                in_all = false;
                break;
            }
        }
        if (in_all && !(joint_vec[l] > model.support_tol)) {
            v.pass = false;
            v.lambda = l;
            double m = 1.0;
            for (const auto& pid : distinct) m = std::min(m, model.epistemic_vec(mid, pid)[l]);
            v.magnitude = m;
            v.note = "lambda compatible with every factor but not with the joint";
            return v;
        }
    }
    return v;
}

// Factor-wise variant for product-structured spaces: every tuple of
// factor-supported lambda_j must be jointly supported.
inline CheckVerdict check_local_compatibility(const OnticModel& model,
                                              const std::string& mid,
                                              const std::vector<std::string>& factor_preps,
                                              const std::string& joint_prep) {
    if (!model.space.has_product_structure())
        throw structure_error("local compatibility needs a product-structured ontic space");
    if (factor_preps.size() != model.space.factors.size())
        throw structure_error("one factor preparation per tensor slot is required");
    const auto& joint_vec = model.epistemic_vec(mid, joint_prep);
    std::vector<const std::vector<double>*> marg(factor_preps.size());
    for (std::size_t j = 0; j < factor_preps.size(); ++j) {
        marg[j] = &model.factor_epistemic_vec(mid, factor_preps[j]);
        if (marg[j]->size() != model.space.factors[j])
            throw structure_error("factor epistemic vector length differs from factor size");
    }
    CheckVerdict v;
    v.measurement = mid;
    v.prep_a = joint_prep;
    std::vector<std::size_t> tuple(factor_preps.size(), 0);
    while (true) {
        bool all_positive = true;
        for (std::size_t j = 0; j < tuple.size(); ++j)
            if (!((*marg[j])[tuple[j]] > model.support_tol)) {
                all_positive = false;
                break;
            }
        if (all_positive) {
            const std::size_t idx = model.space.flatten(tuple);
            if (!(joint_vec[idx] > model.support_tol)) {
                v.pass = false;
                v.tuple = tuple;
                v.lambda = idx;
                double m = 1.0;
                for (std::size_t j = 0; j < tuple.size(); ++j)
                    m = std::min(m, (*marg[j])[tuple[j]]);
                v.magnitude = m;
                v.note = "marginally supported tuple missing from the joint support";
                return v;
            }
        }
        std::size_t j = tuple.size();
        while (j-- > 0) {
            if (++tuple[j] < model.space.factors[j]) break;
            tuple[j] = 0;
            if (j == 0) return v;
        }
    }
}

// Joint epistemic vector equals the product of factor vectors entrywise.
inline CheckVerdict check_factorisability(const OnticModel& model, const std::string& mid,
                                          const std::vector<std::string>& factor_preps,
                                          const std::string& joint_prep,
                                          double tol = 1e-9) {
    if (!model.space.has_product_structure())
        throw structure_error("factorisability needs a product-structured ontic space");
    if (factor_preps.size() != model.space.factors.size())
        throw structure_error("one factor preparation per tensor slot is required");
    const auto& joint_vec = model.epistemic_vec(mid, joint_prep);
    std::vector<const std::vector<double>*> marg(factor_preps.size());
    for (std::size_t j = 0; j < factor_preps.size(); ++j)
        marg[j] = &model.factor_epistemic_vec(mid, factor_preps[j]);
    CheckVerdict v;
    v.measurement = mid;
    v.prep_a = joint_prep;
    std::vector<std::size_t> tuple(factor_preps.size(), 0);
    while (true) {
        double prod = 1.0;
        for (std::size_t j = 0; j < tuple.size(); ++j) prod *= (*marg[j])[tuple[j]];
        const std::size_t idx = model.space.flatten(tuple);
        const double dev = std::abs(joint_vec[idx] - prod);
        if (dev > v.magnitude) {
            v.magnitude = dev;
            v.tuple = tuple;
            v.lambda = idx;
        }
        std::size_t j = tuple.size();
        while (j-- > 0) {
            if (++tuple[j] < model.space.factors[j]) break;
            tuple[j] = 0;
            if (j == 0) {
                if (v.magnitude > tol) {
                    v.pass = false;
                    v.note = "joint distribution deviates from the product of marginals";
                }
                return v;
            }
        }
    }
}

// Epistemic vectors for each preparation must agree across measurements.
inline CheckVerdict check_measurement_independence(const OnticModel& model,
                                                   double tol = 1e-10) {
    CheckVerdict v;
    for (const auto& p : model.preparations) {
        const std::vector<double>* ref = nullptr;
        std::string ref_mid;
        for (const auto& [mid, per_prep] : model.epistemic) {
            auto it = per_prep.find(p.id);
            if (it == per_prep.end()) continue;
            if (!ref) {
                ref = &it->second;
                ref_mid = mid;
                continue;
            }
            for (std::size_t l = 0; l < ref->size(); ++l) {
                const double dev = std::abs((*ref)[l] - it->second[l]);
                if (dev > v.magnitude) {
                    v.magnitude = dev;
                    v.prep_a = p.id;
                    v.measurement = ref_mid;
                    v.prep_b = mid;  // second measurement id of the witness
                    v.lambda = l;
                }
            }
        }
    }
    if (v.magnitude > tol) {
        v.pass = false;
        v.note = "epistemic vector varies with the measurement choice";
    }
    return v;
}

struct OverlapResult {
    double value = 0.0;
    SupportSet support;
};

// sum_lambda p(lambda|M,P) p(lambda|M,Q) and the support intersection.
inline OverlapResult overlap(const OnticModel& model, const std::string& mid,
                             const std::string& p, const std::string& q) {
    const auto& pv = model.epistemic_vec(mid, p);
    const auto& qv = model.epistemic_vec(mid, q);
    OverlapResult out;
    for (std::size_t l = 0; l < pv.size(); ++l) {
        out.value += pv[l] * qv[l];
        if (pv[l] > model.support_tol && qv[l] > model.support_tol)
            out.support.indices.push_back(l);
    }
    return out;
}

// One ontic state per input state, point-mass epistemic vectors and Born
// response rows: the model where lambda is the wave function itself.
inline OnticModel build_psi_ontic_model(const std::vector<PureState>& states,
                                        const Measurement& meas,
                                        const std::vector<std::string>& ids = {},
                                        const std::string& mid = "M") {
    if (states.empty())
        throw validation_error("empty_model", "need at least one state");
    OnticModel model;
    model.space.size = states.size();
    model.measurement_independent = true;
    ResponseTable table;
    table.labels = meas.labels;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].dim() != meas.dim)
            throw dimension_mismatch("state dimension differs from measurement dimension");
        const std::string pid = i < ids.size() ? ids[i] : "P" + std::to_string(i + 1);
        model.preparations.push_back({pid, states[i], {}});
        std::vector<double> point(states.size(), 0.0);
        point[i] = 1.0;
        model.epistemic[mid][pid] = std::move(point);
        table.rows.push_back(born_distribution(states[i], meas).probabilities);
    }
    model.response[mid] = std::move(table);
    return model;
}

// Three-atom adversarial fixture: distinct psi/phi atoms plus one shared atom
// that both preparations weight with probability `mix`, so the epistemic
// overlap is mix^2 by construction.
inline OnticModel build_overlapping_toy_model(const PureState& psi, const PureState& phi,
                                              const Measurement& meas, double mix,
                                              const std::string& mid = "M") {
    if (!(mix > 0.0 && mix < 1.0))
        throw validation_error("bad_mix", "mix must lie strictly between 0 and 1");
    std::size_t copies = 0, d = 1;
    while (d < meas.dim) {
        d *= psi.dim();
        ++copies;
    }
    if (d != meas.dim)
        throw dimension_mismatch("measurement dimension is not a power of the state dimension");
    const PureState psi_n =
        copies <= 1 ? psi : tensor_product(std::vector<PureState>(copies, psi));
    const PureState phi_n =
        copies <= 1 ? phi : tensor_product(std::vector<PureState>(copies, phi));

    OnticModel model;
    model.space.size = 3;  // { lambda_psi, lambda_shared, lambda_phi }
    model.measurement_independent = true;
    model.preparations.push_back({"P_psi", psi, {}});
    model.preparations.push_back({"P_phi", phi, {}});
    model.epistemic[mid]["P_psi"] = {1.0 - mix, mix, 0.0};
    model.epistemic[mid]["P_phi"] = {0.0, mix, 1.0 - mix};
    ResponseTable table;
    table.labels = meas.labels;
    table.rows.push_back(born_distribution(psi_n, meas).probabilities);
    table.rows.push_back(
        std::vector<double>(meas.outcome_count(), 1.0 / double(meas.outcome_count())));
    table.rows.push_back(born_distribution(phi_n, meas).probabilities);
    model.response[mid] = std::move(table);
    return model;
}

} // namespace ontic
