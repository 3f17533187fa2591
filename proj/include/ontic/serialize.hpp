// serialize.hpp
// JSON and CSV encodings for states, measurements, models, verdicts,
// robustness tables and simulation summaries. Loading validates; a vector
// that does not sum to one within 1e-10 is a named validation error.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontic/antidistinguish.hpp"
#include "ontic/common.hpp"
#include "ontic/experiment.hpp"
#include "ontic/nogo.hpp"
#include "ontic/ontic_model.hpp"
#include "ontic/quantum.hpp"

namespace ontic {

using json = nlohmann::json;

inline constexpr const char* kToolName = "ontic";
inline constexpr const char* kToolVersion = "0.1.0";

inline json meta_header() {
    return json{{"tool", kToolName},
                {"version", kToolVersion},
                {"rng", kRngId},
                {"tolerances",
                 {{"norm", kNormTol},
                  {"effect_sum", kEffectSumTol},
                  {"effect_eigenvalue", kEffectEigTol},
                  {"probability_sum", kProbSumTol},
                  {"phase_equality", kPhaseEqTol}}}};
}

// ---------------------------------------------------------------------------
// States and measurements
// ---------------------------------------------------------------------------

inline json to_json(const PureState& s) {
    std::vector<double> re, im;
    for (const auto& z : s.amplitudes()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return json{{"dim", s.dim()}, {"re", re}, {"im", im}};
}

inline PureState state_from_json(const json& j) {
    if (!j.contains("dim") || !j.contains("re") || !j.contains("im"))
        throw validation_error("state_schema", "state JSON needs dim, re, im");
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size() || re.size() != j.at("dim").get<std::size_t>())
        throw validation_error("state_schema", "state JSON arrays disagree with dim");
    CVec amps(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) amps[i] = cx{re[i], im[i]};
    return PureState(std::move(amps));
}

inline json to_json(const Measurement& m) {
    json effects = json::array();
    for (const auto& e : m.effects) {
        std::vector<std::vector<double>> re(e.n, std::vector<double>(e.n));
        std::vector<std::vector<double>> im(e.n, std::vector<double>(e.n));
        for (std::size_t i = 0; i < e.n; ++i)
            for (std::size_t j = 0; j < e.n; ++j) {
                re[i][j] = e.at(i, j).real();
                im[i][j] = e.at(i, j).imag();
            }
        effects.push_back(json{{"re", re}, {"im", im}});
    }
    return json{{"dim", m.dim}, {"effects", effects}, {"labels", m.labels}};
}

inline Measurement measurement_from_json(const json& j, bool validate = true) {
    Measurement m;
    m.dim = j.at("dim").get<std::size_t>();
    for (const auto& e : j.at("effects")) {
        const auto re = e.at("re").get<std::vector<std::vector<double>>>();
        const auto im = e.at("im").get<std::vector<std::vector<double>>>();
        if (re.size() != m.dim || im.size() != m.dim)
            throw validation_error("measurement_schema", "effect matrix has wrong shape");
        CMat mat(m.dim);
        for (std::size_t r = 0; r < m.dim; ++r) {
            if (re[r].size() != m.dim || im[r].size() != m.dim)
                throw validation_error("measurement_schema", "effect matrix has wrong shape");
            for (std::size_t c = 0; c < m.dim; ++c) mat.at(r, c) = cx{re[r][c], im[r][c]};
        }
        m.effects.push_back(std::move(mat));
    }
    m.labels = j.contains("labels") ? j.at("labels").get<std::vector<std::string>>()
                                    : Measurement::default_labels(m.effects.size());
    if (m.labels.size() != m.effects.size())
        throw validation_error("measurement_schema", "label count differs from effect count");
    if (validate) m.validate();
    return m;
}

inline json to_json(const AntidistinguishingResult& r) {
    json j = to_json(r.measurement);
    j["n"] = r.n;
    j["residual"] = r.residual;
    j["method"] = to_string(r.method);
    j["achieved"] = r.achieved;
    return j;
}

// ---------------------------------------------------------------------------
// Ontic models
// ---------------------------------------------------------------------------

inline json to_json(const OnticModel& m) {
    json space{{"size", m.space.size}};
    if (m.space.has_product_structure()) space["factors"] = m.space.factors;
    json preps = json::array();
    for (const auto& p : m.preparations) {
        json jp{{"id", p.id}, {"state", to_json(p.state)}};
        if (!p.factor_ids.empty()) jp["factors"] = p.factor_ids;
        preps.push_back(std::move(jp));
    }
    json response = json::object();
    for (const auto& [mid, table] : m.response)
        response[mid] = json{{"labels", table.labels}, {"rows", table.rows}};
    json j{{"space", space},
           {"preparations", preps},
           {"epistemic", m.epistemic},
           {"response", response},
           {"measurement_independent", m.measurement_independent},
           {"support_tol", m.support_tol},
           {"validation", m.validation == Validation::relaxed ? "relaxed" : "strict"}};
    if (!m.factor_epistemic.empty()) j["factor_epistemic"] = m.factor_epistemic;
    if (!m.response_by_preparation.empty()) {
        json extended = json::object();
        for (const auto& [mid, per_prep] : m.response_by_preparation) {
            for (const auto& [pid, table] : per_prep)
                extended[mid][pid] = json{{"labels", table.labels}, {"rows", table.rows}};
        }
        j["response_by_preparation"] = extended;
    }
    if (!m.scenarios.empty()) {
        json scen = json::object();
        for (const auto& [mid, s] : m.scenarios)
            scen[mid] = json{{"psi", s.psi_id}, {"phi", s.phi_id}, {"joints", s.joint_ids}};
        j["scenario"] = scen;
    }
    return j;
}

inline OnticModel model_from_json(const json& j) {
    OnticModel m;
    const auto& space = j.at("space");
    m.space.size = space.at("size").get<std::size_t>();
    if (space.contains("factors"))
        m.space.factors = space.at("factors").get<std::vector<std::size_t>>();
    for (const auto& p : j.at("preparations")) {
        PreparationLabel label{p.at("id").get<std::string>(),
                               state_from_json(p.at("state")),
                               {}};
        if (p.contains("factors"))
            label.factor_ids = p.at("factors").get<std::vector<std::string>>();
        m.preparations.push_back(std::move(label));
    }
    for (const auto& [mid, table] : j.at("response").items()) {
        ResponseTable t;
        t.labels = table.at("labels").get<std::vector<std::string>>();
        t.rows = table.at("rows").get<std::vector<std::vector<double>>>();
        m.response[mid] = std::move(t);
    }
    m.epistemic =
        j.at("epistemic")
            .get<std::map<std::string, std::map<std::string, std::vector<double>>>>();
    if (j.contains("factor_epistemic"))
        m.factor_epistemic =
            j.at("factor_epistemic")
                .get<std::map<std::string, std::map<std::string, std::vector<double>>>>();
    if (j.contains("response_by_preparation")) {
        for (const auto& [mid, per_prep] : j.at("response_by_preparation").items()) {
            for (const auto& [pid, table] : per_prep.items()) {
                ResponseTable t;
                t.labels = table.at("labels").get<std::vector<std::string>>();
                t.rows = table.at("rows").get<std::vector<std::vector<double>>>();
                m.response_by_preparation[mid][pid] = std::move(t);
            }
        }
    }
    if (j.contains("scenario")) {
        for (const auto& [mid, s] : j.at("scenario").items()) {
            Scenario scen;
            scen.psi_id = s.at("psi").get<std::string>();
            scen.phi_id = s.at("phi").get<std::string>();
            scen.joint_ids = s.at("joints").get<std::vector<std::string>>();
            m.scenarios[mid] = std::move(scen);
        }
    }
    if (j.contains("measurement_independent"))
        m.measurement_independent = j.at("measurement_independent").get<bool>();
    if (j.contains("support_tol")) m.support_tol = j.at("support_tol").get<double>();
    if (j.contains("validation") && j.at("validation").get<std::string>() == "relaxed")
        m.validation = Validation::relaxed;
    m.validate_model();
    return m;
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

inline json to_json(const CheckVerdict& v) {
    json j{{"pass", v.pass}, {"magnitude", v.magnitude}};
    if (!v.measurement.empty()) j["measurement"] = v.measurement;
    if (!v.prep_a.empty()) j["prep_a"] = v.prep_a;
    if (!v.prep_b.empty()) j["prep_b"] = v.prep_b;
    if (v.lambda) j["lambda"] = *v.lambda;
    if (!v.tuple.empty()) j["tuple"] = v.tuple;
    if (v.outcome) j["outcome"] = *v.outcome;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

inline json to_json(const NoGoVerdict& v) {
    json hyp{{"statistical_completeness", to_json(v.hypotheses.completeness)},
             {"forbidden_statistics", v.hypotheses.forbidden_statistics},
             {"statistics_pass", v.hypotheses.statistics_pass},
             {"max_statistic", v.hypotheses.max_statistic}};
    json compat = json::array();
    for (const auto& c : v.hypotheses.compatibility) compat.push_back(to_json(c));
    hyp["compatibility"] = compat;
    if (v.hypotheses.measurement_independence)
        hyp["measurement_independence"] = to_json(*v.hypotheses.measurement_independence);
    json j{{"theorem", v.theorem},
           {"status", to_string(v.status)},
           {"overlap", v.overlap_value},
           {"measurement", v.measurement},
           {"support", v.support.indices},
           {"hypotheses", hyp}};
    if (v.witness) {
        json w{{"lambda", v.witness->lambda},
               {"kind", to_string(v.witness->kind)},
               {"magnitude", v.witness->magnitude}};
        if (v.witness->outcome) w["outcome"] = *v.witness->outcome;
        j["witness"] = w;
    }
    if (v.theorem1) j["theorem1"] = to_json(*v.theorem1);
    return j;
}

// ---------------------------------------------------------------------------
// Robustness tables and simulation summaries
// ---------------------------------------------------------------------------

inline json to_json(const MaxOverlapResult& r) {
    return json{{"epsilon", r.epsilon},
                {"lambda_count", r.lambda_count},
                {"feasible", r.feasible},
                {"overlap", r.value},
                {"rounds", r.rounds_used}};
}

inline std::string maxoverlap_csv(const std::vector<MaxOverlapResult>& rows) {
    std::ostringstream out;
    out << "# " << kToolName << " " << kToolVersion << " maxoverlap\n";
    out << "epsilon,overlap,feasible,lambda_count,rounds\n";
    for (const auto& r : rows)
        out << format17(r.epsilon) << "," << format17(r.value) << ","
            << (r.feasible ? 1 : 0) << "," << r.lambda_count << "," << r.rounds_used
            << "\n";
    return out.str();
}

inline json to_json(const SimulationSummary& s) {
    json j{{"meta", meta_header()},
           {"trials", s.trials},
           {"devices", s.devices},
           {"outcomes", s.outcomes},
           {"seed", s.seed},
           {"rng", s.rng_id},
           {"correlation", to_string(s.config.correlation)},
           {"strength", s.config.strength},
           {"prepared_counts", s.prepared_counts},
           {"counts", s.counts},
           {"choice_probs", s.choice_probs},
           {"predicted", s.predicted},
           {"forbidden_count", s.forbidden_count},
           {"forbidden_frequency", s.forbidden_frequency},
           {"chi_square", s.chi_square},
           {"chi_dof", s.chi_dof},
           {"chi_p_value", s.chi_p_value}};
    return j;
}

inline std::string summary_csv(const SimulationSummary& s) {
    std::ostringstream out;
    out << "# " << kToolName << " " << kToolVersion << " simulate seed=" << s.seed
        << " trials=" << s.trials << " rng=" << s.rng_id
        << " correlation=" << to_string(s.config.correlation)
        << " strength=" << format17(s.config.strength) << "\n";
    out << "k,m,count,predicted,residual\n";
    for (std::size_t k = 0; k < s.counts.size(); ++k)
        for (std::size_t m = 0; m < s.counts[k].size(); ++m) {
            const double predicted_joint = s.choice_probs[k] * s.predicted[k][m];
            const double residual = s.empirical_joint(k, m) - predicted_joint;
            out << (k + 1) << "," << (m + 1) << "," << s.counts[k][m] << ","
                << format17(predicted_joint) << "," << format17(residual) << "\n";
        }
    return out.str();
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("file_not_found", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw validation_error("json_parse", "cannot parse '" + path + "': " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw validation_error("file_write", "cannot write '" + path + "'");
    out << text;
}

} // namespace ontic
