#pragma once

// JSON and CSV ingestion plus report serialization. Reports are emitted as
// ordered JSON with fixed insertion order and locale-free number formatting,
// so identical runs produce identical bytes. Rational values are echoed both
// as exact fractions and as truncated decimals.

#include "freelip/nonrough.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace freelip {

using Json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

template <class T>
T scalar_from_json(const Json& v, const std::string& context) {
    try {
        if (v.is_string()) return scalar_from_decimal<T>(v.get<std::string>());
        if (v.is_number_integer()) {
            if constexpr (is_exact_v<T>)
                return T(static_cast<long long>(v.get<long long>()));
            else
                return static_cast<double>(v.get<long long>());
        }
        if (v.is_number_float()) {
            if constexpr (is_exact_v<T>)
                return rational_from_double(v.get<double>());
            else
                return v.get<double>();
        }
    } catch (const std::invalid_argument& e) {
        throw IoError(context + ": " + e.what());
    }
    throw IoError(context + ": expected a number, got " + std::string(v.type_name()));
}

template <class T>
Json number_json(const T& v) {
    if constexpr (is_exact_v<T>) {
        Json j;
        j["frac"] = fraction_string(v);
        j["dec"] = decimal_string(v, 12);
        return j;
    } else {
        return Json(v);
    }
}

template <class T>
Json number_list_json(const std::vector<T>& values) {
    Json arr = Json::array();
    for (const T& v : values) arr.push_back(number_json(v));
    return arr;
}

template <class T>
FiniteMetricSpace<T> space_from_json(const Json& j, std::optional<int> base_override = std::nullopt) {
    if (!j.is_object()) throw IoError("space: expected a JSON object");
    if (!j.contains("dist")) throw IoError("space: missing field 'dist'");
    const Json& dist = j.at("dist");
    if (!dist.is_array()) throw IoError("space: 'dist' must be an array of rows");
    std::vector<std::vector<T>> matrix;
    for (std::size_t r = 0; r < dist.size(); ++r) {
        const Json& row = dist.at(r);
        if (!row.is_array()) throw IoError("space: 'dist' row " + std::to_string(r) + " is not an array");
        std::vector<T> out;
        for (std::size_t c = 0; c < row.size(); ++c)
            out.push_back(scalar_from_json<T>(row.at(c), "dist[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
        matrix.push_back(std::move(out));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        for (const auto& l : j.at("labels")) {
            if (!l.is_string()) throw IoError("space: labels must be strings");
            labels.push_back(l.get<std::string>());
        }
    }
    int base = 0;
    if (j.contains("base")) {
        if (!j.at("base").is_number_integer()) throw IoError("space: 'base' must be an integer index");
        base = j.at("base").get<int>();
    }
    if (base_override) base = *base_override;
    try {
        return validate_metric(std::move(matrix), base, std::move(labels));
    } catch (const MetricError&) {
        throw;
    }
}

template <class T>
FiniteMetricSpace<T> space_from_csv(const std::string& text, int base = 0) {
    std::vector<std::vector<T>> matrix;
    std::istringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<T> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            const auto begin = field.find_first_not_of(" \t\r");
            const auto end = field.find_last_not_of(" \t\r");
            if (begin == std::string::npos) throw IoError("csv line " + std::to_string(lineno) + ": empty field");
            try {
                row.push_back(scalar_from_decimal<T>(field.substr(begin, end - begin + 1)));
            } catch (const std::invalid_argument& e) {
                throw IoError("csv line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        matrix.push_back(std::move(row));
    }
    return validate_metric(std::move(matrix), base);
}

// FreeElement input: a JSON object mapping point labels to coefficients.
template <class T>
FreeElement<T> element_from_json(const Json& j, const FiniteMetricSpace<T>& space) {
    if (!j.is_object()) throw IoError("element: expected an object of label -> coefficient");
    std::map<int, T> terms;
    for (const auto& [label, coeff] : j.items()) {
        const int idx = space.index_of(label);
        terms[idx] = scalar_from_json<T>(coeff, "element['" + label + "']");
    }
    try {
        return FreeElement<T>::from_terms(std::move(terms), space);
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("element: ") + e.what());
    }
}

template <class T>
std::vector<MoleculePair> pairs_from_json(const Json& j, const FiniteMetricSpace<T>& space) {
    const Json* arr = nullptr;
    if (j.is_array())
        arr = &j;
    else if (j.is_object() && j.contains("pairs") && j.at("pairs").is_array())
        arr = &j.at("pairs");
    else
        throw IoError("pairs: expected an array of [x, y] label pairs");
    std::vector<MoleculePair> pairs;
    for (const auto& entry : *arr) {
        if (!entry.is_array() || entry.size() != 2 || !entry.at(0).is_string() || !entry.at(1).is_string())
            throw IoError("pairs: each entry must be a [x_label, y_label] pair");
        pairs.push_back({space.index_of(entry.at(0).get<std::string>()), space.index_of(entry.at(1).get<std::string>())});
    }
    if (pairs.empty()) throw IoError("pairs: empty list");
    return pairs;
}

template <class T>
Json space_json(const FiniteMetricSpace<T>& space) {
    Json j;
    j["labels"] = space.labels();
    j["base"] = space.base();
    Json rows = Json::array();
    for (int r = 0; r < space.size(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < space.size(); ++c) row.push_back(number_json(space.d(r, c)));
        rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
    j["min_distance"] = number_json(space.min_distance());
    j["diameter"] = number_json(space.diameter());
    return j;
}

template <class T>
Json pairs_json(const std::vector<MoleculePair>& pairs, const FiniteMetricSpace<T>& space) {
    Json arr = Json::array();
    for (const auto& p : pairs) arr.push_back(Json::array({space.label(p.x), space.label(p.y)}));
    return arr;
}

template <class T>
Json element_json(const FreeElement<T>& mu, const FiniteMetricSpace<T>& space) {
    Json j = Json::object();
    for (const auto& [idx, coeff] : mu.terms()) j[space.label(idx)] = number_json(coeff);
    return j;
}

template <class T>
Json lipschitz_function_json(const LipschitzFunction<T>& f, const FiniteMetricSpace<T>& space) {
    Json j;
    Json values = Json::object();
    for (int p = 0; p < space.size(); ++p) values[space.label(p)] = number_json(f.value(p));
    j["values"] = std::move(values);
    j["lip_const"] = number_json(f.lip_const());
    return j;
}

template <class T>
Json transport_plan_json(const std::map<std::pair<int, int>, T>& plan, const FiniteMetricSpace<T>& space) {
    Json arr = Json::array();
    for (const auto& [key, mass] : plan) {
        Json entry;
        entry["from"] = space.label(key.first);
        entry["to"] = space.label(key.second);
        entry["mass"] = number_json(mass);
        arr.push_back(std::move(entry));
    }
    return arr;
}

template <class T>
Json certificate_json(const NonroughCertificate<T>& cert, const FiniteMetricSpace<T>& space) {
    Json j;
    j["eps"] = number_json(cert.eps);
    j["alpha"] = number_json(cert.alpha);
    j["pairs"] = pairs_json(cert.pairs, space);
    j["weights"] = number_list_json(cert.weights);
    Json wa = Json::array();
    for (const auto& w : cert.witnesses_a) {
        Json entry;
        entry["j"] = w.j;
        entry["k"] = w.k;
        entry["cycle"] = w.cycle;
        entry["total"] = number_json(w.total);
        wa.push_back(std::move(entry));
    }
    j["condition_a_witnesses"] = std::move(wa);
    Json wc = Json::array();
    for (const auto& w : cert.witnesses_c) {
        Json entry;
        entry["x"] = space.label(w.x);
        entry["s"] = space.label(w.s);
        entry["t"] = space.label(w.t);
        entry["lp_min"] = number_json(w.lp_min);
        wc.push_back(std::move(entry));
    }
    j["condition_c_witnesses"] = std::move(wc);
    j["derived_bound"] = number_json(cert.derived_bound);
    j["slice_alpha"] = number_json(cert.slice_alpha);
    j["slice_diameter"] = number_json(cert.slice_diameter);
    return j;
}

template <class T>
Json certify_failure_json(const CertifyFailure<T>& f, const FiniteMetricSpace<T>& space) {
    Json j;
    switch (f.kind) {
        case CertifyFailureKind::ConditionB: {
            j["condition"] = "b";
            if (f.negative_cycle) {
                j["negative_cycle"] = *f.negative_cycle;
            }
            break;
        }
        case CertifyFailureKind::ConditionA: {
            j["condition"] = "a";
            if (f.failing_pair) {
                j["failing_pair"] = Json::array({f.failing_pair->first, f.failing_pair->second});
            }
            j["min_cycle_total"] = number_json(f.failing_total);
            break;
        }
        case CertifyFailureKind::ConditionC: {
            j["condition"] = "c";
            if (f.failing_x) j["failing_point"] = space.label(*f.failing_x);
            j["best_margin"] = number_json(f.failing_margin);
            break;
        }
        case CertifyFailureKind::SliceSoundness: {
            j["condition"] = "slice_soundness";
            j["slice_diameter"] = number_json(f.slice_diameter);
            j["derived_bound"] = number_json(f.bound);
            break;
        }
    }
    return j;
}

template <class T>
Json scan_report_json(const ScanReport<T>& report, const FiniteMetricSpace<T>& space) {
    Json j;
    j["n_pairs_max"] = report.n_pairs_max;
    j["alpha_grid"] = number_list_json(report.alpha_grid);
    j["candidates_considered"] = report.candidates_considered;
    j["candidates_normable"] = report.candidates_normable;
    j["stopped_early"] = report.stopped_early;
    Json entries = Json::array();
    for (const auto& e : report.entries) {
        Json entry;
        entry["pairs"] = pairs_json(e.pairs, space);
        entry["weights"] = number_list_json(e.weights);
        entry["alpha"] = number_json(e.alpha);
        entry["diameter"] = number_json(e.diameter);
        entries.push_back(std::move(entry));
    }
    j["entries"] = std::move(entries);
    if (report.best) {
        Json best;
        best["pairs"] = pairs_json(report.best->pairs, space);
        best["weights"] = number_list_json(report.best->weights);
        best["alpha"] = number_json(report.best->alpha);
        best["diameter"] = number_json(report.best->diameter);
        j["best"] = std::move(best);
    } else {
        j["best"] = nullptr;
    }
    return j;
}

template <class T>
Json search_outcome_json(const SearchOutcome<T>& outcome, const FiniteMetricSpace<T>& space) {
    Json j;
    j["alpha_grid"] = number_list_json(outcome.alpha_grid);
    j["sets_considered"] = outcome.sets_considered;
    j["sets_norm_one"] = outcome.sets_norm_one;
    j["certify_calls"] = outcome.certify_calls;
    if (outcome.certificate) {
        j["certificate"] = certificate_json(*outcome.certificate, space);
    } else {
        j["certificate"] = nullptr;
        Json near;
        if (outcome.near_misses.condition_b) {
            Json b;
            b["pairs"] = pairs_json(outcome.near_misses.condition_b->first, space);
            b["cycle_total"] = number_json(outcome.near_misses.condition_b->second);
            near["condition_b"] = std::move(b);
        }
        if (outcome.near_misses.condition_a) {
            Json a;
            a["pairs"] = pairs_json(std::get<0>(*outcome.near_misses.condition_a), space);
            a["index_pair"] = Json::array({std::get<1>(*outcome.near_misses.condition_a).first,
                                           std::get<1>(*outcome.near_misses.condition_a).second});
            a["overshoot"] = number_json(std::get<2>(*outcome.near_misses.condition_a));
            near["condition_a"] = std::move(a);
        }
        if (outcome.near_misses.condition_c) {
            Json c;
            c["pairs"] = pairs_json(std::get<0>(*outcome.near_misses.condition_c), space);
            c["failing_point"] = space.label(std::get<1>(*outcome.near_misses.condition_c));
            c["best_margin"] = number_json(std::get<2>(*outcome.near_misses.condition_c));
            near["condition_c"] = std::move(c);
        }
        j["near_misses"] = std::move(near);
    }
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace freelip
