#pragma once
// JSON (de)serialization for every CLI-facing value. Field order is fixed by
// construction (ordered_json), so emitted documents are byte-stable and
// round-trip to identical values.
//
// System interchange format:
//   {"n": int, "p": int, "kind": "p-orthonormal"|"orthogonal",
//    "vectors": [[int,...],...]}
// "kind" defaults to "p-orthonormal" when absent.

#include <string>
#include <vector>

#include <json.hpp>

#include "orthobase/conjecture.hpp"
#include "orthobase/core.hpp"
#include "orthobase/extend.hpp"
#include "orthobase/snf.hpp"

namespace orthobase {

using json = nlohmann::ordered_json;

namespace jsondetail {

inline void require(bool ok, const std::string& where, const std::string& what) {
    if (!ok) throw InvalidInput(where + ": " + what);
}

inline Int to_int(const json& j, const std::string& where) {
    require(j.is_number_integer(), where, "expected an integer");
    return j.get<Int>();
}

}  // namespace jsondetail

inline json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("JSON parse error: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

inline json vectors_to_json(const std::vector<IntVec>& vs) {
    json rows = json::array();
    for (const auto& v : vs) rows.push_back(v);
    return rows;
}

inline std::vector<IntVec> vectors_from_json(const json& j, const std::string& where) {
    jsondetail::require(j.is_array() && !j.empty(), where, "expected a non-empty array of rows");
    std::vector<IntVec> vs;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& row = j[i];
        std::string at = where + "[" + std::to_string(i) + "]";
        jsondetail::require(row.is_array() && !row.empty(), at, "expected a non-empty row");
        IntVec v;
        for (std::size_t c = 0; c < row.size(); ++c)
            v.push_back(jsondetail::to_int(row[c], at + "[" + std::to_string(c) + "]"));
        vs.push_back(std::move(v));
    }
    return vs;
}

inline json system_to_json(const OrthoSystem& s) {
    json j;
    j["n"] = s.n;
    j["p"] = s.p;
    j["kind"] = kind_name(s.kind);
    j["vectors"] = vectors_to_json(s.vectors);
    return j;
}

inline OrthoSystem system_from_json(const json& j) {
    jsondetail::require(j.is_object(), "$", "expected a system object");
    jsondetail::require(j.contains("vectors"), "$.vectors", "missing");
    OrthoSystem s;
    s.vectors = vectors_from_json(j.at("vectors"), "$.vectors");
    s.n = j.contains("n") ? static_cast<int>(jsondetail::to_int(j.at("n"), "$.n"))
                          : static_cast<int>(s.vectors[0].size());
    if (j.contains("kind")) {
        std::string k = j.at("kind").get<std::string>();
        if (k == "p-orthonormal") s.kind = SystemKind::POrthonormal;
        else if (k == "orthogonal") s.kind = SystemKind::Orthogonal;
        else throw InvalidInput("$.kind: expected \"p-orthonormal\" or \"orthogonal\"");
    }
    if (j.contains("p")) {
        s.p = jsondetail::to_int(j.at("p"), "$.p");
    } else {
        jsondetail::require(s.kind == SystemKind::Orthogonal, "$.p",
                            "missing (required for p-orthonormal systems)");
        s.p = 0;
    }
    return s;
}

inline json validation_to_json(const OrthoSystem& s, const ValidationReport& r) {
    json j;
    j["valid"] = r.valid;
    j["kind"] = kind_name(s.kind);
    j["violations"] = r.violations;
    j["supp"] = r.support;
    j["supp_size"] = r.support_size();
    if (r.valid && s.kind == SystemKind::POrthonormal) j["parity_ok"] = parity_check(s);
    return j;
}

// ---------------------------------------------------------------------------
// SNF and complement
// ---------------------------------------------------------------------------

inline json mat_to_json(const Mat& m) { return vectors_to_json(m.to_rows()); }

inline json snf_to_json(const SnfResult& r) {
    json j;
    j["L"] = mat_to_json(r.L);
    j["D"] = mat_to_json(r.D);
    j["R"] = mat_to_json(r.R);
    j["factors"] = r.factors;
    return j;
}

// ---------------------------------------------------------------------------
// Extensions
// ---------------------------------------------------------------------------

inline json extension_steps_to_json(const std::vector<ExtensionResult>& steps) {
    json arr = json::array();
    for (const auto& st : steps) {
        json e;
        e["method"] = method_name(st.method);
        e["vector"] = st.vector;
        e["norm"] = st.certificate.norm;
        e["inner_products"] = st.certificate.inner_products;
        if (st.certificate.has_gram) {
            const auto& g = st.certificate.gram;
            const auto& u = st.certificate.gram_unit;
            e["gram"] = json::array({json::array({g[0], g[1]}), json::array({g[1], g[2]})});
            e["gram_over_p"] = json::array({json::array({u[0], u[1]}), json::array({u[1], u[2]})});
            e["coeffs"] = json::array({st.certificate.coeffs[0], st.certificate.coeffs[1]});
        }
        arr.push_back(std::move(e));
    }
    return arr;
}

inline json completion_to_json(const std::string& status, const OrthoSystem& base,
                               const std::vector<ExtensionResult>& steps) {
    json j;
    j["status"] = status;
    j["base"] = vectors_to_json(base.vectors);
    json methods = json::array();
    for (const auto& st : steps) methods.push_back(method_name(st.method));
    j["methods"] = methods;
    j["certificate"] = json{{"steps", extension_steps_to_json(steps)}};
    return j;
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

inline json report_to_json(const VerificationReport& r) {
    json j;
    j["n"] = r.n;
    j["p_lo"] = r.p_lo;
    j["p_hi"] = r.p_hi;
    j["mode"] = mode_name(r.mode);
    j["seed"] = r.seed;
    j["jobs"] = r.jobs;
    j["k_max"] = r.k_max;
    j["squares_only"] = r.squares_only;
    j["budget"] = r.budget;
    j["complete"] = r.complete;
    json per = json::array();
    for (const auto& rec : r.per_p) {
        json e;
        e["p"] = rec.p;
        e["systems_checked"] = rec.systems_checked;
        e["all_extended"] = rec.all_extended;
        json fails = json::array();
        for (const auto& f : rec.failures) fails.push_back(system_to_json(f));
        e["failures"] = fails;
        e["complete"] = rec.complete;
        if (!rec.note.empty()) e["note"] = rec.note;
        per.push_back(std::move(e));
    }
    j["per_p"] = per;
    j["wall_time"] = r.wall_time;
    return j;
}

inline VerificationReport report_from_json(const json& j) {
    jsondetail::require(j.is_object(), "$", "expected a report object");
    VerificationReport r;
    r.n = static_cast<int>(jsondetail::to_int(j.at("n"), "$.n"));
    r.p_lo = jsondetail::to_int(j.at("p_lo"), "$.p_lo");
    r.p_hi = jsondetail::to_int(j.at("p_hi"), "$.p_hi");
    std::string m = j.at("mode").get<std::string>();
    jsondetail::require(m == "exhaustive" || m == "random", "$.mode", "unknown mode");
    r.mode = m == "exhaustive" ? VerifyMode::Exhaustive : VerifyMode::Random;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.jobs = j.at("jobs").get<int>();
    r.k_max = j.at("k_max").get<int>();
    r.squares_only = j.at("squares_only").get<bool>();
    r.budget = j.at("budget").get<std::uint64_t>();
    r.complete = j.at("complete").get<bool>();
    for (const auto& e : j.at("per_p")) {
        PerPRecord rec;
        rec.p = jsondetail::to_int(e.at("p"), "$.per_p[].p");
        rec.systems_checked = e.at("systems_checked").get<std::uint64_t>();
        rec.all_extended = e.at("all_extended").get<bool>();
        for (const auto& f : e.at("failures")) rec.failures.push_back(system_from_json(f));
        rec.complete = e.at("complete").get<bool>();
        if (e.contains("note")) rec.note = e.at("note").get<std::string>();
        r.per_p.push_back(std::move(rec));
    }
    if (j.contains("wall_time")) r.wall_time = j.at("wall_time").get<double>();
    return r;
}

// Flat per-p table; structured certificates stay JSON-only.
inline std::string report_to_csv(const VerificationReport& r) {
    std::string out = "p,systems_checked,all_extended,failures,complete\n";
    for (const auto& rec : r.per_p) {
        out += std::to_string(rec.p) + "," + std::to_string(rec.systems_checked) + "," +
               (rec.all_extended ? "true" : "false") + "," +
               std::to_string(rec.failures.size()) + "," +
               (rec.complete ? "true" : "false") + "\n";
    }
    return out;
}

// Timing-free view for determinism comparisons.
inline json strip_timing(json j) {
    j.erase("wall_time");
    return j;
}

}  // namespace orthobase
