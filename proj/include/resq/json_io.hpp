#pragma once
// JSON wire formats for everything that crosses the library boundary:
// matrices, free-set descriptions, ensembles, POVMs, certificates, games,
// solver problems, and scalar metric values.
//
// Matrix form: {"dim": d, "re": [[..]], "im": [[..]]}, row-major. Doubles
// are written as the shortest decimal that parses back to the exact binary
// value, so serialize -> parse -> serialize is byte-stable and nothing is
// lost to rounding. Non-finite matrix entries are rejected at write time;
// the only sanctioned infinity is the "inf" sentinel used for scalar
// values (unbounded robustness, infinite information quantities).
//
// Parsers throw std::invalid_argument on structural problems and let the
// owning constructors re-run their own validation (PSD, trace, POVM
// completeness, ...), so a parsed object is exactly as trustworthy as a
// constructed one.

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "exclusion.hpp"
#include "free_sets.hpp"
#include "info_metrics.hpp"
#include "matrix.hpp"
#include "quantifiers.hpp"
#include "sdp.hpp"
#include "subchannel.hpp"

namespace resq {

using json = nlohmann::json;

namespace detail_json {

inline std::vector<std::vector<double>> part(const Mat& m, bool re) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const double v = re ? m(i, j).real() : m(i, j).imag();
            if (!std::isfinite(v)) throw std::invalid_argument("json: non-finite matrix entry");
            out[i][j] = v;
        }
    return out;
}

inline void fill_part(Mat& m, const json& rows, bool re, int d) {
    if (!rows.is_array() || (int)rows.size() != d)
        throw std::invalid_argument("json: matrix part has wrong row count");
    for (int i = 0; i < d; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || (int)row.size() != d)
            throw std::invalid_argument("json: matrix row has wrong length");
        for (int j = 0; j < d; ++j) {
            if (!row[j].is_number()) throw std::invalid_argument("json: matrix entry not a number");
            const double v = row[j].get<double>();
            if (re)
                m(i, j) = cplx(v, m(i, j).imag());
            else
                m(i, j) = cplx(m(i, j).real(), v);
        }
    }
}

}  // namespace detail_json

inline void to_json(json& j, const Mat& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("json: only square nonempty matrices have a wire form");
    j = json{{"dim", m.rows()},
             {"re", detail_json::part(m, true)},
             {"im", detail_json::part(m, false)}};
}

inline void from_json(const json& j, Mat& m) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("json: matrix needs dim/re/im");
    if (!j["dim"].is_number_integer()) throw std::invalid_argument("json: matrix dim not integral");
    const int d = j["dim"].get<int>();
    if (d < 1 || d > 64) throw std::invalid_argument("json: matrix dim out of range");
    m = Mat(d, d);
    detail_json::fill_part(m, j["re"], true, d);
    detail_json::fill_part(m, j["im"], false, d);
}

// scalars that may legitimately be +infinity travel as the string "inf"
inline json scalar_to_json(double v) {
    if (std::isinf(v) && v > 0) return json("inf");
    if (!std::isfinite(v)) throw std::invalid_argument("json: non-finite scalar");
    return json(v);
}

inline double scalar_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("json: unknown scalar sentinel");
    }
    if (!j.is_number()) throw std::invalid_argument("json: scalar not a number");
    return j.get<double>();
}

inline void to_json(json& j, const ExtendedReal& v) {
    j = v.infinite ? json("inf") : scalar_to_json(v.value);
}

inline void from_json(const json& j, ExtendedReal& v) {
    const double x = scalar_from_json(j);
    v = std::isinf(x) ? ExtendedReal::inf() : ExtendedReal::finite(x);
}

inline void to_json(json& j, const FreeSetSpec& f) {
    switch (f.variant) {
        case FreeVariant::incoherent:
            j = json{{"variant", "incoherent"}, {"basis", f.basis}};
            return;
        case FreeVariant::ppt:
            j = json{{"variant", "ppt"}, {"dim_a", f.dimA}, {"dim_b", f.dimB}};
            return;
        case FreeVariant::hull:
            j = json{{"variant", "hull"}, {"generators", f.generators}};
            return;
    }
    throw std::invalid_argument("json: unknown free-set variant");
}

inline void from_json(const json& j, FreeSetSpec& f) {
    const std::string v = j.at("variant").get<std::string>();
    if (v == "incoherent") {
        f = FreeSetSpec::incoherent_in(j.at("basis").get<Mat>());
    } else if (v == "ppt") {
        f = FreeSetSpec::ppt(j.at("dim_a").get<int>(), j.at("dim_b").get<int>());
    } else if (v == "hull") {
        f = FreeSetSpec::hull(j.at("generators").get<std::vector<Mat>>());
    } else {
        throw std::invalid_argument("json: unknown free-set variant \"" + v + "\"");
    }
}

inline void to_json(json& j, const StateEnsemble& e) {
    j = json{{"priors", e.priors}, {"states", e.states}};
}

inline void from_json(const json& j, StateEnsemble& e) {
    e = StateEnsemble(j.at("states").get<std::vector<Mat>>(),
                      j.at("priors").get<std::vector<double>>());
}

inline void to_json(json& j, const Povm& m) { j = json{{"effects", m.effects}}; }

inline void from_json(const json& j, Povm& m) {
    m = Povm(j.at("effects").get<std::vector<Mat>>());
}

inline void to_json(json& j, const ConditionedWitness& w) {
    j = json{{"eigvecs", w.eigvecs}, {"eigvals", w.eigvals}, {"objective", w.objective}};
}

inline void from_json(const json& j, ConditionedWitness& w) {
    w.eigvecs = j.at("eigvecs").get<Mat>();
    w.eigvals = j.at("eigvals").get<std::vector<double>>();
    w.objective = j.at("objective").get<double>();
    const int d = w.eigvecs.rows();
    if ((int)w.eigvals.size() != d)
        throw std::invalid_argument("json: witness eigenvalue count mismatch");
    if ((w.eigvecs.adjoint() * w.eigvecs - Mat::identity(d)).max_abs() > 1e-8)
        throw std::invalid_argument("json: witness eigenvectors not orthonormal");
    for (double v : w.eigvals)
        if (!(v >= 0)) throw std::invalid_argument("json: witness eigenvalue negative");
}

// certificates: sigma_free / rho_general keys are present exactly when the
// corresponding decomposition part exists
inline void to_json(json& j, const WeightCertificate& c) {
    j = json{{"quantity", "weight"},
             {"w", scalar_to_json(c.w)},
             {"gap", c.gap},
             {"dual_witness", c.dual_witness},
             {"nonunique_face", c.nonunique_face},
             {"free_set", c.free_set}};
    if (c.has_sigma_free) j["sigma_free"] = c.sigma_free;
    if (c.has_rho_general) j["rho_general"] = c.rho_general;
}

inline void from_json(const json& j, WeightCertificate& c) {
    if (j.value("quantity", "weight") != std::string("weight"))
        throw std::invalid_argument("json: not a weight certificate");
    c = WeightCertificate{};
    c.w = scalar_from_json(j.at("w"));
    c.gap = j.at("gap").get<double>();
    c.dual_witness = j.at("dual_witness").get<Mat>();
    c.nonunique_face = j.at("nonunique_face").get<bool>();
    c.free_set = j.at("free_set").get<FreeSetSpec>();
    if ((c.has_sigma_free = j.contains("sigma_free"))) c.sigma_free = j["sigma_free"].get<Mat>();
    if ((c.has_rho_general = j.contains("rho_general"))) c.rho_general = j["rho_general"].get<Mat>();
}

inline void to_json(json& j, const RobustnessCertificate& c) {
    j = json{{"quantity", "robustness"},
             {"r", scalar_to_json(c.r)},
             {"gap", c.gap},
             {"dual_witness", c.dual_witness},
             {"free_set", c.free_set}};
    if (c.has_sigma_free) j["sigma_free"] = c.sigma_free;
    if (c.has_rho_general) j["rho_general"] = c.rho_general;
}

inline void from_json(const json& j, RobustnessCertificate& c) {
    if (j.value("quantity", "robustness") != std::string("robustness"))
        throw std::invalid_argument("json: not a robustness certificate");
    c = RobustnessCertificate{};
    c.r = scalar_from_json(j.at("r"));
    c.gap = j.at("gap").get<double>();
    c.dual_witness = j.at("dual_witness").get<Mat>();
    c.free_set = j.at("free_set").get<FreeSetSpec>();
    if ((c.has_sigma_free = j.contains("sigma_free"))) c.sigma_free = j["sigma_free"].get<Mat>();
    if ((c.has_rho_general = j.contains("rho_general"))) c.rho_general = j["rho_general"].get<Mat>();
}

// regression-fixture form of a solver instance
inline void to_json(json& j, const SdpProblem::Constraint& c) {
    j = json{{"a_herm", c.a_herm}, {"a_lin", c.a_lin}, {"rhs", c.rhs}};
}

inline void from_json(const json& j, SdpProblem::Constraint& c) {
    c.a_herm = j.at("a_herm").get<std::vector<Mat>>();
    c.a_lin = j.at("a_lin").get<std::vector<double>>();
    c.rhs = j.at("rhs").get<double>();
}

inline void to_json(json& j, const SdpProblem& p) {
    j = json{{"herm_dims", p.herm_dims},
             {"nonneg", p.nonneg},
             {"obj_herm", p.obj_herm},
             {"obj_lin", p.obj_lin},
             {"constraints", p.cons}};
}

inline void from_json(const json& j, SdpProblem& p) {
    p.herm_dims = j.at("herm_dims").get<std::vector<int>>();
    p.nonneg = j.at("nonneg").get<int>();
    p.obj_herm = j.at("obj_herm").get<std::vector<Mat>>();
    p.obj_lin = j.at("obj_lin").get<std::vector<double>>();
    p.cons = j.at("constraints").get<std::vector<SdpProblem::Constraint>>();
    p.validate();
}

// canonical text: compact dump with object keys sorted (the default json
// type keeps keys in a std::map), used for digests and byte-equality checks
inline std::string canonical_dump(const json& j) { return j.dump(); }

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string digest_hex(const json& j) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t h = fnv1a64(canonical_dump(j));
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
    return out;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return json::parse(in);
}

inline void write_json_file(const std::string& path, const json& j, bool pretty = true) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << (pretty ? j.dump(2) : j.dump()) << '\n';
}

}  // namespace resq

// types without default constructors go through adl_serializer so that
// json::get<T>() can build them by value (and re-run their validation)
namespace nlohmann {

template <>
struct adl_serializer<resq::SubchannelEnsemble> {
    static void to_json(json& j, const resq::SubchannelEnsemble& e) {
        std::vector<resq::Mat> chois;
        chois.reserve(e.members.size());
        for (const auto& s : e.members) chois.push_back(s.choi);
        j = json{{"dim_in", e.dim_in()}, {"dim_out", e.dim_out()}, {"chois", chois}};
    }
    static resq::SubchannelEnsemble from_json(const json& j) {
        const int din = j.at("dim_in").get<int>();
        const int dout = j.at("dim_out").get<int>();
        std::vector<resq::Subchannel> members;
        for (const auto& c : j.at("chois")) members.emplace_back(din, dout, c.get<resq::Mat>());
        return resq::SubchannelEnsemble(std::move(members));
    }
};

template <>
struct adl_serializer<resq::UnitaryFamily> {
    static void to_json(json& j, const resq::UnitaryFamily& f) {
        j = json{{"basis", f.basis}, {"unitaries", f.unitaries}};
    }
    static resq::UnitaryFamily from_json(const json& j) {
        // the validating constructor re-checks unitarity of every member
        return resq::UnitaryFamily(j.at("unitaries").get<std::vector<resq::Mat>>(),
                                   j.at("basis").get<resq::Mat>());
    }
};

// games embed the generating witness and unitary family so a report can be
// re-checked without re-deriving either
template <>
struct adl_serializer<resq::DualGame> {
    static void to_json(json& j, const resq::DualGame& g) {
        j = json{{"channels", g.channels},
                 {"measurement", g.measurement},
                 {"family", g.family},
                 {"witness", g.witness}};
    }
    static resq::DualGame from_json(const json& j) {
        return resq::DualGame{j.at("channels").get<resq::SubchannelEnsemble>(),
                              j.at("measurement").get<resq::Povm>(),
                              j.at("family").get<resq::UnitaryFamily>(),
                              j.at("witness").get<resq::ConditionedWitness>()};
    }
};

}  // namespace nlohmann
