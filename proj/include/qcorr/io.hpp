#pragma once

// JSON state files:
//   {"kind": "density" | "pure" | "observable",
//    "dims": [d1, d2] or [d],
//    "matrix": [[[re, im], ...], ...]   (density, observable; row-major)
//    "vector": [[re, im], ...]}         (pure)

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcorr/measurement.hpp"

namespace qcorr {

using Json = nlohmann::ordered_json;

enum class StateKind { density, pure, observable };

inline const char* to_string(StateKind k) {
    switch (k) {
        case StateKind::density: return "density";
        case StateKind::pure: return "pure";
        case StateKind::observable: return "observable";
    }
    return "unknown";
}

/// Structurally valid file contents; physical validation happens on conversion.
struct StateFile {
    StateKind kind = StateKind::density;
    std::vector<std::size_t> dims;
    ComplexMatrix matrix;  // density, observable
    ComplexVector vector;  // pure

    std::size_t total_dim() const {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }
};

/// +∞ (and the other non-finite values) as strings so the output stays valid JSON.
inline Json json_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

inline Json json_number(const Bits& b) { return b.infinite ? Json("inf") : json_number(b.value); }

inline Json json_complex(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json json_vector(const ComplexVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_complex(v(i)));
    return out;
}

inline Json json_matrix(const ComplexMatrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(json_vector(m.row(r).transpose()));
    return out;
}

inline Json to_json(const StateFile& f) {
    Json out;
    out["kind"] = to_string(f.kind);
    out["dims"] = f.dims;
    if (f.kind == StateKind::pure) {
        out["vector"] = json_vector(f.vector);
    } else {
        out["matrix"] = json_matrix(f.matrix);
    }
    return out;
}

inline std::string dump_state_file(const StateFile& f) { return to_json(f).dump(2) + "\n"; }

namespace detail {

[[noreturn]] inline void malformed(const std::string& source, const std::string& pointer, const std::string& what) {
    throw Error(ErrorKind::Malformed, source + ": " + (pointer.empty() ? "/" : pointer) + ": " + what);
}

inline Complex parse_complex(const Json& j, const std::string& source, const std::string& pointer) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        malformed(source, pointer, "expected [re, im] pair of numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline ComplexVector parse_vector(const Json& j, std::size_t n, const std::string& source, const std::string& pointer) {
    if (!j.is_array()) malformed(source, pointer, "expected an array");
    if (j.size() != n) malformed(source, pointer, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
    ComplexVector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], source, pointer + "/" + std::to_string(i));
    return v;
}

}  // namespace detail

/// Parses file text; every structural problem names the offending field.
inline StateFile parse_state_file(const std::string& text, const std::string& source = "<input>") {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Malformed, source + ": " + e.what());
    }
    if (!j.is_object()) detail::malformed(source, "", "expected a JSON object");

    StateFile f;
    if (!j.contains("kind") || !j["kind"].is_string()) detail::malformed(source, "/kind", "missing or not a string");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "density") f.kind = StateKind::density;
    else if (kind == "pure") f.kind = StateKind::pure;
    else if (kind == "observable") f.kind = StateKind::observable;
    else detail::malformed(source, "/kind", "unknown kind \"" + kind + "\" (density, pure, observable)");

    if (!j.contains("dims") || !j["dims"].is_array()) detail::malformed(source, "/dims", "missing or not an array");
    const std::size_t expected_dims = f.kind == StateKind::observable ? 1 : 2;
    if (j["dims"].size() != expected_dims) {
        detail::malformed(source, "/dims", "expected " + std::to_string(expected_dims) + " entries for kind " + kind);
    }
    for (std::size_t i = 0; i < expected_dims; ++i) {
        const Json& d = j["dims"][i];
        if (!d.is_number_integer() || d.get<long long>() < 1) {
            detail::malformed(source, "/dims/" + std::to_string(i), "expected a positive integer");
        }
        f.dims.push_back(d.get<std::size_t>());
    }
    const std::size_t n = f.total_dim();

    if (f.kind == StateKind::pure) {
        if (!j.contains("vector")) detail::malformed(source, "/vector", "missing");
        f.vector = detail::parse_vector(j["vector"], n, source, "/vector");
    } else {
        if (!j.contains("matrix")) detail::malformed(source, "/matrix", "missing");
        const Json& m = j["matrix"];
        if (!m.is_array() || m.size() != n) {
            detail::malformed(source, "/matrix", "expected " + std::to_string(n) + " rows");
        }
        f.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < n; ++r) {
            f.matrix.row(static_cast<Eigen::Index>(r)) =
                detail::parse_vector(m[r], n, source, "/matrix/" + std::to_string(r)).transpose();
        }
    }
    return f;
}

inline StateFile load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Malformed, path + ": cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_state_file(buffer.str(), path);
}

inline void save_state_file(const StateFile& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Malformed, path + ": cannot write file");
    out << dump_state_file(f);
}

// Conversions to validated objects.

inline Dims bipartite_dims(const StateFile& f) {
    if (f.dims.size() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a bipartite state file");
    return Dims(f.dims[0], f.dims[1]);
}

inline BipartiteState to_state(const StateFile& f) {
    if (f.kind == StateKind::observable) throw Error(ErrorKind::DimensionMismatch, "expected a state, found an observable");
    const Dims dims = bipartite_dims(f);
    if (f.kind == StateKind::pure) return BipartiteState::pure(f.vector, dims);
    return BipartiteState::make(DensityOperator::validate(f.matrix), dims);
}

/// State vector of a pure-kind file, or of a density file that is a pure projector.
inline ComplexVector to_pure_vector(const StateFile& f) {
    if (f.kind == StateKind::pure) {
        require_unit_vector(f.vector);
        return f.vector;
    }
    const BipartiteState state = to_state(f);
    const double purity = state.matrix().squaredNorm();
    if (purity_class(state.rho12()) != Purity::pure) {
        throw Error(ErrorKind::NotPure, "state is mixed (Tr ρ² = " + std::to_string(purity) + ")");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(state.matrix());
    return es.eigenvectors().col(es.eigenvectors().cols() - 1);
}

inline Observable to_observable(const StateFile& f) {
    if (f.kind != StateKind::observable) throw Error(ErrorKind::DimensionMismatch, "expected an observable file");
    return Observable::from_matrix(f.matrix);
}

inline StateFile density_file(const ComplexMatrix& rho, const Dims& dims) {
    return {StateKind::density, {dims.d1, dims.d2}, rho, {}};
}

inline StateFile pure_file(const ComplexVector& phi, const Dims& dims) {
    return {StateKind::pure, {dims.d1, dims.d2}, {}, phi};
}

inline StateFile observable_file(const Observable& obs) {
    return {StateKind::observable, {obs.dim()}, obs.matrix(), {}};
}

}  // namespace qcorr
