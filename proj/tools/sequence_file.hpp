#pragma once

#include "hausdorff/hausdorff.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hausdorff::cli {

using nlohmann::json;

// Unreadable or schema-violating input.
struct file_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Kind { moments, canonical };

struct SequenceFile {
    double alpha = 0.0;
    double beta = 1.0;
    Kind kind = Kind::moments;
    Index dim = 1;
    std::vector<CMat> data;
};

struct MeasureFile {
    double alpha = 0.0;
    double beta = 1.0;
    Index dim = 1;
    std::vector<double> nodes;
    std::vector<CMat> weights;
};

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw file_error(path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw file_error(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw file_error(path + ": cannot write file");
    out << j.dump(2) << '\n';
}

namespace detail {

inline double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw file_error(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw file_error(where + ": non-finite number");
    return v;
}

inline const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw file_error(where + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw file_error(where + ": missing field '" + key + "'");
    return *it;
}

inline Index dim_at(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 1) throw file_error(where + ": expected a positive integer");
    return static_cast<Index>(j.get<long long>());
}

}  // namespace detail

inline CMat matrix_from_json(const json& j, Index q, const std::string& where) {
    if (!j.is_array() || static_cast<Index>(j.size()) != q)
        throw file_error(where + ": expected " + std::to_string(q) + " rows");
    CMat M(q, q);
    for (Index r = 0; r < q; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        const std::string wr = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Index>(row.size()) != q)
            throw file_error(wr + ": expected " + std::to_string(q) + " entries");
        for (Index c = 0; c < q; ++c) {
            const json& z = row[static_cast<std::size_t>(c)];
            const std::string wc = wr + "[" + std::to_string(c) + "]";
            if (!z.is_array() || z.size() != 2) throw file_error(wc + ": expected a [re, im] pair");
            M(r, c) = cplx(detail::number_at(z[0], wc + "[0]"), detail::number_at(z[1], wc + "[1]"));
        }
    }
    return M;
}

inline json matrix_to_json(const CMat& M) {
    json rows = json::array();
    for (Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < M.cols(); ++c) row.push_back({M(r, c).real(), M(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void check_interval(double alpha, double beta, const std::string& where) {
    if (!(alpha < beta)) throw file_error(where + ": need alpha < beta");
}

inline SequenceFile sequence_from_json(const json& j, const std::string& where) {
    SequenceFile f;
    f.alpha = detail::number_at(detail::field(j, "alpha", where), where + ".alpha");
    f.beta = detail::number_at(detail::field(j, "beta", where), where + ".beta");
    check_interval(f.alpha, f.beta, where);
    const json& kind = detail::field(j, "kind", where);
    if (kind == "moments")
        f.kind = Kind::moments;
    else if (kind == "canonical")
        f.kind = Kind::canonical;
    else
        throw file_error(where + ".kind: expected \"moments\" or \"canonical\"");
    f.dim = detail::dim_at(detail::field(j, "dim", where), where + ".dim");
    const json& data = detail::field(j, "data", where);
    if (!data.is_array() || data.empty()) throw file_error(where + ".data: expected a non-empty array");
    for (std::size_t k = 0; k < data.size(); ++k)
        f.data.push_back(matrix_from_json(data[k], f.dim, where + ".data[" + std::to_string(k) + "]"));
    return f;
}

inline SequenceFile read_sequence(const std::string& path) { return sequence_from_json(read_json(path), path); }

inline json sequence_to_json(const SequenceFile& f) {
    json data = json::array();
    for (const auto& m : f.data) data.push_back(matrix_to_json(m));
    return {{"alpha", f.alpha},
            {"beta", f.beta},
            {"kind", f.kind == Kind::moments ? "moments" : "canonical"},
            {"dim", f.dim},
            {"data", std::move(data)}};
}

inline MeasureFile read_measure(const std::string& path) {
    const json j = read_json(path);
    MeasureFile m;
    m.alpha = detail::number_at(detail::field(j, "alpha", path), path + ".alpha");
    m.beta = detail::number_at(detail::field(j, "beta", path), path + ".beta");
    check_interval(m.alpha, m.beta, path);
    m.dim = detail::dim_at(detail::field(j, "dim", path), path + ".dim");
    const json& nodes = detail::field(j, "nodes", path);
    const json& weights = detail::field(j, "weights", path);
    if (!nodes.is_array() || !weights.is_array() || nodes.size() != weights.size() || nodes.empty())
        throw file_error(path + ": 'nodes' and 'weights' must be non-empty arrays of equal length");
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        const std::string w = path + ".nodes[" + std::to_string(l) + "]";
        const double x = detail::number_at(nodes[l], w);
        if (x < m.alpha || x > m.beta) throw file_error(w + ": node outside [alpha, beta]");
        m.nodes.push_back(x);
        m.weights.push_back(matrix_from_json(weights[l], m.dim, path + ".weights[" + std::to_string(l) + "]"));
    }
    return m;
}

}  // namespace hausdorff::cli
