#include "solvgeom/serialize.hpp"
#include "solvgeom/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace solvgeom {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string quoted(const std::string& s) {
    return nlohmann::json(s).dump();
}

template <class Vec>
std::string int_list(const Vec& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

double finite_number(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(std::string(what) + ": non-finite number");
    return v;
}

int index_value(const nlohmann::json& j, int dim, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + ": expected an integer index");
    const long long v = j.get<long long>();
    if (v < 0 || v >= dim) throw ParseError(std::string(what) + ": index out of range");
    return static_cast<int>(v);
}

}  // namespace

std::string serialize(const MetricLieAlgebra& algebra) {
    const int n = algebra.dim();
    std::ostringstream os;
    os << "{\n  \"dim\": " << n << ",\n";
    os << "  \"labels\": [";
    for (int i = 0; i < n; ++i) os << (i ? ", " : "") << quoted(algebra.label(i));
    os << "],\n";

    const Eigen::MatrixXd& G = algebra.gram();
    if (G.isIdentity(0.0)) {
        os << "  \"gram\": \"identity\",\n";
    } else {
        os << "  \"gram\": [";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) os << ((i || j) ? ", " : "") << num(G(i, j));
        os << "],\n";
    }

    os << "  \"structure\": [";
    const auto entries = algebra.entries();
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const auto& s = entries[e];
        os << (e ? ",\n    " : "\n    ") << "[" << s.i << ", " << s.j << ", " << s.k << ", " << num(s.value) << "]";
    }
    os << (entries.empty() ? "]" : "\n  ]");

    if (const auto& dec = algebra.decoration()) {
        os << ",\n  \"decoration\": {\n";
        os << "    \"a_indices\": " << int_list(dec->a_indices) << ",\n";
        os << "    \"n_indices\": " << int_list(dec->n_indices) << ",\n";
        os << "    \"roots\": [";
        for (std::size_t r = 0; r < dec->roots.size(); ++r) {
            os << (r ? ", " : "") << "[";
            for (Eigen::Index k = 0; k < dec->roots[r].size(); ++k) os << (k ? ", " : "") << num(dec->roots[r](k));
            os << "]";
        }
        os << "]\n  }";
    }
    os << "\n}\n";
    return os.str();
}

MetricLieAlgebra deserialize(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("document must be an object");
    for (const auto& item : doc.items())
        if (item.key() != "dim" && item.key() != "labels" && item.key() != "gram" && item.key() != "structure" &&
            item.key() != "decoration")
            throw ParseError("unknown field '" + item.key() + "'");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw ParseError("missing integer field 'dim'");
    const long long dim_ll = doc["dim"].get<long long>();
    if (dim_ll <= 0 || dim_ll > 4096) throw ParseError("'dim' out of range");
    const int n = static_cast<int>(dim_ll);

    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        const auto& l = doc["labels"];
        if (!l.is_array() || static_cast<int>(l.size()) != n) throw ParseError("'labels' must list one string per basis vector");
        for (const auto& s : l) {
            if (!s.is_string()) throw ParseError("labels must be strings");
            labels.push_back(s.get<std::string>());
        }
    }

    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n);
    if (doc.contains("gram")) {
        const auto& g = doc["gram"];
        if (g.is_string()) {
            if (g.get<std::string>() != "identity") throw ParseError("gram string must be \"identity\"");
        } else if (g.is_array() && static_cast<long long>(g.size()) == static_cast<long long>(n) * n && (n == 1 || !g[0].is_array())) {
            for (int i = 0; i < n * n; ++i) gram(i / n, i % n) = finite_number(g[i], "gram");
        } else if (g.is_array() && static_cast<int>(g.size()) == n) {
            for (int i = 0; i < n; ++i) {
                if (!g[i].is_array() || static_cast<int>(g[i].size()) != n) throw ParseError("gram rows must have length dim");
                for (int j = 0; j < n; ++j) gram(i, j) = finite_number(g[i][j], "gram");
            }
        } else {
            throw ParseError("gram must be \"identity\" or a row-major array");
        }
    }

    std::vector<StructureEntry> entries;
    if (doc.contains("structure")) {
        const auto& s = doc["structure"];
        if (!s.is_array()) throw ParseError("'structure' must be an array");
        for (const auto& e : s) {
            if (!e.is_array() || e.size() != 4) throw ParseError("structure entries are [i, j, k, value]");
            const int i = index_value(e[0], n, "structure");
            const int j = index_value(e[1], n, "structure");
            const int k = index_value(e[2], n, "structure");
            const double v = finite_number(e[3], "structure");
            if (i == j) throw ParseError("antisymmetry violated: entry with i == j");
            if (i > j) throw ParseError("structure entries must satisfy i < j");
            entries.push_back({i, j, k, v});
        }
    }

    std::optional<IwasawaDecoration> dec;
    if (doc.contains("decoration") && !doc["decoration"].is_null()) {
        const auto& d = doc["decoration"];
        if (!d.is_object()) throw ParseError("'decoration' must be an object");
        IwasawaDecoration out;
        auto read_indices = [&](const char* key, std::vector<int>& into) {
            if (!d.contains(key)) return;
            if (!d[key].is_array()) throw ParseError(std::string(key) + " must be an array");
            for (const auto& x : d[key]) into.push_back(index_value(x, n, key));
        };
        read_indices("a_indices", out.a_indices);
        read_indices("n_indices", out.n_indices);
        if (d.contains("roots")) {
            if (!d["roots"].is_array()) throw ParseError("roots must be an array");
            for (const auto& r : d["roots"]) {
                if (!r.is_array()) throw ParseError("each root must be an array");
                Eigen::VectorXd v(r.size());
                for (std::size_t k = 0; k < r.size(); ++k) v(k) = finite_number(r[k], "roots");
                out.roots.push_back(v);
            }
        }
        dec = out;
    }

    try {
        return MetricLieAlgebra(n, entries, gram, labels, dec);
    } catch (const Error& e) {
        throw ParseError(std::string("invalid algebra: ") + e.what());
    }
}

}  // namespace solvgeom
