#include "cychom/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cychom/errors.hpp"

namespace cychom {

namespace {

Rational json_rational(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(long(j.get<long>()));
    if (j.is_string()) return rat_parse(j.get<std::string>());
    throw CheckError("SchemaError", "expected an integer or a rational string", path);
}

SparseMatrix json_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& path) {
    if (!j.is_array() || j.size() != rows)
        throw CheckError("SchemaError", "expected a " + std::to_string(rows) + "-row matrix", path);
    std::vector<Triplet> ts;
    for (std::size_t r = 0; r < rows; ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.size() != cols)
            throw CheckError("SchemaError", "matrix row has wrong length",
                             path + "[" + std::to_string(r) + "]");
        for (std::size_t c = 0; c < cols; ++c) {
            Rational v = json_rational(row[c], path + "[" + std::to_string(r) + "][" +
                                                   std::to_string(c) + "]");
            if (v != 0) ts.push_back({r, c, v});
        }
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(ts));
}

FiniteGroup json_group(const Json& j, const std::string& path) {
    if (!j.contains("elements") || !j.contains("table"))
        throw CheckError("SchemaError", "group needs 'elements' and 'table'", path);
    std::vector<std::string> names = j["elements"].get<std::vector<std::string>>();
    std::vector<std::vector<std::size_t>> table =
        j["table"].get<std::vector<std::vector<std::size_t>>>();
    if (names.size() > 64)
        throw CheckError("ResourceGuard", "groups are limited to 64 elements", path);
    return FiniteGroup(std::move(names), std::move(table));
}

}  // namespace

const Algebra& ProblemSpec::coeff_algebra() const {
    if (algebra) return *algebra;
    if (poly) return poly->algebra;
    throw CheckError("SchemaError", "no algebra in the problem spec");
}

const GroupAction& ProblemSpec::coeff_action() const {
    if (action) return *action;
    if (linear) return linear->on_polynomials;
    throw CheckError("SchemaError", "no action in the problem spec");
}

std::vector<std::size_t> ProblemSpec::phi_indices() const {
    if (phi == "all-classes") return class_representatives(group);
    auto idx = group.index_of(phi);
    if (!idx) throw CheckError("SchemaError", "unknown group element '" + phi + "'", "/phi");
    return {*idx};
}

ProblemSpec load_problem(const Json& j) {
    ProblemSpec spec;
    if (j.contains("group")) spec.group = json_group(j["group"], "/group");
    if (j.contains("truncation")) spec.truncation = j["truncation"].get<std::size_t>();
    if (spec.truncation > 6)
        throw CheckError("ResourceGuard", "truncation is limited to N <= 6", "/truncation");
    if (j.contains("phi")) spec.phi = j["phi"].get<std::string>();

    if (j.contains("algebra")) {
        const Json& ja = j["algebra"];
        std::vector<std::string> basis = ja["basis"].get<std::vector<std::string>>();
        const std::size_t dim = basis.size();
        std::vector<std::vector<SparseVec>> structure(dim, std::vector<SparseVec>(dim));
        const Json& st = ja["structure"];
        if (!st.is_array() || st.size() != dim)
            throw CheckError("SchemaError", "structure constants have wrong shape",
                             "/algebra/structure");
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) {
                const Json& cell = st[i][k];
                if (!cell.is_array() || cell.size() != dim)
                    throw CheckError("SchemaError", "structure cell has wrong length",
                                     "/algebra/structure[" + std::to_string(i) + "][" +
                                         std::to_string(k) + "]");
                SparseVec v;
                for (std::size_t l = 0; l < dim; ++l) {
                    Rational c = json_rational(cell[l], "/algebra/structure");
                    if (c != 0) v.emplace_back(l, c);
                }
                structure[i][k] = std::move(v);
            }
        SparseVec unit;
        const Json& ju = ja["unit"];
        for (std::size_t l = 0; l < dim; ++l) {
            Rational c = json_rational(ju[l], "/algebra/unit");
            if (c != 0) unit.emplace_back(l, c);
        }
        std::vector<std::size_t> weights;
        if (ja.contains("weights")) weights = ja["weights"].get<std::vector<std::size_t>>();
        spec.algebra = Algebra(std::move(basis), std::move(structure), std::move(unit),
                               std::move(weights));
    }
    if (j.contains("poly")) {
        spec.poly = poly_algebra(j["poly"]["vars"].get<std::size_t>(),
                                 j["poly"]["top_weight"].get<std::size_t>());
    }

    if (j.contains("action")) {
        const std::size_t dim = spec.coeff_algebra().dim();
        std::vector<SparseMatrix> mats;
        for (std::size_t x = 0; x < spec.group.order(); ++x) {
            const std::string name = spec.group.name(x);
            if (!j["action"].contains(name))
                throw CheckError("SchemaError", "missing action matrix", "/action/" + name);
            mats.push_back(json_matrix(j["action"][name], dim, dim, "/action/" + name));
        }
        spec.action = GroupAction(spec.coeff_algebra(), spec.group, std::move(mats));
    }
    if (j.contains("linear_action")) {
        if (!spec.poly)
            throw CheckError("SchemaError", "linear_action needs a poly algebra", "/linear_action");
        const std::size_t k = spec.poly->vars;
        std::vector<SparseMatrix> mats;
        for (std::size_t x = 0; x < spec.group.order(); ++x) {
            const std::string name = spec.group.name(x);
            if (!j["linear_action"].contains(name))
                throw CheckError("SchemaError", "missing space matrix", "/linear_action/" + name);
            mats.push_back(json_matrix(j["linear_action"][name], k, k, "/linear_action/" + name));
        }
        spec.linear = linear_action(*spec.poly, spec.group, std::move(mats));
    }
    if (!spec.algebra && !spec.poly && !j.contains("euler")) spec.algebra = Algebra::ground_field();
    if (!spec.action && !spec.linear && (spec.algebra || spec.poly))
        spec.action = GroupAction::trivial(spec.coeff_algebra(), spec.group);

    if (j.contains("euler")) {
        ProblemSpec::Euler e;
        e.quotient = json_group(j["euler"]["quotient"], "/euler/quotient");
        if (j["euler"].contains("section")) {
            std::vector<long> section = j["euler"]["section"].get<std::vector<long>>();
            long step = j["euler"].value("phi_step", 1L);
            e.data = euler_cocycle_from_section(e.quotient, section, step);
        } else if (j["euler"].contains("cocycle")) {
            e.data = euler_cocycle(e.quotient,
                                   j["euler"]["cocycle"].get<std::vector<std::vector<long>>>());
        } else {
            throw CheckError("SchemaError", "euler needs 'section' or 'cocycle'", "/euler");
        }
        if (!spec.algebra && !spec.poly) spec.algebra = Algebra::ground_field();
        spec.euler = std::move(e);
    }

    // resource guard: predicted top chain-group dimension per weight
    if (spec.algebra || spec.poly) {
        const Algebra& a = spec.coeff_algebra();
        std::size_t per_weight_dim = 0;
        if (a.graded()) {
            std::vector<std::size_t> by_weight(a.top_weight() + 1, 0);
            for (std::size_t i = 0; i < a.dim(); ++i) ++by_weight[a.weight(i)];
            for (std::size_t w : by_weight) per_weight_dim = std::max(per_weight_dim, w);
        } else {
            per_weight_dim = a.dim();
        }
        const std::size_t cell = per_weight_dim * spec.group.order();
        if (cell > 12) {
            double predicted = 1;
            for (std::size_t i = 0; i <= spec.truncation; ++i) predicted *= double(cell);
            throw CheckError("ResourceGuard",
                             "dim(A) * |Gamma| = " + std::to_string(cell) +
                                 " exceeds 12 per weight; the top chain group would have about " +
                                 std::to_string(predicted) + " basis vectors");
        }
    }
    return spec;
}

ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckError("SchemaError", "cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw CheckError("SchemaError", std::string("JSON parse error: ") + e.what());
    }
    return load_problem(j);
}

Json homology_to_json(const HomologyTable& t, const GradedModule* spaces) {
    Json out = Json::array();
    for (const auto& e : t.entries) {
        Json entry;
        entry["degree"] = e.degree;
        entry["dim"] = e.dim;
        Json reps = Json::array();
        for (const auto& r : e.representatives) {
            Json rep = Json::array();
            for (const auto& [i, v] : r) {
                Json term;
                term["basis"] = spaces ? spaces->label(e.degree, i) : std::to_string(i);
                term["coeff"] = rat_str(v);
                rep.push_back(std::move(term));
            }
            reps.push_back(std::move(rep));
        }
        entry["representatives"] = std::move(reps);
        out.push_back(std::move(entry));
    }
    return out;
}

std::string homology_to_csv(const HomologyTable& t, const GradedModule* spaces) {
    std::ostringstream out;
    out << "degree,dim,representatives\n";
    for (const auto& e : t.entries) {
        out << e.degree << "," << e.dim << ",\"";
        for (std::size_t k = 0; k < e.representatives.size(); ++k) {
            if (k) out << " | ";
            const auto& r = e.representatives[k];
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out << " + ";
                out << rat_str(r[i].second) << "*"
                    << (spaces ? spaces->label(e.degree, r[i].first) : std::to_string(r[i].first));
            }
        }
        out << "\"\n";
    }
    return out.str();
}

Json ss_to_json(const SpectralSequence& ss) {
    Json out;
    Json pages = Json::array();
    for (const auto& p : ss.pages) {
        Json page;
        page["r"] = p.r;
        Json entries = Json::array();
        for (const auto& [pq, dim] : p.dims) {
            Json e;
            e["p"] = pq.first;
            e["q"] = pq.second;
            e["dim"] = dim;
            auto it = p.differentials.find(pq);
            if (it != p.differentials.end()) e["d_rank"] = rank(it->second);
            entries.push_back(std::move(e));
        }
        page["entries"] = std::move(entries);
        pages.push_back(std::move(page));
    }
    out["pages"] = std::move(pages);
    out["einf_totals"] = ss.report.einf_totals;
    out["homology_totals"] = ss.report.homology_totals;
    out["converged"] = ss.report.converged;
    return out;
}

std::string ss_to_csv(const SpectralSequence& ss) {
    std::ostringstream out;
    out << "r,p,q,dim\n";
    for (const auto& p : ss.pages)
        for (const auto& [pq, dim] : p.dims)
            out << p.r << "," << pq.first << "," << pq.second << "," << dim << "\n";
    return out.str();
}

Json hp_to_json(const HpEstimate hp[2]) {
    Json out = Json::array();
    for (int i = 0; i < 2; ++i) {
        Json e;
        e["parity"] = i;
        e["stabilized"] = hp[i].stabilized;
        e["dim"] = hp[i].dim;
        e["certificate"] = hp[i].note;
        out.push_back(std::move(e));
    }
    return out;
}

Json report_to_json(const PipelineReport& rep, const FiniteGroup& g) {
    Json out;
    out["class"] = g.name(rep.class_rep);
    out["weight"] = rep.weight;
    out["method"] = rep.method;
    out["hc_dims"] = rep.model_hc;
    out["invariant_hc_dims"] = rep.invariant_hc;
    if (rep.direct_computed) out["direct_hc_dims"] = rep.direct_hc;
    out["hc_equal"] = rep.hc_equal;
    out["hp_estimate"] = hp_to_json(rep.hp);
    out["periodicity_ranks"] = rep.periodicity_ranks;
    Json ss;
    for (const auto& [name, s] : rep.ss) ss[name] = ss_to_json(s);
    out["ss_pages"] = std::move(ss);
    Json checks = Json::array();
    for (const auto& [name, ok] : rep.checks) {
        Json c;
        c["check"] = name;
        c["passed"] = ok;
        checks.push_back(std::move(c));
    }
    out["checks"] = std::move(checks);
    return out;
}

Json varieties_to_json(const std::vector<VarietiesReport>& reps, const FiniteGroup& g) {
    Json out = Json::array();
    for (const auto& rep : reps) {
        Json r;
        r["class"] = g.name(rep.class_rep);
        r["weight"] = rep.weight;
        r["direct_hc_dims"] = rep.direct_hc;
        r["flat_model_hc_dims"] = rep.flat_model_hc;
        r["invariant_model_hc_dims"] = rep.invariant_model_hc;
        r["hkr_quasi_iso"] = rep.hkr_quasi_iso;
        r["hc_equal"] = rep.hc_equal;
        Json checks = Json::array();
        for (const auto& [name, ok] : rep.checks) {
            Json c;
            c["check"] = name;
            c["passed"] = ok;
            checks.push_back(std::move(c));
        }
        r["checks"] = std::move(checks);
        out.push_back(std::move(r));
    }
    return out;
}

Json matrix_to_json(const SparseMatrix& m) {
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    Json entries = Json::array();
    for (const auto& t : m.entries()) {
        Json e = Json::array();
        e.push_back(t.row);
        e.push_back(t.col);
        e.push_back(rat_str(t.val));
        entries.push_back(std::move(e));
    }
    out["entries"] = std::move(entries);
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckError("SchemaError", "cannot write '" + tmp + "'");
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw CheckError("SchemaError", "cannot move '" + tmp + "' into place");
}

}  // namespace cychom
