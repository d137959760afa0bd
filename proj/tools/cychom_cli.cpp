// Command-line front end: load JSON problem descriptions, run validators and
// pipelines, emit homology tables, spectral-sequence pages, and
// machine-readable check reports.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#include "cychom/io.hpp"

using namespace cychom;

namespace {

std::size_t thread_count() {
    const char* env = std::getenv("CYCHOM_THREADS");
    if (!env) return 1;
    long v = std::atol(env);
    return v > 0 ? std::size_t(v) : 1;
}

// deterministic parallel map: slot i of the output is always task i's result
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t threads = std::min(thread_count(), count == 0 ? std::size_t(1) : count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Output {
    std::string dir = ".";
    std::string format = "json";
    std::string stem = "cychom";

    void emit(const std::string& name, const Json& j, const std::string& csv = {}) const {
        if (format == "json" || csv.empty()) {
            const std::string path = dir + "/" + stem + "." + name + ".json";
            write_atomic(path, j.dump(2) + "\n");
            std::cout << "wrote " << path << "\n";
        }
        if (format == "csv" && !csv.empty()) {
            const std::string path = dir + "/" + stem + "." + name + ".csv";
            write_atomic(path, csv);
            std::cout << "wrote " << path << "\n";
        }
    }
};

std::vector<std::size_t> weights_to_run(const ProblemSpec& spec, long weight_flag) {
    const Algebra& a = spec.coeff_algebra();
    if (!a.graded()) return {0};
    if (weight_flag >= 0) return {std::size_t(weight_flag)};
    std::vector<std::size_t> all;
    for (std::size_t w = 0; w <= a.top_weight(); ++w) all.push_back(w);
    return all;
}

int cmd_validate(const std::string& path, const Output& out) {
    Json diag;
    diag["checks"] = Json::array();
    auto note = [&](const std::string& what) {
        Json c;
        c["check"] = what;
        c["passed"] = true;
        diag["checks"].push_back(std::move(c));
    };
    try {
        ProblemSpec spec = load_problem_file(path);
        note("schema");
        note("group_axioms");
        note("algebra_axioms");
        note("action_automorphisms");
        for (std::size_t phi : spec.phi_indices()) {
            ConjugacyData cd = conjugacy_analysis(spec.group, phi);
            note("conjugacy_" + spec.group.name(phi));
            TwistedGroupCyclic xg(cd.centralizer, cd.phi_in_centralizer, spec.truncation);
            note("twisted_group_module_" + spec.group.name(phi));
            for (std::size_t w : weights_to_run(spec, -1)) {
                TwistedAlgebraCyclic xa(spec.coeff_algebra(), spec.coeff_action().matrix(phi),
                                        spec.truncation, w);
                note("twisted_algebra_module_" + spec.group.name(phi) + "_w" + std::to_string(w));
            }
        }
        if (spec.euler) note("euler_cocycle");
        diag["ok"] = true;
        out.emit("validate", diag);
        return 0;
    } catch (const CheckError& e) {
        Json c;
        c["check"] = e.code();
        c["passed"] = false;
        c["detail"] = e.detail();
        if (!e.witness().empty()) c["witness"] = e.witness();
        diag["checks"].push_back(std::move(c));
        diag["ok"] = false;
        out.emit("validate", diag);
        std::cerr << e.what() << "\n";
        return 1;
    }
}

int cmd_identities(const std::string& path, const Output& out) {
    ProblemSpec spec = load_problem_file(path);
    Json diag;
    diag["identities"] = Json::array();
    auto note = [&](const std::string& what) {
        Json c;
        c["identity"] = what;
        c["passed"] = true;
        diag["identities"].push_back(std::move(c));
    };
    try {
        for (std::size_t phi : spec.phi_indices()) {
            const std::string pname = spec.group.name(phi);
            ConjugacyData cd = conjugacy_analysis(spec.group, phi);
            TwistedGroupCyclic xg(cd.centralizer, cd.phi_in_centralizer, spec.truncation);
            note("simplicial+paracyclic identities of C^phi(Gamma_phi), phi=" + pname);
            derive_parachain(xg.module());
            note("parachain identities (b^2, B^2, bB+Bb=1-T) for C^phi(Gamma_phi), phi=" + pname);
            for (std::size_t w : weights_to_run(spec, -1)) {
                TwistedAlgebraCyclic xa(spec.coeff_algebra(), spec.coeff_action().matrix(phi),
                                        spec.truncation, w);
                note("simplicial identities + twist of C^phi(A), phi=" + pname + ", w=" +
                     std::to_string(w));
                ParachainComplex pc = derive_parachain(xa.module());
                note("parachain identities of C^phi(A), phi=" + pname + ", w=" + std::to_string(w));
                cyclic_complex(pc);
                note("d^2 = (1-T)S for C^phi(A)^nat, phi=" + pname + ", w=" + std::to_string(w));
                std::vector<SparseMatrix> mats;
                for (std::size_t x = 0; x < cd.centralizer.order(); ++x)
                    mats.push_back(spec.coeff_action().matrix(cd.embedding[x]));
                GroupAction restricted(spec.coeff_algebra(), cd.centralizer, std::move(mats));
                GammaTensorModule tm =
                    tensor_over_gamma(xg, xa.module(), xa.action_family(cd.centralizer, restricted));
                note("bi-paracyclic + cylindrical flags of C^phi(Gamma_phi, A), phi=" + pname +
                     ", w=" + std::to_string(w));
                diagonal(tm.module);
                note("diagonal cyclic module, phi=" + pname + ", w=" + std::to_string(w));
                ParachainBicomplex bic = ParachainBicomplex::from_biparacyclic(tm.module);
                totalize_mixed(bic);
                note("cylindrical totalization identities, phi=" + pname + ", w=" + std::to_string(w));
                triangularize(bic, true);
                triangularize(bic, false);
                note("triangular S-module identities + Tot(C)^nat match, phi=" + pname + ", w=" +
                     std::to_string(w));
            }
        }
        diag["ok"] = true;
        out.emit("identities", diag);
        return 0;
    } catch (const CheckError& e) {
        Json c;
        c["identity"] = e.code();
        c["passed"] = false;
        c["detail"] = e.detail();
        if (!e.witness().empty()) c["witness"] = e.witness();
        diag["identities"].push_back(std::move(c));
        diag["ok"] = false;
        out.emit("identities", diag);
        std::cerr << e.what() << "\n";
        return 1;
    }
}

int cmd_split(const std::string& path, const Output& out) {
    ProblemSpec spec = load_problem_file(path);
    Json report = Json::array();
    for (std::size_t w : weights_to_run(spec, -1)) {
        CrossedProduct cp =
            crossed_product(spec.coeff_algebra(), spec.group, spec.coeff_action());
        TwistedAlgebraCyclic full(cp.algebra, SparseMatrix::identity(cp.algebra.dim()),
                                  spec.truncation, w);
        auto comps = split_by_class(cp, spec.group, full);
        for (const auto& comp : comps) {
            Json c;
            c["class"] = spec.group.name(comp.rep);
            c["weight"] = w;
            std::vector<std::size_t> dims;
            for (std::size_t m = 0; m <= spec.truncation; ++m)
                dims.push_back(comp.module.spaces().dim(m));
            c["dims"] = dims;
            MixedComplex mixed = derive_parachain(comp.module).as_mixed();
            c["homology"] = homology_to_json(hc(mixed));
            report.push_back(std::move(c));
        }
    }
    out.emit("split", report);
    return 0;
}

int cmd_hc(const std::string& path, const Output& out, long weight_flag,
           const std::string& class_flag, bool compare, bool hp_only) {
    ProblemSpec spec = load_problem_file(path);
    std::vector<std::size_t> classes = spec.phi_indices();
    if (!class_flag.empty()) {
        auto idx = spec.group.index_of(class_flag);
        if (!idx) throw CheckError("SchemaError", "unknown class '" + class_flag + "'");
        classes = {*idx};
    }
    std::vector<std::size_t> weights = weights_to_run(spec, weight_flag);
    struct Job {
        std::size_t phi, w;
    };
    std::vector<Job> jobs;
    for (std::size_t phi : classes)
        for (std::size_t w : weights) jobs.push_back({phi, w});
    std::vector<Json> results(jobs.size());
    bool all_equal = true;
    parallel_for(jobs.size(), [&](std::size_t i) {
        PipelineReport rep =
            finite_order_pipeline(spec.coeff_algebra(), spec.group, spec.coeff_action(),
                                  jobs[i].phi, spec.truncation, jobs[i].w, compare, 3);
        results[i] = report_to_json(rep, spec.group);
        if (compare && !rep.hc_equal) all_equal = false;
    });
    Json report = Json::array();
    std::string csv = "class,weight,degree,dim\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto dims = results[i]["hc_dims"].get<std::vector<std::size_t>>();
        for (std::size_t n = 0; n < dims.size(); ++n)
            csv += spec.group.name(jobs[i].phi) + "," + std::to_string(jobs[i].w) + "," +
                   std::to_string(n) + "," + std::to_string(dims[n]) + "\n";
        report.push_back(std::move(results[i]));
    }
    out.emit(hp_only ? "hp" : "hc", report, csv);
    if (compare && !all_equal) {
        std::cerr << "hc --compare: theorem-level equality FAILED\n";
        return 2;
    }
    return 0;
}

int cmd_ss(const std::string& path, const Output& out, const std::string& which,
           const std::string& class_flag, long weight_flag, std::size_t pages) {
    ProblemSpec spec = load_problem_file(path);
    if (which == "sigma") {
        if (!spec.euler)
            throw CheckError("SchemaError",
                             "ss sigma needs infinite-order data ('euler' block); finite-order "
                             "inputs use which = I, II or III");
        const std::size_t n = spec.truncation;
        TwistedAlgebraCyclic xa(spec.coeff_algebra(),
                                SparseMatrix::identity(spec.coeff_algebra().dim()), n, 0);
        MixedComplex mc = derive_parachain(xa.module()).as_mixed();
        std::vector<std::vector<SparseMatrix>> action(spec.euler->quotient.order());
        for (std::size_t x = 0; x < action.size(); ++x)
            for (std::size_t m = 0; m <= n; ++m)
                action[x].push_back(SparseMatrix::identity(mc.spaces.dim(m)));
        SigmaModel sm = sigma_model(spec.euler->quotient, spec.euler->data,
                                    EquivariantMixed(mc, spec.euler->quotient, action), pages);
        Json j;
        j["which"] = "sigma";
        j["homology"] = homology_to_json(sm.stab.table);
        j["hp_estimate"] = hp_to_json(sm.stab.hp);
        j["ss"] = ss_to_json(sm.ss);
        out.emit("ss", j, ss_to_csv(sm.ss));
        return sm.ss.report.converged ? 0 : 2;
    }
    if (which != "I" && which != "II" && which != "III")
        throw CheckError("SchemaError", "which must be I, II, III or sigma");
    if (spec.euler && !spec.algebra && !spec.poly)
        throw CheckError("SchemaError", "finite-order spectral sequences need algebra data");
    std::vector<std::size_t> classes = spec.phi_indices();
    if (!class_flag.empty()) {
        auto idx = spec.group.index_of(class_flag);
        if (!idx) throw CheckError("SchemaError", "unknown class '" + class_flag + "'");
        classes = {*idx};
    }
    Json report = Json::array();
    std::string csv;
    bool converged = true;
    for (std::size_t phi : classes)
        for (std::size_t w : weights_to_run(spec, weight_flag)) {
            PipelineReport rep = finite_order_pipeline(
                spec.coeff_algebra(), spec.group, spec.coeff_action(), phi, spec.truncation, w,
                false, pages);
            Json j;
            j["class"] = spec.group.name(phi);
            j["weight"] = w;
            j["which"] = which;
            j["ss"] = ss_to_json(rep.ss.at(which));
            csv += ss_to_csv(rep.ss.at(which));
            converged = converged && rep.ss.at(which).report.converged;
            report.push_back(std::move(j));
        }
    out.emit("ss", report, csv);
    return converged ? 0 : 2;
}

int cmd_hkr(const std::string& path, const Output& out, bool compare) {
    ProblemSpec spec = load_problem_file(path);
    if (!spec.poly || !spec.linear)
        throw CheckError("SchemaError", "hkr-check needs 'poly' and 'linear_action'");
    Json report = Json::array();
    bool all_ok = true;
    for (std::size_t phi : spec.phi_indices()) {
        auto reps = varieties_pipeline(*spec.poly, spec.group, *spec.linear, phi, spec.truncation);
        for (const auto& rep : reps) {
            if (!rep.hkr_quasi_iso || (compare && !rep.hc_equal)) all_ok = false;
        }
        Json j = varieties_to_json(reps, spec.group);
        for (auto& item : j) report.push_back(std::move(item));
    }
    out.emit("hkr", report);
    if (!all_ok) {
        std::cerr << "hkr-check: quasi-isomorphism certification FAILED\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact cyclic homology of crossed products at desk scale"};
    app.require_subcommand(1);

    std::string spec_path, out_dir = ".", format = "json", class_flag, which = "I";
    long weight_flag = -1;
    long truncation_flag = -1;
    bool compare = false;
    std::size_t pages = 3;

    auto add_common = [&](CLI::App* sub, bool needs_spec = true) {
        if (needs_spec) sub->add_option("spec", spec_path, "problem description (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--truncation", truncation_flag, "override the truncation N");
    };

    CLI::App* validate = app.add_subcommand("validate", "run every constructor identity check");
    add_common(validate);
    CLI::App* identities =
        app.add_subcommand("identities", "verify the full identity list on the instance");
    add_common(identities);
    CLI::App* split = app.add_subcommand("split", "conjugacy-class splitting of C(A x| Gamma)");
    add_common(split);
    CLI::App* hc = app.add_subcommand("hc", "per-class cyclic homology via the theorem pipelines");
    add_common(hc);
    hc->add_option("--class", class_flag, "restrict to one class representative");
    hc->add_option("--weight", weight_flag, "restrict to one weight");
    hc->add_flag("--compare", compare, "also compute the direct side and assert equality");
    CLI::App* hp = app.add_subcommand("hp", "HP estimates with stabilization certificates");
    add_common(hp);
    hp->add_option("--class", class_flag, "restrict to one class representative");
    hp->add_option("--weight", weight_flag, "restrict to one weight");
    CLI::App* ss = app.add_subcommand("ss", "spectral sequence pages and convergence report");
    add_common(ss);
    ss->add_option("--which", which, "I|II|III|sigma");
    ss->add_option("--class", class_flag, "restrict to one class representative");
    ss->add_option("--weight", weight_flag, "restrict to one weight");
    ss->add_option("--pages", pages, "number of pages to compute");
    CLI::App* hkr = app.add_subcommand("hkr-check", "twisted HKR certification for linear actions");
    add_common(hkr);
    hkr->add_flag("--compare", compare, "also compare against the direct class components");

    CLI11_PARSE(app, argc, argv);

    Output out;
    out.dir = out_dir;
    out.format = format;
    {
        // artifact stem from the input filename
        std::string stem = spec_path;
        auto slash = stem.find_last_of('/');
        if (slash != std::string::npos) stem = stem.substr(slash + 1);
        auto dot = stem.find_last_of('.');
        if (dot != std::string::npos) stem = stem.substr(0, dot);
        if (!stem.empty()) out.stem = stem;
    }

    try {
        // the truncation override is applied by rewriting the parsed JSON
        if (truncation_flag >= 0) {
            Json j;
            {
                std::ifstream in(spec_path);
                in >> j;
            }
            j["truncation"] = truncation_flag;
            const std::string rewritten = out.dir + "/" + out.stem + ".trunc.json";
            write_atomic(rewritten, j.dump(2) + "\n");
            spec_path = rewritten;
        }
        if (validate->parsed()) return cmd_validate(spec_path, out);
        if (identities->parsed()) return cmd_identities(spec_path, out);
        if (split->parsed()) return cmd_split(spec_path, out);
        if (hc->parsed()) return cmd_hc(spec_path, out, weight_flag, class_flag, compare, false);
        if (hp->parsed()) return cmd_hc(spec_path, out, weight_flag, class_flag, false, true);
        if (ss->parsed()) return cmd_ss(spec_path, out, which, class_flag, weight_flag, pages);
        if (hkr->parsed()) return cmd_hkr(spec_path, out, compare);
    } catch (const CheckError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
