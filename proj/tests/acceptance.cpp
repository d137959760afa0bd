// Acceptance suite: every criterion below runs at its stated bound and prints
// exactly one pass/fail line. The process exits nonzero when any fails.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cychom/io.hpp"

using namespace cychom;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int num, std::string name) : num_(num), name_(std::move(name)) {
        start_ = std::chrono::steady_clock::now();
    }
    void finish(bool ok, const std::string& detail = {}) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::ostringstream line;
        line << "[criterion " << num_ << "] " << name_ << " ... " << (ok ? "PASS" : "FAIL");
        line.setf(std::ios::fixed);
        line.precision(1);
        line << " (" << secs << " s)";
        if (!detail.empty()) line << " -- " << detail;
        std::cout << line.str() << std::endl;
        if (!ok) ++failures;
    }

private:
    int num_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

SparseMatrix swap2() {
    return SparseMatrix::from_triplets(2, 2, {{0, 1, Rational(1)}, {1, 0, Rational(1)}});
}

GroupAction swap_action(const Algebra& a, const FiniteGroup& z2) {
    return GroupAction(a, z2, {SparseMatrix::identity(2), swap2()});
}

// ---------------------------------------------------------------- corpus ---
// Constructing each object runs its full identity list (simplicial
// identities, b^2 = B^2 = 0, bB + Bb = 1 - T, d^2 = (1-T)S, TbarT = 1,
// dbar^2 + (bB+Bb)S = 0, (d-dagger)^2 = 0) as exact matrix equations.
struct Corpus {
    std::vector<std::string> names;
    std::vector<ParacyclicModule> cyclic_modules;  // the genuinely cyclic ones
    std::vector<GradedModule> cyclic_spaces;
    std::size_t object_count = 0;
};

Corpus build_identity_corpus(std::size_t n) {
    Corpus c;
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FiniteGroup z3 = FiniteGroup::cyclic(3);
    FiniteGroup z4 = FiniteGroup::cyclic(4);
    Algebra q = Algebra::ground_field();
    Algebra q2 = Algebra::functions_on_points(2);

    auto add_cyclic = [&](const std::string& name, const ParacyclicModule& m) {
        c.names.push_back(name);
        c.cyclic_modules.push_back(m);
        ++c.object_count;
    };
    auto count = [&](const std::string& name) {
        c.names.push_back(name);
        ++c.object_count;
    };

    // twisted algebra modules
    TwistedAlgebraCyclic cq(q, SparseMatrix::identity(1), n);
    add_cyclic("C(Q)", cq.module());
    TwistedAlgebraCyclic cq2(q2, SparseMatrix::identity(2), n);
    add_cyclic("C(Q^2)", cq2.module());
    TwistedAlgebraCyclic cswap(q2, swap2(), n);
    count("C^swap(Q^2)");
    derive_parachain(cswap.module());
    PolyAlgebra px = poly_algebra(1, 2);
    SparseMatrix neg_poly = linear_action(px, z2, {SparseMatrix::identity(1),
                                                   SparseMatrix::identity(1).scaled(Rational(-1))})
                                .on_polynomials.matrix(1);
    TwistedAlgebraCyclic cpoly(px.algebra, neg_poly, n, 1);
    count("C^neg(Q[x])_w1");
    derive_parachain(cpoly.module());
    TwistedAlgebraCyclic cgz2(Algebra::group_algebra(z2), SparseMatrix::identity(2), n);
    add_cyclic("C(Q[Z/2])", cgz2.module());

    // twisted group modules
    TwistedGroupCyclic g1(z2, 0, n);
    add_cyclic("C^1(Z/2)", g1.module());
    TwistedGroupCyclic gs(z2, 1, n);
    count("C^sigma(Z/2)");
    derive_parachain(gs.module());
    TwistedGroupCyclic gw(z3, 1, n);
    count("C^omega(Z/3)");
    derive_parachain(gw.module());
    TwistedGroupCyclic g4(z4, 1, n);
    count("C^gen(Z/4)");
    derive_parachain(g4.module());

    // tensor products over the group, their diagonals, totalizations, and
    // both triangularizations
    auto tensor_block = [&](const std::string& name, const TwistedGroupCyclic& xg,
                            const TwistedAlgebraCyclic& xa, const FiniteGroup& g,
                            const GroupAction& act) {
        GammaTensorModule tm = tensor_over_gamma(xg, xa.module(), xa.action_family(g, act));
        count(name + " (cylindrical tensor)");
        if (!tm.module.is_cylindrical())
            throw CheckError("IdentityViolation", name + " is not cylindrical");
        ParacyclicModule diag = diagonal(tm.module);
        if (!diag.is_cyclic()) throw CheckError("IdentityViolation", name + " diagonal not cyclic");
        add_cyclic(name + " diagonal", diag);
        ParachainBicomplex bic = ParachainBicomplex::from_biparacyclic(tm.module);
        totalize_mixed(bic);
        count(name + " totalization");
        triangularize(bic, true);
        triangularize(bic, false);
        count(name + " triangularizations");
    };
    tensor_block("C^sigma(Z/2,Q)", gs, cq, z2, GroupAction::trivial(q, z2));
    tensor_block("C^swap(Z/2,Q^2)", gs, cswap, z2, swap_action(q2, z2));
    tensor_block("C^omega(Z/3,Q)", gw, cq, z3, GroupAction::trivial(q, z3));

    // tensor of an S-module with a mixed complex
    {
        MixedComplex mc = derive_parachain(cq.module()).as_mixed();
        TriangularSModule t = tensor_s_with_parachain(cyclic_complex(mc).module,
                                                      ParachainComplex::from_mixed(mc));
        totalize(t);
        count("C(Q)^nat (x) C(Q) (triangular S-module)");
    }

    // crossed product of the Morita instance and its class components
    {
        CrossedProduct cp = crossed_product(q2, z2, swap_action(q2, z2));
        TwistedAlgebraCyclic full(cp.algebra, SparseMatrix::identity(4), n);
        add_cyclic("C(Q^2 x| Z/2)", full.module());
        auto comps = split_by_class(cp, z2, full);
        for (const auto& comp : comps) add_cyclic("C(Q^2 x| Z/2)_[" + z2.name(comp.rep) + "]",
                                                  comp.module);
    }
    for (const auto& m : c.cyclic_modules) c.cyclic_spaces.push_back(m.spaces());
    return c;
}

std::string run_cli(const std::string& args) {
#ifdef CYCHOM_CLI_PATH
    return std::string(CYCHOM_CLI_PATH) + " " + args;
#else
    return "cychom " + args;
#endif
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    std::cout << "acceptance suite (exact arithmetic, truncation semantics as documented)"
              << std::endl;

    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FiniteGroup z3 = FiniteGroup::cyclic(3);
    FiniteGroup s3 = FiniteGroup::symmetric3();
    Algebra q = Algebra::ground_field();
    Algebra q2 = Algebra::functions_on_points(2);

    // 1 -------------------------------------------------------------------
    Criterion c1(1, "identity suite on the corpus at N = 4");
    std::size_t corpus_size = 0;
    bool ok1 = true;
    std::string detail1;
    Corpus corpus;
    try {
        auto t0 = std::chrono::steady_clock::now();
        corpus = build_identity_corpus(4);
        corpus_size = corpus.object_count;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok1 = corpus_size >= 12 && secs < 120.0;
        detail1 = std::to_string(corpus_size) + " corpus objects, all constructor identities exact";
    } catch (const CheckError& e) {
        ok1 = false;
        detail1 = e.what();
    }
    c1.finish(ok1, detail1);

    // 2 -------------------------------------------------------------------
    Criterion c2(2, "Connes cross-oracle: lambda dims = cyclic-complex dims, degrees <= 3");
    bool ok2 = true;
    std::string detail2;
    try {
        std::size_t checked = 0;
        for (std::size_t i = 0; i < corpus.cyclic_modules.size(); ++i) {
            const ParacyclicModule& m = corpus.cyclic_modules[i];
            std::vector<std::size_t> lam = homology(lambda_complex(m)).dims();
            std::vector<std::size_t> hcd = hc(derive_parachain(m).as_mixed()).dims();
            for (std::size_t deg = 0; deg <= 3 && deg < lam.size(); ++deg)
                if (lam[deg] != hcd[deg]) ok2 = false;
            ++checked;
        }
        detail2 = std::to_string(checked) + " cyclic modules";
    } catch (const CheckError& e) {
        ok2 = false;
        detail2 = e.what();
    }
    c2.finish(ok2, detail2);

    // 3 -------------------------------------------------------------------
    Criterion c3(3, "Burghelea group-ring checks (Z/2, Z/3, S3)");
    bool ok3 = true;
    std::string detail3;
    try {
        const std::vector<std::size_t> burghelea{1, 0, 1, 0};
        PipelineReport r2 =
            finite_order_pipeline(q, z2, GroupAction::trivial(q, z2), 1, 4, 0, true, 3);
        if (r2.model_hc != burghelea || r2.direct_hc != burghelea) ok3 = false;
        PipelineReport r3 =
            finite_order_pipeline(q, z3, GroupAction::trivial(q, z3), 1, 4, 0, true, 3);
        if (r3.model_hc != burghelea || r3.direct_hc != burghelea) ok3 = false;
        PipelineReport rs = finite_order_pipeline(q, s3, GroupAction::trivial(q, s3),
                                                  *s3.index_of("t01"), 4, 0, true, 3);
        if (!rs.hc_equal || rs.model_hc != rs.direct_hc) ok3 = false;
        detail3 = "HC(Q[Z/2])_[s] = HC(Q[Z/3])_[w] = (1,0,1,0); S3 pipeline = direct split";
    } catch (const CheckError& e) {
        ok3 = false;
        detail3 = e.what();
    }
    c3.finish(ok3, detail3);

    // 4 -------------------------------------------------------------------
    Criterion c4(4, "Morita smoke test: Q^2 x| Z/2 at N = 4");
    bool ok4 = true;
    std::string detail4;
    try {
        auto t0 = std::chrono::steady_clock::now();
        CrossedProduct cp = crossed_product(q2, z2, swap_action(q2, z2));
        TwistedAlgebraCyclic full(cp.algebra, SparseMatrix::identity(4), 4);
        auto comps = split_by_class(cp, z2, full);
        std::vector<std::size_t> total = hc(derive_parachain(full.module()).as_mixed()).dims();
        if (total != std::vector<std::size_t>{1, 0, 1, 0}) ok4 = false;
        const ClassComponent& sigma = component_of(comps, z2, 1);
        std::vector<std::size_t> sdims = hc(derive_parachain(sigma.module).as_mixed()).dims();
        for (std::size_t d : sdims)
            if (d != 0) ok4 = false;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= 300.0) ok4 = false;
        detail4 = "HC(C(A x| Gamma)) = (1,0,1,0), [sigma]-component = 0";
    } catch (const CheckError& e) {
        ok4 = false;
        detail4 = e.what();
    }
    c4.finish(ok4, detail4);

    // 5 + 6 ----------------------------------------------------------------
    Criterion c5(5, "theorem pipelines: endpoint homology agrees, degrees <= N-2");
    Criterion c6(6, "spectral sequences I/II/III + sigma converge on the corpus");
    bool ok5 = true, ok6 = true;
    std::string detail5, detail6;
    std::size_t pipeline_count = 0, ss_count = 0;
    try {
        struct Inst {
            const Algebra* a;
            const FiniteGroup* g;
            GroupAction act;
            std::size_t phi, n, w;
        };
        GroupAction triv_q_z2 = GroupAction::trivial(q, z2);
        GroupAction triv_q_z3 = GroupAction::trivial(q, z3);
        GroupAction triv_q_s3 = GroupAction::trivial(q, s3);
        GroupAction swap_q2 = swap_action(q2, z2);
        PolyAlgebra px = poly_algebra(1, 2);
        LinearAction neg = linear_action(px, z2, {SparseMatrix::identity(1),
                                                  SparseMatrix::identity(1).scaled(Rational(-1))});
        std::vector<Inst> insts;
        insts.push_back({&q, &z2, triv_q_z2, 0, 4, 0});
        insts.push_back({&q, &z2, triv_q_z2, 1, 4, 0});
        insts.push_back({&q, &z3, triv_q_z3, 1, 4, 0});
        insts.push_back({&q2, &z2, swap_q2, 0, 4, 0});
        insts.push_back({&q2, &z2, swap_q2, 1, 4, 0});
        insts.push_back({&q, &s3, triv_q_s3, *s3.index_of("t01"), 4, 0});
        for (std::size_t w = 0; w <= 2; ++w) {
            insts.push_back({&px.algebra, &z2, neg.on_polynomials, 0, 3, w});
            insts.push_back({&px.algebra, &z2, neg.on_polynomials, 1, 3, w});
        }
        for (const auto& inst : insts) {
            PipelineReport rep = finite_order_pipeline(*inst.a, *inst.g, inst.act, inst.phi,
                                                       inst.n, inst.w, true, 3);
            if (!rep.hc_equal) ok5 = false;
            for (const auto& [name, check_ok] : rep.checks)
                if (!check_ok) ok5 = false;
            ++pipeline_count;
            for (const auto& [name, ss] : rep.ss) {
                if (!ss.report.converged) ok6 = false;
                // all three converge to the same totals = model HC dims
                for (std::size_t deg = 0; deg + 2 <= inst.n; ++deg)
                    if (ss.report.einf_totals[deg] != rep.model_hc[deg]) ok6 = false;
                ++ss_count;
            }
        }
        detail5 = std::to_string(pipeline_count) + " (A, Gamma, phi, w) instances";
    } catch (const CheckError& e) {
        ok5 = false;
        ok6 = false;
        detail5 = e.what();
    }
    c5.finish(ok5, detail5);

    // sigma-model spectral sequences feed criterion 6 as well
    SparseMatrix id1 = SparseMatrix::identity(1);
    auto make_sigma = [&](const FiniteGroup& gbar, const EulerCocycleData& e, std::size_t n,
                          bool literal = false) {
        TwistedAlgebraCyclic xa(q, id1, n, 0);
        MixedComplex mc = derive_parachain(xa.module()).as_mixed();
        std::vector<std::vector<SparseMatrix>> action(gbar.order());
        for (std::size_t x = 0; x < gbar.order(); ++x)
            for (std::size_t m = 0; m <= n; ++m) action[x].push_back(SparseMatrix::identity(1));
        return sigma_model(gbar, e, EquivariantMixed(mc, gbar, action), 3, literal);
    };
    try {
        FiniteGroup gtriv = FiniteGroup::trivial();
        SigmaModel s_triv = make_sigma(gtriv, euler_cocycle_from_section(gtriv, {0}, 1), 4);
        SigmaModel s_z2 = make_sigma(z2, euler_cocycle_from_section(z2, {0, 1}, 2), 4);
        if (!s_triv.ss.report.converged || !s_z2.ss.report.converged) ok6 = false;
        ss_count += 2;
        detail6 = std::to_string(ss_count) + " page computations, E^inf totals = H(Tot)";
    } catch (const CheckError& e) {
        ok6 = false;
        detail6 = e.what();
    }
    c6.finish(ok6, detail6);

    // 7 -------------------------------------------------------------------
    Criterion c7(7, "infinite-order sigma model for Z (phi = gen, 2 gen)");
    bool ok7 = true;
    std::string detail7;
    try {
        FiniteGroup gtriv = FiniteGroup::trivial();
        const std::vector<std::size_t> point{1, 0, 0, 0};
        SigmaModel s1 = make_sigma(gtriv, euler_cocycle_from_section(gtriv, {0}, 1), 4);
        if (s1.stab.table.dims() != point) ok7 = false;
        EulerCocycleData e1 = euler_cocycle_from_section(z2, {0, 1}, 2);
        EulerCocycleData e2 = euler_cocycle_from_section(z2, {0, -1}, 2);
        SigmaModel s2 = make_sigma(z2, e1, 4);
        SigmaModel s2b = make_sigma(z2, e2, 4);
        if (s2.stab.table.dims() != point) ok7 = false;
        // periodicity matrices = cap-induced matrices, invariant under the
        // change of section
        if (s2.cap_on_homology.size() != s2.stab.s_on_homology.size()) ok7 = false;
        for (std::size_t i = 0; i < s2.cap_on_homology.size(); ++i) {
            if (s2.cap_on_homology[i] != s2.stab.s_on_homology[i]) ok7 = false;
            if (s2.cap_on_homology[i] != s2b.cap_on_homology[i]) ok7 = false;
        }
        if (s2.stab.table.dims() != s2b.stab.table.dims()) ok7 = false;
        // the literal sign reading must fail the d-squared arbiter
        bool threw = false;
        try {
            make_sigma(z2, e1, 4, true);
        } catch (const CheckError& e) {
            threw = std::string(e.code()) == "DSquaredNonzero";
        }
        if (!threw) ok7 = false;
        detail7 = "H = (1,0,0,0) for both quotients; periodicity = cap; section-independent";
    } catch (const CheckError& e) {
        ok7 = false;
        detail7 = e.what();
    }
    c7.finish(ok7, detail7);

    // 8 -------------------------------------------------------------------
    Criterion c8(8, "twisted HKR for Q[x] (W = 2, N = 3), both classes of Z/2");
    bool ok8 = true;
    std::string detail8;
    try {
        auto t0 = std::chrono::steady_clock::now();
        PolyAlgebra px = poly_algebra(1, 2);
        LinearAction neg = linear_action(px, z2, {SparseMatrix::identity(1),
                                                  SparseMatrix::identity(1).scaled(Rational(-1))});
        for (std::size_t phi = 0; phi < 2; ++phi) {
            auto reps = varieties_pipeline(px, z2, neg, phi, 3);
            for (const auto& rep : reps) {
                if (!rep.hkr_quasi_iso || !rep.hc_equal) ok8 = false;
                for (const auto& [name, check_ok] : rep.checks)
                    if (!check_ok) ok8 = false;
            }
        }
        // the CLI surface of the same criterion: hkr-check --compare exits 0
        const std::string dir = "acceptance_hkr";
        if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0)
            throw CheckError("SchemaError", "cannot prepare artifact directories");
        {
            std::ofstream spec(dir + "/hkr.json");
            spec << R"({"group": {"elements": ["1","s"], "table": [[0,1],[1,0]]},)"
                 << R"( "poly": {"vars": 1, "top_weight": 2},)"
                 << R"( "linear_action": {"1": [[1]], "s": [[-1]]},)"
                 << R"( "phi": "all-classes", "truncation": 3})" << "\n";
        }
        int rc = std::system(
            run_cli("hkr-check " + dir + "/hkr.json --compare --out " + dir + " > /dev/null")
                .c_str());
        if (rc != 0) ok8 = false;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= 120.0) ok8 = false;
        detail8 = "alpha^phi iso weightwise; model = direct; CLI hkr-check --compare exit 0";
    } catch (const CheckError& e) {
        ok8 = false;
        detail8 = e.what();
    }
    c8.finish(ok8, detail8);

    // 9 -------------------------------------------------------------------
    Criterion c9(9, "determinism: re-running corpus jobs yields bit-identical artifacts");
    bool ok9 = true;
    std::string detail9;
    try {
        // in-process: serialize the same job twice from scratch
        PipelineReport ra =
            finite_order_pipeline(q, z2, GroupAction::trivial(q, z2), 1, 4, 0, true, 3);
        PipelineReport rb =
            finite_order_pipeline(q, z2, GroupAction::trivial(q, z2), 1, 4, 0, true, 3);
        if (report_to_json(ra, z2).dump(2) != report_to_json(rb, z2).dump(2)) ok9 = false;

        // through the CLI binary, byte-comparing the artifacts
        const std::string dir = "acceptance_artifacts";
        if (std::system(("rm -rf " + dir + " && mkdir -p " + dir + "/a " + dir + "/b").c_str()) != 0)
            throw CheckError("SchemaError", "cannot prepare artifact directories");
        {
            std::ofstream spec(dir + "/job.json");
            spec << R"({"group": {"elements": ["1","s"], "table": [[0,1],[1,0]]},)"
                 << R"( "phi": "all-classes", "truncation": 4})" << "\n";
        }
        int rc1 = std::system(
            run_cli("hc " + dir + "/job.json --out " + dir + "/a > /dev/null").c_str());
        int rc2 = std::system(
            run_cli("hc " + dir + "/job.json --out " + dir + "/b > /dev/null").c_str());
        if (rc1 != 0 || rc2 != 0) ok9 = false;
        if (slurp(dir + "/a/job.hc.json") != slurp(dir + "/b/job.hc.json")) ok9 = false;
        if (slurp(dir + "/a/job.hc.json").empty()) ok9 = false;
        detail9 = "pipeline reports and CLI artifacts byte-identical";
    } catch (const CheckError& e) {
        ok9 = false;
        detail9 = e.what();
    }
    c9.finish(ok9, detail9);

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
              << std::endl;
    return failures == 0 ? 0 : 1;
}
