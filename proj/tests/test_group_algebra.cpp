#include <doctest.h>

#include "cychom/group_algebra.hpp"

using namespace cychom;

TEST_CASE("conjugacy analysis in S3") {
    FiniteGroup s3 = FiniteGroup::symmetric3();
    std::size_t t01 = *s3.index_of("t01");
    ConjugacyData cd = conjugacy_analysis(s3, t01);
    CHECK(cd.conj_class.size() == 3);
    CHECK(cd.centralizer.order() == 2);
    CHECK(cd.order_of_phi == 2);

    ConjugacyData id = conjugacy_analysis(s3, 0);
    CHECK(id.conj_class == std::vector<std::size_t>{0});
    CHECK(id.centralizer.order() == 6);

    CHECK(class_representatives(s3).size() == 3);
}

TEST_CASE("conjugacy analysis in Z/4 (abelian)") {
    FiniteGroup z4 = FiniteGroup::cyclic(4);
    ConjugacyData cd = conjugacy_analysis(z4, 1);
    CHECK(cd.conj_class == std::vector<std::size_t>{1});
    CHECK(cd.centralizer.order() == 4);
    CHECK(cd.order_of_phi == 4);
}

TEST_CASE("class sizes sum to the group order") {
    FiniteGroup s3 = FiniteGroup::symmetric3();
    std::size_t total = 0;
    for (std::size_t rep : class_representatives(s3))
        total += conjugacy_analysis(s3, rep).conj_class.size();
    CHECK(total == s3.order());
}

TEST_CASE("corrupted multiplication table is rejected") {
    auto table = FiniteGroup::cyclic(3);
    std::vector<std::vector<std::size_t>> bad = {{0, 1, 2}, {1, 2, 0}, {2, 1, 0}};
    CHECK_THROWS_WITH_AS(FiniteGroup({"1", "a", "b"}, bad), doctest::Contains("NotA"), CheckError);
}

TEST_CASE("crossed product with trivial action on Q is the group ring") {
    FiniteGroup g = FiniteGroup::symmetric3();
    Algebra a = Algebra::ground_field();
    CrossedProduct cp = crossed_product(a, g, GroupAction::trivial(a, g));
    CHECK(cp.algebra.dim() == 6);
    for (std::size_t x = 0; x < 6; ++x)
        for (std::size_t y = 0; y < 6; ++y)
            CHECK(cp.algebra.product(cp.index(0, x), cp.index(0, y)) ==
                  vec_unit(cp.index(0, g.mul(x, y))));
}

TEST_CASE("Q^2 x| Z/2 (swap) is a 4-dimensional matrix algebra") {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    Algebra a = Algebra::functions_on_points(2);
    SparseMatrix swap =
        SparseMatrix::from_triplets(2, 2, {{0, 1, Rational(1)}, {1, 0, Rational(1)}});
    GroupAction act(a, z2, {SparseMatrix::identity(2), swap});
    CrossedProduct cp = crossed_product(a, z2, act);
    REQUIRE(cp.algebra.dim() == 4);

    // center: solve [x, e_i] = 0 for all i
    std::vector<Triplet> ts;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            SparseVec comm = cp.algebra.product(j, i);
            vec_axpy(comm, Rational(-1), cp.algebra.product(i, j));
            for (const auto& [k, c] : comm) ts.push_back({i * 4 + k, j, c});
        }
    }
    SparseMatrix comm_map = SparseMatrix::from_triplets(16, 4, std::move(ts));
    CHECK(kernel(comm_map).dim() == 1);

    // trace form nondegenerate: tr(L_{e_i} L_{e_j}) has rank 4
    auto left_mult = [&](std::size_t i) {
        std::vector<Triplet> lm;
        for (std::size_t j = 0; j < 4; ++j)
            for (const auto& [k, c] : cp.algebra.product(i, j)) lm.push_back({k, j, c});
        return SparseMatrix::from_triplets(4, 4, std::move(lm));
    };
    std::vector<Triplet> tf;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            SparseMatrix prod = left_mult(i) * left_mult(j);
            Rational tr(0);
            for (std::size_t k = 0; k < 4; ++k) tr += prod.at(k, k);
            if (tr != 0) tf.push_back({i, j, tr});
        }
    CHECK(rank(SparseMatrix::from_triplets(4, 4, std::move(tf))) == 4);

    // (e1 u_s)^2 = e1 e2 u_1 = 0, so the algebra has nilpotents: it is M_2(Q)
    const std::size_t e1us = cp.index(0, 1);
    CHECK(cp.algebra.product(e1us, e1us).empty());
}

TEST_CASE("graded algebra laws: weights add exactly and truncation is enforced") {
    // Q[x]/(weight > 2 truncated): basis 1, x, x^2
    std::vector<std::vector<SparseVec>> structure(3, std::vector<SparseVec>(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            structure[i][j] = i + j <= 2 ? vec_unit(i + j) : SparseVec{};
    Algebra poly({"1", "x", "x^2"}, structure, vec_unit(0), {0, 1, 2});
    CHECK(poly.graded());
    CHECK(poly.top_weight() == 2);
    CHECK(poly.multiply(vec_unit(1), vec_unit(1)) == vec_unit(2));
    CHECK(poly.multiply(vec_unit(2), vec_unit(1)).empty());

    // breaking the grading must be rejected
    auto bad = structure;
    bad[1][1] = vec_unit(1);
    CHECK_THROWS_WITH_AS(Algebra({"1", "x", "x^2"}, bad, vec_unit(0), {0, 1, 2}),
                         doctest::Contains("NotGraded"), CheckError);
}

TEST_CASE("non-automorphism action matrices are rejected with a witness") {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    Algebra a = Algebra::functions_on_points(2);
    SparseMatrix shear = SparseMatrix::from_triplets(
        2, 2, {{0, 0, Rational(1)}, {0, 1, Rational(1)}, {1, 1, Rational(1)}});
    CHECK_THROWS_WITH_AS(GroupAction(a, z2, {SparseMatrix::identity(2), shear}),
                         doctest::Contains("NotAnAutomorphism"), CheckError);
    SparseMatrix swap =
        SparseMatrix::from_triplets(2, 2, {{0, 1, Rational(1)}, {1, 0, Rational(1)}});
    CHECK_THROWS_WITH_AS(GroupAction(a, z2, {swap, SparseMatrix::identity(2)}),
                         doctest::Contains("NotAHomomorphism"), CheckError);
}
