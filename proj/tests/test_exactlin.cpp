#include <gtest/gtest.h>

#include <random>

#include <nakayama/exactlin.hpp>

using namespace nakayama;
using Q = RationalField;

namespace {

template <ExactField F>
Matrix<F> random_matrix(const F& f, std::mt19937& rng, std::size_t r, std::size_t c, int lo = -2, int hi = 2) {
    std::uniform_int_distribution<int> d(lo, hi);
    Matrix<F> m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = f.from_int(d(rng));
    return m;
}

bool is_rref(const Matrix<Q>& m) {
    const Q& f = m.field();
    std::ptrdiff_t last_pivot = -1;
    bool zero_seen = false;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::ptrdiff_t pivot = -1;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!f.is_zero(m(r, c))) {
                pivot = static_cast<std::ptrdiff_t>(c);
                break;
            }
        }
        if (pivot < 0) {
            zero_seen = true;
            continue;
        }
        if (zero_seen || pivot <= last_pivot || m(r, pivot) != 1) return false;
        for (std::size_t r2 = 0; r2 < m.rows(); ++r2) {
            if (r2 != r && !f.is_zero(m(r2, pivot))) return false;
        }
        last_pivot = pivot;
    }
    return true;
}

}  // namespace

TEST(FieldSpec, RejectsComposite) {
    EXPECT_THROW(FieldSpec::prime(4), InvalidParameter);
    EXPECT_THROW(FieldSpec::prime(1), InvalidParameter);
    EXPECT_EQ(FieldSpec::prime(3).name(), "GF(3)");
    EXPECT_EQ(FieldSpec::rational().name(), "Q");
}

TEST(PrimeField, InversesAndNegatives) {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 65521u}) {
        PrimeField f(p);
        for (std::uint32_t a = 1; a < std::min(p, 200u); ++a) {
            EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
            EXPECT_EQ(f.add(a, f.neg(a)), 0u);
        }
        EXPECT_EQ(f.from_int(-1), p - 1);
    }
    EXPECT_THROW(PrimeField(3).inv(0), std::exception);
}

TEST(Rref, IdentityOverGF2) {
    PrimeField f(2);
    auto res = rref(Matrix<PrimeField>::identity(f, 2));
    EXPECT_EQ(res.rank, 2u);
    EXPECT_EQ(res.reduced, Matrix<PrimeField>::identity(f, 2));
    EXPECT_EQ(res.pivot_columns, (std::vector<std::size_t>{0, 1}));
}

TEST(Rref, ZeroMatrix) {
    auto res = rref(Matrix<PrimeField>(PrimeField(2), 3, 2));
    EXPECT_EQ(res.rank, 0u);
    EXPECT_TRUE(res.pivot_columns.empty());
}

TEST(Rref, ProportionalRowsOverQ) {
    EXPECT_EQ(rank(Matrix<Q>::from_rows(Q{}, {{1, 2}, {2, 4}})), 1u);
}

TEST(Rref, EmptyShapes) {
    EXPECT_EQ(rank(Matrix<Q>(Q{}, 0, 3)), 0u);
    EXPECT_EQ(rank(Matrix<Q>(Q{}, 3, 0)), 0u);
    EXPECT_EQ(kernel_basis(Matrix<Q>(Q{}, 0, 3)).cols(), 3u);
}

TEST(Rref, CharacteristicMatters) {
    auto rows = {std::initializer_list<std::int64_t>{1, 1}, std::initializer_list<std::int64_t>{1, -1}};
    EXPECT_EQ(rank(Matrix<PrimeField>::from_rows(PrimeField(2), rows)), 1u);
    EXPECT_EQ(rank(Matrix<PrimeField>::from_rows(PrimeField(3), rows)), 2u);
    EXPECT_EQ(rank(Matrix<Q>::from_rows(Q{}, rows)), 2u);
}

TEST(Rref, MixedFieldsRejected) {
    auto a = Matrix<PrimeField>::identity(PrimeField(2), 2);
    auto b = Matrix<PrimeField>::identity(PrimeField(3), 2);
    EXPECT_THROW(a * b, FieldMismatch);
    EXPECT_THROW(a + b, FieldMismatch);
    EXPECT_THROW(hstack(a, b), FieldMismatch);
}

TEST(Kernel, Examples) {
    PrimeField f(2);
    EXPECT_EQ(kernel_basis(Matrix<PrimeField>::identity(f, 2)).cols(), 0u);
    EXPECT_EQ(kernel_basis(Matrix<PrimeField>(f, 2, 2)).cols(), 2u);
    auto k = kernel_basis(Matrix<PrimeField>::from_rows(f, {{1, 1}}));
    ASSERT_EQ(k.cols(), 1u);
    EXPECT_EQ(k, Matrix<PrimeField>::from_rows(f, {{1}, {1}}));
}

TEST(Solve, Examples) {
    Q q;
    auto b = Matrix<Q>::from_rows(q, {{3, -1}, {0, 7}});
    auto s = solve(Matrix<Q>::identity(q, 2), b);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->particular, b);
    EXPECT_EQ(s->null_basis.cols(), 0u);

    auto z = solve(Matrix<Q>(q, 2, 3), Matrix<Q>(q, 2, 1));
    ASSERT_TRUE(z);
    EXPECT_TRUE(z->particular.is_zero());
    EXPECT_EQ(z->null_basis.cols(), 3u);

    EXPECT_FALSE(solve(Matrix<Q>::from_rows(q, {{1}, {1}}), Matrix<Q>::from_rows(q, {{1}, {0}})));
    EXPECT_THROW(solve(Matrix<Q>(q, 2, 2), Matrix<Q>(q, 3, 1)), DimensionMismatch);
}

TEST(Inverse, RoundTrip) {
    Q q;
    auto m = Matrix<Q>::from_rows(q, {{2, 1}, {7, 4}});
    EXPECT_EQ(m * inverse(m), Matrix<Q>::identity(q, 2));
    EXPECT_THROW(inverse(Matrix<Q>::from_rows(q, {{1, 2}, {2, 4}})), std::exception);
}

// Properties on random small matrices.

TEST(Property, RrefIsIdempotentAndReduced) {
    std::mt19937 rng(7);
    Q q;
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_matrix(q, rng, rng() % 6, rng() % 6);
        auto r = rref(m).reduced;
        EXPECT_TRUE(is_rref(r));
        EXPECT_EQ(rref(r).reduced, r);
        // Row-equivalent: same row space, so stacking does not raise the rank.
        EXPECT_EQ(rank(vstack(m, r)), rank(m));
    }
}

TEST(Property, RankOfTransposeOverAllFields) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = rng() % 7, c = rng() % 7;
        auto mq = random_matrix(Q{}, rng, r, c);
        EXPECT_EQ(rank(mq), rank(mq.transpose()));
        for (std::uint32_t p : {2u, 3u}) {
            auto mp = random_matrix(PrimeField(p), rng, r, c, 0, static_cast<int>(p) - 1);
            EXPECT_EQ(rank(mp), rank(mp.transpose()));
        }
    }
}

TEST(Property, KernelIsExactAndFull) {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        PrimeField f(trial % 2 ? 2 : 5);
        auto m = random_matrix(f, rng, rng() % 6, 1 + rng() % 6, 0, 4);
        auto k = kernel_basis(m);
        EXPECT_TRUE((m * k).is_zero());
        EXPECT_EQ(rank(k), k.cols());
        EXPECT_EQ(k.cols(), m.cols() - rank(m));
    }
}

TEST(Property, SolveReproducesRightHandSide) {
    std::mt19937 rng(17);
    Q q;
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_matrix(q, rng, 1 + rng() % 5, 1 + rng() % 5);
        auto x = random_matrix(q, rng, a.cols(), 2);
        auto s = solve(a, a * x);
        ASSERT_TRUE(s);
        EXPECT_EQ(a * s->particular, a * x);
        EXPECT_TRUE((a * s->null_basis).is_zero());
        EXPECT_EQ(s->null_basis.cols(), a.cols() - rank(a));
    }
}

TEST(Property, ComplementExtendsToBasis) {
    std::mt19937 rng(19);
    PrimeField f(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = random_matrix(f, rng, 1 + rng() % 5, rng() % 5, 0, 2);
        auto extra = complement_columns(m);
        auto basis = hstack(m, Matrix<PrimeField>::identity(f, m.rows()).columns(extra));
        EXPECT_EQ(rank(basis), m.rows());
        EXPECT_EQ(extra.size(), m.rows() - rank(m));
    }
}
