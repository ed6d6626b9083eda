#include "orthant/core.hpp"
#include "orthant/error.hpp"
#include "orthant/scenario.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace orthant;

namespace {

ErrorCode code_of(const std::vector<std::vector<double>>& rows) {
    try {
        (void)ReflectionMatrix::validate(rows);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected validation failure");
    return ErrorCode::ConfigParse;
}

}  // namespace

TEST_CASE("validate_matrix accepts the symmetric two-dimensional example") {
    const auto q = ReflectionMatrix::validate({{0.0, 0.5}, {0.5, 0.0}});
    CHECK(q.dim() == 2);
    CHECK(q.row_norm() == 0.5);
    CHECK(q.col_norm() == 0.5);
}

TEST_CASE("validate_matrix accepts the one-dimensional normal reflection") {
    const auto q = ReflectionMatrix::validate({{0.0}});
    CHECK(q.row_norm() == 0.0);
    CHECK(q.col_norm() == 0.0);
}

TEST_CASE("validate_matrix rejects bad input") {
    CHECK(code_of({{0.0, 1.2}, {0.0, 0.0}}) == ErrorCode::NormNotSubunit);
    CHECK(code_of({{0.0, -0.1}, {0.2, 0.0}}) == ErrorCode::NegativeEntry);
    CHECK(code_of({{0.1, 0.2}, {0.2, 0.0}}) == ErrorCode::NonzeroDiagonal);
    CHECK(code_of({{0.0, 0.2}, {0.2}}) == ErrorCode::NotSquare);
    CHECK(code_of({}) == ErrorCode::NotSquare);
    CHECK(code_of({{0.0, std::numeric_limits<double>::quiet_NaN()}, {0.0, 0.0}}) == ErrorCode::NonFinite);
    // rows fine, column 0 sums to 1.05
    CHECK(code_of({{0.0, 0.1, 0.0}, {0.55, 0.0, 0.0}, {0.5, 0.0, 0.0}}) == ErrorCode::NormNotSubunit);
}

TEST_CASE("NormNotSubunit names the offending norm") {
    try {
        (void)ReflectionMatrix::validate({{0.0, 0.1, 0.0}, {0.55, 0.0, 0.0}, {0.5, 0.0, 0.0}});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("column norm") != std::string::npos);
    }
}

TEST_CASE("positive_part examples") {
    CHECK(positive_part(Vec{-1.0, -1.0}) == Vec{0.0, 0.0});
    CHECK(positive_part(Vec{2.0, 0.0}) == Vec{2.0, 0.0});
    CHECK(positive_part(Vec{-0.5, 3.0}) == Vec{0.0, 3.0});
}

TEST_CASE("sup_norm examples") {
    CHECK(sup_norm(Vec{0.0, 0.0}) == 0.0);
    CHECK(sup_norm(Vec{-3.0, 2.0}) == 3.0);
    CHECK(sup_norm(Vec{1.0, 1.0}) == 1.0);
}

TEST_CASE("apply_transpose and apply_reflection") {
    const auto q = ReflectionMatrix::validate({{0.0, 0.2, 0.1}, {0.3, 0.0, 0.0}, {0.0, 0.4, 0.0}});
    const Vec u{1.0, 2.0, 3.0};
    // (Q^T u)_j = sum_i q_ij u_i
    const Vec qt = q.apply_transpose(u);
    CHECK(qt[0] == doctest::Approx(0.6));
    CHECK(qt[1] == doctest::Approx(0.2 + 1.2));
    CHECK(qt[2] == doctest::Approx(0.1));
    const Vec r = q.apply_reflection(u);
    for (std::size_t j = 0; j < 3; ++j) CHECK(r[j] == doctest::Approx(u[j] - qt[j]));
}

TEST_CASE("positive part and matrix norm properties on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    std::uniform_real_distribution<double> norm(0.0, 0.95);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t d = dim(rng);
        const Vec z = testing::random_point(rng, d);
        const Vec w = testing::random_point(rng, d);
        CHECK(positive_part(positive_part(z)) == positive_part(z));
        CHECK(sup_distance(positive_part(z), positive_part(w)) <= sup_distance(z, w));

        const auto q = random_reflection_matrix(rng, d, norm(rng));
        CHECK(q.row_norm() < 1.0);
        CHECK(q.col_norm() < 1.0);
        CHECK(sup_norm(q.apply_transpose(z)) <= q.col_norm() * sup_norm(z) * (1.0 + 1e-15));
    }
}
