#include "qdot/model.hpp"

#include "action_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qdot;
using doctest::Approx;

TEST_CASE("effective potential in both conventions")
{
    const auto wkb = CentrifugalConvention::wkb_modified;
    const auto phys = CentrifugalConvention::physical_2d;
    CHECK(effective_potential(1.0, RadialProblem(5, 1, 0), wkb) == Approx(1.0));
    CHECK(effective_potential(2.0, RadialProblem(5, 2, 1), wkb) == Approx(1.25));
    CHECK(effective_potential(1.0, RadialProblem(5, 0, 0), phys) == Approx(-0.25));
    // sign of m never matters
    CHECK(effective_potential(0.7, RadialProblem(5, 2, -3)) ==
          effective_potential(0.7, RadialProblem(5, 2, 3)));
    CHECK_THROWS_AS(effective_potential(0.0, RadialProblem(1, 1, 0)), std::domain_error);
    CHECK_THROWS_AS(effective_potential(-1.0, RadialProblem(1, 1, 0)), std::domain_error);
}

TEST_CASE("effective potential decreases with rho for Z > 0")
{
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> rho(0.01, 20.0), z(0.01, 3.0);
    for (int k = 0; k < 500; ++k) {
        const RadialProblem p(25.0, z(gen), k % 4);
        double a = rho(gen), b = rho(gen);
        if (a > b)
            std::swap(a, b);
        if (a == b)
            continue;
        CHECK(effective_potential(a, p) > effective_potential(b, p));
    }
}

TEST_CASE("problem validation")
{
    CHECK_THROWS_AS(RadialProblem(0.0, 1, 0), std::domain_error);
    CHECK_THROWS_AS(RadialProblem(-2.0, 1, 0), std::domain_error);
    CHECK_THROWS_AS(RadialProblem(1.0, -0.5, 0), std::domain_error);
    CHECK_THROWS_AS(QuantumNumbers(-1, 0), std::domain_error);
    CHECK(RadialProblem(1, 1, -2).abs_m() == 2);
}

TEST_CASE("turning point")
{
    // Z/E for m = 0
    CHECK(turning_point(0.29788, RadialProblem(10, 1, 0)) == Approx(1.0 / 0.29788).epsilon(1e-14));
    CHECK(turning_point(0.29788, RadialProblem(10, 1, 0)) == Approx(3.35706).epsilon(1e-5));
    const double quad = oracle::turning_point_bisect(18.479, 2.0, 1);
    CHECK(turning_point(18.479, RadialProblem(1, 2, 1)) == Approx(quad).epsilon(1e-12));
    CHECK(turning_point(18.479, RadialProblem(1, 2, 1)) == Approx(0.292957).epsilon(1e-5));
    CHECK(turning_point(4.0, RadialProblem(1, 0, 1)) == Approx(0.5).epsilon(1e-15));
    CHECK(turning_point(4.0, RadialProblem(1, 0, 0)) == 0.0);

    SUBCASE("no allowed region")
    {
        try {
            (void)turning_point(0.5, RadialProblem(1, 1, 0));
            FAIL("expected NumericalError");
        } catch (const NumericalError& e) {
            CHECK(e.kind() == NumericalError::Kind::no_allowed_region);
        }
    }
    CHECK_THROWS_AS(turning_point(0.0, RadialProblem(1, 1, 0)), std::domain_error);
}

TEST_CASE("turning point is the positive root of Gamma^2")
{
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> e(0.05, 200.0), z(0.0, 3.0);
    for (int k = 0; k < 500; ++k) {
        const RadialProblem p(1e6, z(gen), k % 4);
        if (p.coulomb_strength == 0.0 && p.m == 0)
            continue;
        const double energy = e(gen);
        const double rho = turning_point(energy, p);
        CHECK(rho > 0.0);
        const double g2 = energy - p.coulomb_strength / rho - p.m_sq() / (rho * rho);
        CHECK(std::abs(g2) <= 1e-12 * energy);
        CHECK(energy - p.coulomb_strength / (1.01 * rho) - p.m_sq() / (1.0201 * rho * rho) > 0.0);
    }
}

TEST_CASE("scale_problem")
{
    const auto s = scale_problem(RadialProblem(1, 2, 1), 2.0);
    CHECK(s.r0 == 2.0);
    CHECK(s.coulomb_strength == 1.0);
    CHECK(s.m == 1);
    const auto same = scale_problem(RadialProblem(3.5, 1.25, -2), 1.0);
    CHECK(same.r0 == 3.5);
    CHECK(same.coulomb_strength == 1.25);
    CHECK(same.m == -2);
    CHECK_THROWS_AS(scale_problem(RadialProblem(1, 1, 0), 0.0), std::domain_error);
}
