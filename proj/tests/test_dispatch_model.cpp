#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "chped/dispatch_model.hpp"
#include "oracle/formulas.hpp"
#include "support.hpp"

using namespace chped;

namespace {

oracle::SystemFormulas formulas(int s) {
    return s == 1 ? oracle::system1_formulas() : s == 2 ? oracle::system2_formulas() : oracle::system3_formulas();
}

// Random dispatch inside the gene box; not necessarily balanced.
DispatchVector random_dispatch(const SystemDefinition& sys, std::mt19937_64& gen) {
    const GeneBounds b = gene_bounds(sys);
    Eigen::VectorXd g(b.lower.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        g[i] = std::uniform_real_distribution<double>(b.lower[i], b.upper[i])(gen);
    }
    return DispatchVector::from_genes(g, sys);
}

oracle::OracleValues oracle_eval(int s, const DispatchVector& x) {
    std::vector<double> power, heat;
    for (Eigen::Index i = 0; i < x.p.size(); ++i) {
        power.push_back(x.p[i]);
        heat.push_back(0);
    }
    for (Eigen::Index j = 0; j < x.o.size(); ++j) {
        power.push_back(x.o[j]);
        heat.push_back(x.h[j]);
    }
    for (Eigen::Index k = 0; k < x.t.size(); ++k) {
        power.push_back(0);
        heat.push_back(x.t[k]);
    }
    return oracle::evaluate(formulas(s), power, heat);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("dispatch_model") {
    TEST_CASE("bundled systems load with the expected shapes") {
        const auto& s1 = test::bundled(1);
        CHECK(s1.np() == 1);
        CHECK(s1.nc() == 2);
        CHECK(s1.nh() == 1);
        const auto& s2 = test::bundled(2);
        CHECK(s2.np() == 1);
        CHECK(s2.nc() == 3);
        CHECK(s2.nh() == 1);
        CHECK_FALSE(s2.loss.enabled);
        CHECK(s2.power_demand == 300);
        CHECK(s2.heat_demand == 150);
        const auto& s3 = test::bundled(3);
        CHECK(s3.np() == 4);
        CHECK(s3.nc() == 2);
        CHECK(s3.nh() == 1);
        CHECK(s3.power_demand == 600);
        CHECK(s3.heat_demand == 150);
        CHECK(s3.loss.enabled);
    }

    TEST_CASE("heat-only constant term") {
        CHECK(heat_unit_cost(test::bundled(2).heat_units[0], 0.0) == 950.0);
        const auto& sys = test::bundled(2);
        DispatchVector x = DispatchVector::zeros(sys);
        const double without_heat_unit = total_cost(x, sys) - 950.0;
        double others = 0;
        for (const auto& u : sys.power_units) others += power_unit_cost(u, 0.0);
        for (const auto& u : sys.cogen_units) others += cogen_unit_cost(u, 0.0, 0.0);
        CHECK(without_heat_unit == doctest::Approx(others));
    }

    TEST_CASE("valve-point ripple vanishes at the lower limit") {
        PowerOnlyUnit u;
        u.p_min = 10;
        u.p_max = 75;
        u.cost_a = 25;
        u.cost_b = 2;
        u.cost_d = 0.008;
        CHECK(power_unit_cost(u, 10.0) == 25 + 20 + 0.8);
        u.valve_e = 100;
        u.valve_f = 0.042;
        CHECK(power_unit_cost(u, 10.0) == 25 + 20 + 0.8);
    }

    TEST_CASE("single-unit values against the expression oracle") {
        const auto f3 = oracle::system3_formulas();
        const auto& s3 = test::bundled(3);
        const double c75 = oracle::Expr::eval(f3.units[0].cost, {{"P", 75}, {"Pmin", 10}});
        CHECK(power_unit_cost(s3.power_units[0], 75.0) == doctest::Approx(c75).epsilon(1e-12));
        CHECK(c75 == doctest::Approx(25 + 150 + 0.008 * 75 * 75 + std::abs(100 * std::sin(0.042 * (10 - 75)))));
        const double e50 = oracle::Expr::eval(f3.units[0].emission, {{"P", 50}});
        CHECK(power_unit_emission(s3.power_units[0], 50.0) == doctest::Approx(e50).epsilon(1e-12));

        const auto& s2 = test::bundled(2);
        DispatchVector x = DispatchVector::zeros(s2);
        const double base = total_emission(x, s2);
        x.o[0] = 100;
        CHECK(total_emission(x, s2) - base == doctest::Approx(0.165).epsilon(1e-12));
        x.o[0] = 0;
        CHECK(total_emission(x, s2) == base);  // linear through origin
    }

    TEST_CASE("1000 random dispatches per system match the expression oracle") {
        std::mt19937_64 gen(2024);
        for (int s = 1; s <= 3; ++s) {
            const auto& sys = test::bundled(s);
            double worst = 0;
            for (int i = 0; i < 1000; ++i) {
                const DispatchVector x = random_dispatch(sys, gen);
                const auto want = oracle_eval(s, x);
                worst = std::max({worst, rel(total_cost(x, sys), want.cost), rel(total_emission(x, sys), want.emission),
                                  rel(transmission_loss(x, sys), want.loss)});
            }
            CHECK(worst < 1e-10);
        }
    }

    TEST_CASE("transmission loss") {
        const auto& s2 = test::bundled(2);
        std::mt19937_64 gen(5);
        CHECK(transmission_loss(random_dispatch(s2, gen), s2) == 0.0);
        const auto& s3 = test::bundled(3);
        CHECK(transmission_loss(DispatchVector::zeros(s3), s3) == doctest::Approx(0.056).epsilon(1e-14));

        // Heavy-loading dispatch: value from the direct double sum.
        const DispatchVector x = test::dispatch(s3, {64.5, 95.8, 95.5, 122}, {188.6, 40.2}, {0, 0}, {0});
        const double want = oracle_eval(3, x).loss;
        CHECK(transmission_loss(x, s3) == doctest::Approx(want).epsilon(1e-12));
        CHECK(want == doctest::Approx(7.5404).epsilon(1e-4));
    }

    TEST_CASE("loss matrix is positive definite and the loss non-negative") {
        const auto& s3 = test::bundled(3);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s3.loss.b);
        CHECK(es.eigenvalues().minCoeff() > 0);
        std::mt19937_64 gen(9);
        for (int i = 0; i < 1000; ++i) CHECK(transmission_loss(random_dispatch(s3, gen), s3) >= 0);
    }

    TEST_CASE("loss gradient matches finite differences") {
        const auto& s3 = test::bundled(3);
        std::mt19937_64 gen(12);
        const DispatchVector x = random_dispatch(s3, gen);
        const Eigen::VectorXd grad = loss_gradient(x.generation(), s3.loss);
        for (Eigen::Index i = 0; i < grad.size(); ++i) {
            DispatchVector up = x, dn = x;
            double& u = i < x.p.size() ? up.p[i] : up.o[i - x.p.size()];
            double& d = i < x.p.size() ? dn.p[i] : dn.o[i - x.p.size()];
            u += 1e-4;
            d -= 1e-4;
            CHECK(grad[i] == doctest::Approx((transmission_loss(up, s3) - transmission_loss(dn, s3)) / 2e-4).epsilon(1e-7));
        }
    }

    TEST_CASE("balance residuals") {
        const auto& s1 = test::bundled(1);
        const auto [pr, hr] = balance_residuals(test::dispatch(s1, {0}, {160, 40}, {40, 75}, {0}), s1);
        CHECK(pr == 0);
        CHECK(hr == 0);
        CHECK(balance_residuals(DispatchVector::zeros(s1), s1).first == -200);

        // Setpoints printed to one decimal: residuals are the rounding sums.
        const auto& s2 = test::bundled(2);
        const auto [p2, h2] = balance_residuals(test::dispatch(s2, {132.8}, {43.8, 36.3, 87.5}, {59.2, 28.4, 3.7}, {59.8}), s2);
        CHECK(p2 == doctest::Approx(0.4).epsilon(1e-9));
        CHECK(h2 == doctest::Approx(1.1).epsilon(1e-9));
    }

    TEST_CASE("capacity violation") {
        const auto& s2 = test::bundled(2);
        DispatchVector x = test::dispatch(s2, {35}, {44, 20, 35}, {0, 0, 0}, {0});
        CHECK(capacity_violation(x, s2) == 0);
        x.p[0] = 140;
        CHECK(capacity_violation(x, s2) == doctest::Approx(5));
        x.p[0] = 100;
        x.o[1] = 30;  // strictly inside its region
        x.h[1] = 20;
        CHECK(s2.cogen_units[1].region.contains({30, 20}));
        CHECK(capacity_violation(x, s2) == 0);
        x.o[1] = 70;  // 10 MW right of the (60, 0)-(45, 55) edge's bottom vertex
        x.h[1] = 0;
        CHECK(capacity_violation(x, s2) == doctest::Approx(10));
        x.o[1] = 30;
        x.t[0] = 65;
        CHECK(capacity_violation(x, s2) == doctest::Approx(5));
    }

    TEST_CASE("every vertex of every region has zero violation") {
        for (int s = 1; s <= 3; ++s) {
            const auto& sys = test::bundled(s);
            DispatchVector x = DispatchVector::zeros(sys);
            for (std::size_t i = 0; i < sys.np(); ++i) x.p[i] = sys.power_units[i].p_min;
            for (std::size_t k = 0; k < sys.nh(); ++k) x.t[k] = sys.heat_units[k].h_min;
            for (std::size_t j = 0; j < sys.nc(); ++j) {
                for (const auto& part : sys.cogen_units[j].region.parts()) {
                    for (const auto& v : part.vertices()) {
                        DispatchVector y = x;
                        for (std::size_t jj = 0; jj < sys.nc(); ++jj) {
                            const auto& v0 = sys.cogen_units[jj].region.parts()[0].vertices()[0];
                            y.o[jj] = v0.x();
                            y.h[jj] = v0.y();
                        }
                        y.o[j] = v.x();
                        y.h[j] = v.y();
                        CHECK(capacity_violation(y, sys) == 0);
                    }
                }
            }
        }
    }

    TEST_CASE("dimension mismatch is a structural error") {
        const auto& s2 = test::bundled(2);
        const DispatchVector bad = DispatchVector::zeros(test::bundled(3));
        CHECK_THROWS_AS(total_cost(bad, s2), StructuralError);
        CHECK_THROWS_AS(total_emission(bad, s2), StructuralError);
        CHECK_THROWS_AS(transmission_loss(bad, s2), StructuralError);
        CHECK_THROWS_AS(balance_residuals(bad, s2), StructuralError);
        CHECK_THROWS_AS(capacity_violation(bad, s2), StructuralError);
        CHECK_THROWS_AS(DispatchVector::from_genes(Eigen::VectorXd::Zero(3), s2), StructuralError);
    }

    TEST_CASE("cost is Lipschitz at small steps") {
        std::mt19937_64 gen(21);
        for (int s = 1; s <= 3; ++s) {
            const auto& sys = test::bundled(s);
            for (int i = 0; i < 200; ++i) {
                const DispatchVector x = random_dispatch(sys, gen);
                Eigen::VectorXd g = x.genes();
                for (Eigen::Index k = 0; k < g.size(); ++k) {
                    Eigen::VectorXd h = g;
                    h[k] += 1e-6;
                    const double dc = std::abs(total_cost(DispatchVector::from_genes(h, sys), sys) - total_cost(x, sys));
                    // Largest slope of any bundled unit stays well under 1e3 $/MW.
                    CHECK(dc <= 1e3 * 1e-6);
                }
            }
        }
    }

    TEST_CASE("cost and emission grow with linear coefficients") {
        std::mt19937_64 gen(31);
        for (int s = 2; s <= 3; ++s) {
            SystemDefinition sys = test::bundled(s);
            const DispatchVector x = random_dispatch(sys, gen);
            const double c0 = total_cost(x, sys), e0 = total_emission(x, sys);
            sys.power_units[0].cost_b += 1;
            sys.cogen_units[0].cost_beta += 1;
            sys.heat_units[0].cost_eta += 1;
            sys.power_units[0].em_kappa += 1e-3;
            sys.cogen_units[0].em_tau += 1e-3;
            sys.heat_units[0].em_rho += 1e-3;
            CHECK(total_cost(x, sys) >= c0);
            CHECK(total_emission(x, sys) >= e0);
        }
    }

    TEST_CASE("CO2 coefficients add linearly") {
        SystemDefinition sys = test::bundled(2);
        const DispatchVector x = test::dispatch(sys, {100}, {50, 30, 60}, {30, 20, 10}, {20});
        const double base = total_emission(x, sys);
        sys.power_units[0].em_co2_theta = 0.01;
        sys.cogen_units[1].em_co2_psi = 0.02;
        sys.heat_units[0].em_co2_varpi = 0.03;
        CHECK(total_emission(x, sys) == doctest::Approx(base + 1.0 + 0.6 + 0.6));
    }

    TEST_CASE("scalar templates agree across precisions") {
        const auto& s3 = test::bundled(3);
        std::mt19937_64 gen(41);
        const DispatchVector x = random_dispatch(s3, gen);
        const auto xl = x.cast<long double>();
        CHECK(static_cast<double>(total_cost(xl, s3)) == doctest::Approx(total_cost(x, s3)).epsilon(1e-12));
        CHECK(static_cast<double>(transmission_loss(xl, s3)) == doctest::Approx(transmission_loss(x, s3)).epsilon(1e-12));
        const auto xf = x.cast<float>();
        CHECK(static_cast<double>(total_emission(xf, s3)) == doctest::Approx(total_emission(x, s3)).epsilon(1e-4));
    }

    TEST_CASE("evaluate bundles every quantity") {
        const auto& s3 = test::bundled(3);
        std::mt19937_64 gen(51);
        const DispatchVector x = random_dispatch(s3, gen);
        const Evaluation ev = evaluate(x, s3);
        CHECK(ev.cost == total_cost(x, s3));
        CHECK(ev.emission == total_emission(x, s3));
        CHECK(ev.loss == transmission_loss(x, s3));
        CHECK(ev.power_residual == balance_residuals(x, s3).first);
        CHECK(ev.heat_residual == balance_residuals(x, s3).second);
        CHECK(ev.capacity_violation == capacity_violation(x, s3));
    }
}
