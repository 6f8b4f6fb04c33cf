#pragma once

// Unit cost and emission formulas of the bundled test systems, written out
// as text. P is a unit's power, H its heat, Pmin its lower power limit.

#include <string>
#include <vector>

#include "expr.hpp"

namespace oracle {

struct UnitFormula {
    char kind;  // 'p' power-only, 'c' cogeneration, 'h' heat-only
    std::string cost;
    std::string emission;
    double p_min = 0;
};

struct SystemFormulas {
    std::vector<UnitFormula> units;  // power-only, then cogeneration, then heat-only
    bool loss = false;
    double b[6][6] = {};
    double b0[6] = {};
    double b00 = 0;
};

inline SystemFormulas system1_formulas() {
    SystemFormulas s;
    s.units = {
        {'p', "50*P", "0", 0},
        {'c', "2650 + 14.5*P + 0.0345*P^2 + 4.2*H + 0.03*H^2 + 0.031*P*H", "0"},
        {'c', "1250 + 36*P + 0.0435*P^2 + 0.6*H + 0.027*H^2 + 0.011*P*H", "0"},
        {'h', "23.4*H", "0"},
    };
    return s;
}

inline SystemFormulas system2_formulas() {
    SystemFormulas s;
    s.units = {
        {'p', "254.8863 + 7.6997*P + 0.00172*P^2 + 0.000115*P^3",
         "10^-4*(4.091 - 5.554*P + 6.490*P^2) + 2*10^-4*exp(0.02857*P)", 35},
        {'c', "1250 + 36*P + 0.0435*P^2 + 0.6*H + 0.027*H^2 + 0.011*P*H", "0.00165*P"},
        {'c', "2650 + 34.5*P + 0.1035*P^2 + 2.203*H + 0.025*H^2 + 0.051*P*H", "0.0022*P"},
        {'c', "1565 + 20*P + 0.072*P^2 + 2.3*H + 0.02*H^2 + 0.04*P*H", "0.0011*P"},
        {'h', "950 + 2.0109*H + 0.038*H^2", "0.0017*H"},
    };
    return s;
}

inline SystemFormulas system3_formulas() {
    SystemFormulas s;
    s.units = {
        {'p', "25 + 2*P + 0.008*P^2 + abs(100*sin(0.042*(Pmin - P)))",
         "10^-4*(4.091 - 5.554*P + 6.490*P^2) + 2*10^-4*exp(0.02857*P)", 10},
        {'p', "60 + 1.8*P + 0.003*P^2 + abs(140*sin(0.04*(Pmin - P)))",
         "10^-4*(2.543 - 6.047*P + 5.638*P^2) + 5*10^-4*exp(0.03333*P)", 20},
        {'p', "100 + 2.1*P + 0.0012*P^2 + abs(160*sin(0.038*(Pmin - P)))",
         "10^-4*(4.258 - 5.094*P + 4.586*P^2) + 1*10^-6*exp(0.08*P)", 30},
        {'p', "120 + 2*P + 0.001*P^2 + abs(180*sin(0.037*(Pmin - P)))",
         "10^-4*(5.326 - 3.550*P + 3.370*P^2) + 2*10^-3*exp(0.02*P)", 40},
        {'c', "2650 + 14.5*P + 0.0345*P^2 + 4.2*H + 0.03*H^2 + 0.031*P*H", "0.00165*P"},
        {'c', "1250 + 36*P + 0.0435*P^2 + 0.6*H + 0.027*H^2 + 0.011*P*H", "0.00165*P"},
        {'h', "950 + 2.0109*H + 0.038*H^2", "0.0018*H"},
    };
    s.loss = true;
    const double b[6][6] = {{49, 14, 15, 15, 20, 25}, {14, 45, 16, 20, 18, 19}, {15, 16, 39, 10, 12, 15},
                            {15, 20, 10, 40, 14, 11}, {20, 18, 12, 14, 35, 17}, {25, 19, 15, 11, 17, 39}};
    const double b0[6] = {-0.3908, -0.1297, 0.7047, 0.0591, 0.2161, -0.6635};
    for (int i = 0; i < 6; ++i) {
        s.b0[i] = b0[i] * 1e-3;
        for (int j = 0; j < 6; ++j) s.b[i][j] = b[i][j] * 1e-6;
    }
    s.b00 = 0.056;
    return s;
}

struct OracleValues {
    double cost = 0;
    double emission = 0;
    double loss = 0;
};

// `power` and `heat` hold one entry per unit in formula order; power is
// ignored for heat-only units and heat for power-only units.
inline OracleValues evaluate(const SystemFormulas& s, const std::vector<double>& power,
                             const std::vector<double>& heat) {
    OracleValues out;
    std::vector<double> gen;
    for (std::size_t u = 0; u < s.units.size(); ++u) {
        const UnitFormula& f = s.units[u];
        const Expr::Vars vars{{"P", power[u]}, {"H", heat[u]}, {"Pmin", f.p_min}};
        out.cost += Expr::eval(f.cost, vars);
        out.emission += Expr::eval(f.emission, vars);
        if (f.kind != 'h') gen.push_back(power[u]);
    }
    if (s.loss) {
        for (std::size_t i = 0; i < gen.size(); ++i) {
            for (std::size_t j = 0; j < gen.size(); ++j) out.loss += gen[i] * s.b[i][j] * gen[j];
            out.loss += s.b0[i] * gen[i];
        }
        out.loss += s.b00;
    }
    return out;
}

}  // namespace oracle
