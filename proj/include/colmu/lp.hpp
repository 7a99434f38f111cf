#pragma once

#include "colmu/rational.hpp"

#include <optional>
#include <vector>

namespace colmu {

enum class Rel { LE, GE, EQ, LT, GT };

struct LinearConstraint {
    std::vector<Rational> a;  // coefficients, one per variable
    Rel rel;
    Rational b;
};

struct LpResult {
    bool feasible = false;
    bool unbounded = false;
    Rational value;
    std::vector<Rational> x;
};

// Exact two-phase simplex (Bland's rule): maximise c.x subject to the constraints
// and x >= 0.  Strict relations are not accepted here.
LpResult lp_maximize(std::size_t n, const std::vector<LinearConstraint>& cs, const std::vector<Rational>& c);

// A point x >= 0 satisfying every constraint, strict ones included; nullopt if none.
std::optional<std::vector<Rational>> lp_feasible_point(std::size_t n, const std::vector<LinearConstraint>& cs);

}  // namespace colmu
