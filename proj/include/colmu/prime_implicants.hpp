#pragma once

#include <cstdint>
#include <vector>

namespace colmu {

// One summand of  sum_{I0} r_i v(i) + sum_{I1} r_i (1 - v(i)).
struct LinearTerm {
    int var;
    std::int64_t coeff;  // nonzero
    bool barred;
};

struct Literal {
    int var;
    bool positive;  // v(var) = 1
    friend bool operator==(const Literal&, const Literal&) = default;
};

using Implicant = std::vector<Literal>;  // sorted by variable

// Prime implicants of f(v) = 1 <=> sum < k, ordered by domain (lexicographic on
// the sorted variable list) and then by value vector.
std::vector<Implicant> prime_implicants(const std::vector<LinearTerm>& terms, std::int64_t k);

}  // namespace colmu
