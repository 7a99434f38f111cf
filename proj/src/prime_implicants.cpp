#include "colmu/prime_implicants.hpp"

#include <algorithm>
#include <stdexcept>

namespace colmu {

// A variable fixed to its worse value never shortens an implicant, so prime
// implicants only fix variables to the value minimising their summand.
std::vector<Implicant> prime_implicants(const std::vector<LinearTerm>& terms, std::int64_t k) {
    std::size_t n = terms.size();
    if (n > 24) throw std::invalid_argument("prime_implicants: too many variables");
    std::vector<std::int64_t> gain(n);  // worst - best, always > 0
    std::vector<bool> good(n);          // value attaining the minimum
    std::int64_t worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& t = terms[i];
        if (t.coeff == 0) throw std::invalid_argument("prime_implicants: zero coefficient");
        std::int64_t at0 = t.barred ? t.coeff : 0;
        std::int64_t at1 = t.barred ? 0 : t.coeff;
        good[i] = at1 < at0;
        worst += std::max(at0, at1);
        gain[i] = std::max(at0, at1) - std::min(at0, at1);
    }
    std::vector<std::uint32_t> found;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        std::int64_t sum = worst;
        for (std::size_t i = 0; i < n; ++i)
            if (s & (1u << i)) sum -= gain[i];
        if (sum >= k) continue;
        bool prime = true;
        for (std::size_t i = 0; i < n && prime; ++i)
            if ((s & (1u << i)) && sum + gain[i] < k) prime = false;
        if (prime) found.push_back(s);
    }
    std::vector<std::pair<std::vector<int>, Implicant>> keyed;
    for (auto s : found) {
        Implicant imp;
        for (std::size_t i = 0; i < n; ++i)
            if (s & (1u << i)) imp.push_back({terms[i].var, static_cast<bool>(good[i])});
        std::sort(imp.begin(), imp.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
        std::vector<int> dom;
        for (const auto& l : imp) dom.push_back(l.var);
        keyed.emplace_back(std::move(dom), std::move(imp));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Implicant> out;
    for (auto& [d, imp] : keyed) out.push_back(std::move(imp));
    return out;
}

}  // namespace colmu
