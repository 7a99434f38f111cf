#include "colmu/lp.hpp"

#include <stdexcept>

namespace colmu {

namespace {

struct Tableau {
    // rows_[i] = coefficients over all columns, last entry is the rhs
    std::vector<std::vector<Rational>> rows;
    std::vector<std::size_t> basis;
    std::size_t cols = 0;  // number of variable columns

    void pivot(std::size_t r, std::size_t c) {
        Rational p = rows[r][c];
        for (auto& v : rows[r]) v /= p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rational f = rows[i][c];
            for (std::size_t j = 0; j <= cols; ++j) rows[i][j] -= f * rows[r][j];
        }
        basis[r] = c;
    }

    // Maximise obj.x over the current basis; returns false if unbounded.
    // `allowed` masks columns that may enter.
    bool optimise(const std::vector<Rational>& obj, const std::vector<bool>& allowed) {
        for (;;) {
            // reduced cost of column j: obj[j] - sum_i obj[basis_i] * rows[i][j]
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols && enter == cols; ++j) {
                if (!allowed[j]) continue;
                Rational rc = obj[j];
                for (std::size_t i = 0; i < rows.size(); ++i)
                    if (obj[basis[i]] != 0 && rows[i][j] != 0) rc -= obj[basis[i]] * rows[i][j];
                if (rc > 0) enter = j;
            }
            if (enter == cols) return true;
            std::size_t leave = rows.size();
            Rational best;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][enter] <= 0) continue;
                Rational ratio = rows[i][cols] / rows[i][enter];
                if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows.size()) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult lp_maximize(std::size_t n, const std::vector<LinearConstraint>& cs, const std::vector<Rational>& c) {
    std::size_t m = cs.size();
    // column layout: x (n) | slack/surplus (one per inequality) | artificial (<= m)
    std::size_t n_slack = 0;
    for (const auto& k : cs) {
        if (k.rel == Rel::LT || k.rel == Rel::GT) throw std::invalid_argument("lp_maximize: strict relation");
        if (k.rel != Rel::EQ) ++n_slack;
    }
    std::size_t cols = n + n_slack + m;
    Tableau t;
    t.cols = cols;
    t.rows.assign(m, std::vector<Rational>(cols + 1));
    t.basis.assign(m, 0);
    std::size_t slack = n, art = n + n_slack;
    std::vector<bool> is_art(cols, false);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& k = cs[i];
        bool flip = k.b < 0;
        Rational sign = flip ? -1 : 1;
        for (std::size_t j = 0; j < n && j < k.a.size(); ++j) t.rows[i][j] = sign * k.a[j];
        t.rows[i][cols] = sign * k.b;
        Rel rel = k.rel;
        if (flip && rel == Rel::LE) rel = Rel::GE;
        else if (flip && rel == Rel::GE) rel = Rel::LE;
        if (rel == Rel::LE) {
            t.rows[i][slack] = 1;
            t.basis[i] = slack++;
        } else {
            if (rel == Rel::GE) t.rows[i][slack++] = -1;
            t.rows[i][art] = 1;
            is_art[art] = true;
            t.basis[i] = art++;
        }
    }
    std::vector<bool> all(cols, true);
    for (std::size_t j = art; j < cols; ++j) all[j] = false;

    LpResult res;
    // phase 1: maximise -sum(artificials)
    std::vector<Rational> ph1(cols);
    bool any_art = false;
    for (std::size_t j = 0; j < cols; ++j)
        if (is_art[j]) {
            ph1[j] = -1;
            any_art = true;
        }
    if (any_art) {
        t.optimise(ph1, all);
        for (std::size_t i = 0; i < m; ++i)
            if (is_art[t.basis[i]] && t.rows[i][cols] != 0) return res;
        // drive remaining zero-valued artificials out of the basis where possible
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_art[t.basis[i]]) continue;
            for (std::size_t j = 0; j < cols; ++j)
                if (!is_art[j] && t.rows[i][j] != 0) {
                    t.pivot(i, j);
                    break;
                }
        }
    }
    res.feasible = true;
    std::vector<bool> no_art(cols, true);
    for (std::size_t j = 0; j < cols; ++j) no_art[j] = !is_art[j];
    std::vector<Rational> obj(cols);
    for (std::size_t j = 0; j < n && j < c.size(); ++j) obj[j] = c[j];
    if (!t.optimise(obj, no_art)) {
        res.unbounded = true;
        return res;
    }
    res.x.assign(n, 0);
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < n) res.x[t.basis[i]] = t.rows[i][cols];
    res.value = 0;
    for (std::size_t j = 0; j < n && j < c.size(); ++j) res.value += c[j] * res.x[j];
    return res;
}

std::optional<std::vector<Rational>> lp_feasible_point(std::size_t n, const std::vector<LinearConstraint>& cs) {
    bool strict = false;
    for (const auto& k : cs) strict |= (k.rel == Rel::LT || k.rel == Rel::GT);
    std::vector<LinearConstraint> work;
    std::size_t vars = strict ? n + 1 : n;  // extra slack epsilon for strict rows
    for (const auto& k : cs) {
        LinearConstraint w{k.a, k.rel, k.b};
        w.a.resize(vars);
        if (k.rel == Rel::LT) {
            w.a[n] = 1;
            w.rel = Rel::LE;
        } else if (k.rel == Rel::GT) {
            w.a[n] = -1;
            w.rel = Rel::GE;
        }
        work.push_back(std::move(w));
    }
    std::vector<Rational> obj(vars);
    if (strict) {
        LinearConstraint cap;
        cap.a.assign(vars, 0);
        cap.a[n] = 1;
        cap.rel = Rel::LE;
        cap.b = 1;
        work.push_back(cap);
        obj[n] = 1;
    }
    LpResult r = lp_maximize(vars, work, obj);
    if (!r.feasible) return std::nullopt;
    if (strict && r.value <= 0) return std::nullopt;
    r.x.resize(n);
    return r.x;
}

}  // namespace colmu
