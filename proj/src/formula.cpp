#include "colmu/formula.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace colmu {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

const Formula& null_formula() {
    static const Formula f;
    return f;
}

int ceil_log2(const BigInt& v) {
    if (v <= 1) return 0;
    BigInt x = v - 1;
    int bits = 0;
    while (x > 0) {
        x >>= 1;
        ++bits;
    }
    return bits;
}

}  // namespace

std::string Signature::name() const {
    switch (logic) {
        case Logic::Kripke: return "kripke";
        case Logic::Graded: return "graded";
        case Logic::Probabilistic: return "probabilistic";
        case Logic::Coalition: return "coalition:" + std::to_string(agents);
        case Logic::Monotone: return "monotone";
    }
    return "?";
}

Signature parse_signature(const std::string& text) {
    if (text == "k" || text == "kripke") return Signature::kripke();
    if (text == "graded" || text == "g") return Signature::graded();
    if (text == "prob" || text == "probabilistic" || text == "p") return Signature::probabilistic();
    if (text == "monotone" || text == "m") return Signature::monotone();
    if (text.rfind("coalition:", 0) == 0) {
        std::string n = text.substr(10);
        if (n.empty() || n.size() > 2 || !std::all_of(n.begin(), n.end(), ::isdigit))
            throw std::invalid_argument("bad agent count in '" + text + "'");
        int k = std::stoi(n);
        if (k < 1 || k > 16) throw std::invalid_argument("agent count must be in 1..16");
        return Signature::coalition(k);
    }
    throw std::invalid_argument("unknown logic '" + text + "'");
}

std::string coalition_to_string(std::uint32_t c) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i) {
        if (c & (1u << i)) {
            if (!first) s += ",";
            s += std::to_string(i + 1);
            first = false;
        }
    }
    return s + "}";
}

std::string Modality::to_string() const {
    switch (logic) {
        case Logic::Kripke:
        case Logic::Monotone: return dual ? "dia" : "box";
        case Logic::Graded: return dual ? "[" + std::to_string(grade) + "]" : "<" + std::to_string(grade) + ">";
        case Logic::Probabilistic: {
            std::string p = format_rational(prob);
            return dual ? "[" + p + "]" : "<" + p + ">";
        }
        case Logic::Coalition: {
            std::string c = coalition_to_string(coalition);
            return dual ? "<" + c + ">" : "[" + c + "]";
        }
    }
    return "?";
}

int Modality::compare(const Modality& o) const {
    if (logic != o.logic) return logic < o.logic ? -1 : 1;
    if (dual != o.dual) return dual ? 1 : -1;
    if (grade != o.grade) return grade < o.grade ? -1 : 1;
    if (prob != o.prob) return prob < o.prob ? -1 : 1;
    if (coalition != o.coalition) return coalition < o.coalition ? -1 : 1;
    return 0;
}

std::size_t Modality::hash() const {
    std::size_t h = static_cast<std::size_t>(logic) * 31 + dual;
    h = mix(h, std::hash<std::int64_t>{}(grade));
    h = mix(h, std::hash<std::string>{}(format_rational(prob)));
    h = mix(h, coalition);
    return h;
}

// ---------------------------------------------------------------------------
// construction

Formula Formula::var(std::string name, bool negated) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::Var;
    n->negated = negated;
    n->name = std::move(name);
    n->depth = 1;
    n->hash = mix(mix(1, std::hash<std::string>{}(n->name)), negated);
    return Formula(std::move(n));
}

static std::shared_ptr<FormulaNode> binary(Kind k, const Formula& a, const Formula& b) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = k;
    n->a = a;
    n->b = b;
    n->depth = 1 + std::max(a.depth(), b.depth());
    n->hash = mix(mix(static_cast<std::size_t>(k) + 7, a.hash()), b.hash());
    return n;
}

Formula Formula::disj(Formula a, Formula b) { return Formula(binary(Kind::Or, a, b)); }
Formula Formula::conj(Formula a, Formula b) { return Formula(binary(Kind::And, a, b)); }

Formula Formula::modal(Modality m, Formula a) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::Modal;
    n->modality = std::move(m);
    n->a = std::move(a);
    n->depth = 1 + n->a.depth();
    n->hash = mix(mix(11, n->modality.hash()), n->a.hash());
    return Formula(std::move(n));
}

Formula Formula::fix(Kind k, std::string x, Formula body) {
    if (k != Kind::Mu && k != Kind::Nu) throw std::logic_error("fix: not a binder kind");
    auto n = std::make_shared<FormulaNode>();
    n->kind = k;
    n->name = std::move(x);
    n->a = std::move(body);
    n->depth = 1 + n->a.depth();
    n->hash = mix(mix(static_cast<std::size_t>(k) + 13, std::hash<std::string>{}(n->name)), n->a.hash());
    return Formula(std::move(n));
}

Formula Formula::mu(std::string x, Formula body) { return fix(Kind::Mu, std::move(x), std::move(body)); }
Formula Formula::nu(std::string x, Formula body) { return fix(Kind::Nu, std::move(x), std::move(body)); }

Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
bool Formula::negated() const { return node_->negated; }
const Formula& Formula::left() const { return node_ ? node_->a : null_formula(); }
const Formula& Formula::right() const { return node_ ? node_->b : null_formula(); }
const Modality& Formula::modality() const { return node_->modality; }
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }
int Formula::depth() const { return node_ ? node_->depth : 0; }

int compare(const Formula& a, const Formula& b) {
    const FormulaNode* x = a.get();
    const FormulaNode* y = b.get();
    if (x == y) return 0;
    if (!x) return -1;
    if (!y) return 1;
    if (x->depth != y->depth) return x->depth < y->depth ? -1 : 1;
    if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
    switch (x->kind) {
        case Kind::Var:
            if (x->name != y->name) return x->name < y->name ? -1 : 1;
            if (x->negated != y->negated) return x->negated ? 1 : -1;
            return 0;
        case Kind::Modal:
            if (int c = x->modality.compare(y->modality)) return c;
            return compare(x->a, y->a);
        case Kind::Mu:
        case Kind::Nu:
            if (x->name != y->name) return x->name < y->name ? -1 : 1;
            return compare(x->a, y->a);
        case Kind::Or:
        case Kind::And:
            if (int c = compare(x->a, y->a)) return c;
            return compare(x->b, y->b);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sequents

Sequent::Sequent(std::initializer_list<Formula> fs) : Sequent(std::vector<Formula>(fs)) {}

Sequent::Sequent(std::vector<Formula> fs) : items_(std::move(fs)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool Sequent::insert(const Formula& f) {
    auto it = std::lower_bound(items_.begin(), items_.end(), f);
    if (it != items_.end() && *it == f) return false;
    items_.insert(it, f);
    return true;
}

bool Sequent::contains(const Formula& f) const {
    return std::binary_search(items_.begin(), items_.end(), f);
}

std::size_t Sequent::hash() const {
    std::size_t h = items_.size();
    for (const auto& f : items_) h = mix(h, f.hash());
    return h;
}

// ---------------------------------------------------------------------------
// negation and substitution

namespace {

Formula negate_rec(const Formula& a, const std::set<std::string>& bound) {
    switch (a.kind()) {
        case Kind::Var:
            if (bound.count(a.name())) return a;
            return Formula::var(a.name(), !a.negated());
        case Kind::Or: return Formula::conj(negate_rec(a.left(), bound), negate_rec(a.right(), bound));
        case Kind::And: return Formula::disj(negate_rec(a.left(), bound), negate_rec(a.right(), bound));
        case Kind::Modal: return Formula::modal(a.modality().dualized(), negate_rec(a.arg(), bound));
        case Kind::Mu:
        case Kind::Nu: {
            std::set<std::string> inner = bound;
            inner.insert(a.name());
            return Formula::fix(a.kind() == Kind::Mu ? Kind::Nu : Kind::Mu, a.name(), negate_rec(a.body(), inner));
        }
    }
    return a;
}

}  // namespace

Formula negate(const Formula& a) { return negate_rec(a, {}); }

Formula substitute(const Formula& a, const std::string& var, const Formula& replacement) {
    switch (a.kind()) {
        case Kind::Var:
            return (a.name() == var && !a.negated()) ? replacement : a;
        case Kind::Or:
        case Kind::And: {
            Formula l = substitute(a.left(), var, replacement);
            Formula r = substitute(a.right(), var, replacement);
            if (l.get() == a.left().get() && r.get() == a.right().get()) return a;
            return a.kind() == Kind::Or ? Formula::disj(l, r) : Formula::conj(l, r);
        }
        case Kind::Modal: {
            Formula b = substitute(a.arg(), var, replacement);
            if (b.get() == a.arg().get()) return a;
            return Formula::modal(a.modality(), b);
        }
        case Kind::Mu:
        case Kind::Nu: {
            if (a.name() == var) return a;
            Formula b = substitute(a.body(), var, replacement);
            if (b.get() == a.body().get()) return a;
            return Formula::fix(a.kind(), a.name(), b);
        }
    }
    return a;
}

Formula unfold(const Formula& f) {
    if (!f.is_fixpoint()) throw std::logic_error("unfold: not a fixpoint formula");
    return substitute(f.body(), f.name(), f);
}

// ---------------------------------------------------------------------------
// printing

namespace {

void print(std::ostream& os, const Formula& f) {
    switch (f.kind()) {
        case Kind::Var:
            if (f.negated()) os << '~';
            os << f.name();
            return;
        case Kind::Or:
        case Kind::And:
            os << '(';
            print(os, f.left());
            os << (f.kind() == Kind::Or ? " | " : " & ");
            print(os, f.right());
            os << ')';
            return;
        case Kind::Modal:
            os << f.modality().to_string() << ' ';
            print(os, f.arg());
            return;
        case Kind::Mu:
        case Kind::Nu:
            os << '(' << (f.kind() == Kind::Mu ? "mu " : "nu ") << f.name() << ". ";
            print(os, f.body());
            os << ')';
            return;
    }
}

}  // namespace

std::string to_string(const Formula& f) {
    std::ostringstream os;
    print(os, f);
    return os.str();
}

std::string to_string(const Sequent& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += "; ";
        out += to_string(s[i]);
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// variables, size

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f.kind()) {
        case Kind::Var:
            if (!bound.count(f.name())) out.insert(f.name());
            return;
        case Kind::Or:
        case Kind::And:
            collect_free(f.left(), bound, out);
            collect_free(f.right(), bound, out);
            return;
        case Kind::Modal: collect_free(f.arg(), bound, out); return;
        case Kind::Mu:
        case Kind::Nu: {
            bool fresh = bound.insert(f.name()).second;
            collect_free(f.body(), bound, out);
            if (fresh) bound.erase(f.name());
            return;
        }
    }
}

std::int64_t modality_cost(const Modality& m) {
    switch (m.logic) {
        case Logic::Kripke:
        case Logic::Monotone: return 0;
        case Logic::Coalition: return 1;
        case Logic::Graded: return ceil_log2(BigInt(m.grade));
        case Logic::Probabilistic:
            return ceil_log2(numerator(m.prob)) + ceil_log2(denominator(m.prob)) + 1;
    }
    return 0;
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::set<std::string> free_variables(const Sequent& s) {
    std::set<std::string> out;
    for (const auto& f : s) {
        auto v = free_variables(f);
        out.insert(v.begin(), v.end());
    }
    return out;
}

std::int64_t size(const Formula& f) {
    switch (f.kind()) {
        case Kind::Var: return 1;
        case Kind::Or:
        case Kind::And: return 1 + size(f.left()) + size(f.right());
        case Kind::Modal: return 1 + modality_cost(f.modality()) + size(f.arg());
        case Kind::Mu:
        case Kind::Nu: return 1 + size(f.body());
    }
    return 0;
}

std::int64_t size(const Sequent& s) {
    std::int64_t n = 0;
    for (const auto& f : s) n += size(f);
    return n;
}

// ---------------------------------------------------------------------------
// cleanness and guardedness

namespace {

void collect_binders(const Formula& f, std::map<std::string, int>& count) {
    switch (f.kind()) {
        case Kind::Var: return;
        case Kind::Or:
        case Kind::And:
            collect_binders(f.left(), count);
            collect_binders(f.right(), count);
            return;
        case Kind::Modal: collect_binders(f.arg(), count); return;
        case Kind::Mu:
        case Kind::Nu:
            ++count[f.name()];
            collect_binders(f.body(), count);
            return;
    }
}

// First problem with occurrences of x inside a binder body, if any.
std::optional<std::string> check_occurrences(const Formula& f, const std::string& x, bool guarded) {
    switch (f.kind()) {
        case Kind::Var:
            if (f.name() != x) return std::nullopt;
            if (f.negated()) return "bound variable " + x + " occurs negated in its binder body";
            if (!guarded) return "variable " + x + " is not guarded (occurs outside every modality in its binder body)";
            return std::nullopt;
        case Kind::Or:
        case Kind::And:
            if (auto e = check_occurrences(f.left(), x, guarded)) return e;
            return check_occurrences(f.right(), x, guarded);
        case Kind::Modal: return check_occurrences(f.arg(), x, true);
        case Kind::Mu:
        case Kind::Nu:
            if (f.name() == x) return std::nullopt;
            return check_occurrences(f.body(), x, guarded);
    }
    return std::nullopt;
}

std::optional<std::string> check_guarded(const Formula& f) {
    switch (f.kind()) {
        case Kind::Var: return std::nullopt;
        case Kind::Or:
        case Kind::And:
            if (auto e = check_guarded(f.left())) return e;
            return check_guarded(f.right());
        case Kind::Modal: return check_guarded(f.arg());
        case Kind::Mu:
        case Kind::Nu:
            if (auto e = check_occurrences(f.body(), f.name(), false)) return e;
            return check_guarded(f.body());
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> check_clean_guarded(const Sequent& s) {
    std::map<std::string, int> binders;
    for (const auto& f : s) collect_binders(f, binders);
    auto free = free_variables(s);
    for (const auto& [x, n] : binders) {
        if (n > 1) return "not clean: variable " + x + " is bound more than once";
        if (free.count(x)) return "not clean: variable " + x + " occurs both free and bound";
    }
    for (const auto& f : s)
        if (auto e = check_guarded(f)) return e;
    return std::nullopt;
}

namespace {

struct Renamer {
    std::set<std::string> used;   // every name in sight, free or bound
    std::set<std::string> taken;  // binder names already assigned

    std::string fresh(const std::string& base) {
        for (int i = 1;; ++i) {
            std::string c = base + "_" + std::to_string(i);
            if (!used.count(c)) {
                used.insert(c);
                return c;
            }
        }
    }

    Formula run(const Formula& f, const std::map<std::string, std::string>& env, const std::set<std::string>& free) {
        switch (f.kind()) {
            case Kind::Var: {
                auto it = env.find(f.name());
                if (it == env.end()) return f;
                return Formula::var(it->second, f.negated());
            }
            case Kind::Or:
            case Kind::And: {
                Formula l = run(f.left(), env, free), r = run(f.right(), env, free);
                return f.kind() == Kind::Or ? Formula::disj(l, r) : Formula::conj(l, r);
            }
            case Kind::Modal: return Formula::modal(f.modality(), run(f.arg(), env, free));
            case Kind::Mu:
            case Kind::Nu: {
                std::string x = f.name();
                if (taken.count(x) || free.count(x)) x = fresh(f.name());
                taken.insert(x);
                used.insert(x);
                auto inner = env;
                inner[f.name()] = x;
                return Formula::fix(f.kind(), x, run(f.body(), inner, free));
            }
        }
        return f;
    }
};

void collect_names(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
        case Kind::Var: out.insert(f.name()); return;
        case Kind::Or:
        case Kind::And:
            collect_names(f.left(), out);
            collect_names(f.right(), out);
            return;
        case Kind::Modal: collect_names(f.arg(), out); return;
        case Kind::Mu:
        case Kind::Nu:
            out.insert(f.name());
            collect_names(f.body(), out);
            return;
    }
}

}  // namespace

Sequent make_clean(const Sequent& s) {
    Renamer r;
    for (const auto& f : s) collect_names(f, r.used);
    auto free = free_variables(s);
    std::vector<Formula> out;
    for (const auto& f : s.items()) out.push_back(r.run(f, {}, free));
    return Sequent(std::move(out));
}

Formula make_clean(const Formula& f) {
    Renamer r;
    collect_names(f, r.used);
    return r.run(f, {}, free_variables(f));
}

}  // namespace colmu
