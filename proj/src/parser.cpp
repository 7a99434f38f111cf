#include "colmu/parser.hpp"

#include <cctype>

namespace colmu {

namespace {

class Parser {
public:
    Parser(const std::string& text, const Signature& sig) : s_(text), sig_(sig) {}

    Formula run() {
        Formula f = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    const std::string& s_;
    const Signature& sig_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    std::string peek_word() {
        skip();
        std::size_t p = pos_;
        if (p >= s_.size() || !ident_start(s_[p])) return {};
        while (p < s_.size() && ident_char(s_[p])) ++p;
        return s_.substr(pos_, p - pos_);
    }
    std::string ident() {
        std::string w = peek_word();
        if (w.empty()) fail("expected identifier");
        if (w == "mu" || w == "nu" || w == "box" || w == "dia") fail("keyword '" + w + "' used as variable");
        pos_ += w.size();
        return w;
    }

    Formula expr() {
        std::string w = peek_word();
        if (w == "mu" || w == "nu") return binder(true);
        Formula f = conjunction();
        while (peek() == '|') {
            ++pos_;
            f = Formula::disj(f, conjunction_or_binder());
        }
        return f;
    }

    Formula conjunction_or_binder() {
        std::string w = peek_word();
        if (w == "mu" || w == "nu") return binder(true);
        return conjunction();
    }

    Formula conjunction() {
        Formula f = unary();
        while (peek() == '&') {
            ++pos_;
            f = Formula::conj(f, unary());
        }
        return f;
    }

    Formula binder(bool maximal) {
        std::string w = peek_word();
        pos_ += w.size();
        std::string x = ident();
        expect('.');
        Formula body = maximal ? expr() : operand();
        return Formula::fix(w == "mu" ? Kind::Mu : Kind::Nu, x, body);
    }

    // Operand of a prefix operator.
    Formula operand() {
        std::string w = peek_word();
        if (w == "mu" || w == "nu") return binder(false);
        return unary();
    }

    Formula unary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Formula f = expr();
            expect(')');
            return f;
        }
        if (c == '!') {
            ++pos_;
            return negate(operand());
        }
        if (c == '~') {
            ++pos_;
            return Formula::var(ident(), true);
        }
        if (c == '<' || c == '[') {
            Modality m = bracket_modality();
            return Formula::modal(m, operand());
        }
        std::string w = peek_word();
        if (w == "box" || w == "dia") {
            if (sig_.logic != Logic::Kripke && sig_.logic != Logic::Monotone)
                fail("modality '" + w + "' not available in " + sig_.name());
            pos_ += w.size();
            return Formula::modal(w == "box" ? Modality::box(sig_.logic) : Modality::dia(sig_.logic), operand());
        }
        if (w == "mu" || w == "nu") return binder(true);
        if (w.empty()) fail(c ? std::string("unexpected '") + c + "'" : "unexpected end of input");
        return Formula::var(ident(), false);
    }

    Modality bracket_modality() {
        std::size_t start = pos_;
        char open = s_[pos_++];
        char close = open == '<' ? '>' : ']';
        std::size_t end = s_.find(close, pos_);
        if (end == std::string::npos) fail(std::string("unterminated modality, expected '") + close + "'");
        std::string body = s_.substr(pos_, end - pos_);
        std::string t;
        for (char ch : body)
            if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
        bool angle = open == '<';
        switch (sig_.logic) {
            case Logic::Graded: {
                if (t.empty() || t.size() > 18 || !std::all_of(t.begin(), t.end(), ::isdigit)) {
                    pos_ = start;
                    fail("graded modality expects a natural number index");
                }
                pos_ = end + 1;
                std::int64_t n = std::stoll(t);
                return angle ? Modality::more_than(n) : Modality::graded_box(n);
            }
            case Logic::Probabilistic: {
                Rational q;
                try {
                    q = parse_rational(t);
                } catch (const std::exception& e) {
                    pos_ = start;
                    fail(std::string("probabilistic index: ") + e.what());
                }
                if (q < 0 || q > 1) {
                    pos_ = start;
                    fail("probabilistic index " + t + " outside [0,1]");
                }
                pos_ = end + 1;
                return angle ? Modality::at_least(q) : Modality::prob_box(q);
            }
            case Logic::Coalition: {
                if (t.size() < 2 || t.front() != '{' || t.back() != '}') {
                    pos_ = start;
                    fail("coalition modality expects an agent set {i,j,...}");
                }
                std::uint32_t c = 0;
                std::string inner = t.substr(1, t.size() - 2);
                std::size_t i = 0;
                while (i < inner.size()) {
                    std::size_t j = inner.find(',', i);
                    if (j == std::string::npos) j = inner.size();
                    std::string a = inner.substr(i, j - i);
                    if (a.empty() || a.size() > 2 || !std::all_of(a.begin(), a.end(), ::isdigit)) {
                        pos_ = start;
                        fail("bad agent '" + a + "'");
                    }
                    int k = std::stoi(a);
                    if (k < 1 || k > sig_.agents) {
                        pos_ = start;
                        fail("agent " + a + " outside 1.." + std::to_string(sig_.agents));
                    }
                    c |= 1u << (k - 1);
                    i = j + 1;
                    if (j + 1 == inner.size()) {
                        pos_ = start;
                        fail("trailing comma in agent set");
                    }
                }
                pos_ = end + 1;
                return angle ? Modality::cannot_prevent(c) : Modality::can_force(c);
            }
            default:
                pos_ = start;
                fail(std::string("modality '") + open + body + close + "' not available in " + sig_.name());
        }
    }
};

}  // namespace

Formula parse(const std::string& text, const Signature& sig) { return Parser(text, sig).run(); }

}  // namespace colmu
