#pragma once

#include "colmu/formula.hpp"

#include <stdexcept>
#include <string>

namespace colmu {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Binders extend as far right as possible, except directly under a prefix operator
// (modality or '!'), where the body is a single prefix-level term:
// "[{1}] nu X.(p & <{1,2}> X) & q" reads as ([{1}] nu X.(...)) & q.
Formula parse(const std::string& text, const Signature& sig);

}  // namespace colmu
