#pragma once

#include "colmu/formula.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace colmu {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;   // usage, parse, format, rejected certificate
inline constexpr int internal = 2;  // invariant violation or resource ceiling
inline constexpr int sat = 10;
inline constexpr int unsat = 20;
}  // namespace exit_code

struct RunConfig {
    std::optional<Signature> logic;  // check takes the model's kind when unset
    std::optional<std::int64_t> coeff_bound;
    std::size_t max_positions = 2000000;
    std::size_t max_states = 5;
    std::string emit_model, emit_tableau;
    bool via_game = false;
    bool stats = false;
    int samples = 200;
};

// A literal formula, or the contents of the file after '@'.
std::string read_formula_source(const std::string& source);

int cmd_sat(const RunConfig& cfg, const std::string& formula_source, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, const std::string& model_path, const std::string& formula_source, std::ostream& out,
              std::ostream& err);
int cmd_certify(const RunConfig& cfg, const std::string& tableau_path, const std::string& formula_source,
                std::ostream& out, std::ostream& err);
int cmd_onestep_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace colmu
