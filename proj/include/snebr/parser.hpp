#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "snebr/term.hpp"

namespace snebr {

/// Syntax error with a 1-based position and the set of tokens that would
/// have been accepted there.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found);
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }
    /// The message without the position prefix.
    const std::string& detail() const { return detail_; }

private:
    std::string detail_;
    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
};

/// Resolves a "wffN" reference to the structure it names.
using WffResolver = std::function<std::optional<Term>(int display_index)>;

/// Parse one wff of the surface language:
///
///     wff  := "all" "(" VAR ")" "(" wff ")" | imp
///     imp  := dis [ "=>" imp ]
///     dis  := con { "or" con }
///     con  := neg { "and" neg }
///     neg  := "~" neg | "(" wff ")" | atom
///     atom := IDENT "(" term { "," term } ")"
///
/// Identifiers are upper-cased. Argument positions of the meta-predicates
/// SOURCE (second) and GREATER (both) also accept a nested wff or a "wffN"
/// reference, resolved through `resolver`.
Term parse(std::string_view text, const WffResolver& resolver = {});

}  // namespace snebr
