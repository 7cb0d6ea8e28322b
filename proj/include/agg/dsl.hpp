#pragma once

#include "agg/core.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace agg::dsl {

/// Positioned syntax or range error. Lines and columns are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& message)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + message),
          line_(line), col_(col), message_(message) {}
    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }
    const std::string& message() const noexcept { return message_; }

private:
    int line_;
    int col_;
    std::string message_;
};

/// Parses the expression grammar
///
///   expr ::= "x" INT
///          | "chi"  "(" num "," expr ")"
///          | "med"  "(" num "," expr "," expr ")"
///          | "join" "(" expr { "," expr } ")"
///          | "meet" "(" expr { "," expr } ")"
///   num  ::= DECIMAL | INT "/" INT      (value in [0,1])
///
/// Whitespace is insignificant. Without expected_arity the expression arity
/// is 1 + the largest projection index; with it, indices are validated
/// against it (unused trailing variables allowed).
ExprPtr parse(std::string_view src, std::optional<int> expected_arity = std::nullopt);

/// Canonical text: ", " separators, lowercase keywords, rational parameters
/// as "i/k", float parameters as the shortest decimal that round-trips.
/// parse(print(e), e->arity()) is structurally equal to e.
std::string print(const BasisExpr& e);
inline std::string print(const ExprPtr& e) { return print(*e); }

std::string print_param(const Param& p);

/// Lossless JSON form. Node-kind keys proj/chi/med/join/meet; parameters as
/// {"num":i,"den":k} or an IEEE double.
nlohmann::json to_json(const BasisExpr& e);
inline nlohmann::json to_json(const ExprPtr& e) { return to_json(*e); }
ExprPtr from_json(const nlohmann::json& doc);

nlohmann::json param_to_json(const Param& p);
Param param_from_json(const nlohmann::json& doc);

} // namespace agg::dsl
