#include "agg/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <memory>
#include <vector>

namespace agg::dsl {

namespace {

enum class Tok { ident, number, lparen, rparen, comma, slash, end };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
    bool is_integer = false;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            int line = line_, col = col_;
            if (pos_ >= src_.size()) {
                out.push_back({Tok::end, "", line, col});
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::string text;
                while (pos_ < src_.size() &&
                       std::isalpha(static_cast<unsigned char>(src_[pos_])))
                    text += take();
                out.push_back({Tok::ident, std::move(text), line, col});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back(number(line, col));
            } else if (c == '(') {
                take();
                out.push_back({Tok::lparen, "(", line, col});
            } else if (c == ')') {
                take();
                out.push_back({Tok::rparen, ")", line, col});
            } else if (c == ',') {
                take();
                out.push_back({Tok::comma, ",", line, col});
            } else if (c == '/') {
                take();
                out.push_back({Tok::slash, "/", line, col});
            } else {
                throw ParseError(line, col, std::string("unexpected character '") + c + "'");
            }
        }
    }

private:
    char take() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            take();
    }

    Token number(int line, int col) {
        std::string text;
        bool integer = true;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                text += take();
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            integer = false;
            text += take();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw ParseError(line_, col_, "expected digits after decimal point");
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            integer = false;
            text += take();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) text += take();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw ParseError(line_, col_, "expected digits in exponent");
            digits();
        }
        return {Tok::number, std::move(text), line, col, integer};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// Intermediate tree; projection arity is only known once the whole input
// has been seen.
struct Raw {
    NodeKind kind;
    int index = 0;                       // proj
    std::optional<Param> param;          // chi / med
    std::vector<std::unique_ptr<Raw>> children;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::unique_ptr<Raw> run(int& max_index) {
        auto e = expr(0);
        expect(Tok::end, "end of input");
        max_index = max_index_;
        return e;
    }

private:
    static constexpr int kMaxDepth = 2000;

    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg);
    }

    const Token& expect(Tok kind, const std::string& what) {
        if (peek().kind != kind)
            fail(peek(), "expected " + what + ", got '" +
                             (peek().kind == Tok::end ? "end of input" : peek().text) + "'");
        return advance();
    }

    std::int64_t integer(const Token& t) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            fail(t, "invalid integer '" + t.text + "'");
        return v;
    }

    Param num() {
        const Token& t = peek();
        if (t.kind != Tok::number) fail(t, "expected a number");
        advance();
        if (t.is_integer && peek().kind == Tok::slash) {
            advance();
            const Token& d = peek();
            if (d.kind != Tok::number || !d.is_integer) fail(d, "expected integer denominator");
            advance();
            std::int64_t n = integer(t), k = integer(d);
            if (k == 0) fail(d, "zero denominator");
            if (n > k) fail(t, "number outside [0,1]: " + t.text + "/" + d.text);
            return Param(GridPoint(n, k));
        }
        double v = 0.0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            fail(t, "invalid number '" + t.text + "'");
        if (!(v >= 0.0 && v <= 1.0)) fail(t, "number outside [0,1]: " + t.text);
        return Param(v);
    }

    std::unique_ptr<Raw> expr(int depth) {
        if (depth > kMaxDepth) fail(peek(), "expression nested too deeply");
        const Token& t = peek();
        if (t.kind != Tok::ident)
            fail(t, "expected an expression");
        advance();
        auto node = std::make_unique<Raw>();
        if (t.text == "x") {
            const Token& idx = peek();
            if (idx.kind != Tok::number || !idx.is_integer)
                fail(idx, "expected projection index after 'x'");
            advance();
            std::int64_t i = integer(idx);
            if (i > 1'000'000) fail(idx, "projection index too large");
            node->kind = NodeKind::proj;
            node->index = static_cast<int>(i);
            max_index_ = std::max(max_index_, node->index);
            return node;
        }
        if (t.text == "chi") {
            node->kind = NodeKind::chi;
            expect(Tok::lparen, "'('");
            node->param = num();
            expect(Tok::comma, "','");
            node->children.push_back(expr(depth + 1));
            expect(Tok::rparen, "')'");
            return node;
        }
        if (t.text == "med") {
            node->kind = NodeKind::med;
            expect(Tok::lparen, "'('");
            node->param = num();
            expect(Tok::comma, "','");
            node->children.push_back(expr(depth + 1));
            expect(Tok::comma, "','");
            node->children.push_back(expr(depth + 1));
            expect(Tok::rparen, "')'");
            return node;
        }
        if (t.text == "join" || t.text == "meet") {
            node->kind = t.text == "join" ? NodeKind::join : NodeKind::meet;
            expect(Tok::lparen, "'('");
            node->children.push_back(expr(depth + 1));
            while (peek().kind == Tok::comma) {
                advance();
                node->children.push_back(expr(depth + 1));
            }
            expect(Tok::rparen, "')'");
            return node;
        }
        fail(t, "unknown keyword '" + t.text + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int max_index_ = -1;
};

ExprPtr build(const Raw& r, int arity) {
    switch (r.kind) {
    case NodeKind::proj:
        return BasisExpr::proj(r.index, arity);
    case NodeKind::chi:
        return BasisExpr::chi(*r.param, build(*r.children[0], arity));
    case NodeKind::med:
        return BasisExpr::med(*r.param, build(*r.children[0], arity),
                              build(*r.children[1], arity));
    case NodeKind::join:
    case NodeKind::meet: {
        std::vector<ExprPtr> cs;
        cs.reserve(r.children.size());
        for (const auto& c : r.children) cs.push_back(build(*c, arity));
        return r.kind == NodeKind::join ? BasisExpr::join(std::move(cs))
                                        : BasisExpr::meet(std::move(cs));
    }
    }
    throw std::logic_error("build: unreachable");
}

std::string shortest_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

} // namespace

ExprPtr parse(std::string_view src, std::optional<int> expected_arity) {
    Lexer lex(src);
    Parser parser(lex.run());
    int max_index = -1;
    auto raw = parser.run(max_index);
    int arity = max_index + 1;
    if (expected_arity) {
        if (*expected_arity < 1)
            throw ParseError(1, 1, "expected arity must be >= 1");
        if (max_index >= *expected_arity)
            throw ParseError(1, 1, "projection index x" + std::to_string(max_index) +
                                       " exceeds expected arity " +
                                       std::to_string(*expected_arity));
        arity = *expected_arity;
    }
    return build(*raw, arity);
}

std::string print_param(const Param& p) {
    if (p.is_rational())
        return std::to_string(p.rational().num()) + "/" + std::to_string(p.rational().den());
    return shortest_double(p.value());
}

namespace {

void print_to(const BasisExpr& e, std::string& out) {
    switch (e.kind()) {
    case NodeKind::proj:
        out += "x" + std::to_string(e.proj_index());
        return;
    case NodeKind::chi:
        out += "chi(" + print_param(e.param()) + ", ";
        print_to(*e.children()[0], out);
        out += ")";
        return;
    case NodeKind::med:
        out += "med(" + print_param(e.param()) + ", ";
        print_to(*e.children()[0], out);
        out += ", ";
        print_to(*e.children()[1], out);
        out += ")";
        return;
    case NodeKind::join:
    case NodeKind::meet:
        out += e.kind() == NodeKind::join ? "join(" : "meet(";
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            if (i) out += ", ";
            print_to(*e.children()[i], out);
        }
        out += ")";
        return;
    }
}

} // namespace

std::string print(const BasisExpr& e) {
    std::string out;
    print_to(e, out);
    return out;
}

nlohmann::json param_to_json(const Param& p) {
    if (p.is_rational())
        return nlohmann::json{{"num", p.rational().num()}, {"den", p.rational().den()}};
    return p.value();
}

Param param_from_json(const nlohmann::json& doc) {
    if (doc.is_number()) return Param(doc.get<double>());
    if (doc.is_object() && doc.contains("num") && doc.contains("den") && doc.size() == 2)
        return Param(GridPoint(doc.at("num").get<std::int64_t>(),
                               doc.at("den").get<std::int64_t>()));
    throw std::invalid_argument("parameter: expected a number or {num,den}");
}

nlohmann::json to_json(const BasisExpr& e) {
    switch (e.kind()) {
    case NodeKind::proj:
        return {{"proj", {{"i", e.proj_index()}, {"n", e.arity()}}}};
    case NodeKind::chi:
        return {{"chi",
                 {{"a", param_to_json(e.param())}, {"child", to_json(*e.children()[0])}}}};
    case NodeKind::med:
        return {{"med",
                 {{"b", param_to_json(e.param())},
                  {"left", to_json(*e.children()[0])},
                  {"right", to_json(*e.children()[1])}}}};
    case NodeKind::join:
    case NodeKind::meet: {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : e.children()) arr.push_back(to_json(*c));
        return {{e.kind() == NodeKind::join ? "join" : "meet", std::move(arr)}};
    }
    }
    throw std::logic_error("to_json: unreachable");
}

ExprPtr from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.size() != 1)
        throw std::invalid_argument("expression: expected an object with one node-kind key");
    auto it = doc.begin();
    const std::string key = it.key();
    const nlohmann::json& body = it.value();
    if (key == "proj") {
        if (!body.is_object() || !body.contains("i") || !body.contains("n"))
            throw std::invalid_argument("proj: expected {i,n}");
        return BasisExpr::proj(body.at("i").get<int>(), body.at("n").get<int>());
    }
    if (key == "chi") {
        if (!body.is_object() || !body.contains("a") || !body.contains("child"))
            throw std::invalid_argument("chi: expected {a,child}");
        return BasisExpr::chi(param_from_json(body.at("a")), from_json(body.at("child")));
    }
    if (key == "med") {
        if (!body.is_object() || !body.contains("b") || !body.contains("left") ||
            !body.contains("right"))
            throw std::invalid_argument("med: expected {b,left,right}");
        return BasisExpr::med(param_from_json(body.at("b")), from_json(body.at("left")),
                              from_json(body.at("right")));
    }
    if (key == "join" || key == "meet") {
        if (!body.is_array() || body.empty())
            throw std::invalid_argument(key + ": expected a nonempty array");
        std::vector<ExprPtr> cs;
        cs.reserve(body.size());
        for (const auto& c : body) cs.push_back(from_json(c));
        return key == "join" ? BasisExpr::join(std::move(cs))
                             : BasisExpr::meet(std::move(cs));
    }
    throw std::invalid_argument("expression: unknown node kind '" + key + "'");
}

} // namespace agg::dsl
