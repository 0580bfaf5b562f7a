#include "cfx/dsl.hpp"

#include "cfx/error.hpp"

#include <cctype>
#include <sstream>

namespace cfx {
namespace {

enum class Tok { Word, String, Op, Dot, Comma, Colon, Arrow, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#';
}

bool word_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token tok;
            tok.line = line_;
            tok.column = column_;
            if (pos_ >= text_.size()) {
                out.push_back(tok);
                return out;
            }
            const char c = text_[pos_];
            const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
            if (word_start(c) || ((c == '-' || c == '+') && std::isdigit(static_cast<unsigned char>(next)))) {
                tok.kind = Tok::Word;
                tok.text += advance();
                while (pos_ < text_.size() && word_char(text_[pos_])) tok.text += advance();
            } else if (c == '"') {
                tok.kind = Tok::String;
                advance();
                for (;;) {
                    if (pos_ >= text_.size() || text_[pos_] == '\n')
                        throw SyntaxError(tok.line, tok.column, "unterminated string literal");
                    char ch = advance();
                    if (ch == '"') break;
                    if (ch == '\\' && pos_ < text_.size()) ch = advance();
                    tok.text += ch;
                }
            } else if (c == '-' && next == '>') {
                tok.kind = Tok::Arrow;
                tok.text = "->";
                advance();
                advance();
            } else if (c == '!' && next == '=') {
                tok.kind = Tok::Op;
                tok.text = "!=";
                advance();
                advance();
            } else if (c == '<' || c == '>') {
                tok.kind = Tok::Op;
                tok.text += advance();
                if (pos_ < text_.size() && text_[pos_] == '=') tok.text += advance();
            } else if (c == '=') {
                tok.kind = Tok::Op;
                tok.text += advance();
            } else if (c == '.') {
                tok.kind = Tok::Dot;
                tok.text += advance();
            } else if (c == ',') {
                tok.kind = Tok::Comma;
                tok.text += advance();
            } else if (c == ':') {
                tok.kind = Tok::Colon;
                tok.text += advance();
            } else {
                throw SyntaxError(tok.line, tok.column, std::string("unexpected character '") + c + "'");
            }
            out.push_back(std::move(tok));
        }
    }

private:
    char advance() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

class Parser {
public:
    Parser(std::string_view text, const FeatureSchema& schema) : tokens_(Lexer(text).run()), schema_(schema) {}

    RuleProgram rule_program() {
        RuleProgram program;
        for (;;) {
            const Token& tok = peek();
            if (tok.kind == Tok::End) throw Error(ErrorKind::MissingDefault, "program has no 'default' clause");
            if (is_keyword(tok, "label")) {
                next();
                Rule rule;
                rule.label = label();
                expect_keyword("if");
                rule.conditions = conjunction();
                expect(Tok::Dot, "'.'");
                program.rules.push_back(std::move(rule));
            } else if (is_keyword(tok, "default")) {
                next();
                program.default_label = label();
                expect(Tok::Dot, "'.'");
                if (peek().kind != Tok::End) fail(peek(), "nothing may follow the default clause");
                return program;
            } else {
                fail(tok, "expected 'label' or 'default'");
            }
        }
    }

    ConstraintSet constraints() {
        ConstraintSet cs;
        while (peek().kind != Tok::End) {
            const Token& tok = peek();
            if (is_keyword(tok, "deny")) {
                next();
                expect(Tok::Colon, "':'");
                cs.denials.push_back(conjunction());
                expect(Tok::Dot, "'.'");
            } else if (is_keyword(tok, "rule")) {
                next();
                expect(Tok::Colon, "':'");
                Implication imp;
                imp.body = conjunction();
                expect(Tok::Arrow, "'->'");
                const Token& head = peek();
                imp.feature = feature();
                const Token& op = peek();
                if (op.kind != Tok::Op || op.text != "=") fail(op, "implication head must be 'feature = value'");
                next();
                imp.value = literal();
                if (!schema_.in_domain(imp.feature, imp.value))
                    throw Error(ErrorKind::InvalidConstraint,
                                position(head) + "'" + imp.value + "' is not in the domain of '" +
                                    schema_.feature(imp.feature).name + "'");
                expect(Tok::Dot, "'.'");
                cs.implications.push_back(std::move(imp));
            } else if (is_keyword(tok, "group")) {
                next();
                expect(Tok::Colon, "':'");
                std::vector<FeatureIndex> group{feature()};
                while (peek().kind == Tok::Comma) {
                    next();
                    group.push_back(feature());
                }
                expect(Tok::Dot, "'.'");
                cs.onehot_groups.push_back(std::move(group));
            } else {
                fail(tok, "expected 'deny', 'rule' or 'group'");
            }
        }
        cs.validate(schema_);
        return cs;
    }

private:
    const Token& peek() const { return tokens_[index_]; }
    const Token& next() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }

    static bool is_keyword(const Token& tok, std::string_view word) {
        return tok.kind == Tok::Word && tok.text == word;
    }

    static std::string position(const Token& tok) {
        return std::to_string(tok.line) + ":" + std::to_string(tok.column) + ": ";
    }

    [[noreturn]] static void fail(const Token& tok, const std::string& message) {
        const std::string found = tok.kind == Tok::End ? "end of input" : "'" + tok.text + "'";
        throw SyntaxError(tok.line, tok.column, message + ", found " + found);
    }

    void expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
        next();
    }

    void expect_keyword(std::string_view word) {
        if (!is_keyword(peek(), word)) fail(peek(), "expected '" + std::string(word) + "'");
        next();
    }

    Label label() {
        const Token& tok = peek();
        if (tok.kind != Tok::Word || (tok.text != "0" && tok.text != "1")) fail(tok, "expected label 0 or 1");
        next();
        return tok.text == "1" ? Label::One : Label::Zero;
    }

    FeatureIndex feature() {
        const Token& tok = peek();
        if (tok.kind != Tok::Word && tok.kind != Tok::String) fail(tok, "expected a feature name");
        auto index = schema_.index_of(tok.text);
        if (!index) throw Error(ErrorKind::UnknownFeature, position(tok) + "unknown feature '" + tok.text + "'");
        next();
        return *index;
    }

    Value literal() {
        const Token& tok = peek();
        if (tok.kind != Tok::Word && tok.kind != Tok::String) fail(tok, "expected a value");
        next();
        return tok.text;
    }

    Condition condition() {
        const Token& start = peek();
        Condition cond;
        cond.feature = feature();
        const Token& op = peek();
        if (op.kind != Tok::Op) fail(op, "expected a comparison operator");
        if (op.text == "=") cond.op = CompareOp::Eq;
        else if (op.text == "!=") cond.op = CompareOp::Ne;
        else if (op.text == "<") cond.op = CompareOp::Lt;
        else if (op.text == "<=") cond.op = CompareOp::Le;
        else if (op.text == ">") cond.op = CompareOp::Gt;
        else cond.op = CompareOp::Ge;
        next();
        cond.literal = literal();
        try {
            check_condition(schema_, cond);
        } catch (const Error& err) {
            throw Error(err.kind(), position(start) + err.what());
        }
        return cond;
    }

    Conjunction conjunction() {
        Conjunction out{condition()};
        while (is_keyword(peek(), "and")) {
            next();
            out.push_back(condition());
        }
        return out;
    }

    std::vector<Token> tokens_;
    std::size_t index_ = 0;
    const FeatureSchema& schema_;
};

std::string name_token(std::string_view name) { return dsl_literal(name); }

void print_conjunction(std::ostream& out, const Conjunction& body, const FeatureSchema& schema) {
    for (std::size_t k = 0; k < body.size(); ++k) {
        if (k) out << " and ";
        out << name_token(schema.feature(body[k].feature).name) << ' ' << to_string(body[k].op) << ' '
            << dsl_literal(body[k].literal);
    }
}

} // namespace

std::string dsl_literal(std::string_view value) {
    bool plain = !value.empty();
    for (std::size_t i = 0; plain && i < value.size(); ++i) {
        const char c = value[i];
        if (i == 0)
            plain = word_start(c) ||
                    ((c == '-' || c == '+') && value.size() > 1 && std::isdigit(static_cast<unsigned char>(value[1])));
        else
            plain = word_char(c);
    }
    if (plain) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

RuleProgram parse_rule_program(std::string_view text, const FeatureSchema& schema) {
    return Parser(text, schema).rule_program();
}

ConstraintSet parse_constraints(std::string_view text, const FeatureSchema& schema) {
    return Parser(text, schema).constraints();
}

std::string print_rule_program(const RuleProgram& program, const FeatureSchema& schema) {
    std::ostringstream out;
    for (const auto& rule : program.rules) {
        out << "label " << to_char(rule.label) << " if ";
        print_conjunction(out, rule.conditions, schema);
        out << ".\n";
    }
    out << "default " << to_char(program.default_label) << ".\n";
    return out.str();
}

std::string print_constraints(const ConstraintSet& cs, const FeatureSchema& schema) {
    std::ostringstream out;
    for (const auto& denial : cs.denials) {
        out << "deny: ";
        print_conjunction(out, denial, schema);
        out << ".\n";
    }
    for (const auto& imp : cs.implications) {
        out << "rule: ";
        print_conjunction(out, imp.body, schema);
        out << " -> " << name_token(schema.feature(imp.feature).name) << " = " << dsl_literal(imp.value) << ".\n";
    }
    for (const auto& group : cs.onehot_groups) {
        out << "group: ";
        for (std::size_t k = 0; k < group.size(); ++k) out << (k ? ", " : "") << name_token(schema.feature(group[k]).name);
        out << ".\n";
    }
    return out.str();
}

} // namespace cfx
