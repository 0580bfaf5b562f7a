#include "cfx/asp_export.hpp"

#include "cfx/error.hpp"

#include <cctype>
#include <sstream>

namespace cfx {
namespace {

std::string vars(char prefix, std::size_t n) {
    std::string out;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i > 1) out += ',';
        out += prefix + std::to_string(i);
    }
    return out;
}

std::string var(char prefix, std::size_t index) { return prefix + std::to_string(index + 1); }

/// e(E,<args>,<annotation>)
std::string entity_atom(const std::string& args, std::string_view annotation) {
    return "e(E," + args + "," + std::string(annotation) + ")";
}

std::string condition_text(const Condition& cond) {
    return var('X', cond.feature) + " " + std::string(to_string(cond.op)) + " " + asp_term(cond.literal);
}

std::string conjunction_text(const Conjunction& body) {
    std::string out;
    for (const auto& cond : body) out += ", " + condition_text(cond);
    return out;
}

std::string domain_guards(std::size_t n) {
    std::string out;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i > 1) out += ", ";
        out += "dom" + std::to_string(i) + "(X" + std::to_string(i) + ")";
    }
    return out;
}

AspSection classifier_section(const Instance& inst) {
    const std::size_t n = inst.schema.arity();
    const std::string xs = vars('X', n);
    AspSection section{"classifier", {}};
    if (const auto* table = std::get_if<DecisionTable>(&inst.classifier.spec())) {
        for (const auto& [values, label] : table->rows) {
            std::string args;
            for (const auto& v : values) args += asp_term(v) + ",";
            section.statements.push_back({StatementKind::Fact, "c(" + args + to_char(label) + ")."});
        }
        return section;
    }
    const auto* program = std::get_if<RuleProgram>(&inst.classifier.spec());
    if (!program) throw Error(ErrorKind::NotSerializable, "an external classifier cannot be written as facts");

    // First-match semantics: rule k fires only when no earlier rule fires.
    const std::string guards = domain_guards(n);
    for (std::size_t k = 0; k < program->rules.size(); ++k) {
        section.statements.push_back({StatementKind::Rule, "fire" + std::to_string(k + 1) + "(" + xs + ") :- " +
                                                               guards + conjunction_text(program->rules[k].conditions) +
                                                               "."});
    }
    for (std::size_t k = 0; k < program->rules.size(); ++k) {
        std::string body = "fire" + std::to_string(k + 1) + "(" + xs + ")";
        for (std::size_t j = 0; j < k; ++j) body += ", not fire" + std::to_string(j + 1) + "(" + xs + ")";
        section.statements.push_back(
            {StatementKind::Rule, "c(" + xs + "," + to_char(program->rules[k].label) + ") :- " + body + "."});
    }
    std::string body = guards;
    for (std::size_t j = 0; j < program->rules.size(); ++j) body += ", not fire" + std::to_string(j + 1) + "(" + xs + ")";
    section.statements.push_back(
        {StatementKind::Rule, "c(" + xs + "," + to_char(program->default_label) + ") :- " + body + "."});
    return section;
}

} // namespace

std::string asp_term(std::string_view value) {
    if (auto number = parse_integer(value); number && std::to_string(*number) == value) return std::string(value);
    bool constant = !value.empty() && std::islower(static_cast<unsigned char>(value.front())) && value != "not";
    for (char c : value)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) constant = false;
    if (constant) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> AspProgram::statements(StatementKind kind) const {
    std::vector<std::string> out;
    for (const auto& section : sections)
        for (const auto& st : section.statements)
            if (st.kind == kind) out.push_back(st.text);
    return out;
}

std::string AspProgram::to_text() const {
    std::ostringstream out;
    for (std::size_t s = 0; s < sections.size(); ++s) {
        if (s) out << '\n';
        out << "% " << sections[s].title << '\n';
        for (const auto& st : sections[s].statements) out << st.text << '\n';
    }
    return out.str();
}

AspProgram export_asp(const Instance& inst) {
    if (!std::holds_alternative<FullSpace>(inst.mode))
        throw Error(ErrorKind::UnsupportedMode, "only full product-space instances can be exported");
    if (std::holds_alternative<ExternalEndpoint>(inst.classifier.spec()))
        throw Error(ErrorKind::NotSerializable, "an external classifier cannot be written as facts");
    inst.schema.validate(inst.entity);
    inst.constraints.validate(inst.schema);

    const auto& schema = inst.schema;
    const std::size_t n = schema.arity();
    const std::string xs = vars('X', n);
    const std::string zs = vars('Z', n);
    AspProgram program;

    AspSection facts{"domains and original entity", {}};
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& v : schema.feature(i).domain)
            facts.statements.push_back({StatementKind::Fact, "dom" + std::to_string(i + 1) + "(" + asp_term(v) + ")."});
    {
        std::string args;
        for (const auto& v : inst.entity.values) args += "," + asp_term(v);
        facts.statements.push_back({StatementKind::Fact, "e(" + asp_term(inst.entity.id) + args + ",o)."});
    }
    program.sections.push_back(std::move(facts));
    program.sections.push_back(classifier_section(inst));

    program.sections.push_back({"transition entities",
                                {{StatementKind::Rule, entity_atom(xs, "star") + " :- " + entity_atom(xs, "o") + "."},
                                 {StatementKind::Rule, entity_atom(xs, "star") + " :- " + entity_atom(xs, "do") + "."}}});

    AspSection change{"change one value while the label is 1; choice encoded by chosen/diffchoice", {}};
    {
        std::string head;
        std::string body = entity_atom(xs, "star") + ", c(" + xs + ",1)";
        for (std::size_t i = 0; i < n; ++i) {
            std::string args;
            for (std::size_t j = 0; j < n; ++j) args += (j ? "," : "") + var(i == j ? 'Y' : 'X', j);
            head += (i ? " ; " : "") + entity_atom(args, "do");
            body += ", dom" + std::to_string(i + 1) + "(" + var('Y', i) + ")";
        }
        for (std::size_t i = 0; i < n; ++i) body += ", " + var('Y', i) + " != " + var('X', i);
        for (std::size_t i = 0; i < n; ++i)
            body += ", chosen" + std::to_string(i + 1) + "(" + xs + "," + var('Y', i) + ")";
        if (n > 0) change.statements.push_back({StatementKind::Rule, head + " :- " + body + "."});
        for (std::size_t i = 0; i < n; ++i) {
            const std::string k = std::to_string(i + 1);
            change.statements.push_back({StatementKind::Rule, "chosen" + k + "(" + xs + ",Y) :- " +
                                                                  entity_atom(xs, "star") + ", c(" + xs + ",1), dom" +
                                                                  k + "(Y), Y != " + var('X', i) + ", not diffchoice" +
                                                                  k + "(" + xs + ",Y)."});
            change.statements.push_back({StatementKind::Rule, "diffchoice" + k + "(" + xs + ",Y) :- chosen" + k +
                                                                  "(" + xs + ",W), dom" + k + "(Y), W != Y."});
        }
    }
    program.sections.push_back(std::move(change));

    program.sections.push_back(
        {"stop once the label switches to 0",
         {{StatementKind::Rule, entity_atom(xs, "s") + " :- " + entity_atom(xs, "do") + ", c(" + xs + ",0)."}}});
    program.sections.push_back(
        {"never return to the original entity",
         {{StatementKind::Strong, ":- " + entity_atom(xs, "do") + ", " + entity_atom(xs, "o") + "."}}});

    // Denials and groups judge stopped entities only: single-value steps pass
    // through states no one-hot group allows. Implications extend an
    // intervened entity with the forced value.
    const auto& cs = inst.constraints;
    if (!cs.empty()) {
        AspSection semantic{"semantic constraints", {}};
        for (const auto& denial : cs.denials)
            semantic.statements.push_back(
                {StatementKind::Strong, ":- " + entity_atom(xs, "s") + conjunction_text(denial) + "."});
        for (const auto& group : cs.onehot_groups) {
            std::string sum;
            for (std::size_t k = 0; k < group.size(); ++k) sum += (k ? "+" : "") + var('X', group[k]);
            semantic.statements.push_back(
                {StatementKind::Strong, ":- " + entity_atom(xs, "s") + ", " + sum + " != 1."});
        }
        for (const auto& imp : cs.implications) {
            std::string args;
            for (std::size_t j = 0; j < n; ++j) args += (j ? "," : "") + (j == imp.feature ? asp_term(imp.value) : var('X', j));
            semantic.statements.push_back({StatementKind::Rule, entity_atom(args, "do") + " :- " +
                                                                    entity_atom(xs, "do") +
                                                                    conjunction_text(imp.body) + "."});
        }
        program.sections.push_back(std::move(semantic));
    }

    AspSection expl{"explanations: original values changed in a stopped entity", {}};
    AspSection weak{"prefer stopped entities with fewest changed values", {}};
    for (std::size_t i = 0; i < n; ++i) {
        const std::string k = std::to_string(i + 1);
        const std::string body =
            entity_atom(xs, "o") + ", " + entity_atom(zs, "s") + ", " + var('X', i) + " != " + var('Z', i) + ".";
        expl.statements.push_back({StatementKind::Rule, "expl" + k + "(E," + var('X', i) + ") :- " + body});
        weak.statements.push_back({StatementKind::Weak, ":~ " + body + " [1@1," + k + "]"});
    }
    program.sections.push_back(std::move(expl));
    program.sections.push_back(std::move(weak));
    return program;
}

// ---------------------------------------------------------------------------
// Re-parsing.

namespace {

enum class T { Ident, Var, Int, Str, LParen, RParen, Comma, Dot, Semi, If, Weak, LBrack, RBrack, At, Cmp, Plus, End };

struct AspToken {
    T kind = T::End;
    std::string text;
    std::size_t column = 1;
};

std::vector<AspToken> tokenize(std::string_view line, std::size_t line_no) {
    std::vector<AspToken> out;
    std::size_t i = 0;
    auto fail = [&](const std::string& msg) -> void { throw SyntaxError(line_no, i + 1, msg); };
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        AspToken tok;
        tok.column = i + 1;
        const auto two = line.substr(i, 2);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok.kind = std::isupper(static_cast<unsigned char>(c)) || c == '_' ? T::Var : T::Ident;
            while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
                tok.text += line[i++];
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '-' && i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
            tok.kind = T::Int;
            tok.text += line[i++];
            while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) tok.text += line[i++];
        } else if (c == '"') {
            tok.kind = T::Str;
            ++i;
            for (;;) {
                if (i >= line.size()) fail("unterminated string");
                char ch = line[i++];
                if (ch == '"') break;
                if (ch == '\\') {
                    if (i >= line.size()) fail("dangling escape");
                    ch = line[i++];
                }
                tok.text += ch;
            }
        } else if (two == ":-") {
            tok.kind = T::If;
            i += 2;
        } else if (two == ":~") {
            tok.kind = T::Weak;
            i += 2;
        } else if (two == "!=" || two == "<=" || two == ">=") {
            tok.kind = T::Cmp;
            tok.text = std::string(two);
            i += 2;
        } else if (c == '=' || c == '<' || c == '>') {
            tok.kind = T::Cmp;
            tok.text = std::string(1, c);
            ++i;
        } else {
            switch (c) {
            case '(': tok.kind = T::LParen; break;
            case ')': tok.kind = T::RParen; break;
            case ',': tok.kind = T::Comma; break;
            case '.': tok.kind = T::Dot; break;
            case ';': tok.kind = T::Semi; break;
            case '[': tok.kind = T::LBrack; break;
            case ']': tok.kind = T::RBrack; break;
            case '@': tok.kind = T::At; break;
            case '+': tok.kind = T::Plus; break;
            default: fail(std::string("unexpected character '") + c + "'");
            }
            tok.text = std::string(1, c);
            ++i;
        }
        out.push_back(std::move(tok));
    }
    AspToken end;
    end.column = line.size() + 1;
    out.push_back(end);
    return out;
}

class StatementParser {
public:
    StatementParser(std::vector<AspToken> tokens, std::size_t line_no) : toks_(std::move(tokens)), line_(line_no) {}

    StatementKind statement() {
        StatementKind kind;
        if (accept(T::Weak)) {
            body();
            expect(T::Dot, "'.'");
            expect(T::LBrack, "'['");
            term();
            expect(T::At, "'@'");
            term();
            while (accept(T::Comma)) term();
            expect(T::RBrack, "']'");
            kind = StatementKind::Weak;
        } else if (accept(T::If)) {
            body();
            expect(T::Dot, "'.'");
            kind = StatementKind::Strong;
        } else {
            atom();
            std::size_t heads = 1;
            while (accept(T::Semi)) {
                atom();
                ++heads;
            }
            if (accept(T::If)) {
                body();
                kind = StatementKind::Rule;
            } else {
                if (heads > 1) fail("a disjunctive head needs a body");
                kind = StatementKind::Fact;
            }
            expect(T::Dot, "'.'");
        }
        if (peek().kind != T::End) fail("trailing input");
        return kind;
    }

private:
    const AspToken& peek() const { return toks_[pos_]; }
    bool accept(T kind) {
        if (peek().kind != kind) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_, peek().column, msg); }
    void expect(T kind, const char* what) {
        if (!accept(kind)) fail(std::string("expected ") + what);
    }

    void simple_term() {
        const T k = peek().kind;
        if (k == T::Var || k == T::Ident || k == T::Int || k == T::Str) {
            ++pos_;
            return;
        }
        fail("expected a term");
    }

    void term() {
        simple_term();
        while (accept(T::Plus)) simple_term();
    }

    void atom() {
        if (peek().kind != T::Ident || peek().text == "not") fail("expected an atom");
        ++pos_;
        if (accept(T::LParen)) {
            term();
            while (accept(T::Comma)) term();
            expect(T::RParen, "')'");
        }
    }

    void literal() {
        if (peek().kind == T::Ident && peek().text == "not") {
            ++pos_;
            atom();
            return;
        }
        if (peek().kind == T::Ident && toks_[pos_ + 1].kind != T::Cmp && toks_[pos_ + 1].kind != T::Plus) {
            atom();
            return;
        }
        term();
        expect(T::Cmp, "a comparison");
        term();
    }

    void body() {
        literal();
        while (accept(T::Comma)) literal();
    }

    std::vector<AspToken> toks_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

} // namespace

AspProgram parse_asp(std::string_view text) {
    AspProgram program;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        if (line.front() == '%') {
            auto title = line.substr(1);
            if (!title.empty() && title.front() == ' ') title.remove_prefix(1);
            program.sections.push_back({std::string(title), {}});
            continue;
        }
        const StatementKind kind = StatementParser(tokenize(line, line_no), line_no).statement();
        if (program.sections.empty()) program.sections.push_back({"", {}});
        program.sections.back().statements.push_back({kind, std::string(line)});
    }
    return program;
}

} // namespace cfx
