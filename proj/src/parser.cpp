#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "iasdo/dsl.hpp"

namespace iasdo {

std::string ParseError::message() const {
    return span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) + ": expected " + expected +
           ", found " + found;
}

namespace {

struct Token {
    enum class Kind { Ident, Symbol, End, Invalid };
    Kind kind = Kind::End;
    std::string text;
    SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string lower(std::string_view s) {
    std::string out(s);
    std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_connective(std::string_view word) {
    const std::string w = lower(word);
    return w == "and" || w == "or" || w == "xor" || w == "not";
}

bool is_reserved_class_name(std::string_view word) {
    return is_connective(word) || word == "from" || word == "when" || word == "same_ancestor";
}

std::vector<Token> tokenize(std::string_view text, const std::string& file) {
    std::vector<Token> tokens;
    std::size_t i = 0, line = 1, col = 1;
    if (text.starts_with("\xEF\xBB\xBF")) i = 3;
    auto span_at = [&](std::size_t start, std::size_t start_col, std::size_t len) {
        return SourceSpan{file, line, start_col, len, start};
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++i, ++line, col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i, ++col;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        std::size_t start = i, start_col = col;
        if (ident_start(c)) {
            while (i < text.size() && ident_char(text[i])) ++i;
            col += i - start;
            tokens.push_back({Token::Kind::Ident, std::string(text.substr(start, i - start)),
                              span_at(start, start_col, i - start)});
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            i += 2, col += 2;
            tokens.push_back({Token::Kind::Symbol, "->", span_at(start, start_col, 2)});
            continue;
        }
        if (std::string_view("{};:,().=").find(c) != std::string_view::npos) {
            ++i, ++col;
            tokens.push_back({Token::Kind::Symbol, std::string(1, c), span_at(start, start_col, 1)});
            continue;
        }
        ++i, ++col;
        tokens.push_back({Token::Kind::Invalid, std::string(1, c), span_at(start, start_col, 1)});
    }
    tokens.push_back({Token::Kind::End, "", SourceSpan{file, line, col, 0, text.size()}});
    return tokens;
}

std::string describe(const Token& t) {
    switch (t.kind) {
        case Token::Kind::End: return "end of input";
        case Token::Kind::Invalid: return "unexpected character '" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

struct Abort {};

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& options)
        : tokens_(tokenize(text, options.file)), first_error_only_(options.first_error_only) {}

    ParseResult parse_model() {
        while (!at_end() && !(first_error_only_ && !errors_.empty())) {
            try {
                declaration();
            } catch (const Abort&) {
                synchronize();
            }
        }
        if (errors_.empty() || !first_error_only_) resolve_references();
        if (first_error_only_ && errors_.size() > 1) errors_.resize(1);
        ParseResult result;
        if (errors_.empty()) {
            result.model = std::move(model_);
        } else {
            result.errors = std::move(errors_);
        }
        return result;
    }

    std::optional<Condition> parse_standalone_condition(bool allow_guards, std::vector<ParseError>* errors) {
        allow_guards_ = allow_guards;
        std::optional<Condition> out;
        try {
            out = expr();
            if (!at_end()) fail("end of condition");
        } catch (const Abort&) {
            out.reset();
        }
        if (errors) *errors = std::move(errors_);
        return out;
    }

private:
    struct Reference {
        enum class Kind { Class, Process, Role, Attribute, Method };
        Kind kind;
        std::string owner;
        std::string name;
        SourceSpan span;
    };

    // ── token helpers ──

    const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    const Token& advance() {
        const Token& t = peek();
        if (t.kind != Token::Kind::End) ++pos_;
        return t;
    }
    bool check_symbol(std::string_view s) const { return peek().kind == Token::Kind::Symbol && peek().text == s; }
    bool check_word(std::string_view w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }
    bool check_connective(std::string_view w) const {
        return peek().kind == Token::Kind::Ident && lower(peek().text) == w;
    }

    [[noreturn]] void fail(std::string expected) {
        error(peek().span, std::move(expected), describe(peek()));
        throw Abort{};
    }

    void error(SourceSpan span, std::string expected, std::string found) {
        errors_.push_back({std::move(span), std::move(expected), std::move(found)});
    }

    void expect_symbol(std::string_view s) {
        if (!check_symbol(s)) fail("'" + std::string(s) + "'");
        advance();
    }

    void expect_word(std::string_view w) {
        if (!check_word(w)) fail("'" + std::string(w) + "'");
        advance();
    }

    const Token& identifier(std::string_view what) {
        if (peek().kind != Token::Kind::Ident) fail(std::string(what));
        return advance();
    }

    std::string class_ref() {
        const Token& t = identifier("class name");
        refs_.push_back({Reference::Kind::Class, {}, t.text, t.span});
        return t.text;
    }

    // Skip to the next top-level keyword that follows ';' or '}'.
    void synchronize() {
        static const std::set<std::string> keywords{"class", "ed", "ds", "back_inactive", "access_view", "loop",
                                                    "process", "role", "grant", "responsible"};
        while (!at_end()) {
            const Token& t = advance();
            if (t.kind == Token::Kind::Symbol && (t.text == ";" || t.text == "}")) {
                if (peek().kind == Token::Kind::Ident && keywords.contains(peek().text)) return;
            }
        }
    }

    bool declare(std::set<std::string>& names, const Token& t, std::string_view what) {
        if (names.insert(t.text).second) return true;
        error(t.span, "unique " + std::string(what), "duplicate '" + t.text + "'");
        return false;
    }

    // ── declarations ──

    void declaration() {
        const Token& kw = peek();
        if (kw.kind != Token::Kind::Ident) fail("declaration keyword");
        if (kw.text == "class") return class_decl();
        if (kw.text == "ed") return ed_decl();
        if (kw.text == "ds") return ds_decl();
        if (kw.text == "back_inactive") return back_inactive_decl();
        if (kw.text == "access_view") return access_view_decl();
        if (kw.text == "loop") return loop_decl();
        if (kw.text == "process") return process_decl();
        if (kw.text == "role") return role_decl();
        if (kw.text == "grant") return grant_decl();
        if (kw.text == "responsible") return responsible_decl();
        fail("declaration keyword");
    }

    std::vector<Token> ident_list() {
        std::vector<Token> out;
        if (check_symbol(";")) return out;
        out.push_back(identifier("identifier"));
        while (check_symbol(",")) {
            advance();
            out.push_back(identifier("identifier"));
        }
        return out;
    }

    // `label:` opener of a block section; rejects repeats.
    std::string section(std::set<std::string>& seen, std::initializer_list<std::string_view> allowed) {
        const Token& t = peek();
        bool known = t.kind == Token::Kind::Ident && std::ranges::find(allowed, t.text) != allowed.end();
        if (!known) {
            std::string expected;
            for (auto a : allowed) expected += (expected.empty() ? "'" : " or '") + std::string(a) + ":'";
            fail(expected);
        }
        if (!seen.insert(t.text).second) {
            error(t.span, "each section at most once", "second '" + t.text + ":' section");
            throw Abort{};
        }
        advance();
        expect_symbol(":");
        return t.text;
    }

    void class_decl() {
        advance();
        const Token& name = identifier("class name");
        if (is_reserved_class_name(name.text)) {
            error(name.span, "class name", "reserved word '" + name.text + "'");
        }
        ClassDef cls{name.text, {}, {}};
        expect_symbol("{");
        std::set<std::string> sections, attrs, methods;
        while (!check_symbol("}")) {
            std::string which = section(sections, {"attrs", "methods"});
            for (const Token& t : ident_list()) {
                if (which == "attrs" && declare(attrs, t, "attribute name")) cls.attributes.push_back(t.text);
                if (which == "methods" && declare(methods, t, "method name")) cls.methods.push_back(t.text);
            }
            expect_symbol(";");
        }
        advance();
        if (declare(class_names_, name, "class name")) model_.classes.push_back(std::move(cls));
    }

    std::optional<LinkMode> link_mode() {
        if (check_word("imperative")) {
            advance();
            return LinkMode::Imperative;
        }
        if (check_word("optional")) {
            advance();
            return LinkMode::Optional;
        }
        return std::nullopt;
    }

    std::pair<std::string, std::string> arrow_pair() {
        std::string from = class_ref();
        expect_symbol("->");
        std::string to = class_ref();
        return {from, to};
    }

    void ed_decl() {
        SourceSpan at = advance().span;
        auto [source, target] = arrow_pair();
        LinkMode mode = link_mode().value_or(LinkMode::Imperative);
        expect_symbol(";");
        if (!ed_pairs_.insert({source, target}).second) {
            return error(at, "one ed link per class pair", "duplicate 'ed " + source + " -> " + target + "'");
        }
        model_.ed_links.push_back({source, target, mode});
    }

    void ds_decl() {
        SourceSpan at = advance().span;
        auto [sub, super] = arrow_pair();
        LinkMode mode = link_mode().value_or(LinkMode::Imperative);
        bool back_inactive = false;
        if (check_word("back_inactive")) {
            advance();
            back_inactive = true;
        }
        expect_symbol(";");
        if (!ds_pairs_.insert({sub, super}).second) {
            return error(at, "one ds link per class pair", "duplicate 'ds " + sub + " -> " + super + "'");
        }
        model_.ds_links.push_back({sub, super, mode, back_inactive});
    }

    void back_inactive_decl() {
        SourceSpan at = advance().span;
        auto [sub, ancestor] = arrow_pair();
        expect_symbol(";");
        if (!back_inactive_pairs_.insert({sub, ancestor}).second) {
            return error(at, "one back_inactive declaration per class pair",
                         "duplicate 'back_inactive " + sub + " -> " + ancestor + "'");
        }
        model_.back_inactive_decls.push_back({sub, ancestor});
    }

    QualifiedName qualified(Reference::Kind kind) {
        std::string owner = class_ref();
        expect_symbol(".");
        const Token& member = identifier(kind == Reference::Kind::Attribute ? "attribute name" : "method name");
        refs_.push_back({kind, owner, member.text, member.span});
        return {owner, member.text};
    }

    void access_view_decl() {
        advance();
        const Token& owner = identifier("class name");
        refs_.push_back({Reference::Kind::Class, {}, owner.text, owner.span});
        AccessView view{owner.text, {}, {}};
        expect_symbol("{");
        std::set<std::string> sections;
        while (!check_symbol("}")) {
            std::string which = section(sections, {"attrs", "methods"});
            auto kind = which == "attrs" ? Reference::Kind::Attribute : Reference::Kind::Method;
            auto& into = which == "attrs" ? view.attributes : view.methods;
            if (!check_symbol(";")) {
                for (;;) {
                    SourceSpan at = peek().span;
                    QualifiedName q = qualified(kind);
                    if (!into.insert(q).second) error(at, "unique selection", "duplicate '" + q.class_name + "." + q.member + "'");
                    if (!check_symbol(",")) break;
                    advance();
                }
            }
            expect_symbol(";");
        }
        advance();
        if (declare(access_view_owners_, owner, "access_view owner")) model_.access_views.push_back(std::move(view));
    }

    void loop_decl() {
        advance();
        const Token& end = peek();
        auto [end_class, start_class] = arrow_pair();
        expect_symbol(";");
        if (declare(loop_ends_, end, "loop end class")) model_.loops.push_back({end_class, start_class});
    }

    void process_decl() {
        advance();
        const Token& name = identifier("process name");
        ProcessDef p;
        p.name = name.text;
        expect_symbol("{");
        std::set<std::string> sections;
        while (!check_symbol("}")) {
            std::string which = section(sections, {"inputs", "outputs", "pre", "post", "effects"});
            if (which == "inputs" || which == "outputs") {
                std::set<std::string> seen;
                for (const Token& t : ident_list()) {
                    refs_.push_back({Reference::Kind::Class, {}, t.text, t.span});
                    if (declare(seen, t, "class in list")) (which == "inputs" ? p.inputs : p.outputs).insert(t.text);
                }
            } else if (which == "pre") {
                p.precondition = expr();
            } else if (which == "post") {
                p.postcondition = expr();
            } else if (!check_symbol(";")) {
                p.effects.push_back(effect());
                while (check_symbol(",")) {
                    advance();
                    p.effects.push_back(effect());
                }
            }
            expect_symbol(";");
        }
        advance();
        if (declare(process_names_, name, "process name")) model_.processes.push_back(std::move(p));
    }

    Effect effect() {
        Effect e;
        if (check_word("create")) {
            advance();
            e.kind = EffectKind::Create;
            e.target_class = class_ref();
            if (check_word("from")) {
                advance();
                e.source_binding = class_ref();
            }
        } else if (check_word("migrate")) {
            advance();
            e.kind = EffectKind::Migrate;
            e.source_binding = class_ref();
            expect_symbol("->");
            e.target_class = class_ref();
        } else {
            fail("'create' or 'migrate'");
        }
        if (check_word("when")) {
            advance();
            allow_guards_ = true;
            e.guard = expr();
            allow_guards_ = false;
        }
        return e;
    }

    void role_decl() {
        advance();
        const Token& name = identifier("role name");
        expect_symbol(";");
        if (declare(role_names_, name, "role name")) model_.roles.push_back({name.text});
    }

    void grant_decl() {
        SourceSpan at = advance().span;
        const Token& role = identifier("role name");
        refs_.push_back({Reference::Kind::Role, {}, role.text, role.span});
        const Token& priv = identifier("privilege (create, modify, delete or query)");
        auto privilege = parse_privilege(priv.text);
        if (!privilege) {
            error(priv.span, "privilege (create, modify, delete or query)", "'" + priv.text + "'");
            throw Abort{};
        }
        expect_word("on");
        std::string cls = class_ref();
        expect_symbol(";");
        std::string key = role.text + " " + priv.text + " " + cls;
        if (!grant_keys_.insert(key).second) return error(at, "unique grant", "duplicate 'grant " + key + "'");
        model_.privilege_grants.push_back({role.text, cls, *privilege});
    }

    void responsible_decl() {
        SourceSpan at = advance().span;
        const Token& role = identifier("role name");
        refs_.push_back({Reference::Kind::Role, {}, role.text, role.span});
        expect_word("for");
        const Token& process = identifier("process name");
        refs_.push_back({Reference::Kind::Process, {}, process.text, process.span});
        expect_symbol(";");
        if (!responsibility_keys_.insert({role.text, process.text}).second) {
            return error(at, "unique responsibility", "duplicate 'responsible " + role.text + " for " + process.text + "'");
        }
        model_.responsibilities.push_back({role.text, process.text});
    }

    // ── conditions ──
    //   expr   := term (("or" | "xor") term)*
    //   term   := factor ("and" factor)*
    //   factor := "not"? (class | "(" expr ")" | same_ancestor(a, b, c))

    Condition expr() {
        std::vector<Condition> operands{term()};
        std::optional<Condition::Kind> op;
        while (check_connective("or") || check_connective("xor")) {
            auto next = check_connective("or") ? Condition::Kind::Or : Condition::Kind::Xor;
            advance();
            if (op && *op != next) {
                Condition grouped = Condition::make(*op, std::move(operands));
                operands.clear();
                operands.push_back(std::move(grouped));
            }
            op = next;
            operands.push_back(term());
        }
        if (!op) return std::move(operands.front());
        return Condition::make(*op, std::move(operands));
    }

    Condition term() {
        std::vector<Condition> operands{factor()};
        while (check_connective("and")) {
            advance();
            operands.push_back(factor());
        }
        if (operands.size() == 1) return std::move(operands.front());
        return Condition::all_of(std::move(operands));
    }

    Condition factor() {
        if (check_connective("not")) {
            advance();
            if (check_connective("not")) fail("class name or '('");
            return Condition::negate(operand());
        }
        return operand();
    }

    Condition operand() {
        if (check_symbol("(")) {
            advance();
            Condition inner = expr();
            expect_symbol(")");
            return inner;
        }
        if (check_word("same_ancestor")) {
            if (!allow_guards_) fail("class name (same_ancestor is only allowed in effect guards)");
            advance();
            expect_symbol("(");
            std::string first = class_ref();
            expect_symbol(",");
            std::string second = class_ref();
            expect_symbol(",");
            std::string ancestor = class_ref();
            expect_symbol(")");
            return Condition::same_ancestor(first, second, ancestor);
        }
        if (peek().kind != Token::Kind::Ident || is_connective(peek().text)) fail("class name or '('");
        return Condition::atom(class_ref());
    }

    // ── name resolution ──

    void resolve_references() {
        for (const Reference& r : refs_) {
            switch (r.kind) {
                case Reference::Kind::Class:
                    if (!class_names_.contains(r.name)) error(r.span, "declared class", "'" + r.name + "'");
                    break;
                case Reference::Kind::Process:
                    if (!process_names_.contains(r.name)) error(r.span, "declared process", "'" + r.name + "'");
                    break;
                case Reference::Kind::Role:
                    if (!role_names_.contains(r.name)) error(r.span, "declared role", "'" + r.name + "'");
                    break;
                case Reference::Kind::Attribute:
                case Reference::Kind::Method: {
                    const ClassDef* cls = model_.find_class(r.owner);
                    if (!cls) break;  // the owner reference already reported it
                    bool attr = r.kind == Reference::Kind::Attribute;
                    const auto& members = attr ? cls->attributes : cls->methods;
                    if (std::ranges::find(members, r.name) == members.end()) {
                        error(r.span, std::string(attr ? "attribute" : "method") + " declared on " + r.owner,
                              "'" + r.name + "'");
                    }
                    break;
                }
            }
        }
        std::ranges::stable_sort(errors_, {}, [](const ParseError& e) { return e.span.offset; });
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    bool first_error_only_ = false;
    bool allow_guards_ = false;
    std::vector<ParseError> errors_;
    std::vector<Reference> refs_;
    ModelSpec model_;

    std::set<std::string> class_names_, process_names_, role_names_, access_view_owners_, loop_ends_, grant_keys_;
    std::set<std::pair<std::string, std::string>> ed_pairs_, ds_pairs_, back_inactive_pairs_, responsibility_keys_;
};

}  // namespace

ParseResult parse_model(std::string_view text, const ParseOptions& options) {
    return Parser(text, options).parse_model();
}

std::optional<Condition> parse_condition(std::string_view text, std::vector<ParseError>* errors, bool allow_guards) {
    return Parser(text, ParseOptions{}).parse_standalone_condition(allow_guards, errors);
}

}  // namespace iasdo
