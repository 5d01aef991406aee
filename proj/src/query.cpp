#include "sorient/query.hpp"

#include <charconv>

#include <fmt/format.h>

#include "sorient/corpus.hpp"
#include "sorient/error.hpp"

namespace sorient {

Query Query::term(std::string t) {
    if (t.empty()) throw Error(Errc::MalformedQuery, "empty term");
    Query q;
    q.kind_ = Kind::Term;
    q.terms_.push_back(std::move(t));
    return q;
}

Query Query::phrase(std::vector<std::string> tokens) {
    if (tokens.empty()) throw Error(Errc::MalformedQuery, "empty phrase");
    for (const auto& t : tokens) {
        if (t.empty()) throw Error(Errc::MalformedQuery, "empty phrase token");
    }
    if (tokens.size() == 1) return term(std::move(tokens.front()));
    Query q;
    q.kind_ = Kind::Phrase;
    q.terms_ = std::move(tokens);
    return q;
}

Query Query::all_of(Query a, Query b) {
    Query q;
    q.kind_ = Kind::And;
    q.children_.push_back(std::move(a));
    q.children_.push_back(std::move(b));
    return q;
}

Query Query::any_of(std::vector<Query> alternatives) {
    if (alternatives.empty()) throw Error(Errc::MalformedQuery, "OR with no alternatives");
    if (alternatives.size() == 1) return std::move(alternatives.front());
    Query q;
    q.kind_ = Kind::Or;
    q.children_ = std::move(alternatives);
    return q;
}

Query Query::any_of_terms(const std::vector<std::string>& terms) {
    std::vector<Query> alts;
    alts.reserve(terms.size());
    for (const auto& t : terms) alts.push_back(term(t));
    return any_of(std::move(alts));
}

Query Query::near(Query a, Query b, std::uint32_t window) {
    if (window < 1) throw Error(Errc::MalformedQuery, "NEAR window must be >= 1");
    if (!a.is_term_group() || !b.is_term_group()) {
        throw Error(Errc::MalformedQuery, "NEAR operands must be terms or OR-groups of terms");
    }
    Query q;
    q.kind_ = Kind::Near;
    q.window_ = window;
    q.children_.push_back(std::move(a));
    q.children_.push_back(std::move(b));
    return q;
}

bool Query::is_term_group() const noexcept {
    if (kind_ == Kind::Term) return true;
    if (kind_ != Kind::Or) return false;
    for (const auto& c : children_) {
        if (c.kind_ != Kind::Term) return false;
    }
    return true;
}

std::vector<std::string> Query::group_terms() const {
    if (kind_ == Kind::Term) return terms_;
    std::vector<std::string> out;
    for (const auto& c : children_) out.push_back(c.terms_.front());
    return out;
}

std::string Query::to_string() const {
    switch (kind_) {
        case Kind::Term:
            return terms_.front();
        case Kind::Phrase:
            return fmt::format("\"{}\"", fmt::join(terms_, " "));
        case Kind::And:
            return fmt::format("({} AND {})", children_[0].to_string(), children_[1].to_string());
        case Kind::Or: {
            std::vector<std::string> parts;
            for (const auto& c : children_) parts.push_back(c.to_string());
            return fmt::format("({})", fmt::join(parts, " OR "));
        }
        case Kind::Near:
            return fmt::format("{} NEAR/{} {}", children_[0].to_string(), window_,
                               children_[1].to_string());
    }
    return {};
}

namespace {

struct Lexeme {
    enum class Type { Word, Quoted, LParen, RParen, End } type;
    std::string text;
    std::size_t offset;
};

std::vector<Lexeme> lex(std::string_view text) {
    std::vector<Lexeme> out;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (i < text.size()) {
        const char c = text[i];
        if (is_space(c)) {
            ++i;
        } else if (c == '(') {
            out.push_back({Lexeme::Type::LParen, "(", i++});
        } else if (c == ')') {
            out.push_back({Lexeme::Type::RParen, ")", i++});
        } else if (c == '"') {
            const std::size_t close = text.find('"', i + 1);
            if (close == std::string_view::npos) {
                throw Error(Errc::MalformedQuery, fmt::format("unterminated quote at offset {}", i));
            }
            out.push_back({Lexeme::Type::Quoted, std::string(text.substr(i + 1, close - i - 1)), i});
            i = close + 1;
        } else {
            const std::size_t start = i;
            while (i < text.size() && !is_space(text[i]) && text[i] != '(' && text[i] != ')' &&
                   text[i] != '"') {
                ++i;
            }
            out.push_back({Lexeme::Type::Word, std::string(text.substr(start, i - start)), start});
        }
    }
    out.push_back({Lexeme::Type::End, "", text.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lexemes_(lex(text)) {}

    Query parse() {
        Query q = parse_or();
        if (peek().type != Lexeme::Type::End) fail("unexpected '" + peek().text + "'");
        return q;
    }

private:
    const Lexeme& peek() const { return lexemes_[pos_]; }
    const Lexeme& next() { return lexemes_[pos_++]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::MalformedQuery, fmt::format("{} at offset {}", what, peek().offset));
    }

    bool at_keyword(std::string_view kw) const {
        return peek().type == Lexeme::Type::Word && peek().text == kw;
    }

    bool at_near() const {
        const auto& l = peek();
        return l.type == Lexeme::Type::Word && (l.text == "NEAR" || l.text.starts_with("NEAR/"));
    }

    Query parse_or() {
        std::vector<Query> alts;
        alts.push_back(parse_and());
        while (at_keyword("OR")) {
            next();
            alts.push_back(parse_and());
        }
        return Query::any_of(std::move(alts));
    }

    Query parse_and() {
        Query q = parse_near();
        while (at_keyword("AND")) {
            next();
            q = Query::all_of(std::move(q), parse_near());
        }
        return q;
    }

    Query parse_near() {
        Query left = parse_atom();
        if (!at_near()) return left;
        const std::string kw = next().text;
        std::uint32_t window = kDefaultWindow;
        if (kw.size() > 4) {
            const std::string_view digits = std::string_view(kw).substr(5);
            std::uint32_t w = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), w);
            if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
                throw Error(Errc::MalformedQuery, "bad NEAR window '" + kw + "'");
            }
            window = w;
        }
        Query right = parse_atom();
        if (at_near()) fail("chained NEAR");
        return Query::near(std::move(left), std::move(right), window);
    }

    Query parse_atom() {
        const Lexeme& l = peek();
        switch (l.type) {
            case Lexeme::Type::LParen: {
                next();
                Query inner = parse_or();
                if (peek().type != Lexeme::Type::RParen) fail("expected ')'");
                next();
                return inner;
            }
            case Lexeme::Type::Quoted: {
                auto tokens = tokenize(next().text);
                if (tokens.empty()) fail("empty phrase");
                return Query::phrase(std::move(tokens));
            }
            case Lexeme::Type::Word: {
                if (l.text == "AND" || l.text == "OR" || at_near()) fail("missing operand before '" + l.text + "'");
                auto tokens = tokenize(next().text);
                if (tokens.empty()) fail("word has no indexable characters");
                return Query::phrase(std::move(tokens));
            }
            default:
                fail("missing operand");
        }
    }

    std::vector<Lexeme> lexemes_;
    std::size_t pos_ = 0;
};

}  // namespace

Query parse_query(std::string_view text) { return Parser(text).parse(); }

}  // namespace sorient
