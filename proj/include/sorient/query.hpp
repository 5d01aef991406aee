#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sorient {

inline constexpr std::uint32_t kDefaultWindow = 10;

/// Query tree over the positional index. Construction validates shape, so a
/// Query value is always well-formed: NEAR operands are a term or an OR of
/// terms, NEAR windows are at least 1, and AND/OR never have empty operands.
class Query {
public:
    enum class Kind { Term, Phrase, And, Or, Near };

    static Query term(std::string t);
    /// A one-token phrase collapses to a term.
    static Query phrase(std::vector<std::string> tokens);
    static Query all_of(Query a, Query b);
    /// A single alternative collapses to that alternative.
    static Query any_of(std::vector<Query> alternatives);
    static Query any_of_terms(const std::vector<std::string>& terms);
    static Query near(Query a, Query b, std::uint32_t window = kDefaultWindow);

    Kind kind() const noexcept { return kind_; }
    /// Term: one entry; Phrase: tokens in order. Empty for other kinds.
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::vector<Query>& children() const noexcept { return children_; }
    std::uint32_t window() const noexcept { return window_; }

    /// True for a Term or an Or whose alternatives are all Terms.
    bool is_term_group() const noexcept;
    /// The terms of a term group, in query order.
    std::vector<std::string> group_terms() const;

    /// Canonical text in the CLI query grammar; parse_query(to_string()) == *this.
    std::string to_string() const;

    friend bool operator==(const Query&, const Query&) = default;

private:
    Query() = default;

    Kind kind_ = Kind::Term;
    std::vector<std::string> terms_;
    std::vector<Query> children_;
    std::uint32_t window_ = 0;
};

/// Parses the CLI query grammar:
///   or   := and ('OR' and)*
///   and  := near ('AND' near)*
///   near := atom ('NEAR' ['/' W] atom)?
///   atom := TERM | '"' TERM+ '"' | '(' or ')'
/// Keywords are uppercase; bare words are normalized with tokenize(), so a
/// word that splits into several tokens becomes a phrase. NEAR without /W
/// uses the default window of 10.
Query parse_query(std::string_view text);

}  // namespace sorient
