#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sorient/index.hpp"
#include "sorient/orientation.hpp"
#include "sorient/query.hpp"

namespace sorient {

enum class ProxOperator { Near, And };
enum class SoForm { Product, Disjunction };

ProxOperator parse_operator(std::string_view name);
SoForm parse_form(std::string_view name);
std::string_view operator_name(ProxOperator op) noexcept;
std::string_view form_name(SoForm form) noexcept;

struct PmiConfig {
    std::uint32_t window = kDefaultWindow;
    ProxOperator op = ProxOperator::Near;
    /// Added to every hit count before taking logs.
    double epsilon = 0.01;
    /// Permits epsilon == 0. Zero counts then produce -inf/+inf (or NaN when
    /// both sides of a ratio vanish). Meant for hand-checkable tests only.
    bool allow_zero_epsilon = false;

    /// Throws InvalidConfig for epsilon < 0, epsilon == 0 without
    /// allow_zero_epsilon, a non-finite epsilon, or window < 1.
    void validate() const;
};

/// The co-occurrence query for `word` against `other`: NEAR/W or AND.
Query proximity_query(std::string_view word, const Query& other, const PmiConfig& cfg);

/// log2(N (hits(w1 PROX w2) + eps) / ((hits(w1) + eps)(hits(w2) + eps))), in bits.
double pmi(const HitSource& hits, std::string_view w1, std::string_view w2, const PmiConfig& cfg);

/// SO-PMI scorer for one paradigm set. The hit counts that do not involve
/// the scored word are queried once at construction, so each call to
/// score() issues |P| + |N| queries (product) or 2 (disjunction).
///
/// Product form:
///   log2 [ prod_p (h(w PROX p)+e) * prod_n (h(n)+e) ]
///      / [ prod_p (h(p)+e) * prod_n (h(w PROX n)+e) ]
/// Disjunction form, with P = OR of positives and Q = OR of negatives:
///   log2 [ (h(w PROX P)+e) (h(Q)+e) ] / [ (h(w PROX Q)+e) (h(P)+e) ]
///
/// With balanced paradigm lists the product form equals the sum of pmi()
/// over positives minus the sum over negatives.
class SoPmi {
public:
    SoPmi(const HitSource& hits, ParadigmSet paradigms, PmiConfig cfg, SoForm form = SoForm::Product);

    double score(std::string_view word) const;
    double operator()(std::string_view word) const { return score(word); }

    std::size_t queries_per_word() const noexcept;
    const ParadigmSet& paradigms() const noexcept { return paradigms_; }
    const PmiConfig& config() const noexcept { return cfg_; }
    SoForm form() const noexcept { return form_; }

private:
    double product(std::string_view word) const;
    double disjunction(std::string_view word) const;
    double smoothed_log2(std::uint64_t count) const;

    const HitSource& hits_;
    ParadigmSet paradigms_;
    PmiConfig cfg_;
    SoForm form_;
    Query positive_group_;
    Query negative_group_;
    // log2 of the word-independent factors: hits of the positive paradigms
    // (or of their OR-group) and likewise for the negatives.
    double positive_marginal_ = 0.0;
    double negative_marginal_ = 0.0;
};

double so_pmi_product(const HitSource& hits, std::string_view word, const ParadigmSet& paradigms,
                      const PmiConfig& cfg);
double so_pmi_disjunction(const HitSource& hits, std::string_view word, const ParadigmSet& paradigms,
                          const PmiConfig& cfg);

}  // namespace sorient
