#include "sorient/pmi.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sorient/error.hpp"

namespace sorient {
namespace {

double log2_smoothed(std::uint64_t count, double epsilon) {
    return std::log2(static_cast<double>(count) + epsilon);
}

}  // namespace

ProxOperator parse_operator(std::string_view name) {
    if (name == "near") return ProxOperator::Near;
    if (name == "and") return ProxOperator::And;
    throw Error(Errc::InvalidConfig, fmt::format("unknown operator '{}' (near|and)", name));
}

SoForm parse_form(std::string_view name) {
    if (name == "product") return SoForm::Product;
    if (name == "disjunction") return SoForm::Disjunction;
    throw Error(Errc::InvalidConfig, fmt::format("unknown form '{}' (product|disjunction)", name));
}

std::string_view operator_name(ProxOperator op) noexcept { return op == ProxOperator::Near ? "near" : "and"; }

std::string_view form_name(SoForm form) noexcept {
    return form == SoForm::Product ? "product" : "disjunction";
}

void PmiConfig::validate() const {
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
        throw Error(Errc::InvalidConfig, fmt::format("epsilon must be a finite value > 0, got {}", epsilon));
    }
    if (epsilon == 0.0 && !allow_zero_epsilon) throw Error(Errc::InvalidConfig, "epsilon must be > 0");
    if (op == ProxOperator::Near && window < 1) throw Error(Errc::InvalidConfig, "NEAR window must be >= 1");
}

Query proximity_query(std::string_view word, const Query& other, const PmiConfig& cfg) {
    Query w = Query::term(std::string(word));
    if (cfg.op == ProxOperator::Near) return Query::near(std::move(w), other, cfg.window);
    return Query::all_of(std::move(w), other);
}

double pmi(const HitSource& hits, std::string_view w1, std::string_view w2, const PmiConfig& cfg) {
    cfg.validate();
    const auto joint = hits.hits(proximity_query(w1, Query::term(std::string(w2)), cfg));
    const auto h1 = hits.hits(Query::term(std::string(w1)));
    const auto h2 = hits.hits(Query::term(std::string(w2)));
    const double n = static_cast<double>(hits.doc_count());
    const double numerator = std::log2(n) + log2_smoothed(joint, cfg.epsilon);
    const double denominator = log2_smoothed(h1, cfg.epsilon) + log2_smoothed(h2, cfg.epsilon);
    return numerator - denominator;
}

SoPmi::SoPmi(const HitSource& hits, ParadigmSet paradigms, PmiConfig cfg, SoForm form)
    : hits_(hits),
      paradigms_(std::move(paradigms)),
      cfg_(cfg),
      form_(form),
      positive_group_(Query::any_of_terms(paradigms_.positive())),
      negative_group_(Query::any_of_terms(paradigms_.negative())) {
    cfg_.validate();
    if (form_ == SoForm::Product) {
        for (const auto& p : paradigms_.positive()) positive_marginal_ += smoothed_log2(hits_.hits(Query::term(p)));
        for (const auto& n : paradigms_.negative()) negative_marginal_ += smoothed_log2(hits_.hits(Query::term(n)));
    } else {
        positive_marginal_ = smoothed_log2(hits_.hits(positive_group_));
        negative_marginal_ = smoothed_log2(hits_.hits(negative_group_));
    }
}

double SoPmi::smoothed_log2(std::uint64_t count) const { return log2_smoothed(count, cfg_.epsilon); }

std::size_t SoPmi::queries_per_word() const noexcept {
    return form_ == SoForm::Product ? paradigms_.size() : 2;
}

double SoPmi::score(std::string_view word) const {
    return form_ == SoForm::Product ? product(word) : disjunction(word);
}

double SoPmi::product(std::string_view word) const {
    double num = 0.0;
    for (const auto& p : paradigms_.positive()) {
        num += smoothed_log2(hits_.hits(proximity_query(word, Query::term(p), cfg_)));
    }
    double den = 0.0;
    for (const auto& n : paradigms_.negative()) {
        den += smoothed_log2(hits_.hits(proximity_query(word, Query::term(n), cfg_)));
    }
    return (num + negative_marginal_) - (positive_marginal_ + den);
}

double SoPmi::disjunction(std::string_view word) const {
    const double num = smoothed_log2(hits_.hits(proximity_query(word, positive_group_, cfg_)));
    const double den = smoothed_log2(hits_.hits(proximity_query(word, negative_group_, cfg_)));
    return (num + negative_marginal_) - (positive_marginal_ + den);
}

double so_pmi_product(const HitSource& hits, std::string_view word, const ParadigmSet& paradigms,
                      const PmiConfig& cfg) {
    return SoPmi(hits, paradigms, cfg, SoForm::Product).score(word);
}

double so_pmi_disjunction(const HitSource& hits, std::string_view word, const ParadigmSet& paradigms,
                          const PmiConfig& cfg) {
    return SoPmi(hits, paradigms, cfg, SoForm::Disjunction).score(word);
}

}  // namespace sorient
