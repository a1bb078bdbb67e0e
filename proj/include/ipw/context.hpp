#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipw {

struct ContextError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coordinate system split into base variables x_1..x_m (coordinates on the
/// submanifold S) and normal variables y_1..y_q (fiber coordinates of the
/// normal bundle). The ambient ordering is base ++ normal.
class VarContext {
public:
    VarContext(std::vector<std::string> base_vars, std::vector<std::string> normal_vars,
               unsigned exponent_cap = 64)
        : base_(std::move(base_vars)), normal_(std::move(normal_vars)), cap_(exponent_cap) {
        if (base_.empty() && normal_.empty())
            throw ContextError("variable context must declare at least one variable");
        std::vector<std::string> all = base_;
        all.insert(all.end(), normal_.begin(), normal_.end());
        std::vector<std::string> sorted = all;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ContextError("variable names must be pairwise distinct");
        names_ = std::move(all);
    }

    std::size_t base_count() const { return base_.size(); }
    std::size_t normal_count() const { return normal_.size(); }
    std::size_t total() const { return names_.size(); }
    unsigned exponent_cap() const { return cap_; }

    const std::vector<std::string>& base_vars() const { return base_; }
    const std::vector<std::string>& normal_vars() const { return normal_; }
    const std::vector<std::string>& all_vars() const { return names_; }

    const std::string& name(std::size_t i) const { return names_.at(i); }
    bool is_normal(std::size_t i) const { return i >= base_.size(); }

    std::optional<std::size_t> find(const std::string& v) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == v) return i;
        return std::nullopt;
    }

    std::size_t index_of(const std::string& v) const {
        if (auto i = find(v)) return *i;
        throw ContextError("unknown variable: " + v);
    }

    friend bool operator==(const VarContext& a, const VarContext& b) {
        return a.base_ == b.base_ && a.normal_ == b.normal_;
    }

private:
    std::vector<std::string> base_;
    std::vector<std::string> normal_;
    std::vector<std::string> names_;
    unsigned cap_;
};

using ContextPtr = std::shared_ptr<const VarContext>;

inline ContextPtr make_context(std::vector<std::string> base_vars,
                               std::vector<std::string> normal_vars,
                               unsigned exponent_cap = 64) {
    return std::make_shared<VarContext>(std::move(base_vars), std::move(normal_vars), exponent_cap);
}

inline void require_same_context(const ContextPtr& a, const ContextPtr& b) {
    if (a == b) return;
    if (!a || !b || !(*a == *b)) throw ContextError("variable context mismatch");
}

} // namespace ipw
