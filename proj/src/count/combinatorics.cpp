#include "fm/combinatorics.hpp"

#include <algorithm>

namespace fm {

Combinations combination_counts(std::span<const Count> counts, unsigned low, unsigned high) {
    const std::size_t t = counts.size();

    // power[i] = sum_j p_j^(i+1), for i in [0, t)
    std::vector<Count> power(t, 0);
    for (const Count& p : counts) {
        if (p < 0)
            throw InternalError("negative child count in combination_counts");
        Count x = p;
        for (std::size_t i = 0; i < t; ++i) {
            power[i] += x;
            x *= p;
        }
    }

    SVector s(t + 1);
    s[0] = 1;
    Count acc;
    Count term;
    for (std::size_t k = 1; k <= t; ++k) {
        acc = 0;
        for (std::size_t i = 0; i < k; ++i) {
            term = s[k - i - 1] * power[i];
            if (i % 2 == 0)
                acc += term;
            else
                acc -= term;
        }
        if (!mpz_divisible_ui_p(acc.get_mpz_t(), k))
            throw InternalError("S-vector recurrence: step " + std::to_string(k) + " is not divisible by " +
                                std::to_string(k));
        mpz_divexact_ui(s[k].get_mpz_t(), acc.get_mpz_t(), k);
        if (s[k] < 0)
            throw InternalError("S-vector recurrence produced a negative entry");
    }

    Combinations out{0, std::move(s)};
    const std::size_t top = std::min<std::size_t>(high, t);
    for (std::size_t k = low; k <= top; ++k)
        out.total += out.s[k];
    return out;
}

SVector eliminate_child(const SVector& s, const Count& p) {
    if (s.empty() || s[0] != 1)
        throw InternalError("eliminate_child: S must start with S_0 = 1");
    if (s.size() == 1)
        throw InternalError("eliminate_child: S has no children to eliminate");
    SVector out(s.size() - 1);
    out[0] = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
        out[i] = s[i] - p * out[i - 1];
        if (out[i] < 0)
            throw InternalError("eliminate_child: count " + p.get_str() + " is not a constituent of S");
    }
    if (s.back() != p * out.back())
        throw InternalError("eliminate_child: nonzero residual, count " + p.get_str() + " is not a constituent of S");
    return out;
}

SVector extend_child(const SVector& s, const Count& p) {
    SVector out(s.size() + 1);
    out[0] = s.empty() ? Count(1) : s[0];
    for (std::size_t i = 1; i < out.size(); ++i) {
        out[i] = p * s[i - 1];
        if (i < s.size())
            out[i] += s[i];
    }
    return out;
}

Count closed_form_count(GroupKind kind, std::span<const Count> counts) {
    Count out = kind == GroupKind::Xor ? 0 : 1;
    for (const Count& p : counts) {
        switch (kind) {
        case GroupKind::Mandatory: out *= p; break;
        case GroupKind::Optional:
        case GroupKind::Or: out *= p + 1; break;
        case GroupKind::Xor: out += p; break;
        }
    }
    if (kind == GroupKind::Or)
        out -= 1;
    return out;
}

} // namespace fm
