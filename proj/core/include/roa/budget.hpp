#pragma once

#include <optional>
#include <string>

namespace roa {

/// Explicit (B1, R, B2, m) overrides; any subset may be set. B2 = 0 is
/// accepted for baseline methods that run no inner bootstrap levels.
struct AllocationOverrides {
    std::optional<long> b1;
    std::optional<long> r;
    std::optional<long> b2;
    std::optional<long> m;
};

/// Itemized run accounting. The nominal count follows the budget identity
/// N = B1 R B2 (the inner bootstrap runs are the budget and star runs are
/// shared); the full count prices every model evaluation:
/// B1 R (1 + 2 B2) star/2star/3star runs, B1 control-variate extras, and R
/// baseline replications. Both are reported, neither is hidden.
struct BudgetLedger {
    long star = 0;
    long two_star = 0;
    long three_star = 0;
    long cv_extra = 0;
    long baseline = 0;
    long nominal = 0; // B1 R max(B2, 1)
    long full = 0;    // star + two_star + three_star + cv_extra + baseline
    double overdraft_nominal = 0.0; // nominal / N - 1
    double overdraft_full = 0.0;    // full / N - 1
};

struct BudgetAllocation {
    long total_budget = 0;
    long n = 0;
    long m_star = 0;
    long b1 = 0;
    long r = 0;
    long b2 = 0;
    bool overridden = false;
    BudgetLedger ledger;

    double kappa() const { return static_cast<double>(m_star) / static_cast<double>(n); }
};

/// Subsample size: Theta(N^{1/3}) while N <= n^{3/2}, Theta(sqrt(n)) beyond,
/// clamped to [2, n].
long optimal_m(long total_budget, long n);

/// Inner-level count from the bias-variance balance:
/// round of ((3 m^2 - m) / (m + 1))^{1/3}, floored at 1.
long optimal_b2(long m_star);

/// Fixed-budget allocation. The Theta constants are frozen so that
/// (N = 1000, n = 100) -> (B1, R, B2) = (50, 5, 4); allocation is
/// scale-monotone in N (none of B1, R, B2 ever decreases as N grows).
/// Overrides bypass the formulas but the ledger is still computed.
BudgetAllocation allocate(long total_budget, long n, const AllocationOverrides& overrides = {});

std::string describe(const BudgetAllocation& alloc);

} // namespace roa
