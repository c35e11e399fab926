#include "roa/budget.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace roa {

namespace {

// Calibrated once against the (N=1000, n=100) -> (50, 5, 4) fixed point and
// frozen: R = floor(kR m^{2/3}), B2 = floor(kB2 m^{1/3}), so R B2 <= 2 m and
// both are non-decreasing in m.
constexpr double kRConst = 5.0 / 4.641588833612779;  // 5 / 10^{2/3}
constexpr double kB2Const = 4.0 / 2.154434690031884; // 4 / 10^{1/3}
constexpr double kEps = 1e-9;

// Continuous subsample size before rounding; shared by optimal_m and the B1
// rule so that B1 stays monotone across the m* integer jumps.
double m_continuous(long total_budget, long n) {
    const double N = static_cast<double>(total_budget);
    const double nd = static_cast<double>(n);
    double m = (N <= std::pow(nd, 1.5)) ? std::cbrt(N) : std::sqrt(nd);
    return std::clamp(m, 2.0, nd);
}

BudgetLedger make_ledger(long N, long b1, long r, long b2) {
    BudgetLedger led;
    led.star = b1 * r;
    led.two_star = b1 * r * b2;
    led.three_star = b1 * r * b2;
    led.cv_extra = b1;
    led.baseline = r;
    led.nominal = b1 * r * std::max(b2, 1L);
    led.full = led.star + led.two_star + led.three_star + led.cv_extra + led.baseline;
    led.overdraft_nominal = static_cast<double>(led.nominal) / static_cast<double>(N) - 1.0;
    led.overdraft_full = static_cast<double>(led.full) / static_cast<double>(N) - 1.0;
    return led;
}

} // namespace

long optimal_m(long total_budget, long n) {
    if (total_budget < 8) throw std::invalid_argument("optimal_m: need N >= 8");
    if (n < 2) throw std::invalid_argument("optimal_m: need n >= 2");
    const double m = m_continuous(total_budget, n);
    return std::clamp(static_cast<long>(std::llround(m)), 2L, n);
}

long optimal_b2(long m_star) {
    if (m_star < 2) throw std::invalid_argument("optimal_b2: need m >= 2");
    const double m = static_cast<double>(m_star);
    const double expr = (3.0 * m * m - m) / (m + 1.0);
    return std::max(1L, static_cast<long>(std::llround(std::cbrt(expr))));
}

BudgetAllocation allocate(long total_budget, long n, const AllocationOverrides& ov) {
    if (total_budget < 8) throw std::invalid_argument("allocate: budget too small (N >= 8)");
    if (n < 2) throw std::invalid_argument("allocate: need n >= 2");

    BudgetAllocation alloc;
    alloc.total_budget = total_budget;
    alloc.n = n;

    const double m_cont = m_continuous(total_budget, n);
    alloc.m_star = ov.m.value_or(std::clamp(static_cast<long>(std::llround(m_cont)), 2L, n));
    if (alloc.m_star < 1 || alloc.m_star > n)
        throw std::invalid_argument("allocate: m override outside [1, n]");

    const double md = static_cast<double>(alloc.m_star);
    const long b2_rule = std::max(1L, static_cast<long>(std::floor(kB2Const * std::cbrt(md) + kEps)));
    const long r_rule =
        std::max(2L, static_cast<long>(std::floor(kRConst * std::pow(md, 2.0 / 3.0) + kEps)));
    const long b1_rule =
        std::max(2L, static_cast<long>(std::floor(static_cast<double>(total_budget) / (2.0 * m_cont))));

    alloc.b1 = ov.b1.value_or(b1_rule);
    alloc.r = ov.r.value_or(r_rule);
    alloc.b2 = ov.b2.value_or(b2_rule);
    alloc.overridden = ov.b1 || ov.r || ov.b2 || ov.m;

    if (alloc.b1 < 1 || alloc.r < 1 || alloc.b2 < 0)
        throw std::invalid_argument("allocate: infeasible budget (need B1, R >= 1 and B2 >= 0)");

    alloc.ledger = make_ledger(total_budget, alloc.b1, alloc.r, alloc.b2);
    return alloc;
}

std::string describe(const BudgetAllocation& a) {
    std::ostringstream os;
    os << "N=" << a.total_budget << " n=" << a.n << " m*=" << a.m_star << " B1=" << a.b1
       << " R=" << a.r << " B2=" << a.b2 << (a.overridden ? " (override)" : "")
       << " | runs: star=" << a.ledger.star << " 2star=" << a.ledger.two_star
       << " 3star=" << a.ledger.three_star << " cv=" << a.ledger.cv_extra
       << " baseline=" << a.ledger.baseline << " nominal=" << a.ledger.nominal
       << " full=" << a.ledger.full;
    return os.str();
}

} // namespace roa
