#include "potlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace potlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-12;
}  // namespace

Distribution Distribution::atomic(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("atomic: no atoms");
    std::sort(atoms.begin(), atoms.end());
    Distribution d;
    d.kind_ = DistKind::atomic;
    for (const auto& [v, m] : atoms) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("atomic: values must be finite and non-negative");
        if (!(m > 0.0))
            throw std::invalid_argument("atomic: masses must be positive");
        if (!d.values_.empty() && v == d.values_.back())
            d.masses_.back() += m;  // merge equal values
        else {
            d.values_.push_back(v);
            d.masses_.push_back(m);
        }
    }
    double total = 0.0;
    for (double m : d.masses_) total += m;
    if (std::abs(total - 1.0) > kMassTol)
        throw std::invalid_argument("atomic: masses must sum to 1 within 1e-12");
    for (double& m : d.masses_) m /= total;

    const size_t k = d.values_.size();
    d.cum_.resize(k);
    d.suffix_mass_.assign(k + 1, 0.0);
    d.suffix_vm_.assign(k + 1, 0.0);
    double c = 0.0;
    for (size_t i = 0; i < k; ++i) {
        c += d.masses_[i];
        d.cum_[i] = c;
    }
    d.cum_[k - 1] = 1.0;
    for (size_t i = k; i-- > 0;) {
        d.suffix_mass_[i] = d.suffix_mass_[i + 1] + d.masses_[i];
        d.suffix_vm_[i] = d.suffix_vm_[i + 1] + d.masses_[i] * d.values_[i];
    }
    d.lo_ = d.values_.front();
    d.hi_ = d.values_.back();
    d.mean_ = d.suffix_vm_[0];
    return d;
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw std::invalid_argument("uniform: need 0 <= lo < hi < inf");
    Distribution d;
    d.kind_ = DistKind::uniform;
    d.a_ = lo;
    d.b_ = hi;
    d.lo_ = lo;
    d.hi_ = hi;
    d.mean_ = 0.5 * (lo + hi);
    return d;
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
    Distribution d;
    d.kind_ = DistKind::exponential;
    d.a_ = rate;
    d.lo_ = 0.0;
    d.hi_ = kInf;
    d.mean_ = 1.0 / rate;
    return d;
}

Distribution Distribution::mixture(Distribution base, double epsilon, int n) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("mixture: epsilon must be positive");
    if (n < 1) throw std::invalid_argument("mixture: n must be positive");
    Distribution d;
    d.kind_ = DistKind::mixture;
    double r = epsilon / (static_cast<double>(n) * n * n);
    d.weight_ = r / (1.0 + r);
    d.mix_eps_ = epsilon;
    d.mix_n_ = n;
    d.lo_ = 0.0;
    d.hi_ = kInf;
    d.mean_ = (1.0 - d.weight_) * base.mean() + d.weight_;
    d.base_ = std::make_shared<const Distribution>(std::move(base));
    return d;
}

Distribution Distribution::hard_instance(const HardInstanceParams& p) {
    if (p.n < 2) throw std::invalid_argument("hard_instance: n must be >= 2");
    if (!(p.beta >= 1.0 && p.beta <= p.n))
        throw std::invalid_argument("hard_instance: beta must lie in [1, n]");
    const double n = p.n;
    const double e2 = std::exp(2.0);
    const double m_top = 1.0 / (n * n * n);
    const double m_mid = p.beta / n;
    if (m_top + m_mid > 1.0)
        throw std::invalid_argument("hard_instance: 1/n^3 + beta/n must be <= 1");
    const double v_top = 2.0 * n * (e2 - 3.0) / (e2 + 1.0);
    const double v_mid = 4.0 / (n * (e2 + 1.0));
    return atomic({{0.0, 1.0 - m_top - m_mid}, {v_mid, m_mid}, {v_top, m_top}});
}

Distribution smooth(const Distribution& dist, double epsilon, int n) {
    return Distribution::mixture(dist, epsilon, n);
}

double Distribution::cdf(double x) const {
    switch (kind_) {
        case DistKind::atomic: {
            if (x < values_.front()) return 0.0;
            auto it = std::upper_bound(values_.begin(), values_.end(), x);
            return cum_[static_cast<size_t>(it - values_.begin()) - 1];
        }
        case DistKind::uniform:
            if (x < a_) return 0.0;
            if (x >= b_) return 1.0;
            return (x - a_) / (b_ - a_);
        case DistKind::exponential:
            if (x < 0.0) return 0.0;
            return -std::expm1(-a_ * x);
        case DistKind::mixture:
            if (x < 0.0) return 0.0;
            return (1.0 - weight_) * base_->cdf(x) - weight_ * std::expm1(-x);
    }
    return 0.0;
}

double Distribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("quantile: p outside [0,1]");
    switch (kind_) {
        case DistKind::atomic: {
            auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
            if (it == cum_.end()) return values_.back();
            return values_[static_cast<size_t>(it - cum_.begin())];
        }
        case DistKind::uniform:
            return a_ + p * (b_ - a_);
        case DistKind::exponential:
            if (p == 1.0) return kInf;
            return -std::log1p(-p) / a_;
        case DistKind::mixture: {
            if (p == 0.0) return 0.0;
            if (p == 1.0) return kInf;
            double lo = 0.0, hi = 1.0;
            while (cdf(hi) < p) {
                hi *= 2.0;
                if (hi > 1e300) return kInf;
            }
            for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + hi); ++i) {
                double mid = 0.5 * (lo + hi);
                if (cdf(mid) < p)
                    lo = mid;
                else
                    hi = mid;
            }
            return hi;
        }
    }
    return 0.0;
}

double Distribution::partial_expectation(double c) const {
    if (c <= 0.0) return mean_ - c;
    switch (kind_) {
        case DistKind::atomic: {
            auto it = std::upper_bound(values_.begin(), values_.end(), c);
            size_t i = static_cast<size_t>(it - values_.begin());
            return suffix_vm_[i] - c * suffix_mass_[i];
        }
        case DistKind::uniform:
            if (c >= b_) return 0.0;
            if (c <= a_) return mean_ - c;
            return (b_ - c) * (b_ - c) / (2.0 * (b_ - a_));
        case DistKind::exponential:
            return std::exp(-a_ * c) / a_;
        case DistKind::mixture:
            return (1.0 - weight_) * base_->partial_expectation(c) +
                   weight_ * std::exp(-c);
    }
    return 0.0;
}

double Distribution::integrate_cdf(double a, double b) const {
    if (!(b > a)) return 0.0;
    return (b - a) - partial_expectation(a) + partial_expectation(b);
}

double Distribution::top_quantile_integral(double q) const {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("top_quantile_integral: q outside [0,1]");
    if (q == 0.0) return 0.0;
    if (kind_ == DistKind::atomic) {
        if (q >= 1.0) return mean_;
        // smallest i with suffix_mass_[i+1] < q <= suffix_mass_[i]
        size_t i = values_.size() - 1;
        while (i > 0 && suffix_mass_[i] < q) --i;
        return suffix_vm_[i + 1] + values_[i] * (q - suffix_mass_[i + 1]);
    }
    double z = quantile(1.0 - q);
    return z * q + partial_expectation(z);
}

std::vector<double> Distribution::breakpoints() const {
    switch (kind_) {
        case DistKind::atomic:
            return values_;
        case DistKind::uniform:
            return {a_, b_};
        case DistKind::exponential:
            return {};
        case DistKind::mixture:
            return base_->breakpoints();
    }
    return {};
}

const std::vector<double>& Distribution::atom_values() const {
    if (kind_ != DistKind::atomic) throw std::logic_error("not an atomic distribution");
    return values_;
}

const std::vector<double>& Distribution::atom_masses() const {
    if (kind_ != DistKind::atomic) throw std::logic_error("not an atomic distribution");
    return masses_;
}

const Distribution& Distribution::mixture_base() const {
    if (kind_ != DistKind::mixture) throw std::logic_error("not a mixture");
    return *base_;
}

}  // namespace potlab
