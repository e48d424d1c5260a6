#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace wulff {

/// Key of a reproducible random stream.
struct RngSeed
{
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    /// Child stream for task `index`; independent of scheduling order.
    RngSeed derive(std::uint64_t index) const;

    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

} // namespace detail

inline RngSeed RngSeed::derive(std::uint64_t index) const
{
    return {seed, detail::mix64(stream ^ detail::mix64(index + detail::golden_gamma))};
}

/// Counter-based generator: the i-th output is a pure function of (seed, stream, i).
class CounterRng
{
public:
    using result_type = std::uint64_t;

    explicit CounterRng(RngSeed key)
        : key_(detail::mix64(key.seed + detail::golden_gamma) ^ detail::mix64(~key.stream))
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return at(counter_++); }

    result_type at(std::uint64_t counter) const
    {
        return detail::mix64(key_ + (counter + 1) * detail::golden_gamma);
    }

    std::uint64_t counter() const { return counter_; }
    void seek(std::uint64_t counter) { counter_ = counter; has_spare_ = false; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>((*this)() % span);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Randomly shifted Halton sequence (Cranley-Patterson rotation). Each point is
/// marginally uniform on [0,1)^d while the set has low discrepancy.
class ShiftedHalton
{
public:
    ShiftedHalton(int dimension, RngSeed key) : shift_(static_cast<std::size_t>(dimension))
    {
        static constexpr std::array<int, 16> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
        CounterRng rng(key);
        for (int i = 0; i < dimension; ++i) {
            bases_.push_back(primes[static_cast<std::size_t>(i) % primes.size()]);
            shift_[static_cast<std::size_t>(i)] = rng.uniform();
        }
    }

    /// Writes the next point into `out` (size = dimension).
    template <typename Out>
    void next(Out& out)
    {
        ++index_;
        for (std::size_t d = 0; d < bases_.size(); ++d) {
            double v = radical_inverse(index_, bases_[d]) + shift_[d];
            out[static_cast<Eigen::Index>(d)] = v >= 1.0 ? v - 1.0 : v;
        }
    }

private:
    static double radical_inverse(std::uint64_t i, int base)
    {
        double f = 1.0;
        double r = 0.0;
        while (i > 0) {
            f /= base;
            r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
            i /= static_cast<std::uint64_t>(base);
        }
        return r;
    }

    std::vector<int> bases_;
    std::vector<double> shift_;
    std::uint64_t index_ = 0;
};

} // namespace wulff
