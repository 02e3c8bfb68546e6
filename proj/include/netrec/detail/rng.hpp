#ifndef NETREC_DETAIL_RNG_HPP
#define NETREC_DETAIL_RNG_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace netrec::detail {

// Seeded RNG with a portable bounded draw. std::shuffle and
// std::uniform_int_distribution are implementation-defined, so partitioning
// code draws through this wrapper to keep splits byte-identical across
// toolchains.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, n); n must be > 0.
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
};

template <typename T>
void shuffle(std::vector<T>& values, SeededRng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[rng.below(i)]);
    }
}

}  // namespace netrec::detail

#endif
