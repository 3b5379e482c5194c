#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "stokesdd/channel.hpp"

namespace stokesdd {

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Independent generator for the work unit identified by `ids` (e.g. sweep
/// point and block index). Depends only on (seed, ids), never on scheduling.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids)
{
    std::uint64_t state = seed;
    std::uint64_t h = splitmix64(state);
    for (std::uint64_t id : ids) {
        state = h ^ (id + 0x632be59bd9b4e019ULL);
        h = splitmix64(state);
    }
    std::uint64_t words_state = h;
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(words_state)),
                      static_cast<std::uint32_t>(splitmix64(words_state)),
                      static_cast<std::uint32_t>(splitmix64(words_state)),
                      static_cast<std::uint32_t>(splitmix64(words_state))};
    return Rng(seq);
}

}  // namespace stokesdd
