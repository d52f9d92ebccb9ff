#pragma once
#include <cstdint>
#include <random>
#include <string_view>

namespace subfou {

std::uint64_t splitmix64(std::uint64_t x);

// Replicate r draws from mt19937_64 seeded with splitmix64(master ^ splitmix64(r)).
struct SeedPolicy {
    std::uint64_t master_seed = 20240601;

    std::uint64_t stream_seed(std::uint64_t r) const;
    std::mt19937_64 stream(std::uint64_t r) const { return std::mt19937_64(stream_seed(r)); }
    // A seed-disjoint policy for auxiliary runs (e.g. pilot samples); tag is hashed (FNV-1a).
    SeedPolicy derive(std::string_view tag) const;
};

} // namespace subfou
