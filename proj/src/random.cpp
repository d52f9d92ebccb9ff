#include "subfou/random.hpp"

#include "subfou/format.hpp"

namespace subfou {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t SeedPolicy::stream_seed(std::uint64_t r) const {
    return splitmix64(master_seed ^ splitmix64(r));
}

SeedPolicy SeedPolicy::derive(std::string_view tag) const {
    return SeedPolicy{splitmix64(master_seed + splitmix64(fnv1a(tag)))};
}

} // namespace subfou
