#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace kwt {

using Engine = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of realization/path `index` under `base`. Depends only on the pair,
// so realization i is the same no matter how many realizations run.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return mix64(base ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Named sub-streams of one path seed.
enum class Stream : std::uint64_t { eps = 1, eta = 2, presample = 3 };

inline Engine make_engine(std::uint64_t seed, Stream stream) {
    return Engine{derive_seed(seed, static_cast<std::uint64_t>(stream))};
}

inline std::vector<double> standard_normals(Engine& engine, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& v : out) v = normal(engine);
    return out;
}

}  // namespace kwt
