#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ballotlab/error.hpp"

namespace ballotlab {

struct McConfig {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    std::uint32_t stream_count = 64;
    std::uint64_t min_hits = 25;

    void validate() const {
        if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
        if (stream_count == 0) throw Error(ErrorCode::InvalidArgument, "stream_count must be positive");
        if (trials < stream_count) throw Error(ErrorCode::InvalidArgument, "trials must be >= stream_count");
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for a sub-experiment identified by integer coordinates.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(master);
    for (auto c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

// One pseudo-random stream; (seed, stream, salt) fully determines the output.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                          static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., bound-1}.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * bound) >> 64);
    }

    // Bin(count, 1/2) from raw bits.
    std::uint64_t fair_binomial(std::uint64_t count) {
        std::uint64_t ones = 0;
        while (count >= 64) {
            ones += static_cast<std::uint64_t>(std::popcount(engine_()));
            count -= 64;
        }
        if (count > 0) {
            ones += static_cast<std::uint64_t>(std::popcount(engine_() >> (64 - count)));
        }
        return ones;
    }

private:
    std::mt19937_64 engine_;
};

// Worker threads for Monte Carlo; BALLOTLAB_THREADS caps the count.
inline unsigned worker_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BALLOTLAB_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
        }
    }
    return n;
}

// Trial j runs on stream j mod stream_count. Each stream accumulates into its
// own Acc; the streams are then reduced in stream order, so the result does not
// depend on the thread count.
template <class Acc, class Body>
Acc run_streams(const McConfig& cfg, std::uint64_t salt, Body&& body) {
    cfg.validate();
    const std::uint32_t streams = cfg.stream_count;
    std::vector<Acc> partial(streams);
    auto run_one = [&](std::uint32_t s) {
        const std::uint64_t count = cfg.trials / streams + (s < cfg.trials % streams ? 1 : 0);
        StreamRng rng(cfg.seed, s, salt);
        body(rng, count, partial[s]);
    };
    const unsigned threads = std::min<unsigned>(worker_threads(), streams);
    if (threads <= 1) {
        for (std::uint32_t s = 0; s < streams; ++s) run_one(s);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::uint32_t s = t; s < streams; s += threads) run_one(s);
            });
        }
        for (auto& th : pool) th.join();
    }
    Acc total{};
    for (auto& p : partial) total += p;
    return total;
}

}  // namespace ballotlab
