// SPDX-License-Identifier: Apache-2.0
//
// cranhp - hybrid precoding simulator for C-RAN massive MIMO with capacity-limited fronthauls
// Copyright (C) 2026 The cranhp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CRANHP_RNG_HPP
#define CRANHP_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace cranhp
{

// Purpose tags keep independent random streams apart even when the remaining
// key fields coincide.
enum class StreamTag : std::uint64_t
{
    PathAngles = 1,
    ChannelDraw = 2,
    TestData = 3,
};

struct StreamKey
{
    std::uint64_t master_seed = 0;
    StreamTag tag = StreamTag::TestData;
    std::uint64_t a = 0; // usually UE index
    std::uint64_t b = 0; // usually RRH index
    std::uint64_t c = 0; // usually trial index
};

// Stateless SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_seed(const StreamKey &key)
{
    std::uint64_t h = mix64(key.master_seed);
    h = mix64(h ^ static_cast<std::uint64_t>(key.tag));
    h = mix64(h ^ key.a);
    h = mix64(h ^ key.b);
    h = mix64(h ^ key.c);
    return h;
}

// A random stream derived from a key; streams with distinct keys are independent
// and the sequence depends only on the key, never on execution order.
class RandomStream
{
public:
    explicit RandomStream(const StreamKey &key) : engine_(stream_seed(key)) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    double normal() { return normal_(engine_); }

    // CN(0, variance): real and imaginary parts each carry variance/2.
    std::complex<double> complex_normal(double variance = 1.0)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace cranhp

#endif
