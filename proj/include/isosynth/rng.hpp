// SPDX-License-Identifier: Apache-2.0
//
// isosynth - omni-equivalent channel synthesis from angle-resolved measurements
// Copyright (C) 2026 The isosynth authors
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

#ifndef ISOSYNTH_RNG_HPP
#define ISOSYNTH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace isosynth
{

// SplitMix64 finalizer. Platform-stable; used for all seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// seed = splitmix64(splitmix64(splitmix64(master) + stream) + substream)
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream = 0)
{
    return splitmix64(splitmix64(splitmix64(master) + stream) + substream);
}

// Random source with hand-written variate transforms on top of mt19937_64.
// The standard <random> distributions are implementation-defined, so they are
// not used anywhere reproducibility matters.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1), 53 random bits.
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open_low() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_open_low()) / rate; }

    // Standard normal via Box-Muller; both variates of a pair are used.
    double normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform_open_low()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Zero-mean Laplacian with scale b (standard deviation b*sqrt(2)).
    double laplace(double scale)
    {
        const double u = uniform() - 0.5;
        const double mag = 1.0 - 2.0 * std::abs(u);
        if (mag <= 0.0)
            return 0.0;
        return -scale * std::copysign(std::log(mag), u);
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace isosynth

#endif
