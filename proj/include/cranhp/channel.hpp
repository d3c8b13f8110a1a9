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

#ifndef CRANHP_CHANNEL_HPP
#define CRANHP_CHANNEL_HPP

#include "cranhp/numerics.hpp"
#include "cranhp/rng.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace cranhp
{

// Half-wavelength ULA response: entry n is exp(-j*pi*n*cos(phi)).
CVector steering_vector(double phi, int N);

struct MultipathProfile
{
    std::vector<double> angles;    // radians, [0, 2*pi)
    std::vector<double> variances; // path-gain variances, sum to one
};

// n_paths angles drawn uniformly on [0, 2*pi) with equal variances 1/n_paths.
MultipathProfile draw_profile(int n_paths, RandomStream &rng);

// Profile with the given angles and equal variances.
MultipathProfile equal_power_profile(std::vector<double> angles);

struct SpatialCovariance
{
    CMatrix R;            // N x N, linear power
    double pathloss = 1;  // d^-eta
    double distance = 1;  // meters (0 when the pathloss was given directly)
    double eta = 0;       // exponent (0 when the pathloss was given directly)
};

// R = d^-eta * sum_i v_i a(phi_i) a(phi_i)^H.
SpatialCovariance make_covariance(const MultipathProfile &profile, double distance, double eta, int N);

// Same construction with the large-scale gain given directly.
SpatialCovariance make_covariance_from_pathloss(const MultipathProfile &profile, double pathloss, int N);

// Geometry that fully determines a covariance set. Matrices are always rebuilt
// from it, never stored.
struct ChannelGeometry
{
    int N = 0;
    int L = 0;
    int K = 0;
    double eta = 3.0;
    std::vector<std::vector<double>> distances;            // [K][L]
    std::vector<std::vector<std::vector<double>>> angles;  // [K][L][n_paths]
    std::vector<std::vector<double>> pathloss_override;    // [K][L], optional; replaces d^-eta

    nlohmann::json to_json() const;
    static ChannelGeometry from_json(const nlohmann::json &doc);
};

// Draws the frozen path angles of every (UE, RRH) pair from the PathAngles stream.
ChannelGeometry draw_geometry(int N, int L, int K, double eta, const std::vector<std::vector<double>> &distances,
                              int n_paths, std::uint64_t seed);

class CovarianceSet
{
public:
    CovarianceSet() = default;
    explicit CovarianceSet(const ChannelGeometry &geometry);
    CovarianceSet(int N, int L, int K, std::vector<SpatialCovariance> pairs);

    int N() const { return N_; }
    int L() const { return L_; }
    int K() const { return K_; }
    int Nbar() const { return N_ * L_; }

    const SpatialCovariance &pair(int k, int l) const { return pairs_[index(k, l)]; }
    const CMatrix &R(int k, int l) const { return pairs_[index(k, l)].R; }
    const CMatrix &sqrtR(int k, int l) const { return roots_[index(k, l)]; }

    // Block-diagonal aggregate R_k of size Nbar x Nbar.
    CMatrix aggregate(int k) const;

    // All R_{k,l} for one RRH, ordered by UE.
    std::vector<CMatrix> per_rrh(int l) const;

private:
    std::size_t index(int k, int l) const;

    int N_ = 0, L_ = 0, K_ = 0;
    std::vector<SpatialCovariance> pairs_; // k-major
    std::vector<CMatrix> roots_;
};

struct ChannelRealization
{
    CMatrix H; // K x Nbar, row k is h_k^H
    int N = 0;
    int L = 0;

    // h_k as a column vector of length Nbar
    CVector h(int k) const { return H.row(k).adjoint(); }
    CVector h(int k, int l) const { return H.row(k).segment(l * N, N).adjoint(); }
};

// h_{k,l} = R_{k,l}^{1/2} g with g ~ CN(0, I), one stream per (trial, k, l).
ChannelRealization sample_channel(const CovarianceSet &cov, std::uint64_t seed, std::uint64_t trial);

} // namespace cranhp

#endif
