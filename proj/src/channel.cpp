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

#include "cranhp/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cranhp
{

CVector steering_vector(double phi, int N)
{
    if (N < 1)
        throw std::invalid_argument("steering_vector: N must be at least 1");
    CVector a(N);
    const double c = std::cos(phi);
    for (int n = 0; n < N; ++n)
        a(n) = std::polar(1.0, -std::numbers::pi * n * c);
    return a;
}

MultipathProfile draw_profile(int n_paths, RandomStream &rng)
{
    if (n_paths < 1)
        throw std::invalid_argument("draw_profile: need at least one path");
    std::vector<double> angles(n_paths);
    for (auto &phi : angles)
        phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return equal_power_profile(std::move(angles));
}

MultipathProfile equal_power_profile(std::vector<double> angles)
{
    if (angles.empty())
        throw std::invalid_argument("equal_power_profile: need at least one path");
    MultipathProfile p;
    p.variances.assign(angles.size(), 1.0 / static_cast<double>(angles.size()));
    p.angles = std::move(angles);
    return p;
}

static CMatrix unit_covariance(const MultipathProfile &profile, int N)
{
    if (profile.angles.size() != profile.variances.size() || profile.angles.empty())
        throw std::invalid_argument("make_covariance: malformed multipath profile");
    CMatrix R = CMatrix::Zero(N, N);
    for (std::size_t i = 0; i < profile.angles.size(); ++i)
    {
        if (profile.variances[i] < 0.0)
            throw std::invalid_argument("make_covariance: negative path variance");
        const CVector a = steering_vector(profile.angles[i], N);
        R.noalias() += profile.variances[i] * (a * a.adjoint());
    }
    return 0.5 * (R + R.adjoint());
}

SpatialCovariance make_covariance(const MultipathProfile &profile, double distance, double eta, int N)
{
    if (!(distance > 0.0))
        throw std::invalid_argument("make_covariance: distance must be positive");
    if (!(eta >= 2.0))
        throw std::invalid_argument("make_covariance: pathloss exponent must be at least 2");
    SpatialCovariance out = make_covariance_from_pathloss(profile, std::pow(distance, -eta), N);
    out.distance = distance;
    out.eta = eta;
    return out;
}

SpatialCovariance make_covariance_from_pathloss(const MultipathProfile &profile, double pathloss, int N)
{
    if (!(pathloss > 0.0))
        throw std::invalid_argument("make_covariance: pathloss must be positive");
    SpatialCovariance out;
    out.R = pathloss * unit_covariance(profile, N);
    out.pathloss = pathloss;
    out.distance = 0.0;
    out.eta = 0.0;
    return out;
}

nlohmann::json ChannelGeometry::to_json() const
{
    nlohmann::json doc;
    doc["N"] = N;
    doc["L"] = L;
    doc["K"] = K;
    doc["eta"] = eta;
    doc["distances"] = distances;
    doc["angles"] = angles;
    if (!pathloss_override.empty())
        doc["pathloss"] = pathloss_override;
    return doc;
}

ChannelGeometry ChannelGeometry::from_json(const nlohmann::json &doc)
{
    ChannelGeometry g;
    g.N = doc.at("N").get<int>();
    g.L = doc.at("L").get<int>();
    g.K = doc.at("K").get<int>();
    g.eta = doc.at("eta").get<double>();
    g.distances = doc.at("distances").get<std::vector<std::vector<double>>>();
    g.angles = doc.at("angles").get<std::vector<std::vector<std::vector<double>>>>();
    if (doc.contains("pathloss"))
        g.pathloss_override = doc.at("pathloss").get<std::vector<std::vector<double>>>();

    if (g.N < 1 || g.L < 1 || g.K < 1)
        throw std::invalid_argument("geometry: N, L and K must be positive");
    if (static_cast<int>(g.angles.size()) != g.K)
        throw std::invalid_argument("geometry: angles must have K rows");
    for (const auto &row : g.angles)
        if (static_cast<int>(row.size()) != g.L)
            throw std::invalid_argument("geometry: angles must have L entries per UE");
    if (g.pathloss_override.empty())
    {
        if (static_cast<int>(g.distances.size()) != g.K)
            throw std::invalid_argument("geometry: distances must have K rows");
        for (const auto &row : g.distances)
            if (static_cast<int>(row.size()) != g.L)
                throw std::invalid_argument("geometry: distances must have L entries per UE");
    }
    return g;
}

ChannelGeometry draw_geometry(int N, int L, int K, double eta, const std::vector<std::vector<double>> &distances,
                              int n_paths, std::uint64_t seed)
{
    ChannelGeometry g;
    g.N = N;
    g.L = L;
    g.K = K;
    g.eta = eta;
    g.distances = distances;
    g.angles.assign(K, std::vector<std::vector<double>>(L));
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
        {
            RandomStream rng({seed, StreamTag::PathAngles, static_cast<std::uint64_t>(k),
                              static_cast<std::uint64_t>(l), 0});
            g.angles[k][l] = draw_profile(n_paths, rng).angles;
        }
    return g;
}

CovarianceSet::CovarianceSet(const ChannelGeometry &geometry)
{
    std::vector<SpatialCovariance> pairs;
    pairs.reserve(static_cast<std::size_t>(geometry.K * geometry.L));
    const bool direct = !geometry.pathloss_override.empty();
    for (int k = 0; k < geometry.K; ++k)
        for (int l = 0; l < geometry.L; ++l)
        {
            const auto profile = equal_power_profile(geometry.angles.at(k).at(l));
            if (direct)
                pairs.push_back(make_covariance_from_pathloss(profile, geometry.pathloss_override.at(k).at(l), geometry.N));
            else
                pairs.push_back(make_covariance(profile, geometry.distances.at(k).at(l), geometry.eta, geometry.N));
        }
    *this = CovarianceSet(geometry.N, geometry.L, geometry.K, std::move(pairs));
}

CovarianceSet::CovarianceSet(int N, int L, int K, std::vector<SpatialCovariance> pairs)
    : N_(N), L_(L), K_(K), pairs_(std::move(pairs))
{
    if (N < 1 || L < 1 || K < 1)
        throw std::invalid_argument("CovarianceSet: N, L and K must be positive");
    if (pairs_.size() != static_cast<std::size_t>(K * L))
        throw std::invalid_argument("CovarianceSet: expected K*L covariance matrices");
    roots_.reserve(pairs_.size());
    for (const auto &p : pairs_)
    {
        if (p.R.rows() != N || p.R.cols() != N)
            throw std::invalid_argument("CovarianceSet: covariance must be N x N");
        roots_.push_back(psd_sqrt(p.R));
    }
}

std::size_t CovarianceSet::index(int k, int l) const
{
    if (k < 0 || k >= K_ || l < 0 || l >= L_)
        throw std::out_of_range("CovarianceSet: index out of range");
    return static_cast<std::size_t>(k * L_ + l);
}

CMatrix CovarianceSet::aggregate(int k) const
{
    std::vector<CMatrix> blocks;
    blocks.reserve(L_);
    for (int l = 0; l < L_; ++l)
        blocks.push_back(R(k, l));
    return block_diag(blocks);
}

std::vector<CMatrix> CovarianceSet::per_rrh(int l) const
{
    std::vector<CMatrix> out;
    out.reserve(K_);
    for (int k = 0; k < K_; ++k)
        out.push_back(R(k, l));
    return out;
}

ChannelRealization sample_channel(const CovarianceSet &cov, std::uint64_t seed, std::uint64_t trial)
{
    const int N = cov.N();
    ChannelRealization out;
    out.N = N;
    out.L = cov.L();
    out.H.resize(cov.K(), cov.Nbar());
    CVector g(N);
    for (int k = 0; k < cov.K(); ++k)
        for (int l = 0; l < cov.L(); ++l)
        {
            RandomStream rng({seed, StreamTag::ChannelDraw, static_cast<std::uint64_t>(k),
                              static_cast<std::uint64_t>(l), trial});
            for (int n = 0; n < N; ++n)
                g(n) = rng.complex_normal();
            const CVector h = cov.sqrtR(k, l) * g;
            out.H.row(k).segment(l * N, N) = h.adjoint();
        }
    return out;
}

} // namespace cranhp
