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

#include "cranhp/evaluate.hpp"
#include "cranhp/detequiv.hpp"
#include "cranhp/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cranhp
{

RVector instantaneous_sinr_effective(const CMatrix &G, const CMatrix &F_BB_scaled, const RVector &Q, const RVector &p,
                                     double sigma2)
{
    const auto K = G.rows();
    if (F_BB_scaled.rows() != G.cols() || F_BB_scaled.cols() != K || Q.size() != G.cols() || p.size() != K)
        throw std::invalid_argument("instantaneous_sinr: dimension mismatch");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("instantaneous_sinr: noise power must be positive");

    const CMatrix A = G * F_BB_scaled; // A(k, i) = g_k^T f_i
    const RVector quant = G.cwiseAbs2() * Q;
    RVector sinr(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        double interference = 0.0;
        for (Eigen::Index i = 0; i < K; ++i)
            if (i != k)
                interference += p(i) * std::norm(A(k, i));
        sinr(k) = p(k) * std::norm(A(k, k)) / (interference + quant(k) + sigma2);
    }
    return sinr;
}

RVector instantaneous_sinr(const CMatrix &H, const CMatrix &F_RF, const CMatrix &F_BB_scaled, const RVector &Q,
                           const RVector &p, double sigma2)
{
    if (H.cols() != F_RF.rows())
        throw std::invalid_argument("instantaneous_sinr: H and F_RF do not conform");
    return instantaneous_sinr_effective(H * F_RF, F_BB_scaled, Q, p, sigma2);
}

TrialResult hybrid_trial(const AnalogBeamformer &analog, const FronthaulPlan &plan, const CMatrix &H,
                         const LinkBudget &link)
{
    const Step2Result s = step2_alpha(analog, plan, H, link);
    const double a = s.alpha.alpha;
    TrialResult out;
    out.sinr = instantaneous_sinr_effective(s.G, a * s.F_BB, (a * a) * s.Qhat.diagonal, link.p, link.sigma2);
    out.sum_rate = sum_rate(out.sinr);
    out.alpha = a;
    out.l_hat = s.alpha.l_hat;
    return out;
}

Method Method::full_digital(int N, int L)
{
    Method m;
    m.label = "full_digital";
    m.analog = identity_beamformer(N, L);
    m.plan = make_plan(std::numeric_limits<double>::infinity(), std::vector<int>(L, N));
    return m;
}

TrialResult full_digital_rzf_baseline(const CMatrix &H, int N, int L, double beta, double P_tot, double sigma2,
                                      const RVector &p)
{
    const Method m = Method::full_digital(N, L);
    LinkBudget link;
    link.P_tot = P_tot;
    link.sigma2 = sigma2;
    link.beta = beta;
    link.p = p;
    return hybrid_trial(m.analog, m.plan, H, link);
}

SweepPoint summarize(const std::string &label, std::span<const double> samples)
{
    SweepPoint out;
    out.method = label;
    out.trials = static_cast<int>(samples.size());
    if (samples.empty())
        return out;
    double sum = 0.0;
    for (double x : samples)
        sum += x;
    out.mean = sum / samples.size();
    if (samples.size() > 1)
    {
        double ss = 0.0;
        for (double x : samples)
            ss += (x - out.mean) * (x - out.mean);
        out.std = std::sqrt(ss / (samples.size() - 1));
    }
    out.ci = 1.96 * out.std / std::sqrt(static_cast<double>(samples.size()));
    return out;
}

MonteCarloResult monte_carlo(const CovarianceSet &cov, std::span<const Method> methods, const LinkBudget &link,
                             int n_trials, std::uint64_t seed, int threads)
{
    if (n_trials < 1)
        throw std::invalid_argument("monte_carlo: at least one trial required");
    for (const auto &m : methods)
        if (m.analog.Nbar() != cov.Nbar())
            throw std::invalid_argument("monte_carlo: method '" + m.label + "' does not match the covariances");

    const auto n_methods = static_cast<Eigen::Index>(methods.size());
    MonteCarloResult out;
    out.sum_rates.resize(n_trials, n_methods);
    parallel_for(n_trials, threads, [&](int t) {
        const ChannelRealization ch = sample_channel(cov, seed, static_cast<std::uint64_t>(t));
        for (Eigen::Index j = 0; j < n_methods; ++j)
            out.sum_rates(t, j) = hybrid_trial(methods[j].analog, methods[j].plan, ch.H, link).sum_rate;
    });

    std::vector<double> column(n_trials);
    for (Eigen::Index j = 0; j < n_methods; ++j)
    {
        for (int t = 0; t < n_trials; ++t)
            column[t] = out.sum_rates(t, j);
        out.points.push_back(summarize(methods[j].label, column));
    }
    return out;
}

} // namespace cranhp
