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

#include "cranhp/validate.hpp"
#include "cranhp/channel.hpp"
#include "cranhp/detequiv.hpp"
#include "cranhp/evaluate.hpp"
#include "cranhp/experiments.hpp"
#include "cranhp/fronthaul.hpp"
#include "cranhp/optimizer.hpp"
#include "cranhp/rng.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace cranhp
{

namespace
{

CMatrix random_matrix(RandomStream &rng, int rows, int cols)
{
    CMatrix A(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            A(i, j) = rng.complex_normal();
    return A;
}

CMatrix random_psd(RandomStream &rng, int n, int rank)
{
    const CMatrix X = random_matrix(rng, n, rank);
    return X * X.adjoint() / static_cast<double>(rank);
}

struct Instance
{
    CovarianceSet cov;
    LinkBudget link;
};

Instance small_instance(std::uint64_t seed, int N, int L, int K)
{
    std::vector<std::vector<double>> d(K, std::vector<double>(L));
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
            d[k][l] = 100.0 + 150.0 * (k + 2 * l);
    Instance inst{CovarianceSet(draw_geometry(N, L, K, 3.0, d, 32, seed)), {}};
    SystemConfig cfg;
    cfg.N = N;
    cfg.L = L;
    cfg.K = K;
    inst.link = LinkBudget::from_config(cfg);
    return inst;
}

std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << x;
    return s.str();
}

using Check = std::function<CheckResult(std::uint64_t, int)>;

CheckResult check_eig(std::uint64_t seed, int)
{
    RandomStream rng({seed, StreamTag::TestData, 1});
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep)
    {
        const CMatrix A = random_psd(rng, 12, 5);
        const auto eig = hermitian_eig(A);
        const CMatrix back = eig.vectors * eig.values.cast<cdouble>().asDiagonal() * eig.vectors.adjoint();
        const double ortho =
            (eig.vectors.adjoint() * eig.vectors - CMatrix::Identity(12, 12)).norm();
        worst = std::max({worst, relative_frobenius_error(back, A), ortho});
        for (int i = 1; i < 12; ++i)
            if (eig.values(i) > eig.values(i - 1))
                return {"numerics.eig", false, "eigenvalues not descending"};
    }
    return {"numerics.eig", worst < 1e-10, "max reconstruction/orthogonality error " + fmt(worst)};
}

CheckResult check_sqrt(std::uint64_t seed, int)
{
    RandomStream rng({seed, StreamTag::TestData, 2});
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep)
    {
        const CMatrix A = random_psd(rng, 10, 3);
        const CMatrix S = psd_sqrt(A);
        worst = std::max(worst, relative_frobenius_error(S * S, A));
    }
    return {"numerics.psd_sqrt", worst < 1e-10, "max ||S^2 - A|| / ||A|| = " + fmt(worst)};
}

CheckResult check_covariance(std::uint64_t seed, int)
{
    const Instance inst = small_instance(seed, 16, 2, 3);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 2; ++l)
        {
            const auto &pair = inst.cov.pair(k, l);
            const double expected = 16.0 * std::pow(pair.distance, -3.0);
            worst = std::max(worst, std::abs(pair.R.trace().real() - expected) / expected);
            worst = std::max(worst, (pair.R - pair.R.adjoint()).norm() / pair.R.norm());
            if (hermitian_eig(pair.R).values.minCoeff() < -1e-12 * pair.R.norm())
                return {"channel.covariance", false, "covariance not PSD"};
        }
    return {"channel.covariance", worst < 1e-12, "trace/Hermitian error " + fmt(worst)};
}

CheckResult check_beamformer(std::uint64_t seed, int)
{
    const Instance inst = small_instance(seed, 16, 2, 3);
    const BeamformerBank bank(inst.cov, Combining::TraceWeighted);
    const std::vector<int> chains{5, 3};
    const auto F = bank.build(chains, false);
    const auto P = bank.build(chains, true);
    double ortho = 0.0, modulus = 0.0;
    for (int l = 0; l < 2; ++l)
    {
        ortho = std::max(ortho, (F.block(l).adjoint() * F.block(l) - CMatrix::Identity(chains[l], chains[l])).norm());
        modulus = std::max(modulus, (P.block(l).cwiseAbs().array() - 1.0 / 4.0).abs().maxCoeff());
    }
    return {"precoding.analog", ortho < 1e-12 && modulus < 1e-14,
            "orthonormality " + fmt(ortho) + ", unit modulus " + fmt(modulus)};
}

CheckResult check_rzf(std::uint64_t seed, int)
{
    RandomStream rng({seed, StreamTag::TestData, 3});
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep)
    {
        const CMatrix G = random_matrix(rng, 4, 9);
        const double beta = 0.05 * (rep + 1);
        const CMatrix direct =
            (G.adjoint() * G + 18.0 * beta * CMatrix::Identity(9, 9)).inverse() * G.adjoint();
        worst = std::max(worst, relative_frobenius_error(rzf_digital(G, beta, 18), direct));
    }
    return {"precoding.rzf", worst < 1e-10, "max deviation from direct inverse " + fmt(worst)};
}

CheckResult check_bits(std::uint64_t, int)
{
    for (int c = 2; c <= 2000; c += 7)
        for (int m = 1; m <= 64; ++m)
        {
            const auto d = optimal_bits(c, m);
            if (!d)
            {
                if (c >= 2 * m)
                    return {"fronthaul.bits", false, "feasible pair reported infeasible"};
                continue;
            }
            if (2 * *d * m > c || 2 * (*d + 1) * m <= c)
                return {"fronthaul.bits", false, "D not the largest feasible value"};
        }
    return {"fronthaul.bits", true, "2 D M <= C_F < 2 (D+1) M on the grid"};
}

CheckResult check_power(std::uint64_t seed, int)
{
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep)
    {
        const Instance inst = small_instance(seed + rep, 12, 2, 3);
        const BeamformerBank bank(inst.cov, Combining::TraceWeighted);
        const std::vector<int> chains{1 + rep % 6, 1 + (rep * 5) % 7};
        const auto analog = bank.build(chains, true);
        const auto plan = make_plan(60.0, chains);
        const auto H = sample_channel(inst.cov, seed, rep).H;
        const Step2Result s = step2_alpha(analog, plan, H, inst.link);
        const double top = s.alpha.rrh_power.maxCoeff();
        worst = std::max(worst, std::abs(top - inst.link.P_tot) / inst.link.P_tot);
        if (s.alpha.rrh_power.maxCoeff() > inst.link.P_tot * (1.0 + 1e-9))
            return {"fronthaul.power", false, "RRH power above budget"};
    }
    return {"fronthaul.power", worst < 1e-9, "max |max_l power - P_tot| / P_tot = " + fmt(worst)};
}

CheckResult check_scalar_fixed_point(std::uint64_t, int)
{
    const std::vector<CMatrix> R{CMatrix::Identity(2, 2)};
    const auto sol = fixed_point_e(R, 1.0, 2, 1.0);
    const double oracle = (-1.0 + std::sqrt(17.0)) / 4.0;
    const double err = std::abs(sol.e(0) - oracle);
    return {"detequiv.scalar_fixed_point", err < 1e-10, "|e - (sqrt(17)-1)/4| = " + fmt(err)};
}

CheckResult check_derivative(std::uint64_t seed, int)
{
    RandomStream rng({seed, StreamTag::TestData, 4});
    std::vector<CMatrix> R;
    for (int k = 0; k < 3; ++k)
        R.push_back(random_psd(rng, 8, 4));
    const DetEquivState state(R, 0.3, 16, 1.0);
    const CMatrix B = random_psd(rng, 8, 2);
    const RVector ep = state.e_prime(B);
    const double lin = ((RMatrix::Identity(3, 3) - state.J()) * ep - state.v(B)).norm() / state.v(B).norm();
    const CMatrix Tp = state.t_prime(B, ep);
    double self = 0.0;
    for (int k = 0; k < 3; ++k)
    {
        const double tr = (R[k] * Tp).trace().real() / 16.0;
        self = std::max(self, std::abs(tr - ep(k)) / std::abs(ep(k)));
    }
    const bool ok = state.residual() <= 1e-10 && lin <= 1e-10 && self <= 1e-8;
    return {"detequiv.derivative", ok,
            "fixed point " + fmt(state.residual()) + ", linear system " + fmt(lin) + ", T' consistency " +
                fmt(self)};
}

CheckResult check_zf_bound(std::uint64_t seed, int)
{
    RandomStream rng({seed, StreamTag::TestData, 5});
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 10; ++rep)
    {
        std::vector<CMatrix> R;
        for (int k = 0; k < 4; ++k)
            R.push_back(random_psd(rng, 10, 3 + rep % 5) * (0.1 + k));
        const ZfDetState zf = zf_fixed_point(R, 10);
        const double gap = zf_harmonic_sinr(zf, R) - zf_sinr_upper_bound(zf, R);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-12)
            return {"detequiv.zf_bound", false, "harmonic mean above bound by " + fmt(gap)};
    }
    return {"detequiv.zf_bound", true, "max harmonic - bound = " + fmt(worst_gap)};
}

CheckResult check_sinr_expansion(std::uint64_t seed, int)
{
    RandomStream rng({seed, StreamTag::TestData, 6});
    const int K = 3, Nbar = 8, Mbar = 5;
    const CMatrix H = random_matrix(rng, K, Nbar);
    const CMatrix F_RF = random_matrix(rng, Nbar, Mbar);
    const CMatrix F = random_matrix(rng, Mbar, K);
    RVector Q(Mbar), p(K);
    for (int g = 0; g < Mbar; ++g)
        Q(g) = rng.uniform(0.0, 0.5);
    for (int k = 0; k < K; ++k)
        p(k) = rng.uniform(0.5, 2.0);
    const double sigma2 = 0.1;
    const RVector sinr = instantaneous_sinr(H, F_RF, F, Q, p, sigma2);

    double worst = 0.0;
    for (int k = 0; k < K; ++k)
    {
        const CVector hk = H.row(k).transpose();
        double desired = 0.0, interference = 0.0, quant = 0.0;
        for (int i = 0; i < K; ++i)
        {
            cdouble y = 0.0;
            for (int n = 0; n < Nbar; ++n)
                for (int g = 0; g < Mbar; ++g)
                    y += hk(n) * F_RF(n, g) * F(g, i);
            (i == k ? desired : interference) += p(i) * std::norm(y);
        }
        for (int g = 0; g < Mbar; ++g)
        {
            cdouble y = 0.0;
            for (int n = 0; n < Nbar; ++n)
                y += hk(n) * F_RF(n, g);
            quant += Q(g) * std::norm(y);
        }
        const double oracle = desired / (interference + quant + sigma2);
        worst = std::max(worst, std::abs(sinr(k) - oracle) / oracle);
    }
    return {"evaluate.sinr_expansion", worst < 1e-12, "max relative error " + fmt(worst)};
}

CheckResult check_baseline(std::uint64_t seed, int)
{
    const Instance inst = small_instance(seed, 12, 2, 3);
    const auto H = sample_channel(inst.cov, seed, 0).H;
    const TrialResult a =
        full_digital_rzf_baseline(H, 12, 2, inst.link.beta, inst.link.P_tot, inst.link.sigma2, inst.link.p);
    const Method m = Method::full_digital(12, 2);
    const TrialResult b = hybrid_trial(m.analog, m.plan, H, inst.link);
    const bool same = a.sum_rate == b.sum_rate && (a.sinr - b.sinr).norm() == 0.0;
    return {"evaluate.full_digital", same, same ? "identical to the hybrid path" : "outputs differ"};
}

CheckResult check_step1(std::uint64_t seed, int threads)
{
    const Instance inst = small_instance(seed, 16, 2, 3);
    Step1Options opts;
    opts.threads = threads;
    ActivationOptimizer opt(inst.cov, inst.link, opts);
    const auto table = opt.objective_table(120.0, 12);
    const PrecodingSolution sol = opt.select(120.0, 12);
    double best = -1.0;
    for (const auto &[chains, value] : table)
        best = std::max(best, value);
    const double recomputed = sum_rate(sol.sinr_bar);
    const bool ok = sol.predicted_sum_rate == best && std::abs(recomputed - sol.predicted_sum_rate) <= 1e-12 &&
                    2 * sol.plan.bits[0] * sol.plan.chains[0] <= 120;
    return {"optimizer.step1", ok, "M* = " + std::to_string(sol.plan.chains[0]) + ", objective " + fmt(best)};
}

CheckResult check_monotone_capacity(std::uint64_t seed, int threads)
{
    const Instance inst = small_instance(seed, 16, 2, 3);
    Step1Options opts;
    opts.threads = threads;
    ActivationOptimizer opt(inst.cov, inst.link, opts);
    double prev = -1.0;
    for (double c = 20.0; c <= 400.0; c += 20.0)
    {
        const double value = opt.select(c, 12).predicted_sum_rate;
        if (value < prev)
            return {"optimizer.capacity_monotone", false, "objective dropped at C_F=" + fmt(c)};
        prev = value;
    }
    return {"optimizer.capacity_monotone", true, "objective nondecreasing over C_F in [20, 400]"};
}

CheckResult check_determinism(std::uint64_t seed, int threads)
{
    const Instance inst = small_instance(seed, 12, 2, 3);
    const BeamformerBank bank(inst.cov, Combining::TraceWeighted);
    std::vector<Method> methods(1);
    methods[0].label = "trace_weighted";
    methods[0].analog = bank.build(std::vector<int>{4, 4}, true);
    methods[0].plan = make_plan(100.0, {4, 4});
    const auto a = monte_carlo(inst.cov, methods, inst.link, 24, seed, 1);
    const auto b = monte_carlo(inst.cov, methods, inst.link, 24, seed, std::max(2, threads));
    const bool same = a.sum_rates == b.sum_rates && a.points[0].mean == b.points[0].mean;
    return {"evaluate.determinism", same, same ? "bit-identical across thread counts" : "results differ"};
}

} // namespace

std::vector<CheckResult> run_validation(std::uint64_t seed, int threads)
{
    const std::vector<Check> checks{check_eig,         check_sqrt,      check_covariance,
                                    check_beamformer,  check_rzf,       check_bits,
                                    check_power,       check_scalar_fixed_point,
                                    check_derivative,  check_zf_bound,  check_sinr_expansion,
                                    check_baseline,    check_step1,     check_monotone_capacity,
                                    check_determinism};
    std::vector<CheckResult> out;
    for (const auto &check : checks)
    {
        try
        {
            out.push_back(check(seed, threads));
        }
        catch (const std::exception &e)
        {
            out.push_back({"exception", false, e.what()});
        }
    }
    return out;
}

std::string validation_csv(const std::vector<CheckResult> &results)
{
    std::string out = "check,status,detail\n";
    for (const auto &r : results)
    {
        std::string detail = r.detail;
        for (char &c : detail)
            if (c == ',' || c == '\n')
                c = ';';
        out += r.name + "," + (r.passed ? "pass" : "fail") + "," + detail + "\n";
    }
    return out;
}

} // namespace cranhp
