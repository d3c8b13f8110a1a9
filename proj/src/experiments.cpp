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

#include "cranhp/experiments.hpp"
#include "cranhp/detequiv.hpp"
#include "cranhp/evaluate.hpp"
#include "cranhp/optimizer.hpp"
#include "cranhp/validate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace cranhp
{

namespace fs = std::filesystem;

std::string format_number(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_atomically(const fs::path &path, const std::string &content)
{
    if (path.has_parent_path())
    {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec)
            throw ExperimentError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ExperimentError("cannot write " + tmp.string());
        out << content;
        out.close();
        if (!out)
        {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ExperimentError("cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
    {
        fs::remove(tmp, ec);
        throw ExperimentError("cannot move output into place at " + path.string());
    }
}

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

class Csv
{
public:
    explicit Csv(std::initializer_list<const char *> header)
    {
        bool first = true;
        for (const char *h : header)
        {
            buf_ << (first ? "" : ",") << h;
            first = false;
        }
        buf_ << '\n';
    }

    template <typename... Ts>
    void row(const Ts &...cells)
    {
        bool first = true;
        ((buf_ << (first ? "" : ",") << cell(cells), first = false), ...);
        buf_ << '\n';
    }

    std::string str() const { return buf_.str(); }

private:
    static std::string cell(double x) { return format_number(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(const std::string &s) { return s; }
    static std::string cell(const char *s) { return s; }

    std::ostringstream buf_;
};

std::vector<double> default_capacity_grid()
{
    std::vector<double> grid;
    for (int c = 50; c <= 2000; c += 50)
        grid.push_back(c);
    return grid;
}

std::vector<int> range(int lo, int hi)
{
    std::vector<int> out;
    for (int m = lo; m <= hi; ++m)
        out.push_back(m);
    return out;
}

nlohmann::json base_figure_defaults()
{
    return {{"N", 64},
            {"K", 3},
            {"L", 2},
            {"M_hat", 48},
            {"C_F", 200},
            {"P_tot_dBm", 30.0},
            {"noise_dBm", -116.0},
            {"distances", {1000.0, 500.0, 100.0}}};
}

struct Prepared
{
    SystemConfig cfg;
    nlohmann::json grids;
};

template <typename T>
std::vector<T> grid_or(const nlohmann::json &grids, const char *key, std::vector<T> fallback)
{
    if (!grids.contains(key))
        return fallback;
    try
    {
        return grids.at(key).get<std::vector<T>>();
    }
    catch (const nlohmann::json::exception &)
    {
        throw ConfigError(std::string("override '") + key + "' must be a list of numbers");
    }
}

Prepared prepare(const ExperimentSpec &spec)
{
    nlohmann::json doc = experiment_defaults(spec.name);
    for (auto it = spec.overrides.begin(); it != spec.overrides.end(); ++it)
        doc[it.key()] = it.value();
    if (spec.seed)
        doc["seed"] = *spec.seed;
    if (spec.trials)
        doc["trials"] = *spec.trials;

    Prepared out;
    for (const char *key : {"M_grid", "C_F_grid", "M_hat_grid"})
        if (doc.contains(key))
        {
            out.grids[key] = doc.at(key);
            doc.erase(key);
        }
    if (out.grids.is_null())
        out.grids = nlohmann::json::object();
    out.cfg = parse_config(doc);
    return out;
}

std::string capacity_label(double c)
{
    return format_number(c);
}

// ---------------------------------------------------------------------------------

std::string fig2(const Prepared &prep)
{
    const SystemConfig &cfg = prep.cfg;
    if (cfg.L != 1)
        throw ConfigError("fig2 requires L = 1");

    ChannelGeometry g = draw_geometry(cfg.N, 1, cfg.K, cfg.eta, std::vector<std::vector<double>>(cfg.K, {1.0}),
                                      cfg.n_paths, cfg.seed);
    g.pathloss_override.assign(cfg.K, {0.0});
    for (int k = 0; k < cfg.K; ++k)
    {
        const double t = cfg.K > 1 ? static_cast<double>(k) / (cfg.K - 1) : 0.0;
        g.pathloss_override[k][0] = 1.0 - t * (1.0 - 0.01);
    }
    const CovarianceSet cov(g);

    const BeamformerBank bank(cov, Combining::TraceWeighted);
    const std::vector<int> chains{cfg.M_hat};
    const AnalogBeamformer analog = bank.build(chains, true);
    const auto Rhat = effective_covariances(cov, analog);
    const ZfDetState zf = zf_fixed_point(Rhat, cfg.N);

    RVector delta(cfg.K), trace(cfg.K);
    for (int k = 0; k < cfg.K; ++k)
    {
        delta(k) = g.pathloss_override[k][0];
        trace(k) = Rhat[k].trace().real();
    }
    const double dmax = delta.maxCoeff(), emax = zf.ebar.maxCoeff(), tmax = trace.maxCoeff();

    Csv csv({"k", "delta_norm", "ebar_norm", "trace_norm"});
    for (int k = 0; k < cfg.K; ++k)
        csv.row(k + 1, delta(k) / dmax, zf.ebar(k) / emax, trace(k) / tmax);
    return csv.str();
}

// ---------------------------------------------------------------------------------

Method hybrid_method(const std::string &label, const BeamformerBank &bank, const std::vector<int> &chains,
                     double capacity, bool projected)
{
    Method m;
    m.label = label;
    m.analog = bank.build(chains, projected);
    m.plan = make_plan(capacity, chains);
    return m;
}

std::string fig3(const Prepared &prep, int threads)
{
    const SystemConfig &cfg = prep.cfg;
    const CovarianceSet cov(make_geometry(cfg));
    const LinkBudget link = LinkBudget::from_config(cfg);
    const BeamformerBank trace(cov, Combining::TraceWeighted);
    const BeamformerBank equal(cov, Combining::Equal);

    const auto capacities = grid_or<double>(prep.grids, "C_F_grid", {200.0, 2000.0});
    const auto Ms = grid_or<int>(prep.grids, "M_grid", range(1, cfg.M_hat));

    Csv csv({"method", "C_F", "M", "sumrate_mean", "ci", "trials"});

    {
        const std::vector<Method> ref{Method::full_digital(cfg.N, cfg.L)};
        const auto mc = monte_carlo(cov, ref, link, cfg.trials, cfg.seed, threads);
        const auto &pt = mc.points.front();
        csv.row(pt.method, capacity_label(kInf), cfg.N, pt.mean, pt.ci, pt.trials);
    }

    for (int M : Ms)
    {
        const std::vector<int> chains(cfg.L, M);
        std::vector<Method> methods;
        std::vector<double> caps;
        for (double c : capacities)
        {
            if (!optimal_bits(c, M))
                continue;
            methods.push_back(hybrid_method("trace_weighted", trace, chains, c, true));
            methods.push_back(hybrid_method("equal", equal, chains, c, true));
            methods.push_back(hybrid_method("trace_weighted_unconstrained", trace, chains, c, false));
            caps.insert(caps.end(), 3, c);
        }
        if (methods.empty())
            continue;
        const auto mc = monte_carlo(cov, methods, link, cfg.trials, cfg.seed, threads);
        for (std::size_t j = 0; j < methods.size(); ++j)
        {
            const auto &pt = mc.points[j];
            csv.row(pt.method, capacity_label(caps[j]), M, pt.mean, pt.ci, pt.trials);
        }
    }
    return csv.str();
}

std::string fig4(const Prepared &prep, int threads)
{
    const SystemConfig &cfg = prep.cfg;
    const CovarianceSet cov(make_geometry(cfg));
    const LinkBudget link = LinkBudget::from_config(cfg);
    const BeamformerBank trace(cov, Combining::TraceWeighted);
    const BeamformerBank equal(cov, Combining::Equal);

    const auto capacities = grid_or<double>(prep.grids, "C_F_grid", default_capacity_grid());
    const auto Ms = grid_or<int>(prep.grids, "M_grid", {16, 48});

    Csv csv({"method", "M", "C_F", "sumrate_mean", "ci", "trials"});
    for (int M : Ms)
    {
        const std::vector<int> chains(cfg.L, M);
        std::vector<Method> methods;
        std::vector<double> caps;
        for (double c : capacities)
        {
            if (!optimal_bits(c, M))
                continue;
            methods.push_back(hybrid_method("trace_weighted", trace, chains, c, true));
            methods.push_back(hybrid_method("equal", equal, chains, c, true));
            caps.insert(caps.end(), 2, c);
        }
        if (methods.empty())
            continue;
        const auto mc = monte_carlo(cov, methods, link, cfg.trials, cfg.seed, threads);
        for (std::size_t j = 0; j < methods.size(); ++j)
        {
            const auto &pt = mc.points[j];
            csv.row(pt.method, M, capacity_label(caps[j]), pt.mean, pt.ci, pt.trials);
        }
    }
    return csv.str();
}

Step1Options step1_options(Combining combining, int threads)
{
    Step1Options opts;
    opts.mode = SearchMode::Tied;
    opts.combining = combining;
    opts.threads = threads;
    return opts;
}

std::string fig5(const Prepared &prep, int threads)
{
    const SystemConfig &cfg = prep.cfg;
    const CovarianceSet cov(make_geometry(cfg));
    const LinkBudget link = LinkBudget::from_config(cfg);
    const BeamformerBank trace(cov, Combining::TraceWeighted);

    const auto capacities = grid_or<double>(prep.grids, "C_F_grid", default_capacity_grid());
    const auto M_hats = grid_or<int>(prep.grids, "M_hat_grid", {24, 48});

    ActivationOptimizer opt_trace(cov, link, step1_options(Combining::TraceWeighted, threads));
    ActivationOptimizer opt_equal(cov, link, step1_options(Combining::Equal, threads));

    Csv csv({"method", "M_hat", "C_F", "sumrate_mean", "ci", "trials"});
    for (int M_hat : M_hats)
    {
        if (M_hat > cfg.N)
            throw ConfigError("fig5: M_hat <= N required");
        std::vector<Method> methods;
        std::vector<double> caps;
        for (double c : capacities)
        {
            if (!optimal_bits(c, 1))
                continue;
            for (auto *opt : {&opt_trace, &opt_equal})
            {
                const PrecodingSolution sol = opt->select(c, M_hat);
                Method m;
                m.label = opt == &opt_trace ? "trace_weighted" : "equal";
                m.analog = sol.analog;
                m.plan = sol.plan;
                methods.push_back(std::move(m));
                caps.push_back(c);
            }
            if (optimal_bits(c, M_hat))
            {
                methods.push_back(hybrid_method("full_activation", trace, std::vector<int>(cfg.L, M_hat), c, true));
                caps.push_back(c);
            }
        }
        if (methods.empty())
            continue;
        const auto mc = monte_carlo(cov, methods, link, cfg.trials, cfg.seed, threads);
        for (std::size_t j = 0; j < methods.size(); ++j)
        {
            const auto &pt = mc.points[j];
            csv.row(pt.method, M_hat, capacity_label(caps[j]), pt.mean, pt.ci, pt.trials);
        }
    }
    return csv.str();
}

std::string fig6(const Prepared &prep, int threads)
{
    const SystemConfig &cfg = prep.cfg;
    const CovarianceSet cov(make_geometry(cfg));
    const LinkBudget link = LinkBudget::from_config(cfg);

    const auto capacities = grid_or<double>(prep.grids, "C_F_grid", default_capacity_grid());
    const auto M_hats = grid_or<int>(prep.grids, "M_hat_grid", {24, 48});

    ActivationOptimizer opt(cov, link, step1_options(Combining::TraceWeighted, threads));
    Csv csv({"M_hat", "C_F", "M_star", "D_star"});
    for (int M_hat : M_hats)
    {
        if (M_hat > cfg.N)
            throw ConfigError("fig6: M_hat <= N required");
        for (double c : capacities)
        {
            if (!optimal_bits(c, 1))
                continue;
            const PrecodingSolution sol = opt.select(c, M_hat);
            csv.row(M_hat, capacity_label(c), sol.plan.chains.front(), sol.plan.bits.front());
        }
    }
    return csv.str();
}

std::string fig7(const Prepared &prep, int threads)
{
    const SystemConfig &cfg = prep.cfg;
    if (cfg.L != 2)
        throw ConfigError("fig7 requires L = 2");
    const CovarianceSet cov(make_geometry(cfg));
    const LinkBudget link = LinkBudget::from_config(cfg);
    const BeamformerBank bank(cov, cfg.combiner);

    std::vector<Method> methods;
    std::vector<std::pair<int, int>> cells;
    for (int m1 = 1; m1 <= cfg.M_hat; ++m1)
        for (int m2 = 1; m2 <= cfg.M_hat; ++m2)
        {
            if (!optimal_bits(cfg.C_F, m1) || !optimal_bits(cfg.C_F, m2))
                continue;
            methods.push_back(hybrid_method(to_string(cfg.combiner), bank, {m1, m2}, cfg.C_F, true));
            cells.emplace_back(m1, m2);
        }
    const auto mc = monte_carlo(cov, methods, link, cfg.trials, cfg.seed, threads);

    Csv csv({"M1", "M2", "sumrate_mean", "ci"});
    for (std::size_t j = 0; j < methods.size(); ++j)
        csv.row(cells[j].first, cells[j].second, mc.points[j].mean, mc.points[j].ci);
    return csv.str();
}

} // namespace

const std::vector<std::string> &experiment_names()
{
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "validate"};
    return names;
}

nlohmann::json experiment_defaults(const std::string &name)
{
    if (name == "fig2")
        return {{"N", 128}, {"K", 100}, {"L", 1}, {"M_hat", 120}, {"distances", nlohmann::json::array()},
                {"P_tot_dBm", 30.0}, {"noise_dBm", -116.0}};
    if (name == "fig3" || name == "fig4")
        return base_figure_defaults();
    if (name == "fig5" || name == "fig6")
    {
        auto doc = base_figure_defaults();
        doc["M_hat"] = 48;
        return doc;
    }
    if (name == "fig7")
    {
        auto doc = base_figure_defaults();
        doc["M_hat"] = 16;
        doc["C_F"] = 200;
        return doc;
    }
    if (name == "validate")
        return nlohmann::json::object();
    throw ExperimentError("unknown experiment '" + name + "'");
}

ExperimentOutput run_experiment(const ExperimentSpec &spec)
{
    const auto &names = experiment_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end())
        throw ExperimentError("unknown experiment '" + spec.name + "'");

    ExperimentOutput out;
    const fs::path path = spec.out_dir / (spec.name + ".csv");
    const int threads = std::max(1, spec.threads);

    if (spec.name == "validate")
    {
        const auto results = run_validation(spec.seed.value_or(0), threads);
        write_atomically(path, validation_csv(results));
        out.passed = std::all_of(results.begin(), results.end(), [](const auto &r) { return r.passed; });
        out.files.push_back(path);
        return out;
    }

    Prepared prep;
    if (spec.name == "fig2")
    {
        // fig2 fixes path losses directly; distances are unused
        ExperimentSpec s = spec;
        nlohmann::json doc = experiment_defaults("fig2");
        for (auto it = spec.overrides.begin(); it != spec.overrides.end(); ++it)
            doc[it.key()] = it.value();
        if (!doc.contains("distances") || doc["distances"].empty())
        {
            const int K = doc.value("K", 100);
            const int L = doc.value("L", 1);
            doc["distances"] = std::vector<std::vector<double>>(K, std::vector<double>(std::max(L, 1), 1.0));
        }
        s.overrides = doc;
        prep = prepare(s);
    }
    else
        prep = prepare(spec);

    std::string content;
    if (spec.name == "fig2")
        content = fig2(prep);
    else if (spec.name == "fig3")
        content = fig3(prep, threads);
    else if (spec.name == "fig4")
        content = fig4(prep, threads);
    else if (spec.name == "fig5")
        content = fig5(prep, threads);
    else if (spec.name == "fig6")
        content = fig6(prep, threads);
    else
        content = fig7(prep, threads);

    write_atomically(path, content);
    out.files.push_back(path);
    return out;
}

void run_single(const SystemConfig &cfg, const fs::path &out, int threads)
{
    const CovarianceSet cov(make_geometry(cfg));
    const LinkBudget link = LinkBudget::from_config(cfg);
    Step1Options opts;
    opts.threads = threads;
    const PrecodingSolution sol = step1_select(cov, cfg, opts);

    std::vector<Method> methods(2);
    methods[0].label = std::string("hybrid_") + to_string(cfg.combiner);
    methods[0].analog = sol.analog;
    methods[0].plan = sol.plan;
    methods[1] = Method::full_digital(cfg.N, cfg.L);
    const auto mc = monte_carlo(cov, methods, link, cfg.trials, cfg.seed, threads);

    auto join = [](const std::vector<int> &v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ";" : "") + (v[i] == kUnlimitedBits ? std::string("inf") : std::to_string(v[i]));
        return s;
    };

    Csv csv({"method", "C_F", "M", "D", "predicted_sumrate", "sumrate_mean", "ci", "trials"});
    csv.row(mc.points[0].method, capacity_label(cfg.C_F), join(sol.plan.chains), join(sol.plan.bits),
            sol.predicted_sum_rate, mc.points[0].mean, mc.points[0].ci, mc.points[0].trials);
    csv.row(mc.points[1].method, capacity_label(kInf), join(methods[1].plan.chains), join(methods[1].plan.bits),
            std::string("nan"), mc.points[1].mean, mc.points[1].ci, mc.points[1].trials);
    write_atomically(out, csv.str());
}

} // namespace cranhp
