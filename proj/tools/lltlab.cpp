// lltlab: batch front door for the lattice local-limit laboratory.
//
// Subcommands: inspect, verify, simulate, spectrum, plot-data.
// Exit codes: 0 success, 2 config error, 3 range/feasibility error,
// 4 property-suite failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "llt/asllt.hpp"
#include "llt/bernoulli_part.hpp"
#include "llt/correlation.hpp"
#include "llt/errors.hpp"
#include "llt/lattice.hpp"
#include "llt/models.hpp"
#include "llt/prefix.hpp"
#include "llt/report.hpp"
#include "llt/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string model = "cramer";
    double kappa = 0.0;
    long N = 1024;
    double R = 2.0;
    std::uint64_t seed = 1;
    int replicas = 1;
    std::string variant = "main";
    std::string out = "lltlab-out";
    int jobs = 1;
    double theta_scale = 1.0;
    double b = 2.0;
    int block_lo = 0;
    int block_hi = -1;  // -1: use the schedule's top block

    // jobs and out are execution parameters, not semantic config: reports must
    // be byte-identical across worker counts.
    json canonical() const {
        json j;
        j["model"] = model;
        j["kappa"] = kappa;
        j["N"] = N;
        j["R"] = R;
        j["seed"] = seed;
        j["replicas"] = replicas;
        j["variant"] = variant;
        j["theta_scale"] = theta_scale;
        j["b"] = b;
        j["block_lo"] = block_lo;
        j["block_hi"] = block_hi;
        return j;
    }
};

constexpr long kChainCap = 200000;  // rolling-pmf walks beyond this are refused

void apply_json_config(RunConfig& cfg, const std::string& path) {
    json j = json::parse(llt::read_text_file(path));
    if (j.contains("model")) cfg.model = j["model"].get<std::string>();
    if (j.contains("kappa")) cfg.kappa = j["kappa"].get<double>();
    if (j.contains("N")) cfg.N = j["N"].get<long>();
    if (j.contains("R")) cfg.R = j["R"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("replicas")) cfg.replicas = j["replicas"].get<int>();
    if (j.contains("variant")) cfg.variant = j["variant"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
    if (j.contains("theta_scale")) cfg.theta_scale = j["theta_scale"].get<double>();
    if (j.contains("b")) cfg.b = j["b"].get<double>();
    if (j.contains("block_lo")) cfg.block_lo = j["block_lo"].get<int>();
    if (j.contains("block_hi")) cfg.block_hi = j["block_hi"].get<int>();
}

void validate(const RunConfig& cfg) {
    if (cfg.N < 1) throw llt::InvalidArgument("N must be >= 1");
    if (!(cfg.R > 1.0)) throw llt::InvalidArgument("R must be > 1");
    if (cfg.replicas < 1) throw llt::InvalidArgument("replicas must be >= 1");
    if (cfg.jobs < 1) throw llt::InvalidArgument("jobs must be >= 1");
}

json base_summary(const RunConfig& cfg) {
    json j;
    j["version"] = llt::kVersion;
    j["config"] = cfg.canonical();
    j["config_fingerprint"] = llt::fingerprint(cfg.canonical().dump());
    return j;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
    }
    s += '\n';
    return s;
}

long checked_chain_length(long N) {
    if (N > kChainCap)
        throw llt::RangeExceeded("exact chains capped at N = " + std::to_string(kChainCap));
    return N;
}

// ---------------------------------------------------------------- inspect

int cmd_inspect(const RunConfig& cfg) {
    llt::ParsedModel pm = llt::parse_model(cfg.model, cfg.theta_scale);
    llt::WeightSchedule sched = pm.is_parameter
                                    ? llt::build_schedule(pm.param_model, cfg.N, cfg.R)
                                    : llt::build_schedule(pm.dist_model, cfg.N, cfg.R);
    const llt::ScalarChain& c = sched.chain;

    // Exact per-prefix LLT metrics are affordable for short chains.
    std::vector<double> delta_n, defect_n;
    if (!pm.is_parameter && cfg.N <= 4096) {
        llt::walk_prefix(pm.dist_model, cfg.N, [&](const llt::PrefixState& st) {
            bool ok = st.var > 0.0;
            delta_n.push_back(ok ? llt::llt_discrepancy(st) : 0.0);
            defect_n.push_back(ok ? llt::gaussian_defect(st) : 0.0);
            return true;
        });
    }

    long stride = cfg.N <= 4096 ? 1 : (cfg.N + 4095) / 4096;
    std::string csv = "n,theta_n,nu_n,sigma_n,a_n,h_n,omega_n,delta_n,defect_n\n";
    double omega_max = 0.0;
    for (long n = c.start; n <= c.N; ++n) {
        std::size_t i = c.idx(n);
        std::vector<std::string> cells = {std::to_string(n), llt::fmt_g17(c.theta_at(n)),
                                          llt::fmt_g17(c.nu_at(n)), llt::fmt_g17(c.sigma_at(n)),
                                          c.has_law ? llt::fmt_g17(c.a_at(n)) : "",
                                          llt::fmt_g17(sched.h_at(n)), "", "", ""};
        if ((n - c.start) % stride == 0 && 2.0 * c.nu_at(n) <= c.nu.back()) {
            double om = sched.omega(n);
            omega_max = std::max(omega_max, om);
            cells[6] = llt::fmt_g17(om);
        }
        if (i < delta_n.size()) {
            cells[7] = llt::fmt_g17(delta_n[i]);
            cells[8] = llt::fmt_g17(defect_n[i]);
        }
        csv += csv_line(cells);
    }
    llt::write_text_file((fs::path(cfg.out) / "inspect.csv").string(), csv);

    json j = base_summary(cfg);
    j["rows"] = c.N - c.start + 1;
    j["nu_N"] = c.nu.back();
    j["sigma_N"] = c.sigma.back();
    j["h_N"] = sched.h_prefix.back();
    j["omega_max_sampled"] = omega_max;
    j["blocks"] = {{"i_min", sched.i_min}, {"i_max", sched.i_max}, {"J_max", sched.J_max}};
    if (!delta_n.empty()) {
        j["llt_discrepancy_N"] = delta_n.back();
        j["gaussian_defect_N"] = defect_n.back();
        j["discrepancy_window_steps"] = llt::kDiscrepancyWindowSteps;
    }
    if (cfg.model.rfind("iid:", 0) == 0)
        j["distribution"] = llt::to_text(pm.dist_model.marginal(pm.dist_model.start_index));
    llt::write_text_file((fs::path(cfg.out) / "inspect.json").string(), j.dump(2) + "\n");
    std::cout << "inspect: " << (c.N - c.start + 1) << " rows -> " << cfg.out << "\n";
    return 0;
}

// ----------------------------------------------------------------- verify

int cmd_verify(const RunConfig& cfg) {
    llt::ParsedModel pm = llt::parse_model(cfg.model, cfg.theta_scale);
    if (pm.is_parameter)
        throw llt::InvalidArgument("verify needs a distribution model (got parameter model)");
    const llt::DistributionModel& model = pm.dist_model;

    long N = checked_chain_length(cfg.N);
    llt::ScalarChain chain = llt::build_scalar_chain(model, N);
    llt::KappaSequence kappa = llt::kappa_sequence(chain, cfg.kappa);
    std::vector<double> probs = llt::hit_probabilities(model, kappa, N);
    llt::CorrelationContext ctx = llt::make_context(model, chain, kappa, probs);
    llt::WeightSchedule sched = llt::build_schedule(model, N, cfg.R);

    json checks;
    bool all_pass = true;
    auto record = [&](const std::string& name, bool pass, const std::string& detail) {
        checks[name] = {{"pass", pass}, {"detail", detail}};
        if (!pass) all_pass = false;
        std::cout << (pass ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : "  " + detail)
                  << "\n";
    };

    // Correlation identity: factored form vs direct product form vs oracle.
    {
        double worst = 0.0;
        bool oracle_ok = true;
        long n_hi = std::min<long>(N, model.start_index + 7);
        for (long n = model.start_index + 1; n <= n_hi; ++n) {
            for (long m = model.start_index; m < n; ++m) {
                double factored = llt::correlation_Y(ctx, m, n);
                llt::LatticeDistribution seg = llt::segment_law(model, m, n);
                double joint = ctx.prob(m) * seg.pmf(kappa.offset_at(n) - kappa.offset_at(m));
                double direct = chain.sigma_at(m) * chain.sigma_at(n) *
                                (joint - ctx.prob(m) * ctx.prob(n));
                worst = std::max(worst, std::abs(factored - direct));
                try {
                    double bf = llt::brute_force_joint(model, kappa, m, n);
                    double via_oracle = chain.sigma_at(m) * chain.sigma_at(n) *
                                        (bf - ctx.prob(m) * ctx.prob(n));
                    if (std::abs(factored - via_oracle) > 1e-12) oracle_ok = false;
                } catch (const llt::TooLarge&) {
                }
            }
        }
        record("correlation-identity", worst <= 1e-12 && oracle_ok,
               "max |factored - direct| = " + llt::fmt_g17(worst));
    }

    // Quadratic-form inequality on randomized instances.
    {
        llt::CounterRng rng(cfg.seed ^ 0x51d2cb0a8f3e17ull);
        bool ok = true;
        for (int rep = 0; rep < 1000 && ok; ++rep) {
            std::size_t dim = 2 + rng.next_u64() % 19;
            std::vector<double> x(dim);
            std::vector<std::vector<double>> alpha(dim, std::vector<double>(dim, 0.0));
            for (auto& v : x) v = 2.0 * rng.next_double() - 1.0;
            for (auto& row : alpha)
                for (auto& v : row) v = 2.0 * rng.next_double() - 1.0;
            auto qf = llt::quadratic_form_check(x, alpha);
            if (qf.lhs > qf.rhs + 1e-12) ok = false;
        }
        record("quadratic-form", ok, "");
    }

    // Liaison inequality, exact comparison along the chain.
    {
        bool ok = true;
        double q = chain.D * chain.D / 4.0;
        for (long n = chain.start; n <= chain.N; ++n)
            if (chain.var_at(n) < q * chain.nu_at(n)) ok = false;
        record("liaison", ok, "");
    }

    // Weighted tail-sum contracts.
    {
        bool ok = true;
        long n0 = std::max(chain.start + 1, chain.start + (chain.N - chain.start) / 8);
        while (chain.nu_at(n0) <= std::numbers::e && n0 < chain.N) ++n0;
        for (double delta : {0.25, 0.5, 0.75}) {
            llt::HlpCheck hc = llt::hlp_check(sched, delta, n0, chain.N);
            if (hc.tail.lhs > hc.tail.rhs + 1e-12) ok = false;
            if (hc.log.lhs > hc.log.rhs + 1e-12) ok = false;
        }
        record("hlp-contracts", ok, "");
    }

    // Bound sweep: ratios only, constants being unknown.
    std::vector<std::string> variants;
    if (cfg.variant == "all")
        variants = {"main", "tau", "ratio-c", "simple"};
    else
        variants = {cfg.variant};
    std::string csv = "m,n,nu_m,nu_n,lhs,rhs_shape,ratio,variant\n";
    json maxima = json::object();
    for (const auto& variant : variants) {
        std::vector<llt::CorrelationReport> reports = llt::bound_sweep(ctx, N, variant);
        double best = 0.0;
        long bm = 0, bn = 0;
        for (const auto& r : reports) {
            csv += csv_line({std::to_string(r.m), std::to_string(r.n), llt::fmt_g17(r.nu_m),
                             llt::fmt_g17(r.nu_n), llt::fmt_g17(r.lhs),
                             llt::fmt_g17(r.rhs_shape), llt::fmt_g17(r.ratio), r.variant});
            if (r.ratio > best) {
                best = r.ratio;
                bm = r.m;
                bn = r.n;
            }
        }
        maxima[variant] = {{"max_ratio", best}, {"argmax_m", bm}, {"argmax_n", bn},
                           {"pairs", reports.size()}};
    }
    llt::write_text_file((fs::path(cfg.out) / "verify_reports.csv").string(), csv);

    json j = base_summary(cfg);
    j["checks"] = checks;
    j["ratio_maxima"] = maxima;
    llt::write_text_file((fs::path(cfg.out) / "verify_summary.json").string(), j.dump(2) + "\n");
    return all_pass ? 0 : 4;
}

// --------------------------------------------------------------- simulate

struct ReplicaResult {
    std::uint64_t seed = 0;
    double average = 0.0;
    double tail_osc = 0.0;
    std::string series_verdict;
    std::vector<double> series_partials;
};

int cmd_simulate(const RunConfig& cfg) {
    llt::ParsedModel pm = llt::parse_model(cfg.model, cfg.theta_scale);
    if (pm.is_parameter)
        throw llt::NotSimulable("model '" + cfg.model + "' has parameters only, no law");
    const llt::DistributionModel& model = pm.dist_model;

    long N = checked_chain_length(cfg.N);
    llt::ScalarChain chain = llt::build_scalar_chain(model, N);
    llt::KappaSequence kappa = llt::kappa_sequence(chain, cfg.kappa);
    std::vector<double> probs = llt::hit_probabilities(model, kappa, N);
    llt::WeightSchedule sched = llt::build_schedule(model, N, cfg.R);

    std::vector<ReplicaResult> results(static_cast<std::size_t>(cfg.replicas));
    std::vector<llt::PathRealization> first_path(1);
    auto run_replicas = [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            std::uint64_t s = llt::derive_stream(cfg.seed, static_cast<std::uint64_t>(r));
            llt::PathRealization path = llt::sample_path(model, kappa, N, s);
            ReplicaResult& rr = results[static_cast<std::size_t>(r)];
            rr.seed = s;
            rr.average = llt::asllt_average(path, sched, N);
            std::vector<double> z =
                llt::realized_block_sums(path.hits, probs, sched, sched.i_min, sched.i_max);
            llt::SeriesPartials sp = llt::weighted_series_partials(z, cfg.b);
            rr.tail_osc = sp.tail_oscillation;
            rr.series_verdict = sp.verdict;
            rr.series_partials = std::move(sp.partials);
            if (r == 0) first_path[0] = std::move(path);
        }
    };
    int workers = std::min(cfg.jobs, cfg.replicas);
    if (workers <= 1) {
        run_replicas(0, cfg.replicas);
    } else {
        std::vector<std::thread> pool;
        int chunk = (cfg.replicas + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            int lo = w * chunk, hi = std::min(cfg.replicas, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_replicas, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    // Per-replica output, ordered by replica index regardless of jobs.
    std::string csv = "replica,seed,average,series_tail_oscillation\n";
    double mean = 0.0;
    for (int r = 0; r < cfg.replicas; ++r) {
        const ReplicaResult& rr = results[static_cast<std::size_t>(r)];
        csv += csv_line({std::to_string(r), std::to_string(rr.seed), llt::fmt_g17(rr.average),
                         llt::fmt_g17(rr.tail_osc)});
        mean += rr.average;
    }
    mean /= cfg.replicas;
    double sd = 0.0;
    for (const auto& rr : results) sd += (rr.average - mean) * (rr.average - mean);
    sd = cfg.replicas > 1 ? std::sqrt(sd / (cfg.replicas - 1)) : 0.0;
    llt::write_text_file((fs::path(cfg.out) / "replicas.csv").string(), csv);

    // Replica-0 diagnostics.
    {
        const llt::PathRealization& path = first_path[0];
        std::string traj = "N,average\n";
        for (long n = 2; n <= N; n *= 2)
            if (n > model.start_index)
                traj += csv_line({std::to_string(n), llt::fmt_g17(llt::asllt_average(path, sched, n))});
        llt::write_text_file((fs::path(cfg.out) / "trajectory.csv").string(), traj);

        llt::WindowedSup ws = llt::windowed_sup_statistic(path.hits, probs, sched);
        std::string sups = "k,sup\n";
        for (std::size_t i = 0; i < ws.window.size(); ++i)
            sups += csv_line({std::to_string(ws.window[i]), llt::fmt_g17(ws.sup[i])});
        llt::write_text_file((fs::path(cfg.out) / "sups.csv").string(), sups);

        std::string series = "j,partial\n";
        for (std::size_t i = 0; i < results[0].series_partials.size(); ++i)
            series += csv_line({std::to_string(i + 2), llt::fmt_g17(results[0].series_partials[i])});
        llt::write_text_file((fs::path(cfg.out) / "series.csv").string(), series);

        if (N <= 4096)
            llt::write_text_file((fs::path(cfg.out) / "path.csv").string(),
                                 llt::path_to_csv(path));
    }

    double expected = llt::asllt_expected_average(probs, sched, N);
    double se = cfg.replicas > 1 ? sd / std::sqrt(static_cast<double>(cfg.replicas)) : 0.0;
    json j = base_summary(cfg);
    j["N"] = N;
    j["seed"] = cfg.seed;
    j["expected_average"] = expected;
    j["replica_mean"] = mean;
    j["replica_sd"] = sd;
    j["replica_se"] = se;
    j["gamma_limit"] = chain.D * 0.3989422804014326779 *
                       std::exp(-cfg.kappa * cfg.kappa / 2.0);
    if (model.iid) {
        llt::Moments mo = llt::moments(model.marginal(model.start_index));
        double sigma = std::sqrt(mo.variance);
        j["iid_sigma"] = sigma;
        j["iid_normalized_limit"] = j["gamma_limit"].get<double>() / sigma;
    }
    j["verdicts"] = {
        {"replica_mean_within_3se",
         cfg.replicas > 1 ? std::abs(mean - expected) <= 3.0 * se : true},
        {"series", results[0].series_verdict},
    };
    llt::write_text_file((fs::path(cfg.out) / "summary.json").string(), j.dump(2) + "\n");
    std::cout << "simulate: " << cfg.replicas << " replica(s), mean average = "
              << llt::fmt_g17(mean) << "\n";
    return 0;
}

// --------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& cfg) {
    llt::ParsedModel pm = llt::parse_model(cfg.model, cfg.theta_scale);
    if (pm.is_parameter)
        throw llt::InvalidArgument("spectrum needs a distribution model");
    const llt::DistributionModel& model = pm.dist_model;

    long N = checked_chain_length(cfg.N);
    llt::ScalarChain chain = llt::build_scalar_chain(model, N);
    llt::KappaSequence kappa = llt::kappa_sequence(chain, cfg.kappa);
    std::vector<double> probs = llt::hit_probabilities(model, kappa, N);
    llt::CorrelationContext ctx = llt::make_context(model, chain, kappa, probs);
    llt::WeightSchedule sched = llt::build_schedule(model, N, cfg.R);

    int I = std::max(cfg.block_lo, sched.i_min);
    int J = cfg.block_hi < 0 ? sched.i_max - 1 : cfg.block_hi;
    llt::BlockStats st = llt::block_second_moments(ctx, sched, I, J, nullptr, cfg.jobs);

    std::string csv;
    for (int i = I; i <= J; ++i) {
        std::vector<std::string> cells;
        for (int j2 = I; j2 <= J; ++j2) cells.push_back(llt::fmt_g17(st.at(i, j2)));
        csv += csv_line(cells);
    }
    llt::write_text_file((fs::path(cfg.out) / "gram.csv").string(), csv);

    std::vector<double> rows = llt::quasi_orthogonality_rowsums(st);
    std::string rcsv = "block,rowsum\n";
    for (int i = I; i <= J; ++i)
        rcsv += csv_line({std::to_string(i), llt::fmt_g17(rows[static_cast<std::size_t>(i - I)])});
    llt::write_text_file((fs::path(cfg.out) / "rowsums.csv").string(), rcsv);

    json j = base_summary(cfg);
    j["blocks"] = {{"I", I}, {"J", J}};
    j["sum_sq"] = st.sum_sq;
    j["m_sum"] = st.m_sum;
    j["rhs_shape"] = st.rhs_shape;
    j["ratio"] = st.ratio;
    j["max_rowsum"] = *std::max_element(rows.begin(), rows.end());
    llt::write_text_file((fs::path(cfg.out) / "spectrum.json").string(), j.dump(2) + "\n");
    std::cout << "spectrum: blocks " << I << ".." << J << ", max rowsum = "
              << llt::fmt_g17(j["max_rowsum"].get<double>()) << "\n";
    return 0;
}

// --------------------------------------------------------------- plot-data

int cmd_plot_data(const RunConfig& cfg) {
    llt::ParsedModel pm = llt::parse_model(cfg.model, cfg.theta_scale);
    if (pm.is_parameter)
        throw llt::InvalidArgument("plot-data needs a distribution model");
    const llt::DistributionModel& model = pm.dist_model;

    long N = checked_chain_length(cfg.N);
    llt::ScalarChain chain = llt::build_scalar_chain(model, N);
    llt::KappaSequence kappa = llt::kappa_sequence(chain, cfg.kappa);
    std::vector<double> probs = llt::hit_probabilities(model, kappa, N);
    llt::WeightSchedule sched = llt::build_schedule(model, N, cfg.R);

    std::string kcsv = "n,kappa_n\n";
    for (long n = chain.start; n <= chain.N; ++n)
        kcsv += csv_line({std::to_string(n), llt::fmt_g17(kappa.value_at(n))});
    llt::write_text_file((fs::path(cfg.out) / "kappa.csv").string(), kcsv);

    std::string acsv = "N,expected_average\n";
    for (long n = 2; n <= N; n *= 2)
        if (n > model.start_index)
            acsv += csv_line({std::to_string(n),
                              llt::fmt_g17(llt::asllt_expected_average(probs, sched, n))});
    llt::write_text_file((fs::path(cfg.out) / "expected_average.csv").string(), acsv);

    std::cout << "plot-data -> " << cfg.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    // A JSON config seeds the defaults; explicit flags override it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_json_config(cfg, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"lattice local-limit laboratory"};
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--model", cfg.model,
                   "model id: iid:<dist-file> | block-uniform:b=<int> | block-uniform:b=j | "
                   "cramer | log-variance");
    app.add_option("--kappa", cfg.kappa, "standardized level target");
    app.add_option("--N", cfg.N, "range bound");
    app.add_option("--R", cfg.R, "block base (> 1)");
    app.add_option("--seed", cfg.seed, "base seed");
    app.add_option("--replicas", cfg.replicas, "Monte Carlo replica count");
    app.add_option("--variant", cfg.variant, "bound variant: main|tau|ratio-c|simple|all");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--jobs", cfg.jobs, "worker threads");
    app.add_option("--theta-scale", cfg.theta_scale, "global theta scale in (0,1]");
    app.add_option("--b", cfg.b, "series exponent b");
    app.add_option("--block-lo", cfg.block_lo, "first block index (spectrum)");
    app.add_option("--block-hi", cfg.block_hi, "last block index (spectrum)");

    auto* inspect = app.add_subcommand("inspect", "scalar/weight summaries");
    auto* verify = app.add_subcommand("verify", "identity and bound suites");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo ASLLT runs");
    auto* spectrum = app.add_subcommand("spectrum", "block Gram matrix dump");
    auto* plotdata = app.add_subcommand("plot-data", "plot-ready CSV series");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        validate(cfg);
        fs::create_directories(cfg.out);
        if (inspect->parsed()) return cmd_inspect(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (spectrum->parsed()) return cmd_spectrum(cfg);
        if (plotdata->parsed()) return cmd_plot_data(cfg);
    } catch (const llt::RangeExceeded& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return 3;
    } catch (const llt::TooLarge& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return 3;
    } catch (const llt::MassBudgetExceeded& e) {
        std::cerr << "feasibility error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
