// Copyright 2026 The cvrepeater Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <nlohmann/json.hpp>
#include <vector>

#include "cvrepeater/cvrepeater.h"
#include "support.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace cli {
namespace {

// Units travel in the keys: ebits/mode, ebps, km, bits.
void print_kv(const std::vector<std::pair<std::string, double>> &rows) {
    size_t w = 0;
    for (const auto &r : rows) {
        w = std::max(w, r.first.size());
    }
    for (const auto &r : rows) {
        std::cout << r.first << std::string(w - r.first.size() + 2, ' ') << num(r.second) << "\n";
    }
}

json to_json(const std::vector<std::pair<std::string, double>> &rows) {
    json j;
    for (const auto &r : rows) {
        if (!std::isfinite(r.second)) {
            j[r.first] = nullptr;
        } else if (r.second == std::floor(r.second) && std::abs(r.second) < 1e15) {
            j[r.first] = (long long)r.second;
        } else {
            j[r.first] = r.second;
        }
    }
    return j;
}

void emit(const std::vector<std::pair<std::string, double>> &rows, const std::string &format) {
    if (format == "json") {
        std::cout << to_json(rows).dump(2) << "\n";
    } else {
        print_kv(rows);
    }
}

void write_json(const fs::path &path, const json &j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
    if (!out) {
        throw Failure(kExitCheckFailed, "cannot write " + path.string());
    }
}

void make_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Failure(kExitCheckFailed, "cannot create " + dir.string() + ": " + ec.message());
    }
}

double plob(double t) {
    double c = 0;
    check(cvr_capacity_direct(t, &c), "direct capacity");
    return c;
}

struct Channel {
    double t = -1;
    double distance_km = -1;
    double alpha = 0.2;
    CLI::Option *t_opt = nullptr;
    CLI::Option *d_opt = nullptr;

    void add(CLI::App *sub, const char *t_name = "--t") {
        t_opt = sub->add_option(t_name, t, "Transmissivity in (0, 1]");
        d_opt = sub->add_option("--distance-km", distance_km, "Fiber length in km")->check(CLI::NonNegativeNumber);
        t_opt->excludes(d_opt);
        sub->add_option("--alpha", alpha, "Fiber attenuation in dB/km")->capture_default_str();
    }
    void require(CLI::App *sub) {
        sub->callback([this] {
            if (t_opt->count() == 0 && d_opt->count() == 0) {
                throw CLI::RequiredError(t_opt->get_name() + " or --distance-km");
            }
        });
    }
    double resolve() const { return d_opt->count() ? transmissivity(distance_km, alpha) : t; }
};

const std::map<std::string, cvr_recursion> kRecursion{{"exact", CVR_RECURSION_EXACT},
                                                       {"printed", CVR_RECURSION_PRINTED}};
const std::map<std::string, cvr_swap_cost> kSwapCost{{"physical", CVR_SWAP_COST_PHYSICAL},
                                                      {"ideal", CVR_SWAP_COST_IDEAL}};
const std::map<std::string, cvr_envelope_mode> kMode{{"dv", CVR_MODE_DV}, {"general", CVR_MODE_GENERAL}};
const std::map<std::string, cvr_objective> kObjective{{"true-rci", CVR_OBJECTIVE_TRUE_RCI},
                                                       {"rci", CVR_OBJECTIVE_RCI}};

}  // namespace

Runner add_link(CLI::App &app) {
    struct State {
        cvr_link_params p{0, 1, 0.5, 1};
        Channel ch;
        std::string format = "text";
    };
    auto s = std::make_shared<State>();
    CLI::App *sub = app.add_subcommand("link", "Heralded scissors link: probability and RCI.");
    sub->add_option("--mu", s->p.mu, "Mean photon number of the TMSV source")->required();
    sub->add_option("--kappa", s->p.kappa, "Scissors beam-splitter parameter in (0, 1)")->required();
    sub->add_option("--n", s->p.n_scissors, "Number of parallel scissors")->capture_default_str();
    sub->add_option("--format", s->format, "Output format")->check(CLI::IsMember({"text", "json"}));
    s->ch.add(sub);
    s->ch.require(sub);
    return [s] {
        cvr_link_params p = s->p;
        p.t = s->ch.resolve();
        cvr_link_report r;
        check(cvr_link_evaluate(&p, &r), "link");
        emit({{"mu", p.mu},
              {"t", p.t},
              {"kappa", p.kappa},
              {"n", p.n_scissors},
              {"P_N", r.probability},
              {"H_AB_bits", r.entropy_joint},
              {"H_A_bits", r.entropy_marginal},
              {"I_R_ebits_per_mode", r.rci},
              {"true_rci_ebits_per_mode", r.true_rci},
              {"direct_capacity_ebits_per_mode", p.t < 1 ? plob(p.t) : INFINITY}},
             s->format);
        return kExitOk;
    };
}

Runner add_optimize_link(CLI::App &app) {
    struct State {
        std::vector<double> t;
        std::vector<double> distances;
        double alpha = 0.2;
        std::vector<int> n{1};
        std::string objective = "true-rci";
        cvr_opt_domain domain;
        std::string output;
    };
    auto s = std::make_shared<State>();
    cvr_opt_domain_init(&s->domain);
    CLI::App *sub = app.add_subcommand("optimize-link", "Maximize a link figure of merit over mu and kappa.");
    auto *t_opt = sub->add_option("--t", s->t, "Transmissivities")->delimiter(',');
    auto *d_opt = sub->add_option("--distance-km", s->distances, "Fiber lengths in km")->delimiter(',');
    t_opt->excludes(d_opt);
    sub->add_option("--alpha", s->alpha, "Fiber attenuation in dB/km")->capture_default_str();
    sub->add_option("--n", s->n, "Scissors counts")->delimiter(',');
    sub->add_option("--objective", s->objective, "true-rci or rci")->check(CLI::IsMember({"true-rci", "rci"}));
    sub->add_option("--mu-lo", s->domain.mu_lo)->capture_default_str();
    sub->add_option("--mu-hi", s->domain.mu_hi)->capture_default_str();
    sub->add_option("--kappa-lo", s->domain.kappa_lo)->capture_default_str();
    sub->add_option("--kappa-hi", s->domain.kappa_hi)->capture_default_str();
    sub->add_option("--grid", s->domain.grid, "Coarse grid points per axis")->capture_default_str();
    sub->add_option("--output", s->output, "CSV file for the results");
    sub->callback([t_opt, d_opt] {
        if (t_opt->count() == 0 && d_opt->count() == 0) {
            throw CLI::RequiredError("--t or --distance-km");
        }
    });
    return [s] {
        std::vector<std::pair<double, double>> points;  // (distance_km, t)
        for (double d : s->distances) {
            points.push_back({d, transmissivity(d, s->alpha)});
        }
        for (double t : s->t) {
            points.push_back({NAN, t});
        }
        std::vector<std::string> header{"distance_km", "t", "n", "mu", "kappa", "objective_ebits_per_mode",
                                        "probability", "rci_ebits_per_mode", "direct_capacity_ebits_per_mode",
                                        "converged"};
        std::unique_ptr<CsvWriter> csv;
        if (!s->output.empty()) {
            csv = std::make_unique<CsvWriter>(s->output, header);
        }
        std::printf("%12s %12s %3s %14s %14s %16s %14s %14s\n", "distance_km", "t", "n", "mu", "kappa",
                    "objective", "probability", "rci");
        for (const auto &[d, t] : points) {
            for (int n : s->n) {
                cvr_opt_result r;
                check(cvr_optimize_link(t, n, kObjective.at(s->objective), &s->domain, &r), "optimize-link");
                std::printf("%12s %12s %3d %14s %14s %16s %14s %14s\n", num(d).c_str(), num(t).c_str(), n,
                            num(r.mu).c_str(), num(r.kappa).c_str(), num(r.value).c_str(),
                            num(r.probability).c_str(), num(r.rci).c_str());
                if (r.all_negative) {
                    std::cerr << "warning: objective negative everywhere on the grid at t=" << num(t) << ", n=" << n
                              << "\n";
                }
                if (csv) {
                    csv->row({d, t, (double)n, r.mu, r.kappa, r.value, r.probability, r.rci, plob(t),
                              (double)r.converged});
                }
            }
        }
        return kExitOk;
    };
}

Runner add_swap(CLI::App &app) {
    struct State {
        double xi = 1;
        double theta = NAN;
        std::string format = "text";
    };
    auto s = std::make_shared<State>();
    CLI::App *sub = app.add_subcommand("swap", "Physical swap gadget success probability.");
    sub->add_option("--xi", s->xi, "Link entanglement coefficient")->required();
    sub->add_option("--theta", s->theta, "Subtraction angle in rad; omitted: optimize");
    sub->add_option("--format", s->format, "Output format")->check(CLI::IsMember({"text", "json"}));
    return [s] {
        double theta = s->theta;
        double p = 0;
        if (std::isnan(theta)) {
            check(cvr_swap_optimize(s->xi, &theta, &p), "swap");
        } else {
            check(cvr_swap_p_phys(s->xi, theta, &p), "swap");
        }
        double s2 = std::sin(theta) * std::sin(theta);
        emit({{"xi", s->xi}, {"theta_rad", theta}, {"sin2_theta", s2}, {"p_phys", p}}, s->format);
        return kExitOk;
    };
}

Runner add_chain(CLI::App &app) {
    struct State {
        cvr_chain_params p;
        Channel ch;
        std::string recursion = "exact";
        std::string cost = "physical";
        double M = 1e10;
        double rep_rate = 1e6;
        std::string format = "text";
    };
    auto s = std::make_shared<State>();
    cvr_chain_params_init(&s->p);
    CLI::App *sub = app.add_subcommand("chain", "Nested swap chain over 2^x scissors links.");
    sub->add_option("--mu", s->p.mu, "Mean photon number of the TMSV source")->required();
    sub->add_option("--kappa", s->p.kappa, "Scissors beam-splitter parameter in (0, 1)")->required();
    sub->add_option("--x", s->p.x, "Nesting level; 2^x links")->capture_default_str();
    sub->add_option("--q", s->p.q, "Projector coefficient (negative: 1/xi)")->capture_default_str();
    sub->add_option("--cutoff", s->p.cutoff, "Fock cutoff")->capture_default_str();
    sub->add_option("--recursion", s->recursion)->check(CLI::IsMember({"exact", "printed"}));
    sub->add_option("--swap-cost", s->cost)->check(CLI::IsMember({"physical", "ideal"}));
    sub->add_option("--M", s->M, "Multiplexing modes")->capture_default_str();
    sub->add_option("--rep-rate", s->rep_rate, "Repetition rate in Hz")->capture_default_str();
    sub->add_option("--format", s->format, "Output format")->check(CLI::IsMember({"text", "json"}));
    // --distance-km is the end-to-end length; --t-link is per elementary link.
    s->ch.add(sub, "--t-link");
    s->ch.require(sub);
    return [s] {
        cvr_chain_params p = s->p;
        p.recursion = kRecursion.at(s->recursion);
        double eta = s->ch.resolve();
        p.t_link = s->ch.d_opt->count() ? std::pow(eta, std::ldexp(1.0, -p.x)) : eta;
        if (!s->ch.d_opt->count()) {
            eta = std::pow(p.t_link, std::ldexp(1.0, p.x));
        }
        cvr_chain_report r;
        std::vector<double> probs((size_t)std::max(p.x, 0));
        check(cvr_chain_evaluate(&p, &r, probs.data(), probs.size()), "chain");
        double rate = 0;
        check(cvr_chain_rate(&p, s->M, kSwapCost.at(s->cost), &rate), "chain rate");
        std::vector<std::pair<std::string, double>> rows{
            {"x", p.x},
            {"t_link", p.t_link},
            {"t_total", eta},
            {"xi", r.xi},
            {"q", r.q},
            {"p_sciss", r.p_sciss},
            {"H_AB_bits", r.entropy_joint},
            {"H_A_bits", r.entropy_marginal},
            {"I_R_ebits_per_mode", r.rci},
        };
        for (size_t k = 0; k < probs.size(); k++) {
            rows.push_back({"P_swap_level_" + std::to_string(k + 1), probs[k]});
        }
        rows.push_back({"rate_ebits_per_mode", rate});
        rows.push_back({"rate_ebps", rate * s->rep_rate});
        rows.push_back({"direct_capacity_ebits_per_mode", eta < 1 ? plob(eta) : INFINITY});
        emit(rows, s->format);
        return kExitOk;
    };
}

namespace {

struct EnvelopeOptions {
    cvr_envelope_config cfg;
    std::string mode = "dv";
    std::string recursion = "exact";
    std::string cost = "physical";

    void add(CLI::App *sub, bool with_m) {
        cvr_envelope_config_init(&cfg, CVR_MODE_DV);
        sub->add_option("--mode", mode, "dv or general")->check(CLI::IsMember({"dv", "general"}));
        if (with_m) {
            sub->add_option("--M", cfg.M, "Multiplexing modes")->capture_default_str();
        }
        sub->add_option("--rep-rate", cfg.rep_rate, "Repetition rate in Hz")->capture_default_str();
        sub->add_option("--alpha", cfg.alpha_db_per_km, "Fiber attenuation in dB/km")->capture_default_str();
        sub->add_option("--distance-min-km", cfg.distance_min_km)->capture_default_str();
        sub->add_option("--distance-max-km", cfg.distance_max_km)->capture_default_str();
        sub->add_option("--distance-step-km", cfg.distance_step_km)->capture_default_str();
        sub->add_option("--x-max", cfg.x_max, "Largest nesting level")->capture_default_str();
        sub->add_option("--p-swap", cfg.p_swap, "dv: swap success probability")->capture_default_str();
        sub->add_option("--c", cfg.c, "dv: link success prefactor")->capture_default_str();
        sub->add_option("--mu", cfg.mu, "general: TMSV mean photon number")->capture_default_str();
        sub->add_option("--kappa-coeff", cfg.kappa_coeff, "general: kappa = coeff * t^exp")->capture_default_str();
        sub->add_option("--kappa-exp", cfg.kappa_exp)->capture_default_str();
        sub->add_option("--q", cfg.q, "general: projector coefficient (negative: 1/xi)")->capture_default_str();
        sub->add_option("--cutoff", cfg.cutoff, "general: Fock cutoff")->capture_default_str();
        sub->add_option("--recursion", recursion)->check(CLI::IsMember({"exact", "printed"}));
        sub->add_option("--swap-cost", cost)->check(CLI::IsMember({"physical", "ideal"}));
    }

    cvr_envelope_config resolve() const {
        cvr_envelope_config c = cfg;
        c.mode = kMode.at(mode);
        c.recursion = kRecursion.at(recursion);
        c.swap_cost = kSwapCost.at(cost);
        return c;
    }
};

using EnvelopePtr = std::unique_ptr<cvr_envelope, decltype(&cvr_envelope_free)>;

EnvelopePtr build(const cvr_envelope_config &cfg) {
    cvr_envelope *env = nullptr;
    check(cvr_envelope_build(&cfg, &env), "envelope");
    return EnvelopePtr(env, &cvr_envelope_free);
}

std::vector<double> series(const cvr_envelope *env, size_t n, cvr_series which) {
    std::vector<double> out(n);
    check(cvr_envelope_series_get(env, which, out.data(), n), "envelope series");
    return out;
}

json summary_json(const std::string &mode, const cvr_envelope_config &cfg, const cvr_envelope_summary &s) {
    auto finite = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json j;
    j["mode"] = mode;
    j["M"] = cfg.M;
    j["rep_rate_hz"] = cfg.rep_rate;
    j["status"] = s.advantage ? "advantage" : "no advantage";
    j["s"] = finite(mode == "dv" && s.supercritical ? s.s_exact : s.s_fit);
    j["s_fit"] = finite(s.s_fit);
    j["s_fit_r2"] = finite(s.s_fit_r2);
    j["fit_window_km"] = {finite(s.fit_lo_km), finite(s.fit_hi_km)};
    if (mode == "dv") {
        j["supercritical"] = (bool)s.supercritical;
        j["s_exact"] = finite(s.s_exact);
        j["tau"] = finite(s.tau);
        j["z"] = finite(s.z);
    }
    j["l_cross_km"] = s.advantage ? finite(s.l_cross_km) : json(nullptr);
    j["r_cross_ebps"] = s.advantage ? finite(s.r_cross_ebps) : json(nullptr);
    return j;
}

void print_summary(const json &j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string v;
        if (it->is_number()) {
            v = num(it->get<double>());
        } else if (it->is_null()) {
            v = "-";
        } else if (it->is_string()) {
            v = it->get<std::string>();
        } else if (it->is_array()) {
            v = (*it)[0].is_null() ? "-" : num((*it)[0].get<double>());
            v += " .. " + ((*it)[1].is_null() ? std::string("-") : num((*it)[1].get<double>()));
        } else {
            v = it->dump();
        }
        std::printf("%-16s %s\n", it.key().c_str(), v.c_str());
    }
}

}  // namespace

Runner add_envelope(CLI::App &app) {
    struct State {
        EnvelopeOptions opts;
        std::string out_dir = "cvrepeater_out";
    };
    auto s = std::make_shared<State>();
    CLI::App *sub = app.add_subcommand("envelope", "Rate-distance curves per repeater count and their envelope.");
    s->opts.add(sub, true);
    sub->add_option("--output-dir", s->out_dir, "Directory for CSV and JSON output")->capture_default_str();
    return [s] {
        cvr_envelope_config cfg = s->opts.resolve();
        EnvelopePtr env = build(cfg);
        cvr_envelope_summary sum;
        check(cvr_envelope_summary_get(env.get(), &sum), "envelope summary");

        fs::path dir(s->out_dir);
        make_dir(dir);
        size_t n = sum.num_points;
        std::vector<double> d(n);
        check(cvr_envelope_distances(env.get(), d.data(), n), "envelope distances");
        std::vector<double> curve(n);
        for (size_t c = 0; c < sum.num_curves; c++) {
            int n_rep = 0;
            check(cvr_envelope_curve(env.get(), c, &n_rep, curve.data(), n), "envelope curve");
            char name[64];
            std::snprintf(name, sizeof(name), "curve_nrep_%05d.csv", n_rep);
            CsvWriter w(dir / name, {"distance_km", "rate_ebits_per_mode", "rate_ebps"});
            for (size_t k = 0; k < n; k++) {
                w.row({d[k], curve[k], curve[k] * cfg.rep_rate});
            }
        }
        auto envelope = series(env.get(), n, CVR_SERIES_ENVELOPE);
        auto pmax = series(env.get(), n, CVR_SERIES_POINTWISE_MAX);
        auto direct = series(env.get(), n, CVR_SERIES_DIRECT);
        CsvWriter w(dir / "envelope.csv",
                    {"distance_km", "envelope_ebits_per_mode", "pointwise_max_ebits_per_mode",
                     "direct_ebits_per_mode", "envelope_ebps", "direct_ebps"});
        for (size_t k = 0; k < n; k++) {
            w.row({d[k], envelope[k], pmax[k], direct[k], envelope[k] * cfg.rep_rate, direct[k] * cfg.rep_rate});
        }
        json j = summary_json(s->opts.mode, cfg, sum);
        write_json(dir / "summary.json", j);
        print_summary(j);
        return kExitOk;
    };
}

Runner add_crossover(CLI::App &app) {
    struct State {
        EnvelopeOptions opts;
        std::vector<double> Ms{1e8, 1e9, 1e10, 1e11, 1e12, 1e13, 1e14, 1e15, 1e16};
        std::string output;
    };
    auto s = std::make_shared<State>();
    CLI::App *sub = app.add_subcommand("crossover", "Envelope exponent and crossover point for several M.");
    s->opts.add(sub, false);
    sub->add_option("--M", s->Ms, "Multiplexing modes")->delimiter(',');
    sub->add_option("--output", s->output, "CSV file for the table");
    return [s] {
        std::unique_ptr<CsvWriter> csv;
        if (!s->output.empty()) {
            csv = std::make_unique<CsvWriter>(
                s->output, std::vector<std::string>{"M", "s", "s_fit", "advantage", "l_cross_km", "r_cross_ebps"});
        }
        std::printf("%10s %10s %10s %14s %14s\n", "M", "s", "s_fit", "l_cross_km", "r_cross_ebps");
        for (double M : s->Ms) {
            cvr_envelope_config cfg = s->opts.resolve();
            cfg.M = M;
            EnvelopePtr env = build(cfg);
            cvr_envelope_summary sum;
            check(cvr_envelope_summary_get(env.get(), &sum), "envelope summary");
            bool dv = cfg.mode == CVR_MODE_DV;
            double sv = dv ? (sum.supercritical ? sum.s_exact : NAN) : sum.s_fit;
            double l = sum.advantage ? sum.l_cross_km : NAN;
            double r = sum.advantage ? sum.r_cross_ebps : NAN;
            std::printf("%10s %10s %10s %14s %14s\n", num(M).c_str(), dv && !sum.supercritical ? "-" : num(sv).c_str(),
                        num(sum.s_fit).c_str(), sum.advantage ? num(l).c_str() : "-",
                        sum.advantage ? num(r).c_str() : "-");
            if (csv) {
                csv->row({M, sv, sum.s_fit, (double)sum.advantage, l, r});
            }
        }
        return kExitOk;
    };
}

Runner add_verify(CLI::App &app) {
    auto cfg = std::make_shared<cvr_verify_config>();
    cvr_verify_config_init(cfg.get());
    CLI::App *sub = app.add_subcommand("verify", "Cross-check closed forms against circuit simulation.");
    sub->add_option("--cutoff", cfg->cutoff, "Fock cutoff")->capture_default_str();
    sub->add_option("--points", cfg->points, "Random parameter points")->capture_default_str();
    sub->add_option("--seed", cfg->seed)->capture_default_str();
    sub->add_option("--inject-kappa-error", cfg->inject_kappa_error,
                    "Relative kappa error on the closed-form side (negative control)")
        ->capture_default_str();
    return [cfg] {
        cvr_verify_report *raw = nullptr;
        check(cvr_verify_run(cfg.get(), &raw), "verify");
        std::unique_ptr<cvr_verify_report, decltype(&cvr_verify_free)> rep(raw, &cvr_verify_free);
        size_t n = cvr_verify_check_count(rep.get());
        for (size_t k = 0; k < n; k++) {
            cvr_check c;
            check(cvr_verify_check(rep.get(), k, &c), "verify");
            std::printf("%-4s %-72s %12s <= %-8s %s\n", c.passed ? "PASS" : "FAIL", c.name, num(c.residual).c_str(),
                        num(c.tolerance).c_str(), c.note);
        }
        for (size_t k = 0; k < cvr_verify_warning_count(rep.get()); k++) {
            std::cerr << "warning: " << cvr_verify_warning(rep.get(), k) << "\n";
        }
        if (cvr_verify_all_passed(rep.get())) {
            return kExitOk;
        }
        cvr_check worst;
        check(cvr_verify_check(rep.get(), cvr_verify_worst(rep.get()), &worst), "verify");
        std::printf("worst residual: %s (%s, tolerance %s)\n", num(worst.residual).c_str(), worst.name,
                    num(worst.tolerance).c_str());
        return kExitCheckFailed;
    };
}

}  // namespace cli
