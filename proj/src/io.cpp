#include "bfsi/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bfsi {

namespace {

constexpr double kEnvelopeSlack = 1e-6;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

/// Counts of the per-sample inequality checks reported in the summary.
struct SuiteCounts {
    int corridor = 0;
    int a1_bound = 0;
    int a2_bound = 0;
    int trace_bound = 0;
    int sandwich = 0;
};

SuiteCounts count_inequalities(const std::vector<DiagnosticsRecord>& records,
                               const Trajectory& traj) {
    SuiteCounts counts;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const DiagnosticsRecord& r = records[k];
        const double h = traj.states[k].h;
        if (h < -1.0 + r.kappa1 * (1.0 - kEnvelopeSlack) ||
            h > 1.0 - r.kappa2 * (1.0 - kEnvelopeSlack)) {
            ++counts.corridor;
        }
        const double budget = 1.0 + kEnvelopeSlack;
        if (std::abs(r.A1) > 6.0 * r.D * budget) ++counts.a1_bound;
        if (std::abs(r.A2) > 4.0 * r.D * budget) ++counts.a2_bound;
        const double g = traj.states[k].g;
        if (g * g > 2.0 * r.D * budget) ++counts.trace_bound;
        if (r.V_eps < 0.25 * r.E * (1.0 - kEnvelopeSlack) ||
            r.V_eps > 2.0 * r.E * budget) {
            ++counts.sandwich;
        }
    }
    return counts;
}

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x, y;
};

/// Minimal polyline plot; presentation only, nothing reads these back.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<Series>& series, bool log_y) {
    const double width = 720.0, height = 440.0;
    const double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    auto transform_y = [log_y](double v) {
        return log_y ? std::log10(std::max(v, 1e-300)) : v;
    };
    for (const Series& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double yv = transform_y(s.y[i]);
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = yv;
                first = false;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, yv);
                ymax = std::max(ymax, yv);
            }
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) {
        return height - mb - (transform_y(y) - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";

    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", xmin);
    out << "<text x=\"" << ml << "\" y=\"" << height - mb + 20
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", xmax);
    out << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 20
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << buf
        << "</text>\n";
    std::snprintf(buf, sizeof(buf), log_y ? "1e%.3g" : "%.4g", ymin);
    out << "<text x=\"" << ml - 6 << "\" y=\"" << height - mb
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << buf
        << "</text>\n";
    std::snprintf(buf, sizeof(buf), log_y ? "1e%.3g" : "%.4g", ymax);
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << buf
        << "</text>\n";

    double legend_y = mt + 4.0;
    for (const Series& s : series) {
        if (s.x.empty()) continue;
        // Downsample long series; the plot stays visually identical.
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 2000);
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        if ((s.x.size() - 1) % stride != 0) {
            out << px(s.x.back()) << "," << py(s.y.back());
        }
        out << "\"/>\n";
        out << "<text x=\"" << width - mr - 8 << "\" y=\"" << legend_y
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << s.color << "\">" << s.label << "</text>\n";
        legend_y += 16.0;
    }
    out << "</svg>\n";
}

}  // namespace

std::string format_full(double x) {
    if (!std::isfinite(x)) {
        throw QuadratureError("non-finite value reached an output file");
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

nlohmann::json make_run_summary(const ValidatedConfig& cfg, const Trajectory& traj,
                                const std::vector<DiagnosticsRecord>& records,
                                const StabilityConstants& sc) {
    const SimConfig& c = cfg.get();
    nlohmann::json j;
    j["config_hash"] = config_hash(c);
    j["scheme"] = scheme_name(c.scheme);
    j["n_steps"] = traj.size() - 1;

    const DiagnosticsRecord& last = records.back();
    j["final"] = {{"t", last.t},
                  {"h", traj.back().h},
                  {"g", traj.back().g},
                  {"E", last.E}};

    j["stability_constants"] = {{"Q", sc.Q},
                                {"C", sc.C},
                                {"alpha", sc.alpha},
                                {"eps", sc.eps},
                                {"eta", sc.eta}};

    std::vector<double> ts(records.size()), es(records.size()), vs(records.size());
    double max_residual = 0.0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        ts[k] = records[k].t;
        es[k] = records[k].E;
        vs[k] = records[k].V_eps;
        max_residual = std::max(max_residual, std::abs(records[k].residual));
    }
    j["energy"] = {{"E0", records.front().E},
                   {"max_identity_residual", max_residual}};

    const double e0 = records.front().E;
    const double envelope_bound = (c.K > 0.0) ? 16.0 * e0 : e0;
    const double envelope_rate = (c.K > 0.0) ? sc.eta : 0.25;
    const int violations =
        count_envelope_violations(ts, es, envelope_bound, envelope_rate, kEnvelopeSlack);

    nlohmann::json decay;
    decay["envelope"] = {{"bound", envelope_bound},
                         {"rate", envelope_rate},
                         {"violations", violations},
                         {"verdict", violations == 0 ? "PASS" : "FAIL"}};
    decay["violations"] = violations;
    const double t_final = traj.back().t;
    try {
        const DecayFit fit = decay_fit(ts, es, 0.5 * t_final, t_final);
        decay["fitted_rate"] = fit.rate;
        decay["fit_window"] = {0.5 * t_final, t_final};
        decay["fit_samples"] = fit.n_samples;
    } catch (const DegenerateFit&) {
        decay["fitted_rate"] = nullptr;
        decay["degenerate_fit"] = true;
    }
    if (c.K > 0.0) {
        const int veps_violations = count_envelope_violations(
            ts, vs, vs.front(), sc.eta, kEnvelopeSlack);
        decay["lyapunov_violations"] = veps_violations;
    }
    j["decay"] = decay;

    if (c.K == 0.0) {
        const HStarResult hs = h_star_estimate(traj, cfg);
        j["h_star"] = {{"value", hs.h_star},
                       {"window_end", hs.window_end},
                       {"violations_theorem", hs.violations_theorem},
                       {"violations_proof_tail", hs.violations_proof_tail}};
    }

    const SuiteCounts counts = count_inequalities(records, traj);
    j["checks"] = {{"corridor_violations", counts.corridor},
                   {"a1_bound_violations", counts.a1_bound},
                   {"a2_bound_violations", counts.a2_bound},
                   {"trace_bound_violations", counts.trace_bound},
                   {"sandwich_violations", counts.sandwich},
                   {"collision", false}};
    return j;
}

RunArtifacts write_run_artifacts(const std::filesystem::path& out_dir,
                                 const ValidatedConfig& cfg, const Trajectory& traj,
                                 const std::vector<DiagnosticsRecord>& records,
                                 const nlohmann::json& summary, bool with_plots) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

    RunArtifacts artifacts;
    artifacts.trajectory_csv = out_dir / "trajectory.csv";
    artifacts.diagnostics_csv = out_dir / "diagnostics.csv";
    artifacts.summary_json = out_dir / "summary.json";

    {
        std::ofstream out = open_out(artifacts.trajectory_csv);
        out << "t,h,g,E,diss_cum,u,P,A1,A2,V_eps,jump,kappa1,kappa2,residual\n";
        for (std::size_t k = 0; k < records.size(); ++k) {
            const DiagnosticsRecord& r = records[k];
            const State& s = traj.states[k];
            out << format_full(r.t) << ',' << format_full(s.h) << ','
                << format_full(s.g) << ',' << format_full(r.E) << ','
                << format_full(r.diss_cum) << ',' << format_full(r.u) << ','
                << format_full(r.P) << ',' << format_full(r.A1) << ','
                << format_full(r.A2) << ',' << format_full(r.V_eps) << ','
                << format_full(r.jump) << ',' << format_full(r.kappa1) << ','
                << format_full(r.kappa2) << ',' << format_full(r.residual) << '\n';
        }
    }
    {
        std::ofstream out = open_out(artifacts.diagnostics_csv);
        out << "t,E,P,A1,A2,V_eps,jump,kappa1,kappa2,u,W1,W2,D,diss_cum,residual\n";
        for (const DiagnosticsRecord& r : records) {
            out << format_full(r.t) << ',' << format_full(r.E) << ','
                << format_full(r.P) << ',' << format_full(r.A1) << ','
                << format_full(r.A2) << ',' << format_full(r.V_eps) << ','
                << format_full(r.jump) << ',' << format_full(r.kappa1) << ','
                << format_full(r.kappa2) << ',' << format_full(r.u) << ','
                << format_full(r.W1) << ',' << format_full(r.W2) << ','
                << format_full(r.D) << ',' << format_full(r.diss_cum) << ','
                << format_full(r.residual) << '\n';
        }
    }
    {
        std::ofstream out = open_out(artifacts.summary_json);
        out << summary.dump(2) << '\n';
    }

    if (with_plots) {
        const SimConfig& c = cfg.get();
        std::vector<double> ts(records.size()), es(records.size()), vs(records.size());
        std::vector<double> hs(records.size()), lo(records.size()), hi(records.size());
        std::vector<double> env(records.size());
        const double e0 = records.front().E;
        const double bound = (c.K > 0.0) ? 16.0 * e0 : e0;
        const double rate =
            (c.K > 0.0) ? summary["stability_constants"]["eta"].get<double>() : 0.25;
        for (std::size_t k = 0; k < records.size(); ++k) {
            ts[k] = records[k].t;
            es[k] = records[k].E;
            vs[k] = records[k].V_eps;
            hs[k] = traj.states[k].h;
            lo[k] = -1.0 + records[k].kappa1;
            hi[k] = 1.0 - records[k].kappa2;
            env[k] = bound * std::exp(-rate * records[k].t);
        }
        const bool log_scale = e0 > 0.0;
        const std::filesystem::path energy_svg = out_dir / "energy.svg";
        write_svg_plot(energy_svg, "energy and decay envelope",
                       {{"E(t)", "#1f77b4", ts, es}, {"envelope", "#d62728", ts, env}},
                       log_scale);
        artifacts.plots.push_back(energy_svg);

        const std::filesystem::path h_svg = out_dir / "position.svg";
        write_svg_plot(h_svg, "interface position and corridor",
                       {{"h(t)", "#1f77b4", ts, hs},
                        {"lower", "#2ca02c", ts, lo},
                        {"upper", "#2ca02c", ts, hi}},
                       false);
        artifacts.plots.push_back(h_svg);

        const std::filesystem::path v_svg = out_dir / "lyapunov.svg";
        write_svg_plot(v_svg, "perturbed energy", {{"V_eps(t)", "#9467bd", ts, vs}},
                       log_scale);
        artifacts.plots.push_back(v_svg);
    }
    return artifacts;
}

void write_study_csv(const std::filesystem::path& path, const RefinementStudy& study) {
    std::ofstream out = open_out(path);
    out << "level,n_cells,dt,error,order_vs_prev,status\n";
    for (std::size_t k = 0; k < study.levels.size(); ++k) {
        const double order = (k == 0 || study.degenerate)
                                 ? 0.0
                                 : study.pair_orders[k - 1];
        out << k << ',' << study.levels[k].n_cells << ','
            << format_full(study.levels[k].dt) << ',' << format_full(study.errors[k])
            << ',' << format_full(order) << ','
            << (study.degenerate ? "DEGENERATE" : "ok") << '\n';
    }
}

}  // namespace bfsi
