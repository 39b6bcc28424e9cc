#include "gemfrft/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "gemfrft/frft.hpp"
#include "gemfrft/signals.hpp"

namespace gemfrft {

namespace {

const char* protocol_name(ProtocolKind k) {
    return k == ProtocolKind::gem_eit ? "gem_eit" : "gem_gem";
}

// theta (total rotation) -> spec fields for one protocol kind.
void apply_theta(ProtocolSpec& proto, ProtocolKind kind, double theta) {
    if (kind == ProtocolKind::gem_eit) {
        if (!(theta > 0.0 && theta < pi) && !(theta > -pi && theta < 0.0))
            throw invalid_parameter("sweep: gem_eit theta must lie in (0,pi) or (-pi,0)");
        proto.ft_sign = theta > 0.0 ? +1 : -1;
        proto.theta_extra = theta - proto.ft_sign * pi / 2.0;
    } else {
        proto.ft_sign = +1;
        proto.theta_extra = theta;
    }
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void SweepSpec::validate() const {
    if (protocols.empty()) throw invalid_parameter("SweepSpec: no protocols");
    if (theta_list.empty() && m_list.empty())
        throw invalid_parameter("SweepSpec: nothing to sweep");
    for (double th : theta_list)
        if (!(std::abs(th) > 1e-6 && std::abs(th) < pi - 1e-6))
            throw invalid_parameter("SweepSpec: theta must lie in (0, pi) away from the poles");
    if (m < 1) throw invalid_parameter("SweepSpec: m must be >= 1");
    if (!(t_i > 0.0)) throw invalid_parameter("SweepSpec: t_i must be positive");
}

PulseSignal sweep_input_hg(int n, int m, double t_i, double kappa, double dt,
                           ProtocolSpec& proto) {
    const double sigma = mode_volume_scale(m, t_i, kappa);
    HGParams hp;
    hp.n = n;
    hp.sigma_t = sigma;
    hp.center = 0.5 * t_i;
    hp.mode_volume = m;
    TimeGrid grid(0.0, dt, static_cast<std::size_t>(std::llround(t_i / dt)) + 1);
    proto.w_i_mhz = matched_bandwidth_mhz(sigma, t_i);
    proto.t_i = t_i;
    proto.m = m;
    return hg_mode(hp, grid);
}

std::size_t auto_n_z(const ProtocolSpec& spec) {
    // Largest wavenumber: gradient winding over the storage stage plus
    // half the stored signal's own spread, with ~20 samples per period.
    const double g = two_pi * spec.storage_bandwidth_mhz();
    const double k_max = g * (spec.t_i + 0.5 * spec.t_i * 0.9);
    std::size_t n = 512;
    const double needed = 3.2 * k_max; // ~20 points per 2 pi
    while (double(n) < needed && n < 16384) n <<= 1;
    return n;
}

namespace {

struct RowTask {
    ProtocolKind kind;
    double theta;
    int n;
    int m;
};

ResultRow execute_row(const RowTask& task, const SweepSpec& spec, const MediumParams& medium) {
    ResultRow row;
    row.protocol = protocol_name(task.kind);
    row.theta = task.theta;
    row.n = task.n;
    row.m = task.m;
    row.expected_phase = frft_eigenphase_sign * task.n * task.theta;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ProtocolSpec proto;
        proto.omega_gem = spec.omega_gem;
        proto.chirp_scale_in = spec.chirp_scale_in;
        proto.chirp_scale_out = spec.chirp_scale_out;
        apply_theta(proto, task.kind, task.theta);
        // signal dt: a few steps of margin below the mode's finest scale
        const double sigma = mode_volume_scale(task.m, spec.t_i, spec.kappa);
        const double dt_sig = std::max(spec.dt, sigma / 64.0);
        PulseSignal input = sweep_input_hg(task.n, task.m, spec.t_i, spec.kappa, dt_sig, proto);

        SolverOptions opt;
        opt.dt = spec.dt;
        opt.grid = SpaceGrid(spec.n_z ? spec.n_z : auto_n_z(proto));
        auto res = simulate_frft(proto, medium, input, opt, task.kind);

        row.efficiency = res.scores.efficiency;
        row.cond_fidelity = res.scores.conditional_fidelity;
        row.eigenphase = res.scores.eigenphase;
    } catch (const error& e) {
        row.status = std::string("error: ") + e.what();
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

// Run tasks across a small worker pool; results land by index, so the
// scheduling order cannot affect the table.
std::vector<ResultRow> execute_rows(const std::vector<RowTask>& tasks, const SweepSpec& spec,
                                    const MediumParams& medium) {
    std::vector<ResultRow> rows(tasks.size());
    unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : spec.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) rows[i] = execute_row(tasks[i], spec, medium);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            rows[i] = execute_row(tasks[i], spec, medium);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return rows;
}

// Reference each (protocol, theta) group's eigenphase to its n = 0 row,
// which measures the protocol's global (mode-independent) phase.
void reference_eigenphases(std::vector<ResultRow>& rows) {
    for (auto& r : rows) {
        if (r.n != 0 || r.status != "ok") continue;
        const double phi0 = r.eigenphase;
        for (auto& s : rows) {
            if (s.protocol == r.protocol && s.theta == r.theta && s.m == r.m &&
                s.status == "ok")
                s.eigenphase = wrap_pi(s.eigenphase - phi0);
        }
    }
}

} // namespace

ResultTable run_eigenphase_sweep(const SweepSpec& spec, const MediumParams& medium) {
    spec.validate();
    std::vector<RowTask> tasks;
    for (auto kind : spec.protocols)
        for (double th : spec.theta_list) {
            bool has_n0 = false;
            for (int n : spec.n_list) has_n0 |= (n == 0);
            if (!has_n0) tasks.push_back({kind, th, 0, spec.m}); // phase reference
            for (int n : spec.n_list) tasks.push_back({kind, th, n, spec.m});
        }
    auto rows = execute_rows(tasks, spec, medium);
    reference_eigenphases(rows);
    ResultTable table{std::move(rows)};
    table.sort_canonical();
    return table;
}

ResultTable run_fidelity_efficiency_sweep(const SweepSpec& spec, const MediumParams& medium) {
    spec.validate();
    std::vector<RowTask> tasks;
    for (auto kind : spec.protocols) {
        for (double th : spec.theta_list)
            for (int n : spec.n_list) tasks.push_back({kind, th, n, spec.m});
        for (int mm : spec.m_list) tasks.push_back({kind, pi / 4.0, mm, mm}); // n = m rows
    }
    auto rows = execute_rows(tasks, spec, medium);
    reference_eigenphases(rows);
    ResultTable table{std::move(rows)};
    table.sort_canonical();
    return table;
}

void ResultTable::sort_canonical() {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.protocol != b.protocol) return a.protocol < b.protocol;
        if (a.theta != b.theta) return a.theta < b.theta;
        if (a.m != b.m) return a.m < b.m;
        return a.n < b.n;
    });
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [](const ResultRow& a, const ResultRow& b) {
                               return a.protocol == b.protocol && a.theta == b.theta &&
                                      a.m == b.m && a.n == b.n;
                           }),
               rows.end());
}

const char* ResultTable::csv_header() {
    return "protocol,theta_rad,n,m,efficiency,cond_fidelity,eigenphase_rad,"
           "expected_phase_rad,status,wall_time_s";
}

void ResultTable::write_csv(std::ostream& os) const {
    os << csv_header() << '\n';
    for (const auto& r : rows) {
        os << r.protocol << ',' << fmt17(r.theta) << ',' << r.n << ',' << r.m << ','
           << fmt17(r.efficiency) << ',' << fmt17(r.cond_fidelity) << ','
           << fmt17(r.eigenphase) << ',' << fmt17(r.expected_phase) << ',' << r.status << ','
           << fmt17(r.wall_time_s) << '\n';
    }
}

void ResultTable::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw io_error("ResultTable: cannot open " + path);
    write_csv(os);
}

ResultTable ResultTable::read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("ResultTable: cannot open " + path);
    ResultTable table;
    std::string line;
    if (!std::getline(is, line)) return table;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() < 10) throw io_error("ResultTable: malformed row in " + path);
        ResultRow r;
        r.protocol = f[0];
        r.theta = std::stod(f[1]);
        r.n = std::stoi(f[2]);
        r.m = std::stoi(f[3]);
        r.efficiency = std::stod(f[4]);
        r.cond_fidelity = std::stod(f[5]);
        r.eigenphase = std::stod(f[6]);
        r.expected_phase = std::stod(f[7]);
        r.status = f[8];
        r.wall_time_s = std::stod(f[9]);
        table.rows.push_back(std::move(r));
    }
    return table;
}

ScalingFit fit_efficiency_scaling(const std::vector<int>& ms, const std::vector<double>& etas) {
    if (ms.size() != etas.size() || ms.size() < 3)
        throw invalid_parameter("fit_efficiency_scaling: need >= 3 points");
    const std::size_t n = ms.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(etas[i] > 0.0))
            throw invalid_parameter("fit_efficiency_scaling: non-positive efficiency");
        y[i] = std::log(etas[i]);
    }
    ScalingFit fit;
    // model 1: y = b - log m  (c/m); b is the mean of y + log m.
    {
        double b = 0.0;
        for (std::size_t i = 0; i < n; ++i) b += y[i] + std::log(double(ms[i]));
        b /= double(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - (b - std::log(double(ms[i])));
            fit.rss_c_over_m += r * r;
        }
    }
    // model 2: y = b - a sqrt(m); ordinary least squares in sqrt(m).
    {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::sqrt(double(ms[i]));
            sx += x; sy += y[i]; sxx += x * x; sxy += x * y[i];
        }
        const double denom = double(n) * sxx - sx * sx;
        const double slope = (double(n) * sxy - sx * sy) / denom;
        const double b = (sy - slope * sx) / double(n);
        fit.exp_sqrt_a = -slope;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::sqrt(double(ms[i]));
            const double r = y[i] - (b + slope * x);
            fit.rss_exp_sqrt += r * r;
        }
    }
    return fit;
}

double eigenphase_slope(const std::vector<int>& ns, const std::vector<double>& phases) {
    if (ns.size() != phases.size() || ns.size() < 2)
        throw invalid_parameter("eigenphase_slope: need >= 2 points");
    // Unwrap along ascending n assuming roughly linear phase growth.
    std::vector<std::size_t> order(ns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ns[a] < ns[b]; });
    std::vector<double> un(ns.size());
    double prev = phases[order[0]];
    un[0] = prev;
    for (std::size_t k = 1; k < order.size(); ++k) {
        double p = phases[order[k]];
        while (p - prev > pi) p -= two_pi;
        while (p - prev < -pi) p += two_pi;
        un[k] = p;
        prev = p;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double x = double(ns[order[k]]);
        sx += x; sy += un[k]; sxx += x * x; sxy += x * un[k];
    }
    const double n = double(ns.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double wigner_lobe_angle(const WignerMap& map, double t_center, double t_scale) {
    // Covariance principal axis of the positive density in matched
    // coordinates; fringes between lobes are symmetric and drop out.
    double w = 0.0, mx = 0.0, my = 0.0;
    const double f_to_y = two_pi * t_scale;
    for (std::size_t i = 0; i < map.axis1.count; ++i) {
        const double x = (map.axis1.value(i) - t_center) / t_scale;
        for (std::size_t l = 0; l < map.axis2.count; ++l) {
            const double v = map.at(i, l);
            if (v <= 0.0) continue;
            const double yv = map.axis2.value(l) * f_to_y;
            w += v; mx += v * x; my += v * yv;
        }
    }
    if (w <= 0.0) throw invalid_parameter("wigner_lobe_angle: no positive density");
    mx /= w; my /= w;
    double cxx = 0.0, cxy = 0.0, cyy = 0.0;
    for (std::size_t i = 0; i < map.axis1.count; ++i) {
        const double x = (map.axis1.value(i) - t_center) / t_scale - mx;
        for (std::size_t l = 0; l < map.axis2.count; ++l) {
            const double v = map.at(i, l);
            if (v <= 0.0) continue;
            const double yv = map.axis2.value(l) * f_to_y - my;
            cxx += v * x * x; cxy += v * x * yv; cyy += v * yv * yv;
        }
    }
    return 0.5 * std::atan2(2.0 * cxy, cxx - cyy); // principal axis, mod pi
}

ShowcaseResult run_showcase(double theta_total, const PulseSignal& input,
                            const MediumParams& medium, const SweepSpec& spec) {
    ShowcaseResult res;
    res.input = input;

    ProtocolSpec proto;
    proto.omega_gem = spec.omega_gem;
    proto.t_i = spec.t_i;
    proto.m = spec.m;
    apply_theta(proto, ProtocolKind::gem_eit, theta_total);
    // Matched bandwidth from the input's own circular-WDF condition: use
    // the Gaussian-pair single-lobe scale inferred from its extent at m.
    const double sigma = mode_volume_scale(spec.m, spec.t_i, spec.kappa);
    proto.w_i_mhz = matched_bandwidth_mhz(sigma, spec.t_i);

    SolverOptions opt;
    opt.dt = spec.dt;
    opt.grid = SpaceGrid(spec.n_z ? spec.n_z : auto_n_z(proto));
    auto run_res = simulate_frft(proto, medium, input, opt);

    res.output = run_res.output;
    res.target = run_res.target;
    res.scores = run_res.scores;
    res.input_map = wigner(input);
    res.output_map = wigner(res.output);

    // Stored spinwave: snapshot at the end of the storage stage.
    const double t_store = run_res.schedule.stages.front().duration;
    const FieldState* stored = nullptr;
    for (const auto& [t, st] : run_res.record.snapshots)
        if (std::abs(t - t_store) < 1e-9) stored = &st;
    if (!stored && !run_res.record.snapshots.empty()) stored = &run_res.record.snapshots.front().second;
    if (stored) res.spinwave_map = wigner_spinwave(stored->S);

    res.lobe_angle = wigner_lobe_angle(res.output_map, run_res.schedule.meta.t_center_out,
                                       run_res.schedule.meta.t_scale);
    return res;
}

} // namespace gemfrft
