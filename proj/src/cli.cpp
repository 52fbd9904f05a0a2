#include "stadion/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "stadion/error.hpp"
#include "stadion/explore.hpp"
#include "stadion/normalform.hpp"
#include "stadion/pantograph.hpp"
#include "stadion/parallel.hpp"

namespace stadion::cli {

using json = nlohmann::ordered_json;

std::vector<double> Range::grid() const
{
    if (steps < 1)
        throw DomainError("grid needs at least one step");
    if (!(lo <= hi))
        throw DomainError("grid range is empty");
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i)
        g[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    return g;
}

std::string format9(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

namespace {

// Numbers enter JSON already rounded to 9 significant digits, so the
// shortest round-trip rendering never shows more.
json num(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return std::stod(format9(x));
}

json tolerances_json(const ToleranceSet& t)
{
    return {{"graze", num(t.graze)},         {"corner", num(t.corner)},
            {"chord_min", num(t.chord_min)}, {"parabolic", num(t.parabolic)},
            {"resonance", num(t.resonance)}, {"closure", num(t.closure)},
            {"jet_agreement", num(t.jet_agreement)}};
}

json header(const JobSpec& job)
{
    return {{"schema_version", kSchemaVersion}, {"command", job.command}};
}

json error_json(const Error& e)
{
    return {{"code", std::string(error_name(e.code()))},
            {"exit_code", static_cast<int>(e.code())},
            {"message", e.what()}};
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < width_; ++i) {
            if (i)
                text_ += ',';
            if (i < cells.size())
                text_ += csv_field(cells[i]);
        }
        text_ += '\n';
    }
    const std::string& text() const { return text_; }

private:
    std::size_t width_;
    std::string text_;
};

std::string cell(double x) { return format9(x); }
std::string cell(int x) { return std::to_string(x); }

// One table row per scan cell; the error column carries soft failures.
struct Row {
    std::vector<std::string> cells;
};

std::string err_cell(const Error& e) { return std::string(error_name(e.code())); }

// ---- commands -------------------------------------------------------------

std::string cmd_orbit(const JobSpec& job)
{
    const PantographOrbit orb = materialize_orbit(job.n, job.a, job.h, job.tol);
    const StadiumParams params = build_stadium(job.a, job.h);
    const StabilityReport st = classify_delta(orb.shape.factors.delta, job.q, job.tol);
    const auto& sh = orb.shape;

    json impacts = json::array();
    for (int k = 0; k < orb.period(); ++k)
        impacts.push_back({{"index", k},
                           {"piece", std::string(piece_name(orb.pieces[k]))},
                           {"s", num(orb.impacts[k].s)},
                           {"beta", num(orb.impacts[k].beta)},
                           {"x", num(orb.positions[k].x)},
                           {"y", num(orb.positions[k].y)}});
    json j = header(job);
    j["inputs"] = {{"n", job.n}, {"a", num(job.a)}, {"h", num(job.h)}, {"q", job.q}};
    j["tolerances"] = tolerances_json(job.tol);
    j["period"] = orb.period();
    j["t"] = num(sh.t);
    j["lambda"] = num(sh.lambda);
    j["beta"] = num(sh.beta);
    j["l1"] = num(sh.l1);
    j["l2"] = num(sh.l2);
    j["K"] = num(sh.K);
    j["delta1"] = num(sh.factors.delta1);
    j["delta2"] = num(sh.factors.delta2);
    j["delta"] = num(sh.factors.delta);
    j["class"] = st.label();
    j["half_trace"] = num(st.half_trace);
    j["numeric_half_trace"] = num(numeric_half_trace(params, orb, job.tol));
    j["closure"] = num(orb.closure);
    j["impacts"] = impacts;
    return j.dump(2) + "\n";
}

json classify_json(const StabilityReport& st)
{
    const double rho = std::isfinite(st.phi) ? std::fmod(st.phi / std::numbers::pi, 1.0) : NAN;
    return {{"delta", num(st.delta)},
            {"half_trace", num(st.half_trace)},
            {"class", st.label()},
            {"phi", num(st.phi)},
            {"rotation_number", num(rho)},
            {"resonance_k", st.resonance_k},
            {"resonance_j", st.resonance_j}};
}

std::string cmd_classify(const JobSpec& job)
{
    const StabilityReport st = classify(job.n, job.a, job.h, job.q, job.tol);
    json j = header(job);
    j["inputs"] = {{"n", job.n}, {"a", num(job.a)}, {"h", num(job.h)}, {"q", job.q}};
    j["tolerances"] = tolerances_json(job.tol);
    j.update(classify_json(st));
    return j.dump(2) + "\n";
}

std::string cmd_regions(const JobSpec& job)
{
    const auto levels = resonance_levels(job.q);
    std::vector<std::string> head{"a", "h_delta0"};
    for (const auto& l : levels)
        head.push_back("h_c" + std::to_string(l.j) + "_" + std::to_string(l.k));
    head.push_back("h_delta1");
    head.push_back("error");
    Csv csv(head);

    const auto grid = job.a_range.grid();
    const auto rows = parallel_map<Row>(grid.size(), resolve_workers(job.workers), [&](std::size_t i) {
        const double a = grid[i];
        Row r;
        r.cells.push_back(cell(a));
        std::string error;
        auto level = [&](double c) -> std::string {
            if (a < std::numbers::sqrt2 && !(delta_limit_small_h(job.n, a) < c))
                return "";   // a <= alpha_n^c: no crossing
            try {
                return cell(level_curve_h(job.n, c, a));
            } catch (const Error& e) {
                error = err_cell(e);
                return "";
            }
        };
        r.cells.push_back(cell(delta_zero_curve(job.n, a)));
        for (const auto& l : levels)
            r.cells.push_back(level(l.c));
        r.cells.push_back(level(1.0));
        r.cells.push_back(error);
        return r;
    });
    for (const auto& r : rows)
        csv.row(r.cells);
    return csv.text();
}

std::string cmd_resonances(const JobSpec& job)
{
    const bool with_h = job.a > 0;
    std::vector<std::string> head{"k", "j", "c"};
    if (with_h) {
        head.push_back("h");
        head.push_back("error");
    }
    Csv csv(head);
    for (const auto& l : resonance_levels(job.q)) {
        std::vector<std::string> row{cell(l.k), cell(l.j), cell(l.c)};
        if (with_h) {
            try {
                if (job.a < std::numbers::sqrt2 && !(delta_limit_small_h(job.n, job.a) < l.c))
                    row.insert(row.end(), {"", ""});
                else
                    row.insert(row.end(), {cell(level_curve_h(job.n, l.c, job.a)), ""});
            } catch (const Error& e) {
                row.insert(row.end(), {"", err_cell(e)});
            }
        }
        csv.row(row);
    }
    return csv.text();
}

std::string cmd_gaps(const JobSpec& job)
{
    Csv csv({"n", "h_delta0", "h_delta1", "strip_hi", "nonempty", "gap_lo", "gap_hi"});
    const auto strips = unbounded_island_intervals(job.a, job.n_max);
    for (const auto& s : strips) {
        const double h1 = level_curve_h(s.n, 1.0, job.a);
        const double next0 = delta_zero_curve(s.n + 1, job.a);
        const bool gap = h1 < next0;
        csv.row({cell(s.n), cell(s.lo), cell(h1), cell(s.hi), s.nonempty() ? "true" : "false",
                 gap ? cell(h1) : "", gap ? cell(next0) : ""});
    }
    return csv.text();
}

std::string cmd_chaos_bound(const JobSpec& job)
{
    Csv csv({"a", "H", "n_max", "argmax", "error"});
    const auto grid = job.a_range.grid();
    const auto rows = parallel_map<Row>(grid.size(), resolve_workers(job.workers), [&](std::size_t i) {
        Row r;
        r.cells.push_back(cell(grid[i]));
        try {
            const ChaosBound b = chaos_bound(grid[i]);
            r.cells.insert(r.cells.end(), {cell(b.H), cell(b.n_max), cell(b.argmax), ""});
        } catch (const Error& e) {
            r.cells.insert(r.cells.end(), {"", "", "", err_cell(e)});
        }
        return r;
    });
    for (const auto& r : rows)
        csv.row(r.cells);
    return csv.text();
}

std::string cmd_level_curve(const JobSpec& job)
{
    Csv csv({"a", "h", "error"});
    const auto grid = job.a_range.grid();
    const auto rows = parallel_map<Row>(grid.size(), resolve_workers(job.workers), [&](std::size_t i) {
        Row r;
        r.cells.push_back(cell(grid[i]));
        try {
            r.cells.insert(r.cells.end(), {cell(level_curve_h(job.n, job.c, grid[i])), ""});
        } catch (const Error& e) {
            r.cells.insert(r.cells.end(), {"", err_cell(e)});
        }
        return r;
    });
    for (const auto& r : rows)
        csv.row(r.cells);
    return csv.text();
}

json twist_json(const TwistReport& r)
{
    json taus = json::array(), noise = json::array();
    for (double t : r.taus)
        taus.push_back(num(t));
    for (double t : r.tau_noise)
        noise.push_back(num(t));
    return {{"verdict", std::string(verdict_name(r.verdict))},
            {"q", r.q},
            {"stability", r.stability.label()},
            {"delta", num(r.stability.delta)},
            {"mu_re", num(r.mu.real())},
            {"mu_im", num(r.mu.imag())},
            {"rotation_number", num(r.rotation_number)},
            {"resonances", r.resonances},
            {"taus", taus},
            {"tau_noise", noise},
            {"certified_order", r.certified_order},
            {"tau1_oracle", num(r.tau1_oracle)},
            {"oracle_rotation_number", num(r.oracle_rotation)},
            {"residual_imag", num(r.residual_imag)},
            {"jet_spread", num(r.jet_spread)}};
}

std::string cmd_twist(const JobSpec& job)
{
    TwistOptions opt;
    opt.q = job.q;
    opt.oracle = job.oracle;
    if (!job.h_scan) {
        const TwistReport r = twist_analysis(job.n, job.a, job.h, opt, job.tol);
        json j = header(job);
        j["inputs"] = {{"n", job.n}, {"a", num(job.a)}, {"h", num(job.h)}, {"q", job.q}};
        j["tolerances"] = tolerances_json(job.tol);
        j.update(twist_json(r));
        return j.dump(2) + "\n";
    }
    Csv csv({"h", "delta", "class", "verdict", "q", "tau1", "tau2", "tau1_noise", "tau1_oracle",
             "rotation_number", "residual_imag", "error"});
    const auto grid = job.h_range.grid();
    const auto rows = parallel_map<Row>(grid.size(), resolve_workers(job.workers), [&](std::size_t i) {
        const double h = grid[i];
        Row row;
        row.cells.push_back(cell(h));
        try {
            const TwistReport r = twist_analysis(job.n, job.a, h, opt, job.tol);
            row.cells.insert(row.cells.end(),
                             {cell(r.stability.delta), r.stability.label(), std::string(verdict_name(r.verdict)),
                              cell(r.q), r.taus.empty() ? "" : cell(r.taus[0]),
                              r.taus.size() > 1 ? cell(r.taus[1]) : "",
                              r.tau_noise.empty() ? "" : cell(r.tau_noise[0]),
                              std::isfinite(r.tau1_oracle) ? cell(r.tau1_oracle) : "",
                              cell(r.rotation_number), cell(r.residual_imag), ""});
        } catch (const Error& e) {
            std::string delta, cls;
            try {
                const StabilityReport st = classify(job.n, job.a, h, job.q, job.tol);
                delta = cell(st.delta);
                cls = st.label();
            } catch (const Error&) {
            }
            row.cells.insert(row.cells.end(), {delta, cls, "", "", "", "", "", "", "", "", err_cell(e)});
        }
        return row;
    });
    for (const auto& r : rows)
        csv.row(r.cells);
    return csv.text();
}

std::string cmd_portrait(const JobSpec& job)
{
    PortraitSpec spec{build_stadium(job.a, job.h), {}};
    spec.random_seeds = job.seeds;
    spec.rng_seed = job.rng_seed;
    spec.iterations = job.iterations;
    spec.skip = job.skip;
    spec.workers = resolve_workers(job.workers);
    const auto traces = phase_portrait(spec, job.tol);

    std::string text = "seed,iterate,s,beta,stop\n";
    for (const auto& t : traces) {
        const std::size_t n = t.points.size();
        for (std::size_t k = 0; k < n; ++k) {
            text += std::to_string(t.seed_id) + ',' + std::to_string(k) + ',' + format9(t.points[k].s) + ',' +
                    format9(t.points[k].beta) + ',';
            if (t.truncated && k + 1 == n)
                text += std::string(error_name(*t.stop));
            text += '\n';
        }
        if (t.truncated && n == 0)
            text += std::to_string(t.seed_id) + ",,,," + std::string(error_name(*t.stop)) + '\n';
    }
    return text;
}

const std::map<std::string, std::function<std::string(const JobSpec&)>>& commands()
{
    static const std::map<std::string, std::function<std::string(const JobSpec&)>> m{
        {"orbit", cmd_orbit},           {"classify", cmd_classify}, {"regions", cmd_regions},
        {"resonances", cmd_resonances}, {"gaps", cmd_gaps},         {"chaos-bound", cmd_chaos_bound},
        {"twist", cmd_twist},           {"portrait", cmd_portrait}, {"level-curve", cmd_level_curve}};
    return m;
}

void emit(const JobSpec& job, const std::string& text, std::ostream& out)
{
    if (job.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(job.out, std::ios::binary);
    if (!f)
        throw DomainError("cannot open output file " + job.out);
    f << text;
}

} // namespace

int run(const JobSpec& job, std::ostream& out, std::ostream& err)
{
    const auto it = commands().find(job.command);
    if (it == commands().end()) {
        err << "unknown command " << job.command << "\n";
        return static_cast<int>(ErrorCode::Domain);
    }
    try {
        emit(job, it->second(job), out);
        return 0;
    } catch (const Error& e) {
        json j = header(job);
        j["error"] = error_json(e);
        try {
            emit(job, j.dump(2) + "\n", out);
        } catch (const Error&) {
            out << j.dump(2) << "\n";
        }
        err << "stadion " << job.command << ": " << error_name(e.code()) << ": " << e.what() << "\n";
        return static_cast<int>(e.code());
    }
}

int run_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Pantographic orbits and islands in elliptical stadium billiards"};
    app.set_help_flag("--help", "print help");   // -h would clash with --h
    app.require_subcommand(1);
    JobSpec job;
    bool no_oracle = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", job.out, "output file (default stdout)");
        sub->add_option("--workers", job.workers, "worker threads (default STADION_WORKERS or all cores)");
        sub->add_option("--tol-graze", job.tol.graze);
        sub->add_option("--tol-corner", job.tol.corner);
        sub->add_option("--tol-parabolic", job.tol.parabolic);
        sub->add_option("--tol-resonance", job.tol.resonance);
        sub->add_option("--tol-closure", job.tol.closure);
        sub->add_option("--tol-jet", job.tol.jet_agreement);
    };
    auto nah = [&](CLI::App* sub, bool need_h) {
        sub->add_option("--n", job.n, "segment bounces per crossing")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--a", job.a, "major semi-axis")->required();
        auto* h = sub->add_option("--h", job.h, "half segment length");
        if (need_h)
            h->required();
        sub->add_option("--q", job.q, "largest resonance order")->capture_default_str();
    };
    auto arange = [&](CLI::App* sub) {
        sub->add_option("--a-min", job.a_range.lo)->required();
        sub->add_option("--a-max", job.a_range.hi)->required();
        sub->add_option("--steps", job.a_range.steps)->capture_default_str();
    };

    auto* orbit = app.add_subcommand("orbit", "construct and classify Pan(n, a, h)");
    nah(orbit, true);
    common(orbit);

    auto* cls = app.add_subcommand("classify", "stability class of Pan(n, a, h)");
    nah(cls, true);
    common(cls);

    auto* regions = app.add_subcommand("regions", "level curves of Delta over an a-grid");
    regions->add_option("--n", job.n)->required()->check(CLI::NonNegativeNumber);
    regions->add_option("--q", job.q)->capture_default_str();
    arange(regions);
    common(regions);

    auto* res = app.add_subcommand("resonances", "resonance levels up to order q");
    res->add_option("--q", job.q)->capture_default_str();
    res->add_option("--n", job.n)->check(CLI::NonNegativeNumber);
    res->add_option("--a", job.a, "also solve the level curves at this a");
    common(res);

    auto* gaps = app.add_subcommand("gaps", "ellipticity strips and gaps for a > sqrt 2");
    gaps->add_option("--a", job.a)->required();
    gaps->add_option("--n-max", job.n_max)->capture_default_str();
    common(gaps);

    auto* chaos = app.add_subcommand("chaos-bound", "H(a) over an a-grid");
    arange(chaos);
    common(chaos);

    auto* twist = app.add_subcommand("twist", "twist coefficients and island verdict");
    nah(twist, false);
    twist->add_option("--h-min", job.h_range.lo);
    twist->add_option("--h-max", job.h_range.hi);
    twist->add_option("--steps", job.h_range.steps)->capture_default_str();
    twist->add_flag("--no-oracle", no_oracle, "skip the rotation-number fit");
    common(twist);

    auto* portrait = app.add_subcommand("portrait", "phase portrait point cloud");
    portrait->add_option("--a", job.a)->required();
    portrait->add_option("--h", job.h)->required();
    portrait->add_option("--seeds", job.seeds)->capture_default_str();
    portrait->add_option("--iters", job.iterations)->capture_default_str();
    portrait->add_option("--skip", job.skip)->capture_default_str();
    portrait->add_option("--rng-seed", job.rng_seed)->capture_default_str();
    common(portrait);

    auto* level = app.add_subcommand("level-curve", "h with Delta_n(a, h) = c over an a-grid");
    level->add_option("--n", job.n)->required()->check(CLI::NonNegativeNumber);
    level->add_option("--c", job.c)->required();
    arange(level);
    common(level);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    job.command = app.get_subcommands().front()->get_name();
    job.oracle = !no_oracle;
    if (job.command == "twist") {
        const bool scan = twist->count("--h-min") || twist->count("--h-max");
        if (scan && !(twist->count("--h-min") && twist->count("--h-max"))) {
            err << "twist: --h-min and --h-max go together\n";
            return static_cast<int>(ErrorCode::Domain);
        }
        if (!scan && !twist->count("--h")) {
            err << "twist: give --h or an --h-min/--h-max scan\n";
            return static_cast<int>(ErrorCode::Domain);
        }
        job.h_scan = scan;
    }
    return run(job, out, err);
}

int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run_args(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace stadion::cli
