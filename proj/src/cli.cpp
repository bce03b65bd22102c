#include "sawecho/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace sawecho::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) parts.push_back(trim(item));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

int to_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw UsageError("not an integer: '" + s + "'");
    return v;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<int> parse_grid(const std::string& text) {
    const std::string s = trim(text);
    std::vector<int> grid;
    if (const auto dots = s.find(".."); dots != std::string::npos) {
        const std::string rest = s.substr(dots + 2);
        const auto colon = rest.find(':');
        const int a = to_int(trim(s.substr(0, dots)));
        const int b = to_int(trim(rest.substr(0, colon)));
        const int step = colon == std::string::npos ? 1 : to_int(trim(rest.substr(colon + 1)));
        if (step <= 0) throw UsageError("grid step must be positive");
        if (b < a) throw UsageError("grid range must satisfy a <= b");
        for (int t = a; t <= b; t += step) grid.push_back(t);
    } else {
        grid = parse_int_list(s);
    }
    if (grid.empty()) throw UsageError("empty t_r grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0) throw UsageError("t_r values must be >= 0");
        if (i > 0 && grid[i] <= grid[i - 1]) throw UsageError("t_r grid must be strictly increasing");
    }
    return grid;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> v;
    for (const auto& p : split(text, ',')) v.push_back(to_int(p));
    if (v.empty()) throw UsageError("empty list");
    return v;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> v;
    for (const auto& p : split(text, ',')) v.push_back(to_double(p));
    if (v.empty()) throw UsageError("empty list");
    return v;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void write_values(std::ostream& os, const EchoRecord& r) {
    for (double v : {r.eof_mean, r.eof_std, r.entropy_mean, r.entropy_std, r.fidelity_mean, r.fidelity_std}) {
        os << ',' << format_double(v);
    }
    os << '\n';
}

constexpr const char* kValueColumns = "E_mean,E_std,S_mean,S_std,f_mean,f_std";

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<EchoRecord>& records, const std::string& time_column) {
    os << time_column << ',' << kValueColumns << '\n';
    for (const EchoRecord& r : records) {
        os << r.t;
        write_values(os, r);
    }
}

void write_study_csv(std::ostream& os, const std::vector<StudyPoint>& points) {
    os << "nq,epsilon,t_e," << kValueColumns << '\n';
    for (const StudyPoint& p : points) {
        for (const EchoRecord& r : p.curve) {
            os << p.num_qubits << ',' << format_double(p.epsilon) << ',' << r.t;
            write_values(os, r);
        }
    }
}

std::vector<StudyPoint> read_study_csv(std::istream& is, double threshold) {
    std::string line;
    if (!std::getline(is, line)) throw UsageError("study CSV is empty");
    const std::vector<std::string> header = split(trim(line), ',');
    const std::vector<std::string> expected = split(std::string("nq,epsilon,t_e,") + kValueColumns, ',');
    if (header != expected) throw UsageError("study CSV header must be nq,epsilon,t_e," + std::string(kValueColumns));

    std::vector<std::pair<std::pair<int, double>, std::vector<EchoRecord>>> curves;
    std::map<std::pair<int, double>, std::size_t> index;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split(trim(line), ',');
        if (f.size() != expected.size()) {
            throw UsageError("study CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(expected.size()) + " fields");
        }
        const std::pair key{to_int(f[0]), to_double(f[1])};
        EchoRecord r;
        r.t = to_int(f[2]);
        r.eof_mean = to_double(f[3]);
        r.eof_std = to_double(f[4]);
        r.entropy_mean = to_double(f[5]);
        r.entropy_std = to_double(f[6]);
        r.fidelity_mean = to_double(f[7]);
        r.fidelity_std = to_double(f[8]);
        auto [it, fresh] = index.try_emplace(key, curves.size());
        if (fresh) curves.push_back({key, {}});
        curves[it->second].second.push_back(r);
    }
    std::vector<StudyPoint> points;
    for (auto& [key, recs] : curves) points.push_back(fit_point(key.first, key.second, std::move(recs), threshold));
    return points;
}

// ---------------------------------------------------------------------------
// verify

namespace {

GateProgram flipped(const GateProgram& program) {
    GateProgram out(program.num_qubits());
    for (const ProgramStep& step : program.steps()) {
        std::visit(
            [&](auto g) {
                if constexpr (requires { g.phase; }) g.phase = -g.phase;
                out.append(g);
            },
            step);
    }
    return out;
}

CheckResult check(std::string name, bool pass, double deviation, std::string detail = {}) {
    return {std::move(name), pass, deviation, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
    std::vector<CheckResult> results;

    {
        double worst = 0;
        for (int nq = 2; nq <= 5; ++nq) {
            GateProgram prog = build_map_iteration({nq, 5.0, kDefaultThetaOffset}, Direction::forward);
            if (options.flip_phase_sign) prog = flipped(prog);
            worst = std::max(worst, max_deviation_up_to_phase(program_unitary(prog),
                                                              dense_map_unitary<double>(nq, 5.0, kDefaultThetaOffset)));
        }
        results.push_back(check("gate program matches dense map unitary (n_q=2..5, K=5)", worst < 1e-10, worst));
    }
    {
        double worst = 0;
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> g;
        for (int nq = 2; nq <= 10; ++nq) {
            StateVector::Amplitudes a(Eigen::Index{1} << nq);
            for (auto& x : a) x = {g(rng), g(rng)};
            a.normalize();
            StateVector psi(nq, a);
            const MapParams params{nq, 5.0, kDefaultThetaOffset};
            apply(build_map_iteration(params, Direction::forward), psi);
            apply(build_map_iteration(params, Direction::backward), psi);
            worst = std::max(worst, (psi.amplitudes() - a).cwiseAbs().maxCoeff());
        }
        results.push_back(check("backward iteration inverts forward (n_q=2..10)", worst < 1e-11, worst));
    }
    {
        TwoQubitDensity<double> bell = TwoQubitDensity<double>::Zero();
        bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
        const double c = concurrence(bell);
        const double dev = std::max(std::abs(c - 1), std::abs(eof(c) - 1));
        results.push_back(check("Bell pair C = 1, E = 1", dev < 1e-10, dev));

        const TwoQubitDensity<double> mixed = TwoQubitDensity<double>::Identity() / 4.0;
        const double dev_mixed = std::max(concurrence(mixed), std::abs(von_neumann_entropy(mixed) - 2));
        results.push_back(check("maximally mixed C = 0, S = 2", dev_mixed < 1e-10, dev_mixed));

        double worst = 0;
        for (int i = 0; i < 50; ++i) {
            const double p = i / 49.0;
            const TwoQubitDensity<double> w = p * bell + (1 - p) * mixed;
            worst = std::max(worst, std::abs(concurrence(w) - std::max(0.0, (3 * p - 1) / 2)));
        }
        results.push_back(check("Werner sweep C(p) = max(0, (3p-1)/2), 50 values", worst < 1e-10, worst));
    }
    {
        double worst = 0;
        for (int nq = 4; nq <= 10; ++nq) {
            EchoConfig c;
            c.num_qubits = nq;
            c.epsilon = 0;
            c.reversal_time = 20;
            c.realizations = 1;
            c.mode = EchoMode::trace;
            const EchoRecord last = run_trace(c).records.back();
            worst = std::max({worst, 1 - last.eof_mean, last.entropy_mean, 1 - last.fidelity_mean});
        }
        results.push_back(check("noiseless echo restores E, S, f (n_q=4..10, t_r=20)", worst < 1e-10, worst));
    }
    return results;
}

// ---------------------------------------------------------------------------
// commands

namespace {

struct SimOptions {
    int nq = 5;
    double chaos_k = 5.0;
    double theta_offset = kDefaultThetaOffset;
    double epsilon = 0.01;
    int realizations = 400;
    std::uint64_t seed = 1;
    int threads = 0;
};

void add_sim_options(CLI::App* cmd, SimOptions& o, bool single_size) {
    if (single_size) cmd->add_option("--nq", o.nq, "number of qubits")->capture_default_str();
    cmd->add_option("--K", o.chaos_k, "chaos parameter K")->capture_default_str();
    cmd->add_option("--theta-offset", o.theta_offset, "angle grid offset, theta_j = 2 pi (j + offset) / N")
        ->capture_default_str();
    if (single_size) cmd->add_option("--epsilon", o.epsilon, "gate error amplitude")->capture_default_str();
    cmd->add_option("--realizations", o.realizations, "noise realizations")->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads (0: all cores)")->capture_default_str();
}

EchoConfig echo_config(const SimOptions& o) {
    EchoConfig c;
    c.num_qubits = o.nq;
    c.chaos_k = o.chaos_k;
    c.theta_offset = o.theta_offset;
    c.epsilon = o.epsilon;
    c.realizations = o.realizations;
    c.master_seed = o.seed;
    c.threads = o.threads;
    return c;
}

std::string manifest_path(const std::string& csv) {
    fs::path p(csv);
    p.replace_extension();
    return p.string() + ".manifest.json";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json derived_params(int nq, double chaos_k) {
    const MapParams p{nq, chaos_k, kDefaultThetaOffset};
    return {{"nq", nq},
            {"n_g", gates_per_iteration(nq)},
            {"N", p.levels()},
            {"T", p.period()},
            {"k", p.kick_strength()}};
}

json echo_json(const EchoConfig& c) {
    json j{{"nq", c.num_qubits},         {"K", c.chaos_k},
           {"theta_offset", c.theta_offset}, {"epsilon", c.epsilon},
           {"realizations", c.realizations}, {"seed", c.master_seed},
           {"threads", c.threads}};
    if (c.mode == EchoMode::trace) {
        j["tr"] = c.reversal_time;
    } else {
        j["tr_grid"] = c.reversal_grid;
    }
    return j;
}

EchoConfig echo_from_json(const json& j, EchoMode mode) {
    EchoConfig c;
    c.mode = mode;
    c.num_qubits = j.at("nq").get<int>();
    c.chaos_k = j.at("K").get<double>();
    c.theta_offset = j.at("theta_offset").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.realizations = j.at("realizations").get<int>();
    c.master_seed = j.at("seed").get<std::uint64_t>();
    c.threads = j.value("threads", 0);
    if (mode == EchoMode::trace) {
        c.reversal_time = j.at("tr").get<int>();
    } else {
        c.reversal_grid = j.at("tr_grid").get<std::vector<int>>();
    }
    return c;
}

struct ScalingJob {
    StudyConfig study;
    std::string from_csv;
    std::string out;
    std::string summary;
};

json study_json(const ScalingJob& job) {
    const StudyConfig& s = job.study;
    json j{{"nq_list", s.qubit_list},
           {"epsilon_list", s.epsilon_list},
           {"K", s.chaos_k},
           {"theta_offset", s.theta_offset},
           {"realizations", s.realizations},
           {"seed", s.master_seed},
           {"threads", s.threads},
           {"c", s.threshold},
           {"tr_grid", s.reversal_grid},
           {"dense_budget", s.dense_budget},
           {"max_budget", s.max_budget},
           {"tail_points", s.tail_points}};
    if (!job.from_csv.empty()) j["from_csv"] = job.from_csv;
    return j;
}

ScalingJob study_from_json(const json& j) {
    ScalingJob job;
    StudyConfig& s = job.study;
    s.qubit_list = j.at("nq_list").get<std::vector<int>>();
    s.epsilon_list = j.at("epsilon_list").get<std::vector<double>>();
    s.chaos_k = j.at("K").get<double>();
    s.theta_offset = j.at("theta_offset").get<double>();
    s.realizations = j.at("realizations").get<int>();
    s.master_seed = j.at("seed").get<std::uint64_t>();
    s.threads = j.value("threads", 0);
    s.threshold = j.at("c").get<double>();
    s.reversal_grid = j.at("tr_grid").get<std::vector<int>>();
    s.dense_budget = j.at("dense_budget").get<double>();
    s.max_budget = j.at("max_budget").get<double>();
    s.tail_points = j.at("tail_points").get<int>();
    job.from_csv = j.value("from_csv", std::string{});
    return job;
}

json manifest_base(const std::string& command) {
    return {{"tool", "sawecho"}, {"version", kVersion}, {"timestamp", utc_timestamp()}, {"command", command}};
}

void run_records_command(const std::string& command, const EchoConfig& config, const std::string& out_path,
                         std::ostream& out) {
    config.validate();
    const EchoResult result = run(config);
    std::ostringstream csv;
    write_records_csv(csv, result.records, config.mode == EchoMode::trace ? "t" : "t_e");
    write_file(out_path, csv.str());

    json m = manifest_base(command);
    m["seed"] = config.master_seed;
    m["config"] = echo_json(config);
    const json d = derived_params(config.num_qubits, config.chaos_k);
    for (const char* key : {"n_g", "N", "T", "k"}) m[key] = d[key];
    const std::string mpath = manifest_path(out_path);
    m["outputs"] = {{"csv", out_path}, {"manifest", mpath}};
    write_file(mpath, m.dump(2) + "\n");
    out << "wrote " << result.records.size() << " rows to " << out_path << " (manifest " << mpath << ")\n";
}

json fit_json(const std::optional<FitResult>& fit) {
    if (!fit) return nullptr;
    json j{{"kind", to_string(fit->kind)}, {"residual", fit->residual}, {"n_points", fit->n_points}};
    switch (fit->kind) {
        case FitKind::threshold:
            j["t_e_star"] = fit->t_e_star;
            j["c"] = fit->window;
            break;
        case FitKind::exponential_rate:
            j["rate"] = fit->rate;
            j["window"] = fit->window;
            break;
        case FitKind::power_law:
            j["exponent"] = fit->exponent;
            j["amplitude"] = fit->amplitude;
            break;
    }
    return j;
}

json summary_json(const StudySummary& s, double threshold) {
    json points = json::array();
    for (const StudyPoint& p : s.points) {
        points.push_back({{"nq", p.num_qubits},
                          {"epsilon", p.epsilon},
                          {"n_g", p.gates_per_iteration},
                          {"threshold", fit_json(p.threshold)},
                          {"entropy_rate", fit_json(p.entropy)},
                          {"fidelity_rate", fit_json(p.fidelity)},
                          {"C", p.decay_constant},
                          {"notes", p.notes}});
    }
    json scans = json::array();
    for (const auto& e : s.epsilon_scans) {
        scans.push_back({{"nq", e.num_qubits},
                         {"t_e_star_vs_epsilon", fit_json(e.threshold)},
                         {"gamma_vs_epsilon", fit_json(e.entropy)},
                         {"fidelity_rate_vs_epsilon", fit_json(e.fidelity)}});
    }
    return {{"c", threshold},
            {"A_hat", s.a_hat},
            {"B_hat", s.b_hat},
            {"C_hat", s.c_hat},
            {"A_reference", kPaperA},
            {"B_reference", kPaperB},
            {"A_factor", s.a_hat / kPaperA},
            {"B_factor", s.b_hat / kPaperB},
            {"epsilon_scans", scans},
            {"t_e_star_eps2_vs_nq", fit_json(s.qubit_scan)},
            {"points", points},
            {"notes", s.notes}};
}

void run_scaling_command(const ScalingJob& job, std::ostream& out) {
    const StudyConfig& s = job.study;
    StudySummary summary;
    if (!job.from_csv.empty()) {
        std::istringstream is(read_file(job.from_csv));
        summary = summarize(read_study_csv(is, s.threshold));
    } else {
        if (s.qubit_list.empty() || s.epsilon_list.empty()) throw UsageError("--nq-list and --epsilon-list needed");
        for (int nq : s.qubit_list) {
            if (nq < 3 || nq > kMaxQubits) throw UsageError("scaling needs 3 <= n_q <= 30");
        }
        for (double eps : s.epsilon_list) {
            if (!(eps > 0)) throw UsageError("scaling needs epsilon > 0");
        }
        if (s.realizations < 1) throw UsageError("realizations must be >= 1");
        summary = run_study(s);
    }

    std::ostringstream csv;
    write_study_csv(csv, summary.points);
    write_file(job.out, csv.str());
    write_file(job.summary, summary_json(summary, s.threshold).dump(2) + "\n");

    json m = manifest_base("scaling");
    m["seed"] = s.master_seed;
    m["config"] = study_json(job);
    json derived = json::array();
    for (int nq : s.qubit_list) derived.push_back(derived_params(nq, s.chaos_k));
    m["derived"] = derived;
    const std::string mpath = manifest_path(job.out);
    m["outputs"] = {{"csv", job.out}, {"summary", job.summary}, {"manifest", mpath}};
    write_file(mpath, m.dump(2) + "\n");

    for (const StudyPoint& p : summary.points) {
        out << "n_q=" << p.num_qubits << " eps=" << p.epsilon;
        if (p.threshold) out << " t_e*=" << p.threshold->t_e_star;
        if (p.entropy) out << " Gamma=" << p.entropy->rate;
        if (p.fidelity) out << " rate=" << p.fidelity->rate << " C=" << p.decay_constant;
        for (const auto& n : p.notes) out << " [" << n << "]";
        out << '\n';
    }
    for (const auto& e : summary.epsilon_scans) {
        if (e.threshold) out << "n_q=" << e.num_qubits << " t_e*(eps) exponent " << e.threshold->exponent << '\n';
        if (e.entropy) out << "n_q=" << e.num_qubits << " Gamma(eps) exponent " << e.entropy->exponent << '\n';
    }
    if (summary.qubit_scan) out << "t_e* eps^2 (n_q) exponent " << summary.qubit_scan->exponent << '\n';
    out << "A_hat=" << summary.a_hat << " (x" << summary.a_hat / kPaperA << " of reference)"
        << " B_hat=" << summary.b_hat << " (x" << summary.b_hat / kPaperB << ")"
        << " C_hat=" << summary.c_hat << '\n';
    out << "wrote " << job.out << ", " << job.summary << ", " << mpath << '\n';
}

int run_verify_command(const VerifyOptions& options, std::ostream& out) {
    bool all = true;
    for (const CheckResult& r : run_verify(options)) {
        char dev[32];
        std::snprintf(dev, sizeof dev, "%.3e", r.deviation);
        out << (r.pass ? "PASS " : "FAIL ") << r.name << "  max deviation " << dev;
        if (!r.detail.empty()) out << "  " << r.detail;
        out << '\n';
        all = all && r.pass;
    }
    out << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
    return all ? ExitCode::ok : ExitCode::verify_failure;
}

int rerun(const std::string& manifest_file, const std::string& out_override, std::ostream& out) {
    json m;
    try {
        m = json::parse(read_file(manifest_file));
    } catch (const json::exception& e) {
        throw UsageError("manifest is not valid JSON: " + std::string(e.what()));
    }
    try {
        const std::string command = m.at("command").get<std::string>();
        const std::string csv = out_override.empty() ? m.at("outputs").at("csv").get<std::string>() : out_override;
        if (command == "trace" || command == "echo-curve") {
            const EchoConfig c =
                echo_from_json(m.at("config"), command == "trace" ? EchoMode::trace : EchoMode::echo_curve);
            run_records_command(command, c, csv, out);
        } else if (command == "scaling") {
            ScalingJob job = study_from_json(m.at("config"));
            job.out = csv;
            job.summary = out_override.empty() ? m.at("outputs").at("summary").get<std::string>()
                                               : fs::path(csv).replace_extension(".json").string();
            run_scaling_command(job, out);
        } else {
            throw UsageError("manifest has unknown command '" + command + "'");
        }
    } catch (const json::exception& e) {
        throw UsageError("manifest is missing fields: " + std::string(e.what()));
    }
    return ExitCode::ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement echo simulator for the quantum sawtooth map on noisy gates", "sawecho"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SimOptions trace_opts, curve_opts, scaling_opts;
    scaling_opts.realizations = 200;

    auto* trace = app.add_subcommand("trace", "E, S, f after every iteration of one forward-backward run");
    add_sim_options(trace, trace_opts, true);
    int tr = 20;
    std::string trace_out = "trace.csv";
    trace->add_option("--tr", tr, "reversal time t_r")->capture_default_str();
    trace->add_option("--out", trace_out, "output CSV")->capture_default_str();

    auto* curve = app.add_subcommand("echo-curve", "E, S, f at the echo time for a grid of reversal times");
    add_sim_options(curve, curve_opts, true);
    std::string grid_text = "1..60";
    std::string curve_out = "echo_curve.csv";
    curve->add_option("--tr-grid", grid_text, "t_r values: a..b[:step] or a comma list")->capture_default_str();
    curve->add_option("--out", curve_out, "output CSV")->capture_default_str();

    auto* scaling = app.add_subcommand("scaling", "echo curves over (n_q, eps) and the fitted scaling laws");
    add_sim_options(scaling, scaling_opts, false);
    std::string nq_list = "6", eps_list = "0.01,0.015,0.02,0.03,0.04", scaling_grid, from_csv;
    std::string scaling_out = "scaling.csv", summary_out;
    StudyConfig defaults;
    double threshold = kDefaultThreshold;
    scaling->add_option("--nq-list", nq_list, "comma separated n_q values")->capture_default_str();
    scaling->add_option("--epsilon-list", eps_list, "comma separated eps values")->capture_default_str();
    scaling->add_option("--c", threshold, "entanglement threshold c for t_e*")->capture_default_str();
    scaling->add_option("--tr-grid", scaling_grid, "fixed t_r grid for every point (default: per-point budget grid)");
    scaling->add_option("--dense-budget", defaults.dense_budget, "every t_r up to eps^2 n_g t_e = this")
        ->capture_default_str();
    scaling->add_option("--max-budget", defaults.max_budget, "largest eps^2 n_g t_e")->capture_default_str();
    scaling->add_option("--tail-points", defaults.tail_points, "sparse t_r values beyond the dense range")
        ->capture_default_str();
    scaling->add_option("--from-csv", from_csv, "fit curves from a long CSV instead of simulating");
    scaling->add_option("--out", scaling_out, "long CSV of all curves")->capture_default_str();
    scaling->add_option("--summary", summary_out, "JSON summary (default: <out stem>.json)");

    auto* verify = app.add_subcommand("verify", "oracle checks: gate program, measures, noiseless echo");
    VerifyOptions verify_opts;
    verify->add_flag("--flip-gate-sign", verify_opts.flip_phase_sign, "negative control: negate all gate phases")
        ->group("");

    auto* rerun_cmd = app.add_subcommand("rerun", "repeat a run from its manifest");
    std::string manifest_file, rerun_out;
    rerun_cmd->add_option("--manifest", manifest_file, "manifest JSON written by a previous run")->required();
    rerun_cmd->add_option("--out", rerun_out, "write the CSV here instead of the recorded path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::ok : ExitCode::usage_error;
    }

    try {
        if (*trace) {
            EchoConfig c = echo_config(trace_opts);
            c.mode = EchoMode::trace;
            c.reversal_time = tr;
            run_records_command("trace", c, trace_out, out);
        } else if (*curve) {
            EchoConfig c = echo_config(curve_opts);
            c.mode = EchoMode::echo_curve;
            c.reversal_grid = parse_grid(grid_text);
            run_records_command("echo-curve", c, curve_out, out);
        } else if (*scaling) {
            ScalingJob job;
            job.study = defaults;
            job.study.qubit_list = parse_int_list(nq_list);
            job.study.epsilon_list = parse_double_list(eps_list);
            job.study.chaos_k = scaling_opts.chaos_k;
            job.study.theta_offset = scaling_opts.theta_offset;
            job.study.realizations = scaling_opts.realizations;
            job.study.master_seed = scaling_opts.seed;
            job.study.threads = scaling_opts.threads;
            job.study.threshold = threshold;
            if (!scaling_grid.empty()) job.study.reversal_grid = parse_grid(scaling_grid);
            job.from_csv = from_csv;
            job.out = scaling_out;
            job.summary = summary_out.empty() ? fs::path(scaling_out).replace_extension(".json").string() : summary_out;
            if (job.summary == job.out) throw UsageError("--summary must differ from --out");
            run_scaling_command(job, out);
        } else if (*verify) {
            return run_verify_command(verify_opts, out);
        } else if (*rerun_cmd) {
            return rerun(manifest_file, rerun_out, out);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::io_error;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::usage_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::usage_error;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::usage_error;
    }
    return ExitCode::ok;
}

}  // namespace sawecho::cli
