#include "glap/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

#include "glap/error.hpp"

namespace glap::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double to_double(const std::string& text, const std::string& key) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto res = std::from_chars(first, last, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a finite number, got '" + text + "'");
    }
    return v;
}

long long to_integer(const std::string& text, const std::string& key) {
    long long v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto res = std::from_chars(first, last, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != last) {
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

std::size_t to_count(const std::string& text, const std::string& key, long long min) {
    const long long v = to_integer(text, key);
    if (v < min) throw ConfigError(key + " must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& text, const std::string& key) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> tag_args(const std::string& body, const std::string& key, std::size_t count) {
    const std::vector<std::string> parts = split(body, ',');
    if (parts.size() != count) {
        throw ConfigError(key + ": expected " + std::to_string(count) + " comma-separated values in '" +
                          body + "'");
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(to_double(p, key));
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [](double RunConfig::*field) {
            return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = to_double(v, k); };
        };
        auto opt_num = [](std::optional<double> RunConfig::*field) {
            return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = to_double(v, k); };
        };
        auto tol = [](double SolverOptions::*field) {
            return [field](RunConfig& c, const std::string& k, const std::string& v) {
                const double x = to_double(v, k);
                if (!(x > 0.0)) throw ConfigError(k + " must be positive");
                c.solver.*field = x;
            };
        };
        auto cap = [](int SolverOptions::*field, long long min) {
            return [field, min](RunConfig& c, const std::string& k, const std::string& v) {
                c.solver.*field = static_cast<int>(to_count(v, k, min));
            };
        };
        t["family"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v != "power" && v != "double-power" && v != "log-type") {
                throw ConfigError(k + ": expected power, double-power or log-type, got '" + v + "'");
            }
            c.family = v;
        };
        t["p"] = num(&RunConfig::p);
        t["p1"] = num(&RunConfig::p1);
        t["p2"] = num(&RunConfig::p2);
        t["a"] = num(&RunConfig::a);
        t["b"] = num(&RunConfig::b);
        t["c"] = num(&RunConfig::c);
        t["p_minus"] = opt_num(&RunConfig::p_minus);
        t["p_plus"] = opt_num(&RunConfig::p_plus);
        t["s"] = num(&RunConfig::s);
        t["M"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.M = to_count(v, k, 9); };
        t["f"] = [](RunConfig& c, const std::string&, const std::string& v) { c.f = v; };
        t["q"] = [](RunConfig& c, const std::string&, const std::string& v) { c.q = v; };
        t["q_star"] = num(&RunConfig::q_star);
        t["delta"] = num(&RunConfig::delta);
        t["case"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "main1") c.case_tag = CaseTag::main1;
            else if (v == "main2") c.case_tag = CaseTag::main2;
            else throw ConfigError(k + ": expected main1 or main2, got '" + v + "'");
        };
        t["phi_r"] = opt_num(&RunConfig::phi_r);
        t["n_schedule"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.n_schedule.clear();
            for (const auto& p : split(v, ',')) c.n_schedule.push_back(static_cast<int>(to_count(p, k, 1)));
        };
        t["tol_res"] = tol(&SolverOptions::tol_res);
        t["tol_step"] = tol(&SolverOptions::tol_step);
        t["tol_fp"] = tol(&SolverOptions::tol_fp);
        t["tol_mono"] = tol(&SolverOptions::tol_mono);
        t["tol_conv"] = tol(&SolverOptions::tol_conv);
        t["newton_max"] = cap(&SolverOptions::newton_max, 1);
        t["picard_after"] = cap(&SolverOptions::picard_after, 1);
        t["fp_max"] = cap(&SolverOptions::fp_max, 1);
        t["near_band"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.kernel.near_band = static_cast<int>(to_count(v, k, 1));
        };
        t["R_far"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.kernel.R_far = to_double(v, k); };
        t["tail_mode"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "analytic") c.kernel.tail_mode = TailMode::analytic;
            else if (v == "zero") c.kernel.tail_mode = TailMode::zero;
            else throw ConfigError(k + ": expected analytic or zero, got '" + v + "'");
        };
        t["meshes"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.meshes.clear();
            for (const auto& p : split(v, ',')) c.meshes.push_back(to_count(p, k, 9));
        };
        t["samples"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.samples = to_count(v, k, 1); };
        t["comparison_trials"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.comparison_trials = to_count(v, k, 1);
        };
        t["eps"] = num(&RunConfig::eps);
        t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.seed = static_cast<std::uint64_t>(to_count(v, k, 0));
        };
        t["plot"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.plot = to_bool(v, k); };
        return t;
    }();
    return table;
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.eps > 0.0)) throw ConfigError("eps must be positive");
    for (std::size_t k = 1; k < cfg.n_schedule.size(); ++k) {
        if (cfg.n_schedule[k] <= cfg.n_schedule[k - 1]) {
            throw ConfigError("n_schedule must be strictly increasing");
        }
    }
    if (cfg.n_schedule.empty()) throw ConfigError("n_schedule must not be empty");
    for (std::size_t k = 1; k < cfg.meshes.size(); ++k) {
        if (cfg.meshes[k] <= cfg.meshes[k - 1]) throw ConfigError("meshes must be strictly increasing");
    }
    // Builds every object once so that bad combinations fail here, not mid-run.
    const OperatorConfig op = make_operator(cfg);
    const MeshPtr mesh = make_mesh(cfg.M);
    validate(make_problem(cfg, mesh), op);
    if (cfg.case_tag == CaseTag::main2) PhiWeight(op.yf, cfg.q_star, cfg.phi_r);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch == '\n' ? ' ' : ch;
    }
    return out + "\"";
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot write " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out_ << ',';
            out_ << csv_field(cells[k]);
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

std::string str(std::size_t v) { return std::to_string(v); }

void write_checks(const fs::path& path, const std::vector<CheckOutcome>& rows) {
    CsvWriter w(path, {"check", "samples", "worst_margin", "tolerance", "pass", "detail", "offending"});
    for (const auto& r : rows) {
        w.row({r.name, str(r.samples), format_number(r.worst_margin), format_number(r.tolerance),
               r.pass ? "1" : "0", r.detail, r.offending});
    }
}

struct Series {
    std::string label;
    std::vector<double> y;
};

// Static line plot; coordinates printed with fixed precision so the file is
// byte-stable like the CSVs.
void write_svg(const fs::path& path, const std::string& title, const std::string& xlabel,
               const std::vector<double>& x, const std::vector<Series>& series, bool logxy = false) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    auto tx = [&](double v) { return logxy ? std::log10(v) : v; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (double v : x) {
        x0 = std::min(x0, tx(v));
        x1 = std::max(x1, tx(v));
    }
    for (const auto& s : series) {
        for (double v : s.y) {
            if (logxy && !(v > 0.0)) continue;
            y0 = std::min(y0, tx(v));
            y1 = std::max(y1, tx(v));
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const double W = 640, H = 400, L = 60, R = 150, T = 30, B = 40;
    auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (tx(v) - y0) / (y1 - y0) * (H - T - B); };
    char buf[160];
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"none\" stroke=\"black\"/>\n",
                  L, T, W - L - R, H - T - B);
    out << buf;
    out << "<text x=\"" << static_cast<int>(L) << "\" y=\"20\">" << title << "</text>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\">%s</text>\n", (W - R) / 2, H - 10, xlabel.c_str());
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"5\" y=\"%.0f\">%.3g</text>\n<text x=\"5\" y=\"%.0f\">%.3g</text>\n",
                  T + 10, logxy ? std::pow(10.0, y1) : y1, H - B, logxy ? std::pow(10.0, y0) : y0);
    out << buf;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* colour = palette[k % 8];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < x.size() && i < series[k].y.size(); ++i) {
            const double v = series[k].y[i];
            if (logxy && !(v > 0.0)) continue;
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", first ? "" : " ", px(x[i]), py(v));
            out << buf;
            first = false;
        }
        out << "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" fill=\"%s\">%s</text>\n", W - R + 10,
                      T + 15.0 * static_cast<double>(k + 1), colour, series[k].label.c_str());
        out << buf;
    }
    out << "</svg>\n";
}

// Function-level checks gating a solve: the Phi lemmas only matter for main2.
std::vector<CheckOutcome> pre_solve_checks(const RunConfig& cfg, const YoungFunction& yf) {
    std::vector<CheckOutcome> out;
    out.push_back(check_growth(yf));
    out.push_back(check_delta2(yf, cfg.samples, cfg.seed));
    out.push_back(check_lindqvist(yf, cfg.samples, cfg.seed));
    out.push_back(check_gdiff(yf, cfg.samples, cfg.seed));
    out.push_back(check_conjugate(yf, cfg.samples, cfg.seed));
    if (cfg.case_tag == CaseTag::main2) {
        const PhiWeight w(yf, cfg.q_star, cfg.phi_r);
        out.push_back(check_phi_mvt(w, cfg.eps, cfg.samples, cfg.seed));
        out.push_back(check_rpower(w, cfg.samples));
        out.push_back(check_submultiplicative(yf));
    }
    return out;
}

bool report_failures(const std::vector<CheckOutcome>& rows, std::ostream& log) {
    bool ok = true;
    for (const auto& r : rows) {
        if (r.pass) continue;
        ok = false;
        log << "check " << r.name << " failed: worst margin " << format_number(r.worst_margin)
            << " (tolerance " << format_number(r.tolerance) << ")";
        if (!r.offending.empty()) log << ", at " << r.offending;
        log << '\n';
    }
    return ok;
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

}  // namespace

RunConfig parse_config(std::istream& in, const fs::path& base_dir) {
    RunConfig cfg;
    cfg.base_dir = base_dir;
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got '" + body + "'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (auto [pos, fresh] = seen.emplace(key, lineno); !fresh) {
            throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' already set on line " +
                              std::to_string(pos->second));
        }
        try {
            it->second(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    return parse_config(in, dir);
}

YoungFunction make_young(const RunConfig& cfg) {
    YoungFunction yf = cfg.family == "power"          ? YoungFunction::power(cfg.p)
                       : cfg.family == "double-power" ? YoungFunction::double_power(cfg.p1, cfg.p2)
                                                      : YoungFunction::log_type(cfg.a, cfg.b, cfg.c);
    if (cfg.p_minus || cfg.p_plus) {
        const double pm = cfg.p_minus.value_or(yf.p_minus());
        const double pp = cfg.p_plus.value_or(std::max(yf.p_plus(), pm));
        yf = yf.with_exponents(pm, pp);
    }
    return yf;
}

OperatorConfig make_operator(const RunConfig& cfg) { return OperatorConfig(make_young(cfg), cfg.s, cfg.kernel); }

GridFunction make_profile(const std::string& tag, const MeshPtr& mesh, const RunConfig& cfg,
                          const std::string& key) {
    const auto colon = tag.find(':');
    const std::string kind = colon == std::string::npos ? "const" : trim(tag.substr(0, colon));
    const std::string body = colon == std::string::npos ? tag : trim(tag.substr(colon + 1));
    if (kind == "const") {
        const double c = tag_args(body, key, 1)[0];
        return GridFunction::sample(mesh, [c](double) { return c; });
    }
    if (kind == "gaussian") {
        const auto v = tag_args(body, key, 2);
        if (!(v[1] > 0.0)) throw ConfigError(key + ": gaussian width must be positive");
        return GridFunction::sample(mesh, [A = v[0], sg = v[1]](double x) { return A * std::exp(-x * x / (2.0 * sg * sg)); });
    }
    if (kind == "bump") {
        const double A = tag_args(body, key, 1)[0];
        return GridFunction::sample(mesh, [A](double x) { return A * std::max(0.0, 1.0 - x * x); });
    }
    if (kind == "abs-power") {
        const auto v = tag_args(body, key, 2);
        if (!(v[1] >= 0.0)) throw ConfigError(key + ": abs-power exponent must be >= 0");
        return GridFunction::sample(mesh, [A = v[0], gm = v[1]](double x) { return A * std::pow(std::abs(x), gm); });
    }
    if (kind == "strip") {
        const auto v = tag_args(body, key, 2);
        const double edge = 1.0 - cfg.delta;
        return GridFunction::sample(mesh, [in = v[0], out = v[1], edge](double x) { return std::abs(x) > edge ? out : in; });
    }
    if (kind == "file") {
        const fs::path path = fs::path(body).is_absolute() ? fs::path(body) : cfg.base_dir / body;
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError(key + ": cannot read " + path.string());
        std::vector<double> values;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string t = trim(line);
            if (!t.empty()) values.push_back(to_double(t, key));
        }
        if (values.size() != mesh->size()) {
            throw ConfigError(key + ": " + path.string() + " has " + std::to_string(values.size()) +
                              " values, mesh has " + std::to_string(mesh->size()) + " nodes");
        }
        return GridFunction(mesh, std::move(values));
    }
    throw ConfigError(key + ": unknown profile tag '" + kind + "'");
}

ProblemData make_problem(const RunConfig& cfg, const MeshPtr& mesh) {
    ProblemData d{make_profile(cfg.f, mesh, cfg, "f"), make_profile(cfg.q, mesh, cfg, "q"),
                  cfg.q_star, cfg.delta, cfg.case_tag, cfg.phi_r};
    return d;
}

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // drops the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 2;
    return 1;
}

int cmd_check_young(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    prepare_dir(out_dir);
    SuiteOptions opt;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.q_star = cfg.q_star;
    opt.eps = cfg.eps;
    opt.phi_r = cfg.phi_r;
    opt.s = cfg.s;
    opt.comparison_trials = cfg.comparison_trials;
    const YoungFunction yf = make_young(cfg);
    const std::vector<CheckOutcome> rows = run_suite(yf, opt);
    write_checks(out_dir / "checks.csv", rows);
    const bool ok = report_failures(rows, log);
    log << yf.describe() << ": " << rows.size() << " checks, " << (ok ? "all passed" : "failures above") << '\n';
    return ok ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    prepare_dir(out_dir);
    const OperatorConfig op = make_operator(cfg);
    const MeshPtr mesh = make_mesh(cfg.M);
    const ProblemData data = make_problem(cfg, mesh);
    validate(data, op);

    const std::vector<CheckOutcome> checks = pre_solve_checks(cfg, op.yf);
    write_checks(out_dir / "checks.csv", checks);
    if (!report_failures(checks, log)) {
        log << "solve aborted: the growth lemmas fail for " << op.yf.describe() << '\n';
        return 1;
    }

    const SolveReport rep = monotone_scheme(op, data, cfg.n_schedule, cfg.solver);
    const BoundaryEnergy be = boundary_energy_report(rep, data, op);
    const std::vector<double> alphas{2.0, 4.0, 8.0, 16.0};
    const std::vector<double> barrier = barrier_minima(op, mesh, alphas);

    {
        std::vector<std::string> header{"x"};
        for (int n : rep.schedule) header.push_back("u_" + std::to_string(n));
        CsvWriter w(out_dir / "solution.csv", header);
        for (std::size_t i = 0; i < mesh->size(); ++i) {
            std::vector<std::string> row{format_number(mesh->x(i))};
            for (const auto& u : rep.snapshots) row.push_back(format_number(u[i]));
            w.row(row);
        }
    }
    {
        CsvWriter w(out_dir / "diagnostics.csv",
                    {"n", "fp_iterations", "fp_defect_last", "modular_W", "l_K", "cauchy_sup", "seminorm_W"});
        for (std::size_t k = 0; k < rep.schedule.size(); ++k) {
            const auto& hist = rep.fp_histories[k];
            w.row({std::to_string(rep.schedule[k]), std::to_string(rep.fp_iterations[k]),
                   format_number(hist.empty() ? 0.0 : hist.back()), format_number(rep.energies[k]),
                   format_number(rep.lower_bounds[k]), format_number(rep.cauchy[k]),
                   format_number(be.seminorms[k])});
        }
    }
    {
        CsvWriter w(out_dir / "summary.csv", {"quantity", "value"});
        w.row({"young_function", op.yf.describe()});
        w.row({"case", cfg.case_tag == CaseTag::main1 ? "main1" : "main2"});
        w.row({"s", format_number(cfg.s)});
        w.row({"M", std::to_string(cfg.M)});
        w.row({"converged", rep.converged ? "1" : "0"});
        w.row({"converged_at_n", std::to_string(rep.converged_at)});
        w.row({"u_sup", format_number(rep.solution().sup_norm())});
        w.row({"l_K", format_number(rep.lower_bounds.back())});
        w.row({"alpha_hat", format_number(rep.holder.alpha)});
        w.row({"holder_seminorm", format_number(rep.holder.seminorm)});
        w.row({"energy_bounded", be.bounded ? "1" : "0"});
        w.row({"energy_band_ratio", format_number(be.band_ratio)});
        if (cfg.case_tag == CaseTag::main2) w.row({"r_q_star", format_number(be.r_qstar)});
        bool increasing = true;
        for (std::size_t k = 1; k < barrier.size(); ++k) increasing = increasing && barrier[k] > barrier[k - 1];
        w.row({"barrier_increasing", increasing ? "1" : "0"});
        for (std::size_t k = 0; k < alphas.size(); ++k) {
            w.row({"barrier_min_alpha_" + std::to_string(static_cast<int>(alphas[k])), format_number(barrier[k])});
        }
    }
    if (cfg.plot) {
        std::vector<double> x(mesh->size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = mesh->x(i);
        std::vector<Series> series;
        for (std::size_t k = 0; k < rep.snapshots.size(); ++k) {
            const auto v = rep.snapshots[k].values();
            series.push_back({"n = " + std::to_string(rep.schedule[k]), {v.begin(), v.end()}});
        }
        write_svg(out_dir / "solution.svg", "u_n, " + op.yf.describe() + ", s = " + format_number(cfg.s), "x", x,
                  series);
    }

    log << "solved " << rep.schedule.size() << " truncation levels, u_sup " << format_number(rep.solution().sup_norm())
        << ", alpha_hat " << format_number(rep.holder.alpha) << '\n';
    if (!be.bounded) {
        log << "boundary energy: " << be.message << '\n';
        return 1;
    }
    return 0;
}

int cmd_convergence(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    if (cfg.meshes.size() < 2) throw ConfigError("convergence needs at least two meshes");
    prepare_dir(out_dir);
    const OperatorConfig op = make_operator(cfg);
    std::vector<SolveReport> reps;
    for (std::size_t M : cfg.meshes) {
        const MeshPtr mesh = make_mesh(M);
        reps.push_back(monotone_scheme(op, make_problem(cfg, mesh), cfg.n_schedule, cfg.solver));
    }

    // Differences of consecutive meshes at the coarse nodes; the fine
    // solution is read through its piecewise-linear interpolant.
    CsvWriter w(out_dir / "convergence.csv", {"n", "M_coarse", "M_fine", "h_coarse", "sup_diff", "ratio"});
    bool ok = true;
    std::vector<double> h_axis;
    std::vector<Series> series;
    for (std::size_t k = 0; k < cfg.n_schedule.size(); ++k) {
        Series sr{"n = " + std::to_string(cfg.n_schedule[k]), {}};
        double prev = -1.0;
        for (std::size_t m = 0; m + 1 < reps.size(); ++m) {
            const GridFunction& coarse = reps[m].snapshots[k];
            const GridFunction& fine = reps[m + 1].snapshots[k];
            double d = 0.0;
            for (std::size_t i = 0; i < coarse.size(); ++i) {
                d = std::max(d, std::abs(coarse[i] - fine(coarse.mesh().x(i))));
            }
            const std::string ratio = prev >= 0.0 && d > 0.0 ? format_number(prev / d) : "";
            if (prev >= 0.0 && d > prev) {
                ok = false;
                log << "n = " << cfg.n_schedule[k] << ": difference grows from " << format_number(prev) << " to "
                    << format_number(d) << " at M = " << cfg.meshes[m] << '\n';
            }
            w.row({std::to_string(cfg.n_schedule[k]), std::to_string(cfg.meshes[m]), std::to_string(cfg.meshes[m + 1]),
                   format_number(coarse.mesh().h()), format_number(d), ratio});
            sr.y.push_back(d);
            if (k == 0) h_axis.push_back(coarse.mesh().h());
            prev = d;
        }
        series.push_back(std::move(sr));
    }
    if (cfg.plot && h_axis.size() >= 2) {
        write_svg(out_dir / "convergence.svg", "sup difference of consecutive meshes", "h (log)", h_axis, series, true);
    }
    log << "convergence over " << cfg.meshes.size() << " meshes: "
        << (ok ? "differences decrease" : "differences do not decrease") << '\n';
    return ok ? 0 : 1;
}

}  // namespace glap::cli
