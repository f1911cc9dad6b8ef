#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trinv/analytics.hpp"
#include "trinv/ar1.hpp"
#include "trinv/errors.hpp"
#include "trinv/oracle.hpp"
#include "trinv/tridiag.hpp"
#include "trinv/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using i64 = std::int64_t;

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// 12 significant digits, locale independent, trailing zeros dropped: the
// byte-stable CSV number format.
std::string fmt12(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string meta_value(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return fmt12(v.get<double>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_null()) return "none";
    return v.dump();
}

// Every command renders into one of these: ordered metadata plus a payload in
// both formats, then a single write at the end.
struct Document {
    ordered_json metadata = ordered_json::object();
    ordered_json data = ordered_json::object();
    std::vector<std::string> csv_lines;
};

void write_output(const Document& doc, const std::string& out_path, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        ordered_json root;
        root["metadata"] = doc.metadata;
        root["data"] = doc.data;
        os << root.dump(2) << '\n';
    } else {
        for (const auto& item : doc.metadata.items())
            os << "# " << item.key() << ": " << meta_value(item.value()) << '\n';
        for (const auto& line : doc.csv_lines) os << line << '\n';
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << os.str();
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
    } else {
        std::ofstream f(out_path);
        if (!f) throw IoError("cannot open output file: " + out_path);
        f << os.str();
        f.flush();
        if (!f) throw IoError("failed writing output file: " + out_path);
    }
}

struct OutputOpts {
    std::string out;
    std::string format = "csv";
    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out, "output path ('-' or empty for stdout)");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    }
};

// Matrix selection flags shared by invert / rowsums / trace: either a preset
// or the raw (--n, --b, --c, --d) quadruple, optionally with the off-diagonal
// scale --e.  A scaled matrix with diagonal (d, c, ..., c, d) and off-diagonal
// magnitude e is e * Q(b, c/e, d/e), so outputs are rescaled by 1/e (1/e^2
// for the squared trace).
struct SpecOpts {
    i64 n = 0;
    int b = 1;
    double c = 0.0, d = 0.0, e = 1.0;
    std::string preset;
    double rho = 0.0, phi = 0.0, gamma = 0.0;
    CLI::Option *on = nullptr, *ob = nullptr, *oc = nullptr, *od = nullptr, *oe = nullptr,
                *opreset = nullptr, *orho = nullptr, *ophi = nullptr, *ogamma = nullptr;

    void attach(CLI::App* cmd) {
        on = cmd->add_option("--n", n, "matrix order");
        ob = cmd->add_option("--b", b, "off-diagonal sign, +1 or -1");
        oc = cmd->add_option("--c", c, "interior diagonal value");
        od = cmd->add_option("--d", d, "boundary diagonal value");
        oe = cmd->add_option("--e", e, "off-diagonal magnitude (scale factor, default 1)");
        opreset = cmd->add_option("--preset", preset, "named matrix: spline, car, or ar1")
                      ->check(CLI::IsMember({"spline", "car", "ar1"}));
        orho = cmd->add_option("--rho", rho, "car preset: spatial correlation");
        ophi = cmd->add_option("--phi", phi, "ar1 preset: autoregressive coefficient");
        ogamma = cmd->add_option("--gamma", gamma, "ar1 preset: noise-to-innovation ratio");
    }

    struct Resolved {
        trinv::TridiagSpec spec;
        double e = 1.0;
    };

    Resolved resolve() const {
        using trinv::DomainError;
        if (opreset->count() > 0) {
            if (ob->count() || oc->count() || od->count() || oe->count())
                throw DomainError("--preset conflicts with --b/--c/--d/--e");
            if (!on->count()) throw DomainError("--n is required");
            if (preset == "spline") {
                if (orho->count() || ophi->count() || ogamma->count())
                    throw DomainError("spline preset takes no extra parameters");
                return {trinv::spline_spec(n), 1.0};
            }
            if (preset == "car") {
                if (!orho->count()) throw DomainError("car preset requires --rho");
                if (ophi->count() || ogamma->count())
                    throw DomainError("car preset takes only --rho");
                return {trinv::car_spec(rho, n), 1.0};
            }
            if (!ophi->count() || !ogamma->count())
                throw DomainError("ar1 preset requires --phi and --gamma");
            if (orho->count()) throw DomainError("ar1 preset takes only --phi and --gamma");
            return {trinv::ar1_noise_spec(phi, gamma, n), 1.0};
        }
        if (!on->count() || !ob->count() || !oc->count() || !od->count())
            throw DomainError("raw specs need --n, --b, --c and --d (or use --preset)");
        if (orho->count() || ophi->count() || ogamma->count())
            throw DomainError("--rho/--phi/--gamma apply only with --preset");
        if (!(e > 0.0)) throw DomainError("--e must be positive");
        return {trinv::TridiagSpec::make(n, b, c / e, d / e), e};
    }

    void describe(ordered_json& meta, const Resolved& r) const {
        if (opreset->count() > 0) {
            meta["preset"] = preset;
            if (preset == "car") meta["rho"] = rho;
            if (preset == "ar1") {
                meta["phi"] = phi;
                meta["gamma"] = gamma;
            }
        }
        meta["n"] = r.spec.n;
        meta["b"] = r.spec.b;
        meta["c"] = r.spec.c;
        meta["d"] = r.spec.d;
        meta["lambda"] = r.spec.lambda;
        meta["e"] = r.e;
        if (r.e != 1.0) {
            meta["c_input"] = c;
            meta["d_input"] = d;
        }
    }
};

ordered_json base_meta(const std::string& command) {
    ordered_json meta = ordered_json::object();
    meta["tool"] = "trinv";
    meta["version"] = trinv::version;
    meta["command"] = command;
    return meta;
}

// ---- invert ----------------------------------------------------------------

struct InvertOpts {
    SpecOpts spec;
    OutputOpts output;
    std::vector<i64> entry;
    bool factors = false;
    bool full = false;
};

void run_invert(const InvertOpts& o) {
    const auto r = o.spec.resolve();
    const int modes = int(!o.entry.empty()) + int(o.factors) + int(o.full);
    if (modes != 1)
        throw trinv::DomainError("choose exactly one of --entry, --factors, --full");
    Document doc;
    doc.metadata = base_meta("invert");
    o.spec.describe(doc.metadata, r);
    const double inv_e = 1.0 / r.e;
    if (!o.entry.empty()) {
        const auto f = trinv::inverse_factors(r.spec);
        const double val = f.element(o.entry[0], o.entry[1]) * inv_e;
        doc.metadata["mode"] = "entry";
        doc.csv_lines.push_back("i,j,value");
        doc.csv_lines.push_back(std::to_string(o.entry[0]) + "," + std::to_string(o.entry[1])
                                + "," + fmt12(val));
        doc.data["i"] = o.entry[0];
        doc.data["j"] = o.entry[1];
        doc.data["value"] = val;
    } else if (o.factors) {
        const auto f = trinv::inverse_factors(r.spec);
        doc.metadata["mode"] = "factors";
        doc.metadata["denom"] = f.denom();
        doc.csv_lines.push_back("i,u,v");
        ordered_json ju = ordered_json::array(), jv = ordered_json::array();
        for (i64 i = 0; i < r.spec.n; ++i) {
            const double ui = f.u()[std::size_t(i)];
            const double vi = f.v()[std::size_t(i)] * inv_e; // u_i * v_j is then the user-scale entry
            doc.csv_lines.push_back(std::to_string(i + 1) + "," + fmt12(ui) + "," + fmt12(vi));
            ju.push_back(ui);
            jv.push_back(vi);
        }
        doc.data["denom"] = f.denom();
        doc.data["u"] = std::move(ju);
        doc.data["v"] = std::move(jv);
    } else {
        if (r.spec.n > 5000)
            throw trinv::DomainError("--full materialization is limited to n <= 5000");
        const auto m = trinv::full_inverse(r.spec);
        doc.metadata["mode"] = "full";
        ordered_json rows = ordered_json::array();
        for (i64 i = 0; i < m.n; ++i) {
            std::string line;
            ordered_json jrow = ordered_json::array();
            for (i64 j = 0; j < m.n; ++j) {
                const double val = m(i, j) * inv_e;
                if (j) line += ',';
                line += fmt12(val);
                jrow.push_back(val);
            }
            doc.csv_lines.push_back(std::move(line));
            rows.push_back(std::move(jrow));
        }
        doc.data["matrix"] = std::move(rows);
    }
    write_output(doc, o.output.out, o.output.format);
}

// ---- rowsums ---------------------------------------------------------------

struct RowsumsOpts {
    SpecOpts spec;
    OutputOpts output;
};

void run_rowsums(const RowsumsOpts& o) {
    const auto r = o.spec.resolve();
    const auto rs = trinv::analytics::row_sums(r.spec);
    Document doc;
    doc.metadata = base_meta("rowsums");
    o.spec.describe(doc.metadata, r);
    doc.metadata["case"] =
        rs.case_tag == trinv::analytics::RowSumVector::Case::c2_b1 ? "c2_b1" : "general";
    const double inv_e = 1.0 / r.e;
    doc.csv_lines.push_back("i,s");
    ordered_json rows = ordered_json::array();
    for (i64 i = 0; i < r.spec.n; ++i) {
        const double si = rs.s[std::size_t(i)] * inv_e;
        doc.csv_lines.push_back(std::to_string(i + 1) + "," + fmt12(si));
        rows.push_back(ordered_json{{"i", i + 1}, {"s", si}});
    }
    doc.data["rows"] = std::move(rows);
    write_output(doc, o.output.out, o.output.format);
}

// ---- trace -----------------------------------------------------------------

struct TraceOpts {
    SpecOpts spec;
    OutputOpts output;
};

void run_trace(const TraceOpts& o) {
    const auto r = o.spec.resolve();
    const auto rep = trinv::analytics::trace_report(r.spec);
    const double inv_e = 1.0 / r.e;
    const double inv_e2 = inv_e * inv_e;
    Document doc;
    doc.metadata = base_meta("trace");
    o.spec.describe(doc.metadata, r);
    doc.csv_lines.push_back("key,value");
    auto put = [&doc](const std::string& key, double val) {
        doc.csv_lines.push_back(key + "," + fmt12(val));
        doc.data[key] = val;
    };
    put("trace_inv", rep.trace_inv * inv_e);
    put("trace_inv_sq", rep.trace_inv_sq * inv_e2);
    doc.csv_lines.push_back("n," + std::to_string(rep.n));
    doc.data["n"] = rep.n;
    put("normalized_trace", rep.normalized_trace * inv_e);
    put("normalized_trace_sq", rep.normalized_trace_sq * inv_e2);
    if (rep.limit_normalized_trace) {
        put("limit_normalized_trace", *rep.limit_normalized_trace * inv_e);
        put("limit_normalized_trace_sq", *rep.limit_normalized_trace_sq * inv_e2);
    } else {
        doc.data["limit_normalized_trace"] = nullptr;
        doc.data["limit_normalized_trace_sq"] = nullptr;
    }
    write_output(doc, o.output.out, o.output.format);
}

// ---- fig1 ------------------------------------------------------------------

struct Fig1Opts {
    OutputOpts output;
    double phi = 0.0, gamma = 0.0, sigma_eps2 = 0.1, mu = 3.0;
    i64 n = 100;
};

void run_fig1(const Fig1Opts& o) {
    const auto cfg = trinv::ar1::AR1Config::from_gamma(o.phi, o.gamma, o.sigma_eps2, o.mu, o.n);
    const auto w = trinv::ar1::w_opt_known_variances(cfg);
    const auto [lo, hi] = trinv::ar1::w_opt_bounds(cfg);
    Document doc;
    doc.metadata = base_meta("fig1");
    doc.metadata["phi"] = cfg.phi;
    doc.metadata["gamma"] = cfg.gamma;
    doc.metadata["sigma_eta_sq"] = cfg.sigma_eta_sq;
    doc.metadata["sigma_eps_sq"] = cfg.sigma_eps_sq;
    doc.metadata["mu"] = cfg.mu;
    doc.metadata["n"] = cfg.n;
    doc.csv_lines.push_back("i,w_opt,lower,upper");
    ordered_json rows = ordered_json::array();
    for (i64 i = 0; i < cfg.n; ++i) {
        const double wi = w[std::size_t(i)];
        doc.csv_lines.push_back(std::to_string(i + 1) + "," + fmt12(wi) + "," + fmt12(lo) + ","
                                + fmt12(hi));
        rows.push_back(ordered_json{{"i", i + 1}, {"w_opt", wi}, {"lower", lo}, {"upper", hi}});
    }
    doc.data["rows"] = std::move(rows);
    write_output(doc, o.output.out, o.output.format);
}

// ---- fig2 ------------------------------------------------------------------

struct Fig2Opts {
    OutputOpts output;
    double phi = 0.0, gamma = 0.0;
    std::string grid = "1000..10000";
};

std::vector<i64> parse_grid(const std::string& text) {
    using trinv::DomainError;
    auto parse_int = [](const std::string& tok) -> i64 {
        i64 val = 0;
        const char* first = tok.data();
        const char* last = tok.data() + tok.size();
        const auto res = std::from_chars(first, last, val);
        if (res.ec != std::errc() || res.ptr != last)
            throw DomainError("bad grid token: '" + tok + "'");
        return val;
    };
    std::vector<i64> grid;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(parse_int(tok));
    } else if (auto pos = text.find(".."); pos != std::string::npos) {
        const i64 start = parse_int(text.substr(0, pos));
        std::string rest = text.substr(pos + 2);
        i64 step = 1000;
        if (auto pos2 = rest.find(".."); pos2 != std::string::npos) {
            step = parse_int(rest.substr(pos2 + 2));
            rest = rest.substr(0, pos2);
        }
        const i64 stop = parse_int(rest);
        if (step < 1) throw DomainError("grid step must be positive");
        if (stop < start) throw DomainError("grid stop must not precede start");
        for (i64 v = start; v <= stop; v += step) grid.push_back(v);
    } else {
        grid.push_back(parse_int(text));
    }
    if (grid.empty()) throw DomainError("empty grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < 1) throw DomainError("grid values must be at least 1");
        if (k > 0 && grid[k] <= grid[k - 1])
            throw DomainError("grid values must be strictly increasing");
    }
    return grid;
}

void run_fig2(const Fig2Opts& o) {
    const std::vector<i64> grid = parse_grid(o.grid);
    Document doc;
    doc.metadata = base_meta("fig2");
    doc.metadata["phi"] = o.phi;
    doc.metadata["gamma"] = o.gamma;
    doc.metadata["grid"] = o.grid;
    doc.metadata["points"] = grid.size();
    doc.csv_lines.push_back("n,mean_a_opt,var_a_opt,limit_mean,limit_var");
    ordered_json rows = ordered_json::array();
    double limit = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        // The moments depend only on (phi, gamma, n); mu and the noise scale
        // are placeholders.
        const auto cfg = trinv::ar1::AR1Config::from_gamma(o.phi, o.gamma, 1.0, 0.0, grid[k]);
        const auto m = trinv::ar1::a_opt_moments(cfg);
        if (k == 0) limit = trinv::ar1::a_opt_limit(cfg);
        doc.csv_lines.push_back(std::to_string(grid[k]) + "," + fmt12(m.mean) + ","
                                + fmt12(m.variance) + "," + fmt12(limit) + ",0");
        rows.push_back(ordered_json{{"n", grid[k]},
                                    {"mean_a_opt", m.mean},
                                    {"var_a_opt", m.variance},
                                    {"limit_mean", limit},
                                    {"limit_var", 0.0}});
    }
    doc.data["rows"] = std::move(rows);
    write_output(doc, o.output.out, o.output.format);
}

// ---- simulate --------------------------------------------------------------

struct SimulateOpts {
    OutputOpts output;
    double phi = 0.0, gamma = 0.0, sigma_eps2 = 0.1, mu = 3.0;
    i64 n = 100;
    std::uint64_t seed = 1;
};

void run_simulate(const SimulateOpts& o) {
    const auto cfg = trinv::ar1::AR1Config::from_gamma(o.phi, o.gamma, o.sigma_eps2, o.mu, o.n);
    const auto y = trinv::ar1::simulate(cfg, o.seed);
    Document doc;
    doc.metadata = base_meta("simulate");
    doc.metadata["phi"] = cfg.phi;
    doc.metadata["gamma"] = cfg.gamma;
    doc.metadata["sigma_eta_sq"] = cfg.sigma_eta_sq;
    doc.metadata["sigma_eps_sq"] = cfg.sigma_eps_sq;
    doc.metadata["mu"] = cfg.mu;
    doc.metadata["n"] = cfg.n;
    doc.metadata["seed"] = o.seed;
    doc.csv_lines.push_back("t,y");
    ordered_json rows = ordered_json::array();
    for (i64 t = 0; t < cfg.n; ++t) {
        doc.csv_lines.push_back(std::to_string(t + 1) + "," + fmt12(y[std::size_t(t)]));
        rows.push_back(ordered_json{{"t", t + 1}, {"y", y[std::size_t(t)]}});
    }
    doc.data["rows"] = std::move(rows);
    write_output(doc, o.output.out, o.output.format);
}

// ---- a-opt -----------------------------------------------------------------

struct AOptOpts {
    OutputOpts output;
    double phi = 0.0, gamma = 0.0, sigma_eps2 = 0.1, mu = 3.0;
    std::string data;
    i64 n = 0;
    CLI::Option* on = nullptr;
};

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        if (std::cin.bad()) throw IoError("failed reading stdin");
        return os.str();
    }
    std::ifstream f(path);
    if (!f) throw IoError("cannot open data file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    if (f.bad()) throw IoError("failed reading data file: " + path);
    return os.str();
}

std::vector<double> parse_series_json(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw trinv::DomainError(std::string("data is not valid JSON: ") + e.what());
    }
    const ordered_json* node = &root;
    if (node->is_object() && node->contains("data")) node = &node->at("data");
    if (node->is_object() && node->contains("rows")) node = &node->at("rows");
    if (node->is_object() && node->contains("y")) node = &node->at("y");
    if (!node->is_array()) throw trinv::DomainError("unrecognized JSON data layout");
    std::vector<double> y;
    y.reserve(node->size());
    for (const auto& el : *node) {
        if (el.is_number())
            y.push_back(el.get<double>());
        else if (el.is_object() && el.contains("y"))
            y.push_back(el.at("y").get<double>());
        else
            throw trinv::DomainError("unrecognized series row in JSON data");
    }
    return y;
}

std::vector<double> parse_series_csv(const std::string& text) {
    std::vector<double> y;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        if (std::isalpha(static_cast<unsigned char>(line[start]))) continue; // header row
        const auto comma = line.rfind(',');
        const std::string field =
            comma == std::string::npos ? line.substr(start) : line.substr(comma + 1);
        double val = 0.0;
        const char* first = field.data();
        const char* last = field.data() + field.size();
        const auto res = std::from_chars(first, last, val);
        if (res.ec != std::errc() || res.ptr != last)
            throw trinv::DomainError("bad data value: '" + field + "'");
        y.push_back(val);
    }
    if (y.empty()) throw trinv::DomainError("no data rows found");
    return y;
}

void run_a_opt(const AOptOpts& o) {
    const std::string text = read_all(o.data);
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw trinv::DomainError("empty data input");
    const std::vector<double> y = (text[first] == '{' || text[first] == '[')
                                      ? parse_series_json(text)
                                      : parse_series_csv(text);
    if (o.on->count() > 0 && o.n != i64(y.size()))
        throw trinv::DimensionMismatch("--n is " + std::to_string(o.n) + " but the data has "
                                       + std::to_string(y.size()) + " rows");
    double a = 0.0;
    if (o.phi == 0.0) {
        if (!(o.sigma_eps2 > 0.0)) throw trinv::DomainError("sigma-eps2 must be positive");
        a = trinv::ar1::a_opt_phi_zero(o.gamma, o.sigma_eps2, o.mu, y);
    } else {
        const auto cfg =
            trinv::ar1::AR1Config::from_gamma(o.phi, o.gamma, o.sigma_eps2, o.mu, i64(y.size()));
        a = trinv::ar1::a_opt_from_data(cfg, y);
    }
    Document doc;
    doc.metadata = base_meta("a-opt");
    doc.metadata["phi"] = o.phi;
    doc.metadata["gamma"] = o.gamma;
    doc.metadata["sigma_eta_sq"] = o.gamma * o.sigma_eps2;
    doc.metadata["sigma_eps_sq"] = o.sigma_eps2;
    doc.metadata["mu"] = o.mu;
    doc.metadata["n"] = i64(y.size());
    doc.metadata["data"] = o.data;
    doc.csv_lines.push_back("a_opt");
    doc.csv_lines.push_back(fmt12(a));
    doc.data["a_opt"] = a;
    write_output(doc, o.output.out, o.output.format);
}

void emit_error(const std::string& type, const std::string& message) {
    nlohmann::json err = {{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverses, row sums and traces of symmetric near-Toeplitz tridiagonal "
                 "matrices, with the AR(1)-plus-noise shrinkage workflow built on them"};
    app.require_subcommand(1);

    auto invert_opts = std::make_shared<InvertOpts>();
    auto* invert = app.add_subcommand("invert", "Inverse entries, factor vectors, or the full inverse");
    invert_opts->spec.attach(invert);
    invert->add_option("--entry", invert_opts->entry, "1-based (i, j) of one entry")->expected(2);
    invert->add_flag("--factors", invert_opts->factors, "emit u, v and the denominator");
    invert->add_flag("--full", invert_opts->full, "materialize the whole inverse (n <= 5000)");
    invert_opts->output.attach(invert);
    invert->callback([invert_opts] { run_invert(*invert_opts); });

    auto rowsums_opts = std::make_shared<RowsumsOpts>();
    auto* rowsums = app.add_subcommand("rowsums", "Row sums of the inverse in O(n)");
    rowsums_opts->spec.attach(rowsums);
    rowsums_opts->output.attach(rowsums);
    rowsums->callback([rowsums_opts] { run_rowsums(*rowsums_opts); });

    auto trace_opts = std::make_shared<TraceOpts>();
    auto* trace = app.add_subcommand("trace", "Traces of the inverse and squared inverse");
    trace_opts->spec.attach(trace);
    trace_opts->output.attach(trace);
    trace->callback([trace_opts] { run_trace(*trace_opts); });

    auto fig1_opts = std::make_shared<Fig1Opts>();
    auto* fig1 = app.add_subcommand("fig1", "Shrinkage weight curve with its guaranteed bounds");
    fig1->add_option("--phi", fig1_opts->phi, "autoregressive coefficient")->required();
    fig1->add_option("--gamma", fig1_opts->gamma, "noise-to-innovation variance ratio")->required();
    fig1->add_option("--n", fig1_opts->n, "series length (default 100)");
    fig1->add_option("--sigma-eps2", fig1_opts->sigma_eps2, "observation noise variance");
    fig1->add_option("--mu", fig1_opts->mu, "process mean");
    fig1_opts->output.attach(fig1);
    fig1->callback([fig1_opts] { run_fig1(*fig1_opts); });

    auto fig2_opts = std::make_shared<Fig2Opts>();
    auto* fig2 = app.add_subcommand("fig2", "Mean and variance of a-opt over a grid of lengths");
    fig2->add_option("--phi", fig2_opts->phi, "autoregressive coefficient")->required();
    fig2->add_option("--gamma", fig2_opts->gamma, "noise-to-innovation variance ratio")->required();
    fig2->add_option("--grid", fig2_opts->grid,
                     "lengths: 'start..stop', 'start..stop..step', or a comma list");
    fig2_opts->output.attach(fig2);
    fig2->callback([fig2_opts] { run_fig2(*fig2_opts); });

    auto sim_opts = std::make_shared<SimulateOpts>();
    auto* sim = app.add_subcommand("simulate", "Draw one series from the AR(1)-plus-noise model");
    sim->add_option("--phi", sim_opts->phi, "autoregressive coefficient")->required();
    sim->add_option("--gamma", sim_opts->gamma, "noise-to-innovation variance ratio")->required();
    sim->add_option("--sigma-eps2", sim_opts->sigma_eps2, "observation noise variance");
    sim->add_option("--mu", sim_opts->mu, "process mean");
    sim->add_option("--n", sim_opts->n, "series length (default 100)");
    sim->add_option("--seed", sim_opts->seed, "RNG seed (default 1)");
    sim_opts->output.attach(sim);
    sim->callback([sim_opts] { run_simulate(*sim_opts); });

    auto aopt_opts = std::make_shared<AOptOpts>();
    auto* aopt = app.add_subcommand("a-opt", "Estimate a-opt from an observed series");
    aopt->add_option("--phi", aopt_opts->phi, "autoregressive coefficient (0 allowed)")->required();
    aopt->add_option("--gamma", aopt_opts->gamma, "noise-to-innovation variance ratio")->required();
    aopt->add_option("--sigma-eps2", aopt_opts->sigma_eps2, "observation noise variance");
    aopt->add_option("--mu", aopt_opts->mu, "process mean");
    aopt->add_option("--data", aopt_opts->data, "series file, CSV or JSON ('-' for stdin)")
        ->required();
    aopt_opts->on = aopt->add_option("--n", aopt_opts->n, "expected series length (cross-check)");
    aopt_opts->output.attach(aopt);
    aopt->callback([aopt_opts] { run_a_opt(*aopt_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends
    } catch (const CLI::ParseError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const trinv::SingularMatrix& e) {
        emit_error("singular", e.what());
        return 3;
    } catch (const trinv::DomainError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const trinv::DimensionMismatch& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const trinv::IndexOutOfRange& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const IoError& e) {
        emit_error("io", e.what());
        return 4;
    }
    return 0;
}
