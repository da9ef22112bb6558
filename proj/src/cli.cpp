#include "cli.hpp"

#include "json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace abp::cli {
namespace {

using io::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Inline JSON when the text starts with '[' or '{', otherwise a file path.
json load_json(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool inline_json = first != std::string::npos && (text[first] == '[' || text[first] == '{');
    try {
        return json::parse(inline_json ? text : read_file(text));
    } catch (const json::parse_error& e) {
        fail(ErrorCode::InvalidArgument, std::string("invalid JSON: ") + e.what());
    }
}

Divisor load_divisor(const std::string& text) { return Divisor(io::complex_list_from_json(load_json(text))); }

// A complex value given as "[re,im]" or a plain real number.
cplx parse_complex(const std::string& text) {
    if (text.find('[') != std::string::npos) return io::complex_from_json(load_json(text));
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return {x, 0.0};
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, "expected a number or [re, im], got '" + text + "'");
    }
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidArgument, "expected comma separated integers, got '" + text + "'");
        }
    }
    if (out.empty()) fail(ErrorCode::InvalidArgument, "empty integer list");
    return out;
}

std::string join(const std::vector<int>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    f << text;
}

// Appends flags from a JSON config object that are not already on the command line.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    const auto it = std::find(args.begin(), args.end(), "--config");
    if (it == args.end()) return args;
    if (it + 1 == args.end()) fail(ErrorCode::InvalidArgument, "--config needs a path");
    json cfg;
    try {
        cfg = json::parse(read_file(*(it + 1)));
    } catch (const json::parse_error& e) {
        fail(ErrorCode::InvalidArgument, std::string("invalid config JSON: ") + e.what());
    }
    args.erase(it, it + 2);
    if (!cfg.is_object()) fail(ErrorCode::InvalidArgument, "config must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
            continue;
        }
        args.push_back(flag);
        args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    return args;
}

struct Options {
    double r = 0.0;
    int delta = 0;
    std::string zeros, map, out, domain, z, w, c = "0.001", window = "-1.5,1.5,-1.5,1.5", d, type, chi;
    double tol = 1e-10;
    std::size_t samples = 512;
    std::uint64_t seed = 42;
    std::size_t k = 1;
    std::vector<std::string> probes;
    bool adjust = false;
    double u = 0.0, v = 0.0;
    int total = 0, n = 0, m = 3, ell = 3, size = 512, max_iter = kRenderIterations;
    unsigned threads = 0;
};

SchemeType scheme_type_or_default(const Options& o, int n) {
    if (!o.type.empty()) return parse_scheme_type(o.type);
    return n % 2 == 1 ? SchemeType::I : SchemeType::II;
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    auto report_error = [&](const std::string& code, const std::string& detail, int status) {
        err << json{{"error", code}, {"detail", detail}}.dump() << '\n';
        return status;
    };

    try {
        std::vector<std::string> args = apply_config(raw_args);
        Options o;
        CLI::App app{"Proper holomorphic maps of annuli: construction, verification and combinatorics", "abp"};
        app.require_subcommand(1);
        app.set_version_flag("--version", "abp 1.0.0");

        auto add_annulus = [&](CLI::App* s, bool zeros) {
            s->add_option("--r", o.r, "inner radius of A_r")->required();
            s->add_option("--delta", o.delta, "inner boundary degree")->required();
            if (zeros) s->add_option("--zeros", o.zeros, "zeros as JSON [[re,im],...] or a file")->required();
        };

        auto* check = app.add_subcommand("check", "test |prod p| = r^delta");
        add_annulus(check, true);
        auto* correct = app.add_subcommand("correct", "rescale moduli so the zeros satisfy the existence condition");
        add_annulus(correct, true);
        auto* build = app.add_subcommand("build", "build the truncated product map");
        add_annulus(build, true);
        build->add_option("--tol", o.tol, "certified tail tolerance");
        build->add_option("--out", o.out, "write the map JSON here instead of stdout");

        auto* eval = app.add_subcommand("eval", "evaluate a stored map");
        eval->add_option("--map", o.map, "map JSON or file")->required();
        eval->add_option("--z", o.z, "point [re,im]")->required();
        auto* verify = app.add_subcommand("verify", "diagnostic report for a stored map");
        verify->add_option("--map", o.map, "map JSON or file")->required();
        verify->add_option("--samples", o.samples, "samples per check");
        verify->add_option("--seed", o.seed, "RNG seed");
        auto* fiber = app.add_subcommand("fiber", "all preimages of a target value");
        fiber->add_option("--map", o.map, "map JSON or file")->required();
        fiber->add_option("--w", o.w, "target [re,im]")->required();
        fiber->add_option("--tol", o.tol, "Newton tolerance");

        auto* model = app.add_subcommand("model", "model space coordinates");
        model->require_subcommand(1);
        auto* coords = model->add_subcommand("coords", "coordinates (t, c_1..c_{e-1}, phase)");
        coords->add_option("--r", o.r)->required();
        coords->add_option("--zeros", o.zeros)->required();
        auto* roundtrip = model->add_subcommand("roundtrip", "phi_r then psi_r");
        add_annulus(roundtrip, true);
        auto* mobius = model->add_subcommand("mobius", "point on the Mobius band");
        mobius->add_option("--u", o.u)->required();
        mobius->add_option("--v", o.v)->required();

        auto* harmonic = app.add_subcommand("harmonic", "harmonic measure of a boundary circle");
        harmonic->add_option("--domain", o.domain, "circle domain JSON or file")->required();
        harmonic->add_option("--k", o.k, "boundary index (0 = outer)");
        harmonic->add_option("--tol", o.tol, "boundary residual target");
        harmonic->add_option("--probe", o.probes, "interior point [re,im]; repeatable");
        auto* abel = app.add_subcommand("abel", "Abel condition for a divisor");
        abel->add_option("--domain", o.domain, "circle domain JSON or file")->required();
        abel->add_option("--zeros", o.zeros)->required();
        abel->add_option("--tol", o.tol);
        abel->add_flag("--adjust", o.adjust, "move designated zeros until the condition holds");

        auto* scheme = app.add_subcommand("scheme", "integer combinatorics of mapping schemes");
        scheme->require_subcommand(1);
        auto* enumerate = scheme->add_subcommand("enumerate", "CSV table of admissible partitions");
        enumerate->add_option("--total", o.total)->required();
        enumerate->add_option("--n", o.n)->required();
        enumerate->add_option("--type", o.type, "I, II or III (default I for odd n, II for even n)");
        auto add_d = [&](CLI::App* s, bool type) {
            s->add_option("--d", o.d, "partition, e.g. 2,3,7")->required();
            if (type) s->add_option("--type", o.type, "I, II or III")->required();
        };
        auto* degree = scheme->add_subcommand("degree", "covering degree of rho");
        add_d(degree, false);
        auto* homeo = scheme->add_subcommand("homeo", "is rho a homeomorphism");
        add_d(homeo, false);
        auto* marks = scheme->add_subcommand("marks", "marking counts");
        add_d(marks, true);
        marks->add_option("--chi", o.chi, "characteristic, e.g. +- ")->required();
        auto* fiberbound = scheme->add_subcommand("fiberbound", "s_0 and the p_2 fiber bound");
        add_d(fiberbound, true);
        auto* aut = scheme->add_subcommand("aut", "automorphism group bound");
        add_d(aut, true);
        auto* torus = scheme->add_subcommand("torus", "torus covering criterion");
        add_d(torus, true);

        auto* julia = app.add_subcommand("julia", "McMullen family dynamics");
        julia->require_subcommand(1);
        auto add_family = [&](CLI::App* s) {
            s->add_option("--m", o.m);
            s->add_option("--ell", o.ell);
            s->add_option("--c", o.c, "number or [re,im]");
        };
        auto* classify = julia->add_subcommand("classify", "Cantor circle classification");
        add_family(classify);
        auto* render = julia->add_subcommand("render", "escape-time PPM image");
        add_family(render);
        render->add_option("--size", o.size);
        render->add_option("--window", o.window, "xmin,xmax,ymin,ymax");
        render->add_option("--max-iter", o.max_iter);
        render->add_option("--threads", o.threads);
        render->add_option("--out", o.out, "PPM path")->required();
        auto* twist = julia->add_subcommand("twist", "annulus twist map");
        twist->add_option("--r", o.r)->required();
        twist->add_option("--z", o.z)->required();

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::CallForVersion&) {
            out << "abp 1.0.0\n";
            return 0;
        } catch (const CLI::ParseError& e) {
            return report_error("InvalidArgument", e.what(), 2);
        }

        if (check->parsed()) {
            const auto res = existence_check(o.r, o.delta, load_divisor(o.zeros));
            emit(out, {{"ok", res.ok}, {"residual", io::number(res.residual)}});
        } else if (correct->parsed()) {
            emit(out, io::to_json(radial_correct(o.r, o.delta, load_divisor(o.zeros))));
        } else if (build->parsed()) {
            const auto f = AnnulusProperMap::build(o.r, o.delta, load_divisor(o.zeros), o.tol);
            const std::string text = io::to_json(f).dump() + "\n";
            if (o.out.empty()) out << text;
            else write_text(o.out, text);
        } else if (eval->parsed()) {
            emit(out, io::to_json(io::map_from_json(load_json(o.map)).eval(parse_complex(o.z))));
        } else if (verify->parsed()) {
            emit(out, io::to_json(io::map_from_json(load_json(o.map)).verify(o.samples, o.seed)));
        } else if (fiber->parsed()) {
            const auto f = io::map_from_json(load_json(o.map));
            emit(out, io::to_json(f.fiber(parse_complex(o.w), Tolerance{o.tol, 200})));
        } else if (coords->parsed()) {
            emit(out, io::to_json(to_model_coordinates(o.r, load_divisor(o.zeros))));
        } else if (roundtrip->parsed()) {
            const Divisor zeros = load_divisor(o.zeros);
            const auto nd = phi_r(zeros, o.r);
            const Divisor back = psi_r(nd, o.r, o.delta);
            emit(out, {{"normalized", io::to_json(nd.points())},
                       {"recovered", io::to_json(back)},
                       {"error", io::number(multiset_distance(zeros, back))}});
        } else if (mobius->parsed()) {
            const auto p = mobius_band_point(o.u, o.v);
            emit(out, json::array({io::number(p[0]), io::number(p[1]), io::number(p[2])}));
        } else if (harmonic->parsed()) {
            const auto dom = io::domain_from_json(load_json(o.domain));
            const auto u = solve_harmonic_measure(dom, o.k, o.tol);
            json values = json::array();
            for (const auto& p : o.probes) values.push_back(io::number(u(parse_complex(p))));
            emit(out, {{"k", o.k},
                       {"order", u.order()},
                       {"residual", io::number(u.residual())},
                       {"condition", io::number(u.condition_estimate())},
                       {"values", values}});
        } else if (abel->parsed()) {
            const auto dom = io::domain_from_json(load_json(o.domain));
            const Divisor zeros = load_divisor(o.zeros);
            if (o.adjust) {
                const Divisor adjusted = abel_adjust(dom, zeros, o.tol);
                emit(out, {{"zeros", io::to_json(adjusted)},
                           {"report", io::to_json(abel_condition(dom, adjusted, o.tol))}});
            } else {
                emit(out, io::to_json(abel_condition(dom, zeros, o.tol)));
            }
        } else if (enumerate->parsed()) {
            out << "d,n,total,deg_rho,homeo,s0,bound,aut_l,dihedral,torus_cover\n";
            for (const auto& p : enumerate_admissible(o.total, o.n)) {
                const SchemeType t = scheme_type_or_default(o, p.n());
                const auto fb = p2_fiber_bound(p, t);
                const auto ab = aut_bound(p, t);
                out << '"' << join(p.entries(), ',') << "\"," << p.n() << ',' << p.total() << ','
                    << covering_degree(p) << ',' << (is_rho_homeomorphism(p) ? "true" : "false") << ',' << fb.s0
                    << ',' << fb.bound << ',' << ab.cyclic_order_divisor << ','
                    << (ab.dihedral_possible ? "true" : "false") << ','
                    << (torus_cover_criterion(p, t) ? "true" : "false") << '\n';
            }
        } else if (degree->parsed()) {
            out << covering_degree(PartitionVector(parse_int_list(o.d))) << '\n';
        } else if (homeo->parsed()) {
            out << (is_rho_homeomorphism(PartitionVector(parse_int_list(o.d))) ? "true" : "false") << '\n';
        } else if (marks->parsed()) {
            const auto m = marking_counts(PartitionVector(parse_int_list(o.d)), parse_scheme_type(o.type),
                                          parse_characteristic(o.chi));
            emit(out, {{"s", m.s}, {"s_inf", m.s_infinity}});
        } else if (fiberbound->parsed()) {
            const auto fb = p2_fiber_bound(PartitionVector(parse_int_list(o.d)), parse_scheme_type(o.type));
            emit(out, {{"s0", fb.s0}, {"bound", fb.bound}});
        } else if (aut->parsed()) {
            const auto ab = aut_bound(PartitionVector(parse_int_list(o.d)), parse_scheme_type(o.type));
            emit(out, {{"l", ab.cyclic_order_divisor}, {"dihedral_possible", ab.dihedral_possible}});
        } else if (torus->parsed()) {
            out << (torus_cover_criterion(PartitionVector(parse_int_list(o.d)), parse_scheme_type(o.type)) ? "true"
                                                                                                          : "false")
                << '\n';
        } else if (classify->parsed()) {
            const McMullenMap f(o.m, o.ell, parse_complex(o.c));
            const auto report = classify_cantor_circle(f);
            emit(out, {{"report", io::to_json(report)}, {"grotzsch", io::to_json(grotzsch_check(report))}});
        } else if (render->parsed()) {
            const McMullenMap f(o.m, o.ell, parse_complex(o.c));
            std::vector<double> w;
            {
                std::stringstream ss(o.window);
                std::string item;
                while (std::getline(ss, item, ',')) w.push_back(std::stod(item));
            }
            if (w.size() != 4) fail(ErrorCode::InvalidArgument, "window needs xmin,xmax,ymin,ymax");
            const auto img = render_julia(f, Window{w[0], w[1], w[2], w[3]}, o.size, o.size, o.max_iter, o.threads);
            std::ofstream file(o.out, std::ios::binary);
            if (!file) fail(ErrorCode::InvalidArgument, "cannot write '" + o.out + "'");
            write_ppm(file, img);
            emit(out, {{"width", img.width}, {"height", img.height}, {"out", o.out}});
        } else if (twist->parsed()) {
            emit(out, io::to_json(twist_map(o.r, parse_complex(o.z))));
        }
        return 0;
    } catch (const Error& e) {
        return report_error(std::string(to_string(e.code())), e.detail(), is_numerical_failure(e.code()) ? 3 : 2);
    } catch (const std::exception& e) {
        return report_error("InvalidArgument", e.what(), 2);
    }
}

} // namespace abp::cli
