#include "qrot/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

namespace qrot {

namespace {

struct KeyInfo {
    const char* key;
    const char* section;
};

constexpr KeyInfo kKeys[] = {
    {"omega01_tau", "pulses"},       {"omega02_tau", "pulses"},      {"T_over_tau", "pulses"},
    {"delta_phase", "pulses"},       {"chirp1_kind", "pulses"},      {"chi1", "pulses"},
    {"chirp2_kind", "pulses"},       {"chi2", "pulses"},             {"delta_tau", "detuning"},
    {"delta1_tau", "detuning"},      {"delta2_tau", "detuning"},     {"alpha", "qubit"},
    {"beta", "qubit"},               {"phi", "qubit"},               {"g1", "qubit"},
    {"g2", "qubit"},                 {"t_start_over_tau", "integration"}, {"t_end_over_tau", "integration"},
    {"samples", "integration"},      {"rel_tol", "integration"},     {"abs_tol", "integration"},
    {"parameter", "sweep"},          {"grid", "sweep"},              {"series_parameter", "sweep"},
    {"series_grid", "sweep"},        {"scale", "stirap"},            {"stop_time_over_tau", "stirap"},
    {"target_alpha", "solve"},       {"target_phi", "solve"},        {"target_g_re", "solve"},
    {"target_g_im", "solve"},        {"target_f_re", "solve"},       {"target_f_im", "solve"},
    {"free", "solve"},               {"leak_weight", "solve"},       {"grid_points", "solve"},
    {"tolerance", "solve"},          {"adiabatic", "output"},
};

const char* section_of(std::string_view key) {
    for (const auto& k : kKeys)
        if (key == k.key) return k.section;
    return nullptr;
}

bool known_section(std::string_view s) {
    return std::any_of(std::begin(kKeys), std::end(kKeys), [&](const KeyInfo& k) { return s == k.section; });
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

void put(Sections& out, const std::string& section, const std::string& key, std::string value) {
    auto& sec = out[section];
    if (sec.count(key)) throw ConfigError(key, fmt::format("key '{}' given more than once", key));
    sec[key] = std::move(value);
}

// Reads values from one parsed config and tracks which were consumed.
class Reader {
public:
    explicit Reader(const Sections& s) : s_(s) {}

    std::optional<std::string> text(const std::string& key) const {
        const auto sec = s_.find(section_of(key));
        if (sec == s_.end()) return std::nullopt;
        const auto it = sec->second.find(key);
        if (it == sec->second.end()) return std::nullopt;
        return it->second;
    }
    bool has(const std::string& key) const { return text(key).has_value(); }
    bool has_section(const std::string& section) const {
        const auto sec = s_.find(section);
        return sec != s_.end() && !sec->second.empty();
    }
    std::optional<double> number(const std::string& key) const {
        const auto t = text(key);
        if (!t) return std::nullopt;
        return parse_number(*t, key);
    }
    double number(const std::string& key, double fallback) const { return number(key).value_or(fallback); }

    std::size_t count(const std::string& key, std::size_t fallback) const {
        const auto t = text(key);
        if (!t) return fallback;
        std::size_t v = 0;
        const auto s = trim(*t);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw ConfigError(key, fmt::format("key '{}': expected a non-negative integer, got '{}'", key, *t));
        return v;
    }
    bool flag(const std::string& key, bool fallback) const {
        const auto t = text(key);
        if (!t) return fallback;
        const auto s = trim(*t);
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw ConfigError(key, fmt::format("key '{}': expected true or false, got '{}'", key, *t));
    }

private:
    const Sections& s_;
};

template <class F>
auto with_key(const std::string& key, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(key, fmt::format("{}: {}", key, e.what()));
    }
}

ChirpProfile read_chirp(const Reader& r, const std::string& kind_key, const std::string& chi_key, ChirpProfile base) {
    const auto kind_text = r.text(kind_key);
    const ChirpKind kind =
        kind_text ? with_key(kind_key, [&] { return chirp_kind_from_string(trim(*kind_text)); }) : base.kind();
    const double chi = r.number(chi_key, base.chi());
    return ChirpProfile(kind, chi);
}

std::vector<FreeParameter> parse_free(const std::string& text) {
    std::vector<FreeParameter> out;
    for (const auto& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 3)
            throw ConfigError("free", fmt::format("free: expected 'parameter:lower:upper', got '{}'", item));
        FreeParameter fp;
        fp.parameter = with_key("free", [&] { return sweep_parameter_from_string(parts[0]); });
        fp.lower = parse_number(parts[1], "free");
        fp.upper = parse_number(parts[2], "free");
        out.push_back(fp);
    }
    return out;
}

std::string join_grid(const std::vector<double>& grid) {
    std::string s;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k) s += ", ";
        s += format_double(grid[k]);
    }
    return s;
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : InvalidArgument(message), key_(std::move(key)) {}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", x);
}

double parse_number(std::string_view text, std::string_view key) {
    const std::string s = trim(text);
    auto plain = [](const std::string& v, double& out) {
        if (v.empty()) return false;
        const char* first = v.data() + (v[0] == '+' ? 1 : 0);
        const auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), out);
        return ec == std::errc{} && ptr == v.data() + v.size();
    };
    double value = 0.0;
    if (plain(s, value)) return value;

    // num/den
    const auto slash = s.find('/');
    if (slash != std::string::npos && s.find("pi") == std::string::npos) {
        double num = 0.0, den = 0.0;
        if (plain(trim(s.substr(0, slash)), num) && plain(trim(s.substr(slash + 1)), den) && den != 0.0)
            return num / den;
    }

    // [coef*]pi[/div]
    const auto pi = s.find("pi");
    if (pi != std::string::npos) {
        double coef = 1.0;
        double div = 1.0;
        bool ok = true;
        std::string head = s.substr(0, pi);
        if (head == "-") coef = -1.0;
        else if (!head.empty() && head != "+") {
            ok = head.back() == '*' && plain(trim(head.substr(0, head.size() - 1)), coef);
        }
        const std::string tail = s.substr(pi + 2);
        if (ok && !tail.empty()) ok = tail[0] == '/' && plain(trim(tail.substr(1)), div) && div != 0.0;
        if (ok) return coef * kPi / div;
    }
    throw ConfigError(std::string(key), fmt::format("key '{}': expected a number, got '{}'", key, text));
}

std::vector<double> parse_grid(std::string_view text, std::string_view key) {
    const std::string s = trim(text);
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3)
            throw ConfigError(std::string(key), fmt::format("key '{}': expected 'first:last:count'", key));
        const double first = parse_number(parts[0], key);
        const double last = parse_number(parts[1], key);
        std::size_t n = 0;
        const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
        if (ec != std::errc{} || ptr != parts[2].data() + parts[2].size() || n == 0)
            throw ConfigError(std::string(key), fmt::format("key '{}': grid count must be a positive integer", key));
        return linspace(first, last, n);
    }
    std::vector<double> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_number(item, key));
    return out;
}

Sections parse_ini(std::string_view text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", fmt::format("malformed config (line {}): {}", e.line(), e.message()));
    }
    Sections out;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            const char* sec = section_of(name);
            if (!sec) throw ConfigError(name, fmt::format("unknown key '{}'", name));
            put(out, sec, name, trim(node.data()));
            continue;
        }
        if (!known_section(name)) throw ConfigError(name, fmt::format("unknown section [{}]", name));
        for (const auto& [key, leaf] : node) {
            const char* sec = section_of(key);
            if (!sec) throw ConfigError(key, fmt::format("unknown key '{}' in section [{}]", key, name));
            if (name != sec)
                throw ConfigError(key, fmt::format("key '{}' belongs in section [{}], not [{}]", key, sec, name));
            put(out, sec, key, trim(leaf.data()));
        }
    }
    return out;
}

Sections sections_from_json(const nlohmann::json& config) {
    if (!config.is_object()) throw ConfigError("", "manifest config must be a JSON object");
    Sections out;
    auto scalar = [](const std::string& key, const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) return format_double(v.get<double>());
        throw ConfigError(key, fmt::format("key '{}': unsupported JSON value", key));
    };
    for (const auto& [name, body] : config.items()) {
        if (!known_section(name)) throw ConfigError(name, fmt::format("unknown section [{}]", name));
        if (!body.is_object()) throw ConfigError(name, fmt::format("section [{}] must be an object", name));
        for (const auto& [key, v] : body.items()) {
            const char* sec = section_of(key);
            if (!sec || name != sec) throw ConfigError(key, fmt::format("unknown key '{}' in section [{}]", key, name));
            std::string value;
            if (v.is_array()) {
                for (std::size_t k = 0; k < v.size(); ++k) value += (k ? ", " : "") + scalar(key, v[k]);
            } else {
                value = scalar(key, v);
            }
            put(out, sec, key, value);
        }
    }
    return out;
}

Sections overlay(Sections base, const Sections& top) {
    const std::vector<std::pair<std::set<std::string>, std::set<std::string>>> exclusive{
        {{"delta_tau"}, {"delta1_tau", "delta2_tau"}},
        {{"alpha", "beta"}, {"g1", "g2"}},
        {{"target_alpha", "target_phi"}, {"target_g_re", "target_g_im", "target_f_re", "target_f_im"}},
    };
    for (const auto& [section, keys] : top) {
        auto& dst = base[section];
        for (const auto& [a, b] : exclusive) {
            auto touches = [&](const std::set<std::string>& group) {
                return std::any_of(group.begin(), group.end(), [&](const auto& k) { return keys.count(k) > 0; });
            };
            if (touches(a))
                for (const auto& k : b) dst.erase(k);
            if (touches(b))
                for (const auto& k : a) dst.erase(k);
        }
        if (keys.count("alpha") && !keys.count("beta")) dst.erase("beta");
        for (const auto& [k, v] : keys) dst[k] = v;
    }
    return base;
}

RunConfig parse_config(const Sections& sections) {
    for (const auto& [name, keys] : sections) {
        if (!known_section(name)) throw ConfigError(name, fmt::format("unknown section [{}]", name));
        for (const auto& [key, value] : keys) {
            const char* sec = section_of(key);
            if (!sec || name != sec) throw ConfigError(key, fmt::format("unknown key '{}' in section [{}]", key, name));
        }
    }
    const Reader r(sections);
    const auto defaults = preset_base_params();
    RunConfig rc;

    // pulses
    auto pp = defaults.pulses.params();
    pp.omega01 = r.number("omega01_tau", pp.omega01);
    pp.omega02 = r.number("omega02_tau", pp.omega02);
    pp.separation = r.number("T_over_tau", pp.separation);
    pp.phase = r.number("delta_phase", pp.phase);
    pp.chirp1 = read_chirp(r, "chirp1_kind", "chi1", pp.chirp1);
    pp.chirp2 = read_chirp(r, "chirp2_kind", "chi2", pp.chirp2);
    for (const auto& [key, v] : {std::pair{"omega01_tau", pp.omega01}, std::pair{"omega02_tau", pp.omega02}})
        if (!(v >= 0.0)) throw ConfigError(key, fmt::format("{} = {} must be >= 0", key, v));
    const PulsePair pulses = with_key("pulses", [&] { return PulsePair(pp); });

    // detuning
    DetuningSpec detuning = defaults.detunings;
    if (r.has("delta_tau")) {
        if (r.has("delta1_tau") || r.has("delta2_tau"))
            throw ConfigError("delta_tau", "delta_tau cannot be combined with delta1_tau/delta2_tau");
        detuning = DetuningSpec::two_photon_resonant(*r.number("delta_tau"));
    } else if (r.has("delta1_tau") || r.has("delta2_tau")) {
        if (!(r.has("delta1_tau") && r.has("delta2_tau")))
            throw ConfigError(r.has("delta1_tau") ? "delta2_tau" : "delta1_tau",
                              "delta1_tau and delta2_tau must be given together");
        detuning = DetuningSpec(*r.number("delta1_tau"), *r.number("delta2_tau"));
    }

    // qubit
    InitialQubit qubit = defaults.initial;
    const double phi = r.number("phi", qubit.phi());
    if (r.has("g1") || r.has("g2")) {
        if (r.has("alpha") || r.has("beta")) throw ConfigError("g1", "g1/g2 cannot be combined with alpha/beta");
        qubit = with_key("g1, g2", [&] { return init_from_cw(r.number("g1", 0.0), r.number("g2", 0.0), phi); });
    } else if (r.has("alpha") && r.has("beta")) {
        qubit = with_key("alpha, beta", [&] { return InitialQubit(*r.number("alpha"), *r.number("beta"), phi); });
    } else if (r.has("alpha")) {
        qubit = with_key("alpha", [&] { return InitialQubit::from_alpha(*r.number("alpha"), phi); });
    } else if (r.has("beta")) {
        throw ConfigError("beta", "beta requires alpha");
    } else {
        qubit = InitialQubit(qubit.alpha(), qubit.beta(), phi);
    }

    // integration
    IntegrationWindow w;
    w.t_start = r.number("t_start_over_tau", w.t_start);
    w.t_end = r.number("t_end_over_tau", w.t_end);
    w.samples = r.count("samples", w.samples);
    w.rel_tol = r.number("rel_tol", w.rel_tol);
    w.abs_tol = r.number("abs_tol", w.abs_tol);
    if (!(w.t_start < w.t_end))
        throw ConfigError("t_start_over_tau, t_end_over_tau", "t_start_over_tau must be below t_end_over_tau");
    if (w.samples < 2) throw ConfigError("samples", "samples must be at least 2");
    if (!(w.rel_tol > 0.0)) throw ConfigError("rel_tol", "rel_tol must be > 0");
    if (!(w.abs_tol > 0.0)) throw ConfigError("abs_tol", "abs_tol must be > 0");
    with_key("integration", [&] { w.validate(); });

    SimulationConfig::Params sp;
    sp.pulses = pulses;
    sp.detunings = detuning;
    sp.initial = qubit;
    sp.window = w;
    rc.simulation = SimulationConfig(sp);

    // sweep
    if (r.has_section("sweep")) {
        if (!r.has("parameter")) throw ConfigError("parameter", "[sweep] needs 'parameter'");
        if (!r.has("grid")) throw ConfigError("grid", "[sweep] needs 'grid'");
        SweepAxis axis;
        axis.parameter = with_key("parameter", [&] { return sweep_parameter_from_string(trim(*r.text("parameter"))); });
        axis.grid = parse_grid(*r.text("grid"), "grid");
        std::optional<SweepAxis> series;
        if (r.has("series_parameter") || r.has("series_grid")) {
            if (!(r.has("series_parameter") && r.has("series_grid")))
                throw ConfigError("series_grid", "series_parameter and series_grid must be given together");
            SweepAxis s;
            s.parameter = with_key("series_parameter",
                                   [&] { return sweep_parameter_from_string(trim(*r.text("series_parameter"))); });
            s.grid = parse_grid(*r.text("series_grid"), "series_grid");
            series = s;
        }
        rc.sweep = with_key("grid", [&] { return SweepSpec(axis, rc.simulation, series); });
    }

    // stirap
    rc.stirap_scale = r.number("scale", rc.stirap_scale);
    if (!(rc.stirap_scale > 0.0)) throw ConfigError("scale", "scale must be > 0");
    rc.stirap_stop_time = r.number("stop_time_over_tau");

    // solve
    if (r.has_section("solve")) {
        ControlProblem::Params cp;
        cp.base = rc.simulation;
        if (!r.has("free")) throw ConfigError("free", "[solve] needs 'free'");
        cp.free = parse_free(*r.text("free"));
        if (r.has("target_g_re") || r.has("target_g_im") || r.has("target_f_re") || r.has("target_f_im")) {
            QubitVector t{{r.number("target_g_re", 0.0), r.number("target_g_im", 0.0)},
                          {r.number("target_f_re", 0.0), r.number("target_f_im", 0.0)}};
            // already-normalized input is kept bit for bit so manifests replay exactly
            cp.target = std::abs(t.norm() - 1.0) <= 1e-12 ? t : with_key("target_g_re", [&] { return t.normalized(); });
        } else if (r.has("target_alpha")) {
            cp.target = QubitVector::from(with_key("target_alpha", [&] {
                return InitialQubit::from_alpha(*r.number("target_alpha"), r.number("target_phi", 0.0));
            }));
        } else {
            throw ConfigError("target_alpha", "[solve] needs a target (target_alpha/target_phi or target_*_re/im)");
        }
        cp.leak_weight = r.number("leak_weight", cp.leak_weight);
        cp.grid_points = r.count("grid_points", cp.grid_points);
        cp.tolerance = r.number("tolerance", cp.tolerance);
        rc.control = with_key("free", [&] { return ControlProblem(cp); });
    }

    rc.adiabatic = r.flag("adiabatic", false);
    return rc;
}

Sections load_sections(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", fmt::format("cannot read config file '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("", fmt::format("malformed JSON config: {}", e.what()));
        }
        return sections_from_json(doc.contains("config") ? doc.at("config") : doc);
    }
    return parse_ini(text);
}

Sections to_sections(const RunConfig& rc) {
    Sections s;
    const auto& cfg = rc.simulation;
    const auto& p = cfg.pulses();
    s["pulses"] = {{"omega01_tau", format_double(p.omega01())},
                   {"omega02_tau", format_double(p.omega02())},
                   {"T_over_tau", format_double(p.separation())},
                   {"delta_phase", format_double(p.phase())},
                   {"chirp1_kind", std::string(to_string(p.chirp1().kind()))},
                   {"chi1", format_double(p.chirp1().chi())},
                   {"chirp2_kind", std::string(to_string(p.chirp2().kind()))},
                   {"chi2", format_double(p.chirp2().chi())}};
    s["detuning"] = {{"delta1_tau", format_double(cfg.detunings().delta1())},
                     {"delta2_tau", format_double(cfg.detunings().delta2())}};
    s["qubit"] = {{"alpha", format_double(cfg.initial().alpha())},
                  {"beta", format_double(cfg.initial().beta())},
                  {"phi", format_double(cfg.initial().phi())}};
    const auto& w = cfg.window();
    s["integration"] = {{"t_start_over_tau", format_double(w.t_start)},
                        {"t_end_over_tau", format_double(w.t_end)},
                        {"samples", std::to_string(w.samples)},
                        {"rel_tol", format_double(w.rel_tol)},
                        {"abs_tol", format_double(w.abs_tol)}};
    if (rc.sweep) {
        auto& sw = s["sweep"];
        sw["parameter"] = std::string(to_string(rc.sweep->axis().parameter));
        sw["grid"] = join_grid(rc.sweep->axis().grid);
        if (rc.sweep->series()) {
            sw["series_parameter"] = std::string(to_string(rc.sweep->series()->parameter));
            sw["series_grid"] = join_grid(rc.sweep->series()->grid);
        }
    }
    s["stirap"]["scale"] = format_double(rc.stirap_scale);
    if (rc.stirap_stop_time) s["stirap"]["stop_time_over_tau"] = format_double(*rc.stirap_stop_time);
    if (rc.control) {
        const auto& cp = rc.control->params();
        auto& so = s["solve"];
        so["target_g_re"] = format_double(cp.target.g.real());
        so["target_g_im"] = format_double(cp.target.g.imag());
        so["target_f_re"] = format_double(cp.target.f.real());
        so["target_f_im"] = format_double(cp.target.f.imag());
        std::string free;
        for (std::size_t k = 0; k < cp.free.size(); ++k)
            free += fmt::format("{}{}:{}:{}", k ? ", " : "", to_string(cp.free[k].parameter),
                                format_double(cp.free[k].lower), format_double(cp.free[k].upper));
        so["free"] = free;
        so["leak_weight"] = format_double(cp.leak_weight);
        so["grid_points"] = std::to_string(cp.grid_points);
        so["tolerance"] = format_double(cp.tolerance);
    }
    s["output"]["adiabatic"] = rc.adiabatic ? "true" : "false";
    return s;
}

nlohmann::json to_json(const Sections& sections) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, keys] : sections) {
        auto& obj = j[name] = nlohmann::json::object();
        for (const auto& [k, v] : keys) obj[k] = v;
    }
    return j;
}

std::string to_ini(const Sections& sections) {
    std::string out;
    for (const auto& [name, keys] : sections) {
        if (keys.empty()) continue;
        out += fmt::format("[{}]\n", name);
        for (const auto& [k, v] : keys) out += fmt::format("{} = {}\n", k, v);
    }
    return out;
}

RunConfig from_preset(const FigurePreset& preset) {
    RunConfig rc;
    rc.simulation = preset.config;
    rc.sweep = preset.sweep;
    return rc;
}

}  // namespace qrot
