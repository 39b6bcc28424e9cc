#include "gemfrft/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace gemfrft {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw config_error("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw config_error("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw config_error("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::string to_string_val(const std::string& key, const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    // bare words allowed for enum-like values
    if (v.find_first_of(" \t\"[]") == std::string::npos) return v;
    throw config_error("config: key '" + key + "' expects a string, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& key, const std::string& v) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw config_error("config: key '" + key + "' expects a [list], got '" + v + "'");
    std::vector<std::string> items;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) items.push_back(tok);
    }
    return items;
}

using Setter = std::function<void(ConfigDoc&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& schema() {
    static const std::map<std::string, Setter> s = [] {
        std::map<std::string, Setter> m;
        auto num = [](double ConfigDoc::*field) {
            return [field](ConfigDoc& c, const std::string& k, const std::string& v) {
                c.*field = to_double(k, v);
            };
        };
        auto boolean = [](bool ConfigDoc::*field) {
            return [field](ConfigDoc& c, const std::string& k, const std::string& v) {
                c.*field = to_bool(k, v);
            };
        };
        auto str = [](std::string ConfigDoc::*field) {
            return [field](ConfigDoc& c, const std::string& k, const std::string& v) {
                c.*field = to_string_val(k, v);
            };
        };
        m["medium.d"] = num(&ConfigDoc::d);
        m["medium.gamma"] = num(&ConfigDoc::gamma);
        m["medium.gamma_s"] = num(&ConfigDoc::gamma_s);
        m["grid.n_z"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            const long x = to_int(k, v);
            if (x < 0) throw config_error("config: grid.n_z must be >= 0");
            c.n_z = static_cast<std::size_t>(x);
        };
        m["grid.dt"] = num(&ConfigDoc::dt);
        m["protocol.kind"] = str(&ConfigDoc::kind);
        m["protocol.theta_extra"] = num(&ConfigDoc::theta_extra);
        m["protocol.ft_sign"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            c.ft_sign = static_cast<int>(to_int(k, v));
        };
        m["protocol.input"] = str(&ConfigDoc::input);
        m["protocol.n"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            c.n = static_cast<int>(to_int(k, v));
        };
        m["protocol.m"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            c.m = static_cast<int>(to_int(k, v));
        };
        m["protocol.t_i"] = num(&ConfigDoc::t_i);
        m["protocol.kappa"] = num(&ConfigDoc::kappa);
        m["protocol.omega_gem"] = num(&ConfigDoc::omega_gem);
        m["protocol.chirp_scale_in"] = num(&ConfigDoc::chirp_scale_in);
        m["protocol.chirp_scale_out"] = num(&ConfigDoc::chirp_scale_out);
        m["protocol.hold"] = num(&ConfigDoc::hold);
        m["protocol.separation_sigma"] = num(&ConfigDoc::separation_sigma);
        m["protocol.dispersion"] = num(&ConfigDoc::dispersion);
        m["sweep.mode"] = str(&ConfigDoc::sweep_mode);
        m["sweep.protocols"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            c.sweep_protocols.clear();
            for (const auto& item : split_list(k, v))
                c.sweep_protocols.push_back(to_string_val(k, item));
        };
        m["sweep.theta_list"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            c.theta_list.clear();
            for (const auto& item : split_list(k, v)) c.theta_list.push_back(to_double(k, item));
        };
        m["sweep.n_list"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            c.n_list.clear();
            for (const auto& item : split_list(k, v))
                c.n_list.push_back(static_cast<int>(to_int(k, item)));
        };
        m["sweep.m"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            c.sweep_m = static_cast<int>(to_int(k, v));
        };
        m["sweep.m_list"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            c.m_list.clear();
            for (const auto& item : split_list(k, v))
                c.m_list.push_back(static_cast<int>(to_int(k, item)));
        };
        m["sweep.calibrate"] = boolean(&ConfigDoc::calibrate);
        m["sweep.out"] = str(&ConfigDoc::sweep_out);
        m["sweep.threads"] = [](ConfigDoc& c, const std::string& k, const std::string& v) {
            const long x = to_int(k, v);
            if (x < 0) throw config_error("config: sweep.threads must be >= 0");
            c.threads = static_cast<unsigned>(x);
        };
        m["output.directory"] = str(&ConfigDoc::out_dir);
        m["output.write_dumps"] = boolean(&ConfigDoc::write_dumps);
        m["output.write_wigner"] = boolean(&ConfigDoc::write_wigner);
        m["output.write_svg"] = boolean(&ConfigDoc::write_svg);
        return m;
    }();
    return s;
}

void apply_key(ConfigDoc& doc, const std::string& full_key, const std::string& value) {
    auto it = schema().find(full_key);
    if (it == schema().end())
        throw config_error("config: unknown key '" + full_key + "'");
    it->second(doc, full_key, trim(value));
}

void validate_doc(const ConfigDoc& c) {
    if (c.kind != "gem_eit" && c.kind != "gem_gem")
        throw config_error("config: protocol.kind must be gem_eit or gem_gem");
    if (c.input != "hg" && c.input != "gaussian_pair")
        throw config_error("config: protocol.input must be hg or gaussian_pair");
    if (c.sweep_mode != "eigenphase" && c.sweep_mode != "fidelity" &&
        c.sweep_mode != "efficiency_m")
        throw config_error("config: sweep.mode must be eigenphase, fidelity or efficiency_m");
    for (const auto& p : c.sweep_protocols)
        if (p != "gem_eit" && p != "gem_gem")
            throw config_error("config: sweep.protocols entries must be gem_eit or gem_gem");
    if (!(c.dt > 0.0)) throw config_error("config: grid.dt must be positive");
    if (c.d <= 0.0) throw config_error("config: medium.d must be positive");
    if (c.gamma < 0.0) throw config_error("config: medium.gamma must be >= 0");
    if (c.gamma_s < 0.0) throw config_error("config: medium.gamma_s must be >= 0");
    if (c.ft_sign != 1 && c.ft_sign != -1)
        throw config_error("config: protocol.ft_sign must be 1 or -1");
    if (c.n < 0 || c.m < 1 || c.n > c.m)
        throw config_error("config: need 0 <= protocol.n <= protocol.m, protocol.m >= 1");
    if (!(c.t_i > 0.0)) throw config_error("config: protocol.t_i must be positive");
    if (!(c.kappa > 0.0 && c.kappa <= 1.0))
        throw config_error("config: protocol.kappa must be in (0, 1]");
}

} // namespace

ConfigDoc parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    ConfigDoc doc;
    std::istringstream is(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: malformed section header at line " +
                                   std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "medium" && section != "grid" && section != "protocol" &&
                section != "sweep" && section != "output")
                throw config_error("config: unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw config_error("config: key '" + key + "' outside any section");
        apply_key(doc, section + "." + key, value);
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw config_error("config: override '" + ov + "' is not section.key=value");
        apply_key(doc, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    validate_doc(doc);
    return doc;
}

ConfigDoc load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream is(path);
    if (!is) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), overrides);
}

} // namespace gemfrft
