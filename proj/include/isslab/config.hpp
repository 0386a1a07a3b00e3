#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "isslab/envelopes.hpp"
#include "isslab/errors.hpp"
#include "isslab/scenario.hpp"

namespace isslab {

/// One `key = value` line of a scenario file.
struct ConfigEntry {
    std::string value;
    int line = 0;
};

/// Sectioned key-value file: `[section]` headers, `key = value` lines,
/// `#` comments. Keys are unique per section.
struct ConfigMap {
    std::map<std::string, std::map<std::string, ConfigEntry>> sections;

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        return s != sections.end() && s->second.count(key) > 0;
    }
    const ConfigEntry* find(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return (k == s->second.end()) ? nullptr : &k->second;
    }
    void set(const std::string& section, const std::string& key, const std::string& value) {
        sections[section][key] = ConfigEntry{value, 0};
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace detail

inline ConfigMap read_config_string(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unterminated section header");
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": empty section name");
            }
            map.sections[section]; // touch so empty sections are visible
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (section.empty()) {
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": key outside any [section]");
        }
        if (map.sections[section].count(key)) {
            throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key '" +
                                  key + "' in [" + section + "]");
        }
        map.sections[section][key] = ConfigEntry{value, line_no};
    }
    return map;
}

inline ConfigMap read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw ValidationError("config: cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_config_string(buf.str());
}

namespace detail {

/// Collects scenario-materialization problems so a config review reports
/// every issue at once.
class ConfigReader {
public:
    explicit ConfigReader(const ConfigMap& map) : map_(map) {}

    bool has(const std::string& sec, const std::string& key) const { return map_.has(sec, key); }

    std::string str(const std::string& sec, const std::string& key, const std::string& fallback) {
        mark(sec, key);
        const ConfigEntry* e = map_.find(sec, key);
        return e ? e->value : fallback;
    }

    double num(const std::string& sec, const std::string& key, double fallback) {
        mark(sec, key);
        const ConfigEntry* e = map_.find(sec, key);
        if (!e) return fallback;
        return parse_number(sec, key, *e);
    }

    int integer(const std::string& sec, const std::string& key, int fallback) {
        mark(sec, key);
        const ConfigEntry* e = map_.find(sec, key);
        if (!e) return fallback;
        char* end = nullptr;
        const long v = std::strtol(e->value.c_str(), &end, 10);
        if (end == e->value.c_str() || *end != '\0') {
            fail(*e, sec, key, "expected an integer, got '" + e->value + "'");
            return fallback;
        }
        return static_cast<int>(v);
    }

    std::vector<double> num_list(const std::string& sec, const std::string& key) {
        mark(sec, key);
        const ConfigEntry* e = map_.find(sec, key);
        std::vector<double> out;
        if (!e) return out;
        for (const auto& item : split_list(e->value)) {
            char* end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (end == item.c_str() || *end != '\0') {
                fail(*e, sec, key, "expected a number list, got '" + item + "'");
                return {};
            }
            out.push_back(v);
        }
        return out;
    }

    void fail_key(const std::string& sec, const std::string& key, const std::string& msg) {
        const ConfigEntry* e = map_.find(sec, key);
        if (e) {
            fail(*e, sec, key, msg);
        } else {
            errors_.push_back("[" + sec + "] " + key + ": " + msg);
        }
    }

    /// Any keys present in the file but never consumed. [sweep] keys are
    /// free-form section.key axes and are validated separately.
    void flag_unknown_keys(const std::set<std::string>& known_sections) {
        for (const auto& [sec, keys] : map_.sections) {
            if (!known_sections.count(sec)) {
                errors_.push_back("unknown section [" + sec + "]");
                continue;
            }
            if (sec == "sweep") continue;
            for (const auto& [key, entry] : keys) {
                if (!consumed_.count(sec + "\n" + key)) {
                    errors_.push_back("line " + std::to_string(entry.line) + ": unknown key '" +
                                      key + "' in [" + sec + "]");
                }
            }
        }
    }

    const std::vector<std::string>& errors() const { return errors_; }
    void add_error(std::string e) { errors_.push_back(std::move(e)); }

private:
    void mark(const std::string& sec, const std::string& key) {
        consumed_.insert(sec + "\n" + key);
    }

    double parse_number(const std::string& sec, const std::string& key, const ConfigEntry& e) {
        char* end = nullptr;
        const double v = std::strtod(e.value.c_str(), &end);
        if (end == e.value.c_str() || *end != '\0') {
            fail(e, sec, key, "expected a number, got '" + e.value + "'");
            return 0.0;
        }
        return v;
    }

    void fail(const ConfigEntry& e, const std::string& sec, const std::string& key,
              const std::string& msg) {
        errors_.push_back("line " + std::to_string(e.line) + ": [" + sec + "] " + key + ": " +
                          msg);
    }

    const ConfigMap& map_;
    std::set<std::string> consumed_;
    std::vector<std::string> errors_;
};

inline SpaceProfile profile_from(ConfigReader& r, const std::string& sec,
                                 const std::string& prefix) {
    const std::string kind = r.str(sec, prefix + "kind", "zero");
    if (kind == "zero") return SpaceProfile::zero();
    if (kind == "polynomial") {
        auto coeffs = r.num_list(sec, prefix + "coeffs");
        if (coeffs.empty()) {
            r.fail_key(sec, prefix + "coeffs", "polynomial profile needs coefficients");
            return SpaceProfile::zero();
        }
        return SpaceProfile::polynomial(std::move(coeffs));
    }
    if (kind == "sine_mode") {
        const double amplitude = r.num(sec, prefix + "amplitude", 1.0);
        const int mode = r.integer(sec, prefix + "mode", 1);
        if (mode < 1) {
            r.fail_key(sec, prefix + "mode", "mode must be >= 1");
            return SpaceProfile::zero();
        }
        return SpaceProfile::sine_mode(amplitude, mode);
    }
    if (kind == "table") {
        auto values = r.num_list(sec, prefix + "values");
        if (values.size() < 2) {
            r.fail_key(sec, prefix + "values", "table profile needs >= 2 samples");
            return SpaceProfile::zero();
        }
        return SpaceProfile::table(std::move(values));
    }
    r.fail_key(sec, prefix + "kind",
               "unknown profile kind '" + kind + "' (zero|polynomial|sine_mode|table)");
    return SpaceProfile::zero();
}

inline BoundarySignal boundary_from(ConfigReader& r, const std::string& sec,
                                    const std::string& prefix = "") {
    const std::string kind = r.str(sec, prefix + "kind", "zero");
    if (kind == "zero") return BoundarySignal::zero();
    if (kind == "constant") {
        return BoundarySignal::constant(r.num(sec, prefix + "amplitude", 0.0));
    }
    if (kind == "sinusoid") {
        return BoundarySignal::sinusoid(r.num(sec, prefix + "amplitude", 0.0),
                                        r.num(sec, prefix + "frequency", 1.0));
    }
    if (kind == "decaying_sinusoid") {
        const double decay = r.num(sec, prefix + "decay", 0.0);
        if (decay < 0.0) {
            r.fail_key(sec, prefix + "decay", "decay must be >= 0");
            return BoundarySignal::zero();
        }
        return BoundarySignal::decaying_sinusoid(r.num(sec, prefix + "amplitude", 0.0),
                                                 r.num(sec, prefix + "frequency", 1.0), decay);
    }
    if (kind == "table") {
        auto values = r.num_list(sec, prefix + "values");
        const double sample_dt = r.num(sec, prefix + "sample_dt", 0.0);
        if (values.size() < 2) {
            r.fail_key(sec, prefix + "values", "table signal needs >= 2 samples");
            return BoundarySignal::zero();
        }
        if (!(sample_dt > 0.0)) {
            r.fail_key(sec, prefix + "sample_dt", "table signal needs sample_dt > 0");
            return BoundarySignal::zero();
        }
        return BoundarySignal::table(std::move(values), sample_dt);
    }
    r.fail_key(sec, prefix + "kind",
               "unknown signal kind '" + kind +
                   "' (zero|constant|sinusoid|decaying_sinusoid|table)");
    return BoundarySignal::zero();
}

inline FieldSignal field_from(ConfigReader& r, const std::string& sec) {
    const std::string kind = r.str(sec, "kind", "zero");
    if (kind == "zero") return FieldSignal::zero();
    if (kind == "separable") {
        SpaceProfile g = profile_from(r, sec, "space.");
        BoundarySignal s = boundary_from(r, sec, "time.");
        return FieldSignal::separable(std::move(g), std::move(s));
    }
    if (kind == "traveling") {
        SpaceProfile g = profile_from(r, sec, "space.");
        return FieldSignal::traveling(std::move(g), r.num(sec, "speed", 0.0));
    }
    if (kind == "table") {
        r.fail_key(sec, "kind", "field tables are only constructible through the library API");
        return FieldSignal::zero();
    }
    r.fail_key(sec, "kind", "unknown field kind '" + kind + "' (zero|separable|traveling)");
    return FieldSignal::zero();
}

} // namespace detail

/// One sweep axis: every value the named key takes across the grid.
struct SweepAxis {
    std::string section;
    std::string key;
    std::vector<std::string> values;
};

struct ParsedConfig {
    Scenario scenario;
    std::vector<SweepAxis> sweep_axes;
};

/// Materialize a scenario from a parsed file, collecting every problem
/// (not just the first) before failing.
inline Scenario scenario_from_config(const ConfigMap& map) {
    detail::ConfigReader r(map);

    Scenario s;
    s.name = r.str("scenario", "name", "scenario");
    const std::string plant = r.str("scenario", "plant", "transport");
    if (plant == "transport") {
        s.plant = PlantKind::transport;
    } else if (plant == "burgers") {
        s.plant = PlantKind::burgers;
    } else if (plant == "reaction") {
        s.plant = PlantKind::reaction;
    } else if (plant == "closed_loop") {
        s.plant = PlantKind::closed_loop;
    } else {
        r.fail_key("scenario", "plant",
                   "unknown plant '" + plant + "' (transport|burgers|reaction|closed_loop)");
    }

    s.transport.mu = r.num("transport", "mu", 1.0);
    s.transport.m = r.num("transport", "m", 0.0);
    s.transport.n = r.num("transport", "n", 0.0);

    s.burgers.mu = r.num("burgers", "mu", 1.0);
    s.burgers.nu = r.num("burgers", "nu", 1.0);

    s.reaction.mu = r.num("reaction", "mu", 1.0);
    s.reaction.m = r.num("reaction", "m", 0.0);
    if (r.has("reaction", "a.kind")) {
        s.reaction.a = detail::profile_from(r, "reaction", "a.");
    }
    s.target_n = r.num("reaction", "target_n", 1.0);

    s.u0 = detail::profile_from(r, "u0", "");
    s.d = detail::boundary_from(r, "d");
    s.f = detail::field_from(r, "f");

    s.disc.n_cells = r.integer("discretization", "n_cells", 200);
    s.disc.dt = r.num("discretization", "dt", 1e-3);
    s.disc.t_final = r.num("discretization", "t_final", 5.0);
    s.disc.snapshot_stride = r.integer("discretization", "snapshot_stride", 10);

    s.verification.theorems = detail::split_list(r.str("verification", "theorems", ""));
    s.verification.p = r.num("verification", "p", 4.0);
    const std::string eps = r.str("verification", "epsilon", "auto");
    if (eps == "auto") {
        s.verification.epsilon.reset();
    } else {
        char* end = nullptr;
        const double v = std::strtod(eps.c_str(), &end);
        if (end == eps.c_str() || *end != '\0') {
            r.fail_key("verification", "epsilon", "expected a number or 'auto'");
        } else {
            s.verification.epsilon = v;
        }
    }
    s.verification.tol_rel = r.num("verification", "tolerance_rel", 0.02);
    s.verification.tol_abs = r.num("verification", "tolerance_abs", 1e-6);
    const std::string mode = r.str("verification", "subsystem_mode", "split");
    if (mode == "split") {
        s.verification.subsystems_on_original = false;
    } else if (mode == "original") {
        s.verification.subsystems_on_original = true;
    } else {
        r.fail_key("verification", "subsystem_mode", "expected 'split' or 'original'");
    }
    for (const auto& name : s.verification.theorems) {
        if (!parse_theorem_id(name)) {
            r.fail_key("verification", "theorems", "unknown estimate id '" + name + "'");
        }
    }

    r.flag_unknown_keys({"scenario", "transport", "burgers", "reaction", "u0", "d", "f",
                         "discretization", "verification", "sweep"});

    std::vector<std::string> errors = r.errors();
    for (const auto& e : s.validate()) errors.push_back(e);
    if (!errors.empty()) {
        std::string msg = "configuration invalid:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ValidationError(msg);
    }
    return s;
}

/// Sweep axes are `section.key = v1, v2, ...` entries under [sweep].
inline std::vector<SweepAxis> sweep_axes_from_config(const ConfigMap& map) {
    std::vector<SweepAxis> axes;
    auto it = map.sections.find("sweep");
    if (it == map.sections.end()) return axes;
    for (const auto& [key, entry] : it->second) {
        const auto dot = key.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
            throw ValidationError("line " + std::to_string(entry.line) +
                                  ": sweep keys use the form section.key");
        }
        SweepAxis axis;
        axis.section = key.substr(0, dot);
        axis.key = key.substr(dot + 1);
        axis.values = detail::split_list(entry.value);
        if (axis.values.empty()) {
            throw ValidationError("line " + std::to_string(entry.line) +
                                  ": sweep axis '" + key + "' has no values");
        }
        axes.push_back(std::move(axis));
    }
    return axes;
}

inline ParsedConfig parse_config(const std::string& path) {
    const ConfigMap map = read_config_file(path);
    ParsedConfig out;
    out.scenario = scenario_from_config(map);
    out.sweep_axes = sweep_axes_from_config(map);
    return out;
}

} // namespace isslab
