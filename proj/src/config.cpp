#include "hrnls/config.hpp"

#include "hrnls/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace hrnls {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc() || ptr != end) {
        throw ConfigError(std::string(key), "expected a number, got '" + t + "'");
    }
    return value;
}

long long parse_int(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(std::string(key), "expected an integer, got '" + t + "'");
    }
    return value;
}

std::size_t parse_count(std::string_view key, std::string_view text) {
    const long long v = parse_int(key, text);
    if (v < 0) throw ConfigError(std::string(key), "must be non-negative");
    return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + t + "'");
}

std::optional<double> parse_auto(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    if (t == "auto" || t == "none") return std::nullopt;
    return parse_double(key, t);
}

std::string format_auto(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("auto");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::string t = trim(text);
    if (t.empty()) return out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    return out;
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += format_double(values[i]);
    }
    return out;
}

const char* ic_kind(const InitialCondition& ic) {
    if (std::holds_alternative<SingleSoliton>(ic)) return "single_soliton";
    if (std::holds_alternative<TwoSoliton>(ic)) return "two_soliton";
    return "sech";
}

SolitonParams& soliton(RunConfig& c, int which, std::string_view key) {
    if (auto* one = std::get_if<SingleSoliton>(&c.problem.initial)) {
        if (which == 1) return one->s;
    } else if (auto* two = std::get_if<TwoSoliton>(&c.problem.initial)) {
        return which == 1 ? two->first : two->second;
    }
    throw ConfigError(std::string(key),
                      std::string("not used by initial condition ") + ic_kind(c.problem.initial));
}

std::optional<SolitonParams> soliton_of(const RunConfig& c, int which) {
    if (const auto* one = std::get_if<SingleSoliton>(&c.problem.initial)) {
        if (which == 1) return one->s;
        return std::nullopt;
    }
    if (const auto* two = std::get_if<TwoSoliton>(&c.problem.initial)) {
        return which == 1 ? two->first : two->second;
    }
    return std::nullopt;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::optional<std::string>(const RunConfig&)>;

struct Entry {
    std::string key;
    Setter set;
    Getter get;
};

template <typename Field>
Entry real(std::string key, Field field) {
    return {std::move(key),
            [field](RunConfig& c, std::string_view k, std::string_view v) {
                field(c) = parse_double(k, v);
            },
            [field](const RunConfig& c) -> std::optional<std::string> {
                return format_double(field(const_cast<RunConfig&>(c)));
            }};
}

template <typename Field>
Entry optional_real(std::string key, Field field) {
    return {std::move(key),
            [field](RunConfig& c, std::string_view k, std::string_view v) {
                field(c) = parse_auto(k, v);
            },
            [field](const RunConfig& c) -> std::optional<std::string> {
                return format_auto(field(const_cast<RunConfig&>(c)));
            }};
}

template <typename Field>
Entry integer(std::string key, Field field) {
    return {std::move(key),
            [field](RunConfig& c, std::string_view k, std::string_view v) {
                using T = std::remove_reference_t<decltype(field(c))>;
                if constexpr (std::is_same_v<T, std::size_t>) {
                    field(c) = parse_count(k, v);
                } else {
                    field(c) = static_cast<T>(parse_int(k, v));
                }
            },
            [field](const RunConfig& c) -> std::optional<std::string> {
                return std::to_string(field(const_cast<RunConfig&>(c)));
            }};
}

Entry soliton_entry(std::string key, int which, double SolitonParams::*member) {
    return {key,
            [which, member](RunConfig& c, std::string_view k, std::string_view v) {
                soliton(c, which, k).*member = parse_double(k, v);
            },
            [which, member](const RunConfig& c) -> std::optional<std::string> {
                if (auto s = soliton_of(c, which)) return format_double((*s).*member);
                return std::nullopt;
            }};
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e;
        e.push_back({"run.name",
                     [](RunConfig& c, std::string_view, std::string_view v) { c.name = trim(v); },
                     [](const RunConfig& c) -> std::optional<std::string> { return c.name; }});
        e.push_back({"run.mode",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         const auto t = trim(v);
                         if (t == "hr") c.mode = RunMode::HR;
                         else if (t == "r_only") c.mode = RunMode::ROnly;
                         else if (t == "uniform") c.mode = RunMode::Uniform;
                         else throw ConfigError(std::string(k), "expected hr, r_only or uniform");
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         return to_string(c.mode);
                     }});
        e.push_back(integer("run.cells", [](RunConfig& c) -> auto& { return c.fixed_cells; }));
        e.push_back(integer("run.seed_cells", [](RunConfig& c) -> auto& { return c.seed_cells; }));
        e.push_back(integer("run.max_init_iterations",
                            [](RunConfig& c) -> auto& { return c.max_init_iterations; }));
        e.push_back(integer("run.max_halvings", [](RunConfig& c) -> auto& { return c.max_halvings; }));
        e.push_back(real("run.min_dt", [](RunConfig& c) -> auto& { return c.min_dt; }));

        e.push_back(real("problem.q", [](RunConfig& c) -> auto& { return c.problem.q; }));
        e.push_back(real("problem.xl", [](RunConfig& c) -> auto& { return c.problem.left; }));
        e.push_back(real("problem.xr", [](RunConfig& c) -> auto& { return c.problem.right; }));
        e.push_back(real("problem.T", [](RunConfig& c) -> auto& { return c.problem.final_time; }));

        e.push_back({"ic.kind",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         const auto t = trim(v);
                         if (t == ic_kind(c.problem.initial)) return;
                         if (t == "single_soliton") c.problem.initial = SingleSoliton{};
                         else if (t == "two_soliton") c.problem.initial = TwoSoliton{};
                         else if (t == "sech") c.problem.initial = SechPulse{};
                         else throw ConfigError(std::string(k),
                                                "expected single_soliton, two_soliton or sech");
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         return ic_kind(c.problem.initial);
                     }});
        e.push_back(soliton_entry("ic.a1", 1, &SolitonParams::a));
        e.push_back(soliton_entry("ic.c1", 1, &SolitonParams::c));
        e.push_back(soliton_entry("ic.x01", 1, &SolitonParams::x0));
        e.push_back(soliton_entry("ic.a2", 2, &SolitonParams::a));
        e.push_back(soliton_entry("ic.c2", 2, &SolitonParams::c));
        e.push_back(soliton_entry("ic.x02", 2, &SolitonParams::x0));

        e.push_back(real("refine.rtol", [](RunConfig& c) -> auto& { return c.refine.rtol; }));
        e.push_back(real("refine.alpha", [](RunConfig& c) -> auto& { return c.refine.alpha; }));
        e.push_back(real("refine.beta", [](RunConfig& c) -> auto& { return c.refine.beta; }));
        e.push_back(real("refine.kappa", [](RunConfig& c) -> auto& { return c.refine.kappa; }));
        e.push_back(real("refine.maxfac", [](RunConfig& c) -> auto& { return c.refine.maxfac; }));
        e.push_back(real("refine.minfac_enrich",
                         [](RunConfig& c) -> auto& { return c.refine.minfac_enrich; }));
        e.push_back(real("refine.minfac_coarsen",
                         [](RunConfig& c) -> auto& { return c.refine.minfac_coarsen; }));
        e.push_back(optional_real("refine.gtol", [](RunConfig& c) -> auto& { return c.refine.gtol; }));
        e.push_back(integer("refine.max_equidistribution_iterations",
                            [](RunConfig& c) -> auto& {
                                return c.refine.max_equidistribution_iterations;
                            }));
        e.push_back({"refine.interpolation",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         const auto t = trim(v);
                         if (t == "cubic") c.refine.interpolation = Interpolation::Cubic;
                         else if (t == "linear") c.refine.interpolation = Interpolation::Linear;
                         else throw ConfigError(std::string(k), "expected cubic or linear");
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         return c.refine.interpolation == Interpolation::Cubic ? "cubic" : "linear";
                     }});

        e.push_back(real("control.etol", [](RunConfig& c) -> auto& { return c.control.etol; }));
        e.push_back(real("control.ktol", [](RunConfig& c) -> auto& { return c.control.ktol; }));
        e.push_back(optional_real("control.meshtol",
                                  [](RunConfig& c) -> auto& { return c.control.meshtol; }));
        e.push_back(optional_real("control.meshbal",
                                  [](RunConfig& c) -> auto& { return c.control.meshbal; }));
        e.push_back(real("control.safety", [](RunConfig& c) -> auto& { return c.control.safety; }));
        e.push_back(real("control.maxfac", [](RunConfig& c) -> auto& { return c.control.maxfac; }));
        e.push_back(real("control.minfac", [](RunConfig& c) -> auto& { return c.control.minfac; }));
        e.push_back(integer("control.newton_max_iters",
                            [](RunConfig& c) -> auto& { return c.control.newton_max_iters; }));
        e.push_back({"control.quasi_newton",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         c.control.quasi_newton = parse_bool(k, v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         return c.control.quasi_newton ? "true" : "false";
                     }});
        e.push_back(real("control.dt0", [](RunConfig& c) -> auto& { return c.control.dt0; }));

        e.push_back(real("meshsolve.tau", [](RunConfig& c) -> auto& { return c.meshsolve.tau; }));
        e.push_back(real("meshsolve.omega", [](RunConfig& c) -> auto& { return c.meshsolve.omega; }));
        e.push_back(integer("meshsolve.sweeps", [](RunConfig& c) -> auto& { return c.meshsolve.sweeps; }));

        e.push_back(real("monitor.gamma", [](RunConfig& c) -> auto& { return c.monitor.gamma; }));
        e.push_back(integer("monitor.p", [](RunConfig& c) -> auto& { return c.monitor.radius; }));
        e.push_back(optional_real("monitor.floor",
                                  [](RunConfig& c) -> auto& { return c.monitor.floor_override; }));

        e.push_back({"output.snapshots",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         c.output.snapshot_times = parse_list(k, v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         return format_list(c.output.snapshot_times);
                     }});
        e.push_back(integer("output.trajectory_stride",
                            [](RunConfig& c) -> auto& { return c.output.trajectory_stride; }));
        return e;
    }();
    return entries;
}

const Entry* find_entry(std::string_view key) {
    for (const auto& e : registry()) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

RunConfig single_soliton_base() {
    RunConfig c;
    c.problem.q = 1.0;
    c.problem.left = -30.0;
    c.problem.right = 70.0;
    c.problem.final_time = 30.0;
    c.problem.initial = SingleSoliton{SolitonParams{1.0, 1.0, 0.0}};
    c.refine.rtol = 1.5e-2;
    c.refine.alpha = 1.4;
    c.refine.beta = 0.8;
    c.control.etol = 5e-3;
    c.meshsolve.tau = 1e-3;
    c.output.snapshot_times = {10.0, 15.0, 20.0, 25.0};
    return c;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw ConfigError("", "cannot format number");
    return std::string(buf, ptr);
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "single_soliton", "single_soliton_tolprop", "two_soliton",
        "three_soliton",  "r_only_table6",          "uniform_baseline"};
    return names;
}

RunConfig make_preset(std::string_view name) {
    RunConfig c;
    if (name == "single_soliton") {
        c = single_soliton_base();
    } else if (name == "single_soliton_tolprop") {
        c = single_soliton_base();
        c.control.etol = 1e-8;
        c.control.quasi_newton = true;
        c.seed_cells = 33;
        c.output.snapshot_times = {};
        c.output.trajectory_stride = 0;
    } else if (name == "two_soliton") {
        c.problem.q = 1.0;
        c.problem.left = -20.0;
        c.problem.right = 80.0;
        c.problem.final_time = 45.0;
        c.problem.initial =
            TwoSoliton{SolitonParams{0.2, 1.0, 0.0}, SolitonParams{0.5, -0.2, 25.0}};
        c.refine.rtol = 1e-2;
        c.refine.alpha = 1.2;
        c.refine.beta = 0.8;
        c.control.etol = 5e-4;
        c.meshsolve.tau = 1e-2;
        c.output.snapshot_times = {5, 10, 15, 20, 25, 30, 35, 40};
    } else if (name == "three_soliton") {
        c.problem.q = 18.0;
        c.problem.left = -20.0;
        c.problem.right = 20.0;
        c.problem.final_time = 4.0;
        c.problem.initial = SechPulse{};
        c.refine.rtol = 1e-3;
        c.refine.alpha = 3.0;
        c.refine.beta = 0.4;
        c.control.etol = 5e-3;
        c.meshsolve.tau = 1e-3;
        c.monitor.floor_override = 1e-3;
        c.output.snapshot_times = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    } else if (name == "r_only_table6") {
        c = single_soliton_base();
        c.mode = RunMode::ROnly;
        c.fixed_cells = 50;
        c.problem.final_time = 1.0;
        c.control.etol = 1e-6;
        c.output.snapshot_times = {};
    } else if (name == "uniform_baseline") {
        c = single_soliton_base();
        c.mode = RunMode::Uniform;
        c.fixed_cells = 78;
        c.control.etol = 1e-6;
    } else {
        throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
    }
    c.name = std::string(name);
    return c;
}

RunConfig make_reference_config(const RunConfig& base) {
    RunConfig c = base;
    c.name = base.name + "_reference";
    c.mode = RunMode::Uniform;
    c.fixed_cells = 2000;
    c.control.etol = std::min(base.control.etol, 1e-7);
    c.control.meshtol.reset();
    c.control.meshbal.reset();
    c.output.trajectory_stride = 0;
    return c;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    const Entry* e = find_entry(trim(key));
    if (!e) throw ConfigError(trim(key), "unknown key");
    e->set(config, e->key, value);
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(trim(assignment), "override must have the form key=value");
    }
    apply_setting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

RunConfig parse_config_text(std::string_view text, const RunConfig& base) {
    std::vector<std::pair<std::string, std::string>> items;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno), "unterminated section header");
            }
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        items.emplace_back(std::move(key), trim(std::string_view(t).substr(eq + 1)));
    }

    RunConfig config = base;
    // preset and ic.kind reset dependent fields, so they go first
    for (const auto& [k, v] : items) {
        if (k == "preset") config = make_preset(v);
    }
    for (const auto& [k, v] : items) {
        if (k == "ic.kind") apply_setting(config, k, v);
    }
    for (const auto& [k, v] : items) {
        if (k == "preset" || k == "ic.kind") continue;
        apply_setting(config, k, v);
    }
    return config;
}

RunConfig parse_config_file(const std::filesystem::path& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), base);
}

std::string to_config_text(const RunConfig& config) {
    std::string out;
    for (const auto& e : registry()) {
        if (auto v = e.get(config)) out += e.key + " = " + *v + "\n";
    }
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& e : registry()) keys.push_back(e.key);
    return keys;
}

} // namespace hrnls
