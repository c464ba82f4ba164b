#include "hrnls/config.hpp"
#include "hrnls/errors.hpp"
#include "hrnls/experiments.hpp"
#include "hrnls/output.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

namespace {

hrnls::RunConfig load(const std::string& preset, const std::string& file,
                      const std::vector<std::string>& overrides) {
    hrnls::RunConfig cfg;
    if (!preset.empty()) cfg = hrnls::make_preset(preset);
    if (!file.empty()) cfg = hrnls::parse_config_file(file, cfg);
    for (const auto& o : overrides) hrnls::apply_override(cfg, o);
    cfg.validate();
    return cfg;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        hrnls::RunConfig scratch;
        hrnls::apply_setting(scratch, "refine.rtol", item);
        out.push_back(scratch.refine.rtol);
    }
    if (out.empty()) throw hrnls::ConfigError("--rtol", "empty list");
    return out;
}

void error_line(const std::string& kind, const std::string& message) {
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
}

void summary(const hrnls::RunResult& r, const std::string& out) {
    const auto& c = r.counters;
    std::cout << r.config.name << ": N0=" << r.initial_cells << " NSTP=" << c.nstp
              << " NHR=" << c.nhr << " NMAX=" << c.nmax << " NMIN=" << c.nmin
              << " ETF=" << c.etf << " CTF=" << c.ctf;
    const double l2 = r.series.back().l2_error;
    if (!std::isnan(l2)) std::cout << " L2=" << l2;
    std::cout << " -> " << out << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hr-adaptive moving mesh solver for the cubic Schrodinger equation"};
    app.require_subcommand(1);

    std::string preset, file, out;
    std::vector<std::string> overrides;
    std::string rtols;
    std::size_t workers = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--preset", preset, "preset name");
        sub->add_option("--config", file, "key-value config file applied after the preset");
        sub->add_option("--set", overrides, "override key=value")->take_all();
        sub->add_option("--out", out, "output directory")->required();
    };

    auto* run_cmd = app.add_subcommand("run", "integrate one configuration");
    add_common(run_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep", "tolerance proportionality sweep over RTOL");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--rtol", rtols, "comma-separated RTOL values")->required();
    sweep_cmd->add_option("--workers", workers, "parallel runs (0 = all cores)");
    auto* ref_cmd = app.add_subcommand("reference", "uniform N=2000 reference run");
    add_common(ref_cmd);
    auto* presets_cmd = app.add_subcommand("presets", "list preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        error_line("UsageError", e.what());
        return 2;
    }

    try {
        if (presets_cmd->parsed()) {
            for (const auto& n : hrnls::preset_names()) std::cout << n << '\n';
            return 0;
        }
        const auto cfg = load(preset, file, overrides);
        if (run_cmd->parsed()) {
            const auto r = hrnls::run(cfg);
            hrnls::emit_results(r, out);
            summary(r, out);
        } else if (sweep_cmd->parsed()) {
            const auto rows = hrnls::tolerance_sweep(cfg, parse_list(rtols), workers);
            hrnls::write_sweep(rows, out);
            bool all_ok = true;
            for (const auto& r : rows) {
                std::cout << "rtol=" << r.rtol;
                if (r.ok) {
                    std::cout << " N0=" << r.initial_cells << " L2=" << r.final_l2_error
                              << " NSTP=" << r.counters.nstp << '\n';
                } else {
                    all_ok = false;
                    std::cout << " failed: " << r.error << '\n';
                    error_line(r.error_kind, r.error);
                }
            }
            return all_ok ? 0 : 1;
        } else if (ref_cmd->parsed()) {
            const auto r = hrnls::generate_reference(cfg, out);
            summary(r, out);
        }
    } catch (const hrnls::SolverError& e) {
        error_line(e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        error_line("Error", e.what());
        return 1;
    }
    return 0;
}
