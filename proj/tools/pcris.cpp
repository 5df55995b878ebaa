// pcris: run verification suites on the finite period-ring models and write a JSON report.
#include "pcris/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace pcris;

int main(int argc, char** argv) {
    CLI::App app{"Exact verification suites for finite period-ring models"};
    RunConfig cfg;
    std::string c_mode = "pi", out_path = "-", export_path;
    unsigned jobs = 1;
    bool list = false;

    app.set_config("--config", "", "flat key=value file; command-line flags win");
    app.add_option("--p", cfg.p, "prime")->capture_default_str();
    app.add_option("--n", cfg.n, "work modulo p^n")->capture_default_str();
    app.add_option("--m", cfg.m, "root level of the cyclotomic model")->capture_default_str();
    app.add_option("--d", cfg.d, "relative dimension")->capture_default_str();
    app.add_option("--r", cfg.r, "semistable depth")->capture_default_str();
    app.add_option("--c", c_mode, "one | pi")->check(CLI::IsMember({"one", "pi"}))->capture_default_str();
    app.add_option_function<std::uint32_t>("--deg-z", [&](std::uint32_t v) { cfg.D_z = v; }, "Z-degree cap (default 2p^m)");
    app.add_option_function<std::uint32_t>("--deg-x", [&](std::uint32_t v) { cfg.D_x = v; }, "X-degree cap (default 3)");
    app.add_option_function<std::int64_t>("--numerator-bound", [&](std::int64_t v) { cfg.numerator_bound = v; },
                                          "exponent numerator bound");
    app.add_option("--suite", cfg.suites, "suite to run (repeatable)")->check(CLI::IsMember(suite_names()));
    app.add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();
    app.add_option("--out", out_path, "report path, - for stdout")->capture_default_str();
    app.add_option("--jobs", jobs, "run suites concurrently")->capture_default_str();
    app.add_option("--export-matrices", export_path, "write the truncated module's operators as row col value text");
    app.add_flag("--list-suites", list, "print suite names and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (list) {
        for (const auto& s : suite_names()) std::cout << s << "\n";
        return 0;
    }

    Report rep;
    try {
        cfg.c = parse_cmode(c_mode);
        cfg.validate();
        if (!export_path.empty()) {
            const PeriodModel model(cfg.model_desc());
            std::ofstream f(export_path);
            if (!f) throw PreconditionError("cannot write " + export_path);
            f << TruncatedModule(model, model.desc().D_z, model.desc().D_x).export_text();
        }
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    rep = run_report(cfg, jobs);

    const std::string text = rep.json.dump(2) + "\n";
    if (out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        f << text;
    }
    for (const auto& [name, s] : rep.json["suites"].items())
        std::cerr << name << ": " << s["passed"] << " passed, " << s["failed"] << " failed\n";
    return rep.ok ? 0 : 1;
}
