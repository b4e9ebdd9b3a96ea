// Batch front-end: one subcommand per experiment, driven by JSON scenario files.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "impref/scenario.hpp"

namespace fs = std::filesystem;
using namespace impref;

namespace {

struct Job {
    fs::path file;  // empty: defaults only
    int exit_code = ExitPass;
    std::string log;
};

// Scenario files under dir (sorted) whose command matches, or all for "run".
std::vector<fs::path> scenario_files(const fs::path& dir, const std::string& command) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".json") continue;
        if (command != "run") {
            std::ifstream in(e.path());
            const auto j = nlohmann::json::parse(in, nullptr, false);
            if (j.is_discarded() || !j.is_object() || j.value("command", "") != command) continue;
        }
        out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void run_one(Job& job, const std::string& command, const RunOverrides& ov) {
    std::ostringstream log;
    try {
        Scenario s = job.file.empty() ? scenario_from_json({{"command", command}}, fs::current_path(), ov)
                                      : load_scenario(job.file, ov);
        if (command != "run" && s.command != command)
            throw InputError("scenario " + job.file.string() + " is a '" + s.command + "' scenario");
        if (!job.file.empty()) log << "== " << job.file.string() << '\n';
        const CommandReport r = run_scenario(s, log);
        job.exit_code = r.exit_code;
        log << "exit " << r.exit_code << (r.failing.empty() ? "" : " (" + r.failing + ")") << "; report in "
            << (s.out / "report.json").string() << '\n';
    } catch (const InputError& e) {
        job.exit_code = ExitInputError;
        log << "input error: " << e.what() << '\n';
    }
    job.log = log.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reflection-principle experiments for impedance obstacles"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out;
    std::uint64_t seed = 0;
    double tolerance_scale = 1.0;
    int jobs = 1;
    bool flip = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"verify-harmonic", "harmonic reflection suites: exactness, path independence, kernel, harmonicity, Cauchy data"},
        {"verify-helmholtz", "Helmholtz extension suites: plane wave, K invariance, lambda = 0, sectors, tiling"},
        {"solve", "forward impedance solve; writes the far-field CSV"},
        {"compare", "far-field uniqueness experiment for two obstacles"},
        {"plan-path", "gap classification and the reflection walk along an escape path"},
        {"run", "run every scenario in a file or directory, whatever its command"}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", scenario, "scenario JSON file, or a directory of them")->check(CLI::ExistingPath);
        sub->add_option("--out", out, "output directory (single scenario only)");
        sub->add_option("--seed", seed, "seed for randomized suites");
        sub->add_option("--tolerance-scale", tolerance_scale, "multiplies every tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
        sub->add_flag("--flip-kernel-sign", flip, "test hook: negate the reflection kernel phase");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ExitInputError;
    }
    std::string command;
    CLI::App* used = nullptr;
    for (CLI::App* s : subs)
        if (s->parsed()) {
            command = s->get_name();
            used = s;
        }

    RunOverrides ov;
    ov.tolerance_scale = tolerance_scale;
    ov.flip_kernel_sign = flip;
    if (used->count("--seed")) ov.seed = seed;

    std::vector<Job> work;
    const bool directory = !scenario.empty() && fs::is_directory(scenario);
    if (directory) {
        for (const fs::path& f : scenario_files(scenario, command)) work.push_back({f, ExitPass, {}});
        if (work.empty()) {
            std::cerr << "no '" << command << "' scenarios in " << scenario << '\n';
            return ExitInputError;
        }
        if (!out.empty()) {
            std::cerr << "--out applies to a single scenario; directory runs write to each scenario's own out\n";
            return ExitInputError;
        }
    } else {
        if (scenario.empty() && (command == "solve" || command == "compare" || command == "plan-path" || command == "run")) {
            std::cerr << command << " needs --scenario\n";
            return ExitInputError;
        }
        if (!out.empty()) ov.out = out;
        work.push_back({scenario, ExitPass, {}});
    }

    // independent scenarios run in parallel; a single scenario gets the threads itself
    const int workers = std::min<int>(jobs, static_cast<int>(work.size()));
    ov.jobs = directory ? std::max(1, jobs / std::max(1, workers)) : jobs;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) run_one(work[i], command, ov);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = ExitPass;
    for (const Job& j : work) {
        std::cout << j.log;
        code = std::max(code, j.exit_code);
    }
    return code;
}
