// nwfc command-line entry point: validate, gen, bench, serve, world info.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nwfc/bench.hpp"
#include "nwfc/error.hpp"
#include "nwfc/nested.hpp"
#include "nwfc/server.hpp"
#include "nwfc/solver.hpp"
#include "nwfc/tileset.hpp"
#include "nwfc/world.hpp"

namespace {

enum Exit { ok = 0, usage_or_io = 1, validation_negative = 2, generation_failed = 3 };

int exit_code_for(const std::string& code)
{
    if (code == "subgrid_unsat" || code == "budget_exceeded" || code == "contradiction" ||
        code == "overlap_mismatch") {
        return generation_failed;
    }
    return usage_or_io;
}

int fail(const std::string& code, const std::string& detail)
{
    std::cerr << "error:" << code << ": " << detail << '\n';
    return exit_code_for(code);
}

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("nwfc");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("NWFC_LOG");
    const std::string level = env ? env : "error";
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        spdlog::set_level(spdlog::level::err);
    }
}

nwfc::Tileset open_tileset(const std::string& spec)
{
    if (spec == "builtin:carcassonne") {
        return nwfc::carcassonne();
    }
    return nwfc::load_tileset(spec);
}

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw nwfc::Error("io", "cannot open '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw nwfc::Error("parse", "'" + path + "' is not valid JSON: " + ex.what());
    }
}

void write_file(const std::string& path, const std::string& data)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << data)) {
        throw nwfc::Error("io", "cannot write '" + path + "'");
    }
}

struct ValidateArgs {
    std::string file;
};

int run_validate(const ValidateArgs& args)
{
    const nwfc::Tileset ts = open_tileset(args.file);
    const auto report = nwfc::check_coverage(ts);
    std::cout << nwfc::to_json(report, ts).dump(2) << '\n';
    spdlog::info("{} tiles, sub_complete={}, complete={}", ts.size(), report.sub_complete, report.complete);
    return report.sub_complete ? ok : validation_negative;
}

struct GenArgs {
    std::string tileset;
    int width = 0;
    int height = 0;
    int chunk = 5;
    std::uint64_t seed = 0;
    std::uint64_t budget = nwfc::kDefaultBudget;
    std::string brush;
    std::string out;
    std::string ppm;
    std::string stats;
    int scale = 16;
    bool parallel = false;
};

int run_gen(const GenArgs& args)
{
    const nwfc::Tileset ts = open_tileset(args.tileset);
    const nwfc::SubgridPlan p = nwfc::plan(args.height, args.width, args.chunk);
    const nwfc::WeightField wf = args.brush.empty() ? nwfc::WeightField{} : nwfc::parse_brush(read_json(args.brush));

    nwfc::GenerateOptions options;
    options.budget = args.budget;
    options.schedule = args.parallel ? nwfc::Schedule::parallel : nwfc::Schedule::serial;
    const auto result = nwfc::generate(p, ts, wf, args.seed, options);
    if (!result.stats.tileset_sub_complete) {
        spdlog::warn("tileset '{}' is not sub-complete; sub-grids may fail", ts.name());
    }
    spdlog::info("generated {}x{} cells from {} sub-grids in {:.3f} s ({} interior backtracks)", p.M, p.N,
                 result.stats.subgrids, static_cast<double>(result.stats.elapsed_ns) * 1e-9,
                 result.stats.interior_backtracks);

    const std::string doc = nwfc::to_json(result.tiling).dump() + "\n";
    if (args.out.empty()) {
        std::cout << doc;
    } else {
        write_file(args.out, doc);
    }
    if (!args.ppm.empty()) {
        write_file(args.ppm, nwfc::render_ppm(result.tiling, ts, args.scale));
    }
    if (!args.stats.empty()) {
        write_file(args.stats, nwfc::to_json(result.stats).dump() + "\n");
    }
    return ok;
}

struct BenchArgs {
    std::string config;
    std::string out;
    std::string summary;
    int repeats = 0;
    bool parallel = false;
};

int run_bench(const BenchArgs& args)
{
    nwfc::BenchConfig cfg = args.config.empty() ? nwfc::BenchConfig{} : nwfc::bench_config_from_json(read_json(args.config));
    if (args.repeats > 0) {
        cfg.repeats = args.repeats;
    }
    cfg.parallel = cfg.parallel || args.parallel;
    cfg.validate();
    if (cfg.parallel) {
        spdlog::warn("parallel bench mode: contention between workers may inflate timing variance");
    }

    std::ofstream rows_out(args.out, std::ios::binary | std::ios::trunc);
    if (!rows_out) {
        throw nwfc::Error("io", "cannot write '" + args.out + "'");
    }
    rows_out << nwfc::rows_csv_header() << '\n';
    std::vector<nwfc::BenchRow> rows;
    nwfc::run_experiment(cfg, [&](const nwfc::BenchRow& r) {
        nwfc::write_row_csv(rows_out, r);
        rows_out.flush();
        rows.push_back(r);
        spdlog::debug("{} k={} {}x{} #{}: {} ns", nwfc::algorithm_name(r.algorithm), r.k, r.M, r.N, r.repeat,
                      r.elapsed_ns);
    });

    const auto summary = nwfc::summarize(rows);
    if (!args.summary.empty()) {
        std::ofstream s(args.summary, std::ios::binary | std::ios::trunc);
        if (!s) {
            throw nwfc::Error("io", "cannot write '" + args.summary + "'");
        }
        nwfc::write_summary_csv(s, summary);
    }
    for (auto alg : cfg.algorithms) {
        try {
            for (const auto& fit : nwfc::fit_scaling(summary, alg)) {
                spdlog::info("{} k={}: log-log slope {:.3f} over {} grid sizes", nwfc::algorithm_name(alg), fit.k,
                             fit.slope, fit.points);
            }
        } catch (const nwfc::Error& e) {
            spdlog::info("{}: no scaling fit ({})", nwfc::algorithm_name(alg), e.what());
        }
    }
    return ok;
}

struct ServeArgs {
    std::string tileset;
    std::uint64_t seed = 0;
    int port = 8080;
    int chunk = 5;
    std::string host = "127.0.0.1";
    std::string world_dir;
    std::string static_dir;
};

std::atomic<nwfc::Service*> g_service{nullptr};

extern "C" void on_signal(int)
{
    if (auto* s = g_service.load()) {
        s->stop();
    }
}

int run_serve(const ServeArgs& args)
{
    nwfc::Tileset ts = open_tileset(args.tileset);
    nwfc::WorldConfig cfg;
    cfg.world_seed = args.seed;
    cfg.C = args.chunk;
    cfg.tileset_hash = ts.hash();
    if (!args.world_dir.empty()) {
        cfg.save_dir = args.world_dir;
    }
    std::optional<std::filesystem::path> statics;
    if (!args.static_dir.empty()) {
        statics = args.static_dir;
    }
    nwfc::Service service(std::move(ts), cfg, statics);
    const int port = service.bind(args.host, args.port);
    spdlog::info("listening on http://{}:{}", args.host, port);
    std::cout << "listening on " << args.host << ':' << port << std::endl;
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    service.listen();
    g_service = nullptr;
    service.stop();
    return ok;
}

struct WorldArgs {
    std::string world_dir;
};

int run_world_info(const WorldArgs& args)
{
    std::cout << read_json((std::filesystem::path(args.world_dir) / "manifest.json").string()).dump(2) << '\n';
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();

    CLI::App app{"Nested wave function collapse: tileset validation, generation, benchmarks and a world server"};
    app.require_subcommand(1);

    ValidateArgs validate;
    auto* cmd_validate = app.add_subcommand("validate", "Report edge-pair coverage of a tileset");
    cmd_validate->add_option("file", validate.file, "Tileset JSON, or builtin:carcassonne")->required();

    GenArgs gen;
    auto* cmd_gen = app.add_subcommand("gen", "Generate an M x N map with nested WFC");
    cmd_gen->add_option("--tileset", gen.tileset, "Tileset JSON, or builtin:carcassonne")->required();
    cmd_gen->add_option("--width", gen.width, "Columns N")->required();
    cmd_gen->add_option("--height", gen.height, "Rows M")->required();
    cmd_gen->add_option("--chunk", gen.chunk, "Sub-grid side C")->capture_default_str();
    cmd_gen->add_option("--seed", gen.seed, "Generation seed")->required();
    cmd_gen->add_option("--budget", gen.budget, "Per-sub-grid step budget")->capture_default_str();
    cmd_gen->add_option("--brush", gen.brush, "Brush document JSON");
    cmd_gen->add_option("--out", gen.out, "Tiling JSON output (stdout when omitted)");
    cmd_gen->add_option("--ppm", gen.ppm, "Rendered P6 image output");
    cmd_gen->add_option("--scale", gen.scale, "Pixels per tile in the PPM")->capture_default_str();
    cmd_gen->add_option("--stats", gen.stats, "Generation stats JSON output");
    cmd_gen->add_flag("--parallel", gen.parallel, "Solve each anti-diagonal layer with OpenMP");

    BenchArgs bench;
    auto* cmd_bench = app.add_subcommand("bench", "Run the WFC vs nested WFC runtime experiment");
    cmd_bench->add_option("--config", bench.config, "Bench config JSON");
    cmd_bench->add_option("--out", bench.out, "Per-run CSV")->required();
    cmd_bench->add_option("--summary", bench.summary, "Mean/variance CSV");
    cmd_bench->add_option("--repeats", bench.repeats, "Override repeats");
    cmd_bench->add_flag("--parallel", bench.parallel, "Shard (k, grid) cells across threads");

    ServeArgs serve;
    auto* cmd_serve = app.add_subcommand("serve", "Serve the world and brush API over HTTP");
    cmd_serve->add_option("--tileset", serve.tileset, "Tileset JSON, or builtin:carcassonne")->required();
    cmd_serve->add_option("--seed", serve.seed, "World seed")->required();
    cmd_serve->add_option("--port", serve.port, "TCP port (0 picks one)")->capture_default_str();
    cmd_serve->add_option("--host", serve.host, "Bind address")->capture_default_str();
    cmd_serve->add_option("--chunk", serve.chunk, "Chunk side C")->capture_default_str();
    cmd_serve->add_option("--world-dir", serve.world_dir, "Directory for chunk files and the manifest");
    cmd_serve->add_option("--static", serve.static_dir, "Directory of UI assets served at /");

    WorldArgs world;
    auto* cmd_world = app.add_subcommand("world", "Inspect a saved world");
    cmd_world->require_subcommand(1);
    auto* cmd_world_info = cmd_world->add_subcommand("info", "Print the world manifest");
    cmd_world_info->add_option("--world-dir", world.world_dir, "World directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what());
    }

    try {
        if (*cmd_validate) return run_validate(validate);
        if (*cmd_gen) return run_gen(gen);
        if (*cmd_bench) return run_bench(bench);
        if (*cmd_serve) return run_serve(serve);
        if (*cmd_world_info) return run_world_info(world);
    } catch (const nwfc::Error& e) {
        return fail(e.code(), e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return fail("usage", "no subcommand");
}
