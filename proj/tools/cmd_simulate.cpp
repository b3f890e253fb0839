#include <filesystem>
#include <optional>

#include "app_runner.hpp"
#include "cli.hpp"
#include "cli_util.hpp"
#include "densemap/image.hpp"
#include "densemap/raster_io.hpp"
#include "densemap/simulator.hpp"

namespace fs = std::filesystem;

namespace densemap::cli {

int cmd_simulate(const std::vector<std::string>& args, std::ostream& out) {
    const nlohmann::json cfg_file = load_config_arg(args);

    SceneConfig scene;
    std::string out_dir;
    std::string config_path;
    bool distractor = false;
    std::optional<std::uint64_t> seed_flag;
    std::uint64_t seed_value = 0;

    cfg_get(cfg_file, "width", scene.width);
    cfg_get(cfg_file, "height", scene.height);
    cfg_get(cfg_file, "people", scene.n_people);
    cfg_get(cfg_file, "frames", scene.n_frames);
    cfg_get(cfg_file, "top_scale", scene.top_scale);
    cfg_get(cfg_file, "bottom_scale", scene.bottom_scale);
    cfg_get(cfg_file, "render_sigma", scene.person_render_sigma);
    cfg_get(cfg_file, "speed", scene.speed);
    cfg_get(cfg_file, "noise", scene.noise_sigma);
    cfg_get(cfg_file, "distractor", distractor);
    cfg_get(cfg_file, "out", out_dir);
    if (cfg_file.contains("seed")) seed_flag = cfg_file["seed"].get<std::uint64_t>();

    CLI::App app{"Generate a synthetic annotated crowd scene", "densemap simulate"};
    app.add_option("--out", out_dir, "Output directory")->required(!cfg_file.contains("out"));
    app.add_option("--config", config_path, "JSON config file (flags win)");
    app.add_option("--width", scene.width, "Frame width, px")->capture_default_str();
    app.add_option("--height", scene.height, "Frame height, px")->capture_default_str();
    app.add_option("--people", scene.n_people, "Number of people")->capture_default_str();
    app.add_option("--frames", scene.n_frames, "Number of frames")->capture_default_str();
    app.add_option("--top-scale", scene.top_scale, "Perspective scale at the top row")
        ->capture_default_str();
    app.add_option("--bottom-scale", scene.bottom_scale,
                   "Perspective scale at the bottom row")
        ->capture_default_str();
    app.add_option("--render-sigma", scene.person_render_sigma,
                   "Blob std at perspective scale 1, px")
        ->capture_default_str();
    app.add_option("--speed", scene.speed, "Mean speed, px/frame")->capture_default_str();
    app.add_option("--noise", scene.noise_sigma, "Additive image noise std")
        ->capture_default_str();
    app.add_flag("--distractor", distractor,
                 "Two-person converging/diverging scenario");
    auto* seed_opt =
        app.add_option("--seed", seed_value, "RNG seed (default: DENSEMAP_SEED or 1)");
    if (!parse_app(app, args, out)) return 0;

    if (seed_opt->count() > 0) seed_flag = seed_value;
    scene.seed = resolve_seed(seed_flag);
    ensure_directory(out_dir);

    const SimulatedScene result =
        distractor ? scenario_distractor(scene) : simulate_scene(scene);

    for (std::size_t t = 0; t < result.images.size(); ++t)
        write_pgm(result.images[t],
                  (fs::path(out_dir) / (frame_stem(static_cast<std::int64_t>(t)) + ".pgm"))
                      .string());
    write_annotations(result.annotations,
                      (fs::path(out_dir) / "annotations.json").string());
    write_perspective_map(result.perspective,
                          (fs::path(out_dir) / "perspective.dmf").string());

    ManifestBuilder manifest;
    manifest.command = "simulate";
    manifest.seed = scene.seed;
    manifest.config = {{"out", out_dir},
                       {"width", scene.width},
                       {"height", scene.height},
                       {"people", scene.n_people},
                       {"frames", scene.n_frames},
                       {"top_scale", scene.top_scale},
                       {"bottom_scale", scene.bottom_scale},
                       {"render_sigma", scene.person_render_sigma},
                       {"speed", scene.speed},
                       {"noise", scene.noise_sigma},
                       {"distractor", distractor},
                       {"seed", scene.seed}};
    manifest.write_beside_dir(out_dir);

    out << "simulate: wrote " << result.images.size() << " frames to " << out_dir
        << "\n";
    return 0;
}

} // namespace densemap::cli
