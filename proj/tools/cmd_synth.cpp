#include <filesystem>

#include "app_runner.hpp"
#include "cli.hpp"
#include "cli_util.hpp"
#include "densemap/raster_io.hpp"
#include "densemap/synthesis.hpp"

namespace fs = std::filesystem;

namespace densemap::cli {

int cmd_synth(const std::vector<std::string>& args, std::ostream& out) {
    const nlohmann::json cfg_file = load_config_arg(args);

    std::string ann_path, out_dir, perspective_path, config_path;
    std::string mode = "fixed";
    double sigma = 4.0, reference_scale = 1.0, truncation = 4.0;
    bool renormalize = true;
    int jobs = 1;

    cfg_get(cfg_file, "ann", ann_path);
    cfg_get(cfg_file, "out", out_dir);
    cfg_get(cfg_file, "sigma", sigma);
    cfg_get(cfg_file, "mode", mode);
    cfg_get(cfg_file, "perspective", perspective_path);
    cfg_get(cfg_file, "reference_scale", reference_scale);
    cfg_get(cfg_file, "truncation", truncation);
    cfg_get(cfg_file, "renormalize", renormalize);
    cfg_get(cfg_file, "jobs", jobs);

    CLI::App app{"Synthesize ground-truth density maps from dot annotations",
                 "densemap synth"};
    app.add_option("--ann", ann_path, "Annotation JSON file")
        ->required(!cfg_file.contains("ann"));
    app.add_option("--out", out_dir, "Output directory (one DMF1 per frame)")
        ->required(!cfg_file.contains("out"));
    app.add_option("--config", config_path, "JSON config file (flags win)");
    app.add_option("--sigma", sigma,
                   "Gaussian std, px (4 fits UCSD-like, 6 UCF-like, 10 TRANCOS-like "
                   "scenes)")
        ->capture_default_str();
    app.add_option("--mode", mode, "fixed | perspective")
        ->check(CLI::IsMember({"fixed", "perspective"}))
        ->capture_default_str();
    app.add_option("--perspective", perspective_path,
                   "Perspective DMF1 (required in perspective mode)");
    app.add_option("--reference-scale", reference_scale,
                   "Perspective value at which the std equals --sigma")
        ->capture_default_str();
    app.add_option("--truncation", truncation, "Kernel truncation radius, sigmas (>= 3)")
        ->capture_default_str();
    app.add_option("--renormalize", renormalize,
                   "Rescale each dot's truncated kernel to unit sum")
        ->capture_default_str();
    app.add_option("--jobs", jobs, "Parallel frames")->capture_default_str();
    if (!parse_app(app, args, out)) return 0;

    SynthesisConfig cfg;
    cfg.sigma = sigma;
    cfg.truncation_radius = truncation;
    cfg.reference_scale = reference_scale;
    cfg.normalization = renormalize ? DotNormalization::PerDotRenormalize
                                    : DotNormalization::None;
    if (mode == "perspective") {
        cfg.mode = SigmaMode::PerspectiveScaled;
        if (perspective_path.empty())
            throw ValidationError("synth: perspective mode needs --perspective");
        cfg.perspective = read_perspective_map(perspective_path);
    }
    cfg.validate();

    const DotAnnotations ann = parse_annotations(ann_path);
    ensure_directory(out_dir);

    parallel_for(static_cast<std::int64_t>(ann.frames.size()), jobs,
                 [&](std::int64_t i) {
                     const AnnotationFrame& frame = ann.frames[i];
                     const DensityMap map = synthesize_density(
                         ann, frame.frame_id, cfg, ann.width, ann.height);
                     write_density_map(
                         map, (fs::path(out_dir) / (frame_stem(frame.frame_id) + ".dmf"))
                                  .string());
                 });

    ManifestBuilder manifest;
    manifest.command = "synth";
    manifest.seed = 0; // deterministic, no randomness
    manifest.add_input(ann_path);
    if (!perspective_path.empty()) manifest.add_input(perspective_path);
    manifest.config = {{"ann", ann_path},
                       {"out", out_dir},
                       {"sigma", sigma},
                       {"mode", mode},
                       {"perspective", perspective_path},
                       {"reference_scale", reference_scale},
                       {"truncation", truncation},
                       {"renormalize", renormalize},
                       {"jobs", jobs}};
    manifest.write_beside_dir(out_dir);

    out << "synth: wrote " << ann.frames.size() << " density maps to " << out_dir
        << "\n";
    return 0;
}

} // namespace densemap::cli
