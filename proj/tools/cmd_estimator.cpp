#include <filesystem>

#include "app_runner.hpp"
#include "cli.hpp"
#include "cli_util.hpp"
#include "densemap/image.hpp"
#include "densemap/raster_io.hpp"
#include "densemap/ridge.hpp"
#include "densemap/roi.hpp"

namespace fs = std::filesystem;

namespace densemap::cli {

int cmd_train_rr(const std::vector<std::string>& args, std::ostream& out) {
    const nlohmann::json cfg_file = load_config_arg(args);

    std::string images_dir, gt_dir, roi_path, out_path, config_path;
    int patch = 11, stride = 1;
    double lambda = 1.0;

    cfg_get(cfg_file, "images", images_dir);
    cfg_get(cfg_file, "gt", gt_dir);
    cfg_get(cfg_file, "roi", roi_path);
    cfg_get(cfg_file, "out", out_path);
    cfg_get(cfg_file, "patch", patch);
    cfg_get(cfg_file, "stride", stride);
    cfg_get(cfg_file, "lambda", lambda);

    CLI::App app{"Train the pixel-wise ridge density estimator",
                 "densemap train-rr"};
    app.add_option("--images", images_dir, "Training frames directory (PGM)")
        ->required(!cfg_file.contains("images"));
    app.add_option("--gt", gt_dir, "Ground-truth density maps directory (DMF1)")
        ->required(!cfg_file.contains("gt"));
    app.add_option("--out", out_path, "Output model file (RRM1)")
        ->required(!cfg_file.contains("out"));
    app.add_option("--config", config_path, "JSON config file (flags win)");
    app.add_option("--roi", roi_path, "ROI file (JSON polygon or DMF1)");
    app.add_option("--patch", patch, "Patch size, odd px")->capture_default_str();
    app.add_option("--lambda", lambda, "Ridge penalty")->capture_default_str();
    app.add_option("--stride", stride, "Training-pixel subsampling stride")
        ->capture_default_str();
    if (!parse_app(app, args, out)) return 0;

    const auto image_files = list_by_stem(images_dir, ".pgm");
    const auto gt_files = list_by_stem(gt_dir, ".dmf");
    const auto stems = paired_stems(image_files, gt_files, "image", "density");

    std::vector<GrayImage> images;
    std::vector<DensityMap> targets;
    for (const std::string& stem : stems) {
        images.push_back(read_pgm(image_files.at(stem)));
        targets.push_back(read_density_map(gt_files.at(stem)));
    }
    const RoiMask roi = roi_path.empty()
                            ? RoiMask::full(images[0].width, images[0].height)
                            : read_roi(roi_path, images[0].width, images[0].height);

    const RidgeModel model =
        train_ridge_on_frames(images, targets, roi, patch, lambda, stride);
    write_ridge_model(model, out_path);

    ManifestBuilder manifest;
    manifest.command = "train-rr";
    manifest.seed = 0;
    manifest.add_input_dir(images_dir, ".pgm");
    manifest.add_input_dir(gt_dir, ".dmf");
    if (!roi_path.empty()) manifest.add_input(roi_path);
    manifest.config = {{"images", images_dir}, {"gt", gt_dir},   {"roi", roi_path},
                       {"out", out_path},      {"patch", patch}, {"lambda", lambda},
                       {"stride", stride}};
    manifest.write_beside_file(out_path);

    out << "train-rr: fitted " << model.weights.size() << " weights from "
        << stems.size() << " frames -> " << out_path << "\n";
    return 0;
}

int cmd_predict(const std::vector<std::string>& args, std::ostream& out) {
    const nlohmann::json cfg_file = load_config_arg(args);

    std::string model_path, images_dir, roi_path, out_dir, config_path;
    int jobs = 1;

    cfg_get(cfg_file, "model", model_path);
    cfg_get(cfg_file, "images", images_dir);
    cfg_get(cfg_file, "roi", roi_path);
    cfg_get(cfg_file, "out", out_dir);
    cfg_get(cfg_file, "jobs", jobs);

    CLI::App app{"Predict density maps with a trained ridge model",
                 "densemap predict"};
    app.add_option("--model", model_path, "Model file (RRM1)")
        ->required(!cfg_file.contains("model"));
    app.add_option("--images", images_dir, "Frames directory (PGM)")
        ->required(!cfg_file.contains("images"));
    app.add_option("--out", out_dir, "Output directory (one DMF1 per frame)")
        ->required(!cfg_file.contains("out"));
    app.add_option("--config", config_path, "JSON config file (flags win)");
    app.add_option("--roi", roi_path, "ROI file (JSON polygon or DMF1)");
    app.add_option("--jobs", jobs, "Parallel frames")->capture_default_str();
    if (!parse_app(app, args, out)) return 0;

    const RidgeModel model = read_ridge_model(model_path);
    const auto image_files = list_by_stem(images_dir, ".pgm");
    if (image_files.empty())
        throw ValidationError("predict: no .pgm frames in " + images_dir);
    ensure_directory(out_dir);

    std::vector<std::pair<std::string, std::string>> items(image_files.begin(),
                                                           image_files.end());
    parallel_for(static_cast<std::int64_t>(items.size()), jobs, [&](std::int64_t i) {
        const GrayImage img = read_pgm(items[i].second);
        const RoiMask roi = roi_path.empty()
                                ? RoiMask::full(img.width, img.height)
                                : read_roi(roi_path, img.width, img.height);
        const DensityMap pred = predict_density(model, img, roi);
        write_density_map(pred,
                          (fs::path(out_dir) / (items[i].first + ".dmf")).string());
    });

    ManifestBuilder manifest;
    manifest.command = "predict";
    manifest.seed = 0;
    manifest.add_input(model_path);
    manifest.add_input_dir(images_dir, ".pgm");
    if (!roi_path.empty()) manifest.add_input(roi_path);
    manifest.config = {{"model", model_path},
                       {"images", images_dir},
                       {"roi", roi_path},
                       {"out", out_dir},
                       {"jobs", jobs}};
    manifest.write_beside_dir(out_dir);

    out << "predict: wrote " << items.size() << " density maps to " << out_dir
        << "\n";
    return 0;
}

} // namespace densemap::cli
