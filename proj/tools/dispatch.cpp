#include "cli.hpp"

#include <functional>
#include <map>

#include "cli_util.hpp"
#include "densemap/errors.hpp"

namespace densemap::cli {

std::string usage_text() {
    return "densemap " + std::string(kToolVersion) +
           " - density-map crowd analysis toolkit\n"
           "\n"
           "usage: densemap <subcommand> [options]\n"
           "\n"
           "subcommands:\n"
           "  simulate      generate a synthetic annotated scene (PGM frames,\n"
           "                annotations JSON, perspective DMF1)\n"
           "  synth         synthesize ground-truth density maps from dot annotations\n"
           "  train-rr      train the pixel-wise ridge density estimator\n"
           "  predict       predict density maps with a trained model\n"
           "  detect        recover object locations from density maps\n"
           "  track         correlation-filter tracking with optional density fusion\n"
           "  eval-count    counting MAE / MSE\n"
           "  eval-game     grid average absolute error (GAME) per level\n"
           "  eval-quality  scatter, BBDR, BBMAE, temporal MAD\n"
           "  eval-det      detection precision / recall / F1 and trajectory metrics\n"
           "  eval-track    tracking precision curve from a positions CSV\n"
           "  pipeline      simulate -> synth -> detect -> eval-det, one config file\n"
           "\n"
           "Run 'densemap <subcommand> --help' for flags. DENSEMAP_SEED provides\n"
           "the seed when no --seed flag or config value is given.\n";
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
    static const std::map<std::string,
                          std::function<int(const std::vector<std::string>&,
                                            std::ostream&)>>
        commands = {
            {"simulate", cmd_simulate},       {"synth", cmd_synth},
            {"train-rr", cmd_train_rr},       {"predict", cmd_predict},
            {"detect", cmd_detect},           {"track", cmd_track},
            {"eval-count", cmd_eval_count},   {"eval-game", cmd_eval_game},
            {"eval-quality", cmd_eval_quality}, {"eval-det", cmd_eval_det},
            {"eval-track", cmd_eval_track},   {"pipeline", cmd_pipeline},
        };

    if (args.empty() || args[0] == "--help" || args[0] == "-h" ||
        args[0] == "help") {
        (args.empty() ? err : out) << usage_text();
        return args.empty() ? 1 : 0;
    }
    const auto it = commands.find(args[0]);
    if (it == commands.end()) {
        err << "densemap: unknown subcommand '" << args[0] << "'\n\n"
            << usage_text();
        return 1;
    }
    try {
        return it->second(args, out);
    } catch (const IoError& e) {
        err << "densemap " << args[0] << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "densemap " << args[0] << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "densemap " << args[0] << ": unexpected error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace densemap::cli
