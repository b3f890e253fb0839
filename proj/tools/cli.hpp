#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace densemap::cli {

/// Run one subcommand. args excludes the program name (args[0] is the
/// subcommand). Returns the process exit code: 0 success, 1 validation
/// error, 2 I/O error.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

int cmd_simulate(const std::vector<std::string>& args, std::ostream& out);
int cmd_synth(const std::vector<std::string>& args, std::ostream& out);
int cmd_train_rr(const std::vector<std::string>& args, std::ostream& out);
int cmd_predict(const std::vector<std::string>& args, std::ostream& out);
int cmd_detect(const std::vector<std::string>& args, std::ostream& out);
int cmd_track(const std::vector<std::string>& args, std::ostream& out);
int cmd_eval_count(const std::vector<std::string>& args, std::ostream& out);
int cmd_eval_game(const std::vector<std::string>& args, std::ostream& out);
int cmd_eval_quality(const std::vector<std::string>& args, std::ostream& out);
int cmd_eval_det(const std::vector<std::string>& args, std::ostream& out);
int cmd_eval_track(const std::vector<std::string>& args, std::ostream& out);
int cmd_pipeline(const std::vector<std::string>& args, std::ostream& out);

std::string usage_text();

} // namespace densemap::cli
