#pragma once

#include <filesystem>
#include <ostream>

#include "fastfix/accounting/reports.hpp"
#include "fastfix/cli/config.hpp"
#include "fastfix/curricula/schedule.hpp"
#include "fastfix/engine/trainer.hpp"

namespace fastfix::cli {

/// Environment variable that replaces `output_dir` when set.
inline constexpr const char* kOutputDirEnv = "FASTFIX_OUTPUT_DIR";

/// Applies the output-directory override from the environment.
void apply_env_overrides(RunConfig& config);

RunSummary summarize(const std::string& flags, const RunLog& log);

/// Each run writes run_config.json plus its metric files into output_dir.
RunSummary command_train(const RunConfig& config, std::ostream& log);
RunSummary command_stream(const RunConfig& config, std::ostream& log);
RunSummary command_federated(const RunConfig& config, std::ostream& log);

/// CSV rows t = 0..T inclusive: t, u_t, lambda_t, lr_t.
void write_schedule_csv(std::ostream& out, const ScheduleConfig& schedule, double lr0);

/// Rebuilds the run summary from a metrics stream and the run_config.json
/// written next to it.
RunSummary analyze_stream(const std::filesystem::path& jsonl,
                          const std::filesystem::path& run_config);

}  // namespace fastfix::cli
