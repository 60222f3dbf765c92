#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "more/error.hpp"
#include "more/trainer.hpp"

namespace more::cli {

// Bad flag, bad config key or bad config value. Exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Config-file keys merged with command-line flags (flags win).
struct RunConfig {
  TrainingConfig training;
  Objective objective = Objective::more;
  std::vector<std::filesystem::path> corpus;
  std::filesystem::path vocab;
  std::filesystem::path matrix;
  std::filesystem::path out_dir;
  std::filesystem::path export_path;
};

// Every key accepted by apply_setting and config files.
std::span<const std::string_view> config_keys();

// Throws UsageError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// `key = value` lines; blank lines and `#` comments ignored.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

// MORE_SEED if set, otherwise kDefaultSeed.
std::uint64_t default_seed();

/// Entry point shared by the executable and tests. `args[0]` is the program
/// name. Returns 0 on success, 1 on runtime errors and 2 on usage errors.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace more::cli
