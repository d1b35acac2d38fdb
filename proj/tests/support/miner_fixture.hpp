#pragma once

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace fixrank::fixture {

/// Runs tests/fixtures/make_miner_repo.sh into `target`, which must not exist.
inline void build_miner_repo(const std::filesystem::path& source_dir, const std::filesystem::path& target) {
  auto script = source_dir / "tests" / "fixtures" / "make_miner_repo.sh";
  std::string cmd = "sh '" + script.string() + "' '" + target.string() + "' >/dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error("cannot build miner fixture repository");
}

}  // namespace fixrank::fixture
