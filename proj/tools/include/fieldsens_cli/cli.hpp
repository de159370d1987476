#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fieldsens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitParse = 3;

/// Runs one invocation. `args` excludes the program name. Reports go to `out`
/// (or --output), warnings and single-line JSON errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct OperationBinding {
  std::string_view module;
  std::string_view operation;
  std::string_view subcommand;
};

/// Which subcommand exposes each engine operation.
std::span<const OperationBinding> operation_registry();

/// Subcommand names in help order.
std::span<const std::string_view> subcommands();

}  // namespace fieldsens::cli
