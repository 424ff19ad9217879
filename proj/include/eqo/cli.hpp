#ifndef EQO_CLI_HPP
#define EQO_CLI_HPP

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eqo/reordering.hpp"

namespace eqo::cli {

/// Process exit codes; stable across releases.
enum ExitCode : int {
  kPass = 0,
  kInputError = 1,
  kDomainError = 2,
  kVerificationFailed = 3,
};

enum class OutputFormat { Json, Text };

/// Check names in report order.
inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> names{"symplectic", "block_relation", "reconstruct", "oracle", "appendix"};
  return names;
}

/// One resolved job: exactly one of the operator sources is set.
struct JobSpec {
  std::string source_label;
  std::optional<QuadraticGenerator<double>> generator;
  std::optional<TransferMatrix<double>> transfer;  // raw T, no generator available
  std::vector<std::string> checks;
  double tol = Tolerances{}.residual;
  int steps = 4000;
  OutputFormat format = OutputFormat::Json;
};

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eqo::cli

#endif  // EQO_CLI_HPP
