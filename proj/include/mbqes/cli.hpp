#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mbqes/model.hpp"

namespace mbqes::cli {

enum ExitCode : int { ok = 0, config_error = 2, validation_failure = 3, internal_error = 4 };

// Malformed input; `field` names the offending flag or config key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// "key = value" lines, '#' starts a comment. Throws ConfigError on a line
// without '=' or a repeated key.
std::map<std::string, std::string> parse_config(std::string_view text);

// Model from model.r, model.s, model.k, model.w, model.wq[.i.j], model.g.
// Other keys must start with "sector.". Missing couplings default to zero.
ModelSpec model_from_config(const std::map<std::string, std::string>& entries);

// Applies a --wq value: "zero", "i.j=v,..." with 1-based indices, or the full
// upper triangle in row-major order.
void apply_quadratic(ModelSpec& model, std::string_view text);

// args excludes the program name. Results go to `out` (or the --out file),
// diagnostics to `err`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mbqes::cli
