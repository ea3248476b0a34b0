#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ubamc {

/// FNV-1a 64-bit digest; every input file's digest is echoed on the
/// diagnostic stream so runs are attributable to exact bytes.
std::uint64_t fnv1a64(const std::string& bytes);

/// Whole tool behind a function so tests can drive it in-process. `args`
/// excludes the program name. Returns the process exit code:
///   0 success (including negative check verdicts, which are still
///     successful runs), 1 usage, 2 malformed input file, 3 precondition
///     violation, 4 internal invariant failure, 5 size cap.
/// Results go to `out`; version/digest echoes, warnings and errors go to
/// `err`. Identical args + files give byte-identical `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ubamc
