#pragma once

namespace ncqp::cli {

/// Command-line entry point. Returns 0 on success, 2 on invalid input,
/// 3 when a numerical tolerance could not be met.
int run(int argc, char** argv);

} // namespace ncqp::cli
